//! Integer partitions, Durfee squares, and the bijections behind the
//! factorization of the nodal Cohen–Lenstra series.
//!
//! Partitions are stored dense (explicit part lists); `a_i` multiplicities
//! are computed on demand. Enumeration is deterministic: size ascending,
//! lexicographically descending within one size, so streams can be frozen
//! in golden tests.

use crate::qseries::{
    inverse_pochhammer_table, pochhammer_fin_series, q_binomial, QSeriesError, TruncSeries,
};
use crate::scalar::{Scalar, TSeries};
use num_rational::BigRational;
use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("malformed pieces: {0}")]
    MalformedPieces(String),
}

/// A partition: a nonincreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p >= 1),
            "parts must be nonincreasing positive integers"
        );
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Part at 1-based row `i`, zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 || i > self.parts.len() {
            0
        } else {
            self.parts[i - 1]
        }
    }

    /// Number of parts equal to `i`.
    pub fn multiplicity(&self, i: u32) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// Conjugate (transpose of the Young diagram).
    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let parts = (1..=cols)
            .map(|i| self.parts.iter().filter(|&&p| p as usize >= i).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Side of the Durfee square: `max { k : part(k) >= k }`.
    pub fn durfee_side(&self) -> u32 {
        let mut k = 0u32;
        while self.part(k as usize + 1) >= k + 1 {
            k += 1;
        }
        k
    }

    /// Iterated Durfee sides: the square of the rows strictly below the
    /// previous square, until nothing is left. Empty profile for the empty
    /// partition.
    pub fn durfee_profile(&self) -> DurfeeProfile {
        let mut sides = Vec::new();
        let mut cur = self.clone();
        loop {
            let k = cur.durfee_side();
            if k == 0 {
                break;
            }
            sides.push(k);
            cur = Partition::new(cur.parts[k as usize..].to_vec());
        }
        DurfeeProfile { sides }
    }
}

// JSON form: a plain integer array
impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        if !parts.windows(2).all(|w| w[0] >= w[1]) || parts.iter().any(|&p| p == 0) {
            return Err(D::Error::custom(
                "partition parts must be nonincreasing positive integers",
            ));
        }
        Ok(Partition { parts })
    }
}

/// Iterated Durfee square sides `(sigma_1, sigma_2, ...)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DurfeeProfile {
    pub sides: Vec<u32>,
}

/// A partition with zeros: nonincreasing nonnegative integers whose length
/// (zeros included) is part of the data.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct PartitionWithZeros {
    parts: Vec<u32>,
}

impl PartitionWithZeros {
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be nonincreasing"
        );
        PartitionWithZeros { parts }
    }

    /// Pad a partition with zeros up to a declared length.
    pub fn from_partition(p: &Partition, len: usize) -> Self {
        assert!(len >= p.len());
        let mut parts = p.parts().to_vec();
        parts.resize(len, 0);
        PartitionWithZeros { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn part(&self, i: usize) -> u32 {
        if i == 0 || i > self.parts.len() {
            0
        } else {
            self.parts[i - 1]
        }
    }

    /// The underlying partition, zeros dropped.
    pub fn strip_zeros(&self) -> Partition {
        Partition::new(self.parts.iter().copied().filter(|&p| p > 0).collect())
    }

    pub fn durfee_side(&self) -> u32 {
        self.strip_zeros().durfee_side()
    }
}

// JSON form: {"parts": [...], "length": n}; the length is the data that
// distinguishes (3,1) from (3,1,0,0)
impl Serialize for PartitionWithZeros {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            parts: &'a [u32],
            length: usize,
        }
        Repr {
            parts: &self.parts,
            length: self.parts.len(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartitionWithZeros {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            parts: Vec<u32>,
            length: usize,
        }
        let repr = Repr::deserialize(d)?;
        if !repr.parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(D::Error::custom("parts must be nonincreasing"));
        }
        if repr.length < repr.parts.len() {
            return Err(D::Error::custom("length below the number of listed parts"));
        }
        let mut parts = repr.parts;
        parts.resize(repr.length, 0);
        Ok(PartitionWithZeros { parts })
    }
}

/// All partitions of exact size `n`, optionally bounded in length and
/// largest part, in lexicographically descending order.
pub fn partitions_of(n: u32, max_length: Option<usize>, max_part: Option<u32>) -> Vec<Partition> {
    let max_len = max_length.unwrap_or(n as usize);
    let max_part = max_part.unwrap_or(n).min(n.max(1));
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn rec(
        remaining: u32,
        cap: u32,
        slots: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition::new(current.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        let hi = cap.min(remaining);
        for p in (1..=hi).rev() {
            // even filling every remaining slot with p must reach `remaining`
            if (p as u64) * (slots as u64) < remaining as u64 {
                break;
            }
            current.push(p);
            rec(remaining - p, p, slots - 1, current, out);
            current.pop();
        }
    }
    if n == 0 {
        out.push(Partition::empty());
    } else if max_len > 0 && max_part > 0 {
        rec(n, max_part, max_len, &mut current, &mut out);
    }
    out
}

/// All partitions of every size `0..=max_size` under the same bounds,
/// size ascending.
pub fn partitions_up_to(
    max_size: u32,
    max_length: Option<usize>,
    max_part: Option<u32>,
) -> Vec<Partition> {
    (0..=max_size)
        .flat_map(|n| partitions_of(n, max_length, max_part))
        .collect()
}

/// All partitions whose diagram fits in a `rows x cols` box.
pub fn partitions_in_box(rows: usize, cols: u32) -> Vec<Partition> {
    partitions_up_to(rows as u32 * cols, Some(rows), Some(cols))
}

/// All partitions with zeros of length `<= max_length`, parts `<= max_part`,
/// size `<= max_size`, ordered by length, then size, then lex-descending.
pub fn partitions_with_zeros_up_to(
    max_size: u32,
    max_length: usize,
    max_part: u32,
) -> Vec<PartitionWithZeros> {
    let mut out = Vec::new();
    for len in 0..=max_length {
        for p in partitions_up_to(max_size, Some(len), Some(max_part)) {
            out.push(PartitionWithZeros::from_partition(&p, len));
        }
    }
    out
}

/// Split off the first Durfee square: returns the side `k`, the partition
/// to the right of the square (rows `1..=k` truncated by `k` columns) and
/// the rows below the square.
pub fn split_first_durfee(lambda: &Partition) -> (u32, Partition, Partition) {
    let k = lambda.durfee_side() as usize;
    let right = Partition::new(
        (1..=k)
            .map(|i| lambda.part(i) - k as u32)
            .filter(|&p| p > 0)
            .collect(),
    );
    let below = Partition::new(lambda.parts()[k..].to_vec());
    (k as u32, right, below)
}

/// Inverse of [`split_first_durfee`]: rebuilds the unique partition with
/// Durfee side `k`, `right` to the right of the square and `below` under it.
pub fn reassemble_first_durfee(
    k: u32,
    right: &Partition,
    below: &Partition,
) -> Result<Partition, PartitionError> {
    if right.len() > k as usize {
        return Err(PartitionError::MalformedPieces(format!(
            "right piece has {} rows, square side is {k}",
            right.len()
        )));
    }
    if below.part(1) > k {
        return Err(PartitionError::MalformedPieces(format!(
            "below piece has parts up to {}, square side is {k}",
            below.part(1)
        )));
    }
    let mut parts: Vec<u32> = (1..=k as usize).map(|i| k + right.part(i)).collect();
    parts.extend_from_slice(below.parts());
    Ok(Partition::new(parts))
}

/// Split a partition with zeros along its first two Durfee squares.
///
/// Returns `(k, l, lambda1, lambda2, rest)` where `k, l` are the first two
/// Durfee sides, `lambda1` (at most `k` rows) sits right of the first
/// square, `lambda2` (at most `l` rows, parts `<= k - l`) right of the
/// second, and `rest` is the partition with zeros below the second square
/// (parts `<= l`). Lengths satisfy `len = k + l + len(rest)` and sizes
/// `size = k^2 + l^2 + |lambda1| + |lambda2| + |rest|`.
pub fn split_two_durfee(
    lambda: &PartitionWithZeros,
) -> (u32, u32, Partition, Partition, PartitionWithZeros) {
    let k = lambda.durfee_side() as usize;
    let lambda1 = Partition::new(
        (1..=k)
            .map(|i| lambda.part(i) - k as u32)
            .filter(|&p| p > 0)
            .collect(),
    );
    let below = PartitionWithZeros::new(lambda.parts()[k..].to_vec());
    let l = below.durfee_side() as usize;
    let lambda2 = Partition::new(
        (1..=l)
            .map(|i| below.part(i) - l as u32)
            .filter(|&p| p > 0)
            .collect(),
    );
    let rest = PartitionWithZeros::new(below.parts()[l..].to_vec());
    (k as u32, l as u32, lambda1, lambda2, rest)
}

/// Inverse of [`split_two_durfee`].
pub fn reassemble_two_durfee(
    k: u32,
    l: u32,
    lambda1: &Partition,
    lambda2: &Partition,
    rest: &PartitionWithZeros,
) -> Result<PartitionWithZeros, PartitionError> {
    if l > k {
        return Err(PartitionError::MalformedPieces(format!(
            "need k >= l, got k={k}, l={l}"
        )));
    }
    if lambda1.len() > k as usize {
        return Err(PartitionError::MalformedPieces(
            "first piece taller than the first square".into(),
        ));
    }
    if lambda2.len() > l as usize || lambda2.part(1) > k - l {
        return Err(PartitionError::MalformedPieces(
            "second piece does not fit in l x (k-l)".into(),
        ));
    }
    if rest.part(1) > l {
        return Err(PartitionError::MalformedPieces(
            "rest has parts wider than the second square".into(),
        ));
    }
    let mut parts: Vec<u32> = (1..=k as usize).map(|i| k + lambda1.part(i)).collect();
    parts.extend((1..=l as usize).map(|i| l + lambda2.part(i)));
    parts.extend_from_slice(rest.parts());
    Ok(PartitionWithZeros::new(parts))
}

/// Outcome of one generating-function comparison: an enumerative sum
/// against a closed form, coefficient by coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct GenFnReport {
    pub family: String,
    pub equal: bool,
    pub first_mismatch: Option<String>,
}

fn report<L: PartialEq + std::fmt::Debug>(
    family: &str,
    pairs: impl Iterator<Item = (String, L, L)>,
) -> GenFnReport {
    for (label, lhs, rhs) in pairs {
        if lhs != rhs {
            return GenFnReport {
                family: family.into(),
                equal: false,
                first_mismatch: Some(format!("{label}: {lhs:?} != {rhs:?}")),
            };
        }
    }
    GenFnReport {
        family: family.into(),
        equal: true,
        first_mismatch: None,
    }
}

fn replace_coeff(s: TSeries, d: usize, c: BigRational) -> TSeries {
    let mut coeffs = s.coeffs().to_vec();
    coeffs[d] = c;
    TSeries::from_coeffs(coeffs)
}

/// `sum_(len(lambda) <= k) t^|lambda| == 1/(t;t)_k`, both sides mod `t^(T+1)`.
pub fn genfn_bounded_length(k: usize, t_trunc: usize) -> Result<GenFnReport, QSeriesError> {
    let t = TSeries::t(t_trunc);
    let closed = inverse_pochhammer_table(k, &t)?.pop().expect("nonempty");
    let mut sum = TSeries::zero(t_trunc);
    for lam in partitions_up_to(t_trunc as u32, Some(k), None) {
        let d = lam.size() as usize;
        let c = sum.coeff(d) + BigRational::one();
        sum = replace_coeff(sum, d, c);
    }
    Ok(report(
        &format!("length<={k}"),
        (0..=t_trunc).map(|d| (format!("t^{d}"), sum.coeff(d), closed.coeff(d))),
    ))
}

/// `sum_(lambda in (n-k) x k box) t^|lambda| == [n,k]_t`.
pub fn genfn_box(n: usize, k: usize, t_trunc: usize) -> Result<GenFnReport, QSeriesError> {
    let t = TSeries::t(t_trunc);
    let closed = q_binomial(n, k, &t)?;
    let mut sum = TSeries::zero(t_trunc);
    for lam in partitions_in_box(n - k, k as u32) {
        let d = lam.size() as usize;
        if d <= t_trunc {
            let c = sum.coeff(d) + BigRational::one();
            sum = replace_coeff(sum, d, c);
        }
    }
    Ok(report(
        &format!("box({},{k})", n - k),
        (0..=t_trunc).map(|d| (format!("t^{d}"), sum.coeff(d), closed.coeff(d))),
    ))
}

/// Partitions with zeros, parts `<= k`, weighted `t^|lambda| x^len`:
/// equals `1/((1-x)(1-tx)...(1-t^k x))`.
pub fn genfn_with_zeros(
    k: u32,
    x_order: usize,
    t_trunc: usize,
) -> Result<GenFnReport, QSeriesError> {
    let t = TSeries::t(t_trunc);
    let x = TruncSeries::monomial(x_order, 1, TSeries::one(t_trunc));
    let closed = pochhammer_fin_series(&x, &t, k as usize + 1).invert()?;
    let mut sum = TruncSeries::zero(x_order, &TSeries::zero(t_trunc));
    for lam in partitions_with_zeros_up_to(t_trunc as u32, x_order, k) {
        let d = lam.size() as usize;
        let len = lam.len();
        if d <= t_trunc {
            let cd = sum.coeff(len).coeff(d) + BigRational::one();
            let c = replace_coeff(sum.coeff(len).clone(), d, cd);
            sum.set_coeff(len, c);
        }
    }
    Ok(report(
        &format!("with-zeros parts<={k}"),
        (0..=x_order).flat_map(|n| {
            let s = sum.coeff(n).clone();
            let c = closed.coeff(n).clone();
            (0..=t_trunc).map(move |d| (format!("x^{n} t^{d}"), s.coeff(d), c.coeff(d)))
        }),
    ))
}

/// Enumerative re-derivation of the two-Durfee factorization step.
///
/// Sums `t^(|lambda| - sigma_1^2) x^len` over partitions with zeros,
/// stratified by the first two Durfee sides `(k, l)`, and compares each
/// stratum against its closed-form term
/// `t^(l^2) x^(k+l) / (t;t)_k * [k,l]_t / ((1-x)...(1-t^l x))`
/// term by term; the total is also compared against the global nodal
/// series. Every comparison is at truncation `(x_order, t_trunc)`.
pub fn durfee_factorization_report(
    x_order: usize,
    t_trunc: usize,
) -> Result<(GenFnReport, GenFnReport), QSeriesError> {
    let t = TSeries::t(t_trunc);
    let zero = TSeries::zero(t_trunc);

    // enumeration, stratified by the first two Durfee sides; a part of
    // size p contributes at least p - sigma_1 cells outside the square,
    // so parts <= t_trunc + x_order suffice
    let max_part = (t_trunc + x_order) as u32;
    let max_size = t_trunc as u32 + (x_order as u32).pow(2);
    let mut strata: std::collections::BTreeMap<(u32, u32), TruncSeries<TSeries>> =
        std::collections::BTreeMap::new();
    let mut direct = TruncSeries::zero(x_order, &zero);
    for lam in partitions_with_zeros_up_to(max_size, x_order, max_part) {
        let weight = (lam.size() - lam.durfee_side().pow(2)) as usize;
        if weight <= t_trunc {
            let (k, l, _, _, _) = split_two_durfee(&lam);
            let len = lam.len();
            let entry = strata
                .entry((k, l))
                .or_insert_with(|| TruncSeries::zero(x_order, &zero));
            let cd = entry.coeff(len).coeff(weight) + BigRational::one();
            let c = replace_coeff(entry.coeff(len).clone(), weight, cd);
            entry.set_coeff(len, c);
            let cd = direct.coeff(len).coeff(weight) + BigRational::one();
            let c = replace_coeff(direct.coeff(len).clone(), weight, cd);
            direct.set_coeff(len, c);
        }
    }

    // per-stratum closed form, k + l <= x_order
    let x = TruncSeries::monomial(x_order, 1, TSeries::one(t_trunc));
    let inv_poch = inverse_pochhammer_table(x_order, &t)?;
    let empty = TruncSeries::zero(x_order, &zero);
    let mut term_rows = Vec::new();
    for k in 0..=x_order {
        for l in 0..=k.min(x_order.saturating_sub(k)) {
            let geom = pochhammer_fin_series(&x, &t, l + 1).invert()?;
            let scalar = t.pow(l * l).mul(&inv_poch[k]).mul(&q_binomial(k, l, &t)?);
            let term = geom.scale(&scalar).mul_xpow(k + l);
            let enumerated = strata.get(&(k as u32, l as u32)).unwrap_or(&empty);
            for n in 0..=x_order {
                term_rows.push((
                    format!("(k={k}, l={l}) x^{n}"),
                    enumerated.coeff(n).clone(),
                    term.coeff(n).clone(),
                ));
            }
        }
    }
    let per_term = report("per-stratum enumeration == two-durfee term", term_rows.into_iter());

    let global = crate::qseries::zhat_node_global(x_order, &t);
    let total = report(
        "enumeration == global nodal series",
        (0..=x_order).map(|n| {
            (
                format!("x^{n}"),
                direct.coeff(n).clone(),
                global.coeff(n).clone(),
            )
        }),
    );
    Ok((per_term, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn enumeration_golden_streams() {
        let of4 = partitions_of(4, Some(2), None);
        assert_eq!(of4, vec![p(&[4]), p(&[3, 1]), p(&[2, 2])]);

        assert_eq!(partitions_of(0, None, None), vec![Partition::empty()]);

        let boxed = partitions_in_box(2, 2);
        assert_eq!(
            boxed,
            vec![
                Partition::empty(),
                p(&[1]),
                p(&[2]),
                p(&[1, 1]),
                p(&[2, 1]),
                p(&[2, 2]),
            ]
        );
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(p(&[3, 2, 1]).conjugate(), p(&[3, 2, 1]));
        assert_eq!(p(&[4, 1]).conjugate(), p(&[2, 1, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn conjugation_involution_and_invariants_exhaustive() {
        for n in 0..=16u32 {
            for lam in partitions_of(n, None, None) {
                let c = lam.conjugate();
                assert_eq!(c.conjugate(), lam);
                assert_eq!(c.size(), lam.size());
                assert_eq!(c.len() as u32, lam.part(1));
                assert_eq!(c.durfee_side(), lam.durfee_side());
            }
        }
    }

    #[test]
    fn durfee_profiles() {
        assert_eq!(p(&[3, 2, 1]).durfee_profile().sides, vec![2, 1]);
        assert_eq!(p(&[4, 3, 1, 1]).durfee_profile().sides, vec![2, 1, 1]);
        assert_eq!(p(&[1]).durfee_profile().sides, vec![1]);
        assert_eq!(Partition::empty().durfee_profile().sides, Vec::<u32>::new());
    }

    #[test]
    fn multiplicities_on_demand() {
        let lam = p(&[4, 2, 2, 1]);
        assert_eq!(lam.multiplicity(2), 2);
        assert_eq!(lam.multiplicity(3), 0);
        assert_eq!(lam.multiplicity(4), 1);
    }

    #[test]
    fn first_durfee_split_examples() {
        let (k, right, below) = split_first_durfee(&p(&[3, 2, 1]));
        assert_eq!((k, &right, &below), (2, &p(&[1]), &p(&[1])));
        assert_eq!(
            reassemble_first_durfee(k, &right, &below).unwrap(),
            p(&[3, 2, 1])
        );

        let (k, right, below) = split_first_durfee(&Partition::empty());
        assert_eq!(k, 0);
        assert!(right.is_empty() && below.is_empty());
    }

    #[test]
    fn first_durfee_roundtrip_exhaustive() {
        for n in 0..=14u32 {
            for lam in partitions_of(n, None, None) {
                let (k, right, below) = split_first_durfee(&lam);
                assert_eq!(
                    lam.size(),
                    k * k + right.size() + below.size(),
                    "size bookkeeping for {lam:?}"
                );
                assert_eq!(reassemble_first_durfee(k, &right, &below).unwrap(), lam);
            }
        }
    }

    #[test]
    fn reassemble_rejects_malformed() {
        assert!(reassemble_first_durfee(1, &p(&[1, 1]), &Partition::empty()).is_err());
        assert!(reassemble_first_durfee(1, &Partition::empty(), &p(&[2])).is_err());
        assert!(reassemble_two_durfee(
            0,
            1,
            &Partition::empty(),
            &Partition::empty(),
            &PartitionWithZeros::new(vec![])
        )
        .is_err());
    }

    #[test]
    fn two_durfee_trivial_example() {
        let lam = PartitionWithZeros::new(vec![1]);
        let (k, l, l1, l2, rest) = split_two_durfee(&lam);
        assert_eq!((k, l), (1, 0));
        assert!(l1.is_empty() && l2.is_empty() && rest.is_empty());
        assert_eq!(reassemble_two_durfee(k, l, &l1, &l2, &rest).unwrap(), lam);
    }

    #[test]
    fn two_durfee_roundtrip_exhaustive() {
        for lam in partitions_with_zeros_up_to(36, 6, 6) {
            let (k, l, l1, l2, rest) = split_two_durfee(&lam);
            assert!(k >= l);
            assert!(l1.len() <= k as usize);
            assert!(l2.len() <= l as usize && l2.part(1) <= k - l);
            assert!(rest.part(1) <= l);
            assert_eq!(lam.len() as u32, k + l + rest.len() as u32);
            assert_eq!(
                lam.size(),
                k * k + l * l + l1.size() + l2.size() + rest.size(),
                "size bookkeeping for {lam:?}"
            );
            let back = reassemble_two_durfee(k, l, &l1, &l2, &rest).unwrap();
            assert_eq!(back, lam);
        }
    }

    #[test]
    fn two_durfee_reassemble_is_inverse_on_stated_domain() {
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        let (k, l) = (2u32, 1u32);
        for l1 in partitions_up_to(4, Some(k as usize), None) {
            for l2 in partitions_up_to(4, Some(l as usize), Some(k - l)) {
                for rest in partitions_with_zeros_up_to(3, 3, l) {
                    let lam = reassemble_two_durfee(k, l, &l1, &l2, &rest).unwrap();
                    let (k2, l2b, a, b, c) = split_two_durfee(&lam);
                    assert_eq!((k2, l2b), (k, l));
                    assert_eq!((a, b, c), (l1.clone(), l2.clone(), rest.clone()));
                    seen.insert(lam);
                }
            }
        }
        assert!(seen.len() > 100);
    }

    #[test]
    fn genfn_families() {
        let r = genfn_bounded_length(2, 12).unwrap();
        assert!(r.equal, "{:?}", r.first_mismatch);
        // coefficient of t^4 with k = 2 is 3: (4),(3,1),(2,2)
        assert_eq!(partitions_of(4, Some(2), None).len(), 3);

        let r = genfn_box(4, 2, 8).unwrap();
        assert!(r.equal, "{:?}", r.first_mismatch);

        let r = genfn_with_zeros(0, 6, 6).unwrap();
        assert!(r.equal, "{:?}", r.first_mismatch);
        let r = genfn_with_zeros(3, 5, 8).unwrap();
        assert!(r.equal, "{:?}", r.first_mismatch);
    }

    #[test]
    fn box_sum_matches_gaussian_binomial_example() {
        // lambda in 2x2: 1 + t + 2t^2 + t^3 + t^4 = [4,2]_t
        let t = TSeries::t(4);
        let b = q_binomial(4, 2, &t).unwrap();
        let expect: Vec<i64> = vec![1, 1, 2, 1, 1];
        for (d, e) in expect.iter().enumerate() {
            assert_eq!(b.coeff(d), BigRational::from_integer((*e).into()));
        }
    }

    #[test]
    fn durfee_factorization_rederivation() {
        let (a, b) = durfee_factorization_report(5, 8).unwrap();
        assert!(a.equal, "{:?}", a.first_mismatch);
        assert!(b.equal, "{:?}", b.first_mismatch);
    }

    #[test]
    fn json_forms() {
        let lam = p(&[4, 2, 1]);
        assert_eq!(serde_json::to_string(&lam).unwrap(), "[4,2,1]");
        let back: Partition = serde_json::from_str("[4,2,1]").unwrap();
        assert_eq!(back, lam);
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());

        let wz = PartitionWithZeros::new(vec![3, 1, 0, 0]);
        let json = serde_json::to_string(&wz).unwrap();
        assert_eq!(json, r#"{"parts":[3,1,0,0],"length":4}"#);
        let back: PartitionWithZeros = serde_json::from_str(&json).unwrap();
        assert_eq!(back, wz);
        // a shorter parts list pads with zeros up to the declared length
        let padded: PartitionWithZeros =
            serde_json::from_str(r#"{"parts":[3,1],"length":4}"#).unwrap();
        assert_eq!(padded, wz);
        assert!(
            serde_json::from_str::<PartitionWithZeros>(r#"{"parts":[1,1],"length":1}"#).is_err()
        );
    }

    #[test]
    fn line3_simplification() {
        // 1/(t;t)_k * [k,l]_t == 1/((t;t)_l (t;t)_(k-l)) symbolically
        let t = TSeries::t(30);
        let inv = inverse_pochhammer_table(10, &t).unwrap();
        for k in 0..=10usize {
            for l in 0..=k {
                let lhs = inv[k].mul(&q_binomial(k, l, &t).unwrap());
                let rhs = inv[l].mul(&inv[k - l]);
                assert_eq!(lhs, rhs, "k={k}, l={l}");
            }
        }
    }
}
