//! Truncated power series in `x` and the named q-series of the theory.
//!
//! A [`TruncSeries`] holds exact coefficients (numeric rationals or
//! truncated `t`-series, see [`crate::scalar`]) for `x^0 ... x^N`. On top of
//! the ring operations this module provides the constructors used
//! throughout the crate:
//!
//! * finite and infinite q-Pochhammer symbols `(a;q)_n`, `(a;q)_inf`;
//! * Gaussian binomials `[n,k]_q`;
//! * the entire factor `H(x;t) = sum_k t^(k^2) x^(2k) / (t;t)_k * (x t^(k+1);t)_inf`;
//! * the nodal Cohen–Lenstra series, global `sum_{n,k} [n,k]_t/(t;t)_k x^n`
//!   and local `(xt;t)_inf^-2 H(x;t)`;
//! * the smooth-point and smooth-surface local series and the partial theta
//!   function.
//!
//! Infinite products with an `x`-monomial argument are expanded through
//! Euler's q-exponential identity
//! `(a;q)_inf = sum_m (-1)^m q^(m(m-1)/2) a^m / (q;q)_m`,
//! which yields exact coefficients in both scalar modes; the sum stops at
//! the provably last contributing index `m = N/d` for an argument of
//! `x`-degree `d`. Infinite products with a scalar argument terminate only
//! in symbolic mode (positive `t`-valuation); in numeric mode they are
//! rejected as [`QSeriesError::NonConvergent`].

use crate::scalar::{Scalar, TSeries};
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QSeriesError {
    #[error("infinite product does not stabilize: {0}")]
    NonConvergent(String),
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("t-adic valuation guard failed at x^{n}: valuation {found:?}, need >= {required}")]
    ValuationGuardFailed {
        n: usize,
        found: Option<usize>,
        required: usize,
    },
    #[error("truncation too low: need {required}, have {actual}")]
    TruncationTooLow { required: usize, actual: usize },
}

/// Truncated formal power series in `x`: coefficients of `x^0 ..= x^N`.
///
/// All coefficients share one scalar mode and, in symbolic mode, one
/// `t`-truncation order. Ring operations on mismatched `x`-orders truncate
/// to the smaller order.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<C: Scalar> {
    coeffs: Vec<C>,
}

impl<C: Scalar> TruncSeries<C> {
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a TruncSeries has at least the x^0 coefficient");
        debug_assert!(
            coeffs.windows(2).all(|w| w[0].t_truncation() == w[1].t_truncation()),
            "coefficients must share one t-truncation order"
        );
        TruncSeries { coeffs }
    }

    pub fn zero(order: usize, like: &C) -> Self {
        TruncSeries {
            coeffs: vec![like.zero_like(); order + 1],
        }
    }

    pub fn one(order: usize, like: &C) -> Self {
        let mut s = Self::zero(order, like);
        s.coeffs[0] = like.one_like();
        s
    }

    /// `c * x^deg` (zero when `deg > order`).
    pub fn monomial(order: usize, deg: usize, c: C) -> Self {
        let mut s = Self::zero(order, &c);
        if deg <= order {
            s.coeffs[deg] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        self.coeffs[n] = c;
    }

    pub fn truncate_x(&self, order: usize) -> Self {
        if order >= self.order() {
            self.clone()
        } else {
            TruncSeries {
                coeffs: self.coeffs[..=order].to_vec(),
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        TruncSeries {
            coeffs: (0..=n).map(|i| self.coeffs[i].add(&rhs.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        TruncSeries {
            coeffs: (0..=n).map(|i| self.coeffs[i].sub(&rhs.coeffs[i])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let like = &self.coeffs[0];
        let mut coeffs = vec![like.zero_like(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        TruncSeries { coeffs }
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Multiply by `x^d`, keeping the truncation order.
    pub fn mul_xpow(&self, d: usize) -> Self {
        let n = self.order();
        let like = &self.coeffs[0];
        let mut coeffs = vec![like.zero_like(); n + 1];
        for i in 0..=n {
            if i + d > n {
                break;
            }
            coeffs[i + d] = self.coeffs[i].clone();
        }
        TruncSeries { coeffs }
    }

    /// Reciprocal modulo `x^(N+1)`; the constant term must be a unit.
    pub fn invert(&self) -> Result<Self, QSeriesError> {
        let inv0 = self.coeffs[0].try_invert().ok_or(QSeriesError::NotInvertible)?;
        let n = self.order();
        let mut inv = vec![self.coeffs[0].zero_like(); n + 1];
        inv[0] = inv0.clone();
        for m in 1..=n {
            let mut acc = self.coeffs[0].zero_like();
            for j in 1..=m {
                if !self.coeffs[j].is_zero() {
                    acc = acc.add(&self.coeffs[j].mul(&inv[m - j]));
                }
            }
            inv[m] = inv0.mul(&acc).neg();
        }
        Ok(TruncSeries { coeffs: inv })
    }

    /// Substitute `x -> -x`.
    pub fn subst_x_neg(&self) -> Self {
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| if n % 2 == 1 { c.neg() } else { c.clone() })
                .collect(),
        }
    }

    /// Substitute `x -> c * x`.
    pub fn subst_x_scale(&self, c: &C) -> Self {
        let mut pw = c.one_like();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (n, a) in self.coeffs.iter().enumerate() {
            if n > 0 {
                pw = pw.mul(c);
            }
            coeffs.push(a.mul(&pw));
        }
        TruncSeries { coeffs }
    }

    /// Horner evaluation of the truncated polynomial at a scalar point.
    pub fn eval_at(&self, x: &C) -> C {
        let mut acc = self.coeffs[0].zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// `t`-adic evaluation at `x = 1` (or `x = -1` with `negate_odd`):
    /// sums the coefficients after verifying the valuation guard
    /// `val_t(a_n) >= n` for every computed `n`, and that the truncation
    /// order satisfies `T <= N`, so that the discarded tail `n > N` cannot
    /// touch the retained `t`-degrees. Aborts with an error rather than
    /// silently truncating.
    pub fn sum_coeffs_tadic(&self, negate_odd: bool) -> Result<C, QSeriesError> {
        self.sum_coeffs_tadic_with_guard(negate_odd, 0)
    }

    /// Like [`Self::sum_coeffs_tadic`] but with the relaxed monotone guard
    /// `val_t(a_n) >= n - shift`.
    ///
    /// The local nodal series needs `shift = 1`: its `x^n` coefficient is a
    /// convolution of the inverse-Pochhammer square (valuation exactly `i`
    /// at `x^i`, one factor of `t` per `x`) with `H` (valuation at least
    /// `ceil(j^2/4)` at `x^j`, from the minimal exponent of its closed-form
    /// coefficients), and `min_(i+j=n) (i + ceil(j^2/4)) = n - 1` once
    /// `n >= 2` (attained at `j = 2`). Trusting the truncation needs the
    /// first discarded coefficient past `t^T`: `order >= T + shift`.
    pub fn sum_coeffs_tadic_with_guard(
        &self,
        negate_odd: bool,
        shift: usize,
    ) -> Result<C, QSeriesError> {
        let t_trunc = self.coeffs[0].t_truncation().ok_or_else(|| {
            QSeriesError::NonConvergent("t-adic evaluation at x = ±1 requires symbolic mode".into())
        })?;
        if self.order() < t_trunc + shift {
            return Err(QSeriesError::TruncationTooLow {
                required: t_trunc + shift,
                actual: self.order(),
            });
        }
        for (n, a) in self.coeffs.iter().enumerate() {
            let required = n.saturating_sub(shift);
            match a.t_valuation() {
                None => {}
                Some(v) if v >= required => {}
                found => {
                    return Err(QSeriesError::ValuationGuardFailed {
                        n,
                        found,
                        required,
                    })
                }
            }
        }
        let mut acc = self.coeffs[0].zero_like();
        for (n, a) in self.coeffs.iter().enumerate() {
            if negate_odd && n % 2 == 1 {
                acc = acc.sub(a);
            } else {
                acc = acc.add(a);
            }
        }
        Ok(acc)
    }
}

/// Finite q-Pochhammer `(a;b)_n = (1-a)(1-ba)...(1-b^(n-1)a)` for scalars.
pub fn pochhammer_fin_scalar<C: Scalar>(a: &C, base: &C, n: usize) -> C {
    let one = a.one_like();
    let mut acc = one.clone();
    let mut ba = a.clone();
    for i in 0..n {
        acc = acc.mul(&one.sub(&ba));
        if i + 1 < n {
            ba = ba.mul(base);
        }
    }
    acc
}

/// Finite q-Pochhammer with a series argument.
pub fn pochhammer_fin_series<C: Scalar>(a: &TruncSeries<C>, base: &C, n: usize) -> TruncSeries<C> {
    let one = TruncSeries::one(a.order(), a.coeff(0));
    let mut acc = one.clone();
    let mut ba = a.clone();
    for i in 0..n {
        acc = acc.mul(&one.sub(&ba));
        if i + 1 < n {
            ba = ba.scale(base);
        }
    }
    acc
}

/// Infinite q-Pochhammer `(a;b)_inf` for a scalar argument.
///
/// Terminates only when extra factors provably cannot touch retained
/// `t`-degrees: in symbolic mode with `val_t(base) >= 1` the factor `i`
/// has `val_t(a * base^i) = val_t(a) + i*val_t(base)`, so the product
/// stops at the first `i` past the truncation order. A nonzero constant
/// rational argument in numeric mode never stabilizes and is rejected.
pub fn pochhammer_inf_scalar<C: Scalar>(a: &C, base: &C) -> Result<C, QSeriesError> {
    let one = a.one_like();
    if a.is_zero() {
        return Ok(one);
    }
    if base.is_zero() {
        // only the i = 0 factor differs from 1
        return Ok(one.sub(a));
    }
    let trunc = match a.t_truncation() {
        Some(t) => t,
        None => {
            return Err(QSeriesError::NonConvergent(
                "(a;q)_inf with a nonzero constant does not stabilize in numeric mode".into(),
            ))
        }
    };
    let vb = base.t_valuation().unwrap_or(trunc + 1);
    if vb == 0 {
        return Err(QSeriesError::NonConvergent(
            "(a;q)_inf requires the base to have positive t-valuation".into(),
        ));
    }
    let va = a.t_valuation().unwrap_or(trunc + 1);
    // stopping bound: factor i is 1 - a*base^i, dead once va + i*vb > trunc
    let last = if va > trunc { 0 } else { (trunc - va) / vb + 1 };
    let mut acc = one.clone();
    let mut ba = a.clone();
    for i in 0..=last {
        acc = acc.mul(&one.sub(&ba));
        if i < last {
            ba = ba.mul(base);
        }
    }
    debug_assert!(ba.mul(base).is_zero() || va + (last + 1) * vb > trunc);
    Ok(acc)
}

/// Infinite q-Pochhammer `(a;b)_inf` for a series argument.
///
/// The argument must be an `x`-monomial `c * x^d` with `d >= 1` (the named
/// constructors only ever need monomials); coefficients then come from
/// Euler's expansion `(a;b)_inf = sum_m (-1)^m b^(m(m-1)/2) a^m / (b;b)_m`,
/// exact in both modes, stopping at the last contributing index
/// `m = N/d`. A constant series delegates to the scalar rules.
pub fn pochhammer_inf_series<C: Scalar>(
    a: &TruncSeries<C>,
    base: &C,
) -> Result<TruncSeries<C>, QSeriesError> {
    let order = a.order();
    let nonzero: Vec<usize> = (0..=order).filter(|&i| !a.coeff(i).is_zero()).collect();
    match nonzero.as_slice() {
        [] => Ok(TruncSeries::one(order, a.coeff(0))),
        [0] => {
            let v = pochhammer_inf_scalar(a.coeff(0), base)?;
            Ok(TruncSeries::monomial(order, 0, v))
        }
        [d] => {
            let d = *d;
            let c = a.coeff(d).clone();
            let one = c.one_like();
            let mut result = TruncSeries::one(order, &c);
            let mut poch = one.clone(); // (b;b)_m
            let mut c_pow = one.clone(); // c^m
            let mut b_binom = one.clone(); // b^(m(m-1)/2)
            let mut b_pow = one.clone(); // b^(m-1)
            for m in 1..=order / d {
                poch = poch.mul(&one.sub(&base.pow(m)));
                c_pow = c_pow.mul(&c);
                if m >= 2 {
                    b_pow = b_pow.mul(base);
                }
                b_binom = b_binom.mul(&b_pow);
                debug_assert!(d * m <= order);
                let inv = poch.try_invert().ok_or(QSeriesError::NotInvertible)?;
                let mut term = b_binom.mul(&c_pow).mul(&inv);
                if m % 2 == 1 {
                    term = term.neg();
                }
                if term.is_zero() {
                    // val_t grows monotonically with m; later terms stay zero
                    break;
                }
                result.set_coeff(d * m, term);
            }
            Ok(result)
        }
        _ => Err(QSeriesError::NonConvergent(
            "(a;q)_inf with a non-monomial series argument is not supported".into(),
        )),
    }
}

/// Gaussian binomial `[n,k]_q = (q;q)_n / ((q;q)_k (q;q)_(n-k))`.
///
/// In symbolic mode the quotient is the exact polynomial of degree
/// `k(n-k)` truncated to the working order; any computed coefficient past
/// that degree is asserted to vanish.
pub fn q_binomial<C: Scalar>(n: usize, k: usize, t: &C) -> Result<C, QSeriesError> {
    if k > n {
        return Err(QSeriesError::OutOfRange(format!(
            "q-binomial [{n},{k}] needs k <= n"
        )));
    }
    let num = pochhammer_fin_scalar(t, t, n);
    let dk = pochhammer_fin_scalar(t, t, k)
        .try_invert()
        .ok_or(QSeriesError::NotInvertible)?;
    let dnk = pochhammer_fin_scalar(t, t, n - k)
        .try_invert()
        .ok_or(QSeriesError::NotInvertible)?;
    let result = num.mul(&dk).mul(&dnk);
    if let Some(trunc) = result.t_truncation() {
        if trunc > k * (n - k) {
            assert!(
                result.t_degree_at_most(k * (n - k)),
                "q-binomial must be a polynomial of degree k(n-k)"
            );
        }
    }
    Ok(result)
}

/// Builds the table `1/(t;t)_k` for `k = 0..=n`.
pub fn inverse_pochhammer_table<C: Scalar>(n: usize, t: &C) -> Result<Vec<C>, QSeriesError> {
    let one = t.one_like();
    let mut out = Vec::with_capacity(n + 1);
    out.push(one.clone());
    for k in 1..=n {
        let f = one
            .sub(&t.pow(k))
            .try_invert()
            .ok_or(QSeriesError::NotInvertible)?;
        let prev: &C = &out[k - 1];
        out.push(prev.mul(&f));
    }
    Ok(out)
}

/// The entire correction factor
/// `H(x;t) = sum_k t^(k^2) x^(2k) / (t;t)_k * (x t^(k+1); t)_inf`,
/// truncated at `x^order`. Only `k <= order/2` contribute because of the
/// `x^(2k)` prefactor; in symbolic mode terms die once `k^2` passes the
/// `t`-truncation.
pub fn h_series<C: Scalar>(order: usize, t: &C) -> TruncSeries<C> {
    let mut result = TruncSeries::zero(order, t);
    let one = t.one_like();
    let mut inv_poch = one.clone();
    for k in 0..=order / 2 {
        if k > 0 {
            inv_poch = inv_poch.mul(
                &one.sub(&t.pow(k))
                    .try_invert()
                    .expect("1 - t^k must be invertible; is |t| < 1?"),
            );
        }
        let pref = t.pow(k * k).mul(&inv_poch);
        if pref.is_zero() {
            break; // t^(k^2) beyond the t-truncation; k^2 only grows
        }
        let tail = TruncSeries::monomial(order - 2 * k, 1, t.pow(k + 1));
        let p = pochhammer_inf_series(&tail, t).expect("monomial argument");
        for j in 0..=order - 2 * k {
            let add = pref.mul(p.coeff(j));
            let cur = result.coeff(2 * k + j).add(&add);
            result.set_coeff(2 * k + j, cur);
        }
    }
    result
}

/// Global nodal Cohen–Lenstra series
/// `sum_n sum_(k<=n) [n,k]_t / (t;t)_k x^n`, truncated at `x^order`.
pub fn zhat_node_global<C: Scalar>(order: usize, t: &C) -> TruncSeries<C> {
    let inv = inverse_pochhammer_table(order, t).expect("1 - t^k invertible");
    let mut poch = Vec::with_capacity(order + 1);
    let one = t.one_like();
    poch.push(one.clone());
    for k in 1..=order {
        let prev: &C = &poch[k - 1];
        poch.push(prev.mul(&one.sub(&t.pow(k))));
    }
    let mut result = TruncSeries::zero(order, t);
    for n in 0..=order {
        let mut acc = t.zero_like();
        for k in 0..=n {
            // [n,k]_t / (t;t)_k = (t;t)_n * (1/(t;t)_k)^2 * 1/(t;t)_(n-k)
            let term = poch[n].mul(&inv[k]).mul(&inv[k]).mul(&inv[n - k]);
            acc = acc.add(&term);
        }
        result.set_coeff(n, acc);
    }
    result
}

/// `(x t; t)_inf ^ -2 * H(x;t)`: the local Cohen–Lenstra series of the
/// nodal singularity, equal to the generating function of mutually
/// annihilating nilpotent pairs.
pub fn zhat_node_local<C: Scalar>(order: usize, t: &C) -> TruncSeries<C> {
    let xt = TruncSeries::monomial(order, 1, t.clone());
    let p = pochhammer_inf_series(&xt, t).expect("monomial argument");
    let ip = p.invert().expect("constant term 1");
    ip.mul(&ip).mul(&h_series(order, t))
}

/// `(x; t)_inf ^ -2 * H(x;t)`: the right-hand side of the global
/// factorization identity.
pub fn zhat_node_global_factored<C: Scalar>(order: usize, t: &C) -> TruncSeries<C> {
    let x = TruncSeries::monomial(order, 1, t.one_like());
    let p = pochhammer_inf_series(&x, t).expect("monomial argument");
    let ip = p.invert().expect("constant term 1");
    ip.mul(&ip).mul(&h_series(order, t))
}

/// Local series of a smooth curve point: `prod_(i>=1) (1 - t^i x)^-1 = 1/(xt;t)_inf`.
pub fn zhat_smooth_local<C: Scalar>(order: usize, t: &C) -> TruncSeries<C> {
    let xt = TruncSeries::monomial(order, 1, t.clone());
    pochhammer_inf_series(&xt, t)
        .expect("monomial argument")
        .invert()
        .expect("constant term 1")
}

/// Local series of a smooth surface point:
/// `prod_(i,j>=1) (1 - t^j x^i)^-1 = prod_(i>=1) 1/(x^i t; t)_inf`.
pub fn zhat_plane_local<C: Scalar>(order: usize, t: &C) -> TruncSeries<C> {
    let mut acc = TruncSeries::one(order, t);
    for i in 1..=order.max(1) {
        if i > order {
            break;
        }
        let xit = TruncSeries::monomial(order, i, t.clone());
        let p = pochhammer_inf_series(&xit, t)
            .expect("monomial argument")
            .invert()
            .expect("constant term 1");
        acc = acc.mul(&p);
    }
    acc
}

/// Partial theta function `Theta_p(x;t) = sum_n t^(n^2) x^n`.
pub fn theta_partial<C: Scalar>(order: usize, t: &C) -> TruncSeries<C> {
    let mut s = TruncSeries::zero(order, t);
    s.set_coeff(0, t.one_like());
    for n in 1..=order {
        s.set_coeff(n, t.pow(n * n));
    }
    s
}

/// `t^(i^2) * H(t^-i; t)` as an exact `t`-series.
///
/// Terms with `k < i` of the defining sum vanish at `x = t^-i` (the factor
/// `1 - t^0` appears), so after re-indexing `j = k - i`:
/// `t^(i^2) H(t^-i;t) = sum_(j>=0) t^(j^2) / (t;t)_(i+j) * (t^(j+1);t)_inf`,
/// summed while `j^2` stays below the truncation. A strictly positive
/// leading coefficient here certifies `H(t^-i;t) != 0`.
pub fn h_at_t_inverse_power(i: usize, trunc: usize) -> TSeries {
    let t = TSeries::t(trunc);
    let one = TSeries::one(trunc);
    let mut acc = TSeries::zero(trunc);
    let mut poch = pochhammer_fin_scalar(&t, &t, i); // (t;t)_(i+j)
    let mut j = 0usize;
    while j * j <= trunc {
        if j > 0 {
            poch = poch.mul(&one.sub(&t.pow(i + j)));
        }
        let inv = poch.try_invert().expect("constant term 1");
        let tail = pochhammer_inf_scalar(&t.pow(j + 1), &t).expect("symbolic scalar");
        let term = t.pow(j * j).mul(&inv).mul(&tail);
        acc = acc.add(&term);
        j += 1;
    }
    acc
}

/// Numeric-mode series with `t = 1/q`; checks that `q` is a prime power `>= 2`.
pub fn t_from_q(q: u64) -> Result<BigRational, QSeriesError> {
    if !is_prime_power(q) {
        return Err(QSeriesError::OutOfRange(format!(
            "q = {q} is not a prime power >= 2"
        )));
    }
    Ok(BigRational::new(1.into(), (q as i64).into()))
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut n = q;
    let mut p = 0u64;
    for cand in 2..=q {
        if cand * cand > q && p == 0 {
            p = q; // q itself is prime
            break;
        }
        if n % cand == 0 {
            p = cand;
            break;
        }
    }
    while n > 1 {
        if n % p != 0 {
            return false;
        }
        n /= p;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sym(trunc: usize) -> TSeries {
        TSeries::t(trunc)
    }

    // Independent oracle: multiply out prod_(i=0..last) (1 - b^i * a * x)
    // as a dense bivariate array [x-degree][t-degree].
    fn product_oracle(last: usize, a_tdeg: usize, n: usize, t_trunc: usize) -> Vec<Vec<BigRational>> {
        let mut acc = vec![vec![BigRational::zero(); t_trunc + 1]; n + 1];
        acc[0][0] = BigRational::one();
        for i in 0..=last {
            let mut next = acc.clone();
            let tdeg = a_tdeg + i;
            if tdeg > t_trunc {
                continue;
            }
            for xd in 0..n {
                for td in 0..=t_trunc.saturating_sub(tdeg) {
                    if !Zero::is_zero(&acc[xd][td]) {
                        let v = acc[xd][td].clone();
                        next[xd + 1][td + tdeg] -= v;
                    }
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn pochhammer_fin_empty_product_is_one() {
        let t = sym(5);
        assert_eq!(pochhammer_fin_scalar(&t, &t, 0), TSeries::one(5));
    }

    #[test]
    fn pochhammer_fin_two_factors_symbolic() {
        // (t;t)_2 = (1-t)(1-t^2) = 1 - t - t^2 + t^3
        let t = sym(5);
        let p = pochhammer_fin_scalar(&t, &t, 2);
        let expect = TSeries::from_coeffs(vec![
            rat(1, 1),
            rat(-1, 1),
            rat(-1, 1),
            rat(1, 1),
            rat(0, 1),
            rat(0, 1),
        ]);
        assert_eq!(p, expect);
    }

    #[test]
    fn pochhammer_fin_numeric() {
        // (1/2; 1/2)_3 = (1/2)(3/4)(7/8) = 21/64
        let a = rat(1, 2);
        let p = pochhammer_fin_scalar(&a, &a, 3);
        assert_eq!(p, rat(21, 64));
    }

    #[test]
    fn pochhammer_inf_x_matches_factor_oracle() {
        // (x;t)_inf mod (x^3, t^4): only factors i = 0..3 can contribute
        let t = sym(3);
        let x = TruncSeries::monomial(2, 1, TSeries::one(3));
        let p = pochhammer_inf_series(&x, &t).unwrap();
        let oracle = product_oracle(3, 0, 2, 3);
        for xd in 0..=2 {
            for td in 0..=3 {
                assert_eq!(p.coeff(xd).coeff(td), oracle[xd][td], "x^{xd} t^{td}");
            }
        }
        // spot values: 1 - (1+t+t^2+t^3)x + (t+t^2+2t^3)x^2
        assert_eq!(p.coeff(1).coeff(3), rat(-1, 1));
        assert_eq!(p.coeff(2).coeffs()[..4], [rat(0, 1), rat(1, 1), rat(1, 1), rat(2, 1)]);
    }

    #[test]
    fn pochhammer_inf_zero_argument() {
        let t = sym(4);
        let zero = TruncSeries::zero(3, &TSeries::zero(4));
        let p = pochhammer_inf_series(&zero, &t).unwrap();
        assert_eq!(p, TruncSeries::one(3, &TSeries::zero(4)));
    }

    #[test]
    fn pochhammer_inf_xt_linear_coefficient_is_geometric() {
        // coefficient of x^1 in (xt;t)_inf is -(t + t^2 + ...) = -t/(1-t)
        let t = sym(6);
        let xt = TruncSeries::monomial(3, 1, t.clone());
        let p = pochhammer_inf_series(&xt, &t).unwrap();
        for d in 1..=6 {
            assert_eq!(p.coeff(1).coeff(d), rat(-1, 1));
        }
        assert_eq!(p.coeff(1).coeff(0), rat(0, 1));
    }

    #[test]
    fn pochhammer_inf_scalar_numeric_rejected() {
        let t = rat(1, 2);
        let err = pochhammer_inf_scalar(&t, &t).unwrap_err();
        assert!(matches!(err, QSeriesError::NonConvergent(_)));
    }

    #[test]
    fn pochhammer_inf_scalar_symbolic_matches_finite_product() {
        // (t;t)_inf mod t^6 equals (t;t)_6 mod t^6
        let t = sym(6);
        let inf = pochhammer_inf_scalar(&t, &t).unwrap();
        let fin = pochhammer_fin_scalar(&t, &t, 6);
        assert_eq!(inf, fin.truncate(6));
    }

    #[test]
    fn q_binomial_trivial_and_known_values() {
        let t = sym(8);
        assert_eq!(q_binomial(5, 0, &t).unwrap(), TSeries::one(8));
        // [2,1]_t = 1 + t
        let b = q_binomial(2, 1, &t).unwrap();
        assert_eq!(b.coeff(0), rat(1, 1));
        assert_eq!(b.coeff(1), rat(1, 1));
        assert!(b.is_polynomial_of_degree_at_most(1));
        assert!(q_binomial(2, 3, &t).is_err());
    }

    // Brute-force subspace count: number of k-dimensional subspaces of
    // F_2^n, counted as rank-k row spaces de-duplicated via row echelon
    // form. Grounds [4,2]_2 = 35 independently of any q-identity.
    fn subspace_count_f2(n: usize, k: usize) -> usize {
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        let rows = 1u32 << (n * k);
        for bits in 0..rows {
            let mut mat: Vec<u32> = (0..k).map(|r| (bits >> (r * n)) & ((1 << n) - 1)).collect();
            // row reduce over F_2
            let mut rank = 0;
            for col in 0..n {
                if let Some(piv) = (rank..k).find(|&r| mat[r] >> col & 1 == 1) {
                    mat.swap(rank, piv);
                    for r in 0..k {
                        if r != rank && mat[r] >> col & 1 == 1 {
                            mat[r] ^= mat[rank];
                        }
                    }
                    rank += 1;
                }
            }
            if rank == k {
                let mut canon = mat.clone();
                canon.sort_unstable();
                seen.insert(canon);
            }
        }
        seen.len()
    }

    #[test]
    fn q_binomial_counts_subspaces_at_q_two() {
        assert_eq!(subspace_count_f2(4, 2), 35);
        let t = rat(2, 1); // Gaussian binomial evaluated at q = 2
        assert_eq!(q_binomial(4, 2, &t).unwrap(), rat(35, 1));
    }

    #[test]
    fn invert_one_and_geometric() {
        let one = TruncSeries::one(5, &BigRational::one());
        assert_eq!(one.invert().unwrap(), one);
        let f = one.sub(&TruncSeries::monomial(5, 1, BigRational::one()));
        let inv = f.invert().unwrap();
        for n in 0..=5 {
            assert_eq!(inv.coeff(n), &rat(1, 1));
        }
    }

    #[test]
    fn invert_x_pochhammer_numeric_gives_complete_homogeneous_values() {
        // x^2 coefficient of 1/(x;t)_inf is 1/((1-t)(1-t^2)); at t = 1/2 that's 8/3
        let t = rat(1, 2);
        let x = TruncSeries::monomial(4, 1, BigRational::one());
        let inv = pochhammer_inf_series(&x, &t).unwrap().invert().unwrap();
        assert_eq!(inv.coeff(2), &rat(8, 3));
    }

    #[test]
    fn invert_rejects_zero_constant_term() {
        let x = TruncSeries::monomial(3, 1, BigRational::one());
        assert!(matches!(x.invert(), Err(QSeriesError::NotInvertible)));
    }

    #[test]
    fn h_series_low_coefficients_symbolic() {
        let t = sym(3);
        let h = h_series(4, &t);
        assert_eq!(h.coeff(0), &TSeries::one(3));
        // x^1 coefficient is the linear term of (xt;t)_inf: -t - t^2 - t^3
        assert_eq!(
            h.coeff(1).coeffs()[..4],
            [rat(0, 1), rat(-1, 1), rat(-1, 1), rat(-1, 1)]
        );
    }

    #[test]
    fn h_series_x2_leading_term() {
        // a_2(H) = t + O(t^2): k=1 term contributes t/(1-t), k=0 contributes
        // the x^2 term of (xt;t)_inf which is t^3 + O(t^4)
        let t = sym(8);
        let h = h_series(4, &t);
        assert_eq!(h.coeff(2).t_valuation(), Some(1));
        assert_eq!(h.coeff(2).coeff(1), rat(1, 1));
    }

    #[test]
    fn zhat_node_global_matches_census_fractions_at_q2() {
        let t = rat(1, 2);
        let z = zhat_node_global(2, &t);
        assert_eq!(z.coeff(0), &rat(1, 1));
        assert_eq!(z.coeff(1), &rat(3, 1));
        assert_eq!(z.coeff(2), &rat(20, 3));
    }

    #[test]
    fn theorem_b_identity_small_symbolic() {
        let t = sym(10);
        let lhs = zhat_node_global(6, &t);
        let rhs = zhat_node_global_factored(6, &t);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn theorem_b_identity_numeric_prime_powers() {
        for q in [2i64, 3, 4, 5] {
            let t = rat(1, q);
            let lhs = zhat_node_global(8, &t);
            let rhs = zhat_node_global_factored(8, &t);
            assert_eq!(lhs, rhs, "q = {q}");
        }
    }

    #[test]
    fn node_local_x2_at_q2() {
        let t = rat(1, 2);
        let z = zhat_node_local(3, &t);
        assert_eq!(z.coeff(0), &rat(1, 1));
        assert_eq!(z.coeff(2), &rat(5, 3));
    }

    #[test]
    fn smooth_local_coefficients_at_q2() {
        let t = rat(1, 2);
        let z = zhat_smooth_local(3, &t);
        assert_eq!(z.coeff(0), &rat(1, 1));
        assert_eq!(z.coeff(1), &rat(1, 1)); // t/(1-t) at t = 1/2
    }

    #[test]
    fn plane_local_x1_is_geometric_in_t() {
        let t = sym(5);
        let z = zhat_plane_local(3, &t);
        // only the i=1 factor contributes to x^1: t/(1-t) = t + t^2 + ...
        assert_eq!(z.coeff(1).coeff(0), rat(0, 1));
        for d in 1..=5 {
            assert_eq!(z.coeff(1).coeff(d), rat(1, 1));
        }
    }

    #[test]
    fn theta_values() {
        let t = sym(9);
        let th = theta_partial(3, &t);
        assert_eq!(th.coeff(0), &TSeries::one(9));
        assert_eq!(th.coeff(2).t_valuation(), Some(4));
        assert_eq!(th.coeff(2).coeff(4), rat(1, 1));
        let zero_x = theta_partial(0, &t);
        assert_eq!(zero_x.coeff(0), &TSeries::one(9));
    }

    #[test]
    fn theta_functional_equation_symbolic() {
        // Theta(x;t) - t*x*Theta(t^2 x; t) - 1 == 0: the x^n coefficients
        // t^(n^2) and t * t^(2(n-1)) * t^((n-1)^2) cancel exactly
        let trunc = 30;
        let t = sym(trunc);
        let n = 5;
        let th = theta_partial(n, &t);
        let shifted = th.subst_x_scale(&t.pow(2));
        let txs = shifted.mul_xpow(1).scale(&t);
        let residual = th.sub(&txs).sub(&TruncSeries::one(n, &TSeries::zero(trunc)));
        for i in 0..=n {
            assert!(residual.coeff(i).is_zero(), "residual at x^{i}");
        }
    }

    #[test]
    fn pochhammer_recursion_holds() {
        // (a;q)_(n+1) = (a;q)_n * (1 - q^n a)
        let t = sym(12);
        let a = t.pow(1);
        for n in 0..20 {
            let lhs = pochhammer_fin_scalar(&a, &t, n + 1);
            let rhs = pochhammer_fin_scalar(&a, &t, n)
                .mul(&TSeries::one(12).sub(&t.pow(n).mul(&a)));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn q_binomial_symmetry_and_pascal() {
        let t = sym(40);
        for n in 0..=12usize {
            for k in 0..=n {
                let b = q_binomial(n, k, &t).unwrap();
                assert_eq!(b, q_binomial(n, n - k, &t).unwrap(), "symmetry {n},{k}");
                if n >= 1 && k >= 1 && k <= n - 1 {
                    let pascal = q_binomial(n - 1, k - 1, &t)
                        .unwrap()
                        .add(&t.pow(k).mul(&q_binomial(n - 1, k, &t).unwrap()));
                    assert_eq!(b, pascal, "q-Pascal {n},{k}");
                }
            }
        }
    }

    #[test]
    fn tadic_sum_guard_and_value() {
        // f = 1 + t*x + t^2*x^2 (valuations ok), order 3 >= trunc 3
        let trunc = 3;
        let t = sym(trunc);
        let mut f = TruncSeries::zero(3, &t);
        f.set_coeff(0, TSeries::one(trunc));
        f.set_coeff(1, t.clone());
        f.set_coeff(2, t.pow(2));
        let s = f.sum_coeffs_tadic(false).unwrap();
        assert_eq!(s.coeffs()[..3], [rat(1, 1), rat(1, 1), rat(1, 1)]);
        let alt = f.sum_coeffs_tadic(true).unwrap();
        assert_eq!(alt.coeffs()[..3], [rat(1, 1), rat(-1, 1), rat(1, 1)]);

        // valuation violation: coefficient of x^2 with valuation 1
        let mut bad = f.clone();
        bad.set_coeff(2, t.clone());
        assert!(matches!(
            bad.sum_coeffs_tadic(false),
            Err(QSeriesError::ValuationGuardFailed { n: 2, .. })
        ));

        // truncation too low: order < trunc
        let short = f.truncate_x(1);
        assert!(matches!(
            short.sum_coeffs_tadic(false),
            Err(QSeriesError::TruncationTooLow { .. })
        ));
    }

    #[test]
    fn h_at_t_inverse_power_leading_is_one() {
        for i in 1..=3 {
            let s = h_at_t_inverse_power(i, 12);
            let (v, c) = s.leading().unwrap();
            assert_eq!(v, 0, "i = {i}");
            assert_eq!(c, &rat(1, 1), "i = {i}");
        }
    }

    #[test]
    fn prime_power_detection() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            assert!(is_prime_power(q), "{q}");
        }
        for q in [0u64, 1, 6, 10, 12, 15, 100] {
            assert!(!is_prime_power(q), "{q}");
        }
    }
}
