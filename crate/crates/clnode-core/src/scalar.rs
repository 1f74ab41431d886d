//! Coefficient scalars for truncated series in `x`.
//!
//! Two modes share one series kernel: exact big rationals (numeric mode,
//! where `t = 1/q` is a fixed rational) and truncated power series in `t`
//! with rational coefficients (symbolic mode). The two modes are distinct
//! Rust types, so mixing them is a compile-time error rather than a
//! coercion.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A coefficient ring element for truncated series arithmetic.
///
/// Implemented by [`BigRational`] (numeric mode) and [`TSeries`]
/// (symbolic mode, truncated series in `t`). All operations are exact;
/// symbolic operations on mismatched truncation orders truncate to the
/// minimum order.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Multiplicative inverse, or `None` when the element is not a unit.
    fn try_invert(&self) -> Option<Self>;

    /// Lowest exponent of `t` with nonzero coefficient; `None` for zero.
    /// Numeric scalars are constants in `t`, so any nonzero value has
    /// valuation 0.
    fn t_valuation(&self) -> Option<usize>;

    /// The `t`-truncation order `T`, when the mode has one (`None` in
    /// numeric mode).
    fn t_truncation(&self) -> Option<usize>;

    /// True when every computed nonzero `t`-coefficient sits in degree
    /// `<= deg`. Constants (numeric mode) always satisfy this.
    fn t_degree_at_most(&self, deg: usize) -> bool;

    /// Embed a small integer, with the same mode and truncation as `like`.
    fn from_int(like: &Self, v: i64) -> Self;

    fn pow(&self, e: usize) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn try_invert(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn t_valuation(&self) -> Option<usize> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(0)
        }
    }
    fn t_truncation(&self) -> Option<usize> {
        None
    }
    fn t_degree_at_most(&self, _deg: usize) -> bool {
        true
    }
    fn from_int(_like: &Self, v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

/// Truncated power series in `t` with exact rational coefficients.
///
/// `coeffs[d]` is the coefficient of `t^d`; the truncation order `T` is
/// `coeffs.len() - 1` and the value is understood modulo `t^(T+1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TSeries {
    coeffs: Vec<BigRational>,
}

impl TSeries {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a TSeries has at least the t^0 coefficient");
        TSeries { coeffs }
    }

    pub fn zero(trunc: usize) -> Self {
        TSeries {
            coeffs: vec![BigRational::zero(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The generator `t` itself (zero when `trunc == 0`).
    pub fn t(trunc: usize) -> Self {
        Self::monomial(trunc, 1, BigRational::one())
    }

    /// `c * t^deg`, truncated (zero when `deg > trunc`).
    pub fn monomial(trunc: usize, deg: usize, c: BigRational) -> Self {
        let mut s = Self::zero(trunc);
        if deg <= trunc {
            s.coeffs[deg] = c;
        }
        s
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^d`; zero beyond the truncation order.
    pub fn coeff(&self, d: usize) -> BigRational {
        self.coeffs.get(d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Shorten to truncation order `trunc` (no-op when already shorter).
    pub fn truncate(&self, trunc: usize) -> Self {
        if trunc >= self.trunc_order() {
            self.clone()
        } else {
            TSeries {
                coeffs: self.coeffs[..=trunc].to_vec(),
            }
        }
    }

    /// Lowest nonzero coefficient as `(degree, value)`.
    pub fn leading(&self) -> Option<(usize, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| !Zero::is_zero(*c))
            .map(|(d, c)| (d, c))
    }

    /// True when all computed coefficients of degree `> deg` vanish.
    pub fn is_polynomial_of_degree_at_most(&self, deg: usize) -> bool {
        self.coeffs
            .iter()
            .skip(deg + 1)
            .all(|c| Zero::is_zero(c))
    }

    /// Evaluate at a rational point by Horner's rule. This is evaluation of
    /// the truncated polynomial, not of the underlying series.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// True when every coefficient is `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    fn common_trunc(&self, rhs: &Self) -> usize {
        self.trunc_order().min(rhs.trunc_order())
    }
}

impl std::fmt::Display for TSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            if d == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "t^{d}")?;
            } else {
                write!(f, "({c})t^{d}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Scalar for TSeries {
    fn zero_like(&self) -> Self {
        Self::zero(self.trunc_order())
    }

    fn one_like(&self) -> Self {
        Self::one(self.trunc_order())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| Zero::is_zero(c))
    }

    fn add(&self, rhs: &Self) -> Self {
        let t = self.common_trunc(rhs);
        TSeries {
            coeffs: (0..=t).map(|d| &self.coeffs[d] + &rhs.coeffs[d]).collect(),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        let t = self.common_trunc(rhs);
        TSeries {
            coeffs: (0..=t).map(|d| &self.coeffs[d] - &rhs.coeffs[d]).collect(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let t = self.common_trunc(rhs);
        let mut coeffs = vec![BigRational::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(t + 1) {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(t + 1 - i) {
                if Zero::is_zero(b) {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        TSeries { coeffs }
    }

    fn neg(&self) -> Self {
        TSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    fn try_invert(&self) -> Option<Self> {
        if Zero::is_zero(&self.coeffs[0]) {
            return None;
        }
        let t = self.trunc_order();
        let inv0 = self.coeffs[0].recip();
        let mut inv = vec![BigRational::zero(); t + 1];
        inv[0] = inv0.clone();
        for n in 1..=t {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                if !Zero::is_zero(&self.coeffs[j]) {
                    acc += &self.coeffs[j] * &inv[n - j];
                }
            }
            inv[n] = -(&inv0 * acc);
        }
        Some(TSeries { coeffs: inv })
    }

    fn t_valuation(&self) -> Option<usize> {
        self.leading().map(|(d, _)| d)
    }

    fn t_truncation(&self) -> Option<usize> {
        Some(self.trunc_order())
    }

    fn t_degree_at_most(&self, deg: usize) -> bool {
        self.is_polynomial_of_degree_at_most(deg)
    }

    fn from_int(like: &Self, v: i64) -> Self {
        Self::monomial(like.trunc_order(), 0, BigRational::from_integer(v.into()))
    }
}
