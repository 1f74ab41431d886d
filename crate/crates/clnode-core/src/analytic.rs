//! Certified floating evaluation of `H(x;t)` as an entire function, plus
//! the exploratory scans of its coefficients.
//!
//! All evaluation runs in fixed-point ball arithmetic ([`ball::Ball`]) at a
//! caller-chosen precision (bits). Infinite products and sums are truncated
//! with explicit tail bounds folded into the radius:
//!
//! * a product tail `prod_(i>I) (1 - t^i x)` contributes a relative error
//!   at most `e^S - 1 <= 2S` once `S = |x| t^(I+1) / (1-t) <= 1/2`;
//! * the term sum stops once consecutive term bounds decay by a factor
//!   `t^(2k+1)|x|^2 <= 1/2`, after which the remaining tail is at most
//!   twice the next term bound (geometric comparison).
//!
//! The majorant constants are computed from the inputs, never assumed, and
//! every reported value carries an exact dyadic error bound.

pub mod ball;

use crate::qseries::{h_series, theta_partial, TruncSeries};
use crate::scalar::Scalar;
use ball::Ball;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("working precision cannot certify the requested accuracy ({0})")]
    PrecisionExhausted(String),
    #[error("t-truncation too low: need more than {required}, have {actual}")]
    TruncationTooLow { required: usize, actual: usize },
}

/// A certified evaluation: the value ball, how many sum terms were used,
/// and the exact error bound (the ball radius as a rational).
#[derive(Clone, Debug)]
pub struct EntireEval {
    pub value: Ball,
    pub terms_used: usize,
    pub error_bound: BigRational,
}

fn check_t(t: &BigRational) -> Result<(), AnalyticError> {
    if t <= &BigRational::zero() || t >= &BigRational::one() {
        return Err(AnalyticError::InvalidParameter(format!(
            "t must lie strictly between 0 and 1, got {t}"
        )));
    }
    Ok(())
}

/// Lossy f64 view of a rational, for report rendering only. Stays finite
/// and accurate even when numerator and denominator far exceed the f64
/// range (values beyond it saturate to 0 or infinity as appropriate).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if Zero::is_zero(r) {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let shift = 64i64 + den.bits() as i64 - num.bits() as i64;
    let scaled: BigInt = if shift >= 0 {
        num << shift
    } else {
        num >> (-shift)
    };
    let q = scaled / den;
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi((-shift).clamp(-2_000_000, 2_000_000) as i32)
}

fn to_f64(r: &BigRational) -> f64 {
    rational_to_f64(r)
}

fn pow2_rational(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e))
    }
}

fn rat_pow(r: &BigRational, e: usize) -> BigRational {
    Scalar::pow(r, e)
}

/// Smallest product cutoff `I` with `S = xmag * t^(I+1) / (1-t)` below
/// `2^-(prec+8)` (and at most 1/2), together with the verified `S`.
/// The proposal comes from f64 logs; the returned bound is exact.
fn product_cutoff(
    xmag: &BigRational,
    t: &BigRational,
    prec: u32,
) -> Result<(usize, BigRational), AnalyticError> {
    let threshold = pow2_rational(-(prec as i64 + 8)).min(BigRational::new(1.into(), 2.into()));
    let tf = to_f64(t);
    let xf = to_f64(xmag).max(1.0);
    let geom = BigRational::one() - t;
    let mut cut = (((prec as f64 + 9.0) + xf.log2().max(0.0) - (1.0 - tf).log2())
        / -tf.log2())
    .ceil()
    .max(4.0) as usize;
    for _ in 0..64 {
        let s = xmag * rat_pow(t, cut + 1) / &geom;
        if s <= threshold {
            return Ok((cut, s));
        }
        cut *= 2;
    }
    Err(AnalyticError::PrecisionExhausted(
        "product cutoff search failed".into(),
    ))
}

/// Rational upper bound on `exp(s)` for `s >= 0`: `4^(ceil(s)+1)`.
fn exp_upper_bound(s: &BigRational) -> BigRational {
    let c = s.ceil().to_integer().to_u64().unwrap_or(u64::MAX).min(1 << 20);
    rat_pow(&BigRational::from_integer(BigInt::from(4u8)), c as usize + 1)
}

/// `(a; b)_inf = prod_(i>=0) (1 - a b^i)` as a ball, for real rational
/// `a` and `0 < b < 1`. The truncated factors are exact rationals; the
/// tail is folded into the radius.
pub fn pochhammer_inf_ball(
    a: &BigRational,
    b: &BigRational,
    prec: u32,
) -> Result<Ball, AnalyticError> {
    check_t(b)?;
    let amag = a.abs();
    let (cut, s) = product_cutoff(&amag.max(BigRational::one()), b, prec)?;
    let one = Ball::one(prec);
    let mut acc = one.clone();
    let mut abi = a.clone();
    for _ in 0..=cut {
        let factor = one.sub(&Ball::from_real_rational(&abi, prec));
        acc = acc.mul(&factor);
        abi *= b;
    }
    let two_s = &s + &s;
    Ok(acc.mul_one_plus_delta(&two_s))
}

/// Certified lower bound for `(t;t)_inf`, positive for `0 < t < 1`.
fn euler_product_lower_bound(t: &BigRational, prec: u32) -> Result<BigRational, AnalyticError> {
    let b = pochhammer_inf_ball(t, t, prec)?;
    let lb = b.center_re_rational() - b.rad_rational();
    if lb <= BigRational::zero() {
        return Err(AnalyticError::PrecisionExhausted(
            "(t;t)_inf lower bound not positive at this precision".into(),
        ));
    }
    Ok(lb)
}

/// Evaluate `H(x;t) = sum_k t^(k^2) x^(2k) / (t;t)_k * (x t^(k+1); t)_inf`
/// at a complex rational point with a certified error bound.
pub fn eval_h(
    x_re: &BigRational,
    x_im: &BigRational,
    t: &BigRational,
    prec: u32,
    target: Option<&BigRational>,
) -> Result<EntireEval, AnalyticError> {
    check_t(t)?;
    if let Some(tg) = target {
        if tg <= &BigRational::zero() {
            return Err(AnalyticError::InvalidParameter(
                "target accuracy must be positive".into(),
            ));
        }
    }
    let xb = Ball::from_rational(x_re, x_im, prec);
    let xmag = xb.mag_ub_rational();
    let (cut, s_tail) = product_cutoff(&xmag.clone().max(BigRational::one()), t, prec)?;
    let tail_delta = &s_tail + &s_tail;

    // reusable t-power balls up to the cutoff
    let tb = Ball::from_real_rational(t, prec);
    let mut tpow: Vec<Ball> = Vec::with_capacity(cut + 2);
    tpow.push(Ball::one(prec));
    for i in 1..=cut + 1 {
        let next = tpow[i - 1].mul(&tb);
        tpow.push(next);
    }

    let l_lb = euler_product_lower_bound(t, prec)?;
    let u_ub = exp_upper_bound(&(&xmag * t / (BigRational::one() - t)));
    let stop_eps = match target {
        Some(tg) => tg / BigRational::from_integer(4.into()),
        None => pow2_rational(-((prec as i64) / 2)),
    };

    let one = Ball::one(prec);
    let mut acc = Ball::zero(prec);
    let mut poch = one.clone(); // (t;t)_k as a ball
    let mut xpow2 = one.clone(); // x^(2k)
    let xsq = xb.mul(&xb);
    let mut k = 0usize;
    let tail_bound;
    loop {
        if k > 0 {
            poch = poch.mul(&one.sub(&tpow[k]));
            xpow2 = xpow2.mul(&xsq);
        }
        let inv_poch = poch.recip_real().ok_or_else(|| {
            AnalyticError::PrecisionExhausted(format!("(t;t)_{k} not certainly positive"))
        })?;
        let pref = Ball::from_real_rational(&rat_pow(t, k * k), prec).mul(&inv_poch);
        let mut prod = one.clone();
        for i in (k + 1)..=cut {
            prod = prod.mul(&one.sub(&tpow[i].mul(&xb)));
        }
        prod = prod.mul_one_plus_delta(&tail_delta);
        let term = pref.mul(&xpow2).mul(&prod);
        acc = acc.add(&term);

        // geometric stop: next-term bound and the decay ratio
        let next_bound =
            rat_pow(t, (k + 1) * (k + 1)) * rat_pow(&xmag, 2 * (k + 1)) * &u_ub / &l_lb;
        let ratio_small = rat_pow(t, 2 * k + 1) * &xmag * &xmag <= BigRational::new(1.into(), 2.into());
        let two_next = &next_bound + &next_bound;
        if ratio_small && two_next <= stop_eps {
            tail_bound = two_next;
            break;
        }
        k += 1;
        if k > 4 * (prec as usize) {
            return Err(AnalyticError::PrecisionExhausted(
                "term sum did not reach its geometric regime".into(),
            ));
        }
    }
    let value = acc.inflate_rational(&tail_bound);
    let error_bound = value.rad_rational();
    if let Some(tg) = target {
        if &error_bound > tg {
            return Err(AnalyticError::PrecisionExhausted(format!(
                "certified bound {} exceeds target {}",
                to_f64(&error_bound),
                to_f64(tg)
            )));
        }
    }
    Ok(EntireEval {
        value,
        terms_used: k + 1,
        error_bound,
    })
}

/// Partial theta `sum_n t^(n^2) x^n` with a certified bound.
pub fn eval_theta(
    x_re: &BigRational,
    x_im: &BigRational,
    t: &BigRational,
    prec: u32,
) -> Result<EntireEval, AnalyticError> {
    check_t(t)?;
    let xb = Ball::from_rational(x_re, x_im, prec);
    let xmag = xb.mag_ub_rational();
    let mut acc = Ball::zero(prec);
    let mut xpow = Ball::one(prec);
    let mut n = 0usize;
    let half = BigRational::new(1.into(), 2.into());
    let stop_eps = pow2_rational(-((prec as i64) / 2));
    let tail_bound;
    loop {
        if n > 0 {
            xpow = xpow.mul(&xb);
        }
        let term = Ball::from_real_rational(&rat_pow(t, n * n), prec).mul(&xpow);
        acc = acc.add(&term);
        let next_bound = rat_pow(t, (n + 1) * (n + 1)) * rat_pow(&xmag, n + 1);
        let ratio_small = rat_pow(t, 2 * n + 1) * &xmag <= half;
        let two_next = &next_bound + &next_bound;
        if ratio_small && two_next <= stop_eps {
            tail_bound = two_next;
            break;
        }
        n += 1;
        if n > 4 * (prec as usize) {
            return Err(AnalyticError::PrecisionExhausted(
                "theta sum did not reach its geometric regime".into(),
            ));
        }
    }
    let value = acc.inflate_rational(&tail_bound);
    let error_bound = value.rad_rational();
    Ok(EntireEval {
        value,
        terms_used: n + 1,
        error_bound,
    })
}

/// `H(t^-i; t)` as a positive real ball, via the re-indexed sum
/// `t^(-i^2) sum_(j>=0) t^(j^2) / (t;t)_(i+j) * (t^(j+1); t)_inf`.
pub fn eval_h_at_t_inverse_power(
    i: usize,
    t: &BigRational,
    prec: u32,
) -> Result<EntireEval, AnalyticError> {
    check_t(t)?;
    let one = Ball::one(prec);
    let l_lb = euler_product_lower_bound(t, prec)?;
    let mut poch = one.clone(); // (t;t)_(i+j)
    for m in 1..=i {
        poch = poch.mul(&one.sub(&Ball::from_real_rational(&rat_pow(t, m), prec)));
    }
    let mut acc = Ball::zero(prec);
    let stop_eps = pow2_rational(-((prec as i64) / 2));
    let half = BigRational::new(1.into(), 2.into());
    let mut j = 0usize;
    let tail_bound;
    loop {
        if j > 0 {
            poch = poch.mul(&one.sub(&Ball::from_real_rational(&rat_pow(t, i + j), prec)));
        }
        let inv_poch = poch.recip_real().ok_or_else(|| {
            AnalyticError::PrecisionExhausted(format!("(t;t)_{} not certainly positive", i + j))
        })?;
        let tail_prod = pochhammer_inf_ball(&rat_pow(t, j + 1), t, prec)?;
        let term = Ball::from_real_rational(&rat_pow(t, j * j), prec)
            .mul(&inv_poch)
            .mul(&tail_prod);
        acc = acc.add(&term);
        let next_bound = rat_pow(t, (j + 1) * (j + 1)) / &l_lb;
        let ratio_small = rat_pow(t, 2 * j + 1) <= half;
        let two_next = &next_bound + &next_bound;
        if ratio_small && two_next <= stop_eps {
            tail_bound = two_next;
            break;
        }
        j += 1;
    }
    let scaled = acc
        .inflate_rational(&tail_bound)
        .mul(&Ball::from_real_rational(&rat_pow(t, i * i).recip(), prec));
    let error_bound = scaled.rad_rational();
    Ok(EntireEval {
        value: scaled,
        terms_used: j + 1,
        error_bound,
    })
}

// ---------------------------------------------------------------------------
// Maclaurin comparison

/// Exact complex rational, for Horner evaluation of Maclaurin polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> CRat {
        CRat { re, im }
    }

    fn mul(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn add_real(&self, r: &BigRational) -> CRat {
        CRat {
            re: &self.re + r,
            im: self.im.clone(),
        }
    }

    pub fn mag_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// Exact Maclaurin coefficients of `H(x;t)` for rational `t`: numeric-mode
/// series coefficients are exact values, not truncations.
pub fn maclaurin_coeffs(n_trunc: usize, t: &BigRational) -> Vec<BigRational> {
    let series: TruncSeries<BigRational> = h_series(n_trunc, t);
    series.coeffs().to_vec()
}

/// Rigorous bound on the Maclaurin tail `sum_(n>N) |a_n| X^n`, using
/// `|a_n| <= (n/2 + 1) t^(ceil(n^2/4)) / L^2` with `L` a lower bound for
/// `(t;t)_inf` (the minimal exponent of the finitely many contributions
/// to `a_n` is `n^2/4 + ...`, each divided by two Pochhammer factors).
pub fn maclaurin_tail_bound(
    t: &BigRational,
    xmag: &BigRational,
    n_trunc: usize,
    prec: u32,
) -> Result<BigRational, AnalyticError> {
    check_t(t)?;
    let l = euler_product_lower_bound(t, prec)?;
    let l_sq = &l * &l;
    let term = |n: usize| -> BigRational {
        let e = n * n / 4 + usize::from(n * n % 4 != 0); // ceil(n^2/4)
        BigRational::new(((n + 2) as i64).into(), 2.into()) * rat_pow(t, e) * rat_pow(xmag, n) / &l_sq
    };
    let half = BigRational::new(1.into(), 2.into());
    let three_half_x = BigRational::new(3.into(), 2.into()) * xmag;
    let mut n0 = n_trunc + 1;
    while &three_half_x * rat_pow(t, (n0 - 1) / 2) > half {
        n0 += 1;
        if n0 > n_trunc + 10_000 {
            return Err(AnalyticError::PrecisionExhausted(
                "maclaurin tail bound did not reach its geometric regime".into(),
            ));
        }
    }
    let mut total = BigRational::zero();
    for n in (n_trunc + 1)..=n0 {
        total += term(n);
    }
    total += BigRational::from_integer(2.into()) * term(n0 + 1);
    Ok(total)
}

/// One sample in the Maclaurin-vs-analytic comparison.
#[derive(Clone, Debug)]
pub struct MaclaurinSample {
    pub x_re: BigRational,
    pub x_im: BigRational,
    pub distance: f64,
    pub allowed: f64,
    pub within: bool,
}

#[derive(Clone, Debug)]
pub struct MaclaurinReport {
    pub n_trunc: usize,
    pub samples: Vec<MaclaurinSample>,
    pub all_within: bool,
}

/// Deterministic sample points with `|x| <= radius`: mostly real, a few
/// complex.
pub fn sample_points(radius: &BigRational, count: usize) -> Vec<(BigRational, BigRational)> {
    let mut out = Vec::with_capacity(count);
    let complex_count = count / 5;
    let real_count = count - complex_count;
    for i in 0..real_count {
        // evenly spaced in [-radius, radius], avoiding exact zero
        let num = 2 * i as i64 + 1 - real_count as i64;
        let frac = BigRational::new(num.into(), (real_count as i64).into());
        out.push((radius * frac, BigRational::zero()));
    }
    for i in 0..complex_count {
        let a = BigRational::new((i as i64 + 1).into(), (2 * complex_count as i64 + 2).into());
        let b = BigRational::new((complex_count as i64 - i as i64).into(), (2 * complex_count as i64 + 2).into());
        out.push((radius * a, radius * b));
    }
    out
}

/// Evaluate the exact truncated Maclaurin polynomial at sampled points and
/// compare with the certified analytic evaluation; each discrepancy must
/// fall within the sum of the two certified bounds.
pub fn maclaurin_vs_analytic_check(
    t: &BigRational,
    radius: &BigRational,
    sample_count: usize,
    n_trunc: usize,
    prec: u32,
) -> Result<MaclaurinReport, AnalyticError> {
    check_t(t)?;
    let coeffs = maclaurin_coeffs(n_trunc, t);
    let mut samples = Vec::with_capacity(sample_count);
    let mut all_within = true;
    for (re, im) in sample_points(radius, sample_count) {
        let x = CRat::new(re.clone(), im.clone());
        // exact Horner
        let mut p = CRat::new(BigRational::zero(), BigRational::zero());
        for c in coeffs.iter().rev() {
            p = p.mul(&x).add_real(c);
        }
        let eval = eval_h(&re, &im, t, prec, None)?;
        let xmag = Ball::from_rational(&re, &im, prec).mag_ub_rational();
        let tail = maclaurin_tail_bound(t, &xmag, n_trunc, prec)?;
        let allowed = &eval.error_bound + &tail;
        let center = CRat::new(
            eval.value.center_re_rational(),
            eval.value.center_im_rational(),
        );
        let diff = CRat::new(&center.re - &p.re, &center.im - &p.im);
        let within = diff.mag_sq() <= &allowed * &allowed;
        all_within &= within;
        samples.push(MaclaurinSample {
            x_re: re,
            x_im: im,
            distance: to_f64(&diff.mag_sq()).sqrt(),
            allowed: to_f64(&allowed),
            within,
        });
    }
    Ok(MaclaurinReport {
        n_trunc,
        samples,
        all_within,
    })
}

// ---------------------------------------------------------------------------
// Positivity, valuations, smoothness, roots

#[derive(Clone, Debug)]
pub struct PositivityRow {
    pub label: String,
    pub value: f64,
    pub error_bound: f64,
    pub certified_positive: bool,
}

#[derive(Clone, Debug)]
pub struct PositivityReport {
    pub rows: Vec<PositivityRow>,
    pub all_positive: bool,
}

/// Signs of `H(x;t)` on a grid in `[0, t^-1)` and at `x = t^-i` for
/// `i <= i_max`, each certified by ball arithmetic.
pub fn positivity_scan(
    t: &BigRational,
    i_max: usize,
    grid: usize,
    prec: u32,
) -> Result<PositivityReport, AnalyticError> {
    check_t(t)?;
    let mut rows = Vec::new();
    let t_inv = t.recip();
    for j in 0..=grid {
        let x = &t_inv * BigRational::new((j as i64).into(), ((grid + 1) as i64).into());
        let eval = eval_h(&x, &BigRational::zero(), t, prec, None)?;
        rows.push(PositivityRow {
            label: format!("x={}", to_f64(&x)),
            value: eval.value.re_f64(),
            error_bound: to_f64(&eval.error_bound),
            certified_positive: eval.value.is_certainly_positive(),
        });
    }
    for i in 1..=i_max {
        let eval = eval_h_at_t_inverse_power(i, t, prec)?;
        rows.push(PositivityRow {
            label: format!("x=t^-{i}"),
            value: eval.value.re_f64(),
            error_bound: to_f64(&eval.error_bound),
            certified_positive: eval.value.is_certainly_positive(),
        });
    }
    let all_positive = rows.iter().all(|r| r.certified_positive);
    Ok(PositivityReport { rows, all_positive })
}

#[derive(Clone, Debug)]
pub struct ValuationRow {
    pub n: usize,
    pub valuation: Option<usize>,
    pub expected_valuation: usize,
    pub sign: i8,
    pub expected_sign: i8,
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct ValuationReport {
    pub rows: Vec<ValuationRow>,
    pub all_match: bool,
}

/// Reports, for each `n <= n_max`, whether the `x^n` coefficient of
/// `H(x;t)` has `t`-adic valuation `ceil(n^2/4)` and leading sign
/// `(-1)^n`. This scans a conjectural pattern: the report never feeds
/// assertions elsewhere.
pub fn coefficient_valuation_scan(
    n_max: usize,
    t_trunc: usize,
) -> Result<ValuationReport, AnalyticError> {
    let required = n_max * n_max / 4 + usize::from(n_max * n_max % 4 != 0);
    if t_trunc <= required {
        return Err(AnalyticError::TruncationTooLow {
            required: required + 1,
            actual: t_trunc,
        });
    }
    let t = crate::scalar::TSeries::t(t_trunc);
    let h = h_series(n_max, &t);
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut all_match = true;
    for n in 0..=n_max {
        let c = h.coeff(n);
        let expected_valuation = n * n / 4 + usize::from(n * n % 4 != 0);
        let expected_sign = if n % 2 == 0 { 1 } else { -1 };
        let (valuation, sign) = match c.leading() {
            Some((v, lead)) => (Some(v), if lead.is_positive() { 1 } else { -1 }),
            None => (None, 0),
        };
        let matches = valuation == Some(expected_valuation) && sign == expected_sign;
        all_match &= matches;
        rows.push(ValuationRow {
            n,
            valuation,
            expected_valuation,
            sign,
            expected_sign,
            matches,
        });
    }
    Ok(ValuationReport { rows, all_match })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceTarget {
    /// Even part: `F(y;t)` with `H(x;t) = F(x^2;t) + x G(x^2;t)`.
    F,
    /// Odd part `G`.
    G,
    /// The partial theta function, whose trace is exactly constant.
    Theta,
}

impl TraceTarget {
    pub fn parse(s: &str) -> Option<TraceTarget> {
        match s {
            "F" | "f" => Some(TraceTarget::F),
            "G" | "g" => Some(TraceTarget::G),
            "theta" | "Theta" => Some(TraceTarget::Theta),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceRow {
    pub n: usize,
    /// `a_(n-1) a_(n+1) / a_n^2`, the consecutive-quotient ratio whose
    /// limit is the smooth-coefficient constant (`t^2` for the partial
    /// theta function). `None` marks a zero denominator, flagged rather
    /// than interpolated.
    pub ratio: Option<BigRational>,
    pub distance_to_t_squared: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SmoothnessTrace {
    pub target: TraceTarget,
    pub rows: Vec<TraceRow>,
}

/// Ratio trace for the designated coefficient sequence, from exact
/// coefficients evaluated at rational `t`.
pub fn smoothness_trace(
    target: TraceTarget,
    t: &BigRational,
    n_max: usize,
) -> Result<SmoothnessTrace, AnalyticError> {
    check_t(t)?;
    let coeffs: Vec<BigRational> = match target {
        TraceTarget::F => {
            let h = h_series(2 * n_max + 2, t);
            (0..=n_max + 1).map(|n| h.coeff(2 * n).clone()).collect()
        }
        TraceTarget::G => {
            let h = h_series(2 * n_max + 3, t);
            (0..=n_max + 1).map(|n| h.coeff(2 * n + 1).clone()).collect()
        }
        TraceTarget::Theta => {
            let th = theta_partial(n_max + 1, t);
            th.coeffs().to_vec()
        }
    };
    let t_sq = t * t;
    let mut rows = Vec::new();
    for n in 1..coeffs.len() - 1 {
        let denom = &coeffs[n] * &coeffs[n];
        if Zero::is_zero(&denom) {
            rows.push(TraceRow {
                n,
                ratio: None,
                distance_to_t_squared: None,
            });
            continue;
        }
        let ratio = &coeffs[n - 1] * &coeffs[n + 1] / denom;
        let dist = to_f64(&(&ratio - &t_sq)).abs();
        rows.push(TraceRow {
            n,
            ratio: Some(ratio),
            distance_to_t_squared: Some(dist),
        });
    }
    Ok(SmoothnessTrace { target, rows })
}

#[derive(Clone, Debug)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub evidence: String,
}

#[derive(Clone, Debug)]
pub struct RootScanReport {
    pub target: String,
    pub brackets: Vec<RootBracket>,
    pub undecided: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootTarget {
    /// `H(x;t)` on the real axis, ball evaluation.
    HReal,
    /// Even part `F(y;t)`, exact polynomial plus tail bound.
    FReal,
    /// Odd part `G(y;t)`.
    GReal,
}

impl RootTarget {
    pub fn parse(s: &str) -> Option<RootTarget> {
        match s {
            "h" | "H" => Some(RootTarget::HReal),
            "f" | "F" => Some(RootTarget::FReal),
            "g" | "G" => Some(RootTarget::GReal),
            _ => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            RootTarget::HReal => "H",
            RootTarget::FReal => "F",
            RootTarget::GReal => "G",
        }
    }
}

// certified sign: +1 / -1, or 0 when the ball straddles zero
fn certified_sign_h(x: &BigRational, t: &BigRational, prec: u32) -> Result<i8, AnalyticError> {
    let eval = eval_h(x, &BigRational::zero(), t, prec, None)?;
    if eval.value.is_certainly_positive() {
        Ok(1)
    } else if eval.value.neg().is_certainly_positive() {
        Ok(-1)
    } else {
        Ok(0)
    }
}

/// Sign of `sum a_n y^n` (a Maclaurin slice of H) at rational `y`, exact
/// polynomial value against the rigorous tail bound.
fn certified_sign_slice(
    coeffs: &[BigRational],
    stride_offset: (usize, usize),
    y: &BigRational,
    t: &BigRational,
    prec: u32,
) -> Result<i8, AnalyticError> {
    let mut value = BigRational::zero();
    let mut pw = BigRational::one();
    for c in coeffs {
        value += c * &pw;
        pw *= y;
    }
    // The slice keeps m = 0..=M with coefficient m at H-degree
    // stride*m + offset; the discarded terms satisfy |a_(sm+o) y^m| <=
    // |a_n| xmag^n with xmag = max(1, |y|) (then |y| <= xmag^2 <= xmag^s),
    // so the full H tail past degree stride*M + offset covers them.
    let (stride, offset) = stride_offset;
    let ymag = y.abs();
    let xmag = ymag.clone().max(BigRational::one());
    let h_tail = maclaurin_tail_bound(t, &xmag, stride * (coeffs.len() - 1) + offset, prec)?;
    if value.abs() > h_tail {
        Ok(if value.is_positive() { 1 } else { -1 })
    } else {
        Ok(0)
    }
}

/// Locates sign changes of the target on `[lo, hi]` and bisects each
/// bracket down to `tol`. Brackets where the sign cannot be certified are
/// counted as undecided rather than refined past the precision.
pub fn root_scan(
    target: RootTarget,
    t: &BigRational,
    lo: &BigRational,
    hi: &BigRational,
    grid: usize,
    prec: u32,
    tol: &BigRational,
) -> Result<RootScanReport, AnalyticError> {
    check_t(t)?;
    if lo >= hi || grid < 2 {
        return Ok(RootScanReport {
            target: target.name().into(),
            brackets: Vec::new(),
            undecided: 0,
        });
    }
    let n_trunc = 60usize;
    let slice: Option<(Vec<BigRational>, (usize, usize))> = match target {
        RootTarget::HReal => None,
        RootTarget::FReal => {
            let h = h_series(2 * n_trunc, t);
            Some((
                (0..=n_trunc).map(|m| h.coeff(2 * m).clone()).collect(),
                (2, 0),
            ))
        }
        RootTarget::GReal => {
            let h = h_series(2 * n_trunc + 1, t);
            Some((
                (0..=n_trunc).map(|m| h.coeff(2 * m + 1).clone()).collect(),
                (2, 1),
            ))
        }
    };
    let sign_at = |x: &BigRational| -> Result<i8, AnalyticError> {
        match (&target, &slice) {
            (RootTarget::HReal, _) => certified_sign_h(x, t, prec),
            (_, Some((coeffs, so))) => certified_sign_slice(coeffs, *so, x, t, prec),
            _ => unreachable!(),
        }
    };

    let step = (hi - lo) / BigRational::from_integer((grid as i64).into());
    let mut xs = Vec::with_capacity(grid + 1);
    for j in 0..=grid {
        xs.push(lo + &step * BigRational::from_integer((j as i64).into()));
    }
    let signs: Result<Vec<i8>, _> = xs.iter().map(|x| sign_at(x)).collect();
    let signs = signs?;
    let mut brackets = Vec::new();
    let mut undecided = signs.iter().filter(|&&s| s == 0).count();
    for w in 0..grid {
        let (s1, s2) = (signs[w], signs[w + 1]);
        if s1 != 0 && s2 != 0 && s1 != s2 {
            // bisect
            let mut a = xs[w].clone();
            let mut b = xs[w + 1].clone();
            let sa = s1;
            let mut decided = true;
            while &b - &a > *tol {
                let mid = (&a + &b) / BigRational::from_integer(2.into());
                let sm = sign_at(&mid)?;
                if sm == 0 {
                    decided = false;
                    break;
                }
                if sm == sa {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            if decided {
                brackets.push(RootBracket {
                    lo: to_f64(&a),
                    hi: to_f64(&b),
                    evidence: "certified sign change".into(),
                });
            } else {
                undecided += 1;
            }
        }
    }
    Ok(RootScanReport {
        target: target.name().into(),
        brackets,
        undecided,
    })
}

/// Winding number of `H(x;t)` around a rectangle in the complex plane:
/// argument-principle root-count evidence. Returns `None` when a boundary
/// sample cannot be certified nonzero or the walk is too coarse.
pub fn winding_count_h(
    t: &BigRational,
    re_lo: &BigRational,
    re_hi: &BigRational,
    im_lo: &BigRational,
    im_hi: &BigRational,
    samples_per_edge: usize,
    prec: u32,
) -> Result<Option<i64>, AnalyticError> {
    check_t(t)?;
    let m = samples_per_edge.max(4);
    let f = |a: &BigRational, b: &BigRational, j: usize| -> BigRational {
        a + (b - a) * BigRational::new((j as i64).into(), (m as i64).into())
    };
    let mut path = Vec::with_capacity(4 * m);
    for j in 0..m {
        path.push((f(re_lo, re_hi, j), im_lo.clone()));
    }
    for j in 0..m {
        path.push((re_hi.clone(), f(im_lo, im_hi, j)));
    }
    for j in 0..m {
        path.push((f(re_hi, re_lo, j), im_hi.clone()));
    }
    for j in 0..m {
        path.push((re_lo.clone(), f(im_hi, im_lo, j)));
    }
    let mut angles = Vec::with_capacity(path.len());
    for (re, im) in &path {
        let eval = eval_h(re, im, t, prec, None)?;
        if !eval.value.is_certainly_nonzero() {
            return Ok(None);
        }
        angles.push(eval.value.im_f64().atan2(eval.value.re_f64()));
    }
    let mut total = 0.0f64;
    for i in 0..angles.len() {
        let next = angles[(i + 1) % angles.len()];
        let mut d = next - angles[i];
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        if d.abs() > std::f64::consts::FRAC_PI_2 {
            return Ok(None); // too coarse to trust
        }
        total += d;
    }
    Ok(Some((total / (2.0 * std::f64::consts::PI)).round() as i64))
}
