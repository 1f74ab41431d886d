//! Complex ball arithmetic over fixed-point big integers.
//!
//! A [`Ball`] represents the disc `|z - (re + im*i) * 2^-prec| <= rad * 2^-prec`.
//! Centers are scaled `BigInt`s, the radius a scaled `BigUint`; every
//! operation rounds the center to nearest and the radius up, so the disc
//! always contains the exact result. Radii are exact dyadic rationals:
//! no hidden epsilons, and comparisons against rational tolerances are
//! decidable exactly.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    re: BigInt,
    im: BigInt,
    rad: BigUint,
    prec: u32,
}

/// `round(x / 2^k)` to nearest, plus whether the division was exact.
fn shift_round(x: &BigInt, k: u32) -> (BigInt, bool) {
    if k == 0 {
        return (x.clone(), true);
    }
    let exact = (x & ((BigInt::one() << k) - 1)) == BigInt::zero();
    let half = BigInt::one() << (k - 1);
    ((x + half) >> k, exact)
}

fn ceil_shift(x: &BigUint, k: u32) -> BigUint {
    (x + ((BigUint::one() << k) - 1u32)) >> k
}

/// Convert a scaled integer `v * 2^-prec` to the nearest f64.
pub fn dyadic_to_f64(v: &BigInt, prec: u32) -> f64 {
    let bits = v.bits();
    if bits <= 52 {
        let (sign, digits) = v.to_u64_digits();
        let mag = digits.first().copied().unwrap_or(0) as f64;
        let signed = if sign == Sign::Minus { -mag } else { mag };
        return signed * 2f64.powi(-(prec as i32));
    }
    let shift = (bits as i64 - 52) as u32;
    let (shifted, _) = shift_round(v, shift);
    let (sign, digits) = shifted.to_u64_digits();
    let mag = digits.first().copied().unwrap_or(0) as f64;
    let signed = if sign == Sign::Minus { -mag } else { mag };
    signed * 2f64.powi(shift as i32 - prec as i32)
}

impl Ball {
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn zero(prec: u32) -> Ball {
        Ball {
            re: BigInt::zero(),
            im: BigInt::zero(),
            rad: BigUint::zero(),
            prec,
        }
    }

    pub fn one(prec: u32) -> Ball {
        Ball {
            re: BigInt::one() << prec,
            im: BigInt::zero(),
            rad: BigUint::zero(),
            prec,
        }
    }

    /// Exact dyadic center with zero radius.
    pub fn from_dyadic(re: BigInt, im: BigInt, prec: u32) -> Ball {
        Ball {
            re,
            im,
            rad: BigUint::zero(),
            prec,
        }
    }

    /// Round a complex rational into a ball; the radius is zero when the
    /// rounding happens to be exact, otherwise one ulp.
    pub fn from_rational(re: &BigRational, im: &BigRational, prec: u32) -> Ball {
        let round = |v: &BigRational| -> (BigInt, bool) {
            let scaled_num = v.numer() << prec;
            let den = v.denom();
            let (q, r) = num_integer::Integer::div_mod_floor(&scaled_num, den);
            if r.is_zero() {
                (q, true)
            } else {
                // round to nearest
                if &(&r << 1) >= den {
                    (q + 1, false)
                } else {
                    (q, false)
                }
            }
        };
        let (cre, e1) = round(re);
        let (cim, e2) = round(im);
        Ball {
            re: cre,
            im: cim,
            rad: if e1 && e2 { BigUint::zero() } else { BigUint::one() },
            prec,
        }
    }

    pub fn from_real_rational(re: &BigRational, prec: u32) -> Ball {
        Ball::from_rational(re, &BigRational::zero(), prec)
    }

    pub fn center_re_rational(&self) -> BigRational {
        BigRational::new(self.re.clone(), BigInt::one() << self.prec)
    }

    pub fn center_im_rational(&self) -> BigRational {
        BigRational::new(self.im.clone(), BigInt::one() << self.prec)
    }

    pub fn rad_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.rad.clone()),
            BigInt::one() << self.prec,
        )
    }

    pub fn re_f64(&self) -> f64 {
        dyadic_to_f64(&self.re, self.prec)
    }

    pub fn im_f64(&self) -> f64 {
        dyadic_to_f64(&self.im, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        dyadic_to_f64(&BigInt::from(self.rad.clone()), self.prec)
    }

    pub fn add(&self, o: &Ball) -> Ball {
        assert_eq!(self.prec, o.prec);
        Ball {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        assert_eq!(self.prec, o.prec);
        Ball {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            re: -self.re.clone(),
            im: -self.im.clone(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    /// Upper bound on the center magnitude, in ulps.
    fn center_mag_ub(&self) -> BigUint {
        let s = self.re.magnitude() * self.re.magnitude()
            + self.im.magnitude() * self.im.magnitude();
        s.sqrt() + 1u32
    }

    /// Upper bound on `|z|` over the ball, as an exact dyadic rational.
    pub fn mag_ub_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.center_mag_ub() + &self.rad),
            BigInt::one() << self.prec,
        )
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        assert_eq!(self.prec, o.prec);
        let p = self.prec;
        let rr = &self.re * &o.re - &self.im * &o.im;
        let ii = &self.re * &o.im + &self.im * &o.re;
        let (cre, e1) = shift_round(&rr, p);
        let (cim, e2) = shift_round(&ii, p);
        // |z1 z2 - c1 c2| <= |c1| r2 + |c2| r1 + r1 r2, at scale 2^-2p
        let m1 = self.center_mag_ub();
        let m2 = o.center_mag_ub();
        let err = m1 * &o.rad + m2 * &self.rad + &self.rad * &o.rad;
        let mut rad = ceil_shift(&err, p);
        if !(e1 && e2) {
            rad += 1u32; // center rounding, <= 1/2 ulp per component
        }
        Ball {
            re: cre,
            im: cim,
            rad,
            prec: p,
        }
    }

    pub fn pow(&self, e: usize) -> Ball {
        let mut acc = Ball::one(self.prec);
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

    /// Reciprocal of a real ball that is certainly positive.
    /// Returns `None` when the ball touches zero or is not real.
    pub fn recip_real(&self) -> Option<Ball> {
        if !self.im.is_zero() {
            return None;
        }
        let lo = &self.re - BigInt::from(self.rad.clone());
        if !lo.is_positive() {
            return None;
        }
        let hi = &self.re + BigInt::from(self.rad.clone());
        let scale = BigInt::one() << (2 * self.prec);
        let inv_lo = &scale / &hi; // floor: lower bound of 1/x
        let inv_hi = &scale / &lo + 1; // upper bound of 1/x
        let center = (&inv_lo + &inv_hi) >> 1;
        let diff: BigInt = &inv_hi - &inv_lo;
        let rad = diff.magnitude() + BigUint::one();
        Some(Ball {
            re: center,
            im: BigInt::zero(),
            rad,
            prec: self.prec,
        })
    }

    /// Certified positivity of a real ball.
    pub fn is_certainly_positive(&self) -> bool {
        self.im.is_zero() && self.re.is_positive() && self.re.magnitude() > &self.rad
    }

    /// Certified nonzero (complex), via `|c| >= max(|re|, |im|) > rad`.
    pub fn is_certainly_nonzero(&self) -> bool {
        self.re.magnitude().max(self.im.magnitude()) > &self.rad
    }

    /// Grow the radius by an exact rational amount (rounded up).
    pub fn inflate_rational(&self, extra: &BigRational) -> Ball {
        assert!(!extra.is_negative());
        let num = extra.numer().magnitude() << self.prec;
        let den = extra.denom().magnitude();
        let add = (num + den - BigUint::one()) / den;
        Ball {
            re: self.re.clone(),
            im: self.im.clone(),
            rad: &self.rad + add,
            prec: self.prec,
        }
    }

    /// Multiply by `1 + delta` with `|delta| <= bound` (a certified tail
    /// factor for truncated infinite products): adds `|z| * bound` to the
    /// radius.
    pub fn mul_one_plus_delta(&self, bound: &BigRational) -> Ball {
        let mag = self.mag_ub_rational();
        self.inflate_rational(&(mag * bound))
    }

    /// Exact squared distance between ball centers, as a rational.
    pub fn center_dist_sq_rational(&self, o: &Ball) -> BigRational {
        let dre = self.center_re_rational() - o.center_re_rational();
        let dim = self.center_im_rational() - o.center_im_rational();
        &dre * &dre + &dim * &dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_roundtrip_is_tight() {
        let b = Ball::from_rational(&rat(1, 2), &rat(0, 1), 64);
        assert_eq!(b.center_re_rational(), rat(1, 2));
        assert_eq!(b.rad_rational(), rat(0, 1)); // exactly representable
        let c = Ball::from_rational(&rat(1, 3), &rat(0, 1), 64);
        assert!(c.rad_rational() <= rat(1, 1 << 62));
        let err = (c.center_re_rational() - rat(1, 3)).abs();
        assert!(err <= c.rad_rational());
    }

    #[test]
    fn mul_contains_exact_product() {
        let prec = 96;
        let a = Ball::from_rational(&rat(1, 3), &rat(1, 7), prec);
        let b = Ball::from_rational(&rat(-2, 5), &rat(1, 11), prec);
        let p = a.mul(&b);
        // exact product of the rationals
        let (ar, ai) = (rat(1, 3), rat(1, 7));
        let (br, bi) = (rat(-2, 5), rat(1, 11));
        let exact_re = &ar * &br - &ai * &bi;
        let exact_im = &ar * &bi + &ai * &br;
        let dre = (p.center_re_rational() - exact_re).abs();
        let dim = (p.center_im_rational() - exact_im).abs();
        let r = p.rad_rational();
        assert!(&dre * &dre + &dim * &dim <= &r * &r, "product escaped its ball");
    }

    #[test]
    fn recip_real_brackets_the_inverse() {
        let prec = 128;
        let b = Ball::from_rational(&rat(7, 3), &rat(0, 1), prec);
        let inv = b.recip_real().unwrap();
        let err = (inv.center_re_rational() - rat(3, 7)).abs();
        assert!(err <= inv.rad_rational());
        assert!(inv.rad_rational() < rat(1, 1 << 62));
        // balls touching zero have no reciprocal
        let tiny = Ball::from_rational(&rat(1, 1 << 30), &rat(0, 1), 16);
        assert!(tiny.recip_real().is_none());
    }

    #[test]
    fn positivity_and_nonzero_certificates() {
        let prec = 64;
        let pos = Ball::from_rational(&rat(1, 4), &rat(0, 1), prec);
        assert!(pos.is_certainly_positive());
        assert!(pos.is_certainly_nonzero());
        let zeroish = Ball::from_rational(&rat(0, 1), &rat(0, 1), prec);
        assert!(!zeroish.is_certainly_nonzero());
        let neg = pos.neg();
        assert!(!neg.is_certainly_positive());
        assert!(neg.is_certainly_nonzero());
    }

    #[test]
    fn pow_tracks_exact_value() {
        let prec = 128;
        let b = Ball::from_rational(&rat(3, 2), &rat(0, 1), prec);
        let p = b.pow(10);
        let exact = rat(3, 2).pow(10);
        let err = (p.center_re_rational() - exact).abs();
        assert!(err <= p.rad_rational());
    }

    #[test]
    fn dyadic_to_f64_small_and_large() {
        assert_eq!(dyadic_to_f64(&BigInt::from(3), 1), 1.5);
        let big = BigInt::one() << 200;
        let v = dyadic_to_f64(&big, 100);
        assert!((v - 2f64.powi(100)).abs() < 2f64.powi(60));
        assert_eq!(dyadic_to_f64(&BigInt::from(-4), 2), -1.0);
    }

    #[test]
    fn tail_inflation_grows_radius_by_magnitude_times_bound() {
        let prec = 64;
        let b = Ball::from_rational(&rat(2, 1), &rat(0, 1), prec);
        let inflated = b.mul_one_plus_delta(&rat(1, 100));
        assert!(inflated.rad_rational() >= rat(2, 100));
        assert!(inflated.rad_rational() <= rat(3, 100));
    }
}
