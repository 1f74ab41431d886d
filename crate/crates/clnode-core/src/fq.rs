//! Small finite fields with table-driven arithmetic.
//!
//! Supported orders are q in {2, 3, 4, 5, 7, 8, 9}. Prime fields use
//! residue arithmetic; the prime-power fields are built from a fixed
//! irreducible polynomial with elements encoded as base-p digit strings:
//!
//! * GF(4) = F_2[y] / (y^2 + y + 1)
//! * GF(8) = F_2[y] / (y^3 + y + 1)
//! * GF(9) = F_3[y] / (y^2 + 1)
//!
//! The full add/mul/inv tables are materialized at construction and the
//! field axioms are verified exhaustively (q <= 9 keeps that at a few
//! hundred triples), so a bad table cannot survive construction.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("unsupported field order {0}: supported q are 2,3,4,5,7,8,9")]
    UnsupportedField(u8),
}

pub const SUPPORTED_Q: [u8; 7] = [2, 3, 4, 5, 7, 8, 9];

/// A finite field of order `q <= 9` with precomputed operation tables.
#[derive(Clone, Debug)]
pub struct Fq {
    q: u8,
    p: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Fq {
    pub fn new(q: u8) -> Result<Fq, FieldError> {
        let (p, deg, modulus): (u8, u32, &[u8]) = match q {
            2 => (2, 1, &[]),
            3 => (3, 1, &[]),
            5 => (5, 1, &[]),
            7 => (7, 1, &[]),
            4 => (2, 2, &[1, 1, 1]),    // y^2 + y + 1
            8 => (2, 3, &[1, 1, 0, 1]), // y^3 + y + 1
            9 => (3, 2, &[1, 0, 1]),    // y^2 + 1
            _ => return Err(FieldError::UnsupportedField(q)),
        };
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                if deg == 1 {
                    add[a * n + b] = ((a + b) % p as usize) as u8;
                    mul[a * n + b] = ((a * b) % p as usize) as u8;
                } else {
                    add[a * n + b] = poly_add(a, b, p);
                    mul[a * n + b] = poly_mul_mod(a, b, p, deg, modulus);
                }
            }
        }
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u8)
            .collect();
        let inv = (0..n)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u8
                }
            })
            .collect();
        let f = Fq {
            q,
            p,
            add,
            mul,
            neg,
            inv,
        };
        f.verify_axioms();
        Ok(f)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn characteristic(&self) -> u8 {
        self.p
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        self.inv[a as usize]
    }

    /// Image of an integer under Z -> F_q (reduction mod p into the prime
    /// subfield).
    pub fn from_int(&self, v: i64) -> u8 {
        let p = self.p as i64;
        let r = ((v % p) + p) % p;
        r as u8
    }

    fn verify_axioms(&self) {
        let n = self.q;
        for a in 0..n {
            assert_eq!(self.add(a, 0), a);
            assert_eq!(self.mul(a, 1), a);
            assert_eq!(self.add(a, self.neg(a)), 0);
            if a != 0 {
                assert_eq!(self.mul(a, self.inv(a)), 1);
            }
            for b in 0..n {
                assert_eq!(self.add(a, b), self.add(b, a));
                assert_eq!(self.mul(a, b), self.mul(b, a));
                for c in 0..n {
                    assert_eq!(self.add(self.add(a, b), c), self.add(a, self.add(b, c)));
                    assert_eq!(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c)));
                    assert_eq!(
                        self.mul(a, self.add(b, c)),
                        self.add(self.mul(a, b), self.mul(a, c))
                    );
                }
            }
        }
    }
}

// digitwise addition of base-p encodings
fn poly_add(a: usize, b: usize, p: u8) -> u8 {
    let p = p as usize;
    let mut out = 0;
    let mut mult = 1;
    let (mut a, mut b) = (a, b);
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * mult;
        a /= p;
        b /= p;
        mult *= p;
    }
    out as u8
}

// polynomial multiplication followed by reduction mod the fixed irreducible
fn poly_mul_mod(a: usize, b: usize, p: u8, deg: u32, modulus: &[u8]) -> u8 {
    let p = p as usize;
    let digits = |mut v: usize| {
        let mut d = Vec::new();
        while v > 0 {
            d.push(v % p);
            v /= p;
        }
        d
    };
    let da = digits(a);
    let db = digits(b);
    let mut prod = vec![0usize; da.len() + db.len() + 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // reduce with y^deg = -(m_0 + m_1 y + ... + m_(deg-1) y^(deg-1)), monic modulus
    let d = deg as usize;
    for i in (d..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &m) in modulus.iter().enumerate().take(d) {
            let idx = i - d + j;
            prod[idx] = (prod[idx] + (p - (c * m as usize) % p) % p) % p;
        }
    }
    let mut out = 0;
    let mut mult = 1;
    for &c in prod.iter().take(d) {
        out += c * mult;
        mult *= p;
    }
    out as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_supported_fields_construct() {
        for q in SUPPORTED_Q {
            let f = Fq::new(q).unwrap();
            assert_eq!(f.q(), q);
        }
        assert!(Fq::new(6).is_err());
        assert!(Fq::new(11).is_err());
    }

    #[test]
    fn gf4_has_order_three_units() {
        let f = Fq::new(4).unwrap();
        for a in 1..4u8 {
            let a3 = f.mul(f.mul(a, a), a);
            assert_eq!(a3, 1, "a = {a}");
        }
    }

    #[test]
    fn gf8_multiplicative_group_is_cyclic_of_order_seven() {
        let f = Fq::new(8).unwrap();
        for a in 2..8u8 {
            let mut pow = a;
            let mut ord = 1;
            while pow != 1 {
                pow = f.mul(pow, a);
                ord += 1;
            }
            assert_eq!(ord, 7, "a = {a}");
        }
    }

    #[test]
    fn gf9_frobenius_cubing_fixes_exactly_the_prime_field() {
        let f = Fq::new(9).unwrap();
        for a in 0..9u8 {
            let a3 = f.mul(f.mul(a, a), a);
            assert_eq!(a3 == a, a < 3, "a = {a}");
        }
    }

    #[test]
    fn from_int_reduces_mod_characteristic() {
        let f = Fq::new(9).unwrap();
        assert_eq!(f.from_int(-1), 2);
        assert_eq!(f.from_int(3), 0);
        let g = Fq::new(7).unwrap();
        assert_eq!(g.from_int(-1), 6);
    }
}
