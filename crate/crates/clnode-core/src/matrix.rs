//! Dense square matrices over the small fields of [`crate::fq`].
//!
//! The portable byte-per-entry implementation defines correctness; the
//! packed fast paths for F_2 (one bit per entry, rows in machine words)
//! and F_3 (bitsliced one-hot planes) are optimizations for the census hot
//! loops and are gated by exhaustive equivalence tests against the
//! portable rank.

use crate::fq::Fq;

/// Row-major `n x n` matrix with entries in `0..q`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct FqMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl FqMatrix {
    pub fn zero(n: usize) -> Self {
        FqMatrix {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_entries(n: usize, entries: Vec<u8>) -> Self {
        assert_eq!(entries.len(), n * n);
        FqMatrix { n, entries }
    }

    /// Decode the matrix with the given row-major odometer index:
    /// entry (i,j) is digit `i*n + j` of `index` written base `q`.
    pub fn from_index(n: usize, q: u8, index: u64) -> Self {
        let mut entries = vec![0u8; n * n];
        let mut idx = index;
        for e in entries.iter_mut() {
            *e = (idx % q as u64) as u8;
            idx /= q as u64;
        }
        debug_assert_eq!(idx, 0, "index exceeds q^(n^2)");
        FqMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, rhs: &FqMatrix, f: &Fq) -> FqMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = FqMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, c: u8, f: &Fq) -> FqMatrix {
        FqMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&e| f.mul(e, c)).collect(),
        }
    }

    pub fn add(&self, rhs: &FqMatrix, f: &Fq) -> FqMatrix {
        assert_eq!(self.n, rhs.n);
        FqMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    /// `A^n == 0` check via repeated squaring up to the first power `>= n`.
    pub fn is_nilpotent(&self, f: &Fq) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut pw = self.clone();
        let mut e = 1usize;
        while e < self.n {
            pw = pw.mul(&pw, f);
            e *= 2;
        }
        pw.is_zero()
    }

    /// Rank by Gaussian elimination (portable reference implementation).
    pub fn rank(&self, f: &Fq) -> usize {
        let n = self.n;
        let mut m = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| m[r * n + col] != 0);
            let Some(pr) = pivot else { continue };
            for j in 0..n {
                m.swap(rank * n + j, pr * n + j);
            }
            let inv = f.inv(m[rank * n + col]);
            for j in 0..n {
                m[rank * n + j] = f.mul(m[rank * n + j], inv);
            }
            for r in 0..n {
                if r != rank && m[r * n + col] != 0 {
                    let factor = m[r * n + col];
                    for j in 0..n {
                        let sub = f.mul(factor, m[rank * n + j]);
                        m[r * n + j] = f.sub(m[r * n + j], sub);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn nullity(&self, f: &Fq) -> usize {
        self.n - self.rank(f)
    }

    /// Basis of the right kernel `{v : Av = 0}`, as columns.
    pub fn kernel_basis(&self, f: &Fq) -> Vec<Vec<u8>> {
        let n = self.n;
        let mut m = self.entries.clone();
        // reduced row echelon form, tracking pivot columns
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| m[r * n + col] != 0);
            let Some(pr) = pivot else { continue };
            for j in 0..n {
                m.swap(rank * n + j, pr * n + j);
            }
            let inv = f.inv(m[rank * n + col]);
            for j in 0..n {
                m[rank * n + j] = f.mul(m[rank * n + j], inv);
            }
            for r in 0..n {
                if r != rank && m[r * n + col] != 0 {
                    let factor = m[r * n + col];
                    for j in 0..n {
                        let sub = f.mul(factor, m[rank * n + j]);
                        m[r * n + j] = f.sub(m[r * n + j], sub);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u8; n];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m[r * n + fc]);
                }
                v
            })
            .collect()
    }

    pub fn transpose(&self) -> FqMatrix {
        let n = self.n;
        let mut out = FqMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Rows spanning the left kernel `{w : wA = 0}`.
    pub fn left_kernel_rows(&self, f: &Fq) -> Vec<Vec<u8>> {
        self.transpose().kernel_basis(f)
    }

    /// Solve `A B = I` by column elimination; returns the two-sided
    /// inverse when it exists. The result is verified by multiplication,
    /// not assumed.
    pub fn inverse(&self, f: &Fq) -> Option<FqMatrix> {
        let n = self.n;
        if n == 0 {
            return Some(FqMatrix::zero(0));
        }
        let mut aug = vec![0u8; n * 2 * n];
        for i in 0..n {
            for j in 0..n {
                aug[i * 2 * n + j] = self.get(i, j);
            }
            aug[i * 2 * n + n + i] = 1;
        }
        let w = 2 * n;
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| aug[r * w + col] != 0);
            let Some(pr) = pivot else { return None };
            for j in 0..w {
                aug.swap(rank * w + j, pr * w + j);
            }
            let inv = f.inv(aug[rank * w + col]);
            for j in 0..w {
                aug[rank * w + j] = f.mul(aug[rank * w + j], inv);
            }
            for r in 0..n {
                if r != rank && aug[r * w + col] != 0 {
                    let factor = aug[r * w + col];
                    for j in 0..w {
                        let sub = f.mul(factor, aug[rank * w + j]);
                        aug[r * w + j] = f.sub(aug[r * w + j], sub);
                    }
                }
            }
            rank += 1;
        }
        let mut out = FqMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug[i * w + n + j]);
            }
        }
        let id = FqMatrix::identity(n);
        assert!(
            self.mul(&out, f) == id && out.mul(self, f) == id,
            "elimination produced a non-inverse"
        );
        Some(out)
    }
}

/// Rank over F_2 of the matrix encoded by the low `n*n` bits of `index`
/// (row-major, same layout as [`FqMatrix::from_index`]). `n <= 8`.
#[inline]
pub fn rank_f2_packed(n: usize, index: u64) -> usize {
    debug_assert!(n <= 8);
    let mask = (1u32 << n) - 1;
    let mut rows = [0u32; 8];
    for (i, r) in rows.iter_mut().enumerate().take(n) {
        *r = ((index >> (i * n)) as u32) & mask;
    }
    let mut rank = 0;
    for col in 0..n {
        let bit = 1u32 << col;
        let Some(pr) = (rank..n).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        for r in 0..n {
            if r != rank && rows[r] & bit != 0 {
                rows[r] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

// Bitsliced F_3 row: value v in {0,1,2} at column j is encoded one-hot as
// (lo bit j) = [v == 1], (hi bit j) = [v == 2].
#[derive(Clone, Copy, Default)]
struct Row3 {
    lo: u32,
    hi: u32,
}

impl Row3 {
    #[inline]
    fn add(self, o: Row3) -> Row3 {
        // truth table of addition mod 3 on one-hot planes
        let s1 = (self.lo & !o.lo & !o.hi) | (o.lo & !self.lo & !self.hi) | (self.hi & o.hi);
        let s2 = (self.hi & !o.lo & !o.hi) | (o.hi & !self.lo & !self.hi) | (self.lo & o.lo);
        Row3 { lo: s1, hi: s2 }
    }

    #[inline]
    fn double(self) -> Row3 {
        // multiplication by 2 swaps the planes
        Row3 {
            lo: self.hi,
            hi: self.lo,
        }
    }

    #[inline]
    fn neg(self) -> Row3 {
        self.double()
    }
}

/// Rank over F_3 of the matrix encoded base-3 by `index` (row-major,
/// same layout as [`FqMatrix::from_index`]). `n <= 10`.
pub fn rank_f3_packed(n: usize, index: u64) -> usize {
    let mut rows = [Row3::default(); 10];
    let mut idx = index;
    for i in 0..n {
        let mut lo = 0u32;
        let mut hi = 0u32;
        for j in 0..n {
            match idx % 3 {
                1 => lo |= 1 << j,
                2 => hi |= 1 << j,
                _ => {}
            }
            idx /= 3;
        }
        rows[i] = Row3 { lo, hi };
    }
    let mut rank = 0;
    for col in 0..n {
        let bit = 1u32 << col;
        let Some(pr) = (rank..n).find(|&r| (rows[r].lo | rows[r].hi) & bit != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        if rows[rank].hi & bit != 0 {
            rows[rank] = rows[rank].double(); // normalize pivot to 1
        }
        for r in 0..n {
            if r != rank {
                let v = ((rows[r].lo >> col) & 1) | (((rows[r].hi >> col) & 1) << 1);
                match v {
                    1 => rows[r] = rows[r].add(rows[rank].neg()),
                    2 => rows[r] = rows[r].add(rows[rank].neg().double()),
                    _ => {}
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullity_basics() {
        let f = Fq::new(2).unwrap();
        let z = FqMatrix::zero(3);
        assert_eq!(z.rank(&f), 0);
        assert_eq!(z.nullity(&f), 3);
        let id = FqMatrix::identity(3);
        assert_eq!(id.rank(&f), 3);
        assert!(!id.is_nilpotent(&f));
        assert!(z.is_nilpotent(&f));
    }

    #[test]
    fn rank_nullity_sum_over_all_fields() {
        for q in [2u8, 3, 4, 5] {
            let f = Fq::new(q).unwrap();
            let total = (q as u64).pow(4);
            for idx in 0..total {
                let m = FqMatrix::from_index(2, q, idx);
                assert_eq!(m.rank(&f) + m.nullity(&f), 2);
            }
        }
    }

    #[test]
    fn rank_of_product_bounded_by_factors() {
        let f = Fq::new(3).unwrap();
        // deterministic sample via an odometer stride
        let total = 3u64.pow(9);
        let mut idx = 1u64;
        for _ in 0..200 {
            let a = FqMatrix::from_index(3, 3, idx % total);
            let b = FqMatrix::from_index(3, 3, (idx.wrapping_mul(7).wrapping_add(13)) % total);
            let ab = a.mul(&b, &f);
            assert!(ab.rank(&f) <= a.rank(&f).min(b.rank(&f)));
            idx = idx.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = Fq::new(5).unwrap();
        for idx in [0u64, 17, 39_062, 123_456, 390_624] {
            let m = FqMatrix::from_index(3, 5, idx % 5u64.pow(9));
            let ker = m.kernel_basis(&f);
            assert_eq!(ker.len(), m.nullity(&f));
            for v in &ker {
                for i in 0..3 {
                    let mut acc = 0u8;
                    for j in 0..3 {
                        acc = f.add(acc, f.mul(m.get(i, j), v[j]));
                    }
                    assert_eq!(acc, 0);
                }
            }
        }
    }

    #[test]
    fn inverse_solves_and_verifies() {
        let f = Fq::new(3).unwrap();
        let id = FqMatrix::identity(3);
        let mut found = 0u32;
        for idx in 0..3u64.pow(4) {
            let m = FqMatrix::from_index(2, 3, idx);
            if let Some(inv) = m.inverse(&f) {
                let id2 = FqMatrix::identity(2);
                assert_eq!(m.mul(&inv, &f), id2);
                assert_eq!(inv.mul(&m, &f), id2);
                found += 1;
            }
        }
        // |GL_2(F_3)| = (9-1)(9-3) = 48
        assert_eq!(found, 48);
        assert_eq!(id.inverse(&f).unwrap(), id);
    }

    #[test]
    fn packed_f2_rank_matches_portable_exhaustively() {
        let f = Fq::new(2).unwrap();
        for n in 1..=3usize {
            for idx in 0..1u64 << (n * n) {
                let m = FqMatrix::from_index(n, 2, idx);
                assert_eq!(m.rank(&f), rank_f2_packed(n, idx), "n={n}, idx={idx}");
            }
        }
        // spot checks at n = 5
        let mut idx = 0xdeadbeefu64 % (1 << 25);
        for _ in 0..500 {
            let m = FqMatrix::from_index(5, 2, idx);
            assert_eq!(m.rank(&f), rank_f2_packed(5, idx));
            idx = (idx.wrapping_mul(2862933555777941757).wrapping_add(3037000493)) % (1 << 25);
        }
    }

    #[test]
    fn packed_f3_rank_matches_portable_exhaustively() {
        let f = Fq::new(3).unwrap();
        for n in 1..=2usize {
            let total = 3u64.pow((n * n) as u32);
            for idx in 0..total {
                let m = FqMatrix::from_index(n, 3, idx);
                assert_eq!(m.rank(&f), rank_f3_packed(n, idx), "n={n}, idx={idx}");
            }
        }
        // full 3x3 space: 19683 matrices
        let total = 3u64.pow(9);
        for idx in 0..total {
            let m = FqMatrix::from_index(3, 3, idx);
            assert_eq!(m.rank(&f), rank_f3_packed(3, idx), "idx={idx}");
        }
    }

    #[test]
    fn index_roundtrip_is_row_major_odometer() {
        let m = FqMatrix::from_index(2, 3, 5); // digits 2,1,0,0
        assert_eq!(m.entries(), &[2, 1, 0, 0]);
    }
}
