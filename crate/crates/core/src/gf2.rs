//! Exact linear algebra over GF(2) on single-word bitmask vectors.
//!
//! Subspaces are kept in reduced row-echelon form with strictly decreasing
//! pivots (the pivot of a row is its highest set bit, and every pivot column
//! is zero in all other rows). That form is unique per subspace, so
//! `Gf2Subspace` equality and hashing are subspace equality.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{guard, Error, Result};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// Widest ambient space representable in one machine word.
pub const MAX_WIDTH: u32 = 62;
/// Largest subspace dimension `members` will materialize.
pub const MAX_MEMBER_DIM: u32 = 20;
/// Largest ambient width `enumerate_subspaces` accepts.
pub const MAX_ENUM_WIDTH: u32 = 14;

pub(crate) fn width_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn check_width(width: u32) -> Result<()> {
    if width > MAX_WIDTH {
        Err(Error::WidthTooLarge(width))
    } else {
        Ok(())
    }
}

/// A vector of GF(2)^width; bit `i` is coordinate `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    bits: u64,
    width: u32,
}

impl Gf2Vector {
    pub fn new(bits: u64, width: u32) -> Result<Self> {
        check_width(width)?;
        if bits & !width_mask(width) != 0 {
            return Err(Error::MaskOutOfRange { mask: bits, width });
        }
        Ok(Self { bits, width })
    }

    pub fn zero(width: u32) -> Result<Self> {
        Self::new(0, width)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn width(self) -> u32 {
        self.width
    }
}

impl std::ops::BitXor for Gf2Vector {
    type Output = Gf2Vector;

    fn bitxor(self, rhs: Self) -> Self::Output {
        debug_assert_eq!(self.width, rhs.width);
        Gf2Vector {
            bits: self.bits ^ rhs.bits,
            width: self.width,
        }
    }
}

/// A subspace of GF(2)^width in canonical reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Subspace {
    width: u32,
    basis: Vec<u64>,
}

impl Gf2Subspace {
    pub fn zero(width: u32) -> Result<Self> {
        check_width(width)?;
        Ok(Self {
            width,
            basis: Vec::new(),
        })
    }

    pub fn full(width: u32) -> Result<Self> {
        check_width(width)?;
        Ok(Self {
            width,
            basis: (0..width).rev().map(|i| 1u64 << i).collect(),
        })
    }

    /// Span of raw masks. Every mask must fit in `width` bits.
    pub fn span_masks<I: IntoIterator<Item = u64>>(width: u32, masks: I) -> Result<Self> {
        let mut space = Self::zero(width)?;
        let limit = width_mask(width);
        for mask in masks {
            if mask & !limit != 0 {
                return Err(Error::MaskOutOfRange { mask, width });
            }
            space.insert(mask);
        }
        Ok(space)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    /// Basis rows ordered by strictly decreasing pivot.
    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Gf2Vector> {
        self.basis
            .iter()
            .map(|&bits| Gf2Vector {
                bits,
                width: self.width,
            })
            .collect()
    }

    fn reduce(&self, mut v: u64) -> u64 {
        for &row in &self.basis {
            let pivot = 63 - row.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= row;
            }
        }
        v
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let pivot = 63 - v.leading_zeros();
        for row in &mut self.basis {
            if *row >> pivot & 1 == 1 {
                *row ^= v;
            }
        }
        let at = self
            .basis
            .iter()
            .position(|&row| 63 - row.leading_zeros() < pivot)
            .unwrap_or(self.basis.len());
        self.basis.insert(at, v);
        true
    }

    pub fn contains_mask(&self, v: u64) -> bool {
        v & !width_mask(self.width) == 0 && self.reduce(v) == 0
    }

    pub fn contains(&self, v: Gf2Vector) -> bool {
        v.width == self.width && self.contains_mask(v.bits)
    }

    pub fn is_subspace_of(&self, other: &Gf2Subspace) -> bool {
        self.width == other.width && self.basis.iter().all(|&row| other.contains_mask(row))
    }

    /// All `2^dim` members as raw masks, in ascending order.
    ///
    /// Combination index bit `j` selects the row with the `j`-th smallest
    /// pivot, which makes the combination order coincide with numeric order.
    pub fn member_masks(&self) -> Result<Vec<u64>> {
        guard("subspace dim", MAX_MEMBER_DIM as u64, self.dim() as u64)?;
        let dim = self.basis.len();
        let mut out = Vec::with_capacity(1 << dim);
        for index in 0u64..(1u64 << dim) {
            let mut v = 0;
            for j in 0..dim {
                if index >> j & 1 == 1 {
                    v ^= self.basis[dim - 1 - j];
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Reduced-echelon span of `vectors` inside GF(2)^width.
pub fn span(width: u32, vectors: &[Gf2Vector]) -> Result<Gf2Subspace> {
    for v in vectors {
        if v.width != width {
            return Err(Error::WidthMismatch {
                expected: width,
                actual: v.width,
            });
        }
    }
    Gf2Subspace::span_masks(width, vectors.iter().map(|v| v.bits))
}

pub fn subspace_members(space: &Gf2Subspace) -> Result<Vec<Gf2Vector>> {
    Ok(space
        .member_masks()?
        .into_iter()
        .map(|bits| Gf2Vector {
            bits,
            width: space.width,
        })
        .collect())
}

fn pow2_minus_one(e: u32) -> BigUint {
    (BigUint::one() << e) - BigUint::one()
}

/// Gauss coefficient `[n choose k]_2`, the number of k-dimensional
/// subspaces of GF(2)^n. Zero when `k > n`.
pub fn gaussian_binomial(n: u32, k: u32) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= pow2_minus_one(n - i);
        den *= pow2_minus_one(i + 1);
    }
    num / den
}

/// Order of GL(r, 2); the degree-zero group is trivial.
pub fn gl2_order(r: u32) -> BigCount {
    let full = BigUint::one() << r;
    (0..r).fold(BigUint::one(), |acc, i| {
        acc * (&full - (BigUint::one() << i))
    })
}

/// Lazily enumerates every subspace of GF(2)^n (or every k-dimensional one).
///
/// Subspaces are produced through their echelon form: for each dimension,
/// each pivot-column set in lexicographic order, then each assignment of
/// the free (non-pivot, below-pivot) entries in reflected Gray-code order.
pub fn enumerate_subspaces(n: u32, k: Option<u32>) -> Result<SubspaceIter> {
    guard(
        "subspace enumeration width",
        MAX_ENUM_WIDTH as u64,
        n as u64,
    )?;
    let (k_start, k_end) = match k {
        Some(k) if k > n => {
            return Err(Error::Precondition(format!(
                "dimension {k} exceeds ambient width {n}"
            )))
        }
        Some(k) => (k, k),
        None => (0, n),
    };
    let mut iter = SubspaceIter {
        width: n,
        k_end,
        pivots: (0..k_start).collect(),
        free: Vec::new(),
        counter: 0,
        counter_end: 0,
        current: Vec::new(),
        done: false,
    };
    iter.load_free();
    Ok(iter)
}

#[derive(Debug, Clone)]
pub struct SubspaceIter {
    width: u32,
    k_end: u32,
    /// Current pivot columns, ascending.
    pivots: Vec<u32>,
    /// (row index, column) of each free entry; row 0 has the largest pivot.
    free: Vec<(usize, u32)>,
    counter: u64,
    counter_end: u64,
    /// Echelon rows for the current counter value.
    current: Vec<u64>,
    done: bool,
}

impl SubspaceIter {
    fn load_free(&mut self) {
        self.free.clear();
        let k = self.pivots.len();
        for (row, &pivot) in self.pivots.iter().rev().enumerate() {
            for col in 0..pivot {
                if !self.pivots.contains(&col) {
                    self.free.push((row, col));
                }
            }
        }
        debug_assert!(k <= self.width as usize);
        self.counter = 0;
        self.counter_end = 1u64 << self.free.len();
        self.current = self.pivots.iter().rev().map(|&c| 1u64 << c).collect();
    }

    fn advance_pivots(&mut self) -> bool {
        let k = self.pivots.len();
        let n = self.width;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < n - (k - i) as u32 {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SubspaceIter {
    type Item = Gf2Subspace;

    fn next(&mut self) -> Option<Gf2Subspace> {
        loop {
            if self.done {
                return None;
            }
            if self.counter < self.counter_end {
                let out = Gf2Subspace {
                    width: self.width,
                    basis: self.current.clone(),
                };
                // Free entries follow a Gray code: one entry flips per step.
                self.counter += 1;
                if self.counter < self.counter_end {
                    let (row, col) = self.free[self.counter.trailing_zeros() as usize];
                    self.current[row] ^= 1u64 << col;
                }
                return Some(out);
            }
            if !self.advance_pivots() {
                let next_k = self.pivots.len() as u32 + 1;
                if next_k > self.k_end {
                    self.done = true;
                    continue;
                }
                self.pivots = (0..next_k).collect();
            }
            self.load_free();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(bits: u64, width: u32) -> Gf2Vector {
        Gf2Vector::new(bits, width).unwrap()
    }

    /// Independent oracle: every subset of GF(2)^n that contains zero and is
    /// XOR-closed, bucketed by size.
    fn brute_subspace_counts(n: u32) -> Vec<u64> {
        let points = 1u32 << n;
        let mut counts = vec![0u64; n as usize + 1];
        for set in 0u64..(1u64 << points) {
            if set & 1 == 0 {
                continue;
            }
            let closed = (0..points).all(|a| {
                set >> a & 1 == 0
                    || (0..points).all(|b| set >> b & 1 == 0 || set >> (a ^ b) & 1 == 1)
            });
            if closed {
                counts[set.count_ones().trailing_zeros() as usize] += 1;
            }
        }
        counts
    }

    #[test]
    fn gaussian_binomial_frozen_values() {
        assert_eq!(gaussian_binomial(7, 0), BigUint::one());
        assert_eq!(gaussian_binomial(0, 0), BigUint::one());
        assert_eq!(gaussian_binomial(2, 3), BigUint::zero());
        // Oracle runs: n=2 -> [1,3,1], n=4 -> [1,15,35,15,1].
        assert_eq!(brute_subspace_counts(2), vec![1, 3, 1]);
        assert_eq!(brute_subspace_counts(4), vec![1, 15, 35, 15, 1]);
        assert_eq!(gaussian_binomial(2, 1), BigUint::from(3u32));
        assert_eq!(gaussian_binomial(4, 2), BigUint::from(35u32));
    }

    #[test]
    fn gaussian_binomial_matches_oracle_small() {
        for n in 0..=4 {
            let brute = brute_subspace_counts(n);
            for k in 0..=n {
                assert_eq!(gaussian_binomial(n, k), BigUint::from(brute[k as usize]));
            }
        }
    }

    #[test]
    fn gaussian_binomial_exceeds_u64() {
        let big = gaussian_binomial(40, 20);
        assert!(big.bits() > 64);
    }

    #[test]
    fn pascal_recurrence() {
        for n in 1..=30u32 {
            for k in 1..=n {
                let lhs = gaussian_binomial(n, k);
                let rhs = gaussian_binomial(n - 1, k - 1)
                    + (BigUint::one() << k) * gaussian_binomial(n - 1, k);
                assert_eq!(lhs, rhs, "n={n} k={k}");
            }
        }
    }

    /// Independent oracle: an r x r matrix is invertible iff x -> xM is injective.
    fn brute_invertible(r: u32) -> u64 {
        let cells = r * r;
        let mut count = 0;
        for m in 0u64..(1u64 << cells) {
            let rows: Vec<u64> = (0..r).map(|i| (m >> (i * r)) & ((1 << r) - 1)).collect();
            let mut seen = vec![false; 1 << r];
            let injective = (0u64..(1 << r)).all(|x| {
                let image = (0..r as usize)
                    .filter(|&i| x >> i & 1 == 1)
                    .fold(0, |acc, i| acc ^ rows[i]);
                !std::mem::replace(&mut seen[image as usize], true)
            });
            if injective {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn gl2_order_matches_brute_force() {
        assert_eq!(gl2_order(0), BigUint::one());
        assert_eq!(brute_invertible(2), 6);
        assert_eq!(brute_invertible(3), 168);
        for r in 1..=3 {
            assert_eq!(gl2_order(r), BigUint::from(brute_invertible(r)));
        }
        assert_eq!(gl2_order(4), BigUint::from(20160u32));
    }

    #[test]
    fn span_examples() {
        let zero = span(3, &[]).unwrap();
        assert_eq!(zero.dim(), 0);

        let full = span(2, &[v(0b01, 2), v(0b11, 2), v(0b10, 2)]).unwrap();
        assert_eq!(full.dim(), 2);
        assert_eq!(full.basis(), &[0b10, 0b01]);

        let s = span(3, &[v(0b110, 3), v(0b011, 3)]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(v(0b101, 3)));
        assert!(!s.contains(v(0b001, 3)));
    }

    #[test]
    fn span_rejects_width_mismatch() {
        let err = span(3, &[v(0b1, 2)]).unwrap_err();
        assert_eq!(
            err,
            Error::WidthMismatch {
                expected: 3,
                actual: 2
            }
        );
        assert!(matches!(
            Gf2Vector::new(0b100, 2),
            Err(Error::MaskOutOfRange { .. })
        ));
        assert!(matches!(
            Gf2Vector::new(0, 63),
            Err(Error::WidthTooLarge(63))
        ));
    }

    #[test]
    fn span_is_order_independent() {
        let a = span(4, &[v(0b1100, 4), v(0b0110, 4), v(0b1010, 4)]).unwrap();
        let b = span(4, &[v(0b1010, 4), v(0b1100, 4)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn members_examples() {
        assert_eq!(
            Gf2Subspace::zero(2).unwrap().member_masks().unwrap(),
            vec![0]
        );
        let line = Gf2Subspace::span_masks(1, [1]).unwrap();
        assert_eq!(line.member_masks().unwrap(), vec![0, 1]);
        let plane = Gf2Subspace::full(2).unwrap();
        assert_eq!(plane.member_masks().unwrap(), vec![0b00, 0b01, 0b10, 0b11]);
    }

    #[test]
    fn members_guard() {
        let big = Gf2Subspace::full(21).unwrap();
        assert!(matches!(
            big.member_masks(),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_subspaces(0, None).unwrap().count(), 1);
        assert_eq!(enumerate_subspaces(2, None).unwrap().count(), 5);
        assert_eq!(enumerate_subspaces(3, Some(1)).unwrap().count(), 7);
        assert!(enumerate_subspaces(15, None).is_err());
        assert!(enumerate_subspaces(3, Some(4)).is_err());
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomial() {
        for n in 0..=10 {
            for k in 0..=n {
                let count = enumerate_subspaces(n, Some(k)).unwrap().count();
                assert_eq!(BigUint::from(count), gaussian_binomial(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn enumeration_yields_distinct_canonical_subspaces() {
        for n in 0..=5 {
            let all: Vec<_> = enumerate_subspaces(n, None).unwrap().collect();
            let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
            assert_eq!(all.len(), distinct.len());
            for s in &all {
                let respan = Gf2Subspace::span_masks(n, s.member_masks().unwrap()).unwrap();
                assert_eq!(&respan, s);
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a: Vec<_> = enumerate_subspaces(4, None).unwrap().collect();
        let b: Vec<_> = enumerate_subspaces(4, None).unwrap().collect();
        assert_eq!(a, b);
    }
}
