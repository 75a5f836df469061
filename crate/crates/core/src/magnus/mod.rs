//! Exact arithmetic in free nilpotent groups through the Magnus embedding
//! `x_i -> 1 + X_i` into the free associative algebra truncated above a
//! fixed degree.

mod basic;
mod identities;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::group::Group;
use crate::presentation::{evaluate_word, FreeWord};

pub use basic::{basic_commutators, binomial, witt_rank, BasicCommutator};
pub use identities::{degree_polynomial_check, identity_check, kernel_check, IdentityId};

/// Default upper limit for the truncation degree.
pub const DEFAULT_CLASS_CAP: usize = 6;

/// A noncommutative monomial `X_{i1} X_{i2} ... X_{ik}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<usize>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

/// Start of each degree block in the dense coefficient vector; the last
/// entry is the total number of monomials.
fn offsets(d: usize, c: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(c + 2);
    let mut start = 0;
    let mut block = 1;
    for _ in 0..=c {
        out.push(start);
        start += block;
        block *= d;
    }
    out.push(start);
    out
}

/// Element of `Z<X_0, ..., X_{d-1}>` modulo monomials of degree above `c`.
///
/// Coefficients are stored densely, degree by degree, with the letters of a
/// monomial read as a base-`d` number.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    d: usize,
    c: usize,
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(d: usize, c: usize) -> Self {
        let n = *offsets(d, c).last().unwrap();
        TruncatedSeries {
            d,
            c,
            coeffs: vec![BigInt::zero(); n],
        }
    }

    pub fn one(d: usize, c: usize) -> Self {
        let mut s = Self::zero(d, c);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// `1 + X_i`.
    pub fn generator(i: usize, d: usize, c: usize) -> Self {
        assert!(i < d, "generator {i} out of range for {d} letters");
        let mut s = Self::one(d, c);
        if c >= 1 {
            s.coeffs[1 + i] = BigInt::one();
        }
        s
    }

    pub fn letters(&self) -> usize {
        self.d
    }

    pub fn class_bound(&self) -> usize {
        self.c
    }

    fn index(&self, m: &Monomial) -> Option<usize> {
        if m.degree() > self.c || m.0.iter().any(|&l| l >= self.d) {
            return None;
        }
        let local = m.0.iter().fold(0usize, |acc, &l| acc * self.d + l);
        Some(offsets(self.d, self.c)[m.degree()] + local)
    }

    /// Coefficient of `m`; zero for monomials beyond the truncation.
    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.index(m).map_or_else(BigInt::zero, |i| self.coeffs[i].clone())
    }

    pub fn set_coefficient(&mut self, m: &Monomial, v: BigInt) {
        let i = self.index(m).expect("monomial outside the truncation");
        self.coeffs[i] = v;
    }

    /// Nonzero terms in degree-then-lexicographic order.
    pub fn terms(&self) -> Vec<(Monomial, BigInt)> {
        let off = offsets(self.d, self.c);
        let mut out = Vec::new();
        for k in 0..=self.c {
            for local in 0..off[k + 1] - off[k] {
                let v = &self.coeffs[off[k] + local];
                if v.is_zero() {
                    continue;
                }
                let mut letters = vec![0; k];
                let mut r = local;
                for slot in letters.iter_mut().rev() {
                    *slot = r % self.d;
                    r /= self.d;
                }
                out.push((Monomial(letters), v.clone()));
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Least degree `k >= 1` carrying a nonzero coefficient.
    pub fn lowest_nonconstant_degree(&self) -> Option<usize> {
        let off = offsets(self.d, self.c);
        (1..=self.c).find(|&k| self.coeffs[off[k]..off[k + 1]].iter().any(|v| !v.is_zero()))
    }

    fn check_shape(&self, other: &Self) {
        assert!(
            self.d == other.d && self.c == other.c,
            "series shapes differ: ({}, {}) vs ({}, {})",
            self.d,
            self.c,
            other.d,
            other.c
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_shape(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        TruncatedSeries { coeffs, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_shape(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        TruncatedSeries { coeffs, ..*self }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * k).collect();
        TruncatedSeries { coeffs, ..*self }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_shape(other);
        let (d, c) = (self.d, self.c);
        let off = offsets(d, c);
        let mut out = Self::zero(d, c);
        for a in 0..=c {
            for i in 0..off[a + 1] - off[a] {
                let x = &self.coeffs[off[a] + i];
                if x.is_zero() {
                    continue;
                }
                let mut width = 1;
                for b in 0..=c - a {
                    let base = off[a + b] + i * width;
                    for j in 0..width {
                        let y = &other.coeffs[off[b] + j];
                        if !y.is_zero() {
                            out.coeffs[base + j] += x * y;
                        }
                    }
                    width *= d;
                }
            }
        }
        out
    }

    /// `self^n` for a series with constant term 1, via
    /// `(1 + u)^n = sum_k C(n, k) u^k`; valid for every integer `n`.
    pub fn pow(&self, n: &BigInt) -> Self {
        assert!(self.coeffs[0].is_one(), "power of a series with constant term other than 1");
        let mut u = self.clone();
        u.coeffs[0] = BigInt::zero();
        let mut acc = Self::one(self.d, self.c);
        let mut uk = Self::one(self.d, self.c);
        for k in 1..=self.c {
            uk = uk.mul(&u);
            if uk.coeffs.iter().all(Zero::is_zero) {
                break;
            }
            let b = binomial(n, k as u32);
            if !b.is_zero() {
                acc = acc.add(&uk.scale(&b));
            }
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        self.pow(&BigInt::from(-1))
    }
}

fn letter_name(d: usize, l: usize) -> String {
    const NAMES: [&str; 4] = ["X", "Y", "Z", "W"];
    if d <= NAMES.len() {
        NAMES[l].to_string()
    } else {
        format!("X{}", l + 1)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, v)) in terms.iter().enumerate() {
            let mag = v.abs();
            if n == 0 {
                if v.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if v.is_negative() { " - " } else { " + " })?;
            }
            let word: String = m.0.iter().map(|&l| letter_name(self.d, l)).collect();
            if word.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&word)?;
            } else {
                write!(f, "{mag}{word}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries(d={}, c={}: {})", self.d, self.c, self)
    }
}

/// The group of units `1 + (augmentation ideal)` of the truncated algebra;
/// it is the free nilpotent group of class `c` on the generators `1 + X_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MagnusAlgebra {
    pub d: usize,
    pub c: usize,
}

impl MagnusAlgebra {
    pub fn new(d: usize, c: usize) -> Self {
        MagnusAlgebra { d, c }
    }

    pub fn generator(&self, i: usize) -> TruncatedSeries {
        TruncatedSeries::generator(i, self.d, self.c)
    }

    pub fn generators(&self) -> Vec<TruncatedSeries> {
        (0..self.d).map(|i| self.generator(i)).collect()
    }

    pub fn embed(&self, w: &FreeWord) -> TruncatedSeries {
        magnus_embed(w, self.d, self.c)
    }
}

impl Group for MagnusAlgebra {
    type Elem = TruncatedSeries;

    fn identity(&self) -> TruncatedSeries {
        TruncatedSeries::one(self.d, self.c)
    }

    fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        a.mul(b)
    }

    fn inv(&self, a: &TruncatedSeries) -> TruncatedSeries {
        a.inverse()
    }

    fn is_identity(&self, a: &TruncatedSeries) -> bool {
        a.is_one()
    }

    fn pow(&self, a: &TruncatedSeries, n: &BigInt) -> TruncatedSeries {
        a.pow(n)
    }
}

/// Image of `w` under `x_i -> 1 + X_i` in the algebra on `d` letters
/// truncated above degree `c`.
///
/// # Panics
///
/// If `w` mentions a generator index `>= d`.
pub fn magnus_embed(w: &FreeWord, d: usize, c: usize) -> TruncatedSeries {
    let alg = MagnusAlgebra::new(d, c);
    evaluate_word(w, &alg.generators(), &alg).expect("word uses more generators than the algebra has")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(d: usize, c: usize, terms: &[(&[usize], i64)]) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(d, c);
        for (m, v) in terms {
            s.set_coefficient(&Monomial(m.to_vec()), BigInt::from(*v));
        }
        s
    }

    #[test]
    fn generator_inverse_is_geometric_series() {
        let x = FreeWord::generator(0);
        let inv = magnus_embed(&x.inverse(), 1, 3);
        assert_eq!(inv, series(1, 3, &[(&[], 1), (&[0], -1), (&[0, 0], 1), (&[0, 0, 0], -1)]));
        assert!(inv.mul(&magnus_embed(&x, 1, 3)).is_one());
        assert_eq!(inv.to_string(), "1 - X + XX - XXX");
    }

    #[test]
    fn commutator_at_class_two() {
        let w = FreeWord::generator(0).commutator(&FreeWord::generator(1));
        let s = magnus_embed(&w, 2, 2);
        assert_eq!(s, series(2, 2, &[(&[], 1), (&[0, 1], 1), (&[1, 0], -1)]));
        assert_eq!(s.lowest_nonconstant_degree(), Some(2));
    }

    #[test]
    fn negative_and_large_powers() {
        let alg = MagnusAlgebra::new(2, 4);
        let x = alg.generator(0);
        let direct = alg.pow(&alg.inv(&x), &BigInt::from(5));
        assert_eq!(x.pow(&BigInt::from(-5)), direct);
        let big = BigInt::from(3).pow(40);
        // (1 + X)^N has coefficient C(N, k) on X^k
        let p = x.pow(&big);
        assert_eq!(p.coefficient(&Monomial(vec![0, 0])), binomial(&big, 2));
    }

    #[test]
    fn terms_round_trip() {
        let s = series(3, 3, &[(&[2, 0, 1], 4), (&[1], -2)]);
        let back: Vec<(Monomial, BigInt)> = s.terms();
        assert_eq!(back[0], (Monomial(vec![1]), BigInt::from(-2)));
        assert_eq!(back[1], (Monomial(vec![2, 0, 1]), BigInt::from(4)));
    }
}
