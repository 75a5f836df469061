use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::Group;

/// A word in the free group: a sequence of `(generator index, exponent)`
/// syllables with nonzero exponents.
///
/// Words produced by the arithmetic below are always freely reduced; words
/// built with [`FreeWord::from_letters`] keep their letters verbatim until
/// passed through [`free_reduce`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<(usize, BigInt)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(index: usize) -> Self {
        Self::letter(index, BigInt::one())
    }

    pub fn letter(index: usize, exponent: impl Into<BigInt>) -> Self {
        let e = exponent.into();
        if e.is_zero() {
            Self::identity()
        } else {
            FreeWord {
                letters: vec![(index, e)],
            }
        }
    }

    /// Raw constructor; zero exponents are dropped but adjacent letters are
    /// not merged.
    pub fn from_letters<I, E>(letters: I) -> Self
    where
        I: IntoIterator<Item = (usize, E)>,
        E: Into<BigInt>,
    {
        FreeWord {
            letters: letters
                .into_iter()
                .map(|(g, e)| (g, e.into()))
                .filter(|(_, e)| !e.is_zero())
                .collect(),
        }
    }

    pub fn letters(&self) -> &[(usize, BigInt)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0].0 != w[1].0)
    }

    /// Number of syllables.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|(g, _)| *g).max()
    }

    /// Exponent sum of each generator, as a vector of length `rank`.
    pub fn exponent_sums(&self, rank: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); rank];
        for (g, e) in &self.letters {
            v[*g] += e;
        }
        v
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            letters: self.letters.iter().rev().map(|(g, e)| (*g, -e)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        for (g, e) in &other.letters {
            push_reduced(&mut letters, *g, e.clone());
        }
        FreeWord { letters }
    }

    /// `self^n` by repetition (or a single syllable for one-letter words).
    pub fn pow(&self, n: &BigInt) -> Self {
        if n.is_zero() || self.is_identity() {
            return Self::identity();
        }
        let w = free_reduce(self);
        if w.letters.len() == 1 {
            let (g, e) = &w.letters[0];
            return Self::letter(*g, e * n);
        }
        let base = if n.is_negative() { w.inverse() } else { w };
        let count = n.abs().to_usize().expect("word power too large to expand");
        let mut out = Self::identity();
        for _ in 0..count {
            out = out.mul(&base);
        }
        out
    }

    /// `self^v = v^-1 self v`.
    pub fn conjugate(&self, v: &Self) -> Self {
        v.inverse().mul(self).mul(v)
    }

    /// `[self, v] = self^-1 v^-1 self v`.
    pub fn commutator(&self, v: &Self) -> Self {
        self.inverse().mul(&v.inverse()).mul(self).mul(v)
    }

    /// Left-normed commutator `[w1, ..., wr]`.
    pub fn left_normed(parts: &[FreeWord]) -> Self {
        let mut it = parts.iter();
        let mut acc = it.next().cloned().unwrap_or_default();
        for p in it {
            acc = acc.commutator(p);
        }
        acc
    }

    /// Rewrites generator indices through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Self {
        free_reduce(&FreeWord {
            letters: self.letters.iter().map(|(g, e)| (map(*g), e.clone())).collect(),
        })
    }

    /// Renders with generator names, e.g. `b^-1 a b a^-4`; the identity is `1`.
    pub fn display(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, (g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let name = names.get(*g).cloned().unwrap_or_else(|| format!("x{}", g + 1));
            out.push_str(&name);
            if !e.is_one() {
                let _ = write!(out, "^{}", e);
            }
        }
        out
    }
}

fn push_reduced(letters: &mut Vec<(usize, BigInt)>, g: usize, e: BigInt) {
    if e.is_zero() {
        return;
    }
    if let Some(last) = letters.last_mut() {
        if last.0 == g {
            last.1 += e;
            if last.1.is_zero() {
                letters.pop();
            }
            return;
        }
    }
    letters.push((g, e));
}

/// Free reduction: merges adjacent syllables on the same generator and drops
/// those whose exponents cancel.
pub fn free_reduce(w: &FreeWord) -> FreeWord {
    let mut letters = Vec::with_capacity(w.letters.len());
    for (g, e) in &w.letters {
        push_reduced(&mut letters, *g, e.clone());
    }
    FreeWord { letters }
}

/// Image of `w` under the homomorphism sending generator `i` to `interp[i]`.
pub fn evaluate_word<G: Group>(w: &FreeWord, interp: &[G::Elem], target: &G) -> Result<G::Elem> {
    let mut acc = target.identity();
    for (g, e) in w.letters() {
        let x = interp.get(*g).ok_or(Error::MissingBinding(*g))?;
        let p = if e.is_one() { x.clone() } else { target.pow(x, e) };
        acc = target.mul(&acc, &p);
    }
    Ok(acc)
}

/// The free group on `rank` generators, with freely reduced words as elements.
#[derive(Clone, Copy, Debug)]
pub struct FreeGroup {
    pub rank: usize,
}

impl Group for FreeGroup {
    type Elem = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }

    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.mul(b)
    }

    fn inv(&self, a: &FreeWord) -> FreeWord {
        a.inverse()
    }

    fn pow(&self, a: &FreeWord, n: &BigInt) -> FreeWord {
        a.pow(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[(usize, i64)]) -> FreeWord {
        FreeWord::from_letters(letters.iter().copied())
    }

    #[test]
    fn cancellation() {
        let x = w(&[(0, 1), (0, -1), (1, 1)]);
        assert_eq!(free_reduce(&x), FreeWord::generator(1));
    }

    #[test]
    fn nested_cancellation() {
        let x = w(&[(0, 2), (1, 1), (1, -1), (0, -2), (2, 3)]);
        assert_eq!(free_reduce(&x), w(&[(2, 3)]));
    }

    #[test]
    fn commutator_expansion() {
        let a = FreeWord::generator(0);
        let b = FreeWord::generator(1);
        assert_eq!(b.commutator(&a), w(&[(1, -1), (0, -1), (1, 1), (0, 1)]));
    }

    #[test]
    fn left_normed_is_nested() {
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let z = FreeWord::generator(2);
        let lhs = FreeWord::left_normed(&[x.clone(), y.clone(), z.clone()]);
        assert_eq!(lhs, x.commutator(&y).commutator(&z));
        assert_eq!(lhs.len(), 10);
    }

    #[test]
    fn display_words() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(w(&[(1, -1), (0, 1), (1, 1), (0, -4)]).display(&names), "b^-1 a b a^-4");
        assert_eq!(FreeWord::identity().display(&names), "1");
    }

    #[test]
    fn missing_binding_reported() {
        let g = FreeGroup { rank: 1 };
        let err = evaluate_word(&FreeWord::generator(3), &[FreeWord::generator(0)], &g).unwrap_err();
        assert_eq!(err, Error::MissingBinding(3));
    }
}
