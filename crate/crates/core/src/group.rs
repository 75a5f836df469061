//! The minimal group interface shared by every concrete group in the crate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Operations of a group whose elements are plain values.
///
/// Implementations exist for free groups ([`crate::presentation::FreeGroup`]),
/// pc-groups ([`crate::pc::PcPresentation`]) and the Magnus algebra
/// ([`crate::magnus::MagnusAlgebra`]); test oracles implement it for
/// permutation and matrix groups.
pub trait Group {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// `a^n` by binary exponentiation; negative `n` inverts first.
    fn pow(&self, a: &Self::Elem, n: &BigInt) -> Self::Elem {
        if n.is_zero() {
            return self.identity();
        }
        let mut base = if n.is_negative() { self.inv(a) } else { a.clone() };
        let mut e = n.abs();
        let mut acc = self.identity();
        let two = BigInt::from(2);
        loop {
            if (&e % &two).is_one() {
                acc = self.mul(&acc, &base);
            }
            e /= &two;
            if e.is_zero() {
                break;
            }
            base = self.mul(&base, &base);
        }
        acc
    }

    fn pow_i64(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.pow(a, &BigInt::from(n))
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    fn comm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    /// `a^b = b^-1 a b`.
    fn conj(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(&self.inv(b), &self.mul(a, b))
    }

    /// Left-normed commutator `[a1, a2, ..., ar] = [[a1, a2], ..., ar]`.
    fn comm_left(&self, parts: &[Self::Elem]) -> Self::Elem {
        let mut it = parts.iter();
        let mut acc = match it.next() {
            Some(first) => first.clone(),
            None => return self.identity(),
        };
        for p in it {
            acc = self.comm(&acc, p);
        }
        acc
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.mul(&acc, x))
    }
}
