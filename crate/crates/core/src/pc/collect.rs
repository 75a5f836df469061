//! Collection from the left and the element arithmetic built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{PcElement, PcPresentation, RelOrder, Syllables};
use crate::error::{Error, Result};
use crate::group::Group;

/// Pushes `word^t` so that it is processed next, in order.
fn push_power(stack: &mut Vec<(usize, i64)>, word: &Syllables, t: i64) {
    if t == 0 || word.is_empty() {
        return;
    }
    if word.len() == 1 {
        let (g, x) = word[0];
        stack.push((g, x * t));
        return;
    }
    if t > 0 {
        for _ in 0..t {
            for &(g, x) in word.iter().rev() {
                stack.push((g, x));
            }
        }
    } else {
        for _ in 0..-t {
            for &(g, x) in word.iter() {
                stack.push((g, -x));
            }
        }
    }
}

impl PcPresentation {
    /// Multiplies the normal form `e` on the right by `word`, in place.
    pub(crate) fn collect_into(&self, e: &mut [i64], word: &[(usize, i64)]) {
        let mut stack: Vec<(usize, i64)> = word.iter().rev().copied().collect();
        while let Some((g, n)) = stack.pop() {
            if n != 0 {
                self.step(e, &mut stack, g, n);
            }
        }
    }

    /// `e <- e * g^n`, deferring whatever cannot be absorbed to `stack`.
    fn step(&self, e: &mut [i64], stack: &mut Vec<(usize, i64)>, g: usize, n: i64) {
        let b = self.bound(g);
        let low_tail_clear = e[g + 1..=b.max(g)].iter().all(|&x| x == 0);
        match self.gens[g].order {
            RelOrder::Finite(m) => {
                let q = n.div_euclid(m);
                let r = n.rem_euclid(m);
                // g^n = g^r w^q: w^q goes below g^r on the stack
                push_power(stack, &self.power[g], q);
                if r == 0 {
                    return;
                }
                if low_tail_clear {
                    e[g] += r;
                    if e[g] >= m {
                        e[g] -= m;
                        push_power(stack, &self.power[g], 1);
                    }
                    return;
                }
                if r > 1 {
                    stack.push((g, r - 1));
                }
                let tail = self.take_low_tail(e, g, b);
                e[g] += 1;
                let overflow = e[g] == m;
                if overflow {
                    e[g] = 0;
                }
                for &(j, t) in tail.iter().rev() {
                    push_power(stack, &self.conj[j][g], t);
                }
                if overflow {
                    push_power(stack, &self.power[g], 1);
                }
            }
            RelOrder::Infinite => {
                if low_tail_clear {
                    e[g] += n;
                    return;
                }
                let unit = n.signum();
                if n != unit {
                    stack.push((g, n - unit));
                }
                let tail = self.take_low_tail(e, g, b);
                e[g] += unit;
                let table = if unit > 0 { &self.conj } else { &self.conj_inv };
                for &(j, t) in tail.iter().rev() {
                    push_power(stack, &table[j][g], t);
                }
            }
        }
    }

    fn take_low_tail(&self, e: &mut [i64], g: usize, b: usize) -> Vec<(usize, i64)> {
        let mut tail = Vec::new();
        for j in g + 1..=b {
            if e[j] != 0 {
                tail.push((j, e[j]));
                e[j] = 0;
            }
        }
        tail
    }

    /// Normal form of a word in the pc-generators.
    pub fn collect(&self, word: &[(usize, i64)]) -> PcElement {
        let mut e = PcElement::identity(self.len());
        self.collect_into(&mut e.exps, word);
        e
    }

    pub fn multiply(&self, a: &PcElement, b: &PcElement) -> PcElement {
        let mut e = a.clone();
        self.collect_into(&mut e.exps, &b.syllables());
        e
    }

    pub fn invert(&self, a: &PcElement) -> PcElement {
        let word: Vec<(usize, i64)> = a.syllables().into_iter().rev().map(|(g, x)| (g, -x)).collect();
        self.collect(&word)
    }

    pub fn power_elem(&self, a: &PcElement, n: i64) -> PcElement {
        if n == 0 {
            return PcElement::identity(self.len());
        }
        let mut base = if n < 0 { self.invert(a) } else { a.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = PcElement::identity(self.len());
        loop {
            if k & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = self.multiply(&base, &base);
        }
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &PcElement, b: &PcElement) -> PcElement {
        let ba = self.multiply(b, a);
        let ab = self.multiply(a, b);
        self.multiply(&self.invert(&ba), &ab)
    }

    /// `a^b = b^-1 a b`.
    pub fn conjugate(&self, a: &PcElement, b: &PcElement) -> PcElement {
        self.multiply(&self.invert(b), &self.multiply(a, b))
    }

    /// Least `n > 0` with `x^n = 1`.
    pub fn element_order(&self, x: &PcElement) -> Result<u128> {
        let mut y = x.clone();
        let mut order: u128 = 1;
        while let Some(d) = y.leading() {
            let m = self.gens[d].order.finite().ok_or(Error::InfiniteOrder)?;
            let k = m / num_integer::gcd(y.exps[d], m);
            y = self.power_elem(&y, k);
            order = order
                .checked_mul(k as u128)
                .ok_or_else(|| Error::Internal("element order overflows u128".into()))?;
        }
        Ok(order)
    }

    /// Exponent vector after reducing arbitrary integers into normal form.
    pub fn element_from_exponents(&self, exps: &[i64]) -> PcElement {
        let word: Vec<(usize, i64)> = exps.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect();
        self.collect(&word)
    }
}

impl Group for PcPresentation {
    type Elem = PcElement;

    fn identity(&self) -> PcElement {
        PcElement::identity(self.len())
    }

    fn mul(&self, a: &PcElement, b: &PcElement) -> PcElement {
        self.multiply(a, b)
    }

    fn inv(&self, a: &PcElement) -> PcElement {
        self.invert(a)
    }

    fn is_identity(&self, a: &PcElement) -> bool {
        a.is_identity()
    }

    fn pow(&self, a: &PcElement, n: &BigInt) -> PcElement {
        match n.to_i64() {
            Some(k) => self.power_elem(a, k),
            None => {
                // reduce modulo the element order when the exponent is huge
                let ord = self.element_order(a).expect("huge power of an infinite-order element");
                let r = n.mod_floor(&BigInt::from(ord)).to_i64().unwrap();
                self.power_elem(a, r)
            }
        }
    }

    fn comm(&self, a: &PcElement, b: &PcElement) -> PcElement {
        self.commutator(a, b)
    }

    fn conj(&self, a: &PcElement, b: &PcElement) -> PcElement {
        self.conjugate(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::super::PcBuilder;
    use super::*;

    fn heisenberg() -> PcPresentation {
        let mut b = PcBuilder::new(3);
        let a = b.gen("a", RelOrder::Finite(3), 1);
        let bb = b.gen("b", RelOrder::Finite(3), 1);
        let c = b.gen("c", RelOrder::Finite(3), 2);
        b.conj(bb, a, vec![(bb, 1), (c, 1)]);
        b.build().unwrap()
    }

    fn cyclic27() -> PcPresentation {
        let mut b = PcBuilder::new(3);
        let g1 = b.gen("g1", RelOrder::Finite(3), 1);
        let g2 = b.gen("g2", RelOrder::Finite(3), 2);
        let g3 = b.gen("g3", RelOrder::Finite(3), 3);
        b.power(g1, vec![(g2, 1)]).power(g2, vec![(g3, 1)]);
        b.build().unwrap()
    }

    #[test]
    fn single_rewrite() {
        let h = heisenberg();
        assert_eq!(h.collect(&[(1, 1), (0, 1)]).exps, vec![1, 1, 1]);
        assert_eq!(h.format_element(&h.collect(&[(1, 1), (0, 1)])), "a^1 b^1 c^1");
    }

    #[test]
    fn cube_is_trivial() {
        let h = heisenberg();
        assert!(h.collect(&[(0, 1), (0, 1), (0, 1)]).is_identity());
        let ab = h.collect(&[(0, 1), (1, 1)]);
        assert!(h.power_elem(&ab, 3).is_identity());
        assert_eq!(h.element_order(&ab).unwrap(), 3);
    }

    #[test]
    fn chained_powers() {
        let g = cyclic27();
        let x = g.power_elem(&g.generator(0), 9);
        assert_eq!(x, g.generator(2));
        assert_eq!(g.element_order(&g.generator(0)).unwrap(), 27);
        assert_eq!(g.power_elem(&g.generator(0), -1).exps, vec![2, 2, 2]);
    }

    #[test]
    fn commutator_is_central_generator() {
        let h = heisenberg();
        let c = h.commutator(&h.generator(1), &h.generator(0));
        assert_eq!(c, h.generator(2));
    }

    #[test]
    fn infinite_generators() {
        // discrete Heisenberg group: y^x = y z, z central, all infinite
        let mut b = PcBuilder::new(3);
        let x = b.gen("x", RelOrder::Infinite, 1);
        let y = b.gen("y", RelOrder::Infinite, 1);
        let z = b.gen("z", RelOrder::Infinite, 2);
        b.conj(y, x, vec![(y, 1), (z, 1)]);
        let g = b.build().unwrap();
        assert_eq!(g.conj_inv_rhs(y, x), &vec![(y, 1), (z, -1)]);
        let w = g.collect(&[(y, 2), (x, -3)]);
        assert_eq!(w.exps, vec![-3, 2, -6]);
        let back = g.multiply(&w, &g.invert(&w));
        assert!(back.is_identity());
        assert_eq!(g.element_order(&g.generator(z)), Err(Error::InfiniteOrder));
    }
}
