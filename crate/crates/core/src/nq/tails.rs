//! Collection in a central extension of a pc-group by free abelian tails.
//!
//! Every power, conjugate and inverse-conjugate relation of the base group
//! gets its own central tail generator of infinite order, and `extra`
//! further central generators are appended. Elements are a normal form of
//! the base group together with a tail vector.

use num_bigint::BigInt;

use crate::group::Group;
use crate::lattice::SparseVec;
use crate::pc::{PcElement, PcPresentation, RelOrder, Syllables};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TElem {
    pub exps: Vec<i64>,
    /// Sorted by coordinate, no zeros.
    pub tail: Vec<(usize, i128)>,
}

impl TElem {
    pub fn is_central(&self) -> bool {
        self.exps.iter().all(|&x| x == 0)
    }

    pub fn tail_vec(&self) -> SparseVec {
        self.tail.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()
    }
}

fn normalize(mut t: Vec<(usize, i128)>) -> Vec<(usize, i128)> {
    t.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, i128)> = Vec::with_capacity(t.len());
    for (c, v) in t {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
        if out.last().is_some_and(|l| l.1 == 0) {
            out.pop();
        }
    }
    out
}

/// `a - b` for sorted tail vectors.
pub(crate) fn tail_difference(a: &[(usize, i128)], b: &[(usize, i128)]) -> SparseVec {
    let mut all: Vec<(usize, i128)> = a.to_vec();
    all.extend(b.iter().map(|&(c, v)| (c, -v)));
    normalize(all).into_iter().map(|(c, v)| (c, BigInt::from(v))).collect()
}

pub(crate) struct Tails<'a> {
    g: &'a PcPresentation,
    power: Vec<Option<usize>>,
    conj: Vec<Vec<usize>>,
    conj_inv: Vec<Vec<Option<usize>>>,
    relation_tails: usize,
    extra: usize,
}

impl<'a> Tails<'a> {
    pub fn new(g: &'a PcPresentation, extra: usize) -> Self {
        let n = g.len();
        let mut next = 0;
        let mut fresh = || {
            next += 1;
            next - 1
        };
        let power = (0..n).map(|i| g.rel_order(i).finite().map(|_| fresh())).collect();
        let conj = (0..n).map(|j| (0..j).map(|_| fresh()).collect()).collect();
        let conj_inv = (0..n)
            .map(|j| (0..j).map(|i| g.rel_order(i).is_infinite().then(&mut fresh)).collect())
            .collect();
        Tails {
            g,
            power,
            conj,
            conj_inv,
            relation_tails: next,
            extra,
        }
    }

    /// Total number of central coordinates.
    pub fn dim(&self) -> usize {
        self.relation_tails + self.extra
    }

    /// The `k`-th extra central generator.
    pub fn extra_generator(&self, k: usize) -> TElem {
        TElem {
            exps: vec![0; self.g.len()],
            tail: vec![(self.relation_tails + k, 1)],
        }
    }

    pub fn generator(&self, i: usize) -> TElem {
        self.from_normal(&self.g.generator(i))
    }

    /// The normal word of `x` read in the extension, with zero tail.
    pub fn from_normal(&self, x: &PcElement) -> TElem {
        TElem {
            exps: x.exps.clone(),
            tail: Vec::new(),
        }
    }

    /// `g_i^{m_i}`, that is, the power relation's right side times its tail.
    fn power_value(&self, i: usize) -> TElem {
        TElem {
            exps: self.g.element_from_normal(self.g.power_rhs(i)).exps,
            tail: vec![(self.power[i].expect("finite generator"), 1)],
        }
    }

    /// Collects `word` onto `e`, accumulating tails.
    pub fn collect_onto(&self, e: &mut TElem, word: &[(usize, i64)]) {
        let mut stack: Vec<(usize, i64)> = word.iter().rev().copied().collect();
        let mut tail = std::mem::take(&mut e.tail);
        while let Some((g, n)) = stack.pop() {
            if n != 0 {
                self.step(&mut e.exps, &mut tail, &mut stack, g, n);
            }
        }
        e.tail = normalize(tail);
    }

    fn push_power(stack: &mut Vec<(usize, i64)>, word: &Syllables, t: i64) {
        if t == 0 || word.is_empty() {
            return;
        }
        if word.len() == 1 {
            stack.push((word[0].0, word[0].1 * t));
            return;
        }
        let reps = t.unsigned_abs();
        for _ in 0..reps {
            if t > 0 {
                stack.extend(word.iter().rev().copied());
            } else {
                stack.extend(word.iter().map(|&(g, x)| (g, -x)));
            }
        }
    }

    fn step(&self, e: &mut [i64], tail: &mut Vec<(usize, i128)>, stack: &mut Vec<(usize, i64)>, g: usize, n: i64) {
        let clear = e[g + 1..].iter().all(|&x| x == 0);
        match self.g.rel_order(g) {
            RelOrder::Finite(m) => {
                let pt = self.power[g].unwrap();
                let w = self.g.power_rhs(g);
                let q = n.div_euclid(m);
                let r = n.rem_euclid(m);
                if q != 0 {
                    Self::push_power(stack, w, q);
                    tail.push((pt, q as i128));
                }
                if r == 0 {
                    return;
                }
                if clear {
                    e[g] += r;
                    if e[g] >= m {
                        e[g] -= m;
                        Self::push_power(stack, w, 1);
                        tail.push((pt, 1));
                    }
                    return;
                }
                if r > 1 {
                    stack.push((g, r - 1));
                }
                let moved = Self::take_tail(e, g);
                e[g] += 1;
                let overflow = e[g] == m;
                if overflow {
                    e[g] = 0;
                }
                for &(j, t) in moved.iter().rev() {
                    Self::push_power(stack, self.g.conj_rhs(j, g), t);
                    tail.push((self.conj[j][g], t as i128));
                }
                if overflow {
                    Self::push_power(stack, w, 1);
                    tail.push((pt, 1));
                }
            }
            RelOrder::Infinite => {
                if clear {
                    e[g] += n;
                    return;
                }
                let unit = n.signum();
                if n != unit {
                    stack.push((g, n - unit));
                }
                let moved = Self::take_tail(e, g);
                e[g] += unit;
                for &(j, t) in moved.iter().rev() {
                    if unit > 0 {
                        Self::push_power(stack, self.g.conj_rhs(j, g), t);
                        tail.push((self.conj[j][g], t as i128));
                    } else {
                        Self::push_power(stack, self.g.conj_inv_rhs(j, g), t);
                        tail.push((self.conj_inv[j][g].unwrap(), t as i128));
                    }
                }
            }
        }
    }

    fn take_tail(e: &mut [i64], g: usize) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for (j, x) in e.iter_mut().enumerate().skip(g + 1) {
            if *x != 0 {
                out.push((j, *x));
                *x = 0;
            }
        }
        out
    }

    fn collect(&self, word: &[(usize, i64)]) -> TElem {
        let mut e = Group::identity(self);
        self.collect_onto(&mut e, word);
        e
    }

    fn then(&self, mut e: TElem, word: &[(usize, i64)]) -> TElem {
        self.collect_onto(&mut e, word);
        e
    }

    fn pair(&self, j: usize, i: usize, ej: i64, ei: i64) -> TElem {
        self.collect(&[(j, ej), (i, ei)])
    }

    /// Product of `h_l^{e_l}` over the syllables of a normal word.
    pub fn evaluate(&self, word: &Syllables, h: &[TElem]) -> TElem {
        word.iter()
            .fold(Group::identity(self), |acc, &(l, e)| self.mul(&acc, &self.pow_i64(&h[l], e)))
    }

    /// Both sides of every overlap; their base parts agree when the base
    /// group is consistent, and the tail differences generate the
    /// consistency lattice.
    pub fn overlaps(&self) -> Vec<(TElem, TElem)> {
        let k = self.g.len();
        let fin = |i: usize| self.g.rel_order(i).finite();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    let left = self.collect(&[(l, 1), (j, 1), (i, 1)]);
                    let right = self.mul(&self.generator(l), &self.pair(j, i, 1, 1));
                    out.push((left, right));
                }
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if let Some(mj) = fin(j) {
                    let left = self.then(self.power_value(j), &[(i, 1)]);
                    let right = self.mul(&self.collect(&[(j, mj - 1)]), &self.pair(j, i, 1, 1));
                    out.push((left, right));
                }
                if let Some(mi) = fin(i) {
                    let left = self.mul(&self.generator(j), &self.power_value(i));
                    let right = self.then(self.pair(j, i, 1, mi - 1), &[(i, 1)]);
                    out.push((left, right));
                } else {
                    let right = self.then(self.pair(j, i, 1, -1), &[(i, 1)]);
                    out.push((self.generator(j), right));
                    if fin(j).is_none() {
                        let left = self.collect(&[(j, -1)]);
                        let right = self.then(self.pair(j, i, -1, -1), &[(i, 1)]);
                        out.push((left, right));
                    }
                }
                if fin(j).is_none() {
                    let right = self.mul(&self.generator(j), &self.pair(j, i, -1, 1));
                    out.push((self.generator(i), right));
                }
            }
            if fin(i).is_some() {
                let w = self.power_value(i);
                let left = self.then(w.clone(), &[(i, 1)]);
                let right = self.mul(&self.generator(i), &w);
                out.push((left, right));
            }
        }
        out
    }
}

impl Group for Tails<'_> {
    type Elem = TElem;

    fn identity(&self) -> TElem {
        TElem {
            exps: vec![0; self.g.len()],
            tail: Vec::new(),
        }
    }

    fn mul(&self, a: &TElem, b: &TElem) -> TElem {
        let mut e = a.clone();
        let syl: Syllables = b
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, x))
            .collect();
        self.collect_onto(&mut e, &syl);
        let mut t = e.tail;
        t.extend(b.tail.iter().copied());
        e.tail = normalize(t);
        e
    }

    fn inv(&self, a: &TElem) -> TElem {
        let word: Syllables = a
            .exps
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, -x))
            .collect();
        let mut e = self.collect(&word);
        let mut t = e.tail;
        t.extend(a.tail.iter().map(|&(c, v)| (c, -v)));
        e.tail = normalize(t);
        e
    }
}
