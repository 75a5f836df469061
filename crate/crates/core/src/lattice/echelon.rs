use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::ext_gcd;

/// Sparse integer vector: `(column, value)` pairs sorted by column, with no
/// zero values.
pub type SparseVec = Vec<(usize, BigInt)>;

/// `a + k * b`
pub fn axpy(a: &SparseVec, k: &BigInt, b: &SparseVec) -> SparseVec {
    if k.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, k * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + k * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// `s * a + t * b`
fn combine(s: &BigInt, a: &SparseVec, t: &BigInt, b: &SparseVec) -> SparseVec {
    let sa: SparseVec = if s.is_zero() {
        Vec::new()
    } else {
        a.iter().map(|(c, v)| (*c, v * s)).collect()
    };
    axpy(&sa, t, b)
}

#[cfg(test)]
fn to_sparse(v: &[BigInt]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

#[allow(dead_code)]
pub fn to_dense(v: &SparseVec, n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (c, x) in v {
        out[*c] = x.clone();
    }
    out
}

/// Incrementally maintained echelon basis of a sublattice of `Z^n`.
///
/// Every inserted vector is merged by gcd steps so that each pivot column
/// holds exactly one basis row; [`RowEchelon::reduce`] returns the unique
/// representative of a coset whose pivot entries lie in `[0, pivot)`.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    dim: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl RowEchelon {
    pub fn new(dim: usize) -> Self {
        RowEchelon {
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot(&self, col: usize) -> Option<&BigInt> {
        self.rows.get(&col).map(|r| &r[0].1)
    }

    /// Basis rows keyed by pivot column.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.rows.iter().map(|(c, r)| (*c, r))
    }

    /// Adds a vector to the lattice; returns whether the lattice grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        debug_assert!(v.iter().all(|(c, x)| *c < self.dim && !x.is_zero()));
        let mut grew = false;
        loop {
            let Some((c, a)) = v.first().cloned() else {
                return grew;
            };
            match self.rows.get_mut(&c) {
                None => {
                    if a.is_negative() {
                        for e in v.iter_mut() {
                            e.1 = -&e.1;
                        }
                    }
                    self.rows.insert(c, v);
                    return true;
                }
                Some(prow) => {
                    let p = prow[0].1.clone();
                    if a.is_multiple_of(&p) {
                        v = axpy(&v, &-(&a / &p), prow);
                    } else {
                        let (g, s, t) = ext_gcd(&p, &a);
                        let new_p = combine(&s, prow, &t, &v);
                        let new_v = combine(&(&a / &g), prow, &-(&p / &g), &v);
                        *prow = new_p;
                        v = new_v;
                        grew = true;
                    }
                }
            }
        }
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut i = 0;
        while i < v.len() {
            let c = v[i].0;
            if let Some(prow) = self.rows.get(&c) {
                let q = v[i].1.div_floor(&prow[0].1);
                if !q.is_zero() {
                    v = axpy(&v, &-q, prow);
                }
                if i < v.len() && v[i].0 == c {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Reduces every basis row against the later pivots, giving the reduced
    /// Hermite form.
    pub fn fully_reduce(&mut self) {
        let cols: Vec<usize> = self.rows.keys().rev().copied().collect();
        for c in cols {
            let row = self.rows[&c].clone();
            let head = vec![row[0].clone()];
            let tail: SparseVec = row[1..].to_vec();
            let reduced = self.reduce(&tail);
            let mut out = head;
            out.extend(reduced);
            self.rows.insert(c, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[i64]) -> SparseVec {
        to_sparse(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn gcd_merge_of_pivots() {
        let mut e = RowEchelon::new(2);
        assert!(e.insert(sv(&[4, 1])));
        assert!(e.insert(sv(&[6, 0])));
        assert_eq!(e.pivot(0), Some(&BigInt::from(2)));
        // lattice spanned by (4,1),(6,0) has index 6 in Z^2
        let det: BigInt = e.rows().map(|(_, r)| r[0].1.clone()).product();
        assert_eq!(det, BigInt::from(6));
        assert!(e.contains(&sv(&[2, 2])));
        assert!(!e.contains(&sv(&[2, -3])));
        assert!(!e.insert(sv(&[10, 1])));
    }

    #[test]
    fn canonical_reduction() {
        let mut e = RowEchelon::new(3);
        e.insert(sv(&[3, 1, 0]));
        e.insert(sv(&[0, 5, 2]));
        let a = e.reduce(&sv(&[7, 3, 1]));
        let b = e.reduce(&axpy(&sv(&[7, 3, 1]), &BigInt::from(-4), &sv(&[3, 1, 0])));
        assert_eq!(a, b);
        assert!(a.iter().all(|(c, x)| e.pivot(*c).is_none_or(|p| x < p && !x.is_negative())));
    }
}
