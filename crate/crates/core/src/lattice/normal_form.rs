use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Result of [`smith_normal_form`]: `p * a * q == d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
    /// Inverse of `q`, maintained alongside it.
    pub q_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut p = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let mut qi = IntMatrix::identity(n);

    // column op on d and q: col[dst] += k col[src]; inverse as row op on qi
    let col_op = |d: &mut IntMatrix, q: &mut IntMatrix, qi: &mut IntMatrix, dst: usize, src: usize, k: &BigInt| {
        d.add_col_multiple(dst, src, k);
        q.add_col_multiple(dst, src, k);
        qi.add_row_multiple(src, dst, &-k);
    };
    let col_swap = |d: &mut IntMatrix, q: &mut IntMatrix, qi: &mut IntMatrix, x: usize, y: usize| {
        d.swap_cols(x, y);
        q.swap_cols(x, y);
        qi.swap_rows(x, y);
    };

    let mut t = 0;
    while t < m.min(n) {
        // global minimal pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let v = d.get(i, j);
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        p.swap_rows(t, bi);
        col_swap(&mut d, &mut q, &mut qi, t, bj);

        loop {
            let piv = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..m {
                let v = d.get(i, t).clone();
                if v.is_zero() {
                    continue;
                }
                let k = -(&v / &piv);
                d.add_row_multiple(i, t, &k);
                p.add_row_multiple(i, t, &k);
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let v = d.get(t, j).clone();
                if v.is_zero() {
                    continue;
                }
                let k = -(&v / &piv);
                col_op(&mut d, &mut q, &mut qi, j, t, &k);
                if !d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // bring the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    let v = d.get(i, t);
                    if !v.is_zero() && v.abs() < d.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let v = d.get(t, j);
                    if !v.is_zero() && v.abs() < d.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    p.swap_rows(t, best.0);
                } else if best.1 != t {
                    col_swap(&mut d, &mut q, &mut qi, t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !d.get(i, j).is_multiple_of(&piv) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    p.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    SmithForm {
        d,
        p,
        q,
        q_inv: qi,
        rank: t,
    }
}

/// Row-style Hermite normal form: `u * a == h`, `h` in echelon form with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    /// Rows of `u` beyond the rank: a basis of the left kernel of `a`.
    pub fn left_kernel(&self) -> Vec<Vec<BigInt>> {
        (self.rank..self.u.rows()).map(|i| self.u.row_vec(i)).collect()
    }
}

pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                let v = h.get(i, c);
                if !v.is_zero() && best.is_none_or(|b| v.abs() < h.get(b, c).abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let piv = h.get(r, c).clone();
            let mut rest = false;
            for i in r + 1..m {
                let v = h.get(i, c).clone();
                if v.is_zero() {
                    continue;
                }
                let k = -v.div_floor(&piv);
                h.add_row_multiple(i, r, &k);
                u.add_row_multiple(i, r, &k);
                if !h.get(i, c).is_zero() {
                    rest = true;
                }
            }
            if !rest {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let piv = h.get(r, c).clone();
        for i in 0..r {
            let k = -h.get(i, c).div_floor(&piv);
            h.add_row_multiple(i, r, &k);
            u.add_row_multiple(i, r, &k);
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm { h, u, rank: r, pivots }
}

/// Nonzero rows of the HNF of the given row vectors: a basis of their span.
pub fn lattice_basis(cols: usize, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let h = hermite_normal_form(&IntMatrix::from_rows(cols, rows));
    (0..h.rank).map(|i| h.h.row_vec(i)).collect()
}
