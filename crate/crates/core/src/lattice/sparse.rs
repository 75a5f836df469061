use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{smith_normal_form, IntMatrix, RowEchelon, SparseVec};

/// Elementary divisors of a sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseDivisors {
    pub rank: usize,
    /// Elementary divisors greater than one, in increasing divisibility order.
    pub nontrivial: Vec<BigInt>,
    /// Pivots eliminated before the dense stage.
    pub unit_pivots: usize,
    /// Dimensions of the residual dense block.
    pub core: (usize, usize),
}

trait Coeff: Clone + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn unit_sign(&self) -> Option<bool>;
    /// `self - k * b`, or `None` on overflow.
    fn sub_mul(&self, k: &Self, b: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn unit_sign(&self) -> Option<bool> {
        match *self {
            1 => Some(true),
            -1 => Some(false),
            _ => None,
        }
    }
    fn sub_mul(&self, k: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(k.checked_mul(*b)?)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn unit_sign(&self) -> Option<bool> {
        if self.is_one() {
            Some(true)
        } else if (-self).is_one() {
            Some(false)
        } else {
            None
        }
    }
    fn sub_mul(&self, k: &Self, b: &Self) -> Option<Self> {
        Some(self - k * b)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Row<T> = Vec<(u32, T)>;

/// Elementary divisors of the matrix with the given sparse rows.
///
/// Unit entries are eliminated first, choosing at each step a column with
/// the fewest nonzeros and its shortest row holding a unit; the remaining
/// block is handed to the dense Smith form. Arithmetic runs in `i64` and is
/// redone with big integers if an intermediate value overflows.
pub fn sparse_elementary_divisors(cols: usize, rows: &[Vec<(usize, i64)>]) -> SparseDivisors {
    let small: Vec<Row<i64>> = rows.iter().map(|r| normalize(r)).collect();
    if let Some(d) = eliminate(cols, small) {
        return d;
    }
    let big: Vec<Row<BigInt>> = rows
        .iter()
        .map(|r| normalize(r).into_iter().map(|(c, v)| (c, BigInt::from(v))).collect())
        .collect();
    eliminate(cols, big).expect("big-integer elimination cannot overflow")
}

fn normalize(r: &[(usize, i64)]) -> Row<i64> {
    let mut v: Vec<(u32, i64)> = r.iter().map(|&(c, x)| (c as u32, x)).collect();
    v.sort_by_key(|e| e.0);
    let mut out: Row<i64> = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// `a - k * b` over sparse rows.
fn row_sub_mul<T: Coeff>(a: &Row<T>, k: &T, b: &Row<T>) -> Option<Row<T>> {
    let zero = T::from_i64(0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, zero.sub_mul(k, &b[j].1)?));
            j += 1;
        } else {
            let v = a[i].1.sub_mul(k, &b[j].1)?;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn eliminate<T: Coeff>(cols: usize, mut rows: Vec<Row<T>>) -> Option<SparseDivisors> {
    let mut alive = vec![true; rows.len()];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); cols];
    let mut count = vec![0usize; cols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_rows[*c as usize].push(i as u32);
            count[*c as usize] += 1;
        }
    }
    let mut col_done = vec![false; cols];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..cols).filter(|&c| count[c] > 0).map(|c| Reverse((count[c], c))).collect();
    let mut unit_pivots = 0;

    loop {
        while let Some(Reverse((cnt, c))) = heap.pop() {
            if col_done[c] || cnt != count[c] || cnt == 0 {
                continue;
            }
            // live rows still holding column c
            let mut holders: Vec<u32> = Vec::with_capacity(cnt);
            let mut pivot: Option<(u32, usize)> = None;
            for &ri in &col_rows[c] {
                let r = ri as usize;
                if !alive[r] {
                    continue;
                }
                let Ok(pos) = rows[r].binary_search_by_key(&(c as u32), |e| e.0) else {
                    continue;
                };
                if holders.last() == Some(&ri) {
                    continue;
                }
                holders.push(ri);
                if rows[r][pos].1.unit_sign().is_some() && pivot.is_none_or(|(_, len)| rows[r].len() < len) {
                    pivot = Some((ri, rows[r].len()));
                }
            }
            holders.sort_unstable();
            holders.dedup();
            col_rows[c] = holders.clone();
            let Some((pr, _)) = pivot else { continue };
            let pr = pr as usize;
            let prow = std::mem::take(&mut rows[pr]);
            let pos = prow.binary_search_by_key(&(c as u32), |e| e.0).ok()?;
            let positive = prow[pos].1.unit_sign()?;
            for &ri in &holders {
                let r = ri as usize;
                if r == pr {
                    continue;
                }
                let Ok(p2) = rows[r].binary_search_by_key(&(c as u32), |e| e.0) else {
                    continue;
                };
                let a = rows[r][p2].1.clone();
                let k = if positive { a } else { a.neg()? };
                let old = std::mem::take(&mut rows[r]);
                let new = row_sub_mul(&old, &k, &prow)?;
                update_counts(&old, &new, r as u32, &mut count, &mut col_rows, &mut heap, &col_done);
                if new.is_empty() {
                    alive[r] = false;
                }
                rows[r] = new;
            }
            alive[pr] = false;
            for (cc, _) in &prow {
                let cc = *cc as usize;
                count[cc] -= 1;
                if !col_done[cc] && cc != c && count[cc] > 0 {
                    heap.push(Reverse((count[cc], cc)));
                }
            }
            col_done[c] = true;
            count[c] = 0;
            col_rows[c] = Vec::new();
            unit_pivots += 1;
        }
        // entries can turn into units without a count change; sweep once more
        let mut again = false;
        for c in 0..cols {
            if !col_done[c] && count[c] > 0 {
                let has_unit = col_rows[c].iter().any(|&ri| {
                    alive[ri as usize]
                        && rows[ri as usize]
                            .binary_search_by_key(&(c as u32), |e| e.0)
                            .is_ok_and(|p| rows[ri as usize][p].1.unit_sign().is_some())
                });
                if has_unit {
                    heap.push(Reverse((count[c], c)));
                    again = true;
                }
            }
        }
        if !again {
            break;
        }
    }

    let live_cols: Vec<usize> = (0..cols).filter(|&c| !col_done[c] && count[c] > 0).collect();
    let mut col_index = vec![usize::MAX; cols];
    for (k, &c) in live_cols.iter().enumerate() {
        col_index[c] = k;
    }
    // fold the surviving rows into an echelon basis of their span, which
    // has at most one row per live column
    let mut basis = RowEchelon::new(live_cols.len());
    let mut core_rows = 0;
    for (i, r) in rows.iter().enumerate() {
        if !alive[i] || r.is_empty() {
            continue;
        }
        core_rows += 1;
        let v: SparseVec = r.iter().map(|(c, v)| (col_index[*c as usize], v.to_big())).collect();
        basis.insert(v);
        if core_rows % 1024 == 0 {
            basis.fully_reduce();
        }
    }
    basis.fully_reduce();
    let mut dense = IntMatrix::zeros(basis.rank(), live_cols.len());
    for (i, (_, r)) in basis.rows().enumerate() {
        for (c, v) in r {
            dense.set(i, *c, v.clone());
        }
    }
    let core = (core_rows, dense.cols());
    let snf = smith_normal_form(&dense);
    let diag = snf.diagonal();
    let nontrivial = diag[..snf.rank].iter().filter(|d| !d.is_one()).cloned().collect();
    Some(SparseDivisors {
        rank: unit_pivots + snf.rank,
        nontrivial,
        unit_pivots,
        core,
    })
}

fn update_counts<T>(
    old: &Row<T>,
    new: &Row<T>,
    row: u32,
    count: &mut [usize],
    col_rows: &mut [Vec<u32>],
    heap: &mut BinaryHeap<Reverse<(usize, usize)>>,
    col_done: &[bool],
) {
    let (mut i, mut j) = (0, 0);
    while i < old.len() || j < new.len() {
        if j == new.len() || (i < old.len() && old[i].0 < new[j].0) {
            let c = old[i].0 as usize;
            count[c] -= 1;
            if !col_done[c] && count[c] > 0 {
                heap.push(Reverse((count[c], c)));
            }
            i += 1;
        } else if i == old.len() || new[j].0 < old[i].0 {
            let c = new[j].0 as usize;
            count[c] += 1;
            col_rows[c].push(row);
            if !col_done[c] {
                heap.push(Reverse((count[c], c)));
            }
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
}
