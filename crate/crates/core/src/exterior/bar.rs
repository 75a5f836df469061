//! Second integral homology from the normalized bar complex.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{sparse_elementary_divisors, AbelianInvariants};
use crate::pc::PcPresentation;

/// Sizes and ranks of the boundary maps used by [`bar_h2`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarComplexStats {
    pub cells: [usize; 4],
    pub rank_d2: usize,
    pub rank_d3: usize,
}

/// `H_2(G; Z)` of a finite pc-group by brute force.
///
/// Cells of degree `k` are the `k`-tuples of non-identity elements, with
/// `d2[g|h] = [h] - [gh] + [g]` and
/// `d3[g|h|k] = [h|k] - [gh|k] + [g|hk] - [g|h]`; terms with an identity
/// entry vanish. The torsion of `H_2` is the torsion of `C_2 / im d3`.
pub fn bar_h2(g: &PcPresentation, max_order: u128) -> Result<(AbelianInvariants, BarComplexStats)> {
    let order = g.order().finite().ok_or(Error::InfiniteOrder)?;
    if order > max_order {
        return Err(Error::OrderAboveCap { order, cap: max_order });
    }
    let elems: Vec<_> = g.elements()?.into_iter().filter(|x| !x.is_identity()).collect();
    let m = elems.len();
    let index: HashMap<_, _> = elems.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
    // product table over non-identity elements, `None` for the identity
    let table: Vec<Vec<Option<usize>>> = elems
        .iter()
        .map(|x| elems.iter().map(|y| index.get(&g.multiply(x, y)).copied()).collect())
        .collect();
    let pair = |a: usize, b: usize| a * m + b;

    let mut d2: Vec<Vec<(usize, i64)>> = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let mut row = vec![(b, 1), (a, 1)];
            if let Some(ab) = table[a][b] {
                row.push((ab, -1));
            }
            d2.push(row);
        }
    }
    let mut d3: Vec<Vec<(usize, i64)>> = Vec::with_capacity(m * m * m);
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let mut row = vec![(pair(b, c), 1), (pair(a, b), -1)];
                if let Some(ab) = table[a][b] {
                    row.push((pair(ab, c), -1));
                }
                if let Some(bc) = table[b][c] {
                    row.push((pair(a, bc), 1));
                }
                d3.push(row);
            }
        }
    }
    let rank_d2 = sparse_elementary_divisors(m, &d2).rank;
    let div3 = sparse_elementary_divisors(m * m, &d3);
    let stats = BarComplexStats {
        cells: [1, m, m * m, m * m * m],
        rank_d2,
        rank_d3: div3.rank,
    };
    let h2 = AbelianInvariants {
        torsion: div3.nontrivial,
        free_rank: m * m - rank_d2 - div3.rank,
    };
    Ok((h2, stats))
}

/// [`bar_h2`] without the statistics.
pub fn bar_h2_oracle(g: &PcPresentation, max_order: u128) -> Result<AbelianInvariants> {
    Ok(bar_h2(g, max_order)?.0)
}
