//! Central series, sections and centralizers.

use serde::Serialize;

use super::require_prime_steps;
use crate::error::{Error, Result};
use crate::lattice::{abelian_invariants, AbelianInvariants, IntMatrix};
use crate::limits::Limits;
use crate::pc::{PcElement, PcPresentation, PcSubgroup, RelOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    LowerCentral,
    UpperCentral,
    VerbalPower,
}

/// A chain of normal subgroups with the invariants of consecutive sections.
///
/// Lower central and verbal series are stored descending from `G` to the
/// identity; the upper central series ascending from the identity to `G`.
/// `layers[i]` describes the section between `terms[i]` and `terms[i + 1]`.
#[derive(Clone, Debug)]
pub struct SeriesChain {
    pub kind: SeriesKind,
    pub terms: Vec<PcSubgroup>,
    pub layers: Vec<AbelianInvariants>,
}

impl SeriesChain {
    /// Number of sections.
    pub fn length(&self) -> usize {
        self.layers.len()
    }

    /// The `i`-th term counting from 1 (for the lower central series,
    /// `gamma_i`); terms past the end are trivial.
    pub fn term(&self, i: usize) -> PcSubgroup {
        let parent_len = self.terms[0].parent_len();
        self.terms
            .get(i.saturating_sub(1))
            .cloned()
            .unwrap_or_else(|| PcSubgroup::trivial(parent_len))
    }

    pub fn term_orders(&self, g: &PcPresentation) -> Vec<u128> {
        self.terms.iter().map(|t| g.subgroup_order(t).torsion_part).collect()
    }
}

/// Invariants of `A/B` for `B <= A` with abelian quotient.
///
/// The relation lattice is read off the induced sequence of `A`: power and
/// commutator relations among its generators, plus the generators of `B`,
/// all written in coordinates over the sequence.
pub fn section_invariants(g: &PcPresentation, a: &PcSubgroup, b: &PcSubgroup) -> Result<AbelianInvariants> {
    let orders = g.subgroup_relative_orders(a);
    let coords = |x: &PcElement| {
        g.subgroup_coordinates(a, x)
            .ok_or_else(|| Error::Internal("element lies outside the section".into()))
    };
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (i, u) in a.gens().iter().enumerate() {
        if let RelOrder::Finite(m) = orders[i] {
            let mut row: Vec<i64> = coords(&g.power_elem(u, m))?.iter().map(|x| -x).collect();
            row[i] += m;
            rows.push(row);
        }
        for v in &a.gens()[..i] {
            rows.push(coords(&g.commutator(u, v))?);
        }
    }
    for v in b.gens() {
        rows.push(coords(v)?);
    }
    Ok(abelian_invariants(&IntMatrix::from_rows(a.len(), &rows)))
}

fn chain_layers(g: &PcPresentation, terms: &[PcSubgroup], descending: bool) -> Result<Vec<AbelianInvariants>> {
    terms
        .windows(2)
        .map(|w| {
            if descending {
                section_invariants(g, &w[0], &w[1])
            } else {
                section_invariants(g, &w[1], &w[0])
            }
        })
        .collect()
}

/// `gamma_1 = G`, `gamma_{i+1} = [gamma_i, G]`, down to the identity.
pub fn lower_central_series(g: &PcPresentation) -> Result<SeriesChain> {
    let whole = g.whole();
    let mut terms = vec![whole.clone()];
    loop {
        let cur = terms.last().unwrap();
        if cur.is_trivial() {
            break;
        }
        let next = g.commutator_subgroup(cur, &whole)?;
        if g.is_subgroup_of(cur, &next) {
            return Err(Error::Structural("lower central series does not reach the identity".into()));
        }
        terms.push(next);
    }
    let layers = chain_layers(g, &terms, true)?;
    Ok(SeriesChain {
        kind: SeriesKind::LowerCentral,
        terms,
        layers,
    })
}

pub fn nilpotency_class(g: &PcPresentation) -> Result<usize> {
    Ok(lower_central_series(g)?.length())
}

/// `Z_0 = 1`, `Z_{i+1}/Z_i = Z(G/Z_i)`, up to `G`.
pub fn upper_central_series(g: &PcPresentation, limits: &Limits) -> Result<SeriesChain> {
    require_prime_steps(g)?;
    let gens: Vec<PcElement> = (0..g.len()).map(|i| g.generator(i)).collect();
    let whole = g.whole();
    let mut terms = vec![PcSubgroup::trivial(g.len())];
    while !g.is_subgroup_of(&whole, terms.last().unwrap()) {
        let z = centralizer_modulo(g, &gens, terms.last().unwrap(), limits)?;
        if g.is_subgroup_of(&z, terms.last().unwrap()) {
            return Err(Error::Structural("upper central series does not reach the group".into()));
        }
        terms.push(z);
    }
    let layers = chain_layers(g, &terms, false)?;
    Ok(SeriesChain {
        kind: SeriesKind::UpperCentral,
        terms,
        layers,
    })
}

/// `{x in G : [x, s] in N for every s in S}` for a normal subgroup `N`.
///
/// Groups up to the enumeration threshold are searched element by element;
/// larger ones go down the pc-series one central section at a time.
pub fn centralizer_modulo(g: &PcPresentation, s: &[PcElement], n: &PcSubgroup, limits: &Limits) -> Result<PcSubgroup> {
    if require_prime_steps(g)? <= limits.enum_threshold {
        centralizer_by_enumeration(g, s, n)
    } else {
        centralizer_by_layers(g, s, n)
    }
}

pub fn centralizer_by_enumeration(g: &PcPresentation, s: &[PcElement], n: &PcSubgroup) -> Result<PcSubgroup> {
    require_prime_steps(g)?;
    let members: Vec<PcElement> = g
        .elements()?
        .into_iter()
        .filter(|x| s.iter().all(|y| g.contains(n, &g.commutator(x, y))))
        .collect();
    g.subgroup_span(&members)
}

/// Writes `M_k = N <g_k, ..., g_n>`. If `C` centralizes `S` modulo `M_{k-1}`,
/// then `x -> ([x, s] mod M_k)_s` is a homomorphism from `C` into copies of
/// the central section `M_{k-1}/M_k` of order at most `p`; its kernel is the
/// centralizer modulo `M_k`.
pub fn centralizer_by_layers(g: &PcPresentation, s: &[PcElement], n: &PcSubgroup) -> Result<PcSubgroup> {
    require_prime_steps(g)?;
    let p = g.prime() as i64;
    let mut c = g.whole();
    let mut above = g.whole();
    for k in 1..=g.len() {
        let mut tail: Vec<PcElement> = (k..g.len()).map(|i| g.generator(i)).collect();
        tail.extend(n.gens().iter().cloned());
        let below = g.subgroup_span(&tail)?;
        if g.is_subgroup_of(&above, &below) {
            continue;
        }
        let z = g.generator(k - 1);
        let zinv_powers: Vec<PcElement> = (0..p).map(|e| g.power_elem(&z, -e)).collect();
        let section_value = |w: &PcElement| -> Result<i64> {
            (0..p)
                .find(|&e| g.contains(&below, &g.multiply(w, &zinv_powers[e as usize])))
                .ok_or_else(|| Error::Internal("commutator left the central section".into()))
        };
        let mut images: Vec<Vec<i64>> = Vec::with_capacity(c.len());
        for u in c.gens() {
            let row = s.iter().map(|y| section_value(&g.commutator(u, y))).collect::<Result<Vec<_>>>()?;
            images.push(row);
        }
        let kernel = nullspace_mod_p(&images, p);
        let mut gens: Vec<PcElement> = Vec::new();
        for a in &kernel {
            let mut x = PcElement::identity(g.len());
            for (u, &e) in c.gens().iter().zip(a) {
                if e != 0 {
                    x = g.multiply(&x, &g.power_elem(u, e));
                }
            }
            gens.push(x);
        }
        for (i, u) in c.gens().iter().enumerate() {
            gens.push(g.power_elem(u, p));
            for v in &c.gens()[..i] {
                gens.push(g.commutator(u, v));
            }
        }
        c = g.subgroup_span(&gens)?;
        above = below;
    }
    Ok(c)
}

/// Basis of `{a : sum_t a_t rows[t] = 0 mod p}` with entries in `[0, p)`.
fn nullspace_mod_p(rows: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
    let t = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    // columns of the transposed system, reduced to echelon form
    let mut m: Vec<Vec<i64>> = (0..width).map(|j| rows.iter().map(|r| r[j].rem_euclid(p)).collect()).collect();
    let inv = |a: i64| -> i64 {
        let mut r = 1;
        for _ in 0..p - 2 {
            r = r * a % p;
        }
        r
    };
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..t {
        let Some(r) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, r);
        let f = inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = *x * f % p;
        }
        for r2 in 0..m.len() {
            if r2 != row && m[r2][col] != 0 {
                let k = m[r2][col];
                for c2 in 0..t {
                    m[r2][c2] = (m[r2][c2] - k * m[row][c2]).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..t).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut a = vec![0; t];
            a[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                a[pc] = (-m[r][f]).rem_euclid(p);
            }
            a
        })
        .collect()
}
