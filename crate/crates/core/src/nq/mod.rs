//! Nilpotent quotients of finitely presented groups.
//!
//! The class-`k+1` quotient is built from the class-`k` one by adjoining a
//! central tail to every relation of its pc-presentation and a central
//! correction to the image of every free generator. The consistency
//! conditions of the extended presentation, together with the images of
//! the relators, cut the new layer out of the resulting central subgroup.

mod tails;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::lattice::{smith_normal_form, AbelianInvariants, IntMatrix, RowEchelon, SparseVec};
use crate::pc::{PcBuilder, PcElement, PcPresentation, RelOrder, Syllables};
use crate::presentation::{evaluate_word, FinitePresentation};

use tails::{tail_difference, TElem, Tails};

/// The class-`c` nilpotent quotient with its defining epimorphism.
#[derive(Clone, Debug)]
pub struct NqResult {
    pub quotient: PcPresentation,
    /// Image of each generator of the input presentation.
    pub images: Vec<PcElement>,
    /// Invariants of `gamma_k / gamma_{k+1}` for `k = 1..=achieved_class`.
    pub layer_invariants: Vec<AbelianInvariants>,
    pub achieved_class: usize,
}

/// An element of the next layer: the value of a relation of the current
/// quotient at the chosen lifts, or the correction of a generator image.
#[derive(Clone, Debug)]
enum Source {
    /// `h_i^{m_i} * rhs(h)^-1`
    Power { i: usize, rhs: Syllables },
    /// `h_i^-1 h_j h_i * rhs(h)^-1`
    Conj { j: usize, i: usize, rhs: Syllables },
    /// `rhs(h)^-1 * x` for the free generator `x`
    Image { x: usize, rhs: Syllables },
}

/// A generator lift as a product of source values.
type Definition = Vec<(Source, BigInt)>;

/// Layer-by-layer nilpotent quotient computation.
#[derive(Clone, Debug)]
pub struct NilpotentQuotient {
    input: FinitePresentation,
    group: PcPresentation,
    images: Vec<PcElement>,
    defs: Vec<Definition>,
    layers: Vec<AbelianInvariants>,
    stable: bool,
}

impl NilpotentQuotient {
    /// Starts from the trivial quotient of class 0.
    pub fn new(p: &FinitePresentation) -> Result<Self> {
        let group = PcBuilder::new(p.prime).name(p.name.clone()).build()?;
        Ok(NilpotentQuotient {
            input: p.clone(),
            images: vec![PcElement::identity(0); p.rank()],
            group,
            defs: Vec::new(),
            layers: Vec::new(),
            stable: false,
        })
    }

    pub fn class(&self) -> usize {
        self.layers.len()
    }

    /// Whether the last step found an empty layer.
    pub fn is_stable(&self) -> bool {
        self.stable
    }

    pub fn group(&self) -> &PcPresentation {
        &self.group
    }

    pub fn images(&self) -> &[PcElement] {
        &self.images
    }

    pub fn result(&self) -> NqResult {
        NqResult {
            quotient: self.group.clone(),
            images: self.images.clone(),
            layer_invariants: self.layers.clone(),
            achieved_class: self.class(),
        }
    }

    /// Steps until class `c` is reached or the series stabilizes.
    pub fn run_to(&mut self, c: usize) -> Result<()> {
        while self.class() < c && !self.stable {
            self.step()?;
        }
        Ok(())
    }

    fn evaluate_source(&self, t: &Tails, src: &Source, h: &[TElem], phi: &[TElem]) -> TElem {
        match src {
            Source::Power { i, rhs } => {
                let m = self.group.rel_order(*i).finite().expect("power source on a finite generator");
                t.mul(&t.pow_i64(&h[*i], m), &t.inv(&t.evaluate(rhs, h)))
            }
            Source::Conj { j, i, rhs } => t.mul(&t.conj(&h[*j], &h[*i]), &t.inv(&t.evaluate(rhs, h))),
            Source::Image { x, rhs } => t.mul(&t.inv(&t.evaluate(rhs, h)), &phi[*x]),
        }
    }

    /// Adds the next layer; returns `false` (and marks the computation
    /// stable) when the layer is trivial.
    pub fn step(&mut self) -> Result<bool> {
        if self.stable {
            return Ok(false);
        }
        let g = &self.group;
        let n = g.len();
        let d = self.input.rank();
        let t = Tails::new(g, d);
        let dim = t.dim();

        let mut lattice = RowEchelon::new(dim);
        for (left, right) in t.overlaps() {
            if left.exps != right.exps {
                return Err(Error::Internal("quotient presentation is inconsistent".into()));
            }
            let diff = tail_difference(&left.tail, &right.tail);
            if !diff.is_empty() {
                lattice.insert(diff);
            }
        }

        let phi: Vec<TElem> = (0..d)
            .map(|x| t.mul(&t.from_normal(&self.images[x]), &t.extra_generator(x)))
            .collect();
        let mut h: Vec<TElem> = Vec::with_capacity(n);
        for (j, def) in self.defs.iter().enumerate() {
            let v = def.iter().fold(t.identity(), |acc, (src, k)| {
                t.mul(&acc, &t.pow(&self.evaluate_source(&t, src, &h, &phi), k))
            });
            if v.exps != g.generator(j).exps {
                return Err(Error::Internal(format!("lift of generator {j} has the wrong image")));
            }
            h.push(v);
        }

        let mut sources = Vec::new();
        for i in 0..n {
            if g.rel_order(i).finite().is_some() {
                sources.push(Source::Power {
                    i,
                    rhs: g.power_rhs(i).clone(),
                });
            }
        }
        for j in 0..n {
            for i in 0..j {
                sources.push(Source::Conj {
                    j,
                    i,
                    rhs: g.conj_rhs(j, i).clone(),
                });
            }
        }
        for x in 0..d {
            sources.push(Source::Image {
                x,
                rhs: self.images[x].syllables(),
            });
        }
        let mut values: Vec<SparseVec> = Vec::with_capacity(sources.len());
        for src in &sources {
            let v = self.evaluate_source(&t, src, &h, &phi);
            if !v.is_central() {
                return Err(Error::Internal(format!("relation value {src:?} is not central")));
            }
            values.push(v.tail_vec());
        }

        for r in &self.input.relators {
            let v = evaluate_word(r, &phi, &t)?;
            if !v.is_central() {
                return Err(Error::Internal("relator does not vanish in the quotient".into()));
            }
            let tv = v.tail_vec();
            if !tv.is_empty() {
                lattice.insert(tv);
            }
        }

        // keep only the sources that enlarge the span
        let mut span = lattice.clone();
        let kept: Vec<usize> = (0..values.len())
            .filter(|&k| !values[k].is_empty() && span.insert(values[k].clone()))
            .collect();
        let q = kept.len();

        // relations among the kept values: lattice rows with zero V-part
        let mut combined = RowEchelon::new(dim + q);
        for (_, row) in lattice.rows() {
            combined.insert(row.clone());
        }
        for (slot, &k) in kept.iter().enumerate() {
            let mut row = values[k].clone();
            row.push((dim + slot, BigInt::one()));
            combined.insert(row);
        }
        let relations: Vec<Vec<BigInt>> = combined
            .rows()
            .filter(|(c, _)| *c >= dim)
            .map(|(_, row)| {
                let mut dense = vec![BigInt::zero(); q];
                for (c, v) in row {
                    dense[c - dim] = v.clone();
                }
                dense
            })
            .collect();
        let (diag, qm, qinv) = if relations.is_empty() {
            (Vec::new(), IntMatrix::identity(q), IntMatrix::identity(q))
        } else {
            let snf = smith_normal_form(&IntMatrix::from_rows(q, &relations));
            (snf.diagonal()[..snf.rank].to_vec(), snf.q, snf.q_inv)
        };
        // new generators: coordinates whose invariant factor is not 1
        let layer: Vec<(usize, BigInt)> = (0..q)
            .map(|i| (i, diag.get(i).cloned().unwrap_or_else(BigInt::zero)))
            .filter(|(_, m)| !m.is_one())
            .collect();
        if layer.is_empty() {
            self.stable = true;
            return Ok(false);
        }
        let coords = |v: &SparseVec| -> Result<Syllables> {
            let mut full = v.clone();
            full.retain(|(c, _)| *c < dim);
            let red = combined.reduce(&full);
            if red.iter().any(|(c, _)| *c < dim) {
                return Err(Error::Internal("layer element outside the span of its generators".into()));
            }
            let mut a = vec![BigInt::zero(); q];
            for (c, x) in red {
                a[c - dim] = -x;
            }
            let b = qm.vec_mul(&a);
            let mut out = Vec::new();
            for (slot, (i, m)) in layer.iter().enumerate() {
                let mut x = b[*i].clone();
                if m.is_positive() {
                    x = x.mod_floor(m);
                }
                if !x.is_zero() {
                    let x = x
                        .to_i64()
                        .ok_or_else(|| Error::Unsupported("layer exponent exceeds 64 bits".into()))?;
                    out.push((n + slot, x));
                }
            }
            Ok(out)
        };

        let class = self.class() as u32 + 1;
        let mut b = PcBuilder::new(g.prime()).name(g.name());
        for gen in g.gens() {
            b.gen(gen.name.clone(), gen.order, gen.weight);
        }
        let mut new_defs = Vec::with_capacity(layer.len());
        let mut invariants = AbelianInvariants {
            torsion: Vec::new(),
            free_rank: 0,
        };
        for (i, m) in &layer {
            let order = if m.is_zero() {
                invariants.free_rank += 1;
                RelOrder::Infinite
            } else {
                invariants.torsion.push(m.clone());
                RelOrder::Finite(
                    m.to_i64()
                        .ok_or_else(|| Error::Unsupported("relative order exceeds 64 bits".into()))?,
                )
            };
            b.gen(format!("g{}", b.len() + 1), order, class);
            let def: Definition = kept
                .iter()
                .enumerate()
                .filter(|(slot, _)| !qinv.get(*i, *slot).is_zero())
                .map(|(slot, &k)| (sources[k].clone(), qinv.get(*i, slot).clone()))
                .collect();
            new_defs.push(def);
        }
        let mut new_images = Vec::with_capacity(d);
        for (src, v) in sources.iter().zip(&values) {
            match src {
                Source::Power { i, rhs } => {
                    let mut r = rhs.clone();
                    r.extend(coords(v)?);
                    b.power(*i, r);
                }
                Source::Conj { j, i, rhs } => {
                    let mut r = rhs.clone();
                    r.extend(coords(v)?);
                    b.conj(*j, *i, r);
                }
                Source::Image { rhs, .. } => {
                    let mut r = rhs.clone();
                    r.extend(coords(v)?);
                    new_images.push(r);
                }
            }
        }
        let group = b.build()?;
        self.images = new_images
            .iter()
            .map(|syl| group.element_from_normal(syl))
            .collect();
        self.group = group;
        self.defs.extend(new_defs);
        self.layers.push(invariants);
        Ok(true)
    }
}

/// Class-`c` nilpotent quotient of `p`, stopping early once the lower
/// central series of the quotient stabilizes.
pub fn nilpotent_quotient(p: &FinitePresentation, c: usize) -> Result<NqResult> {
    let mut nq = NilpotentQuotient::new(p)?;
    nq.run_to(c)?;
    Ok(nq.result())
}

/// Recomputes the lower central series of the quotient directly and
/// compares its sections with the layers recorded during construction.
pub fn quotient_lcs_check(r: &NqResult) -> Result<Vec<AbelianInvariants>> {
    let series = crate::structure::lower_central_series(&r.quotient)?;
    if series.layers != r.layer_invariants {
        return Err(Error::Internal(format!(
            "recorded layers {:?} differ from the recomputed series {:?}",
            r.layer_invariants, series.layers
        )));
    }
    Ok(series.layers)
}
