//! Refinement of a finite p-group presentation to relative orders `p`.

use super::{PcBuilder, PcElement, PcPresentation, RelOrder};
use crate::error::{Error, Result};

/// A prime-step presentation together with the digit maps relating it to
/// the original one.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub group: PcPresentation,
    /// For each original generator: first refined index and number of digits.
    blocks: Vec<(usize, usize)>,
    prime: i64,
}

impl Refinement {
    pub fn to_refined(&self, x: &PcElement) -> PcElement {
        let mut out = PcElement::identity(self.blocks.iter().map(|b| b.1).sum());
        for (i, &(start, len)) in self.blocks.iter().enumerate() {
            let mut v = x.exps[i];
            for t in 0..len {
                out.exps[start + t] = v % self.prime;
                v /= self.prime;
            }
        }
        out
    }

    pub fn to_original(&self, y: &PcElement) -> PcElement {
        let exps = self
            .blocks
            .iter()
            .map(|&(start, len)| {
                (0..len)
                    .rev()
                    .fold(0i64, |acc, t| acc * self.prime + y.exps[start + t])
            })
            .collect();
        PcElement { exps }
    }
}

impl PcPresentation {
    /// Splits every generator of relative order `p^k` into `k` generators
    /// `g, g^p, ..., g^{p^{k-1}}`.
    pub fn refine_to_prime_steps(&self) -> Result<Refinement> {
        let p = self.prime() as i64;
        let mut blocks = Vec::with_capacity(self.len());
        let mut b = PcBuilder::new(self.prime()).name(self.name());
        let mut origin = Vec::new();
        for (i, g) in self.gens().iter().enumerate() {
            let m = g
                .order
                .finite()
                .ok_or_else(|| Error::Unsupported("cannot refine an infinite generator".into()))?;
            let mut k = 0;
            let mut q = m;
            while q % p == 0 {
                q /= p;
                k += 1;
            }
            if q != 1 {
                return Err(Error::Unsupported(format!("relative order {m} is not a power of {p}")));
            }
            blocks.push((b.len(), k));
            for t in 0..k {
                let name = if t == 0 { g.name.clone() } else { format!("{}_{}", g.name, t) };
                b.gen(name, RelOrder::Finite(p), g.weight);
                origin.push((i, p.pow(t as u32)));
            }
        }
        let provisional = Refinement {
            group: PcBuilder::new(self.prime()).build()?,
            blocks: blocks.clone(),
            prime: p,
        };
        let digits = |x: &PcElement| provisional.to_refined(x).syllables();
        let elems: Vec<PcElement> = origin
            .iter()
            .map(|&(i, e)| self.power_elem(&self.generator(i), e))
            .collect();
        for (a, x) in elems.iter().enumerate() {
            b.power(a, digits(&self.power_elem(x, p)));
            for (c, y) in elems.iter().enumerate().take(a) {
                b.conj(a, c, digits(&self.conjugate(x, y)));
            }
        }
        Ok(Refinement {
            group: b.build()?,
            blocks,
            prime: p,
        })
    }
}
