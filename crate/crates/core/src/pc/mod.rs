//! Polycyclic presentations with finite and infinite relative orders.
//!
//! Relations are stored in the form
//!
//! ```text
//! g_i^{m_i}       = w_i        (finite m_i; w_i in g_{i+1}..g_k)
//! g_j^{g_i}       = g_j u_ij   (i < j; u_ij in g_{j+1}..g_k)
//! g_j^{g_i^-1}    = g_j v_ij   (i < j, m_i infinite)
//! ```
//!
//! so every subgroup `G_i = <g_i, ..., g_k>` is normal. All right-hand sides
//! are kept as collected normal forms.

mod collect;
mod consistency;
mod refine;
mod subgroup;
mod text;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use consistency::{ConsistencyReport, OverlapCheck};
pub use refine::Refinement;
pub use subgroup::{PcSubgroup, Quotient};
pub use text::parse_pc_presentation;

use crate::error::{Error, Result};
use crate::presentation::{FinitePresentation, FreeWord};

/// A collected word: `(generator, exponent)` with strictly increasing
/// generator indices and nonzero exponents.
pub type Syllables = Vec<(usize, i64)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelOrder {
    Finite(i64),
    Infinite,
}

impl RelOrder {
    pub fn finite(self) -> Option<i64> {
        match self {
            RelOrder::Finite(m) => Some(m),
            RelOrder::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == RelOrder::Infinite
    }
}

impl fmt::Display for RelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelOrder::Finite(m) => write!(f, "{m}"),
            RelOrder::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcGen {
    pub name: String,
    pub order: RelOrder,
    pub weight: u32,
}

/// Element of a pc-group as its normal-form exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PcElement {
    pub exps: Vec<i64>,
}

impl PcElement {
    pub fn identity(len: usize) -> Self {
        PcElement { exps: vec![0; len] }
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Index of the first nonzero exponent.
    pub fn leading(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e != 0)
    }

    pub fn syllables(&self) -> Syllables {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i, e))
            .collect()
    }
}

/// Group order of a pc-group: the product of the finite relative orders and
/// the number of infinite ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcOrder {
    pub torsion_part: u128,
    pub hirsch_length: usize,
}

impl PcOrder {
    pub fn finite(self) -> Option<u128> {
        (self.hirsch_length == 0).then_some(self.torsion_part)
    }
}

impl fmt::Display for PcOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hirsch_length {
            0 => write!(f, "{}", self.torsion_part),
            h => write!(f, "infinite (Hirsch length {h}, finite part {})", self.torsion_part),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    name: String,
    prime: u64,
    gens: Vec<PcGen>,
    power: Vec<Syllables>,
    /// `conj[j][i]` for `i < j`: normal form of `g_j^{g_i}`.
    conj: Vec<Vec<Syllables>>,
    /// `conj_inv[j][i]` for `i < j` with `g_i` of infinite order.
    conj_inv: Vec<Vec<Syllables>>,
    /// Generators beyond `bound[i]` commute with every `g_l`, `l >= i`.
    bound: Vec<usize>,
}

/// Incremental construction of a [`PcPresentation`]; unspecified power
/// relations are trivial and unspecified conjugates commute.
#[derive(Clone, Debug)]
pub struct PcBuilder {
    name: String,
    prime: u64,
    gens: Vec<PcGen>,
    power: Vec<Option<Syllables>>,
    conj: Vec<Vec<Option<Syllables>>>,
    conj_inv: Vec<Vec<Option<Syllables>>>,
}

impl PcBuilder {
    pub fn new(prime: u64) -> Self {
        PcBuilder {
            name: String::new(),
            prime,
            gens: Vec::new(),
            power: Vec::new(),
            conj: Vec::new(),
            conj_inv: Vec::new(),
        }
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn gen(&mut self, name: impl Into<String>, order: RelOrder, weight: u32) -> usize {
        let j = self.gens.len();
        self.gens.push(PcGen {
            name: name.into(),
            order,
            weight,
        });
        self.power.push(None);
        self.conj.push(vec![None; j]);
        self.conj_inv.push(vec![None; j]);
        j
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[PcGen] {
        &self.gens
    }

    pub fn power(&mut self, i: usize, rhs: Syllables) -> &mut Self {
        self.power[i] = Some(rhs);
        self
    }

    /// Sets `g_j^{g_i}`, given as a full normal form (starting with `g_j`).
    pub fn conj(&mut self, j: usize, i: usize, rhs: Syllables) -> &mut Self {
        self.conj[j][i] = Some(rhs);
        self
    }

    /// Sets `g_j^{g_i^-1}` for an infinite-order `g_i`.
    pub fn conj_inv(&mut self, j: usize, i: usize, rhs: Syllables) -> &mut Self {
        self.conj_inv[j][i] = Some(rhs);
        self
    }

    pub fn build(self) -> Result<PcPresentation> {
        let k = self.gens.len();
        let PcBuilder {
            name,
            prime,
            gens,
            power,
            conj,
            conj_inv,
        } = self;
        let power: Vec<Syllables> = power.into_iter().map(Option::unwrap_or_default).collect();
        let conj: Vec<Vec<Syllables>> = conj
            .into_iter()
            .enumerate()
            .map(|(j, row)| row.into_iter().map(|r| r.unwrap_or_else(|| vec![(j, 1)])).collect())
            .collect();
        let given_inv = conj_inv;
        let mut pcp = PcPresentation {
            name,
            prime,
            gens,
            power,
            conj,
            conj_inv: (0..k).map(|j| vec![Vec::new(); j]).collect(),
            bound: vec![0; k],
        };
        pcp.validate()?;
        pcp.compute_bounds();
        pcp.complete_inverse_conjugates(given_inv)?;
        Ok(pcp)
    }
}

impl PcPresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[PcGen] {
        &self.gens
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn rel_order(&self, i: usize) -> RelOrder {
        self.gens[i].order
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.gens[i].weight
    }

    pub fn power_rhs(&self, i: usize) -> &Syllables {
        &self.power[i]
    }

    pub fn conj_rhs(&self, j: usize, i: usize) -> &Syllables {
        &self.conj[j][i]
    }

    pub fn conj_inv_rhs(&self, j: usize, i: usize) -> &Syllables {
        &self.conj_inv[j][i]
    }

    pub fn order(&self) -> PcOrder {
        let mut torsion_part = 1u128;
        let mut hirsch_length = 0;
        for g in &self.gens {
            match g.order {
                RelOrder::Finite(m) => torsion_part *= m as u128,
                RelOrder::Infinite => hirsch_length += 1,
            }
        }
        PcOrder {
            torsion_part,
            hirsch_length,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.gens.iter().all(|g| !g.order.is_infinite())
    }

    /// Whether every relative order equals the prime.
    pub fn has_prime_steps(&self) -> bool {
        self.gens.iter().all(|g| g.order == RelOrder::Finite(self.prime as i64))
    }

    pub fn generator(&self, i: usize) -> PcElement {
        let mut e = PcElement::identity(self.len());
        e.exps[i] = 1;
        e
    }

    /// Builds an element from syllables that are already in normal form.
    pub fn element_from_normal(&self, syl: &Syllables) -> PcElement {
        let mut e = PcElement::identity(self.len());
        for &(g, x) in syl {
            e.exps[g] = x;
        }
        e
    }

    pub fn is_normal_form(&self, e: &PcElement) -> bool {
        e.exps.len() == self.len()
            && e.exps.iter().zip(&self.gens).all(|(&x, g)| match g.order {
                RelOrder::Finite(m) => (0..m).contains(&x),
                RelOrder::Infinite => true,
            })
    }

    /// Renders a normal form as `g1^e1 g2^e2 ...`; the identity is `1`.
    pub fn format_element(&self, e: &PcElement) -> String {
        let parts: Vec<String> = e
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| format!("{}^{}", self.gens[i].name, x))
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    fn validate(&self) -> Result<()> {
        if self.prime == 2 {
            return Err(Error::EvenPrime(2));
        }
        let k = self.len();
        for (i, g) in self.gens.iter().enumerate() {
            if let RelOrder::Finite(m) = g.order {
                if m < 2 {
                    return Err(Error::Structural(format!("generator {} has relative order {m}", g.name)));
                }
            }
            if i > 0 && g.weight < self.gens[i - 1].weight {
                return Err(Error::Structural(format!(
                    "weights must be nondecreasing, but {} has weight {} after {}",
                    g.name,
                    g.weight,
                    self.gens[i - 1].weight
                )));
            }
        }
        let check_tail = |what: String, syl: &Syllables, after: usize| -> Result<()> {
            let mut prev: Option<usize> = None;
            for &(g, x) in syl {
                if g >= k {
                    return Err(Error::Structural(format!("{what} uses generator index {g} out of range")));
                }
                if g <= after {
                    return Err(Error::Structural(format!(
                        "{what} references {}, which is not a higher-index generator",
                        self.gens[g].name
                    )));
                }
                if prev.is_some_and(|p| p >= g) || x == 0 {
                    return Err(Error::Structural(format!("{what} is not in normal form")));
                }
                if let RelOrder::Finite(m) = self.gens[g].order {
                    if !(0..m).contains(&x) {
                        return Err(Error::Structural(format!("{what} has exponent {x} out of range")));
                    }
                }
                prev = Some(g);
            }
            Ok(())
        };
        for i in 0..k {
            if self.gens[i].order.is_infinite() && !self.power[i].is_empty() {
                return Err(Error::Structural(format!(
                    "infinite generator {} has a power relation",
                    self.gens[i].name
                )));
            }
            check_tail(format!("power relation of {}", self.gens[i].name), &self.power[i], i)?;
        }
        for j in 0..k {
            for i in 0..j {
                let what = format!("conjugate {}^{}", self.gens[j].name, self.gens[i].name);
                let rhs = &self.conj[j][i];
                match rhs.first() {
                    Some(&(g, 1)) if g == j => {}
                    _ => {
                        return Err(Error::Structural(format!("{what} must start with {}", self.gens[j].name)));
                    }
                }
                check_tail(what, &rhs[1..].to_vec(), j)?;
            }
        }
        Ok(())
    }

    fn compute_bounds(&mut self) {
        let k = self.len();
        let mut bound = vec![0; k];
        for i in 0..k {
            let mut b = i;
            for j in i + 1..k {
                if (i..j).any(|l| self.conj[j][l].len() > 1) {
                    b = j;
                }
            }
            for j in i + 1..k {
                if (j + 1..k).any(|l| self.conj[l][j].len() > 1) {
                    b = b.max(j);
                }
            }
            bound[i] = b;
        }
        self.bound = bound;
    }

    pub(crate) fn bound(&self, i: usize) -> usize {
        self.bound[i]
    }

    /// Fills `conj_inv` for every infinite generator, checking any supplied
    /// values against the computed ones.
    fn complete_inverse_conjugates(&mut self, given: Vec<Vec<Option<Syllables>>>) -> Result<()> {
        let k = self.len();
        for i in (0..k).rev() {
            if !self.gens[i].order.is_infinite() {
                for j in i + 1..k {
                    if given[j][i].is_some() {
                        return Err(Error::Structural(format!(
                            "inverse conjugate given for finite generator {}",
                            self.gens[i].name
                        )));
                    }
                }
                continue;
            }
            // phi = conjugation by g_i on G_{i+1}; phi^-1(g_j) = g_j phi^-1(u_ij)^-1
            for j in (i + 1..k).rev() {
                let u: Syllables = self.conj[j][i][1..].to_vec();
                let mut pre = PcElement::identity(k);
                for &(l, x) in &u {
                    let img = self.element_from_normal(&self.conj_inv[l][i]);
                    let p = self.power_elem(&img, x);
                    pre = self.multiply(&pre, &p);
                }
                let val = self.multiply(&self.generator(j), &self.invert(&pre));
                let syl = val.syllables();
                if let Some(g) = &given[j][i] {
                    if *g != syl {
                        return Err(Error::Inconsistent(format!(
                            "supplied {}^({}^-1) disagrees with the inverse of the conjugation action",
                            self.gens[j].name, self.gens[i].name
                        )));
                    }
                }
                self.conj_inv[j][i] = syl;
            }
        }
        Ok(())
    }

    /// The same presentation with the given generators renamed.
    pub fn with_names(mut self, names: &[String]) -> Self {
        for (g, n) in self.gens.iter_mut().zip(names) {
            g.name = n.clone();
        }
        self
    }

    /// The pc relations as a finite presentation on the pc generators.
    pub fn to_finite_presentation(&self) -> Result<FinitePresentation> {
        let word = |syl: &Syllables| FreeWord::from_letters(syl.iter().copied());
        let mut relators = Vec::new();
        for i in 0..self.len() {
            if let RelOrder::Finite(m) = self.rel_order(i) {
                relators.push(FreeWord::letter(i, m).mul(&word(&self.power[i]).inverse()));
            }
            for j in i + 1..self.len() {
                let lhs = FreeWord::generator(j).conjugate(&FreeWord::generator(i));
                let rel = lhs.mul(&word(&self.conj[j][i]).inverse());
                if !rel.is_identity() {
                    relators.push(rel);
                }
            }
        }
        let names = self.names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        FinitePresentation::new(self.name.clone(), self.prime, &refs, relators)
    }
}
