//! Classification predicates, regularity and the fundamental subgroup.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::checks::SamplePolicy;
use super::power::{group_exponent, subgroup_verbal_power, verbal_power_subgroup};
use super::series::{centralizer_modulo, lower_central_series};
use super::{log_p, random_element, require_prime_steps};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pc::{PcElement, PcPresentation, PcSubgroup};
use crate::report::VerdictReport;

/// Sampled pairs for the regularity test above the exhaustive budget.
const REGULAR_SAMPLES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RegularStatus {
    HoldsExhaustive { pairs: usize },
    HoldsSampled { pairs: usize, seed: u64 },
    Fails { witness: String },
    Skipped { reason: String },
}

impl fmt::Display for RegularStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularStatus::HoldsExhaustive { pairs } => write!(f, "holds (exhaustive, {pairs} pairs)"),
            RegularStatus::HoldsSampled { pairs, seed } => write!(f, "holds (sampled, {pairs} pairs, seed {seed})"),
            RegularStatus::Fails { witness } => write!(f, "fails: {witness}"),
            RegularStatus::Skipped { reason } => write!(f, "skipped: {reason}"),
        }
    }
}

impl RegularStatus {
    pub fn holds(&self) -> Option<bool> {
        match self {
            RegularStatus::HoldsExhaustive { .. } | RegularStatus::HoldsSampled { .. } => Some(true),
            RegularStatus::Fails { .. } => Some(false),
            RegularStatus::Skipped { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub order: u128,
    pub class: usize,
    pub coclass: usize,
    pub exponent: u128,
    pub powerful: bool,
    pub potent: bool,
    pub maximal_class: bool,
    pub gamma_p_in_p2: bool,
    pub gamma_p1_in_gp: bool,
    pub regular: RegularStatus,
}

fn require_odd(g: &PcPresentation) -> Result<()> {
    if g.prime() == 2 {
        return Err(Error::Unsupported("power predicates are only defined here for odd primes".into()));
    }
    Ok(())
}

/// Order, class, exponent and the power-structure predicates of `G`.
pub fn classify(g: &PcPresentation, limits: &Limits, seed: u64) -> Result<PredicateReport> {
    let order = require_prime_steps(g)?;
    require_odd(g)?;
    let p = g.prime() as usize;
    let lcs = lower_central_series(g)?;
    let class = lcs.length();
    let coclass = log_p(g.prime(), order) as usize - class;
    let gp = verbal_power_subgroup(g, 1, limits)?;
    let gp2 = verbal_power_subgroup(g, 2, limits)?;
    let policy = if order * order <= limits.enum_threshold {
        SamplePolicy::Exhaustive
    } else {
        SamplePolicy::Sampled {
            count: REGULAR_SAMPLES,
            seed,
        }
    };
    Ok(PredicateReport {
        order,
        class,
        coclass,
        exponent: group_exponent(g, limits)?,
        powerful: g.is_subgroup_of(&lcs.term(2), &gp),
        potent: g.is_subgroup_of(&lcs.term(p - 1), &gp),
        maximal_class: coclass == 1,
        gamma_p_in_p2: g.is_subgroup_of(&lcs.term(p), &gp2),
        gamma_p1_in_gp: g.is_subgroup_of(&lcs.term(p + 1), &gp),
        regular: regularity_test(g, &policy, limits)?,
    })
}

/// `(xy)^p` and `x^p y^p` agree modulo `((<x, y>)')^p` for the tested pairs.
pub fn regularity_test(g: &PcPresentation, policy: &SamplePolicy, limits: &Limits) -> Result<RegularStatus> {
    require_prime_steps(g)?;
    let p = g.prime() as i64;
    let failing = |x: &PcElement, y: &PcElement| -> Result<Option<String>> {
        let lhs = g.power_elem(&g.multiply(x, y), p);
        let rhs = g.multiply(&g.power_elem(x, p), &g.power_elem(y, p));
        let diff = g.multiply(&g.invert(&rhs), &lhs);
        if diff.is_identity() {
            return Ok(None);
        }
        let pair = [x.clone(), y.clone()];
        let derived = g.closure_under(&[g.commutator(x, y)], &pair)?;
        let dp = subgroup_verbal_power(g, &derived, 1, limits)?;
        Ok((!g.contains(&dp, &diff)).then(|| {
            format!(
                "x = {}, y = {}: (xy)^p (x^p y^p)^-1 = {} is not a p-th power product in <x,y>'",
                g.format_element(x),
                g.format_element(y),
                g.format_element(&diff)
            )
        }))
    };
    match *policy {
        SamplePolicy::Exhaustive => {
            let elems = g.elements()?;
            for x in &elems {
                for y in &elems {
                    if let Some(w) = failing(x, y)? {
                        return Ok(RegularStatus::Fails { witness: w });
                    }
                }
            }
            Ok(RegularStatus::HoldsExhaustive {
                pairs: elems.len() * elems.len(),
            })
        }
        SamplePolicy::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let x = random_element(g, &mut rng);
                let y = random_element(g, &mut rng);
                if let Some(w) = failing(&x, &y)? {
                    return Ok(RegularStatus::Fails { witness: w });
                }
            }
            Ok(RegularStatus::HoldsSampled { pairs: count, seed })
        }
    }
}

/// The fundamental subgroup of a group of maximal class.
#[derive(Clone, Debug)]
pub struct FundamentalReport {
    /// `G_1 = C_G(gamma_2 / gamma_4)`.
    pub subgroup: PcSubgroup,
    pub order: u128,
    pub index: u128,
    /// `gamma_p(G) = G_1^p = G^p` with `G_1` regular, checked when
    /// `|G| >= p^{p+2}`.
    pub identity: VerdictReport,
}

pub fn fundamental_subgroup(g: &PcPresentation, limits: &Limits, seed: u64) -> Result<FundamentalReport> {
    let order = require_prime_steps(g)?;
    require_odd(g)?;
    let p = g.prime();
    let lcs = lower_central_series(g)?;
    let coclass = log_p(p, order) - lcs.length() as u32;
    if coclass != 1 {
        return Err(Error::NotMaximalClass { coclass });
    }
    let g1 = centralizer_modulo(g, lcs.term(2).gens(), &lcs.term(4), limits)?;
    let g1_order = g.subgroup_order(&g1).torsion_part;

    let mut identity = VerdictReport::new("fundamental-identity");
    let bound = (p as u128).pow(p as u32 + 2);
    let large = order >= bound;
    identity.hypothesis(
        format!("|G| >= p^(p+2) = {bound}"),
        large,
        (!large).then(|| format!("|G| = {order}")),
    );
    if !large {
        identity.not_applicable(format!("order {order} is below p^(p+2) = {bound}"));
    } else {
        let gamma_p = lcs.term(p as usize);
        let g1p = subgroup_verbal_power(g, &g1, 1, limits)?;
        let gp = verbal_power_subgroup(g, 1, limits)?;
        identity.compute("|gamma_p|", g.subgroup_order(&gamma_p));
        identity.compute("|G_1^p|", g.subgroup_order(&g1p));
        identity.compute("|G^p|", g.subgroup_order(&gp));
        if !g.subgroups_equal(&gamma_p, &g1p) {
            identity.fail("gamma_p(G) differs from G_1^p");
        }
        if !g.subgroups_equal(&g1p, &gp) {
            identity.fail("G_1^p differs from G^p");
        }
        let sub = g.subgroup_presentation(&g1)?;
        let sub_order = sub.order().torsion_part;
        let policy = if sub_order * sub_order <= limits.enum_threshold {
            SamplePolicy::Exhaustive
        } else {
            SamplePolicy::Sampled {
                count: REGULAR_SAMPLES,
                seed,
            }
        };
        let regular = regularity_test(&sub, &policy, limits)?;
        identity.compute("G_1 regular", &regular);
        if let RegularStatus::Fails { witness } = &regular {
            identity.fail(format!("G_1 is not regular: {witness}"));
        }
        if let SamplePolicy::Sampled { count, seed } = policy {
            identity.samples = count;
            identity.seed = Some(seed);
        }
    }
    Ok(FundamentalReport {
        subgroup: g1,
        order: g1_order,
        index: order / g1_order,
        identity,
    })
}
