//! Verbal power subgroups and exponents.

use super::series::lower_central_series;
use super::{prime_step_form, require_prime_steps};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pc::{PcElement, PcPresentation, PcSubgroup};

/// Number of fresh powers gathered per enumeration pass.
const POWERS_PER_PASS: usize = 16;

fn prime_power(p: u64, k: u32) -> Result<i64> {
    (p as i64)
        .checked_pow(k)
        .ok_or_else(|| Error::Unsupported(format!("{p}^{k} is out of range")))
}

/// `G^{p^k} = <x^{p^k} : x in G>`.
///
/// Starts from the normal closure of the generator powers and keeps adding
/// powers of elements whose image in the current quotient violates
/// exponent `p^k`. The fixpoint is certified by enumerating the final
/// quotient, which must not exceed the enumeration threshold.
pub fn verbal_power_subgroup(g: &PcPresentation, k: u32, limits: &Limits) -> Result<PcSubgroup> {
    require_prime_steps(g)?;
    let q = prime_power(g.prime(), k)?;
    let seeds: Vec<PcElement> = (0..g.len()).map(|i| g.power_elem(&g.generator(i), q)).collect();
    let mut n = g.normal_closure(&seeds)?;
    loop {
        let quo = g.quotient(&n)?;
        let order = quo.group.order().torsion_part;
        if order > limits.enum_threshold {
            return Err(Error::Uncertified(format!(
                "quotient of order {order} by the {q}-th power subgroup exceeds the enumeration threshold {}",
                limits.enum_threshold
            )));
        }
        let mut extra = Vec::new();
        for y in quo.group.elements()? {
            if !quo.group.power_elem(&y, q).is_identity() {
                extra.push(g.power_elem(&quo.lift(&y), q));
                if extra.len() == POWERS_PER_PASS {
                    break;
                }
            }
        }
        if extra.is_empty() {
            return Ok(n);
        }
        extra.extend(n.gens().iter().cloned());
        n = g.normal_closure(&extra)?;
    }
}

/// `H^{p^k}` for a subgroup `H`, computed inside `H` and mapped back.
pub fn subgroup_verbal_power(g: &PcPresentation, h: &PcSubgroup, k: u32, limits: &Limits) -> Result<PcSubgroup> {
    if h.is_trivial() {
        return Ok(PcSubgroup::trivial(g.len()));
    }
    let sub = g.subgroup_presentation(h)?;
    let v = verbal_power_subgroup(&sub, k, limits)?;
    let gens: Vec<PcElement> = v.gens().iter().map(|y| g.from_subgroup_coordinates(h, &y.exps)).collect();
    g.subgroup_span(&gens)
}

/// Largest element order, found by enumeration.
pub fn exponent_by_element_orders(g: &PcPresentation, limits: &Limits) -> Result<u128> {
    let order = require_prime_steps(g)?;
    if order > limits.enum_threshold {
        return Err(Error::Uncertified(format!(
            "group of order {order} exceeds the enumeration threshold {}",
            limits.enum_threshold
        )));
    }
    max_order(g, g.elements()?)
}

fn max_order(g: &PcPresentation, elems: Vec<PcElement>) -> Result<u128> {
    let mut best = 1;
    for x in elems {
        best = best.max(g.element_order(&x)?);
    }
    Ok(best)
}

/// Least `p^k` with `G^{p^k} = 1`.
pub fn exponent_by_verbal_chain(g: &PcPresentation, limits: &Limits) -> Result<u128> {
    require_prime_steps(g)?;
    let mut k = 0;
    let mut e: u128 = 1;
    loop {
        let trivial = if k == 0 {
            g.is_empty()
        } else {
            verbal_power_subgroup(g, k, limits)?.is_trivial()
        };
        if trivial {
            return Ok(e);
        }
        k += 1;
        e *= g.prime() as u128;
    }
}

/// Largest order of a pc-generator, which is the exponent when the class is
/// below `p`: such groups are regular, so the elements of order at most
/// `p^k` form a subgroup and containing every generator forces it to be `G`.
pub fn exponent_by_regular_generators(g: &PcPresentation) -> Result<u128> {
    require_prime_steps(g)?;
    let class = lower_central_series(g)?.length();
    if class >= g.prime() as usize {
        return Err(Error::Unsupported(format!(
            "class {class} is not below p = {}, so regularity is not guaranteed",
            g.prime()
        )));
    }
    max_order(g, (0..g.len()).map(|i| g.generator(i)).collect())
}

/// Exponent of a finite prime-step pc-group: by element orders up to the
/// enumeration threshold; above it from the generators when the class is
/// below `p`, and by the verbal chain otherwise.
pub fn group_exponent(g: &PcPresentation, limits: &Limits) -> Result<u128> {
    if require_prime_steps(g)? <= limits.enum_threshold {
        exponent_by_element_orders(g, limits)
    } else if lower_central_series(g)?.length() < g.prime() as usize {
        exponent_by_regular_generators(g)
    } else {
        exponent_by_verbal_chain(g, limits)
    }
}

/// Exponent of a finite subgroup of a possibly infinite pc-group.
pub fn subgroup_exponent(g: &PcPresentation, h: &PcSubgroup, limits: &Limits) -> Result<u128> {
    let order = g
        .subgroup_order(h)
        .finite()
        .ok_or_else(|| Error::Uncertified("subgroup is not finite".into()))?;
    if order <= limits.enum_threshold {
        max_order(g, g.subgroup_elements(h)?)
    } else {
        group_exponent(&prime_step_form(&g.subgroup_presentation(h)?)?, limits)
    }
}
