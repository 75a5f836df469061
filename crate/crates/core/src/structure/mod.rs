//! Power structure and predicate checks on finite pc-groups.
//!
//! The routines here expect a finite pc-group whose relative orders all
//! equal the prime. [`prime_step_form`] refines any finite pc-group into
//! that shape and [`presented_group`] builds one from a finite presentation.
//! Because every conjugate relation has the form `g_j^{g_i} = g_j w` with `w`
//! in later generators, the subgroups `<g_k, g_{k+1}, ...>` form a central
//! series with factors of order `p`.

mod checks;
mod classify;
mod power;
mod series;

use rand::Rng;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::nq::NilpotentQuotient;
use crate::pc::{PcElement, PcPresentation};
use crate::presentation::FinitePresentation;

pub use checks::{hall_inclusion_check, lemma11_hypotheses, lemma_l2_check, mann_check, SamplePolicy};
pub use classify::{
    classify, fundamental_subgroup, regularity_test, FundamentalReport, PredicateReport, RegularStatus,
};
pub use power::{
    exponent_by_element_orders, exponent_by_regular_generators, exponent_by_verbal_chain, group_exponent, subgroup_exponent,
    subgroup_verbal_power, verbal_power_subgroup,
};
pub use series::{
    centralizer_by_enumeration, centralizer_by_layers, centralizer_modulo, lower_central_series,
    nilpotency_class, section_invariants, upper_central_series, SeriesChain, SeriesKind,
};

/// A finitely presented group realized as a prime-step pc-group.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    pub group: PcPresentation,
    /// Image of each generator of the presentation.
    pub images: Vec<PcElement>,
    pub class: usize,
}

/// Runs the nilpotent quotient until it stabilizes and refines the result.
///
/// The presentation is taken to define a finite p-group; a quotient that
/// keeps growing past `limits.nq_class_limit` or is infinite is an error.
pub fn presented_group(p: &FinitePresentation, limits: &Limits) -> Result<PresentedGroup> {
    let mut nq = NilpotentQuotient::new(p)?;
    nq.run_to(limits.nq_class_limit)?;
    if !nq.is_stable() && nq.step()? {
        return Err(Error::Uncertified(format!(
            "lower central series of `{}` does not stabilize by class {}",
            p.name, limits.nq_class_limit
        )));
    }
    let q = nq.group();
    if !q.is_finite() {
        return Err(Error::Unsupported(format!(
            "`{}` has an infinite nilpotent quotient (order {})",
            p.name,
            q.order()
        )));
    }
    let r = q.refine_to_prime_steps()?;
    let images = nq.images().iter().map(|x| r.to_refined(x)).collect();
    Ok(PresentedGroup {
        group: r.group,
        images,
        class: nq.class(),
    })
}

/// The group itself if it already has prime relative orders, otherwise its
/// refinement.
pub fn prime_step_form(g: &PcPresentation) -> Result<PcPresentation> {
    if !g.is_finite() {
        return Err(Error::InfiniteOrder);
    }
    if g.has_prime_steps() {
        Ok(g.clone())
    } else {
        Ok(g.refine_to_prime_steps()?.group)
    }
}

/// Uniformly random element of a finite pc-group.
pub fn random_element<R: Rng + ?Sized>(g: &PcPresentation, rng: &mut R) -> PcElement {
    PcElement {
        exps: g
            .gens()
            .iter()
            .map(|gen| rng.gen_range(0..gen.order.finite().expect("random element of an infinite group")))
            .collect(),
    }
}

/// `log_p(n)` for a power `n` of `p`.
pub(crate) fn log_p(p: u64, mut n: u128) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % p as u128, 0);
        n /= p as u128;
        k += 1;
    }
    k
}

pub(crate) fn require_prime_steps(g: &PcPresentation) -> Result<u128> {
    if !g.has_prime_steps() {
        return Err(Error::Unsupported(
            "structure analysis needs a finite pc-group with prime relative orders".into(),
        ));
    }
    Ok(g.order().torsion_part)
}
