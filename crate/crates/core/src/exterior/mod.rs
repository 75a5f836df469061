//! Exterior square and Schur multiplier of finite p-groups.
//!
//! For `G = F/R`, the group `N = F/[F, R]` is presented by the commutators
//! of the generators with the relators. Its derived subgroup `F'/[F, R]` is
//! the nonabelian exterior square `G ^ G`, and the torsion of the central
//! subgroup `R/[F, R]` generated by the relator images is `M(G)`.

mod bar;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::AbelianInvariants;
use crate::limits::Limits;
use crate::nq::NilpotentQuotient;
use crate::pc::{PcElement, PcPresentation, PcSubgroup};
use crate::presentation::{evaluate_word, FinitePresentation};
use crate::report::VerdictReport;
use crate::structure::{
    group_exponent, lemma11_hypotheses, lower_central_series, presented_group, subgroup_exponent,
    verbal_power_subgroup, PresentedGroup,
};

pub use bar::{bar_h2, bar_h2_oracle, BarComplexStats};

/// The relators `[x_i, r_j]` for every generator `x_i` and relator `r_j`,
/// trivial ones included.
pub fn relator_commutator_presentation(p: &FinitePresentation) -> FinitePresentation {
    let mut relators = Vec::with_capacity(p.rank() * p.relators.len());
    for i in 0..p.rank() {
        let x = crate::presentation::FreeWord::generator(i);
        for r in &p.relators {
            relators.push(x.commutator(r));
        }
    }
    FinitePresentation {
        name: format!("{}-cover", p.name),
        prime: p.prime,
        generators: p.generators.clone(),
        relators,
        expect: Default::default(),
    }
}

/// `N = F/[F, R]` together with the pieces of `G ^ G` and `M(G)` inside it.
#[derive(Clone, Debug)]
pub struct CoverResult {
    /// The group `G` itself, certified finite.
    pub group: PresentedGroup,
    pub cover: PcPresentation,
    /// Image of each generator of the presentation in the cover.
    pub images: Vec<PcElement>,
    /// Images of the relators; central in the cover.
    pub relator_images: Vec<PcElement>,
    /// Invariants of `R/[F, R]`.
    pub relator_module: AbelianInvariants,
    /// `N' = F'/[F, R]`, isomorphic to `G ^ G`.
    pub derived: PcSubgroup,
    pub multiplier: AbelianInvariants,
    pub gprime_order: u128,
    pub wedge_order: u128,
    pub cover_class: usize,
    /// Class bound the cover computation started from.
    pub class_hint: usize,
    /// Extra classes needed beyond the hint.
    pub escalations: usize,
}

impl CoverResult {
    pub fn multiplier_order(&self) -> u128 {
        big_to_u128(&self.multiplier.order().unwrap_or_else(BigInt::one))
    }
}

fn big_to_u128(x: &BigInt) -> u128 {
    x.to_u128().expect("value fits in u128")
}

/// The cover of a presentation of a finite p-group.
///
/// `G` is first realized by the nilpotent quotient to find its class `c`.
/// The cover has class at most `c + 1`; the computation starts from
/// `class_hint` (default `c + 1`) and is certified by one further step that
/// must find an empty layer, escalating one class at a time up to `c + 2`.
pub fn miller_cover(p: &FinitePresentation, class_hint: Option<usize>, limits: &Limits) -> Result<CoverResult> {
    let group = presented_group(p, limits)?;
    let c = group.class;
    let hint = class_hint.unwrap_or(c + 1);
    let cap = hint.max(c + 2);
    let mut nq = NilpotentQuotient::new(&relator_commutator_presentation(p))?;
    nq.run_to(hint)?;
    let mut escalations = 0;
    while !nq.is_stable() {
        if nq.class() >= cap {
            return Err(Error::Uncertified(format!(
                "cover of `{}` does not stabilize by class {cap}",
                p.name
            )));
        }
        if nq.step()? && nq.class() > hint {
            escalations += 1;
        }
    }
    let cover = nq.group().clone();
    let images = nq.images().to_vec();
    let relator_images = p
        .relators
        .iter()
        .map(|r| evaluate_word(r, &images, &cover))
        .collect::<Result<Vec<_>>>()?;
    for (j, r) in relator_images.iter().enumerate() {
        if let Some(x) = images.iter().find(|x| !cover.commutator(x, r).is_identity()) {
            return Err(Error::Internal(format!(
                "image of relator {j} does not commute with {}",
                cover.format_element(x)
            )));
        }
    }
    let span = cover.subgroup_span(&relator_images)?;
    let relator_module = crate::structure::section_invariants(&cover, &span, &PcSubgroup::trivial(cover.len()))?;
    let multiplier = AbelianInvariants {
        torsion: relator_module.torsion.clone(),
        free_rank: 0,
    };
    let whole = cover.whole();
    let derived = cover.commutator_subgroup(&whole, &whole)?;
    let wedge_order = cover
        .subgroup_order(&derived)
        .finite()
        .ok_or_else(|| Error::Uncertified(format!("derived subgroup of the cover of `{}` is infinite", p.name)))?;
    let g = &group.group;
    let gprime_order = g.subgroup_order(&g.commutator_subgroup(&g.whole(), &g.whole())?).torsion_part;
    let m_order = big_to_u128(&multiplier.order().unwrap_or_else(BigInt::one));
    if wedge_order != m_order * gprime_order {
        return Err(Error::Internal(format!(
            "|G ^ G| = {wedge_order} but |M(G)| |G'| = {m_order} * {gprime_order}"
        )));
    }
    Ok(CoverResult {
        group,
        cover_class: nq.class(),
        cover,
        images,
        relator_images,
        relator_module,
        derived,
        multiplier,
        gprime_order,
        wedge_order,
        class_hint: hint,
        escalations,
    })
}

/// `M(G)` from the cover.
pub fn schur_multiplier(p: &FinitePresentation, limits: &Limits) -> Result<AbelianInvariants> {
    Ok(miller_cover(p, None, limits)?.multiplier)
}

/// Exponent of `G ^ G`.
pub fn wedge_exponent(cover: &CoverResult, limits: &Limits) -> Result<u128> {
    subgroup_exponent(&cover.cover, &cover.derived, limits)
}

/// A statement of the form `exp(G ^ G) | exp(G)` for a class of groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Claim {
    #[serde(rename = "lemma1.1")]
    Lemma11,
    #[serde(rename = "thm2.5")]
    Thm25,
    #[serde(rename = "cor2.6")]
    Cor26,
    #[serde(rename = "maximal-class")]
    MaximalClass,
    #[serde(rename = "potent")]
    Potent,
    #[serde(rename = "gammap-p2")]
    GammapP2,
}

impl Claim {
    pub const ALL: [Claim; 6] = [
        Claim::Lemma11,
        Claim::Thm25,
        Claim::Cor26,
        Claim::MaximalClass,
        Claim::Potent,
        Claim::GammapP2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::Lemma11 => "lemma1.1",
            Claim::Thm25 => "thm2.5",
            Claim::Cor26 => "cor2.6",
            Claim::MaximalClass => "maximal-class",
            Claim::Potent => "potent",
            Claim::GammapP2 => "gammap-p2",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown claim `{s}`")))
    }
}

/// Exponents of `G`, `G ^ G` and `M(G)` with the claim's hypotheses.
#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityVerdict {
    pub claim: Claim,
    pub exp_g: u128,
    pub exp_wedge: u128,
    pub exp_m: u128,
    /// `exp(G ^ G)` divides `exp(G)`, whether or not the hypotheses hold.
    pub divides: bool,
    /// Hypotheses, computed values and conclusion; `not-applicable` when a
    /// hypothesis fails.
    pub report: VerdictReport,
}

/// Hypotheses of `claim` on the finite p-group `g`, recorded on `report`.
fn claim_gate(claim: Claim, g: &PcPresentation, limits: &Limits, report: &mut VerdictReport) -> Result<()> {
    let p = g.prime();
    let lcs = lower_central_series(g)?;
    let class = lcs.length();
    let order = g.order().torsion_part;
    match claim {
        Claim::Lemma11 => {
            let hyp = lemma11_hypotheses(g, limits)?;
            report.hypotheses.extend(hyp.hypotheses);
            report.computed.extend(hyp.computed.into_iter().filter(|(k, _)| k != "reason"));
        }
        Claim::Thm25 => {
            report.hypothesis("p = 3", p == 3, (p != 3).then(|| format!("p = {p}")));
            report.hypothesis("class <= 5", class <= 5, (class > 5).then(|| format!("class {class}")));
        }
        Claim::Cor26 => {
            report.hypothesis("class <= 5", class <= 5, (class > 5).then(|| format!("class {class}")));
        }
        Claim::MaximalClass => {
            let n = crate::structure::log_p(p, order) as usize;
            let holds = n >= 2 && class == n - 1;
            report.hypothesis(
                "maximal class (|G| = p^n, class n - 1)",
                holds,
                (!holds).then(|| format!("order {order}, class {class}")),
            );
        }
        Claim::Potent => {
            let gp = verbal_power_subgroup(g, 1, limits)?;
            let holds = g.is_subgroup_of(&lcs.term(p as usize - 1), &gp);
            report.hypothesis("gamma_{p-1}(G) <= G^p", holds, None);
        }
        Claim::GammapP2 => {
            let gp2 = verbal_power_subgroup(g, 2, limits)?;
            let holds = g.is_subgroup_of(&lcs.term(p as usize), &gp2);
            report.hypothesis("gamma_p(G) <= G^(p^2)", holds, None);
        }
    }
    report.compute("class", class);
    Ok(())
}

/// Decides `exp(G ^ G) | exp(G)` for the group of `p` under `claim`.
pub fn exponent_divisibility_verdict(
    p: &FinitePresentation,
    claim: Claim,
    limits: &Limits,
) -> Result<DivisibilityVerdict> {
    let cover = miller_cover(p, None, limits)?;
    divisibility_from_cover(&cover, claim, limits)
}

/// [`exponent_divisibility_verdict`] on an already computed cover.
pub fn divisibility_from_cover(cover: &CoverResult, claim: Claim, limits: &Limits) -> Result<DivisibilityVerdict> {
    let g = &cover.group.group;
    let mut report = VerdictReport::new(claim.id());
    claim_gate(claim, g, limits, &mut report)?;
    let exp_g = group_exponent(g, limits)?;
    let exp_wedge = wedge_exponent(cover, limits)?;
    let exp_m = big_to_u128(&cover.multiplier.exponent().unwrap_or_else(BigInt::one));
    let divides = exp_g % exp_wedge == 0;
    report.compute("exp(G)", exp_g);
    report.compute("exp(G^G)", exp_wedge);
    report.compute("exp(M)", exp_m);
    report.compute("|G^G|", cover.wedge_order);
    report.compute("|M|", cover.multiplier_order());
    report.compute("|G'|", cover.gprime_order);
    if exp_wedge % exp_m != 0 {
        report.fail(format!("exp(M) = {exp_m} does not divide exp(G^G) = {exp_wedge}"));
    }
    if !report.hypotheses_hold() {
        if report.passed() {
            report.not_applicable(format!("hypotheses of {claim} do not hold"));
        }
    } else if !divides {
        report.fail(format!("exp(G^G) = {exp_wedge} does not divide exp(G) = {exp_g}"));
    }
    Ok(DivisibilityVerdict {
        claim,
        exp_g,
        exp_wedge,
        exp_m,
        divides,
        report,
    })
}
