//! Checks of power-commutator statements on concrete groups.

use std::collections::HashMap;
use std::rc::Rc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::power::{group_exponent, subgroup_exponent, subgroup_verbal_power, verbal_power_subgroup};
use super::series::lower_central_series;
use super::{log_p, random_element, require_prime_steps};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pc::{PcElement, PcPresentation, PcSubgroup};
use crate::report::VerdictReport;

/// How the pairs or triples of a check are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum SamplePolicy {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

type Pairs = Box<dyn Iterator<Item = (PcElement, PcElement)>>;

fn sample_pairs(g: &PcPresentation, policy: &SamplePolicy) -> Result<Pairs> {
    match *policy {
        SamplePolicy::Exhaustive => {
            let elems = Rc::new(g.elements()?);
            let outer = elems.clone();
            Ok(Box::new((0..elems.len()).flat_map(move |i| {
                let e = outer.clone();
                (0..e.len()).map(move |j| (e[i].clone(), e[j].clone()))
            })))
        }
        SamplePolicy::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pairs: Vec<_> = (0..count)
                .map(|_| (random_element(g, &mut rng), random_element(g, &mut rng)))
                .collect();
            Ok(Box::new(pairs.into_iter()))
        }
    }
}

/// In a group of class at most `p`, the conditions `[x, y^{p^n}] = 1`,
/// `[x, y]^{p^n} = 1` and `[x^{p^n}, y] = 1` coincide.
pub fn mann_check(g: &PcPresentation, policy: &SamplePolicy, exponents: &[u32]) -> Result<VerdictReport> {
    require_prime_steps(g)?;
    let p = g.prime();
    let mut report = VerdictReport::new("mann");
    let class = lower_central_series(g)?.length();
    report.compute("class", class);
    let gated = class <= p as usize;
    report.hypothesis(format!("class <= p = {p}"), gated, (!gated).then(|| format!("class {class}")));
    if !gated {
        report.not_applicable(format!("class {class} exceeds p = {p}"));
        return Ok(report);
    }
    if let SamplePolicy::Sampled { seed, .. } = policy {
        report.seed = Some(*seed);
    }
    let elems: Vec<PcElement> = match policy {
        SamplePolicy::Exhaustive => g.elements()?,
        SamplePolicy::Sampled { .. } => Vec::new(),
    };
    for &n in exponents {
        let q = (p as i64).pow(n);
        let powers: HashMap<&PcElement, PcElement> = elems.iter().map(|x| (x, g.power_elem(x, q))).collect();
        let power = |x: &PcElement| powers.get(x).cloned().unwrap_or_else(|| g.power_elem(x, q));
        let commutes =
            |a: &PcElement, b: &PcElement| a.is_identity() || b.is_identity() || g.commutator(a, b).is_identity();
        for (x, y) in sample_pairs(g, policy)? {
            let yq = power(&y);
            let xq = power(&x);
            let c1 = commutes(&x, &yq);
            let c2 = g.power_elem(&g.commutator(&x, &y), q).is_identity();
            let c3 = commutes(&xq, &y);
            report.samples += 1;
            if c1 != c2 || c2 != c3 {
                report.fail(format!(
                    "x = {}, y = {}, n = {n}: [x,y^q]=1 is {c1}, [x,y]^q=1 is {c2}, [x^q,y]=1 is {c3}",
                    g.format_element(&x),
                    g.format_element(&y)
                ));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// `[N^p, M] <= [N, M]^p [M, _p N]` for normal subgroups `N`, `M`.
pub fn hall_inclusion_check(
    g: &PcPresentation,
    n: &PcSubgroup,
    m: &PcSubgroup,
    limits: &Limits,
) -> Result<VerdictReport> {
    require_prime_steps(g)?;
    for (name, h) in [("N", n), ("M", m)] {
        if !g.is_normal(h) {
            return Err(Error::NotNormal(format!("{name} is not normal in G")));
        }
    }
    let mut report = VerdictReport::new("hall");
    let np = subgroup_verbal_power(g, n, 1, limits)?;
    let lhs = g.commutator_subgroup(&np, m)?;
    let nm = g.commutator_subgroup(n, m)?;
    let nm_p = subgroup_verbal_power(g, &nm, 1, limits)?;
    let mut iterated = m.clone();
    for _ in 0..g.prime() {
        iterated = g.commutator_subgroup(&iterated, n)?;
    }
    let rhs = g.join(&nm_p, &iterated)?;
    report.compute("|[N^p, M]|", g.subgroup_order(&lhs));
    report.compute("|[N, M]^p|", g.subgroup_order(&nm_p));
    report.compute("|[M, _p N]|", g.subgroup_order(&iterated));
    report.compute("|rhs|", g.subgroup_order(&rhs));
    if let Some(u) = lhs.gens().iter().find(|u| !g.contains(&rhs, u)) {
        report.fail(format!("{} lies in [N^p, M] but not in [N, M]^p [M, _p N]", g.format_element(u)));
    }
    Ok(report)
}

/// The three hypotheses on `G^p`: powerful, of exponent `p^{n-1}` where
/// `exp(G) = p^n`, and containing `gamma_{p+1}(G)`.
///
/// The conclusion is `pass` when all three hold and `not-applicable`
/// otherwise; the divisibility itself is decided from the exterior square.
pub fn lemma11_hypotheses(g: &PcPresentation, limits: &Limits) -> Result<VerdictReport> {
    require_prime_steps(g)?;
    let p = g.prime();
    let mut report = VerdictReport::new("lemma1.1");
    let exp = group_exponent(g, limits)?;
    let n = log_p(p, exp);
    let gp = verbal_power_subgroup(g, 1, limits)?;
    report.compute("exp(G)", exp);
    report.compute("|G^p|", g.subgroup_order(&gp));

    let powerful = if gp.is_trivial() {
        true
    } else {
        let sub = g.subgroup_presentation(&gp)?;
        let derived = sub.commutator_subgroup(&sub.whole(), &sub.whole())?;
        let sub_p = verbal_power_subgroup(&sub, 1, limits)?;
        sub.is_subgroup_of(&derived, &sub_p)
    };
    report.hypothesis("(i) G^p is powerful", powerful, None);

    let exp_gp = subgroup_exponent(g, &gp, limits)?;
    let target = (p as u128).pow(n.saturating_sub(1));
    report.compute("exp(G^p)", exp_gp);
    report.hypothesis(
        format!("(ii) exp(G^p) = p^(n-1) = {target}"),
        exp_gp == target,
        (exp_gp != target).then(|| format!("exp(G^p) = {exp_gp}")),
    );

    let lcs = lower_central_series(g)?;
    let gamma = lcs.term(p as usize + 1);
    let inside = g.is_subgroup_of(&gamma, &gp);
    let witness = gamma.gens().iter().find(|u| !g.contains(&gp, u)).map(|u| g.format_element(u));
    report.hypothesis("(iii) gamma_{p+1}(G) <= G^p", inside, witness);

    if !report.hypotheses_hold() {
        report.not_applicable("a hypothesis on G^p fails");
    }
    Ok(report)
}

/// For a 3-group of class 5 and exponent `3^n` with `n >= 2`: the exponent
/// of `G^3` is exactly `3^{n-1}`, and on sampled triples `(x, y, z)` the
/// intermediate power and commutator identities used to derive it hold.
pub fn lemma_l2_check(g: &PcPresentation, samples: usize, seed: u64, limits: &Limits) -> Result<VerdictReport> {
    require_prime_steps(g)?;
    let p = g.prime();
    let mut report = VerdictReport::new("lemma2.4");
    let lcs = lower_central_series(g)?;
    let class = lcs.length();
    let exp = group_exponent(g, limits)?;
    let n = log_p(p, exp);
    report.compute("class", class);
    report.compute("exp(G)", exp);
    report.hypothesis("p = 3", p == 3, None);
    report.hypothesis("class = 5", class == 5, (class != 5).then(|| format!("class {class}")));
    report.hypothesis("exp(G) = 3^n with n >= 2", n >= 2, (n < 2).then(|| format!("exp(G) = {exp}")));
    if p == 3 && class == 5 && n == 1 {
        report.fail("exponent 3 with class 5, but groups of exponent 3 have class at most 3");
        return Ok(report);
    }
    if !report.hypotheses_hold() {
        report.not_applicable("requires a 3-group of class 5 and exponent at least 9");
        return Ok(report);
    }

    let g3 = verbal_power_subgroup(g, 1, limits)?;
    let exp_g3 = subgroup_exponent(g, &g3, limits)?;
    let target = 3u128.pow(n - 1);
    report.compute("exp(G^3)", exp_g3);
    if exp_g3 != target {
        report.fail(format!("exp(G^3) = {exp_g3}, expected {target}"));
    }

    let gamma5 = lcs.term(5);
    let e1 = 3i64.pow(n - 1);
    let e2 = 3i64.pow(n - 2);
    let cube = |x: &PcElement| g.power_elem(x, 3);
    let comm = |a: &PcElement, b: &PcElement| g.commutator(a, b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    report.seed = Some(seed);
    for _ in 0..samples {
        let x = random_element(g, &mut rng);
        let y = random_element(g, &mut rng);
        let z = random_element(g, &mut rng);
        let (x3, y3, z3) = (cube(&x), cube(&y), cube(&z));
        let a = comm(&y3, &x3);
        report.samples += 1;
        let mut failures = Vec::new();

        if !g.power_elem(&a, e1).is_identity() {
            failures.push("[y^3, x^3]^(3^(n-1)) != 1");
        }
        if !g.power_elem(&comm(&a, &z3), e2).is_identity() {
            failures.push("[y^3, x^3, z^3]^(3^(n-2)) != 1");
        }
        // [y^3, x^3, y^3] = [y^3, x^3, y]^3 [y^3, x^3, y, y]^3 mod gamma_5
        let ay = comm(&a, &y);
        let ayy = comm(&ay, &y);
        let rhs = g.multiply(&cube(&ay), &cube(&ayy));
        let lhs = comm(&a, &y3);
        if !g.contains(&gamma5, &g.multiply(&g.invert(&rhs), &lhs)) {
            failures.push("[y^3, x^3, y^3] differs from [y^3, x^3, y]^3 [y^3, x^3, y, y]^3 modulo gamma_5");
        }
        // [y^3, x^3, z^3] = [y^3, x^3, z]^3 [y^3, x^3, z, z]^3 [y^3, x^3, z, z, z]
        let az = comm(&a, &z);
        let azz = comm(&az, &z);
        let azzz = comm(&azz, &z);
        let expanded = g.multiply(&g.multiply(&cube(&az), &cube(&azz)), &azzz);
        if comm(&a, &z3) != expanded {
            failures.push("[y^3, x^3, z^3] differs from [y^3, x^3, z]^3 [y^3, x^3, z, z]^3 [y^3, x^3, z, z, z]");
        }
        if !g.power_elem(&g.multiply(&x3, &y3), e1).is_identity() {
            failures.push("(x^3 y^3)^(3^(n-1)) != 1");
        }
        for f in failures {
            report.fail(format!(
                "{f} at x = {}, y = {}, z = {}",
                g.format_element(&x),
                g.format_element(&y),
                g.format_element(&z)
            ));
        }
        if report.witnesses.len() > 8 {
            break;
        }
    }
    Ok(report)
}
