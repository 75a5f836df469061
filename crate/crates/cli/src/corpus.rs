//! Batch verification of a directory of presentations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use pgx_core::exterior::{bar_h2_oracle, divisibility_from_cover, miller_cover, Claim, CoverResult};
use pgx_core::lattice::AbelianInvariants;
use pgx_core::pc::{parse_pc_presentation, PcPresentation};
use pgx_core::report::{derive_seed, VerdictReport};
use pgx_core::structure::{
    classify, fundamental_subgroup, hall_inclusion_check, lemma_l2_check, lower_central_series, mann_check,
    presented_group, random_element, verbal_power_subgroup, SamplePolicy,
};
use pgx_core::{parse_presentation, FinitePresentation, Limits};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::report::{ClaimRecord, EntryReport, RunReport};

/// Largest order for which Mann's condition is checked on all pairs.
pub const MANN_EXHAUSTIVE_ORDER: u128 = 729;
pub const MANN_SAMPLES: usize = 2000;
pub const ASSOCIATIVITY_TRIPLES: usize = 1000;
pub const LEMMA_L2_SAMPLES: usize = 100;
/// Default largest order cross-checked against the bar complex.
pub const DEFAULT_ORACLE_ORDER: u128 = 27;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub limits: Limits,
    /// Substrings; an entry runs if its file name contains any of them.
    pub filters: Vec<String>,
    pub oracle_order: u128,
    pub workers: usize,
}

impl RunOptions {
    pub fn new(seed: u64, limits: Limits) -> Self {
        RunOptions {
            seed,
            limits,
            filters: Vec::new(),
            oracle_order: DEFAULT_ORACLE_ORDER,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// The `.fp` and `.pc` files of `dir` (not recursive), sorted by name.
pub fn corpus_files(dir: &Path, filters: &[String]) -> CliResult<Vec<PathBuf>> {
    let read_err = |source| CliError::Read {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(read_err)? {
        let path = entry.map_err(read_err)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "fp" || e == "pc") {
            let name = entry_name(&path);
            if filters.is_empty() || filters.iter().any(|f| name.contains(f.as_str())) {
                files.push(path);
            }
        }
    }
    files.sort();
    Ok(files)
}

fn entry_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Runs every entry on a worker pool and assembles the report in file order.
pub fn run_corpus(dir: &Path, opts: &RunOptions) -> CliResult<RunReport> {
    let start = Instant::now();
    let files = corpus_files(dir, &opts.filters)?;
    let slots: Vec<Mutex<Option<EntryReport>>> = files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = opts.workers.clamp(1, files.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = files.get(i) else { break };
                let report = run_entry(path, opts);
                *slots[i].lock().expect("slot lock") = Some(report);
            });
        }
    });
    let entries = slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot lock").expect("every entry ran"))
        .collect();
    let mut report = RunReport::new(opts.seed, opts.limits, entries);
    report.timings.insert("total".into(), start.elapsed().as_secs_f64());
    Ok(report)
}

/// Runs one file; any error is recorded in the entry instead of propagated.
pub fn run_entry(path: &Path, opts: &RunOptions) -> EntryReport {
    let name = entry_name(path);
    let mut entry = EntryReport::new(&name);
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            entry.error = Some(format!("cannot read {}: {e}", path.display()));
            return entry;
        }
    };
    if path.extension().is_some_and(|e| e == "pc") {
        run_pc_text(&mut entry, &text, opts);
    } else {
        run_text(&mut entry, &text, opts);
    }
    entry
}

/// A pc-presentation entry: its overlaps must hold before it is analyzed
/// through the finite presentation it defines.
pub fn run_pc_text(entry: &mut EntryReport, text: &str, opts: &RunOptions) {
    let g = match parse_pc_presentation(text) {
        Ok(g) => g,
        Err(e) => {
            entry.error = Some(format!("parse: {e}"));
            return;
        }
    };
    entry.name = g.name().to_string();
    let c = g.is_consistent();
    if let Some(w) = c.witness() {
        entry.error = Some(format!(
            "inconsistent pc presentation: {} overlap on generators {:?} gives {} and {}",
            w.kind,
            w.gens,
            g.format_element(&w.left),
            g.format_element(&w.right)
        ));
        return;
    }
    match g.to_finite_presentation() {
        Ok(fp) => run_text(entry, &fp.to_string(), opts),
        Err(e) => entry.error = Some(format!("presentation: {e}")),
    }
}

struct Stopwatch<'a> {
    timings: &'a mut BTreeMap<String, f64>,
}

impl Stopwatch<'_> {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.insert(stage.into(), start.elapsed().as_secs_f64());
        out
    }
}

/// Analyzes a presentation given as text into `entry`.
pub fn run_text(entry: &mut EntryReport, text: &str, opts: &RunOptions) {
    let mut timings = BTreeMap::new();
    let mut clock = Stopwatch { timings: &mut timings };
    let label = entry.entry.clone();
    let seed = |task: &str| derive_seed(opts.seed, &format!("{label}/{task}"));
    let limits = &opts.limits;

    let fp = match clock.time("parse", || parse_presentation(text)) {
        Ok(fp) => fp,
        Err(e) => {
            entry.error = Some(format!("parse: {e}"));
            entry.timings = timings;
            return;
        }
    };
    entry.name = fp.name.clone();
    let presented = match clock.time("presented-group", || presented_group(&fp, limits)) {
        Ok(p) => p,
        Err(e) => {
            entry.error = Some(format!("presentation: {e}"));
            entry.timings = timings;
            return;
        }
    };
    let g = presented.group;
    let order = g.order().torsion_part;
    entry.order = Some(order);
    entry.class = Some(presented.class);

    let mut claims = Vec::new();
    let consistent = clock.time("consistency", || {
        let c = pc_consistency(&g, seed("associativity"));
        let ok = !c.iter().any(ClaimRecord::is_fail);
        claims.extend(c);
        ok
    });
    if !consistent {
        entry.error = Some("pc presentation is inconsistent".into());
        entry.claims = claims;
        entry.timings = timings;
        return;
    }

    match clock.time("classify", || classify(&g, limits, seed("regularity"))) {
        Ok(pred) => {
            entry.exponent = Some(pred.exponent);
            if let Ok(serde_json::Value::Object(map)) = serde_json::to_value(&pred) {
                entry.predicates = map.into_iter().collect();
            }
            claims.push((&expectations(&fp, order, presented.class, pred.exponent)).into());
        }
        Err(e) => claims.push(ClaimRecord::error("classify", e)),
    }

    let mann_policy = if order <= MANN_EXHAUSTIVE_ORDER {
        SamplePolicy::Exhaustive
    } else {
        SamplePolicy::Sampled {
            count: MANN_SAMPLES,
            seed: seed("mann"),
        }
    };
    claims.push(record("mann", clock.time("mann", || mann_check(&g, &mann_policy, &[1, 2]))));
    claims.extend(clock.time("hall", || hall_checks(&g, limits)));
    claims.push(record("lemma2.4", clock.time("lemma2.4", || {
        lemma_l2_check(&g, LEMMA_L2_SAMPLES, seed("lemma2.4"), limits)
    })));
    if entry.predicates.get("maximal_class") == Some(&serde_json::Value::Bool(true)) {
        claims.push(record("fundamental-identity", clock.time("fundamental", || {
            fundamental_subgroup(&g, limits, seed("fundamental")).map(|f| {
                let mut r = f.identity;
                r.compute("|G_1|", f.order);
                r.compute("|G:G_1|", f.index);
                r
            })
        })));
    }

    match clock.time("cover", || miller_cover(&fp, None, limits)) {
        Ok(cover) => {
            entry.multiplier = Some(format_invariants(&cover.multiplier));
            clock.time("divisibility", || {
                for claim in Claim::ALL {
                    claims.push(record(claim.id(), divisibility_from_cover(&cover, claim, limits).map(|v| v.report)));
                }
            });
            if let Some(c) = expected_multiplier(&fp, &cover) {
                claims.push(c);
            }
            if order <= opts.oracle_order.min(limits.bar_cap) {
                claims.push(clock.time("bar-oracle", || oracle_agreement(&cover, limits)));
            }
        }
        Err(e) => claims.push(ClaimRecord::error("cover", e)),
    }

    entry.claims = claims;
    entry.timings = timings;
}

fn record(id: &str, r: pgx_core::Result<VerdictReport>) -> ClaimRecord {
    match r {
        Ok(v) => ClaimRecord::from(&v),
        Err(e) => ClaimRecord::error(id, e),
    }
}

/// Overlap consistency plus associativity on seeded random triples.
fn pc_consistency(g: &PcPresentation, seed: u64) -> Vec<ClaimRecord> {
    let mut overlaps = VerdictReport::new("pc-consistency");
    let c = g.is_consistent();
    overlaps.samples = c.checked;
    if let Some(w) = c.witness() {
        overlaps.fail(format!(
            "{} overlap on generators {:?}: {} vs {}",
            w.kind,
            w.gens,
            g.format_element(&w.left),
            g.format_element(&w.right)
        ));
    }
    let mut assoc = VerdictReport::new("associativity");
    assoc.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ASSOCIATIVITY_TRIPLES {
        let (x, y, z) = (
            random_element(g, &mut rng),
            random_element(g, &mut rng),
            random_element(g, &mut rng),
        );
        assoc.samples += 1;
        let left = g.multiply(&g.multiply(&x, &y), &z);
        let right = g.multiply(&x, &g.multiply(&y, &z));
        if left != right {
            assoc.fail(format!(
                "(xy)z != x(yz) for x = {}, y = {}, z = {}",
                g.format_element(&x),
                g.format_element(&y),
                g.format_element(&z)
            ));
            break;
        }
    }
    vec![(&overlaps).into(), (&assoc).into()]
}

/// Re-verifies the `expect` line, recording where each value came from.
fn expectations(fp: &FinitePresentation, order: u128, class: usize, exponent: u128) -> VerdictReport {
    let mut r = VerdictReport::new("expectations");
    let source = |key: &str| {
        fp.expect
            .extra
            .get(&format!("{key}_source"))
            .or_else(|| fp.expect.extra.get("source"))
            .cloned()
            .unwrap_or_else(|| "unspecified".into())
    };
    let mut check = |key: &str, want: Option<u128>, got: u128| {
        if let Some(want) = want {
            r.compute(format!("{key} ({})", source(key)), want);
            if want != got {
                r.fail(format!("{key}: expected {want}, computed {got}"));
            }
        }
    };
    check("order", fp.expect.order, order);
    check("class", fp.expect.class.map(|c| c as u128), class as u128);
    check("exponent", fp.expect.exponent, exponent);
    r
}

fn hall_checks(g: &PcPresentation, limits: &Limits) -> Vec<ClaimRecord> {
    let whole = g.whole();
    let run = |label: &str| -> pgx_core::Result<VerdictReport> {
        let n = match label {
            "G" => whole.clone(),
            "gamma_2" => lower_central_series(g)?.term(2),
            _ => verbal_power_subgroup(g, 1, limits)?,
        };
        let mut r = hall_inclusion_check(g, &n, &whole, limits)?;
        r.id = format!("hall:{label},G");
        Ok(r)
    };
    ["G", "gamma_2", "G^p"]
        .into_iter()
        .map(|label| match run(label) {
            Ok(r) => ClaimRecord::from(&r),
            Err(e) => ClaimRecord::error(format!("hall:{label},G"), e),
        })
        .collect()
}

/// Invariant factors as `(a,b,...)`; `()` for the trivial group.
pub fn format_invariants(a: &AbelianInvariants) -> String {
    let mut parts: Vec<String> = a.torsion.iter().map(|t| t.to_string()).collect();
    parts.extend(std::iter::repeat_n("Z".to_string(), a.free_rank));
    format!("({})", parts.join(","))
}

/// Parses `(3,3)`, `3,3`, `trivial` or `()` into sorted torsion factors.
pub fn parse_invariants(s: &str) -> Option<Vec<u128>> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if inner.is_empty() || inner == "trivial" {
        return Some(Vec::new());
    }
    let mut v: Vec<u128> = inner.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
    v.sort_unstable();
    Some(v)
}

fn expected_multiplier(fp: &FinitePresentation, cover: &CoverResult) -> Option<ClaimRecord> {
    let want = fp.expect.extra.get("multiplier")?;
    let mut r = VerdictReport::new("expected-multiplier");
    let source = fp
        .expect
        .extra
        .get("multiplier_source")
        .or_else(|| fp.expect.extra.get("source"))
        .map_or("unspecified", String::as_str);
    r.compute(format!("multiplier ({source})"), want);
    let got = format_invariants(&cover.multiplier);
    match parse_invariants(want) {
        None => return Some(ClaimRecord::error("expected-multiplier", format!("cannot parse `{want}`"))),
        Some(w) => {
            let computed: Vec<u128> = cover.multiplier.torsion.iter().map(|t| t.to_u128().unwrap_or(0)).collect();
            if w != computed || cover.multiplier.free_rank != 0 {
                r.fail(format!("expected {want}, computed {got}"));
            }
        }
    }
    Some((&r).into())
}

fn oracle_agreement(cover: &CoverResult, limits: &Limits) -> ClaimRecord {
    match bar_h2_oracle(&cover.group.group, limits.bar_cap) {
        Ok(h2) => {
            let mut r = VerdictReport::new("multiplier-oracle");
            r.compute("cover", format_invariants(&cover.multiplier));
            r.compute("bar complex", format_invariants(&h2));
            if h2 != cover.multiplier {
                r.fail(format!(
                    "cover gives {}, bar complex gives {}",
                    format_invariants(&cover.multiplier),
                    format_invariants(&h2)
                ));
            }
            (&r).into()
        }
        Err(e) => ClaimRecord::error("multiplier-oracle", e),
    }
}
