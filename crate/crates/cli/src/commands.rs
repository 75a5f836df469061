//! Subcommands and their text or JSON output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgx_core::exterior::{
    bar_h2, divisibility_from_cover, exponent_divisibility_verdict, miller_cover, wedge_exponent, Claim,
};
use pgx_core::magnus::{degree_polynomial_check, identity_check, IdentityId};
use pgx_core::nq::nilpotent_quotient;
use pgx_core::report::{derive_seed, VerdictReport};
use pgx_core::structure::{
    classify, hall_inclusion_check, lemma11_hypotheses, lemma_l2_check, lower_central_series, mann_check,
    presented_group, upper_central_series, verbal_power_subgroup, SamplePolicy,
};
use pgx_core::{parse_presentation, FinitePresentation};
use serde_json::json;

use crate::config::{Overrides, Settings};
use crate::corpus::{format_invariants, run_corpus, RunOptions, DEFAULT_ORACLE_ORDER, MANN_EXHAUSTIVE_ORDER, MANN_SAMPLES};
use crate::error::{CliError, CliResult};
use crate::report::{emit_report, render_claim, ClaimRecord, Format};

#[derive(Debug, Parser)]
#[command(name = "pgx", version, about = "Computations and claim checks for finite p-groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed for every sampled check.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest order handled by element enumeration.
    #[arg(long, global = true)]
    pub enum_threshold: Option<u128>,
    /// Largest order accepted by the bar-complex oracle.
    #[arg(long, global = true)]
    pub bar_cap: Option<u128>,
    /// Largest class bound for Magnus computations.
    #[arg(long, global = true)]
    pub class_cap: Option<usize>,
    /// `key = value` settings file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn settings(&self) -> CliResult<Settings> {
        let flags = Overrides {
            seed: self.seed,
            json: self.json,
            enum_threshold: self.enum_threshold,
            bar_cap: self.bar_cap,
            class_cap: self.class_cap,
        };
        Settings::resolve(self.config.as_deref(), &flags)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a presentation and print it in normalized form.
    Parse { file: PathBuf },
    /// Order, class, exponent, series and power predicates.
    Analyze { file: PathBuf },
    /// Nilpotent quotient up to a class, or until it stabilizes.
    Nq {
        file: PathBuf,
        #[arg(long)]
        class: Option<usize>,
    },
    /// Check commutator identities in free nilpotent groups.
    VerifyIdentities {
        /// Identities to check, e.g. `eq1.1`, `class5:7`; default is the full suite.
        #[arg(long = "id")]
        ids: Vec<String>,
        /// Class bound; by default the one each identity needs.
        #[arg(long)]
        class: Option<usize>,
        /// Random substitutions per identity.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Run one structural check on a group.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        file: PathBuf,
        /// Sampled triples for lemma2.4.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Schur multiplier by the cover, the bar complex, or both.
    Multiplier {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Miller)]
        method: Method,
    },
    /// Exterior square data from the cover.
    Exterior { file: PathBuf },
    /// Exponent divisibility verdict for a claim, or for all claims.
    Verdict {
        file: PathBuf,
        #[arg(long)]
        claim: Option<String>,
    },
    /// Batch runs over a directory of presentations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Reference computations used to cross-check the main pipeline.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Mann,
    Hall,
    #[value(name = "lemma1.1")]
    Lemma11,
    #[value(name = "lemma2.4")]
    Lemma24,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Miller,
    Bar,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    Run {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
        /// Only entries whose file name contains this text; repeatable.
        #[arg(long = "filter")]
        filters: Vec<String>,
        /// `markdown` or `json`; `--json` selects json.
        #[arg(long)]
        format: Option<String>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Largest order cross-checked against the bar complex.
        #[arg(long, default_value_t = DEFAULT_ORACLE_ORDER)]
        oracle_order: u128,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleAction {
    /// Second homology from the normalized bar complex.
    H2 { file: PathBuf },
}

/// What a command produced and whether any check failed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
    pub failed: bool,
    pub warnings: Vec<String>,
    /// Render `json` rather than `text`.
    pub as_json: bool,
}

impl Outcome {
    fn new(text: String, json: serde_json::Value) -> Self {
        Outcome {
            text,
            json,
            ..Outcome::default()
        }
    }

    pub fn render(&self) -> CliResult<String> {
        if self.as_json && !self.json.is_null() {
            Ok(serde_json::to_string_pretty(&self.json)? + "\n")
        } else {
            Ok(self.text.clone())
        }
    }
}

fn load(path: &Path) -> CliResult<FinitePresentation> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_presentation(&text)?)
}

fn verdict_outcome(reports: &[VerdictReport]) -> CliResult<Outcome> {
    let records: Vec<ClaimRecord> = reports.iter().map(ClaimRecord::from).collect();
    let text = records.iter().map(render_claim).collect();
    let mut out = Outcome::new(text, serde_json::to_value(&records)?);
    out.failed = records.iter().any(ClaimRecord::is_fail);
    Ok(out)
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let settings = cli.global.settings()?;
    let mut warnings = Vec::new();
    if settings.limits.bar_cap > crate::config::BAR_CAP_WARN {
        warnings.push(format!(
            "bar cap {} exceeds {}; the bar complex grows with the cube of the order",
            settings.limits.bar_cap,
            crate::config::BAR_CAP_WARN
        ));
    }
    let mut out = dispatch(&cli.command, &settings)?;
    warnings.append(&mut out.warnings);
    out.warnings = warnings;
    out.as_json = settings.json;
    Ok(out)
}

fn dispatch(command: &Command, s: &Settings) -> CliResult<Outcome> {
    let limits = &s.limits;
    match command {
        Command::Parse { file } => {
            let fp = load(file)?;
            let json = json!({
                "name": fp.name,
                "prime": fp.prime,
                "generators": fp.names(),
                "relators": fp.relators.iter().map(|r| r.display(&fp.names())).collect::<Vec<_>>(),
            });
            Ok(Outcome::new(fp.to_string(), json))
        }
        Command::Analyze { file } => {
            let fp = load(file)?;
            let pg = presented_group(&fp, limits)?;
            let g = &pg.group;
            let pred = classify(g, limits, derive_seed(s.seed, "analyze"))?;
            let lower = lower_central_series(g)?.term_orders(g);
            let upper = upper_central_series(g, limits)?.term_orders(g);
            let consistency = g.is_consistent();
            let mut text = format!("group {} (p = {})\n", fp.name, fp.prime);
            let _ = writeln!(text, "order {}, class {}, coclass {}, exponent {}", pred.order, pred.class, pred.coclass, pred.exponent);
            let _ = writeln!(text, "lower central series orders {lower:?}");
            let _ = writeln!(text, "upper central series orders {upper:?}");
            let _ = writeln!(
                text,
                "powerful {}, potent {}, maximal class {}, gamma_p <= G^(p^2) {}, gamma_(p+1) <= G^p {}",
                pred.powerful, pred.potent, pred.maximal_class, pred.gamma_p_in_p2, pred.gamma_p1_in_gp
            );
            let _ = writeln!(text, "regular: {}", pred.regular);
            let _ = writeln!(text, "pc presentation ({} overlaps checked):\n{g}", consistency.checked);
            let json = json!({
                "name": fp.name,
                "predicates": pred,
                "lower_central_orders": lower.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
                "upper_central_orders": upper.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
                "consistent": consistency.is_consistent(),
                "pc_presentation": g.to_string(),
            });
            Ok(Outcome::new(text, json))
        }
        Command::Nq { file, class } => {
            let fp = load(file)?;
            let c = class.unwrap_or(limits.nq_class_limit);
            let r = nilpotent_quotient(&fp, c)?;
            let layers: Vec<String> = r.layer_invariants.iter().map(format_invariants).collect();
            let mut text = format!("achieved class {}, order {}\n", r.achieved_class, r.quotient.order());
            for (i, l) in layers.iter().enumerate() {
                let _ = writeln!(text, "layer {}: {l}", i + 1);
            }
            let _ = writeln!(text, "{}", r.quotient);
            let json = json!({
                "achieved_class": r.achieved_class,
                "order": r.quotient.order().to_string(),
                "layers": layers,
                "pc_presentation": r.quotient.to_string(),
            });
            Ok(Outcome::new(text, json))
        }
        Command::VerifyIdentities { ids, class, trials } => {
            let ids = if ids.is_empty() { default_identities() } else { ids.clone() };
            let mut reports = Vec::new();
            for raw in &ids {
                let id: IdentityId = raw.parse()?;
                let c = class.unwrap_or_else(|| default_class(id));
                if c > limits.class_cap {
                    return Err(CliError::Usage(format!(
                        "{id} needs class bound {c}, above the class cap {}",
                        limits.class_cap
                    )));
                }
                reports.push(identity_check(id, c, *trials, derive_seed(s.seed, raw))?);
            }
            if ids.is_empty() || class.is_none() {
                reports.push(degree_polynomial_check(5.min(limits.class_cap), 12));
            }
            verdict_outcome(&reports)
        }
        Command::Check { which, file, samples } => {
            let fp = load(file)?;
            let g = presented_group(&fp, limits)?.group;
            let reports = match which {
                CheckKind::Mann => {
                    let order = g.order().torsion_part;
                    let policy = if order <= MANN_EXHAUSTIVE_ORDER {
                        SamplePolicy::Exhaustive
                    } else {
                        SamplePolicy::Sampled {
                            count: MANN_SAMPLES,
                            seed: derive_seed(s.seed, "mann"),
                        }
                    };
                    vec![mann_check(&g, &policy, &[1, 2])?]
                }
                CheckKind::Hall => {
                    let whole = g.whole();
                    let subgroups = [
                        ("G", whole.clone()),
                        ("gamma_2", lower_central_series(&g)?.term(2)),
                        ("G^p", verbal_power_subgroup(&g, 1, limits)?),
                    ];
                    let mut out = Vec::new();
                    for (label, n) in subgroups {
                        let mut r = hall_inclusion_check(&g, &n, &whole, limits)?;
                        r.id = format!("hall:{label},G");
                        out.push(r);
                    }
                    out
                }
                CheckKind::Lemma11 => vec![lemma11_hypotheses(&g, limits)?],
                CheckKind::Lemma24 => vec![lemma_l2_check(&g, *samples, derive_seed(s.seed, "lemma2.4"), limits)?],
            };
            verdict_outcome(&reports)
        }
        Command::Multiplier { file, method } => {
            let fp = load(file)?;
            let mut text = String::new();
            let mut json = serde_json::Map::new();
            let mut values = Vec::new();
            if matches!(method, Method::Miller | Method::Both) {
                let m = format_invariants(&miller_cover(&fp, None, limits)?.multiplier);
                let _ = writeln!(text, "M(G) = {m} (cover)");
                json.insert("miller".into(), m.clone().into());
                values.push(m);
            }
            if matches!(method, Method::Bar | Method::Both) {
                let g = presented_group(&fp, limits)?.group;
                let (h2, _) = bar_h2(&g, limits.bar_cap)?;
                let m = format_invariants(&h2);
                let _ = writeln!(text, "M(G) = {m} (bar complex)");
                json.insert("bar".into(), m.clone().into());
                values.push(m);
            }
            let agree = values.windows(2).all(|w| w[0] == w[1]);
            if values.len() == 2 {
                let _ = writeln!(text, "methods {}", if agree { "agree" } else { "disagree" });
                json.insert("agree".into(), agree.into());
            }
            let mut out = Outcome::new(text, json.into());
            out.failed = !agree;
            Ok(out)
        }
        Command::Exterior { file } => {
            let fp = load(file)?;
            let cover = miller_cover(&fp, None, limits)?;
            let exp = wedge_exponent(&cover, limits)?;
            let m = format_invariants(&cover.multiplier);
            let text = format!(
                "M(G) = {m}\n|G'| = {}\n|G^G| = {}\nexp(G^G) = {exp}\ncover class {} (hint {}, {} escalations)\n",
                cover.gprime_order, cover.wedge_order, cover.cover_class, cover.class_hint, cover.escalations
            );
            let json = json!({
                "multiplier": m,
                "derived_order": cover.gprime_order.to_string(),
                "wedge_order": cover.wedge_order.to_string(),
                "wedge_exponent": exp.to_string(),
                "cover_class": cover.cover_class,
                "class_hint": cover.class_hint,
                "escalations": cover.escalations,
            });
            Ok(Outcome::new(text, json))
        }
        Command::Verdict { file, claim } => {
            let fp = load(file)?;
            let reports = match claim {
                Some(c) => vec![exponent_divisibility_verdict(&fp, c.parse()?, limits)?.report],
                None => {
                    let cover = miller_cover(&fp, None, limits)?;
                    Claim::ALL
                        .into_iter()
                        .map(|c| divisibility_from_cover(&cover, c, limits).map(|v| v.report))
                        .collect::<pgx_core::Result<_>>()?
                }
            };
            verdict_outcome(&reports)
        }
        Command::Corpus {
            action:
                CorpusAction::Run {
                    dir,
                    filters,
                    format,
                    output,
                    oracle_order,
                    workers,
                },
        } => {
            let format = match format {
                Some(f) => f.parse()?,
                None if s.json => Format::Json,
                None => Format::Markdown,
            };
            let mut opts = RunOptions::new(s.seed, s.limits);
            opts.filters = filters.clone();
            opts.oracle_order = *oracle_order;
            if let Some(w) = workers {
                opts.workers = *w;
            }
            let report = run_corpus(dir, &opts)?;
            let mut out = Outcome::default();
            if report.entries.is_empty() {
                out.warnings.push(format!("no .fp or .pc entries found in {}", dir.display()));
            }
            let bytes = emit_report(&report, format)?;
            match output {
                Some(path) => {
                    std::fs::write(path, &bytes).map_err(|source| CliError::Write {
                        path: path.clone(),
                        source,
                    })?;
                    out.text = format!(
                        "wrote {} ({} entries, {} fail, {} errors)\n",
                        path.display(),
                        report.totals.entries,
                        report.totals.fail,
                        report.totals.errors
                    );
                }
                None => out.text = bytes,
            }
            out.failed = !report.succeeded();
            Ok(out)
        }
        Command::Oracle {
            action: OracleAction::H2 { file },
        } => {
            let fp = load(file)?;
            let g = presented_group(&fp, limits)?.group;
            let (h2, stats) = bar_h2(&g, limits.bar_cap)?;
            let m = format_invariants(&h2);
            let text = format!(
                "H2 = {m}\ncells {:?}, rank d2 {}, rank d3 {}\n",
                stats.cells, stats.rank_d2, stats.rank_d3
            );
            let json = json!({
                "h2": m,
                "cells": stats.cells,
                "rank_d2": stats.rank_d2,
                "rank_d3": stats.rank_d3,
            });
            Ok(Outcome::new(text, json))
        }
    }
}

/// The class bound each identity is stated for.
fn default_class(id: IdentityId) -> usize {
    match id {
        IdentityId::Multilinear(r) => r as usize,
        _ => 5,
    }
}

pub fn default_identities() -> Vec<String> {
    let mut ids = vec!["eq1.1".to_string(), "eq1.2".to_string()];
    ids.extend((2..=4).map(|r| format!("multilinear:{r}")));
    for family in ["class5", "lemma2.3i", "lemma2.3ii"] {
        ids.extend((0..=12).map(|n| format!("{family}:{n}")));
    }
    ids
}
