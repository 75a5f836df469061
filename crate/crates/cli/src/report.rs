//! Run reports and their markdown and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use pgx_core::report::{Conclusion, VerdictReport};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisRecord {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// One claim or check in a report: `pass`, `fail`, `not-applicable` or
/// `error`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub id: String,
    pub hypotheses: Vec<HypothesisRecord>,
    pub conclusion: String,
    pub witnesses: Vec<String>,
    #[serde(default)]
    pub computed: BTreeMap<String, String>,
    #[serde(default)]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub const ERROR: &str = "error";

impl ClaimRecord {
    pub fn error(id: impl Into<String>, message: impl ToString) -> Self {
        ClaimRecord {
            id: id.into(),
            hypotheses: Vec::new(),
            conclusion: ERROR.into(),
            witnesses: vec![message.to_string()],
            computed: BTreeMap::new(),
            samples: 0,
            seed: None,
        }
    }

    pub fn is_fail(&self) -> bool {
        self.conclusion == Conclusion::Fail.to_string()
    }

    pub fn is_error(&self) -> bool {
        self.conclusion == ERROR
    }
}

impl From<&VerdictReport> for ClaimRecord {
    fn from(r: &VerdictReport) -> Self {
        ClaimRecord {
            id: r.id.clone(),
            hypotheses: r
                .hypotheses
                .iter()
                .map(|h| HypothesisRecord {
                    name: h.name.clone(),
                    holds: h.holds,
                    witness: h.witness.clone(),
                })
                .collect(),
            conclusion: r.conclusion.to_string(),
            witnesses: r.witnesses.clone(),
            computed: r.computed.clone(),
            samples: r.samples,
            seed: r.seed,
        }
    }
}

/// Results for one corpus entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub entry: String,
    #[serde(default)]
    pub name: String,
    pub order: Option<u128>,
    pub class: Option<usize>,
    pub exponent: Option<u128>,
    #[serde(default)]
    pub multiplier: Option<String>,
    #[serde(default)]
    pub predicates: BTreeMap<String, serde_json::Value>,
    pub claims: Vec<ClaimRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Wall-clock seconds per stage; excluded from reproducibility checks.
    #[serde(default)]
    pub timings: BTreeMap<String, f64>,
}

impl EntryReport {
    pub fn new(entry: impl Into<String>) -> Self {
        EntryReport {
            entry: entry.into(),
            name: String::new(),
            order: None,
            class: None,
            exponent: None,
            multiplier: None,
            predicates: BTreeMap::new(),
            claims: Vec::new(),
            error: None,
            timings: BTreeMap::new(),
        }
    }

    pub fn count(&self, conclusion: &str) -> usize {
        self.claims.iter().filter(|c| c.conclusion == conclusion).count()
    }

    pub fn errors(&self) -> usize {
        self.count(ERROR) + usize::from(self.error.is_some())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub entries: usize,
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub toolkit_version: String,
    pub seed: u64,
    pub limits: pgx_core::Limits,
    pub entries: Vec<EntryReport>,
    pub totals: Totals,
    #[serde(default)]
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(seed: u64, limits: pgx_core::Limits, entries: Vec<EntryReport>) -> Self {
        let mut totals = Totals {
            entries: entries.len(),
            ..Totals::default()
        };
        for e in &entries {
            totals.pass += e.count("pass");
            totals.fail += e.count("fail");
            totals.not_applicable += e.count("not-applicable");
            totals.errors += e.errors();
        }
        RunReport {
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            limits,
            entries,
            totals,
            timings: BTreeMap::new(),
        }
    }

    pub fn succeeded(&self) -> bool {
        self.totals.fail == 0 && self.totals.errors == 0
    }

    /// A copy with every timing removed, for reproducibility comparisons.
    pub fn without_timings(&self) -> RunReport {
        let mut r = self.clone();
        r.timings.clear();
        for e in &mut r.entries {
            e.timings.clear();
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "markdown" | "md" => Ok(Format::Markdown),
            "json" => Ok(Format::Json),
            other => Err(CliError::UnknownFormat(other.to_string())),
        }
    }
}

/// Serializes a report. JSON is pretty-printed with a trailing newline.
pub fn emit_report(r: &RunReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(r)? + "\n"),
        Format::Markdown => Ok(markdown(r)),
    }
}

fn markdown(r: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Corpus run\n");
    let _ = writeln!(s, "toolkit {}, seed {}\n", r.toolkit_version, r.seed);
    let _ = writeln!(
        s,
        "| entry | group | order | class | exponent | M(G) | pass | fail | n/a | errors |"
    );
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|---|---|");
    let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
    for e in &r.entries {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            e.entry,
            e.name,
            opt(e.order.map(|x| x.to_string())),
            opt(e.class.map(|x| x.to_string())),
            opt(e.exponent.map(|x| x.to_string())),
            opt(e.multiplier.clone()),
            e.count("pass"),
            e.count("fail"),
            e.count("not-applicable"),
            e.errors()
        );
    }
    let t = &r.totals;
    let _ = writeln!(
        s,
        "\n{} entries: {} pass, {} fail, {} not applicable, {} errors",
        t.entries, t.pass, t.fail, t.not_applicable, t.errors
    );
    let problems: Vec<String> = r
        .entries
        .iter()
        .flat_map(|e| {
            let entry_error = e.error.iter().map(move |m| format!("- {}: {m}", e.entry));
            let claims = e
                .claims
                .iter()
                .filter(|c| c.is_fail() || c.is_error())
                .map(move |c| format!("- {} {} {}: {}", e.entry, c.id, c.conclusion, c.witnesses.join("; ")));
            entry_error.chain(claims)
        })
        .collect();
    if !problems.is_empty() {
        let _ = writeln!(s, "\n## Failures and errors\n");
        for p in problems {
            let _ = writeln!(s, "{p}");
        }
    }
    s
}

/// Plain-text rendering of one claim.
pub fn render_claim(c: &ClaimRecord) -> String {
    let mut s = format!("{}: {}\n", c.id, c.conclusion);
    for h in &c.hypotheses {
        let _ = write!(s, "  hypothesis {}: {}", h.name, h.holds);
        if let Some(w) = &h.witness {
            let _ = write!(s, " ({w})");
        }
        s.push('\n');
    }
    for (k, v) in &c.computed {
        let _ = writeln!(s, "  {k} = {v}");
    }
    if c.samples > 0 {
        let _ = write!(s, "  samples: {}", c.samples);
        if let Some(seed) = c.seed {
            let _ = write!(s, " (seed {seed})");
        }
        s.push('\n');
    }
    for w in &c.witnesses {
        let _ = writeln!(s, "  witness: {w}");
    }
    s
}
