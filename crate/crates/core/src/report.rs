//! Result envelopes shared by the checking operations.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::Pass => "pass",
            Conclusion::Fail => "fail",
            Conclusion::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Outcome of checking one claim or identity.
///
/// A `Fail` conclusion always carries at least one witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub id: String,
    pub hypotheses: Vec<Hypothesis>,
    pub computed: BTreeMap<String, String>,
    pub conclusion: Conclusion,
    pub witnesses: Vec<String>,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl VerdictReport {
    pub fn new(id: impl Into<String>) -> Self {
        VerdictReport {
            id: id.into(),
            hypotheses: Vec::new(),
            computed: BTreeMap::new(),
            conclusion: Conclusion::Pass,
            witnesses: Vec::new(),
            samples: 0,
            seed: None,
        }
    }

    pub fn hypothesis(&mut self, name: impl Into<String>, holds: bool, witness: Option<String>) -> &mut Self {
        self.hypotheses.push(Hypothesis {
            name: name.into(),
            holds,
            witness,
        });
        self
    }

    pub fn compute(&mut self, name: impl Into<String>, value: impl ToString) -> &mut Self {
        self.computed.insert(name.into(), value.to_string());
        self
    }

    /// Marks the report failed with `witness`.
    pub fn fail(&mut self, witness: impl Into<String>) -> &mut Self {
        self.conclusion = Conclusion::Fail;
        self.witnesses.push(witness.into());
        self
    }

    pub fn not_applicable(&mut self, reason: impl Into<String>) -> &mut Self {
        self.conclusion = Conclusion::NotApplicable;
        self.computed.insert("reason".into(), reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.conclusion == Conclusion::Pass
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }
}

/// Deterministic per-task seed derived from a master seed and a label.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    // FNV-1a over the label, mixed with the master seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ master;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}
