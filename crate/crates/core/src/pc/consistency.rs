//! Overlap (consistency) conditions of a pc-presentation.

use serde::Serialize;

use super::{PcElement, PcPresentation, RelOrder};

/// One overlap computed in two ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapCheck {
    pub kind: &'static str,
    /// Generators involved, outermost first.
    pub gens: Vec<usize>,
    pub left: PcElement,
    pub right: PcElement,
}

impl OverlapCheck {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub checked: usize,
    pub failures: Vec<OverlapCheck>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn witness(&self) -> Option<&OverlapCheck> {
        self.failures.first()
    }
}

impl PcPresentation {
    fn then(&self, mut e: PcElement, word: &[(usize, i64)]) -> PcElement {
        self.collect_into(&mut e.exps, word);
        e
    }

    fn pair(&self, j: usize, i: usize, ej: i64, ei: i64) -> PcElement {
        self.collect(&[(j, ej), (i, ei)])
    }

    /// Evaluates every overlap condition; the presentation is consistent iff
    /// both sides agree in each.
    pub fn overlap_checks(&self) -> Vec<OverlapCheck> {
        let k = self.len();
        let mut out = Vec::new();
        let fin = |i: usize| self.rel_order(i).finite();
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    let left = self.collect(&[(l, 1), (j, 1), (i, 1)]);
                    let right = self.then(self.generator(l), &self.pair(j, i, 1, 1).syllables());
                    out.push(OverlapCheck {
                        kind: "associativity",
                        gens: vec![l, j, i],
                        left,
                        right,
                    });
                }
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if let Some(mj) = fin(j) {
                    let left = self.then(self.element_from_normal(self.power_rhs(j)), &[(i, 1)]);
                    let right = self.then(self.collect(&[(j, mj - 1)]), &self.pair(j, i, 1, 1).syllables());
                    out.push(OverlapCheck {
                        kind: "power-left",
                        gens: vec![j, i],
                        left,
                        right,
                    });
                }
                if let Some(mi) = fin(i) {
                    let left = self.then(self.generator(j), self.power_rhs(i));
                    let right = self.then(self.pair(j, i, 1, mi - 1), &[(i, 1)]);
                    out.push(OverlapCheck {
                        kind: "power-right",
                        gens: vec![j, i],
                        left,
                        right,
                    });
                } else {
                    let right = self.then(self.pair(j, i, 1, -1), &[(i, 1)]);
                    out.push(OverlapCheck {
                        kind: "inverse-right",
                        gens: vec![j, i],
                        left: self.generator(j),
                        right,
                    });
                    if fin(j).is_none() {
                        let left = self.collect(&[(j, -1)]);
                        let right = self.then(self.pair(j, i, -1, -1), &[(i, 1)]);
                        out.push(OverlapCheck {
                            kind: "inverse-both",
                            gens: vec![j, i],
                            left,
                            right,
                        });
                    }
                }
                if fin(j).is_none() {
                    let right = self.then(self.generator(j), &self.pair(j, i, -1, 1).syllables());
                    out.push(OverlapCheck {
                        kind: "inverse-left",
                        gens: vec![j, i],
                        left: self.generator(i),
                        right,
                    });
                }
            }
            if let RelOrder::Finite(_) = self.rel_order(i) {
                let w = self.element_from_normal(self.power_rhs(i));
                let left = self.then(w.clone(), &[(i, 1)]);
                let right = self.then(self.generator(i), &w.syllables());
                out.push(OverlapCheck {
                    kind: "power-power",
                    gens: vec![i],
                    left,
                    right,
                });
            }
        }
        out
    }

    pub fn is_consistent(&self) -> ConsistencyReport {
        let checks = self.overlap_checks();
        let checked = checks.len();
        ConsistencyReport {
            checked,
            failures: checks.into_iter().filter(|c| !c.holds()).collect(),
        }
    }
}
