//! Resource limits shared by the analysis routines.

use serde::{Deserialize, Serialize};

/// Size bounds that decide between exhaustive and structural algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest group (or quotient) order handled by full enumeration.
    pub enum_threshold: u128,
    /// Largest group order accepted by the bar-resolution oracle.
    pub bar_cap: u128,
    /// Largest class bound for truncated Magnus computations.
    pub class_cap: usize,
    /// Largest class the nilpotent quotient may reach when a presentation
    /// is turned into a concrete group.
    pub nq_class_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enum_threshold: 6561,
            bar_cap: 81,
            class_cap: crate::magnus::DEFAULT_CLASS_CAP,
            nq_class_limit: 40,
        }
    }
}
