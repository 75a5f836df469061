//! Computational toolkit for finite p-groups given by presentations.

pub mod error;
pub mod exterior;
pub mod group;
pub mod lattice;
pub mod limits;
pub mod pc;
pub mod magnus;
pub mod nq;
pub mod presentation;
pub mod report;
pub mod structure;

pub use error::{Error, Result};
pub use group::Group;
pub use limits::Limits;
pub use presentation::{parse_presentation, FinitePresentation, FreeWord};
pub use report::{Conclusion, VerdictReport};
