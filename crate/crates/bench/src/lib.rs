//! Fixtures shared by the benchmarks.

use std::path::PathBuf;

use pgx_core::lattice::IntMatrix;
use pgx_core::{parse_presentation, FinitePresentation};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// A presentation from the shipped corpus.
pub fn corpus(file: &str) -> FinitePresentation {
    let path = corpus_dir().join(file);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_presentation(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// A reproducible `n x n` matrix with entries in `[-100, 100]`, from a
/// linear congruential sequence.
pub fn pseudo_random_matrix(n: usize, seed: u64) -> IntMatrix {
    let mut state = seed;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 33) % 201) as i64 - 100
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(n, &rows)
}
