//! Binomials, Witt numbers and basic commutators.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::presentation::FreeWord;

/// `C(n, k) = n (n-1) ... (n-k+1) / k!` for any integer `n`.
pub fn binomial(n: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn mobius(mut n: u64) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Rank of `gamma_k / gamma_{k+1}` of the free group of rank `d`:
/// `(1/k) sum_{m | k} mu(m) d^{k/m}`.
pub fn witt_rank(d: u64, k: u64) -> BigInt {
    assert!(d >= 1 && k >= 1, "witt_rank needs d >= 1 and k >= 1");
    let mut sum = BigInt::zero();
    for m in (1..=k).filter(|m| k.is_multiple_of(*m)) {
        let mu = mobius(m);
        if mu != 0 {
            sum += BigInt::from(mu) * num_traits::pow(BigInt::from(d), (k / m) as usize);
        }
    }
    sum / BigInt::from(k)
}

/// A basic commutator, either a generator or `[left, right]` with indices
/// into the list returned by [`basic_commutators`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicCommutator {
    pub weight: usize,
    pub parts: Option<(usize, usize)>,
    pub word: FreeWord,
    pub label: String,
}

fn letter(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{}", i + 1)
    }
}

/// Basic commutators of weight at most `max_weight` on `d` generators, in
/// the standard ordering (by weight, then by order of construction).
///
/// `[a, b]` is basic when `a > b`, and `a = [a1, a2]` forces `a2 <= b`.
pub fn basic_commutators(d: usize, max_weight: usize) -> Vec<BasicCommutator> {
    let mut out: Vec<BasicCommutator> = (0..d)
        .map(|i| BasicCommutator {
            weight: 1,
            parts: None,
            word: FreeWord::generator(i),
            label: letter(i),
        })
        .collect();
    for n in 2..=max_weight {
        let mut layer = Vec::new();
        for a in 0..out.len() {
            for b in 0..a {
                if out[a].weight + out[b].weight != n {
                    continue;
                }
                if let Some((_, a2)) = out[a].parts {
                    if a2 > b {
                        continue;
                    }
                }
                let left = if out[a].parts.is_some() {
                    out[a].label.trim_end_matches(']').to_string()
                } else {
                    format!("[{}", out[a].label)
                };
                layer.push(BasicCommutator {
                    weight: n,
                    parts: Some((a, b)),
                    word: out[a].word.commutator(&out[b].word),
                    label: format!("{left}, {}]", out[b].label),
                });
            }
        }
        out.extend(layer);
    }
    out
}
