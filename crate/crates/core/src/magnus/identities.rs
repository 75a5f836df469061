//! Commutator identities checked exactly in the truncated Magnus algebra.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{basic_commutators, binomial, MagnusAlgebra, Monomial, TruncatedSeries};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::presentation::FreeWord;
use crate::report::VerdictReport;

/// The identities that can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `[xy, z] = [x, z]^y [y, z]`.
    ProductLeft,
    /// `[z, xy] = [z, y] [z, x]^y`.
    ProductRight,
    /// Weight-`r` commutators are multiplicative in each slot modulo `gamma_{r+1}`.
    Multilinear(u32),
    /// The expansion of `(xy)^n` in class 5.
    Class5Power(u64),
    /// `(yx)^n` for `x` in `gamma_2`, class 5.
    Gamma2Power(u64),
    /// `[y^n, x]`, class 5.
    PowerCommutator(u64),
}

impl IdentityId {
    /// Checks that `c` suits the identity.
    pub fn validate(&self, c: usize) -> Result<()> {
        let incompatible = |reason: &str| {
            Err(Error::IncompatibleClass {
                identity: self.to_string(),
                got: c,
                reason: reason.to_string(),
            })
        };
        match *self {
            IdentityId::ProductLeft | IdentityId::ProductRight => {
                if c == 0 {
                    return incompatible("class bound must be at least 1");
                }
            }
            IdentityId::Multilinear(r) => {
                if r < 2 {
                    return Err(Error::Unsupported(format!("multilinearity needs weight r >= 2, got {r}")));
                }
                if c != r as usize {
                    return incompatible("multilinearity of weight r is checked at class bound r");
                }
            }
            IdentityId::Class5Power(_) | IdentityId::Gamma2Power(_) | IdentityId::PowerCommutator(_) => {
                if c != 5 {
                    return incompatible("the expansion holds in class 5 and needs class bound 5");
                }
            }
        }
        Ok(())
    }

    /// Whether a generic substitution proves the identity outright, as
    /// opposed to random sampling over `gamma_2`.
    pub fn is_exact(&self) -> bool {
        !matches!(self, IdentityId::Gamma2Power(_))
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityId::ProductLeft => write!(f, "eq1.1"),
            IdentityId::ProductRight => write!(f, "eq1.2"),
            IdentityId::Multilinear(r) => write!(f, "multilinear:{r}"),
            IdentityId::Class5Power(n) => write!(f, "class5:{n}"),
            IdentityId::Gamma2Power(n) => write!(f, "lemma2.3i:{n}"),
            IdentityId::PowerCommutator(n) => write!(f, "lemma2.3ii:{n}"),
        }
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unsupported(format!("unknown identity `{s}`"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a.parse::<u64>().map_err(|_| bad())?)),
            None => (s, None),
        };
        let id = match (head, arg) {
            ("eq1.1", None) => IdentityId::ProductLeft,
            ("eq1.2", None) => IdentityId::ProductRight,
            ("multilinear", Some(r)) => {
                let r = u32::try_from(r).map_err(|_| bad())?;
                if r < 2 {
                    return Err(Error::Unsupported(format!("multilinearity needs weight r >= 2, got {r}")));
                }
                IdentityId::Multilinear(r)
            }
            ("class5", Some(n)) => IdentityId::Class5Power(n),
            ("lemma2.3i", Some(n)) => IdentityId::Gamma2Power(n),
            ("lemma2.3ii", Some(n)) => IdentityId::PowerCommutator(n),
            _ => return Err(bad()),
        };
        Ok(id)
    }
}

type Series = TruncatedSeries;

fn pow_big(alg: &MagnusAlgebra, a: &Series, e: BigInt) -> Series {
    alg.pow(a, &e)
}

/// Both sides of `[xy, z] = [x, z]^y [y, z]`.
fn product_left(alg: &MagnusAlgebra, x: &Series, y: &Series, z: &Series) -> (Series, Series) {
    let lhs = alg.comm(&alg.mul(x, y), z);
    let rhs = alg.mul(&alg.conj(&alg.comm(x, z), y), &alg.comm(y, z));
    (lhs, rhs)
}

/// Both sides of `[z, xy] = [z, y] [z, x]^y`.
fn product_right(alg: &MagnusAlgebra, x: &Series, y: &Series, z: &Series) -> (Series, Series) {
    let lhs = alg.comm(z, &alg.mul(x, y));
    let rhs = alg.mul(&alg.comm(z, y), &alg.conj(&alg.comm(z, x), y));
    (lhs, rhs)
}

fn multilinear(alg: &MagnusAlgebra, slots: &[Series], i: usize, x: &Series, y: &Series) -> (Series, Series) {
    let with = |v: &Series| {
        let mut parts = slots.to_vec();
        parts[i] = v.clone();
        alg.comm_left(&parts)
    };
    let lhs = with(&alg.mul(x, y));
    let rhs = alg.mul(&with(x), &with(y));
    (lhs, rhs)
}

/// Right-hand side of the class-5 expansion of `(xy)^n`.
pub(crate) fn class5_rhs(alg: &MagnusAlgebra, x: &Series, y: &Series, n: u64) -> Series {
    let nb = BigInt::from(n);
    let b = |k: u32| binomial(&nb, k);
    let i = |k: i64| BigInt::from(k);
    let yx = alg.comm(y, x);
    let yxx = alg.comm(&yx, x);
    let yxy = alg.comm(&yx, y);
    let yxxx = alg.comm(&yxx, x);
    let yxxy = alg.comm(&yxx, y);
    let yxyy = alg.comm(&yxy, y);
    let factors: Vec<(Series, BigInt)> = vec![
        (x.clone(), nb.clone()),
        (y.clone(), nb.clone()),
        (yx.clone(), b(2)),
        (yxx.clone(), b(3)),
        (yxy.clone(), b(2) + i(2) * b(3)),
        (yxxx.clone(), b(4)),
        (yxxy.clone(), i(2) * b(3) + i(3) * b(4)),
        (yxyy.clone(), i(2) * b(3) + i(3) * b(4)),
        (alg.comm(&yxx, &yx), b(3) + i(7) * b(4) + i(6) * b(5)),
        (alg.comm(&yxy, &yx), i(6) * b(3) + i(18) * b(4) + i(12) * b(5)),
        (alg.comm(&yxxx, x), b(5)),
        (alg.comm(&yxxx, y), i(3) * b(4) + i(4) * b(5)),
        (alg.comm(&yxxy, y), b(3) + i(6) * b(4) + i(6) * b(5)),
        (alg.comm(&yxyy, y), i(3) * b(4) + i(4) * b(5)),
    ];
    factors
        .into_iter()
        .fold(alg.identity(), |acc, (t, e)| alg.mul(&acc, &pow_big(alg, &t, e)))
}

fn class5_power(alg: &MagnusAlgebra, x: &Series, y: &Series, n: u64) -> (Series, Series) {
    let lhs = pow_big(alg, &alg.mul(x, y), BigInt::from(n));
    (lhs, class5_rhs(alg, x, y, n))
}

/// `(yx)^n` against `y^n x^n [x,y]^C(n,2) [x,y,y]^C(n,3) [x,y,x]^(C(n,2)+2C(n,3)) [x,y,y,y]^C(n,4)`.
fn gamma2_power(alg: &MagnusAlgebra, x: &Series, y: &Series, n: u64) -> (Series, Series) {
    let nb = BigInt::from(n);
    let b = |k: u32| binomial(&nb, k);
    let lhs = pow_big(alg, &alg.mul(y, x), nb.clone());
    let xy = alg.comm(x, y);
    let xyy = alg.comm(&xy, y);
    let factors = vec![
        (y.clone(), nb.clone()),
        (x.clone(), nb.clone()),
        (xy.clone(), b(2)),
        (xyy.clone(), b(3)),
        (alg.comm(&xy, x), b(2) + BigInt::from(2) * b(3)),
        (alg.comm(&xyy, y), b(4)),
    ];
    let rhs = factors
        .into_iter()
        .fold(alg.identity(), |acc, (t, e)| alg.mul(&acc, &pow_big(alg, &t, e)));
    (lhs, rhs)
}

/// `[y^n, x]` against `[y,x]^n [y,x,y]^C(n,2) [y,x,y,y]^C(n,3) [y,x,y,[y,x]]^(C(n,2)+2C(n,3)) [y,x,y,y,y]^C(n,4)`.
fn power_commutator(alg: &MagnusAlgebra, x: &Series, y: &Series, n: u64) -> (Series, Series) {
    let nb = BigInt::from(n);
    let b = |k: u32| binomial(&nb, k);
    let lhs = alg.comm(&pow_big(alg, y, nb.clone()), x);
    let yx = alg.comm(y, x);
    let yxy = alg.comm(&yx, y);
    let yxyy = alg.comm(&yxy, y);
    let factors = vec![
        (yx.clone(), nb.clone()),
        (yxy.clone(), b(2)),
        (yxyy.clone(), b(3)),
        (alg.comm(&yxy, &yx), b(2) + BigInt::from(2) * b(3)),
        (alg.comm(&yxyy, y), b(4)),
    ];
    let rhs = factors
        .into_iter()
        .fold(alg.identity(), |acc, (t, e)| alg.mul(&acc, &pow_big(alg, &t, e)));
    (lhs, rhs)
}

fn random_word(rng: &mut ChaCha8Rng, d: usize, max_len: usize) -> FreeWord {
    let len = rng.gen_range(1..=max_len);
    let letters: Vec<(usize, i64)> = (0..len)
        .map(|_| (rng.gen_range(0..d), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    crate::presentation::free_reduce(&FreeWord::from_letters(letters))
}

/// Product of one to three commutators of random words.
fn random_gamma2_word(rng: &mut ChaCha8Rng, d: usize) -> FreeWord {
    let k = rng.gen_range(1..=3);
    (0..k).fold(FreeWord::identity(), |acc, _| {
        let u = random_word(rng, d, 4);
        let v = random_word(rng, d, 4);
        acc.mul(&u.commutator(&v))
    })
}

fn describe(words: &[(&str, &FreeWord)]) -> String {
    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    words
        .iter()
        .map(|(n, w)| format!("{n} = {}", w.display(&names)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Records a failure if `lhs * rhs^-1 != 1`; returns whether it held.
fn compare(report: &mut VerdictReport, alg: &MagnusAlgebra, lhs: &Series, rhs: &Series, context: &str) -> bool {
    let q = alg.mul(lhs, &alg.inv(rhs));
    if q.is_one() {
        return true;
    }
    let k = q.lowest_nonconstant_degree().unwrap_or(0);
    let lead: Vec<String> = q
        .terms()
        .into_iter()
        .filter(|(m, _)| m.degree() == k)
        .take(4)
        .map(|(m, v)| format!("{v}*{:?}", m.0))
        .collect();
    report.fail(format!(
        "{context}: lhs*rhs^-1 differs from 1 in degree {k}: {}",
        lead.join(" ")
    ));
    false
}

/// Checks `id` exactly in the free nilpotent group of class `c`.
///
/// Generic generators are substituted first; `trials` further random
/// substitutions are drawn from `seed` for the identities that quantify over
/// arbitrary elements (`eq1.1`, `eq1.2`, `multilinear`) or over `gamma_2`
/// (`lemma2.3i`, which uses `trials` substitutions and no generic one).
pub fn identity_check(id: IdentityId, c: usize, trials: usize, seed: u64) -> Result<VerdictReport> {
    id.validate(c)?;
    let mut report = VerdictReport::new(id.to_string());
    report.compute("class_bound", c);
    report.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = 0;
    match id {
        IdentityId::ProductLeft | IdentityId::ProductRight => {
            let check = if id == IdentityId::ProductLeft {
                product_left
            } else {
                product_right
            };
            let alg = MagnusAlgebra::new(3, c);
            let g = alg.generators();
            let (l, r) = check(&alg, &g[0], &g[1], &g[2]);
            compare(&mut report, &alg, &l, &r, "generic x, y, z");
            samples += 1;
            for _ in 0..trials {
                let w: Vec<FreeWord> = (0..3).map(|_| random_word(&mut rng, 3, 6)).collect();
                let e: Vec<Series> = w.iter().map(|w| alg.embed(w)).collect();
                let (l, r) = check(&alg, &e[0], &e[1], &e[2]);
                let ctx = describe(&[("x", &w[0]), ("y", &w[1]), ("z", &w[2])]);
                samples += 1;
                if !compare(&mut report, &alg, &l, &r, &ctx) {
                    break;
                }
            }
        }
        IdentityId::Multilinear(r) => {
            let r = r as usize;
            // slots use letters 0..r, the second factor letter r
            let alg = MagnusAlgebra::new(r + 1, c);
            let g = alg.generators();
            for i in 0..r {
                let (l, rh) = multilinear(&alg, &g[..r], i, &g[i], &g[r]);
                samples += 1;
                compare(&mut report, &alg, &l, &rh, &format!("generic, slot {}", i + 1));
            }
            let alg3 = MagnusAlgebra::new(3, c);
            'trials: for _ in 0..trials {
                let slots: Vec<Series> = (0..r).map(|_| alg3.embed(&random_word(&mut rng, 3, 4))).collect();
                let x = alg3.embed(&random_word(&mut rng, 3, 4));
                let y = alg3.embed(&random_word(&mut rng, 3, 4));
                for i in 0..r {
                    let (l, rh) = multilinear(&alg3, &slots, i, &x, &y);
                    if !compare(&mut report, &alg3, &l, &rh, &format!("random words, slot {}", i + 1)) {
                        break 'trials;
                    }
                }
                samples += 1;
            }
        }
        IdentityId::Class5Power(n) | IdentityId::PowerCommutator(n) => {
            report.compute("n", n);
            let alg = MagnusAlgebra::new(2, c);
            let g = alg.generators();
            let (l, r) = if let IdentityId::Class5Power(_) = id {
                class5_power(&alg, &g[0], &g[1], n)
            } else {
                power_commutator(&alg, &g[0], &g[1], n)
            };
            samples += 1;
            compare(&mut report, &alg, &l, &r, "generic x, y");
        }
        IdentityId::Gamma2Power(n) => {
            report.compute("n", n);
            let alg = MagnusAlgebra::new(3, c);
            for _ in 0..trials {
                let xw = random_gamma2_word(&mut rng, 3);
                let yw = random_word(&mut rng, 3, 4);
                let (l, r) = gamma2_power(&alg, &alg.embed(&xw), &alg.embed(&yw), n);
                samples += 1;
                if !compare(&mut report, &alg, &l, &r, &describe(&[("x", &xw), ("y", &yw)])) {
                    break;
                }
            }
        }
    }
    report.samples = samples;
    Ok(report)
}

/// Whether the `(k+1)`-st finite difference of `values` vanishes at every
/// window, `k` being the allowed polynomial degree.
fn differences_vanish(values: &[BigInt], k: usize) -> bool {
    let mut diff = values.to_vec();
    for _ in 0..=k {
        if diff.len() < 2 {
            return true;
        }
        diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    diff.iter().all(Zero::is_zero)
}

/// Verifies that every coefficient of `(xy)^n`, and at class 5 of the
/// right-hand side of the class-5 expansion, is a polynomial in `n` of degree
/// at most the monomial degree, over `n = 0..=max_n`.
///
/// Together with the identity passing at `n = 0..=5` this proves the
/// expansion for every `n >= 0`.
pub fn degree_polynomial_check(c: usize, max_n: u64) -> VerdictReport {
    let mut report = VerdictReport::new(format!("degree-polynomial:{c}"));
    report.compute("class_bound", c).compute("max_n", max_n);
    let alg = MagnusAlgebra::new(2, c);
    let g = alg.generators();
    let xy = alg.mul(&g[0], &g[1]);
    let mut families: Vec<(&str, Vec<Series>)> =
        vec![("(xy)^n", (0..=max_n).map(|n| alg.pow(&xy, &BigInt::from(n))).collect())];
    if c == 5 {
        families.push((
            "class-5 expansion",
            (0..=max_n).map(|n| class5_rhs(&alg, &g[0], &g[1], n)).collect(),
        ));
    }
    let monomials: Vec<Monomial> = (0..=c)
        .flat_map(|k| (0..1usize << k).map(move |local| Monomial((0..k).rev().map(|b| (local >> b) & 1).collect())))
        .collect();
    let mut samples = 0;
    for (name, seq) in &families {
        for m in &monomials {
            let values: Vec<BigInt> = seq.iter().map(|s| s.coefficient(m)).collect();
            samples += 1;
            if !differences_vanish(&values, m.degree()) {
                report.fail(format!("{name}: coefficient of {:?} is not polynomial of degree <= {}", m.0, m.degree()));
            }
        }
    }
    report.samples = samples;
    report
}

/// Checks that the truncation at degree `c` is exactly `gamma_{c+1}` on the
/// tested elements: left-normed commutators of weight `c+1` in the
/// generators vanish, basic commutators of weight at most `c` do not, and
/// each starts in the degree of its weight.
pub fn kernel_check(d: usize, c: usize) -> VerdictReport {
    let mut report = VerdictReport::new(format!("kernel:{d}:{c}"));
    report.compute("letters", d).compute("class_bound", c);
    let alg = MagnusAlgebra::new(d, c);
    let g = alg.generators();
    let mut samples = 0;
    let total = d.pow((c + 1) as u32);
    for code in 0..total {
        let mut r = code;
        let parts: Vec<Series> = (0..=c)
            .map(|_| {
                let l = r % d;
                r /= d;
                g[l].clone()
            })
            .collect();
        samples += 1;
        let s = alg.comm_left(&parts);
        if !s.is_one() {
            report.fail(format!("weight-{} commutator with code {code} survives truncation", c + 1));
            break;
        }
    }
    for b in basic_commutators(d, c) {
        let s = alg.embed(&b.word);
        samples += 1;
        if s.lowest_nonconstant_degree() != Some(b.weight) {
            report.fail(format!("basic commutator {} does not start in degree {}", b.label, b.weight));
        }
    }
    report.samples = samples;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in ["eq1.1", "eq1.2", "multilinear:3", "class5:7", "lemma2.3i:2", "lemma2.3ii:12"] {
            assert_eq!(s.parse::<IdentityId>().unwrap().to_string(), s);
        }
        assert!("multilinear:1".parse::<IdentityId>().is_err());
        assert!("class5".parse::<IdentityId>().is_err());
    }

    #[test]
    fn class_bound_is_validated() {
        let err = identity_check(IdentityId::Class5Power(2), 4, 1, 0).unwrap_err();
        assert!(matches!(err, Error::IncompatibleClass { got: 4, .. }));
        assert!(identity_check(IdentityId::Multilinear(3), 4, 1, 0).is_err());
    }

    #[test]
    fn square_of_product() {
        // (xy)^2 = x^2 y^2 [y,x] [y,x,y] in class 5
        let alg = MagnusAlgebra::new(2, 5);
        let g = alg.generators();
        let yx = alg.comm(&g[1], &g[0]);
        let short = alg.product(&[
            alg.pow_i64(&g[0], 2),
            alg.pow_i64(&g[1], 2),
            yx.clone(),
            alg.comm(&yx, &g[1]),
        ]);
        assert_eq!(class5_rhs(&alg, &g[0], &g[1], 2), short);
        assert!(identity_check(IdentityId::Class5Power(2), 5, 0, 0).unwrap().passed());
    }

    #[test]
    fn wrong_exponent_is_caught() {
        let alg = MagnusAlgebra::new(2, 3);
        let g = alg.generators();
        let lhs = alg.pow_i64(&alg.mul(&g[0], &g[1]), 2);
        let rhs = alg.product(&[alg.pow_i64(&g[0], 2), alg.pow_i64(&g[1], 2)]);
        let mut r = VerdictReport::new("t");
        assert!(!compare(&mut r, &alg, &lhs, &rhs, "demo"));
        assert!(r.witnesses[0].contains("degree 2"));
    }

    #[test]
    fn finite_differences() {
        assert!(differences_vanish(&[0, 1, 4, 9, 16].map(BigInt::from), 2));
        assert!(!differences_vanish(&[0, 1, 8, 27, 64].map(BigInt::from), 2));
    }
}
