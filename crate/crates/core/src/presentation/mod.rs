//! Free-group words and finitely presented groups.

mod parse;
mod word;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use parse::parse_presentation;
pub(crate) use parse::{check_prime, tokenize_line, Tok, TokKind, WordParser};
pub use word::{evaluate_word, free_reduce, FreeGroup, FreeWord};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub name: String,
    pub index: usize,
}

/// Optional metadata assertions carried by a presentation file.
///
/// Algorithms never read these; the CLI re-verifies them against computed
/// values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectations {
    pub order: Option<u128>,
    pub class: Option<usize>,
    pub exponent: Option<u128>,
    pub extra: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePresentation {
    pub name: String,
    pub prime: u64,
    pub generators: Vec<GeneratorSymbol>,
    pub relators: Vec<FreeWord>,
    pub expect: Expectations,
}

impl FinitePresentation {
    /// Builds a presentation from generator names and relators, validating it.
    pub fn new(
        name: impl Into<String>,
        prime: u64,
        names: &[&str],
        relators: Vec<FreeWord>,
    ) -> Result<Self> {
        let p = FinitePresentation {
            name: name.into(),
            prime,
            generators: names
                .iter()
                .enumerate()
                .map(|(index, n)| GeneratorSymbol {
                    name: n.to_string(),
                    index,
                })
                .collect(),
            relators,
            expect: Expectations::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.prime == 2 {
            return Err(Error::EvenPrime(2));
        }
        check_prime(&self.prime.into(), 0, 0)?;
        for (i, g) in self.generators.iter().enumerate() {
            if g.index != i {
                return Err(Error::InvalidPresentation(format!(
                    "generator `{}` has index {} at position {i}",
                    g.name, g.index
                )));
            }
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidPresentation(format!("duplicate generator `{}`", g.name)));
            }
        }
        for r in &self.relators {
            if let Some(m) = r.max_generator() {
                if m >= self.rank() {
                    return Err(Error::InvalidPresentation(format!(
                        "relator uses undeclared generator index {m}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parses a single word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<FreeWord> {
        let toks = tokenize_line(text, 1)?;
        let table = self
            .generators
            .iter()
            .map(|g| (g.name.clone(), g.index))
            .collect();
        let mut p = WordParser::new(&toks, 1, text.chars().count() + 1, &table);
        let w = p.relation()?;
        if !p.at_end() {
            return Err(Error::Syntax {
                line: 1,
                column: 0,
                message: "trailing input after word".into(),
            });
        }
        Ok(w)
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        if !self.name.is_empty() {
            writeln!(f, "group \"{}\"", self.name)?;
        }
        writeln!(f, "prime {}", self.prime)?;
        writeln!(f, "generators {}", names.join(" "))?;
        for r in &self.relators {
            writeln!(f, "relators {}", r.display(&names))?;
        }
        let e = &self.expect;
        let mut kv = Vec::new();
        if let Some(o) = e.order {
            kv.push(format!("order={o}"));
        }
        if let Some(c) = e.class {
            kv.push(format!("class={c}"));
        }
        if let Some(x) = e.exponent {
            kv.push(format!("exponent={x}"));
        }
        for (k, v) in &e.extra {
            let bare = !v.is_empty() && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if bare {
                kv.push(format!("{k}={v}"));
            } else {
                kv.push(format!("{k}=\"{v}\""));
            }
        }
        if !kv.is_empty() {
            writeln!(f, "expect {}", kv.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEISENBERG: &str = "\
group \"heisenberg-27\"
prime 3
generators a b c
relators a^3, b^3, c^3, [b,a]=c
relators [c,a], [c,b]
expect order=27 class=2
";

    #[test]
    fn heisenberg_has_six_relators() {
        let p = parse_presentation(HEISENBERG).unwrap();
        assert_eq!(p.rank(), 3);
        assert_eq!(p.relators.len(), 6);
        assert_eq!(p.expect.order, Some(27));
        // [b,a] = c  ->  b^-1 a^-1 b a c^-1
        assert_eq!(
            p.relators[3],
            FreeWord::from_letters([(1, -1), (0, -1), (1, 1), (0, 1), (2, -1)])
        );
    }

    #[test]
    fn relation_becomes_relator() {
        let p = parse_presentation("prime 3\ngenerators a b\nrelators a^b = a^4\n").unwrap();
        assert_eq!(
            p.relators[0],
            FreeWord::from_letters([(1, -1), (0, 1), (1, 1), (0, -4)])
        );
    }

    #[test]
    fn unclosed_bracket_is_reported() {
        let err = parse_presentation("prime 3\ngenerators a b\nrelators [b,a\n").unwrap_err();
        match err {
            Error::Syntax { line, column, message } => {
                assert_eq!((line, column), (3, 10));
                assert!(message.contains("unclosed"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undeclared_generator() {
        let err = parse_presentation("prime 3\ngenerators a\nrelators a b\n").unwrap_err();
        assert!(matches!(err, Error::UndeclaredGenerator { ref name, line: 3, column: 12 } if name == "b"));
    }

    #[test]
    fn even_prime_rejected() {
        let err = parse_presentation("prime 2\ngenerators a\n").unwrap_err();
        assert_eq!(err, Error::EvenPrime(2));
        assert!(err.to_string().contains("odd primes"));
    }

    #[test]
    fn conjugation_and_negative_powers() {
        let p = parse_presentation("prime 5\ngenerators x y\nrelators x^-2 y^(x y), (x y)^2\n").unwrap();
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let xy = x.mul(&y);
        assert_eq!(p.relators[0], x.pow(&(-2).into()).mul(&y.conjugate(&xy)));
        assert_eq!(p.relators[1], xy.mul(&xy));
    }

    #[test]
    fn print_then_parse_round_trip() {
        let p = parse_presentation(HEISENBERG).unwrap();
        let q = parse_presentation(&p.to_string()).unwrap();
        assert_eq!(p, q);
    }
}
