//! Line-oriented reader for presentation files.
//!
//! ```text
//! # comment
//! group "heisenberg-27"
//! prime 3
//! generators a b c
//! relators a^3, b^3, c^3, [b,a] = c
//! relators [c,a], [c,b]
//! expect order=27 class=2 exponent=3
//! ```
//!
//! Words are built from identifiers, `1`, `( )`, left-normed commutators
//! `[u, v, ...]`, powers `u^k` (k possibly negative), conjugates `u^v`, and
//! juxtaposition (or `*`) for products. A relation `u = v` is stored as the
//! relator `u v^-1`.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::word::{free_reduce, FreeWord};
use super::{Expectations, FinitePresentation, GeneratorSymbol};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum TokKind {
    Ident(String),
    Int(BigInt),
    Str(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Caret,
    Minus,
    Equals,
    Star,
}

#[derive(Clone, Debug)]
pub(crate) struct Tok {
    pub kind: TokKind,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize_line(text: &str, line: usize) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let single = |kind| Tok { kind, line, column };
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '[' => out.push(single(TokKind::LBracket)),
            ']' => out.push(single(TokKind::RBracket)),
            '(' => out.push(single(TokKind::LParen)),
            ')' => out.push(single(TokKind::RParen)),
            ',' => out.push(single(TokKind::Comma)),
            '^' => out.push(single(TokKind::Caret)),
            '-' => out.push(single(TokKind::Minus)),
            '=' => out.push(single(TokKind::Equals)),
            '*' => out.push(single(TokKind::Star)),
            '"' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '"' {
                    j += 1;
                }
                if j >= chars.len() {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: "unterminated string".into(),
                    });
                }
                out.push(single(TokKind::Str(chars[start..j].iter().collect())));
                i = j + 1;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                out.push(single(TokKind::Int(s.parse().expect("digits"))));
                i = j;
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_')
                {
                    j += 1;
                }
                out.push(single(TokKind::Ident(chars[i..j].iter().collect())));
                i = j;
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Recursive-descent parser for words over a fixed generator table.
pub(crate) struct WordParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
    end_column: usize,
    gens: &'a HashMap<String, usize>,
}

impl<'a> WordParser<'a> {
    pub fn new(toks: &'a [Tok], line: usize, end_column: usize, gens: &'a HashMap<String, usize>) -> Self {
        WordParser {
            toks,
            pos: 0,
            line,
            end_column,
            gens,
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.column),
            None => (self.line, self.end_column),
        }
    }

    pub fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    pub fn eat(&mut self, kind: &TokKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(TokKind::Ident(_)) | Some(TokKind::Int(_)) | Some(TokKind::LParen) | Some(TokKind::LBracket)
        )
    }

    /// `relation := word ('=' word)?`
    pub fn relation(&mut self) -> Result<FreeWord> {
        let lhs = self.word()?;
        if self.eat(&TokKind::Equals) {
            let rhs = self.word()?;
            Ok(lhs.mul(&rhs.inverse()))
        } else {
            Ok(lhs)
        }
    }

    /// `word := factor (('*')? factor)*`
    pub fn word(&mut self) -> Result<FreeWord> {
        if !self.starts_atom() {
            return self.err("expected a word");
        }
        let mut acc = self.factor()?;
        while self.eat(&TokKind::Star) || self.starts_atom() {
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(free_reduce(&acc))
    }

    /// `factor := atom ('^' (['-'] INT | atom))*`
    fn factor(&mut self) -> Result<FreeWord> {
        let mut base = self.atom()?;
        while self.eat(&TokKind::Caret) {
            let negative = self.eat(&TokKind::Minus);
            match self.peek().cloned() {
                Some(TokKind::Int(k)) => {
                    self.pos += 1;
                    let k = if negative { -k } else { k };
                    base = base.pow(&k);
                }
                _ if !negative && self.starts_atom() => {
                    let v = self.atom()?;
                    base = base.conjugate(&v);
                }
                _ => return self.err("expected an exponent after `^`"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FreeWord> {
        let (line, column) = self.here();
        match self.peek().cloned() {
            Some(TokKind::Ident(name)) => {
                self.pos += 1;
                match self.gens.get(&name) {
                    Some(&i) => Ok(FreeWord::generator(i)),
                    None => Err(Error::UndeclaredGenerator { name, line, column }),
                }
            }
            Some(TokKind::Int(k)) => {
                self.pos += 1;
                if k == BigInt::from(1) {
                    Ok(FreeWord::identity())
                } else {
                    Err(Error::Syntax {
                        line,
                        column,
                        message: format!("unexpected integer {k} (only `1` denotes a word)"),
                    })
                }
            }
            Some(TokKind::LParen) => {
                self.pos += 1;
                let w = self.word()?;
                if !self.eat(&TokKind::RParen) {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: "unclosed `(`".into(),
                    });
                }
                Ok(w)
            }
            Some(TokKind::LBracket) => {
                self.pos += 1;
                let mut parts = vec![self.word()?];
                while self.eat(&TokKind::Comma) {
                    parts.push(self.word()?);
                }
                if !self.eat(&TokKind::RBracket) {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: "unclosed `[`".into(),
                    });
                }
                if parts.len() < 2 {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: "a commutator needs at least two entries".into(),
                    });
                }
                Ok(FreeWord::left_normed(&parts))
            }
            _ => self.err("expected a generator, `1`, `(` or `[`"),
        }
    }
}

pub(crate) fn check_prime(p: &BigInt, line: usize, column: usize) -> Result<u64> {
    use num_traits::ToPrimitive;
    let p = p.to_u64().ok_or_else(|| Error::Syntax {
        line,
        column,
        message: "prime out of range".into(),
    })?;
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    if p < 2 || !(2..).take_while(|d| d * d <= p).all(|d| p % d != 0) {
        return Err(Error::InvalidPresentation(format!("{p} is not a prime")));
    }
    Ok(p)
}

fn expect_end(toks: &[Tok], pos: usize) -> Result<()> {
    if let Some(t) = toks.get(pos) {
        return Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(())
}

pub fn parse_presentation(text: &str) -> Result<FinitePresentation> {
    let mut name = String::new();
    let mut prime: Option<u64> = None;
    let mut generators: Vec<GeneratorSymbol> = Vec::new();
    let mut table: HashMap<String, usize> = HashMap::new();
    let mut relators = Vec::new();
    let mut expect = Expectations::default();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let toks = tokenize_line(raw, line)?;
        let Some(first) = toks.first() else { continue };
        let end_column = raw.chars().count() + 1;
        let keyword = match &first.kind {
            TokKind::Ident(k) => k.clone(),
            _ => {
                return Err(Error::Syntax {
                    line,
                    column: first.column,
                    message: "expected a keyword".into(),
                })
            }
        };
        let rest = &toks[1..];
        match keyword.as_str() {
            "group" => match rest.first().map(|t| &t.kind) {
                Some(TokKind::Str(s)) | Some(TokKind::Ident(s)) => {
                    name = s.clone();
                    expect_end(rest, 1)?;
                }
                _ => {
                    return Err(Error::Syntax {
                        line,
                        column: first.column,
                        message: "expected a group name".into(),
                    })
                }
            },
            "prime" => match rest.first() {
                Some(Tok {
                    kind: TokKind::Int(p),
                    column,
                    ..
                }) => {
                    prime = Some(check_prime(p, line, *column)?);
                    expect_end(rest, 1)?;
                }
                _ => {
                    return Err(Error::Syntax {
                        line,
                        column: first.column,
                        message: "expected an integer after `prime`".into(),
                    })
                }
            },
            "generators" => {
                for t in rest {
                    match &t.kind {
                        TokKind::Comma => {}
                        TokKind::Ident(g) => {
                            if table.contains_key(g) {
                                return Err(Error::Syntax {
                                    line,
                                    column: t.column,
                                    message: format!("generator `{g}` declared twice"),
                                });
                            }
                            table.insert(g.clone(), generators.len());
                            generators.push(GeneratorSymbol {
                                name: g.clone(),
                                index: generators.len(),
                            });
                        }
                        _ => {
                            return Err(Error::Syntax {
                                line,
                                column: t.column,
                                message: "expected a generator name".into(),
                            })
                        }
                    }
                }
            }
            "relators" => {
                let mut p = WordParser::new(rest, line, end_column, &table);
                loop {
                    relators.push(p.relation()?);
                    if p.at_end() {
                        break;
                    }
                    if !p.eat(&TokKind::Comma) {
                        return p.err("expected `,` between relators");
                    }
                }
            }
            "expect" => {
                let mut i = 0;
                while i < rest.len() {
                    let key = match &rest[i].kind {
                        TokKind::Ident(k) => k.clone(),
                        _ => {
                            return Err(Error::Syntax {
                                line,
                                column: rest[i].column,
                                message: "expected key=value".into(),
                            })
                        }
                    };
                    if rest.get(i + 1).map(|t| &t.kind) != Some(&TokKind::Equals) {
                        return Err(Error::Syntax {
                            line,
                            column: rest[i].column,
                            message: "expected `=` after key".into(),
                        });
                    }
                    let value = match rest.get(i + 2).map(|t| &t.kind) {
                        Some(TokKind::Int(v)) => v.to_string(),
                        Some(TokKind::Ident(v)) | Some(TokKind::Str(v)) => v.clone(),
                        _ => {
                            return Err(Error::Syntax {
                                line,
                                column: rest[i].column,
                                message: "expected a value".into(),
                            })
                        }
                    };
                    expect.set(&key, &value).map_err(|m| Error::Syntax {
                        line,
                        column: rest[i].column,
                        message: m,
                    })?;
                    i += 3;
                }
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column: first.column,
                    message: format!("unknown keyword `{other}`"),
                })
            }
        }
    }

    let prime = prime.ok_or_else(|| Error::InvalidPresentation("missing `prime` line".into()))?;
    Ok(FinitePresentation {
        name,
        prime,
        generators,
        relators,
        expect,
    })
}

impl Expectations {
    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let int = || value.parse::<u128>().map_err(|_| format!("`{key}` needs an integer"));
        match key {
            "order" => self.order = Some(int()?),
            "class" => self.class = Some(int()? as usize),
            "exponent" => self.exponent = Some(int()?),
            _ => {
                self.extra.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }
}
