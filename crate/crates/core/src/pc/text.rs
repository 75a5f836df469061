//! Text format for pc-presentations.
//!
//! ```text
//! pcgroup "heisenberg-27"
//! prime 3
//! gen a order 3 weight 1
//! gen b order 3 weight 1
//! gen c order 3 weight 2
//! relation b^a = b c
//! ```
//!
//! Relations are `x^m = w` (power), `y^x = y w` (conjugate) and
//! `y^(x^-1) = y w` (inverse conjugate, infinite `x` only). Right-hand sides
//! must be normal forms; omitted relations are trivial.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;

use super::{PcBuilder, PcPresentation, RelOrder, Syllables};
use crate::error::{Error, Result};
use crate::presentation::{check_prime, tokenize_line, FreeWord, Tok, TokKind, WordParser};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

enum Lhs {
    Power(usize, i64),
    Conj(usize, usize),
    ConjInv(usize, usize),
}

struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a TokKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.column)
    }

    fn next(&mut self) -> Option<&'a TokKind> {
        let t = self.toks.get(self.pos).map(|t| &t.kind);
        self.pos += 1;
        t
    }

    fn expect(&mut self, kind: &TokKind, what: &str) -> Result<()> {
        let col = self.column();
        match self.next() {
            Some(k) if k == kind => Ok(()),
            _ => Err(syntax(self.line, col, format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize)> {
        let col = self.column();
        match self.next() {
            Some(TokKind::Ident(s)) => Ok((s.clone(), col)),
            _ => Err(syntax(self.line, col, format!("expected {what}"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64> {
        let col = self.column();
        let neg = if self.peek() == Some(&TokKind::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(TokKind::Int(v)) => {
                let v = v.to_i64().ok_or_else(|| syntax(self.line, col, "integer too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(syntax(self.line, col, format!("expected {what}"))),
        }
    }
}

fn lookup(table: &HashMap<String, usize>, name: &str, line: usize, column: usize) -> Result<usize> {
    table.get(name).copied().ok_or_else(|| Error::UndeclaredGenerator {
        name: name.to_string(),
        line,
        column,
    })
}

fn to_syllables(w: &FreeWord, line: usize) -> Result<Syllables> {
    let mut out: Syllables = Vec::new();
    for (g, e) in w.letters() {
        let e = e.to_i64().ok_or_else(|| syntax(line, 0, "exponent too large"))?;
        if out.last().is_some_and(|&(h, _)| h >= *g) {
            return Err(Error::Structural(format!("right-hand side on line {line} is not a normal form")));
        }
        out.push((*g, e));
    }
    Ok(out)
}

/// Parses the pc-presentation text format.
pub fn parse_pc_presentation(text: &str) -> Result<PcPresentation> {
    let mut name = String::new();
    let mut builder: Option<PcBuilder> = None;
    let mut table: HashMap<String, usize> = HashMap::new();
    let mut relations: Vec<(Lhs, Syllables, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let toks = tokenize_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let end = raw.chars().count() + 1;
        let mut c = Cursor {
            toks: &toks,
            pos: 0,
            line,
            end,
        };
        let (keyword, kcol) = c.ident("a keyword")?;
        match keyword.as_str() {
            "pcgroup" => {
                let col = c.column();
                name = match c.next() {
                    Some(TokKind::Str(s)) | Some(TokKind::Ident(s)) => s.clone(),
                    _ => return Err(syntax(line, col, "expected a group name")),
                };
            }
            "prime" => {
                let col = c.column();
                let p = match c.next() {
                    Some(TokKind::Int(p)) => check_prime(p, line, col)?,
                    _ => return Err(syntax(line, col, "expected an integer after `prime`")),
                };
                builder = Some(PcBuilder::new(p));
            }
            "gen" => {
                let b = builder
                    .as_mut()
                    .ok_or_else(|| syntax(line, kcol, "`prime` must precede generators"))?;
                let (g, gcol) = c.ident("a generator name")?;
                if table.contains_key(&g) {
                    return Err(syntax(line, gcol, format!("generator `{g}` declared twice")));
                }
                let (kw, col) = c.ident("`order`")?;
                if kw != "order" {
                    return Err(syntax(line, col, "expected `order`"));
                }
                let order = if let Some(TokKind::Ident(s)) = c.peek() {
                    if s != "inf" {
                        return Err(syntax(line, c.column(), "expected an order or `inf`"));
                    }
                    c.pos += 1;
                    RelOrder::Infinite
                } else {
                    RelOrder::Finite(c.int("a relative order")?)
                };
                let (kw, col) = c.ident("`weight`")?;
                if kw != "weight" {
                    return Err(syntax(line, col, "expected `weight`"));
                }
                let w = c.int("a weight")?;
                let w = u32::try_from(w).map_err(|_| syntax(line, col, "weight must be nonnegative"))?;
                table.insert(g.clone(), b.len());
                b.gen(g, order, w);
            }
            "relation" => {
                let (x, xcol) = c.ident("a generator")?;
                let xi = lookup(&table, &x, line, xcol)?;
                c.expect(&TokKind::Caret, "`^`")?;
                let lhs = match c.peek() {
                    Some(TokKind::Int(_)) => Lhs::Power(xi, c.int("an exponent")?),
                    Some(TokKind::Ident(_)) => {
                        let (y, ycol) = c.ident("a generator")?;
                        Lhs::Conj(xi, lookup(&table, &y, line, ycol)?)
                    }
                    Some(TokKind::LParen) => {
                        c.pos += 1;
                        let (y, ycol) = c.ident("a generator")?;
                        let yi = lookup(&table, &y, line, ycol)?;
                        c.expect(&TokKind::Caret, "`^`")?;
                        let col = c.column();
                        if c.int("-1")? != -1 {
                            return Err(syntax(line, col, "only `^-1` is allowed here"));
                        }
                        c.expect(&TokKind::RParen, "`)`")?;
                        Lhs::ConjInv(xi, yi)
                    }
                    _ => return Err(syntax(line, c.column(), "expected an exponent or a generator")),
                };
                c.expect(&TokKind::Equals, "`=`")?;
                let mut wp = WordParser::new(&toks[c.pos..], line, end, &table);
                let w = wp.word()?;
                if !wp.at_end() {
                    return wp.err("trailing input after relation");
                }
                relations.push((lhs, to_syllables(&w, line)?, line));
            }
            other => return Err(syntax(line, kcol, format!("unknown keyword `{other}`"))),
        }
    }
    let mut b = builder.ok_or_else(|| Error::InvalidPresentation("missing `prime` line".into()))?;
    for (lhs, rhs, line) in relations {
        match lhs {
            Lhs::Power(x, m) => {
                if b.gens()[x].order != RelOrder::Finite(m) {
                    return Err(Error::Structural(format!(
                        "line {line}: power relation exponent {m} differs from the declared relative order"
                    )));
                }
                b.power(x, rhs);
            }
            Lhs::Conj(y, x) => {
                if x >= y {
                    return Err(Error::Structural(format!(
                        "line {line}: conjugate relations need a lower-index conjugator"
                    )));
                }
                b.conj(y, x, rhs);
            }
            Lhs::ConjInv(y, x) => {
                if x >= y {
                    return Err(Error::Structural(format!(
                        "line {line}: conjugate relations need a lower-index conjugator"
                    )));
                }
                b.conj_inv(y, x, rhs);
            }
        }
    }
    b.name(name).build()
}

fn render(pcp: &PcPresentation, syl: &Syllables) -> String {
    if syl.is_empty() {
        return "1".into();
    }
    syl.iter()
        .map(|&(g, e)| {
            let n = &pcp.gens()[g].name;
            if e == 1 {
                n.clone()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.name().is_empty() {
            writeln!(f, "pcgroup \"{}\"", self.name())?;
        }
        writeln!(f, "prime {}", self.prime())?;
        for g in self.gens() {
            writeln!(f, "gen {} order {} weight {}", g.name, g.order, g.weight)?;
        }
        let names = self.names();
        for i in 0..self.len() {
            if let RelOrder::Finite(m) = self.rel_order(i) {
                if !self.power_rhs(i).is_empty() {
                    writeln!(f, "relation {}^{} = {}", names[i], m, render(self, self.power_rhs(i)))?;
                }
            }
        }
        for j in 0..self.len() {
            for i in 0..j {
                if self.conj_rhs(j, i).len() > 1 {
                    writeln!(f, "relation {}^{} = {}", names[j], names[i], render(self, self.conj_rhs(j, i)))?;
                }
                if self.rel_order(i).is_infinite() && self.conj_inv_rhs(j, i).len() > 1 {
                    writeln!(
                        f,
                        "relation {}^({}^-1) = {}",
                        names[j],
                        names[i],
                        render(self, self.conj_inv_rhs(j, i))
                    )?;
                }
            }
        }
        Ok(())
    }
}
