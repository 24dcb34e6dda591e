//! ASCII concrete syntax for POTL formulas.
//!
//! Unary operators bind tightest, then `&`, `|`, `->`, then the until/since
//! family (right associative): `a & b Ud c -> d` reads as
//! `(a & b) Ud (c -> d)`.

use std::fmt;

use thiserror::Error;

use crate::alphabet::PrecRel;
use crate::potl::ast::{Dir, PotlFormula, PrSet};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("formula parse error at byte {pos}: {msg}")]
pub struct FormulaParseError {
    pub pos: usize,
    pub msg: String,
}

pub fn parse_potl(input: &str) -> Result<PotlFormula, FormulaParseError> {
    let mut p = Parser { input, pos: 0 };
    let f = p.until_level()?;
    p.skip_ws();
    if p.pos < p.input.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

/// Falsum is represented as `~T`.
fn falsum() -> PotlFormula {
    PotlFormula::not(PotlFormula::True)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> FormulaParseError {
        FormulaParseError { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.input[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    /// Reads an identifier-shaped token without consuming it.
    fn peek_word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.input[self.pos..];
        let end = rest
            .char_indices()
            .find(|(_, c)| !c.is_ascii_alphanumeric() && *c != '_')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if end == 0 {
            None
        } else {
            Some(&rest[..end])
        }
    }

    fn take_word(&mut self) -> Option<&'a str> {
        let w = self.peek_word()?;
        self.pos += w.len();
        Some(w)
    }

    // until-level (loosest): impl (Ud|Uu|Sd|Su|HUd|HUu|HSd|HSu) until-level
    fn until_level(&mut self) -> Result<PotlFormula, FormulaParseError> {
        let lhs = self.impl_level()?;
        self.skip_ws();
        if let Some(w) = self.peek_word() {
            let op: Option<fn(PotlFormula, PotlFormula) -> PotlFormula> = match w {
                "Ud" => Some(|a, b| PotlFormula::until(Dir::Down, a, b)),
                "Uu" => Some(|a, b| PotlFormula::until(Dir::Up, a, b)),
                "Sd" => Some(|a, b| PotlFormula::since(Dir::Down, a, b)),
                "Su" => Some(|a, b| PotlFormula::since(Dir::Up, a, b)),
                "HUd" => Some(|a, b| PotlFormula::huntil(Dir::Down, a, b)),
                "HUu" => Some(|a, b| PotlFormula::huntil(Dir::Up, a, b)),
                "HSd" => Some(|a, b| PotlFormula::hsince(Dir::Down, a, b)),
                "HSu" => Some(|a, b| PotlFormula::hsince(Dir::Up, a, b)),
                _ => None,
            };
            if let Some(op) = op {
                self.take_word();
                let rhs = self.until_level()?;
                return Ok(op(lhs, rhs));
            }
        }
        Ok(lhs)
    }

    fn impl_level(&mut self) -> Result<PotlFormula, FormulaParseError> {
        let lhs = self.or_level()?;
        if self.eat("->") {
            let rhs = self.impl_level()?;
            return Ok(PotlFormula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or_level(&mut self) -> Result<PotlFormula, FormulaParseError> {
        let mut f = self.and_level()?;
        loop {
            self.skip_ws();
            // `|` but not `|something-else`; there is no other `|` token.
            if self.eat("|") {
                let rhs = self.and_level()?;
                f = PotlFormula::or(f, rhs);
            } else {
                return Ok(f);
            }
        }
    }

    fn and_level(&mut self) -> Result<PotlFormula, FormulaParseError> {
        let mut f = self.unary_level()?;
        loop {
            self.skip_ws();
            // Do not confuse `&` with the start of `->` handled above.
            if self.eat("&") {
                let rhs = self.unary_level()?;
                f = PotlFormula::and(f, rhs);
            } else {
                return Ok(f);
            }
        }
    }

    fn pr_set(&mut self) -> Result<PrSet, FormulaParseError> {
        if !self.eat("[") {
            return Err(self.err("expected `[` after precedence-filtered operator"));
        }
        let mut rels = Vec::new();
        loop {
            match self.peek() {
                Some(']') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => match PrecRel::from_ascii(c) {
                    Some(r) => {
                        rels.push(r);
                        self.pos += 1;
                    }
                    None => return Err(self.err("expected `<`, `=`, `>` or `]`")),
                },
                None => return Err(self.err("unterminated precedence set")),
            }
        }
        Ok(PrSet::of(&rels))
    }

    fn unary_level(&mut self) -> Result<PotlFormula, FormulaParseError> {
        self.skip_ws();
        if self.eat("~") {
            let f = self.unary_level()?;
            return Ok(PotlFormula::not(f));
        }
        if self.eat("(") {
            let f = self.until_level()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(f);
        }
        if self.peek() == Some('#') {
            self.pos += 1;
            return Ok(PotlFormula::atom("#"));
        }
        let word = match self.peek_word() {
            Some(w) => w,
            None => return Err(self.err("expected a formula")),
        };
        // Precedence-filtered primitives `N[..] B[..] CN[..] CB[..]`.
        if matches!(word, "N" | "B" | "CN" | "CB") {
            let rest = &self.input[self.pos + word.len()..];
            if rest.starts_with('[') {
                self.take_word();
                let s = self.pr_set()?;
                let arg = self.unary_level()?;
                return Ok(match word {
                    "N" => PotlFormula::next_pr(s, arg),
                    "B" => PotlFormula::back_pr(s, arg),
                    "CN" => PotlFormula::chain_next_pr(s, arg),
                    _ => PotlFormula::chain_back_pr(s, arg),
                });
            }
        }
        let prefix: Option<fn(PotlFormula) -> PotlFormula> = match word {
            "Nd" => Some(|f| PotlFormula::next(Dir::Down, f)),
            "Nu" => Some(|f| PotlFormula::next(Dir::Up, f)),
            "Bd" => Some(|f| PotlFormula::back(Dir::Down, f)),
            "Bu" => Some(|f| PotlFormula::back(Dir::Up, f)),
            "CNd" => Some(|f| PotlFormula::chain_next(Dir::Down, f)),
            "CNu" => Some(|f| PotlFormula::chain_next(Dir::Up, f)),
            "CBd" => Some(|f| PotlFormula::chain_back(Dir::Down, f)),
            "CBu" => Some(|f| PotlFormula::chain_back(Dir::Up, f)),
            "HNd" => Some(|f| PotlFormula::hnext(Dir::Down, f)),
            "HNu" => Some(|f| PotlFormula::hnext(Dir::Up, f)),
            "HBd" => Some(|f| PotlFormula::hback(Dir::Down, f)),
            "HBu" => Some(|f| PotlFormula::hback(Dir::Up, f)),
            "Fd" => Some(|f| PotlFormula::eventually(Dir::Down, f)),
            "Fu" => Some(|f| PotlFormula::eventually(Dir::Up, f)),
            "Gd" => Some(|f| PotlFormula::globally(Dir::Down, f)),
            "Gu" => Some(|f| PotlFormula::globally(Dir::Up, f)),
            "G" => Some(PotlFormula::ltl_globally),
            _ => None,
        };
        if let Some(op) = prefix {
            self.take_word();
            let arg = self.unary_level()?;
            return Ok(op(arg));
        }
        match word {
            "T" => {
                self.take_word();
                Ok(PotlFormula::True)
            }
            "F" => {
                self.take_word();
                Ok(falsum())
            }
            "CallThr" => {
                self.take_word();
                if !self.eat("(") {
                    return Err(self.err("expected `(` after CallThr"));
                }
                let f = self.until_level()?;
                if !self.eat(")") {
                    return Err(self.err("expected `)`"));
                }
                Ok(PotlFormula::call_thr(f))
            }
            "Scall" => {
                self.take_word();
                if !self.eat("(") {
                    return Err(self.err("expected `(` after Scall"));
                }
                let f = self.until_level()?;
                if !self.eat(",") {
                    return Err(self.err("expected `,` in Scall"));
                }
                let g = self.until_level()?;
                if !self.eat(")") {
                    return Err(self.err("expected `)`"));
                }
                Ok(PotlFormula::scall(f, g))
            }
            _ => {
                self.take_word();
                Ok(PotlFormula::atom(word))
            }
        }
    }
}

impl std::str::FromStr for PotlFormula {
    type Err = FormulaParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_potl(s)
    }
}

/// Helper for error messages elsewhere.
pub fn describe(f: &PotlFormula) -> String {
    fmt::format(format_args!("{}", f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(s: &str) {
        let f = parse_potl(s).unwrap();
        let printed = f.to_string();
        let g = parse_potl(&printed).unwrap();
        assert_eq!(f, g, "roundtrip of `{}` via `{}`", s, printed);
    }

    #[test]
    fn parses_published_style_formulas() {
        let f = parse_potl("G((call & pB & Scall(T,pA)) -> CallThr(T))").unwrap();
        // Shape only: globally of an implication.
        assert!(matches!(f, PotlFormula::Not(_)));
        roundtrip("Nd call");
        roundtrip("call Ud (ret & pErr)");
        roundtrip("(call | exc) Su pB");
        roundtrip("T Uu exc");
        roundtrip("HNu pErr & HBu pErr");
        roundtrip("call HUd pC");
        roundtrip("CN[<=] a | CB[>] b");
        roundtrip("N[<] a & B[<] b");
        roundtrip("~#");
    }

    #[test]
    fn precedence_is_unary_and_or_implies_until() {
        let f = parse_potl("a & b Ud c -> d").unwrap();
        match f {
            PotlFormula::Until(Dir::Down, lhs, rhs) => {
                assert_eq!(lhs.to_string(), "a & b");
                assert_eq!(rhs.to_string(), "c -> d");
            }
            other => panic!("unexpected shape {}", other),
        }
        let g = parse_potl("a Ud b Uu c").unwrap();
        match g {
            PotlFormula::Until(Dir::Down, _, rhs) => {
                assert!(matches!(*rhs, PotlFormula::Until(Dir::Up, ..)));
            }
            other => panic!("unexpected shape {}", other),
        }
    }

    #[test]
    fn filtered_primitive_equals_directional_syntax() {
        let a = parse_potl("CN[<=] x").unwrap();
        let b = PotlFormula::chain_next_pr(PrSet::YIELDS_EQUALS, PotlFormula::atom("x"));
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_potl("").is_err());
        assert!(parse_potl("a &").is_err());
        assert!(parse_potl("(a").is_err());
        assert!(parse_potl("CN[?] a").is_err());
        assert!(parse_potl("a b").is_err());
    }
}
