//! Linear temporal logic with past on finite words: a direct evaluator, plus
//! the translation of LTL into POTL.

use std::fmt;

use crate::potl::ast::{Dir, PotlFormula, PrSet};
use crate::potl::syntax::FormulaParseError;
use crate::words::OpWord;

/// An LTL formula with past operators, interpreted over the positions of a
/// word (delimiters included).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LtlFormula {
    True,
    Atom(String),
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Implies(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Back(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Since(Box<LtlFormula>, Box<LtlFormula>),
    Globally(Box<LtlFormula>),
}

use LtlFormula::*;

impl LtlFormula {
    pub fn atom(a: &str) -> LtlFormula {
        Atom(a.to_string())
    }

    pub fn not(f: LtlFormula) -> LtlFormula {
        Not(Box::new(f))
    }

    pub fn and(a: LtlFormula, b: LtlFormula) -> LtlFormula {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: LtlFormula, b: LtlFormula) -> LtlFormula {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: LtlFormula, b: LtlFormula) -> LtlFormula {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: LtlFormula) -> LtlFormula {
        Next(Box::new(f))
    }

    pub fn back(f: LtlFormula) -> LtlFormula {
        Back(Box::new(f))
    }

    pub fn until(a: LtlFormula, b: LtlFormula) -> LtlFormula {
        Until(Box::new(a), Box::new(b))
    }

    pub fn since(a: LtlFormula, b: LtlFormula) -> LtlFormula {
        Since(Box::new(a), Box::new(b))
    }

    pub fn globally(f: LtlFormula) -> LtlFormula {
        Globally(Box::new(f))
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(x: &LtlFormula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match x {
                True => write!(f, "T"),
                Atom(a) => write!(f, "{}", a),
                Not(a) => {
                    write!(f, "~(")?;
                    go(a, f)?;
                    write!(f, ")")
                }
                And(a, b) => bin(f, a, "&", b),
                Or(a, b) => bin(f, a, "|", b),
                Implies(a, b) => bin(f, a, "->", b),
                Next(a) => un(f, "X", a),
                Back(a) => un(f, "Y", a),
                Globally(a) => un(f, "G", a),
                Until(a, b) => bin(f, a, "U", b),
                Since(a, b) => bin(f, a, "S", b),
            }
        }
        fn bin(
            f: &mut fmt::Formatter<'_>,
            a: &LtlFormula,
            op: &str,
            b: &LtlFormula,
        ) -> fmt::Result {
            write!(f, "(")?;
            go(a, f)?;
            write!(f, " {} ", op)?;
            go(b, f)?;
            write!(f, ")")
        }
        fn un(f: &mut fmt::Formatter<'_>, op: &str, a: &LtlFormula) -> fmt::Result {
            write!(f, "{} (", op)?;
            go(a, f)?;
            write!(f, ")")
        }
        go(self, f)
    }
}

/// Fully parenthesized-friendly parser for the small LTL syntax:
/// `X`, `Y`, `G` prefix; `U`, `S` infix (loosest, right associative);
/// `~ & | ->`; `T`, `F`; atoms.
pub fn parse_ltl(input: &str) -> Result<LtlFormula, FormulaParseError> {
    let mut p = LtlParser { input, pos: 0 };
    let f = p.until_level()?;
    p.skip_ws();
    if p.pos < p.input.len() {
        return Err(FormulaParseError { pos: p.pos, msg: "unexpected trailing input".into() });
    }
    Ok(f)
}

struct LtlParser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> LtlParser<'a> {
    fn err(&self, msg: &str) -> FormulaParseError {
        FormulaParseError { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.input[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
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

    fn peek_word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.input[self.pos..];
        let end = rest
            .char_indices()
            .find(|(_, c)| !c.is_ascii_alphanumeric() && *c != '_')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        (end > 0).then(|| &rest[..end])
    }

    fn until_level(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let lhs = self.impl_level()?;
        if let Some(w) = self.peek_word() {
            if w == "U" || w == "S" {
                self.pos += 1;
                let rhs = self.until_level()?;
                return Ok(if w == "U" {
                    LtlFormula::until(lhs, rhs)
                } else {
                    LtlFormula::since(lhs, rhs)
                });
            }
        }
        Ok(lhs)
    }

    fn impl_level(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let lhs = self.or_level()?;
        if self.eat("->") {
            let rhs = self.impl_level()?;
            return Ok(LtlFormula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or_level(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let mut f = self.and_level()?;
        while self.eat("|") {
            f = LtlFormula::or(f, self.and_level()?);
        }
        Ok(f)
    }

    fn and_level(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let mut f = self.unary_level()?;
        while self.eat("&") {
            f = LtlFormula::and(f, self.unary_level()?);
        }
        Ok(f)
    }

    fn unary_level(&mut self) -> Result<LtlFormula, FormulaParseError> {
        self.skip_ws();
        if self.eat("~") {
            return Ok(LtlFormula::not(self.unary_level()?));
        }
        if self.eat("(") {
            let f = self.until_level()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(f);
        }
        if self.input[self.pos..].starts_with('#') {
            self.pos += 1;
            return Ok(LtlFormula::atom("#"));
        }
        let w = self.peek_word().ok_or_else(|| self.err("expected a formula"))?;
        match w {
            "T" => {
                self.pos += 1;
                Ok(True)
            }
            "F" => {
                self.pos += 1;
                Ok(LtlFormula::not(True))
            }
            "X" | "Y" | "G" => {
                self.pos += 1;
                let arg = self.unary_level()?;
                Ok(match w {
                    "X" => LtlFormula::next(arg),
                    "Y" => LtlFormula::back(arg),
                    _ => LtlFormula::globally(arg),
                })
            }
            _ => {
                self.pos += w.len();
                Ok(Atom(w.to_string()))
            }
        }
    }
}

/// Direct dynamic-programming LTL evaluation over all positions of `w`
/// (delimiters included). This is the textbook semantics on the linear order,
/// independent of any chain structure; it serves as the oracle for the POTL
/// translation.
pub fn ltl_eval(f: &LtlFormula, w: &OpWord) -> Vec<bool> {
    let n = w.universe_len();
    match f {
        True => vec![true; n],
        Atom(a) => (0..n).map(|i| w.holds(a, i)).collect(),
        Not(a) => ltl_eval(a, w).into_iter().map(|b| !b).collect(),
        And(a, b) => zip(ltl_eval(a, w), ltl_eval(b, w), |x, y| x && y),
        Or(a, b) => zip(ltl_eval(a, w), ltl_eval(b, w), |x, y| x || y),
        Implies(a, b) => zip(ltl_eval(a, w), ltl_eval(b, w), |x, y| !x || y),
        Next(a) => {
            let sa = ltl_eval(a, w);
            (0..n).map(|i| i + 1 < n && sa[i + 1]).collect()
        }
        Back(a) => {
            let sa = ltl_eval(a, w);
            (0..n).map(|i| i > 0 && sa[i - 1]).collect()
        }
        Globally(a) => {
            let sa = ltl_eval(a, w);
            let mut out = vec![false; n];
            let mut all = true;
            for i in (0..n).rev() {
                all = all && sa[i];
                out[i] = all;
            }
            out
        }
        Until(a, b) => {
            let (sa, sb) = (ltl_eval(a, w), ltl_eval(b, w));
            let mut out = vec![false; n];
            for i in (0..n).rev() {
                out[i] = sb[i] || (sa[i] && i + 1 < n && out[i + 1]);
            }
            out
        }
        Since(a, b) => {
            let (sa, sb) = (ltl_eval(a, w), ltl_eval(b, w));
            let mut out = vec![false; n];
            for i in 0..n {
                out[i] = sb[i] || (sa[i] && i > 0 && out[i - 1]);
            }
            out
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// Translates an LTL formula into POTL.
///
/// Next becomes the disjunction of the two directional nexts, Globally the
/// nested summary-eventually form, and Until/Since the concatenation of an
/// upward and a downward summary operator whose operands carry the guards
/// `alpha`/`beta` forcing the other formula to hold inside every chain body
/// the summary paths skip.
pub fn translate_ltl(f: &LtlFormula) -> PotlFormula {
    match f {
        True => PotlFormula::True,
        Atom(a) => PotlFormula::atom(a),
        Not(a) => PotlFormula::not(translate_ltl(a)),
        And(a, b) => PotlFormula::and(translate_ltl(a), translate_ltl(b)),
        Or(a, b) => PotlFormula::or(translate_ltl(a), translate_ltl(b)),
        Implies(a, b) => PotlFormula::implies(translate_ltl(a), translate_ltl(b)),
        Next(a) => {
            let t = translate_ltl(a);
            PotlFormula::or(
                PotlFormula::next(Dir::Down, t.clone()),
                PotlFormula::next(Dir::Up, t),
            )
        }
        Back(a) => {
            let t = translate_ltl(a);
            PotlFormula::or(
                PotlFormula::back(Dir::Down, t.clone()),
                PotlFormula::back(Dir::Up, t),
            )
        }
        Globally(a) => PotlFormula::ltl_globally(translate_ltl(a)),
        Until(a, b) => {
            let phi = translate_ltl(a);
            let psi = translate_ltl(b);
            // Down half: a DS until whose positions all carry the `beta`
            // guard; every one of them is the arrival of a down jump (or the
            // guard is vacuous), so the coverage stays inside the path span.
            let down = PotlFormula::until(
                Dir::Down,
                PotlFormula::and(phi.clone(), beta(&phi)),
                PotlFormula::and(psi.clone(), beta(&phi)),
            );
            // Junction between the halves: it may carry a chain back context
            // whose body lies before the evaluation position, so its own
            // downward step is unrolled without the guard; jumps departing
            // from it are covered by `beta` at their arrival.
            let junction = PotlFormula::or(
                psi.clone(),
                PotlFormula::and(
                    phi.clone(),
                    PotlFormula::or(
                        PotlFormula::next(Dir::Down, down.clone()),
                        PotlFormula::chain_next(Dir::Down, down),
                    ),
                ),
            );
            PotlFormula::or(
                psi,
                PotlFormula::until(
                    Dir::Up,
                    PotlFormula::and(phi.clone(), alpha(&phi)),
                    junction,
                ),
            )
        }
        Since(a, b) => {
            let phi = translate_ltl(a);
            let psi = translate_ltl(b);
            // Reading the linear path backward from the evaluation position:
            // first undo the descent (a DS since guarded by `beta`), then the
            // climb (an US since guarded by `alpha`), with the junction's own
            // backward step unrolled unguarded.
            let up = PotlFormula::since(
                Dir::Up,
                PotlFormula::and(phi.clone(), alpha(&phi)),
                PotlFormula::and(psi.clone(), alpha(&phi)),
            );
            let junction = PotlFormula::or(
                psi.clone(),
                PotlFormula::and(
                    phi.clone(),
                    PotlFormula::or(
                        PotlFormula::back(Dir::Up, up.clone()),
                        PotlFormula::chain_back(Dir::Up, up),
                    ),
                ),
            );
            PotlFormula::or(
                psi,
                PotlFormula::since(
                    Dir::Down,
                    PotlFormula::and(phi.clone(), beta(&phi)),
                    junction,
                ),
            )
        }
    }
}

/// `alpha(phi)`: when a position opens an upward chain, the chain body to its
/// right (the subtree skipped by the jump the upward path is then forced to
/// take) must satisfy `phi` throughout; the body is swept by a downward
/// eventually entered through the successor or through inner `<`-chains.
fn alpha(phi: &PotlFormula) -> PotlFormula {
    let bad = PotlFormula::until(Dir::Down, PotlFormula::True, PotlFormula::not(phi.clone()));
    PotlFormula::implies(
        PotlFormula::chain_next(Dir::Up, PotlFormula::True),
        PotlFormula::not(PotlFormula::or(
            PotlFormula::next(Dir::Down, bad.clone()),
            PotlFormula::chain_next_pr(PrSet::YIELDS, bad),
        )),
    )
}

/// `beta(phi)`: when a position closes a downward chain, the chain body to
/// its left (the subtree skipped by the jump that arrived here) must satisfy
/// `phi` throughout; swept backward by an upward since entered through the
/// predecessor or through inner `>`-chains.
fn beta(phi: &PotlFormula) -> PotlFormula {
    let bad = PotlFormula::since(Dir::Up, PotlFormula::True, PotlFormula::not(phi.clone()));
    PotlFormula::implies(
        PotlFormula::chain_back(Dir::Down, PotlFormula::True),
        PotlFormula::not(PotlFormula::or(
            PotlFormula::back(Dir::Up, bad.clone()),
            PotlFormula::chain_back_pr(PrSet::TAKES, bad),
        )),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::builtin_mcall;
    use crate::parser::parse;
    use crate::potl::eval::eval;
    use crate::words::{load_word, random_compatible_word};
    use std::sync::Arc;

    #[test]
    fn next_translation_shape() {
        let f = parse_ltl("X a").unwrap();
        let t = translate_ltl(&f);
        assert_eq!(t.to_string(), "Nd a | Nu a");
    }

    #[test]
    fn globally_translation_shape() {
        let f = parse_ltl("G a").unwrap();
        let t = translate_ltl(&f);
        assert_eq!(t.to_string(), "~(T Uu T Ud ~a)");
    }

    #[test]
    fn translated_ltl_agrees_with_direct_evaluation() {
        let alpha = Arc::new(builtin_mcall());
        let formulas = [
            "X call",
            "Y call",
            "call U ret",
            "ret S call",
            "G (call -> X T)",
            "(T U exc) -> (T U han)",
            "X X pErr",
            "T U (ret & Y call)",
        ];
        for seed in 0..30u64 {
            let w = random_compatible_word(&alpha, 10, seed).unwrap();
            let cs = parse(&w).unwrap().chains;
            for fs in formulas {
                let lf = parse_ltl(fs).unwrap();
                let oracle = ltl_eval(&lf, &w);
                let t = translate_ltl(&lf);
                let r = eval(&t, &w, &cs);
                for i in 0..w.universe_len() {
                    assert_eq!(
                        r.holds(&t, i),
                        oracle[i],
                        "formula `{}` at position {} of `{}`",
                        fs,
                        i,
                        w.serialize()
                    );
                }
            }
        }
    }

    #[test]
    fn until_junction_with_foreign_back_chain() {
        // The up/down junction of the until path (position 4, with the
        // back-chain (1,4) whose body lies before the evaluation positions
        // 3 and 4) must not force the operand inside that body.
        let alpha = Arc::new(builtin_mcall());
        let w = load_word(&alpha, "call call ret call{pA} call{pErr} ret ret").unwrap();
        let cs = parse(&w).unwrap().chains;
        let lf = parse_ltl("(ret | pA) U pErr").unwrap();
        let t = translate_ltl(&lf);
        let r = eval(&t, &w, &cs);
        let oracle = ltl_eval(&lf, &w);
        for i in 1..=w.body_len() {
            assert_eq!(r.holds(&t, i), oracle[i], "position {}", i);
        }
        assert!(r.holds(&t, 3) && r.holds(&t, 4) && r.holds(&t, 5));
    }

    #[test]
    fn until_on_the_example_word() {
        let alpha = Arc::new(builtin_mcall());
        let w = load_word(
            &alpha,
            "call{pA} han call{pB} call{pC} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}",
        )
        .unwrap();
        let cs = parse(&w).unwrap().chains;
        let lf = parse_ltl("call U han").unwrap();
        let t = translate_ltl(&lf);
        let r = eval(&t, &w, &cs);
        let oracle = ltl_eval(&lf, &w);
        for i in 1..=w.body_len() {
            assert_eq!(r.holds(&t, i), oracle[i], "position {}", i);
        }
    }
}
