//! POTL formula trees: atoms, booleans, next/back and chain next/back (plain
//! and precedence-filtered), summary until/since, and hierarchical operators.

use std::collections::HashSet;
use std::fmt;

use crate::alphabet::PrecRel;

/// Direction of a POTL operator: `Down` pairs with `{<, =}` precedences,
/// `Up` with `{>, =}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    /// The precedence set this direction stands for.
    pub fn prs(self) -> PrSet {
        match self {
            Dir::Down => PrSet::YIELDS_EQUALS,
            Dir::Up => PrSet::TAKES_EQUALS,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Dir::Down => 'd',
            Dir::Up => 'u',
        }
    }
}

/// A subset of the three precedence relations, used by the filtered
/// next/back and chain next/back primitives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrSet(u8);

impl PrSet {
    pub const EMPTY: PrSet = PrSet(0);
    pub const YIELDS: PrSet = PrSet(1);
    pub const EQUALS: PrSet = PrSet(2);
    pub const TAKES: PrSet = PrSet(4);
    pub const YIELDS_EQUALS: PrSet = PrSet(3);
    pub const TAKES_EQUALS: PrSet = PrSet(6);

    pub fn of(rels: &[PrecRel]) -> PrSet {
        let mut s = 0u8;
        for r in rels {
            s |= match r {
                PrecRel::Yields => 1,
                PrecRel::Equals => 2,
                PrecRel::Takes => 4,
            };
        }
        PrSet(s)
    }

    pub fn contains(self, r: PrecRel) -> bool {
        match r {
            PrecRel::Yields => self.0 & 1 != 0,
            PrecRel::Equals => self.0 & 2 != 0,
            PrecRel::Takes => self.0 & 4 != 0,
        }
    }

    /// Admits an optional relation: an undefined precedence never matches.
    pub fn admits(self, r: Option<PrecRel>) -> bool {
        r.map_or(false, |r| self.contains(r))
    }

    pub fn rels(self) -> Vec<PrecRel> {
        [PrecRel::Yields, PrecRel::Equals, PrecRel::Takes]
            .into_iter()
            .filter(|r| self.contains(*r))
            .collect()
    }
}

impl fmt::Display for PrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in self.rels() {
            write!(f, "{}", r.ascii())?;
        }
        write!(f, "]")
    }
}

/// A POTL formula.
///
/// The `*Pr` variants are the precedence-filtered primitives: `NextPr(s, f)`
/// holds at `i` iff `f` holds at `i+1` and the precedence between `i` and
/// `i+1` lies in `s`, and similarly for the chain variants over the chain
/// relation. `ChainNextPr(YIELDS_EQUALS, f)` coincides with `ChainNext(Down, f)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PotlFormula {
    True,
    Atom(String),
    Not(Box<PotlFormula>),
    And(Box<PotlFormula>, Box<PotlFormula>),
    Or(Box<PotlFormula>, Box<PotlFormula>),
    Implies(Box<PotlFormula>, Box<PotlFormula>),
    /// `N^t`: successor step at lower-or-equal (`Down`) or higher-or-equal
    /// (`Up`) tree level.
    Next(Dir, Box<PotlFormula>),
    Back(Dir, Box<PotlFormula>),
    /// `CN^t`: jump to a future chain right-context.
    ChainNext(Dir, Box<PotlFormula>),
    /// `CB^t`: jump to a past chain left-context.
    ChainBack(Dir, Box<PotlFormula>),
    NextPr(PrSet, Box<PotlFormula>),
    BackPr(PrSet, Box<PotlFormula>),
    ChainNextPr(PrSet, Box<PotlFormula>),
    ChainBackPr(PrSet, Box<PotlFormula>),
    /// Summary until along downward/upward summary paths.
    Until(Dir, Box<PotlFormula>, Box<PotlFormula>),
    Since(Dir, Box<PotlFormula>, Box<PotlFormula>),
    /// Hierarchical next: the next inner context of the same shared chain
    /// context.
    HNext(Dir, Box<PotlFormula>),
    HBack(Dir, Box<PotlFormula>),
    HUntil(Dir, Box<PotlFormula>, Box<PotlFormula>),
    HSince(Dir, Box<PotlFormula>, Box<PotlFormula>),
}

use PotlFormula::*;

impl PotlFormula {
    pub fn atom(name: &str) -> PotlFormula {
        Atom(name.to_string())
    }

    pub fn not(f: PotlFormula) -> PotlFormula {
        Not(Box::new(f))
    }

    pub fn and(a: PotlFormula, b: PotlFormula) -> PotlFormula {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PotlFormula, b: PotlFormula) -> PotlFormula {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: PotlFormula, b: PotlFormula) -> PotlFormula {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn next(d: Dir, f: PotlFormula) -> PotlFormula {
        Next(d, Box::new(f))
    }

    pub fn back(d: Dir, f: PotlFormula) -> PotlFormula {
        Back(d, Box::new(f))
    }

    pub fn chain_next(d: Dir, f: PotlFormula) -> PotlFormula {
        ChainNext(d, Box::new(f))
    }

    pub fn chain_back(d: Dir, f: PotlFormula) -> PotlFormula {
        ChainBack(d, Box::new(f))
    }

    pub fn until(d: Dir, a: PotlFormula, b: PotlFormula) -> PotlFormula {
        Until(d, Box::new(a), Box::new(b))
    }

    pub fn since(d: Dir, a: PotlFormula, b: PotlFormula) -> PotlFormula {
        Since(d, Box::new(a), Box::new(b))
    }

    pub fn hnext(d: Dir, f: PotlFormula) -> PotlFormula {
        HNext(d, Box::new(f))
    }

    pub fn hback(d: Dir, f: PotlFormula) -> PotlFormula {
        HBack(d, Box::new(f))
    }

    pub fn huntil(d: Dir, a: PotlFormula, b: PotlFormula) -> PotlFormula {
        HUntil(d, Box::new(a), Box::new(b))
    }

    pub fn hsince(d: Dir, a: PotlFormula, b: PotlFormula) -> PotlFormula {
        HSince(d, Box::new(a), Box::new(b))
    }

    pub fn next_pr(s: PrSet, f: PotlFormula) -> PotlFormula {
        NextPr(s, Box::new(f))
    }

    pub fn back_pr(s: PrSet, f: PotlFormula) -> PotlFormula {
        BackPr(s, Box::new(f))
    }

    pub fn chain_next_pr(s: PrSet, f: PotlFormula) -> PotlFormula {
        ChainNextPr(s, Box::new(f))
    }

    pub fn chain_back_pr(s: PrSet, f: PotlFormula) -> PotlFormula {
        ChainBackPr(s, Box::new(f))
    }

    /// Summary eventually: `F^t f := T U^t f`.
    pub fn eventually(d: Dir, f: PotlFormula) -> PotlFormula {
        Self::until(d, True, f)
    }

    /// Summary globally: `G^t f := ~F^t ~f`.
    pub fn globally(d: Dir, f: PotlFormula) -> PotlFormula {
        Self::not(Self::eventually(d, Self::not(f)))
    }

    /// The LTL globally over the whole word: `G f := ~Fu (Fd ~f)`.
    pub fn ltl_globally(f: PotlFormula) -> PotlFormula {
        Self::not(Self::eventually(Dir::Up, Self::eventually(Dir::Down, Self::not(f))))
    }

    /// `CallThr(f)`: evaluated at a call, the procedure just started is
    /// terminated by an `exc` where `f` holds.
    pub fn call_thr(f: PotlFormula) -> PotlFormula {
        let body = Self::and(Self::atom("exc"), f);
        Self::or(
            Self::next(Dir::Up, body.clone()),
            Self::chain_next(Dir::Up, body),
        )
    }

    /// `Scall(f, g)`: stack inspection; `(call -> f) Sd (call & g)`.
    pub fn scall(f: PotlFormula, g: PotlFormula) -> PotlFormula {
        Self::since(
            Dir::Down,
            Self::implies(Self::atom("call"), f),
            Self::and(Self::atom("call"), g),
        )
    }

    /// The set of subformulas (including `self`), deduplicated by structural
    /// equality.
    pub fn closure(&self) -> Vec<&PotlFormula> {
        let mut seen: HashSet<&PotlFormula> = HashSet::new();
        let mut order: Vec<&PotlFormula> = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if !seen.insert(f) {
                continue;
            }
            order.push(f);
            match f {
                True | Atom(_) => {}
                Not(a) | Next(_, a) | Back(_, a) | ChainNext(_, a) | ChainBack(_, a)
                | NextPr(_, a) | BackPr(_, a) | ChainNextPr(_, a) | ChainBackPr(_, a)
                | HNext(_, a) | HBack(_, a) => stack.push(a),
                And(a, b) | Or(a, b) | Implies(a, b) | Until(_, a, b) | Since(_, a, b)
                | HUntil(_, a, b) | HSince(_, a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        order
    }

    /// Atom names mentioned anywhere in the formula.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .closure()
            .into_iter()
            .filter_map(|f| match f {
                Atom(a) => Some(a.as_str()),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

// Operator precedence levels for printing: higher binds tighter.
// 0: until/since (right associative), 1: ->, 2: |, 3: &, 4: unary/atom.
fn level(f: &PotlFormula) -> u8 {
    match f {
        Until(..) | Since(..) | HUntil(..) | HSince(..) => 0,
        Implies(..) => 1,
        Or(..) => 2,
        And(..) => 3,
        _ => 4,
    }
}

fn fmt_at(f: &PotlFormula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let l = level(f);
    let paren = l < min;
    if paren {
        write!(out, "(")?;
    }
    match f {
        True => write!(out, "T")?,
        Atom(a) => write!(out, "{}", a)?,
        Not(a) => {
            write!(out, "~")?;
            fmt_at(a, 4, out)?;
        }
        And(a, b) => {
            // Left associative: a right-nested conjunction needs parentheses.
            fmt_at(a, 3, out)?;
            write!(out, " & ")?;
            fmt_at(b, 4, out)?;
        }
        Or(a, b) => {
            fmt_at(a, 2, out)?;
            write!(out, " | ")?;
            fmt_at(b, 3, out)?;
        }
        Implies(a, b) => {
            fmt_at(a, 2, out)?;
            write!(out, " -> ")?;
            fmt_at(b, 1, out)?;
        }
        Next(d, a) => {
            write!(out, "N{} ", d.letter())?;
            fmt_at(a, 4, out)?;
        }
        Back(d, a) => {
            write!(out, "B{} ", d.letter())?;
            fmt_at(a, 4, out)?;
        }
        ChainNext(d, a) => {
            write!(out, "CN{} ", d.letter())?;
            fmt_at(a, 4, out)?;
        }
        ChainBack(d, a) => {
            write!(out, "CB{} ", d.letter())?;
            fmt_at(a, 4, out)?;
        }
        NextPr(s, a) => {
            write!(out, "N{} ", s)?;
            fmt_at(a, 4, out)?;
        }
        BackPr(s, a) => {
            write!(out, "B{} ", s)?;
            fmt_at(a, 4, out)?;
        }
        ChainNextPr(s, a) => {
            write!(out, "CN{} ", s)?;
            fmt_at(a, 4, out)?;
        }
        ChainBackPr(s, a) => {
            write!(out, "CB{} ", s)?;
            fmt_at(a, 4, out)?;
        }
        HNext(d, a) => {
            write!(out, "HN{} ", d.letter())?;
            fmt_at(a, 4, out)?;
        }
        HBack(d, a) => {
            write!(out, "HB{} ", d.letter())?;
            fmt_at(a, 4, out)?;
        }
        Until(d, a, b) => {
            fmt_at(a, 1, out)?;
            write!(out, " U{} ", d.letter())?;
            fmt_at(b, 0, out)?;
        }
        Since(d, a, b) => {
            fmt_at(a, 1, out)?;
            write!(out, " S{} ", d.letter())?;
            fmt_at(b, 0, out)?;
        }
        HUntil(d, a, b) => {
            fmt_at(a, 1, out)?;
            write!(out, " HU{} ", d.letter())?;
            fmt_at(b, 0, out)?;
        }
        HSince(d, a, b) => {
            fmt_at(a, 1, out)?;
            write!(out, " HS{} ", d.letter())?;
            fmt_at(b, 0, out)?;
        }
    }
    if paren {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for PotlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_at(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_deduplicates_subformulas() {
        let a = PotlFormula::atom("a");
        let f = PotlFormula::and(
            PotlFormula::next(Dir::Down, a.clone()),
            PotlFormula::next(Dir::Down, a.clone()),
        );
        let c = f.closure();
        assert_eq!(c.len(), 3); // f, Nd a, a
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        let f = PotlFormula::until(
            Dir::Down,
            PotlFormula::atom("call"),
            PotlFormula::and(PotlFormula::atom("ret"), PotlFormula::atom("pErr")),
        );
        assert_eq!(f.to_string(), "call Ud ret & pErr");
        let g = PotlFormula::not(PotlFormula::or(
            PotlFormula::atom("a"),
            PotlFormula::atom("b"),
        ));
        assert_eq!(g.to_string(), "~(a | b)");
    }

    #[test]
    fn pr_set_display() {
        assert_eq!(PrSet::YIELDS_EQUALS.to_string(), "[<=]");
        assert_eq!(PrSet::TAKES.to_string(), "[>]");
    }
}
