//! The strict until/since tree logic on the child and sibling axes, its
//! evaluator over unranked ordered trees, and its translation into POTL.

use std::collections::HashMap;
use std::fmt;

use crate::potl::ast::{Dir, PotlFormula, PrSet};
use crate::potl::syntax::FormulaParseError;
use crate::uot::{Uot, UotNodeId};

/// The four tree axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// `Dn`: proper descendants along child paths.
    Down,
    /// `Up`: proper ancestors.
    Up,
    /// `Rt`: siblings strictly to the right.
    Right,
    /// `Lt`: siblings strictly to the left.
    Left,
}

impl Axis {
    fn token(self) -> &'static str {
        match self {
            Axis::Down => "Dn",
            Axis::Up => "Up",
            Axis::Right => "Rt",
            Axis::Left => "Lt",
        }
    }
}

/// A strict until/since formula over trees: `Axis(phi, psi)` holds at a node
/// when some node strictly along the axis satisfies `psi` and every node
/// strictly between (on the axis chain) satisfies `phi`. The evaluated node
/// itself is never part of the path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum XuntilFormula {
    True,
    Atom(String),
    Not(Box<XuntilFormula>),
    And(Box<XuntilFormula>, Box<XuntilFormula>),
    Until(Axis, Box<XuntilFormula>, Box<XuntilFormula>),
}

use XuntilFormula::*;

impl XuntilFormula {
    pub fn atom(a: &str) -> XuntilFormula {
        Atom(a.to_string())
    }

    pub fn not(f: XuntilFormula) -> XuntilFormula {
        Not(Box::new(f))
    }

    pub fn and(a: XuntilFormula, b: XuntilFormula) -> XuntilFormula {
        And(Box::new(a), Box::new(b))
    }

    pub fn until(axis: Axis, a: XuntilFormula, b: XuntilFormula) -> XuntilFormula {
        Until(axis, Box::new(a), Box::new(b))
    }

    /// Strict next along an axis: `Axis(~T, f)` reaches exactly the immediate
    /// axis successors.
    pub fn next(axis: Axis, f: XuntilFormula) -> XuntilFormula {
        Self::until(axis, Self::not(True), f)
    }
}

impl fmt::Display for XuntilFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            True => write!(f, "T"),
            Atom(a) => write!(f, "{}", a),
            Not(a) => {
                write!(f, "~")?;
                match a.as_ref() {
                    And(..) => write!(f, "({})", a),
                    _ => write!(f, "{}", a),
                }
            }
            And(a, b) => {
                let wrap = |x: &XuntilFormula, f: &mut fmt::Formatter<'_>| match x {
                    And(..) => write!(f, "({})", x),
                    _ => write!(f, "{}", x),
                };
                wrap(a, f)?;
                write!(f, " & ")?;
                wrap(b, f)
            }
            Until(axis, a, b) => write!(f, "{}({}, {})", axis.token(), a, b),
        }
    }
}

/// Parses `Dn(phi,psi) Up(...) Rt(...) Lt(...)`, `~`, `&`, `T`, atoms.
pub fn parse_xuntil(input: &str) -> Result<XuntilFormula, FormulaParseError> {
    let mut p = XParser { input, pos: 0 };
    let f = p.and_level()?;
    p.skip_ws();
    if p.pos < p.input.len() {
        return Err(FormulaParseError { pos: p.pos, msg: "unexpected trailing input".into() });
    }
    Ok(f)
}

struct XParser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> XParser<'a> {
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

    fn and_level(&mut self) -> Result<XuntilFormula, FormulaParseError> {
        let mut f = self.unary_level()?;
        while self.eat("&") {
            f = XuntilFormula::and(f, self.unary_level()?);
        }
        Ok(f)
    }

    fn unary_level(&mut self) -> Result<XuntilFormula, FormulaParseError> {
        self.skip_ws();
        if self.eat("~") {
            return Ok(XuntilFormula::not(self.unary_level()?));
        }
        if self.eat("(") {
            let f = self.and_level()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(f);
        }
        if self.input[self.pos..].starts_with('#') {
            self.pos += 1;
            return Ok(XuntilFormula::atom("#"));
        }
        let w = self.peek_word().ok_or_else(|| self.err("expected a formula"))?;
        let axis = match w {
            "Dn" => Some(Axis::Down),
            "Up" => Some(Axis::Up),
            "Rt" => Some(Axis::Right),
            "Lt" => Some(Axis::Left),
            _ => None,
        };
        if let Some(axis) = axis {
            self.pos += w.len();
            if !self.eat("(") {
                return Err(self.err("expected `(` after axis operator"));
            }
            let a = self.and_level()?;
            if !self.eat(",") {
                return Err(self.err("expected `,`"));
            }
            let b = self.and_level()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(XuntilFormula::until(axis, a, b));
        }
        if w == "T" {
            self.pos += 1;
            return Ok(True);
        }
        self.pos += w.len();
        Ok(Atom(w.to_string()))
    }
}

impl std::str::FromStr for XuntilFormula {
    type Err = FormulaParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_xuntil(s)
    }
}

/// Per-subformula truth sets over the nodes of one tree.
pub struct XEvalResult {
    sets: HashMap<XuntilFormula, Vec<bool>>,
}

impl XEvalResult {
    pub fn holds(&self, f: &XuntilFormula, node: UotNodeId) -> bool {
        self.sets[f][node]
    }

    pub fn nodes_of(&self, f: &XuntilFormula, t: &Uot) -> Vec<UotNodeId> {
        (0..t.len()).filter(|&n| self.sets[f][n]).collect()
    }
}

/// Evaluates a formula on every node of the tree.
///
/// The downward axis is computed by upward propagation over children (a
/// memoized sweep instead of path enumeration, since child paths branch);
/// sibling axes by scans over each sibling run; the upward axis by walking
/// parents.
pub fn xeval(f: &XuntilFormula, t: &Uot) -> XEvalResult {
    let mut sets = HashMap::new();
    eval_into(f, t, &mut sets);
    XEvalResult { sets }
}

fn eval_into(f: &XuntilFormula, t: &Uot, sets: &mut HashMap<XuntilFormula, Vec<bool>>) {
    if sets.contains_key(f) {
        return;
    }
    let n = t.len();
    let set: Vec<bool> = match f {
        True => vec![true; n],
        Atom(a) => (0..n)
            .map(|id| {
                let ls = t.node(id).label;
                let alpha = &t.alphabet;
                if let Some(sid) = alpha.struct_id(a) {
                    ls.structural == sid
                } else if let Some(nid) = alpha.normal_id(a) {
                    ls.has_normal(nid)
                } else {
                    a == "#" && ls.is_delimiter()
                }
            })
            .collect(),
        Not(a) => {
            eval_into(a, t, sets);
            sets[a.as_ref()].iter().map(|b| !b).collect()
        }
        And(a, b) => {
            eval_into(a, t, sets);
            eval_into(b, t, sets);
            let (sa, sb) = (&sets[a.as_ref()], &sets[b.as_ref()]);
            (0..n).map(|i| sa[i] && sb[i]).collect()
        }
        Until(axis, a, b) => {
            eval_into(a, t, sets);
            eval_into(b, t, sets);
            let (sa, sb) = (&sets[a.as_ref()], &sets[b.as_ref()]);
            match axis {
                Axis::Down => {
                    // out[s] = exists child c: psi(c) \/ (phi(c) /\ out[c]);
                    // children have larger preorder ids than their parent, so
                    // one reverse sweep suffices.
                    let mut out = vec![false; n];
                    for id in (0..n).rev() {
                        out[id] = t
                            .node(id)
                            .children
                            .iter()
                            .any(|&c| sb[c] || (sa[c] && out[c]));
                    }
                    out
                }
                Axis::Up => {
                    let mut out = vec![false; n];
                    for id in 0..n {
                        if let Some(p) = t.node(id).parent {
                            out[id] = sb[p] || (sa[p] && out[p]);
                        }
                    }
                    out
                }
                Axis::Right => {
                    let mut out = vec![false; n];
                    for (_, node) in t.nodes() {
                        for w in node.children.windows(2).rev() {
                            let (cur, next) = (w[0], w[1]);
                            out[cur] = sb[next] || (sa[next] && out[next]);
                        }
                    }
                    out
                }
                Axis::Left => {
                    let mut out = vec![false; n];
                    for (_, node) in t.nodes() {
                        for w in node.children.windows(2) {
                            let (prev, cur) = (w[0], w[1]);
                            out[cur] = sb[prev] || (sa[prev] && out[prev]);
                        }
                    }
                    out
                }
            }
        }
    };
    sets.insert(f.clone(), set);
}

/// Translates a tree-logic formula into POTL, position-for-position through
/// the word/tree isomorphism: descendant and ancestor axes become downward
/// summary operators entered by a next/chain-next step; the sibling axes
/// split into four cases on how the evaluated node and the path end relate to
/// their parent (leftmost child or not, rightmost `=`-child or not), built
/// from the hierarchical operators and the precedence-filtered primitives.
pub fn iota(f: &XuntilFormula) -> PotlFormula {
    use PotlFormula as P;
    match f {
        True => P::True,
        Atom(a) => P::atom(a),
        Not(a) => P::not(iota(a)),
        And(a, b) => P::and(iota(a), iota(b)),
        Until(Axis::Down, a, b) => {
            let (pa, pb) = (iota(a), iota(b));
            let du = P::until(Dir::Down, pa, pb);
            P::or(
                P::next(Dir::Down, du.clone()),
                P::chain_next(Dir::Down, du),
            )
        }
        Until(Axis::Up, a, b) => {
            let (pa, pb) = (iota(a), iota(b));
            let ds = P::since(Dir::Down, pa, pb);
            P::or(
                P::back(Dir::Down, ds.clone()),
                P::chain_back(Dir::Down, ds),
            )
        }
        Until(Axis::Right, a, b) => {
            let (pa, pb) = (iota(a), iota(b));
            let hu = P::huntil(Dir::Up, pa.clone(), pb.clone());
            let not_phi_up =
                P::hnext(Dir::Up, P::huntil(Dir::Up, P::True, P::not(pa.clone())));
            let case1 = P::hnext(Dir::Up, hu);
            let case2 = P::and(
                P::not(not_phi_up),
                P::chain_back_pr(PrSet::YIELDS, P::chain_next_pr(PrSet::EQUALS, pb.clone())),
            );
            let case3 = P::back_pr(
                PrSet::YIELDS,
                P::chain_next_pr(
                    PrSet::YIELDS,
                    P::and(
                        pb.clone(),
                        P::not(P::hback(
                            Dir::Up,
                            P::hsince(Dir::Up, P::True, P::not(pa.clone())),
                        )),
                    ),
                ),
            );
            let case4 = P::back_pr(
                PrSet::YIELDS,
                P::and(
                    P::chain_next_pr(PrSet::EQUALS, pb),
                    P::not(P::chain_next_pr(PrSet::YIELDS, P::not(pa))),
                ),
            );
            P::or(P::or(case1, case2), P::or(case3, case4))
        }
        Until(Axis::Left, a, b) => {
            let (pa, pb) = (iota(a), iota(b));
            let hs = P::hsince(Dir::Up, pa.clone(), pb.clone());
            let case1 = P::hback(Dir::Up, hs.clone());
            let case2 = P::chain_back_pr(
                PrSet::EQUALS,
                P::chain_next_pr(
                    PrSet::YIELDS,
                    P::and(P::not(P::hnext(Dir::Up, P::True)), hs),
                ),
            );
            let case3 = P::and(
                P::chain_back_pr(PrSet::YIELDS, P::next_pr(PrSet::YIELDS, pb.clone())),
                P::not(P::hback(
                    Dir::Up,
                    P::hsince(Dir::Up, P::True, P::not(pa.clone())),
                )),
            );
            let case4 = P::chain_back_pr(
                PrSet::EQUALS,
                P::and(
                    P::next_pr(PrSet::YIELDS, pb),
                    P::not(P::chain_next_pr(PrSet::YIELDS, P::not(pa))),
                ),
            );
            P::or(P::or(case1, case2), P::or(case3, case4))
        }
    }
}
