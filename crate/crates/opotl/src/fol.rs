//! First-order logic over OP words, restricted to the three variables
//! `x, y, z`: a brute-force Tarskian evaluator and the syntax-directed
//! translation of POTL into FOL.
//!
//! The chain relation and the precedence atoms are primitive here (resolved
//! through the chain set and the matrix, not encoded), which keeps this
//! evaluator independent enough from the POTL labeling evaluator to serve as
//! its oracle: the two share only the parser's output.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::alphabet::{OpAlphabet, PrecRel};
use crate::parser::ChainSet;
use crate::potl::ast::{Dir, PotlFormula, PrSet};
use crate::words::OpWord;

/// The three first-order variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
}

pub const VARS: [Var; 3] = [Var::X, Var::Y, Var::Z];

impl Var {
    fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

/// A first-order formula over OP words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FoFormula {
    True,
    /// Monadic proposition atom `p(v)`.
    Atom(String, Var),
    Lt(Var, Var),
    Eq(Var, Var),
    /// Derived successor relation, kept primitive for readability.
    Succ(Var, Var),
    /// The chain relation `χ(v, w)`.
    Chain(Var, Var),
    /// Precedence atom `v π w`.
    Pr(PrecRel, Var, Var),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Exists(Var, Box<FoFormula>),
    Forall(Var, Box<FoFormula>),
}

use FoFormula::*;

impl FoFormula {
    pub fn not(f: FoFormula) -> FoFormula {
        Not(Box::new(f))
    }

    pub fn and(a: FoFormula, b: FoFormula) -> FoFormula {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FoFormula, b: FoFormula) -> FoFormula {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: FoFormula, b: FoFormula) -> FoFormula {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: Var, f: FoFormula) -> FoFormula {
        Exists(v, Box::new(f))
    }

    pub fn forall(v: Var, f: FoFormula) -> FoFormula {
        Forall(v, Box::new(f))
    }

    pub fn conj(fs: impl IntoIterator<Item = FoFormula>) -> FoFormula {
        let mut it = fs.into_iter();
        let first = it.next().expect("non-empty conjunction");
        it.fold(first, FoFormula::and)
    }

    pub fn disj(fs: impl IntoIterator<Item = FoFormula>) -> FoFormula {
        let mut it = fs.into_iter();
        match it.next() {
            None => FoFormula::not(True),
            Some(first) => it.fold(first, FoFormula::or),
        }
    }

    /// `v <= w` as `v < w \/ v = w`.
    pub fn le(v: Var, w: Var) -> FoFormula {
        FoFormula::or(Lt(v, w), Eq(v, w))
    }

    /// All variables occurring anywhere (free or bound).
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = [false; 3];
        fn walk(f: &FoFormula, seen: &mut [bool; 3]) {
            match f {
                True => {}
                Atom(_, v) => seen[v.index()] = true,
                Lt(v, w) | Eq(v, w) | Succ(v, w) | Chain(v, w) | Pr(_, v, w) => {
                    seen[v.index()] = true;
                    seen[w.index()] = true;
                }
                Not(a) => walk(a, seen),
                And(a, b) | Or(a, b) | Implies(a, b) => {
                    walk(a, seen);
                    walk(b, seen);
                }
                Exists(v, a) | Forall(v, a) => {
                    seen[v.index()] = true;
                    walk(a, seen);
                }
            }
        }
        walk(self, &mut seen);
        VARS.into_iter().filter(|v| seen[v.index()]).collect()
    }

    /// Number of distinct variables used; at most 3 by construction.
    pub fn distinct_variables(&self) -> usize {
        self.variables().len()
    }

    /// Free variables.
    pub fn free_variables(&self) -> Vec<Var> {
        fn walk(f: &FoFormula, bound: [bool; 3], free: &mut [bool; 3]) {
            match f {
                True => {}
                Atom(_, v) => {
                    if !bound[v.index()] {
                        free[v.index()] = true;
                    }
                }
                Lt(v, w) | Eq(v, w) | Succ(v, w) | Chain(v, w) | Pr(_, v, w) => {
                    for u in [v, w] {
                        if !bound[u.index()] {
                            free[u.index()] = true;
                        }
                    }
                }
                Not(a) => walk(a, bound, free),
                And(a, b) | Or(a, b) | Implies(a, b) => {
                    walk(a, bound, free);
                    walk(b, bound, free);
                }
                Exists(v, a) | Forall(v, a) => {
                    let mut b2 = bound;
                    b2[v.index()] = true;
                    walk(a, b2, free);
                }
            }
        }
        let mut free = [false; 3];
        walk(self, [false; 3], &mut free);
        VARS.into_iter().filter(|v| free[v.index()]).collect()
    }

    /// Maximum quantifier nesting depth.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            True | Atom(..) | Lt(..) | Eq(..) | Succ(..) | Chain(..) | Pr(..) => 0,
            Not(a) => a.quantifier_depth(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Exists(_, a) | Forall(_, a) => 1 + a.quantifier_depth(),
        }
    }

    /// Applies a permutation of the three variables everywhere (free and
    /// bound occurrences); a pure renaming that preserves semantics modulo
    /// the same permutation of the assignment.
    pub fn permute_variables(&self, perm: impl Fn(Var) -> Var + Copy) -> FoFormula {
        match self {
            True => True,
            Atom(p, v) => Atom(p.clone(), perm(*v)),
            Lt(v, w) => Lt(perm(*v), perm(*w)),
            Eq(v, w) => Eq(perm(*v), perm(*w)),
            Succ(v, w) => Succ(perm(*v), perm(*w)),
            Chain(v, w) => Chain(perm(*v), perm(*w)),
            Pr(r, v, w) => Pr(*r, perm(*v), perm(*w)),
            Not(a) => FoFormula::not(a.permute_variables(perm)),
            And(a, b) => FoFormula::and(a.permute_variables(perm), b.permute_variables(perm)),
            Or(a, b) => FoFormula::or(a.permute_variables(perm), b.permute_variables(perm)),
            Implies(a, b) => {
                FoFormula::implies(a.permute_variables(perm), b.permute_variables(perm))
            }
            Exists(v, a) => FoFormula::exists(perm(*v), a.permute_variables(perm)),
            Forall(v, a) => FoFormula::forall(perm(*v), a.permute_variables(perm)),
        }
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            True => write!(f, "true"),
            Atom(p, v) => write!(f, "({} {})", p, v.name()),
            Lt(v, w) => write!(f, "(< {} {})", v.name(), w.name()),
            Eq(v, w) => write!(f, "(= {} {})", v.name(), w.name()),
            Succ(v, w) => write!(f, "(succ {} {})", v.name(), w.name()),
            Chain(v, w) => write!(f, "(chain {} {})", v.name(), w.name()),
            Pr(r, v, w) => {
                let name = match r {
                    PrecRel::Yields => "yields",
                    PrecRel::Equals => "eqprec",
                    PrecRel::Takes => "takes",
                };
                write!(f, "({} {} {})", name, v.name(), w.name())
            }
            Not(a) => write!(f, "(not {})", a),
            And(a, b) => write!(f, "(and {} {})", a, b),
            Or(a, b) => write!(f, "(or {} {})", a, b),
            Implies(a, b) => write!(f, "(implies {} {})", a, b),
            Exists(v, a) => write!(f, "(exists {} {})", v.name(), a),
            Forall(v, a) => write!(f, "(forall {} {})", v.name(), a),
        }
    }
}

/// A partial assignment of the three variables to word positions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assignment {
    slots: [Option<usize>; 3],
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, v: Var, pos: usize) -> Assignment {
        self.slots[v.index()] = Some(pos);
        self
    }

    pub fn x(pos: usize) -> Assignment {
        Assignment::new().with(Var::X, pos)
    }

    pub fn get(&self, v: Var) -> Option<usize> {
        self.slots[v.index()]
    }
}

/// Resource caps for the exhaustive evaluator, which is exponential in
/// quantifier depth without memoization and still heavy with it.
#[derive(Debug, Clone, Copy)]
pub struct FoLimits {
    pub max_universe: usize,
    pub max_quantifier_depth: usize,
}

impl Default for FoLimits {
    fn default() -> FoLimits {
        FoLimits { max_universe: 16, max_quantifier_depth: 8 }
    }
}

impl FoLimits {
    /// Limits suitable for the translation cross-check suites, whose emitted
    /// formulas nest far more quantifiers than hand-written ones.
    pub fn generous() -> FoLimits {
        FoLimits { max_universe: 24, max_quantifier_depth: 64 }
    }
}

#[derive(Debug, Error)]
pub enum FoError {
    #[error("unbound variable {0:?}")]
    UnboundVariable(Var),
    #[error("word has {len} positions, exceeding the evaluator cap {cap}")]
    WordTooLarge { len: usize, cap: usize },
    #[error("formula nests {depth} quantifiers, exceeding the evaluator cap {cap}")]
    QuantifierTooDeep { depth: usize, cap: usize },
}

/// Evaluates `f` under `env` with the default [`FoLimits`].
pub fn fo_eval(
    f: &FoFormula,
    w: &OpWord,
    cs: &ChainSet,
    env: &Assignment,
) -> Result<bool, FoError> {
    fo_eval_with_limits(f, w, cs, env, FoLimits::default())
}

/// Standard Tarskian evaluation by exhaustive quantifier enumeration over the
/// whole position universe (delimiters included), memoized per subformula on
/// the assignment restricted to its free variables.
pub fn fo_eval_with_limits(
    f: &FoFormula,
    w: &OpWord,
    cs: &ChainSet,
    env: &Assignment,
    limits: FoLimits,
) -> Result<bool, FoError> {
    let n = w.universe_len();
    if n > limits.max_universe {
        return Err(FoError::WordTooLarge { len: n, cap: limits.max_universe });
    }
    let depth = f.quantifier_depth();
    if depth > limits.max_quantifier_depth {
        return Err(FoError::QuantifierTooDeep { depth, cap: limits.max_quantifier_depth });
    }
    for v in f.free_variables() {
        if env.get(v).is_none() {
            return Err(FoError::UnboundVariable(v));
        }
    }
    let mut arena = Arena { nodes: Vec::new(), free: Vec::new() };
    let root = arena.intern(f);
    let mut ev = Evaluator {
        arena: &arena,
        w,
        cs,
        memo: vec![HashMap::new(); arena.nodes.len()],
    };
    Ok(ev.eval(root, env.slots))
}

enum Node<'f> {
    Leaf(&'f FoFormula),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Exists(Var, usize),
    Forall(Var, usize),
}

struct Arena<'f> {
    nodes: Vec<Node<'f>>,
    free: Vec<[bool; 3]>,
}

impl<'f> Arena<'f> {
    fn intern(&mut self, f: &'f FoFormula) -> usize {
        let node = match f {
            True | Atom(..) | Lt(..) | Eq(..) | Succ(..) | Chain(..) | Pr(..) => Node::Leaf(f),
            Not(a) => Node::Not(self.intern(a)),
            And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Implies(a, b) => Node::Implies(self.intern(a), self.intern(b)),
            Exists(v, a) => Node::Exists(*v, self.intern(a)),
            Forall(v, a) => Node::Forall(*v, self.intern(a)),
        };
        let free = match &node {
            Node::Leaf(_) => {
                let mut fr = [false; 3];
                for v in f.free_variables() {
                    fr[v.index()] = true;
                }
                fr
            }
            Node::Not(a) => self.free[*a],
            Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
                let (fa, fb) = (self.free[*a], self.free[*b]);
                [fa[0] || fb[0], fa[1] || fb[1], fa[2] || fb[2]]
            }
            Node::Exists(v, a) | Node::Forall(v, a) => {
                let mut fr = self.free[*a];
                fr[v.index()] = false;
                fr
            }
        };
        self.nodes.push(node);
        self.free.push(free);
        self.nodes.len() - 1
    }
}

struct Evaluator<'a, 'f> {
    arena: &'a Arena<'f>,
    w: &'a OpWord,
    cs: &'a ChainSet,
    memo: Vec<HashMap<[Option<usize>; 3], bool>>,
}

impl<'a, 'f> Evaluator<'a, 'f> {
    fn eval(&mut self, node: usize, env: [Option<usize>; 3]) -> bool {
        let free = self.arena.free[node];
        let mut key = env;
        for i in 0..3 {
            if !free[i] {
                key[i] = None;
            }
        }
        if let Some(&v) = self.memo[node].get(&key) {
            return v;
        }
        let result = match &self.arena.nodes[node] {
            Node::Leaf(f) => self.leaf(f, env),
            Node::Not(a) => !self.eval(*a, env),
            Node::And(a, b) => self.eval(*a, env) && self.eval(*b, env),
            Node::Or(a, b) => self.eval(*a, env) || self.eval(*b, env),
            Node::Implies(a, b) => !self.eval(*a, env) || self.eval(*b, env),
            Node::Exists(v, a) => {
                let (v, a) = (*v, *a);
                (0..self.w.universe_len()).any(|pos| {
                    let mut e2 = env;
                    e2[v.index()] = Some(pos);
                    self.eval(a, e2)
                })
            }
            Node::Forall(v, a) => {
                let (v, a) = (*v, *a);
                (0..self.w.universe_len()).all(|pos| {
                    let mut e2 = env;
                    e2[v.index()] = Some(pos);
                    self.eval(a, e2)
                })
            }
        };
        self.memo[node].insert(key, result);
        result
    }

    fn leaf(&self, f: &FoFormula, env: [Option<usize>; 3]) -> bool {
        let val = |v: &Var| env[v.index()].expect("bound by construction");
        match f {
            True => true,
            Atom(p, v) => self.w.holds(p, val(v)),
            Lt(v, w) => val(v) < val(w),
            Eq(v, w) => val(v) == val(w),
            Succ(v, w) => val(v) + 1 == val(w),
            Chain(v, w) => self.cs.holds(val(v), val(w)),
            Pr(r, v, w) => self.w.pr(val(v), val(w)) == Some(*r),
            _ => unreachable!("non-leaf in leaf position"),
        }
    }
}

/// `v π w` for every precedence in the set, as a disjunction of atoms.
fn prs_atom(s: PrSet, v: Var, w: Var) -> FoFormula {
    FoFormula::disj(s.rels().into_iter().map(|r| Pr(r, v, w)))
}

/// Translates POTL into first-order logic with one free variable `x`.
///
/// The construction is syntax directed with no simplification: next/back and
/// chain operators quantify the target position; summary until/since use the
/// path-exclusion formula `gamma` (a position between the endpoints is
/// skipped by the summary path iff it lies in a chain body strictly contained
/// between them) and the step formula `delta`; hierarchical operators
/// existentially pick the shared context and re-derive it under the inner
/// quantifiers. Three variables suffice throughout, with standard
/// innermost-binding shadowing.
pub fn nu(f: &PotlFormula) -> FoFormula {
    nu_at(f, Var::X)
}

/// `exists other (other = target /\ nu(f)[x := other])`: re-enters the
/// translation with `f` evaluated at `target`, using the paper's
/// `exists x (x = y /\ ...)` re-binding idiom.
fn at(target: Var, f: &PotlFormula) -> FoFormula {
    FoFormula::exists(Var::X, FoFormula::and(Eq(Var::X, target), nu_at(f, Var::X)))
}

fn nu_at(f: &PotlFormula, x: Var) -> FoFormula {
    debug_assert_eq!(x, Var::X, "translations are emitted with free variable x");
    use PotlFormula as P;
    let (x, y, z) = (Var::X, Var::Y, Var::Z);
    match f {
        P::True => True,
        P::Atom(a) => Atom(a.clone(), x),
        P::Not(a) => FoFormula::not(nu_at(a, x)),
        P::And(a, b) => FoFormula::and(nu_at(a, x), nu_at(b, x)),
        P::Or(a, b) => FoFormula::or(nu_at(a, x), nu_at(b, x)),
        P::Implies(a, b) => FoFormula::implies(nu_at(a, x), nu_at(b, x)),
        P::Next(d, a) => next_like(Succ(x, y), d.prs(), a),
        P::NextPr(s, a) => next_like(Succ(x, y), *s, a),
        P::Back(d, a) => back_like(Succ(y, x), d.prs(), a),
        P::BackPr(s, a) => back_like(Succ(y, x), *s, a),
        P::ChainNext(d, a) => next_like(Chain(x, y), d.prs(), a),
        P::ChainNextPr(s, a) => next_like(Chain(x, y), *s, a),
        P::ChainBack(d, a) => back_like(Chain(y, x), d.prs(), a),
        P::ChainBackPr(s, a) => back_like(Chain(y, x), *s, a),
        P::Until(d, a, b) => {
            // exists y ( x <= y /\ psi(y) /\
            //   forall z ((x <= z /\ z < y /\ ~gamma(x,y,z)) ->
            //             phi(z) /\ delta(y,z)) )
            let prs = d.prs();
            FoFormula::exists(
                y,
                FoFormula::conj([
                    FoFormula::le(x, y),
                    at(y, b),
                    FoFormula::forall(
                        z,
                        FoFormula::implies(
                            FoFormula::conj([
                                FoFormula::le(x, z),
                                Lt(z, y),
                                FoFormula::not(gamma(prs, x, y, z)),
                            ]),
                            FoFormula::and(at(z, a), delta(prs, y, z)),
                        ),
                    ),
                ]),
            )
        }
        P::Since(d, a, b) => {
            // Mirrored until: the path runs from the witness y forward to x,
            // so every constrained position (y, x] needs a step INTO it,
            // tested by the backward variant of delta.
            let prs = d.prs();
            FoFormula::exists(
                y,
                FoFormula::conj([
                    FoFormula::le(y, x),
                    at(y, b),
                    FoFormula::forall(
                        z,
                        FoFormula::implies(
                            FoFormula::conj([
                                Lt(y, z),
                                FoFormula::le(z, x),
                                FoFormula::not(gamma(prs, y, x, z)),
                            ]),
                            FoFormula::and(at(z, a), delta_back(prs, y, z)),
                        ),
                    ),
                ]),
            )
        }
        P::HNext(Dir::Up, a) => {
            // exists y (y < x /\ chain(y,x) /\ y < x /\ exists z (x < z /\
            //   chain(y,z) /\ y yields z /\ phi(z) /\ minimality))
            FoFormula::exists(
                y,
                FoFormula::conj([
                    Lt(y, x),
                    Chain(y, x),
                    Pr(PrecRel::Yields, y, x),
                    FoFormula::exists(
                        z,
                        FoFormula::conj([
                            Lt(x, z),
                            Chain(y, z),
                            Pr(PrecRel::Yields, y, z),
                            at(z, a),
                            hnext_up_minimality(),
                        ]),
                    ),
                ]),
            )
        }
        P::HBack(Dir::Up, a) => FoFormula::exists(
            y,
            FoFormula::conj([
                Lt(y, x),
                Chain(y, x),
                Pr(PrecRel::Yields, y, x),
                FoFormula::exists(
                    z,
                    FoFormula::conj([
                        Lt(z, x),
                        Chain(y, z),
                        Pr(PrecRel::Yields, y, z),
                        at(z, a),
                        hback_up_minimality(),
                    ]),
                ),
            ]),
        ),
        P::HNext(Dir::Down, a) => FoFormula::exists(
            y,
            FoFormula::conj([
                Lt(x, y),
                Chain(x, y),
                Pr(PrecRel::Takes, x, y),
                FoFormula::exists(
                    z,
                    FoFormula::conj([
                        Lt(x, z),
                        Chain(z, y),
                        Pr(PrecRel::Takes, z, y),
                        at(z, a),
                        hnext_down_minimality(),
                    ]),
                ),
            ]),
        ),
        P::HBack(Dir::Down, a) => FoFormula::exists(
            y,
            FoFormula::conj([
                Lt(x, y),
                Chain(x, y),
                Pr(PrecRel::Takes, x, y),
                FoFormula::exists(
                    z,
                    FoFormula::conj([
                        Lt(z, x),
                        Chain(z, y),
                        Pr(PrecRel::Takes, z, y),
                        at(z, a),
                        hback_down_minimality(),
                    ]),
                ),
            ]),
        ),
        P::HUntil(Dir::Up, a, b) => hu_up(a, b, true),
        P::HSince(Dir::Up, a, b) => hu_up(a, b, false),
        P::HUntil(Dir::Down, a, b) => hu_down(a, b, true),
        P::HSince(Dir::Down, a, b) => hu_down(a, b, false),
    }
}

fn next_like(step: FoFormula, prs: PrSet, a: &PotlFormula) -> FoFormula {
    // exists y (step(x,y) /\ (x pr y \/ ..) /\ psi(y))
    let (x, y) = (Var::X, Var::Y);
    FoFormula::exists(y, FoFormula::conj([step, prs_atom(prs, x, y), at(y, a)]))
}

fn back_like(step: FoFormula, prs: PrSet, a: &PotlFormula) -> FoFormula {
    let (x, y) = (Var::X, Var::Y);
    FoFormula::exists(y, FoFormula::conj([step, prs_atom(prs, y, x), at(y, a)]))
}

/// `gamma(a, b, c)`: position `c` lies strictly between `a` and `b` inside a
/// chain body entirely contained between them (for the given precedence
/// family), hence the summary path between `a` and `b` skips it.
fn gamma(prs: PrSet, a: Var, b: Var, c: Var) -> FoFormula {
    FoFormula::and(gamma_left(prs, a, c, b), gamma_right(prs, b, c, a))
}

/// `c` is inside the body of a chain opening at or after `a`:
/// `exists m (a <= m /\ m < c /\ exists e (c < e /\ chain(m,e) /\ m pr e))`,
/// where `m` reuses the remaining variable and `e` reuses `a`.
fn gamma_left(prs: PrSet, a: Var, c: Var, m: Var) -> FoFormula {
    FoFormula::exists(
        m,
        FoFormula::conj([
            FoFormula::le(a, m),
            Lt(m, c),
            FoFormula::exists(
                a,
                FoFormula::conj([Lt(c, a), Chain(m, a), prs_atom(prs, m, a)]),
            ),
        ]),
    )
}

/// `c` is inside the body of a chain closing at or before `b`.
fn gamma_right(prs: PrSet, b: Var, c: Var, m: Var) -> FoFormula {
    FoFormula::exists(
        m,
        FoFormula::conj([
            Lt(c, m),
            FoFormula::le(m, b),
            FoFormula::exists(
                b,
                FoFormula::conj([Lt(b, c), Chain(b, m), prs_atom(prs, b, m)]),
            ),
        ]),
    )
}

/// `delta(b, c)`: the path through `c` (ending at `b`) can take a step from
/// `c`: some later position within reach is an allowed successor or chain
/// target and is itself not skipped.
fn delta(prs: PrSet, b: Var, c: Var) -> FoFormula {
    // The remaining variable acts as the step target.
    let a = remaining_var(b, c);
    FoFormula::exists(
        a,
        FoFormula::conj([
            Lt(c, a),
            FoFormula::le(a, b),
            prs_atom(prs, c, a),
            FoFormula::not(gamma(prs, c, b, a)),
            FoFormula::or(Succ(c, a), Chain(c, a)),
        ]),
    )
}

/// Backward counterpart of [`delta`] for since paths running from `b` up to
/// the evaluation position: position `c` must be entered by a step from an
/// allowed, non-skipped predecessor at or after `b`.
fn delta_back(prs: PrSet, b: Var, c: Var) -> FoFormula {
    let a = remaining_var(b, c);
    FoFormula::exists(
        a,
        FoFormula::conj([
            FoFormula::le(b, a),
            Lt(a, c),
            prs_atom(prs, a, c),
            FoFormula::not(gamma(prs, b, c, a)),
            FoFormula::or(Succ(a, c), Chain(a, c)),
        ]),
    )
}

fn remaining_var(a: Var, b: Var) -> Var {
    VARS.into_iter().find(|v| *v != a && *v != b).expect("two distinct variables")
}

/// The minimality clause of the upward hierarchical next: no position
/// strictly between `x` and `z` is a right context of `x`'s anchor. The
/// anchor is re-derived inside because its binder is shadowed:
/// `forall y (x < y /\ y < z -> forall z ((chain(z,x) /\ z yields x) -> ~chain(z,y)))`.
fn hnext_up_minimality() -> FoFormula {
    let (x, y, z) = (Var::X, Var::Y, Var::Z);
    FoFormula::forall(
        y,
        FoFormula::implies(
            FoFormula::and(Lt(x, y), Lt(y, z)),
            FoFormula::forall(
                z,
                FoFormula::implies(
                    FoFormula::and(Chain(z, x), Pr(PrecRel::Yields, z, x)),
                    FoFormula::not(Chain(z, y)),
                ),
            ),
        ),
    )
}

fn hback_up_minimality() -> FoFormula {
    let (x, y, z) = (Var::X, Var::Y, Var::Z);
    FoFormula::forall(
        y,
        FoFormula::implies(
            FoFormula::and(Lt(z, y), Lt(y, x)),
            FoFormula::forall(
                z,
                FoFormula::implies(
                    FoFormula::and(Chain(z, x), Pr(PrecRel::Yields, z, x)),
                    FoFormula::not(Chain(z, y)),
                ),
            ),
        ),
    )
}

fn hnext_down_minimality() -> FoFormula {
    let (x, y, z) = (Var::X, Var::Y, Var::Z);
    FoFormula::forall(
        y,
        FoFormula::implies(
            FoFormula::and(Lt(x, y), Lt(y, z)),
            FoFormula::forall(
                z,
                FoFormula::implies(
                    FoFormula::and(Chain(x, z), Pr(PrecRel::Takes, x, z)),
                    FoFormula::not(Chain(y, z)),
                ),
            ),
        ),
    )
}

fn hback_down_minimality() -> FoFormula {
    let (x, y, z) = (Var::X, Var::Y, Var::Z);
    FoFormula::forall(
        y,
        FoFormula::implies(
            FoFormula::and(Lt(z, y), Lt(y, x)),
            FoFormula::forall(
                z,
                FoFormula::implies(
                    FoFormula::and(Chain(x, z), Pr(PrecRel::Takes, x, z)),
                    FoFormula::not(Chain(y, z)),
                ),
            ),
        ),
    )
}

/// Upward hierarchical until (`until = true`) or since: the anchor `z` is a
/// `<`-left-context of `x`; the end `y` is a later (resp. earlier) member of
/// its cluster satisfying `psi`; every cluster member strictly between
/// carries `phi` (the membership test re-derives the anchor, shadowed).
fn hu_up(a: &PotlFormula, b: &PotlFormula, until: bool) -> FoFormula {
    let (x, y, z) = (Var::X, Var::Y, Var::Z);
    let range = if until {
        FoFormula::le(x, y)
    } else {
        FoFormula::le(y, x)
    };
    let between = if until {
        FoFormula::and(FoFormula::le(x, z), Lt(z, y))
    } else {
        FoFormula::and(Lt(y, z), FoFormula::le(z, x))
    };
    FoFormula::exists(
        z,
        FoFormula::conj([
            Lt(z, x),
            Pr(PrecRel::Yields, z, x),
            Chain(z, x),
            FoFormula::exists(
                y,
                FoFormula::conj([
                    range,
                    Chain(z, y),
                    Pr(PrecRel::Yields, z, y),
                    at(y, b),
                    FoFormula::forall(
                        z,
                        FoFormula::implies(
                            FoFormula::and(
                                between,
                                FoFormula::exists(
                                    y,
                                    FoFormula::conj([
                                        Lt(y, x),
                                        Pr(PrecRel::Yields, y, x),
                                        Chain(y, x),
                                        Chain(y, z),
                                    ]),
                                ),
                            ),
                            at(z, a),
                        ),
                    ),
                ]),
            ),
        ]),
    )
}

fn hu_down(a: &PotlFormula, b: &PotlFormula, until: bool) -> FoFormula {
    let (x, y, z) = (Var::X, Var::Y, Var::Z);
    let range = if until {
        FoFormula::le(x, y)
    } else {
        FoFormula::le(y, x)
    };
    let between = if until {
        FoFormula::and(FoFormula::le(x, z), Lt(z, y))
    } else {
        FoFormula::and(Lt(y, z), FoFormula::le(z, x))
    };
    FoFormula::exists(
        z,
        FoFormula::conj([
            Lt(x, z),
            Pr(PrecRel::Takes, x, z),
            Chain(x, z),
            FoFormula::exists(
                y,
                FoFormula::conj([
                    range,
                    Chain(y, z),
                    Pr(PrecRel::Takes, y, z),
                    at(y, b),
                    FoFormula::forall(
                        z,
                        FoFormula::implies(
                            FoFormula::and(
                                between,
                                FoFormula::exists(
                                    y,
                                    FoFormula::conj([
                                        Lt(x, y),
                                        Pr(PrecRel::Takes, x, y),
                                        Chain(x, y),
                                        Chain(z, y),
                                    ]),
                                ),
                            ),
                            at(z, a),
                        ),
                    ),
                ]),
            ),
        ]),
    )
}

/// Expands every precedence atom into the `sigma_a`/`sigma_b` disjunction
/// over full proposition sets, for conformance testing on tiny alphabets:
/// `v pr w` becomes `\/_{a pr b} (sigma_a(v) /\ sigma_b(w))`, where `sigma_a`
/// states that exactly the propositions in `a` hold.
pub fn expand_pr_atoms(f: &FoFormula, alpha: &OpAlphabet) -> FoFormula {
    match f {
        Pr(r, v, w) => {
            let sets = all_label_sets(alpha);
            let mut disj = Vec::new();
            for (sa, a_names) in &sets {
                for (sb, b_names) in &sets {
                    if alpha.rel(*sa, *sb) == Some(*r) {
                        disj.push(FoFormula::and(
                            sigma(alpha, a_names, *v),
                            sigma(alpha, b_names, *w),
                        ));
                    }
                }
            }
            FoFormula::disj(disj)
        }
        True | Atom(..) | Lt(..) | Eq(..) | Succ(..) | Chain(..) => f.clone(),
        Not(a) => FoFormula::not(expand_pr_atoms(a, alpha)),
        And(a, b) => FoFormula::and(expand_pr_atoms(a, alpha), expand_pr_atoms(b, alpha)),
        Or(a, b) => FoFormula::or(expand_pr_atoms(a, alpha), expand_pr_atoms(b, alpha)),
        Implies(a, b) => {
            FoFormula::implies(expand_pr_atoms(a, alpha), expand_pr_atoms(b, alpha))
        }
        Exists(v, a) => FoFormula::exists(*v, expand_pr_atoms(a, alpha)),
        Forall(v, a) => FoFormula::forall(*v, expand_pr_atoms(a, alpha)),
    }
}

/// All valid proposition sets of the alphabet: one structural label (or `#`)
/// plus any subset of the normal labels. Exponential; test-sized alphabets
/// only.
fn all_label_sets(alpha: &OpAlphabet) -> Vec<(usize, Vec<String>)> {
    let normals = alpha.normals();
    let mut out = Vec::new();
    for sid in 0..alpha.structurals().len() {
        let base = alpha.structurals()[sid].clone();
        for mask in 0u64..(1 << normals.len()) {
            let mut names = vec![base.clone()];
            for (i, nprop) in normals.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    names.push(nprop.clone());
                }
            }
            // `#` never carries normal labels.
            if sid == 0 && mask != 0 {
                continue;
            }
            out.push((sid, names));
        }
    }
    out
}

fn sigma(alpha: &OpAlphabet, names: &[String], v: Var) -> FoFormula {
    let mut parts = Vec::new();
    for p in alpha.structurals().iter().chain(alpha.normals().iter()) {
        let atom = Atom(p.clone(), v);
        if names.iter().any(|n| n == p) {
            parts.push(atom);
        } else {
            parts.push(FoFormula::not(atom));
        }
    }
    FoFormula::conj(parts)
}
