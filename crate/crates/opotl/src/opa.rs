//! Operator precedence automata: push/shift/pop machines whose moves are
//! selected by the precedence between the stack top symbol and the lookahead.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::alphabet::{AlphabetError, LabelSet, OpAlphabet, PrecRel};
use crate::words::OpWord;

pub type StateId = usize;

#[derive(Debug, Error)]
pub enum OpaError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("no precedence relation between stack symbol `{smb}` and lookahead `{lookahead}`")]
    UndefinedPrecedence { smb: String, lookahead: String },
    #[error("requested body length {requested} exceeds the enumeration cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
}

/// A transition label: either an exact proposition set, or a wildcard matching
/// any set with the given structural label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMatcher {
    Exact(LabelSet),
    AnyStructural(usize),
}

impl LabelMatcher {
    pub fn matches(&self, ls: LabelSet) -> bool {
        match self {
            LabelMatcher::Exact(e) => *e == ls,
            LabelMatcher::AnyStructural(s) => ls.structural == *s,
        }
    }
}

/// An operator precedence automaton over an OP alphabet.
#[derive(Debug, Clone)]
pub struct Opa {
    pub alphabet: Arc<OpAlphabet>,
    pub states: Vec<String>,
    pub initials: BTreeSet<StateId>,
    pub finals: BTreeSet<StateId>,
    pub push: Vec<(StateId, LabelMatcher, StateId)>,
    pub shift: Vec<(StateId, LabelMatcher, StateId)>,
    pub pop: Vec<(StateId, StateId, StateId)>,
}

/// One stack element: the symbol read when it was pushed (possibly updated by
/// shifts) and the state the automaton was in before pushing. The `⊥` bottom
/// marker is implicit: an empty stack vector.
pub type StackSymbol = (LabelSet, StateId);

/// A configuration: next input position, current state, stack contents
/// (bottom first, `⊥` excluded).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub index: usize,
    pub state: StateId,
    pub stack: Vec<StackSymbol>,
}

impl Configuration {
    /// Initial configuration for a run over `w` from state `q`.
    pub fn initial(q: StateId) -> Configuration {
        Configuration { index: 1, state: q, stack: Vec::new() }
    }

    /// The symbol exposed by the stack: `#` when only `⊥` remains.
    pub fn smb(&self) -> LabelSet {
        self.stack.last().map(|(ls, _)| *ls).unwrap_or_else(LabelSet::delimiter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MoveKind {
    Push,
    Shift,
    Pop,
}

/// One step of a witness run.
#[derive(Debug, Clone, Serialize)]
pub struct RunStep {
    pub kind: MoveKind,
    /// Input position the lookahead was read at.
    pub lookahead: usize,
    /// Target state.
    pub state: String,
}

impl Opa {
    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    /// Lookahead label set at `index`: the position's labels, or `{#}` past
    /// the end of the input.
    fn lookahead(&self, w: &OpWord, index: usize) -> LabelSet {
        if index <= w.body_len() {
            w.label(index)
        } else {
            LabelSet::delimiter()
        }
    }

    /// All successor configurations of `c` on `w`, per the three move rules:
    /// push when `smb < a`, shift when `smb = a` (updating the top symbol's
    /// labels only), pop when `smb > a` (not consuming input). Shift and pop
    /// never fire on the `⊥`-only stack. An undefined precedence leaves the
    /// run stuck, reported as an error.
    pub fn step(&self, w: &OpWord, c: &Configuration) -> Result<Vec<Configuration>, OpaError> {
        let a = self.lookahead(w, c.index);
        let smb = c.smb();
        let rel = match self.alphabet.precedence_of(smb, a) {
            Some(rel) => rel,
            None => {
                return Err(OpaError::UndefinedPrecedence {
                    smb: self.alphabet.display_label_set(smb),
                    lookahead: self.alphabet.display_label_set(a),
                })
            }
        };
        let mut out = Vec::new();
        match rel {
            PrecRel::Yields => {
                for (q, m, q2) in &self.push {
                    if *q == c.state && m.matches(a) {
                        let mut stack = c.stack.clone();
                        stack.push((a, c.state));
                        out.push(Configuration { index: c.index + 1, state: *q2, stack });
                    }
                }
            }
            PrecRel::Equals => {
                if let Some(&(_, saved)) = c.stack.last() {
                    for (q, m, q2) in &self.shift {
                        if *q == c.state && m.matches(a) {
                            let mut stack = c.stack.clone();
                            *stack.last_mut().unwrap() = (a, saved);
                            out.push(Configuration { index: c.index + 1, state: *q2, stack });
                        }
                    }
                }
            }
            PrecRel::Takes => {
                if let Some(&(_, saved)) = c.stack.last() {
                    for (q, p, q2) in &self.pop {
                        if *q == c.state && *p == saved {
                            let mut stack = c.stack.clone();
                            stack.pop();
                            out.push(Configuration { index: c.index, state: *q2, stack });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn is_accepting(&self, w: &OpWord, c: &Configuration) -> bool {
        c.index == w.end() && c.stack.is_empty() && self.finals.contains(&c.state)
    }

    /// True when some run from an initial state consumes the interior of `w`
    /// and ends in a final state with empty stack. The search is an exhaustive
    /// depth-first walk of the finite run tree (every move either consumes
    /// input or strictly shrinks the stack), with visited-configuration
    /// pruning.
    pub fn accepts(&self, w: &OpWord) -> bool {
        self.accepts_with_witness(w).is_some()
    }

    /// Like [`accepts`](Self::accepts) but returns the move sequence of one
    /// accepting run.
    pub fn accepts_with_witness(&self, w: &OpWord) -> Option<Vec<RunStep>> {
        let mut visited: HashSet<Configuration> = HashSet::new();
        for &q in &self.initials {
            let c = Configuration::initial(q);
            if let Some(mut steps) = self.dfs(w, &c, &mut visited) {
                steps.reverse();
                return Some(steps);
            }
        }
        None
    }

    fn dfs(
        &self,
        w: &OpWord,
        c: &Configuration,
        visited: &mut HashSet<Configuration>,
    ) -> Option<Vec<RunStep>> {
        if self.is_accepting(w, c) {
            return Some(Vec::new());
        }
        if !visited.insert(c.clone()) {
            return None;
        }
        let succs = match self.step(w, c) {
            Ok(s) => s,
            Err(_) => return None,
        };
        for s in succs {
            let kind = if s.index > c.index {
                if s.stack.len() > c.stack.len() {
                    MoveKind::Push
                } else {
                    MoveKind::Shift
                }
            } else {
                MoveKind::Pop
            };
            if let Some(mut steps) = self.dfs(w, &s, visited) {
                steps.push(RunStep {
                    kind,
                    lookahead: c.index,
                    state: self.states[s.state].clone(),
                });
                return Some(steps);
            }
        }
        None
    }

    /// Label sets the automaton can move on: exact sets mentioned by
    /// transitions plus bare structural singletons for wildcards. This is the
    /// effective input alphabet for bounded enumeration.
    pub fn enumeration_alphabet(&self) -> Vec<LabelSet> {
        let mut set: BTreeSet<LabelSet> = BTreeSet::new();
        for (_, m, _) in self.push.iter().chain(self.shift.iter()) {
            match m {
                LabelMatcher::Exact(ls) => {
                    set.insert(*ls);
                }
                LabelMatcher::AnyStructural(s) => {
                    set.insert(LabelSet::structural_only(*s));
                }
            }
        }
        let mut v: Vec<LabelSet> = set.into_iter().collect();
        // Lexicographic by rendered token, so enumeration order is stable and
        // human-predictable.
        v.sort_by_key(|ls| self.alphabet.display_label_set(*ls));
        v
    }

    /// All accepted words with body length at most `max_body`, in
    /// length-lexicographic order. `max_body` may not exceed `cap`
    /// (default [`ENUM_CAP`]).
    pub fn enumerate_accepted(&self, max_body: usize) -> Result<Vec<OpWord>, OpaError> {
        self.enumerate_accepted_capped(max_body, ENUM_CAP)
    }

    pub fn enumerate_accepted_capped(
        &self,
        max_body: usize,
        cap: usize,
    ) -> Result<Vec<OpWord>, OpaError> {
        if max_body > cap {
            return Err(OpaError::CapExceeded { requested: max_body, cap });
        }
        let sigma = self.enumeration_alphabet();
        let mut out: Vec<Vec<LabelSet>> = Vec::new();
        let frontier: Vec<Configuration> =
            self.initials.iter().map(|&q| Configuration { index: 0, state: q, stack: Vec::new() }).collect();
        let mut prefix = Vec::new();
        self.enumerate_rec(&sigma, frontier, &mut prefix, max_body, &mut out);
        out.sort();
        out.dedup();
        let mut words: Vec<OpWord> = out
            .into_iter()
            .map(|body| {
                OpWord::new(self.alphabet.clone(), body).expect("accepted words are compatible")
            })
            .collect();
        words.sort_by_key(|w| {
            w.labels()[1..w.end()]
                .iter()
                .map(|ls| self.alphabet.display_label_set(*ls))
                .collect::<Vec<_>>()
        });
        Ok(words)
    }

    /// Extends `prefix` by each alphabet symbol, tracking the frontier of all
    /// reachable configurations. `index` in these configurations counts
    /// consumed symbols; the lookahead is supplied explicitly since the word
    /// is being built as we go.
    fn enumerate_rec(
        &self,
        sigma: &[LabelSet],
        frontier: Vec<Configuration>,
        prefix: &mut Vec<LabelSet>,
        budget: usize,
        out: &mut Vec<Vec<LabelSet>>,
    ) {
        if frontier.is_empty() {
            return;
        }
        if self.frontier_accepts(&frontier) {
            out.push(prefix.clone());
        }
        if budget == 0 {
            return;
        }
        for &a in sigma {
            let next = self.consume(&frontier, a);
            if next.is_empty() {
                continue;
            }
            prefix.push(a);
            self.enumerate_rec(sigma, next, prefix, budget - 1, out);
            prefix.pop();
        }
    }

    /// All configurations reachable from `frontier` by consuming exactly the
    /// symbol `a` (preceded by any number of pop moves with `a` as lookahead).
    fn consume(&self, frontier: &[Configuration], a: LabelSet) -> Vec<Configuration> {
        let mut seen: HashSet<Configuration> = HashSet::new();
        let mut stack_work: Vec<Configuration> = frontier.to_vec();
        let mut result: HashSet<Configuration> = HashSet::new();
        while let Some(c) = stack_work.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            let rel = self.alphabet.precedence_of(c.smb(), a);
            match rel {
                Some(PrecRel::Yields) => {
                    for (q, m, q2) in &self.push {
                        if *q == c.state && m.matches(a) {
                            let mut stack = c.stack.clone();
                            stack.push((a, c.state));
                            result.insert(Configuration {
                                index: c.index + 1,
                                state: *q2,
                                stack,
                            });
                        }
                    }
                }
                Some(PrecRel::Equals) => {
                    if let Some(&(_, saved)) = c.stack.last() {
                        for (q, m, q2) in &self.shift {
                            if *q == c.state && m.matches(a) {
                                let mut stack = c.stack.clone();
                                *stack.last_mut().unwrap() = (a, saved);
                                result.insert(Configuration {
                                    index: c.index + 1,
                                    state: *q2,
                                    stack,
                                });
                            }
                        }
                    }
                }
                Some(PrecRel::Takes) => {
                    if let Some(&(_, saved)) = c.stack.last() {
                        for (q, p, q2) in &self.pop {
                            if *q == c.state && *p == saved {
                                let mut stack = c.stack.clone();
                                stack.pop();
                                stack_work.push(Configuration {
                                    index: c.index,
                                    state: *q2,
                                    stack,
                                });
                            }
                        }
                    }
                }
                None => {}
            }
        }
        result.into_iter().collect()
    }

    /// Can any configuration in the frontier reach acceptance by pops alone,
    /// with `#` as lookahead?
    fn frontier_accepts(&self, frontier: &[Configuration]) -> bool {
        let mut seen: HashSet<(StateId, Vec<StackSymbol>)> = HashSet::new();
        let mut work: Vec<(StateId, Vec<StackSymbol>)> =
            frontier.iter().map(|c| (c.state, c.stack.clone())).collect();
        while let Some((state, stack)) = work.pop() {
            if !seen.insert((state, stack.clone())) {
                continue;
            }
            if stack.is_empty() {
                if self.finals.contains(&state) {
                    return true;
                }
                continue;
            }
            let (top_ls, saved) = *stack.last().unwrap();
            // Pop requires smb > #.
            if self.alphabet.precedence_of(top_ls, LabelSet::delimiter()) != Some(PrecRel::Takes) {
                continue;
            }
            for (q, p, q2) in &self.pop {
                if *q == state && *p == saved {
                    let mut s2 = stack.clone();
                    s2.pop();
                    work.push((*q2, s2));
                }
            }
        }
        false
    }
}

/// Default cap for [`Opa::enumerate_accepted`].
pub const ENUM_CAP: usize = 14;

/// The single-state automaton accepting exactly the universe of the alphabet:
/// push and shift on every label, pop back to the same state.
pub fn max_automaton(alphabet: Arc<OpAlphabet>) -> Opa {
    let mut push = Vec::new();
    let mut shift = Vec::new();
    for (sid, _) in alphabet.proper_structurals() {
        push.push((0, LabelMatcher::AnyStructural(sid), 0));
        shift.push((0, LabelMatcher::AnyStructural(sid), 0));
    }
    Opa {
        alphabet,
        states: vec!["q".to_string()],
        initials: [0].into(),
        finals: [0].into(),
        push,
        shift,
        pop: vec![(0, 0, 0)],
    }
}

/// The automaton modeling the example procedural program over `M_call`:
/// a main that calls `pA`, which installs a handler and calls `pB`; `pB` calls
/// `pC`, which recurses or throws; the handler then runs `pErr` twice.
pub fn builtin_fig5() -> Opa {
    let alphabet = Arc::new(crate::alphabet::builtin_mcall());
    let states = ["M0", "A0", "A1", "B0", "C0", "A2", "A3", "Er", "A4", "Ar", "Arp", "Mr"];
    let id = |n: &str| states.iter().position(|s| *s == n).unwrap();
    let ls = |names: &[&str]| alphabet.label_set(names).unwrap();
    let push = vec![
        (id("M0"), LabelMatcher::Exact(ls(&["call", "pA"])), id("A0")),
        (id("A0"), LabelMatcher::Exact(ls(&["han"])), id("A1")),
        (id("A1"), LabelMatcher::Exact(ls(&["call", "pB"])), id("B0")),
        (id("B0"), LabelMatcher::Exact(ls(&["call", "pC"])), id("C0")),
        (id("C0"), LabelMatcher::Exact(ls(&["call", "pC"])), id("C0")),
        (id("A3"), LabelMatcher::Exact(ls(&["call", "pErr"])), id("Er")),
        (id("A4"), LabelMatcher::Exact(ls(&["call", "pErr"])), id("Er")),
    ];
    let shift = vec![
        (id("C0"), LabelMatcher::Exact(ls(&["exc"])), id("A2")),
        (id("Er"), LabelMatcher::Exact(ls(&["ret", "pErr"])), id("Er")),
        (id("Ar"), LabelMatcher::Exact(ls(&["ret", "pA"])), id("Arp")),
    ];
    let pop = vec![
        (id("C0"), id("A1"), id("C0")),
        (id("C0"), id("B0"), id("C0")),
        (id("C0"), id("C0"), id("C0")),
        (id("A2"), id("A0"), id("A3")),
        (id("Er"), id("A3"), id("A4")),
        (id("Er"), id("A4"), id("Ar")),
        (id("Arp"), id("M0"), id("Mr")),
    ];
    Opa {
        alphabet,
        states: states.iter().map(|s| s.to_string()).collect(),
        initials: [id("M0")].into(),
        finals: [id("Mr")].into(),
        push,
        shift,
        pop,
    }
}

/// Loads an automaton from the text format:
///
/// ```text
/// states: M0, A0, Mr
/// initial: M0
/// final: Mr
/// M0 --push {call,pA}--> A0
/// C0 --shift {exc}--> A2
/// C0 --pop B0--> C0
/// ```
///
/// A bare structural name as transition label (no braces) is a wildcard
/// matching any proposition set with that structural label.
pub fn load_opa(alphabet: &Arc<OpAlphabet>, text: &str) -> Result<Opa, OpaError> {
    let mut states: Vec<String> = Vec::new();
    let mut initials: BTreeSet<StateId> = BTreeSet::new();
    let mut finals: BTreeSet<StateId> = BTreeSet::new();
    let mut push = Vec::new();
    let mut shift = Vec::new();
    let mut pop = Vec::new();
    let mut transitions: Vec<(usize, String)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split(';').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("states:") {
            for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                if states.iter().any(|s| s == name) {
                    return Err(OpaError::Parse {
                        line,
                        msg: format!("duplicate state `{}`", name),
                    });
                }
                states.push(name.to_string());
            }
        } else if let Some(rest) = content.strip_prefix("initial:") {
            for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let id = states
                    .iter()
                    .position(|s| s == name)
                    .ok_or_else(|| OpaError::UnknownState(name.to_string()))?;
                initials.insert(id);
            }
        } else if let Some(rest) = content.strip_prefix("final:") {
            for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let id = states
                    .iter()
                    .position(|s| s == name)
                    .ok_or_else(|| OpaError::UnknownState(name.to_string()))?;
                finals.insert(id);
            }
        } else {
            transitions.push((line, content.to_string()));
        }
    }
    let state_id = |name: &str| -> Result<StateId, OpaError> {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| OpaError::UnknownState(name.to_string()))
    };
    for (line, t) in transitions {
        let (src, rest) = t.split_once("--").ok_or_else(|| OpaError::Parse {
            line,
            msg: format!("expected `q --kind label--> q'`, got `{}`", t),
        })?;
        let (middle, dst) = rest.split_once("-->").ok_or_else(|| OpaError::Parse {
            line,
            msg: format!("expected `q --kind label--> q'`, got `{}`", t),
        })?;
        let src = state_id(src.trim())?;
        let dst = state_id(dst.trim())?;
        let middle = middle.trim();
        if let Some(label) = middle.strip_prefix("push") {
            push.push((src, parse_matcher(alphabet, label.trim(), line)?, dst));
        } else if let Some(label) = middle.strip_prefix("shift") {
            shift.push((src, parse_matcher(alphabet, label.trim(), line)?, dst));
        } else if let Some(p) = middle.strip_prefix("pop") {
            pop.push((src, state_id(p.trim())?, dst));
        } else {
            return Err(OpaError::Parse {
                line,
                msg: format!("unknown transition kind in `{}`", middle),
            });
        }
    }
    Ok(Opa { alphabet: alphabet.clone(), states, initials, finals, push, shift, pop })
}

fn parse_matcher(
    alphabet: &OpAlphabet,
    label: &str,
    line: usize,
) -> Result<LabelMatcher, OpaError> {
    if label.starts_with('{') {
        let inner = label
            .strip_prefix('{')
            .and_then(|l| l.strip_suffix('}'))
            .ok_or_else(|| OpaError::Parse { line, msg: format!("malformed label `{}`", label) })?;
        let names: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let ls = alphabet
            .label_set(&names)
            .map_err(|e| OpaError::Parse { line, msg: e.to_string() })?;
        Ok(LabelMatcher::Exact(ls))
    } else {
        let sid = alphabet.struct_id(label).ok_or_else(|| OpaError::Parse {
            line,
            msg: format!("unknown structural label `{}`", label),
        })?;
        Ok(LabelMatcher::AnyStructural(sid))
    }
}
