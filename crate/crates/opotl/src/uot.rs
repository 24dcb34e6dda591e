//! Unranked ordered trees, their matrix-compatibility rules, the right
//! context function, and the isomorphism between OP words and such trees.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::alphabet::{AlphabetError, LabelSet, OpAlphabet, PrecRel};
use crate::parser::ChainSet;
use crate::words::OpWord;

pub type UotNodeId = usize;

#[derive(Debug, Error)]
pub enum UotError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("node `{0}` not found")]
    NodeNotFound(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("tree is not compatible with the matrix: {rule:?} violated at node {node}")]
    IncompatibleTree { node: String, rule: CompatRule },
}

/// One tree node: its proposition set, parent, and ordered children.
#[derive(Debug, Clone)]
pub struct UotNode {
    pub label: LabelSet,
    pub parent: Option<UotNodeId>,
    pub children: Vec<UotNodeId>,
}

/// An unranked ordered tree with proposition-set labels. Nodes are addressed
/// by child-number sequences; the root prints as `0` and its k-th child as
/// `0.k`.
#[derive(Debug, Clone)]
pub struct Uot {
    pub alphabet: Arc<OpAlphabet>,
    nodes: Vec<UotNode>,
}

impl Uot {
    pub fn root(&self) -> UotNodeId {
        0
    }

    pub fn node(&self, id: UotNodeId) -> &UotNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (UotNodeId, &UotNode)> {
        self.nodes.iter().enumerate()
    }

    /// The child-number path from the root; the root itself is the empty
    /// sequence.
    pub fn address(&self, mut id: UotNodeId) -> Vec<usize> {
        let mut rev = Vec::new();
        while let Some(p) = self.nodes[id].parent {
            let idx = self.nodes[p].children.iter().position(|&c| c == id).unwrap();
            rev.push(idx);
            id = p;
        }
        rev.reverse();
        rev
    }

    /// Renders an address in the `0.k1.k2` form used by the text format.
    pub fn address_string(&self, id: UotNodeId) -> String {
        let mut s = String::from("0");
        for k in self.address(id) {
            s.push('.');
            s.push_str(&k.to_string());
        }
        s
    }

    /// Looks a node up by its printed address.
    pub fn by_address(&self, addr: &str) -> Result<UotNodeId, UotError> {
        let mut parts = addr.split('.');
        if parts.next() != Some("0") {
            return Err(UotError::NodeNotFound(addr.to_string()));
        }
        let mut id = self.root();
        for p in parts {
            let k: usize =
                p.parse().map_err(|_| UotError::NodeNotFound(addr.to_string()))?;
            id = *self.nodes[id]
                .children
                .get(k)
                .ok_or_else(|| UotError::NodeNotFound(addr.to_string()))?;
        }
        Ok(id)
    }

    /// Pre-order traversal (node before its children).
    pub fn preorder(&self) -> Vec<UotNodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            out.push(id);
            for &c in self.nodes[id].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// The right context of a node: undefined when the node has an `=`-child;
    /// otherwise its leftmost right sibling, inherited from the parent when
    /// there is none; undefined at the root.
    pub fn rc(&self, id: UotNodeId) -> Result<Option<UotNodeId>, UotError> {
        if id >= self.nodes.len() {
            return Err(UotError::NodeNotFound(format!("{}", id)));
        }
        let node = &self.nodes[id];
        for &c in &node.children {
            if self.pr(id, c) == Some(PrecRel::Equals) {
                return Ok(None);
            }
        }
        match node.parent {
            None => Ok(None),
            Some(p) => {
                let idx = self.nodes[p].children.iter().position(|&c| c == id).unwrap();
                match self.nodes[p].children.get(idx + 1) {
                    Some(&sib) => Ok(Some(sib)),
                    None => self.rc(p),
                }
            }
        }
    }

    fn pr(&self, a: UotNodeId, b: UotNodeId) -> Option<PrecRel> {
        self.alphabet.precedence_of(self.nodes[a].label, self.nodes[b].label)
    }

    /// Serializes as indented lines `addr label-set`, pre-order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for id in self.preorder() {
            let depth = self.address(id).len();
            out.push_str(&"  ".repeat(depth));
            out.push_str(&self.address_string(id));
            out.push(' ');
            out.push_str(&self.alphabet.display_label_set(self.nodes[id].label));
            out.push('\n');
        }
        out
    }
}

/// The rules an OPM-compatible tree must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompatRule {
    /// The root and its rightmost child are the only `#`-labeled nodes.
    DelimiterLabeling,
    /// A rightmost child is in the `<` or `=` relation with its parent.
    RightmostChildPrecedence,
    /// Every other child is in the `<` relation with its parent.
    InnerChildPrecedence,
    /// A node takes precedence over its right context.
    RightContextTakes,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatReport {
    pub pass: bool,
    pub violation: Option<(String, CompatRule)>,
}

/// Checks the four OPM-compatibility rules, reporting the first violation in
/// pre-order.
pub fn check_compat(t: &Uot, alpha: &OpAlphabet) -> CompatReport {
    let fail = |t: &Uot, id: UotNodeId, rule: CompatRule| CompatReport {
        pass: false,
        violation: Some((t.address_string(id), rule)),
    };
    let pr = |a: LabelSet, b: LabelSet| alpha.precedence_of(a, b);
    let root = t.root();
    let root_node = t.node(root);
    let rightmost = root_node.children.last().copied();
    for (id, node) in t.nodes() {
        let is_delim_slot = id == root || Some(id) == rightmost;
        if node.label.is_delimiter() != is_delim_slot {
            return fail(t, id, CompatRule::DelimiterLabeling);
        }
    }
    for (_, node) in t.nodes() {
        for (idx, &c) in node.children.iter().enumerate() {
            let rel = pr(node.label, t.node(c).label);
            if idx + 1 == node.children.len() {
                if !matches!(rel, Some(PrecRel::Yields) | Some(PrecRel::Equals)) {
                    return fail(t, c, CompatRule::RightmostChildPrecedence);
                }
            } else if rel != Some(PrecRel::Yields) {
                return fail(t, c, CompatRule::InnerChildPrecedence);
            }
        }
    }
    for (id, node) in t.nodes() {
        if let Ok(Some(rc)) = t.rc(id) {
            if pr(node.label, t.node(rc).label) != Some(PrecRel::Takes) {
                return fail(t, id, CompatRule::RightContextTakes);
            }
        }
    }
    CompatReport { pass: true, violation: None }
}

/// The two lookup tables of the word/tree isomorphism.
#[derive(Debug, Clone)]
pub struct TauBijection {
    /// Node of each word position.
    pub node_of: Vec<UotNodeId>,
    /// Word position of each node.
    pub pos_of: Vec<usize>,
}

/// Builds the tree of a parsed word.
///
/// Construction rules for each position `i`: with `i = i+1` the successor is
/// the only child; with `i > i+1` the position has no children; with
/// `i < i+1` the successor is the leftmost child and the `<`/`=` chain
/// targets of `i` follow as the remaining children in order. The final
/// delimiter ends up the root's rightmost child through the conventional `=`
/// between the delimiters.
pub fn tau(w: &OpWord, cs: &ChainSet) -> (Uot, TauBijection) {
    let n = w.universe_len();
    let mut children_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n - 1 {
        match w.pr(i, i + 1) {
            Some(PrecRel::Equals) => children_of[i].push(i + 1),
            Some(PrecRel::Yields) => {
                children_of[i].push(i + 1);
                for &j in cs.right_contexts_of(i) {
                    if matches!(w.pr(i, j), Some(PrecRel::Yields) | Some(PrecRel::Equals)) {
                        children_of[i].push(j);
                    }
                }
            }
            _ => {}
        }
    }
    // Positions: tree nodes indexed by position order of first visit from the
    // root; we keep node id == insertion order of a pre-order walk.
    let mut nodes: Vec<UotNode> = Vec::new();
    let mut node_of = vec![usize::MAX; n];
    let mut stack = vec![(0usize, None::<UotNodeId>)];
    while let Some((pos, parent)) = stack.pop() {
        let id = nodes.len();
        nodes.push(UotNode { label: w.label(pos), parent, children: Vec::new() });
        node_of[pos] = id;
        if let Some(p) = parent {
            nodes[p].children.push(id);
        }
        for &c in children_of[pos].iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    let mut pos_of = vec![usize::MAX; nodes.len()];
    for (pos, &id) in node_of.iter().enumerate() {
        pos_of[id] = pos;
    }
    (Uot { alphabet: w.alphabet().clone(), nodes }, TauBijection { node_of, pos_of })
}

/// Rebuilds the word of a compatible tree by pre-order flattening; inverse of
/// [`tau`] on trees produced from words.
pub fn tau_inverse(t: &Uot, alpha: &Arc<OpAlphabet>) -> Result<OpWord, UotError> {
    let report = check_compat(t, alpha);
    if let Some((node, rule)) = report.violation {
        return Err(UotError::IncompatibleTree { node, rule });
    }
    let seq: Vec<LabelSet> = t.preorder().into_iter().map(|id| t.node(id).label).collect();
    // The flattening yields # body #; strip the delimiters.
    let body = seq[1..seq.len() - 1].to_vec();
    Ok(OpWord::new_unchecked(alpha.clone(), body))
}

/// Parses the indented `addr label-set` text format.
pub fn load_tree(alpha: &Arc<OpAlphabet>, text: &str) -> Result<Uot, UotError> {
    struct Raw {
        addr: Vec<usize>,
        label: LabelSet,
    }
    let mut raws: Vec<Raw> = Vec::new();
    for (ln, raw_line) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw_line.trim();
        if content.is_empty() || content.starts_with(';') {
            continue;
        }
        let (addr_s, label_s) = content.split_once(char::is_whitespace).ok_or_else(|| {
            UotError::Parse { line, msg: format!("expected `addr label`, got `{}`", content) }
        })?;
        let mut parts = addr_s.split('.');
        if parts.next() != Some("0") {
            return Err(UotError::Parse {
                line,
                msg: format!("addresses start at the root `0`, got `{}`", addr_s),
            });
        }
        let mut addr = Vec::new();
        for p in parts {
            addr.push(p.parse::<usize>().map_err(|_| UotError::Parse {
                line,
                msg: format!("bad address component `{}`", p),
            })?);
        }
        let label = alpha
            .label_set_from_token(label_s.trim())
            .or_else(|_| {
                if label_s.trim() == "#" {
                    Ok(LabelSet::delimiter())
                } else {
                    Err(AlphabetError::UnknownProp(label_s.trim().to_string()))
                }
            })
            .map_err(|e| UotError::Parse { line, msg: e.to_string() })?;
        raws.push(Raw { addr, label });
    }
    if raws.is_empty() {
        return Err(UotError::Parse { line: 0, msg: "empty tree".to_string() });
    }
    // Sort by address; parents precede children, siblings in order.
    raws.sort_by(|a, b| a.addr.cmp(&b.addr));
    if !raws[0].addr.is_empty() {
        return Err(UotError::Parse { line: 0, msg: "missing root node `0`".to_string() });
    }
    let mut nodes: Vec<UotNode> = Vec::new();
    let mut by_addr: HashMap<Vec<usize>, UotNodeId> = HashMap::new();
    for r in &raws {
        let parent = if r.addr.is_empty() {
            None
        } else {
            let mut pa = r.addr.clone();
            let k = pa.pop().unwrap();
            let pid = *by_addr.get(&pa).ok_or_else(|| UotError::Parse {
                line: 0,
                msg: format!("node 0.{:?} has no parent", r.addr),
            })?;
            if nodes[pid].children.len() != k {
                return Err(UotError::Parse {
                    line: 0,
                    msg: format!(
                        "child numbers of {} are not contiguous",
                        addr_to_string(&pa)
                    ),
                });
            }
            Some(pid)
        };
        let id = nodes.len();
        if by_addr.insert(r.addr.clone(), id).is_some() {
            return Err(UotError::Parse {
                line: 0,
                msg: format!("duplicate node {}", addr_to_string(&r.addr)),
            });
        }
        nodes.push(UotNode { label: r.label, parent, children: Vec::new() });
        if let Some(p) = parent {
            nodes[p].children.push(id);
        }
    }
    Ok(Uot { alphabet: alpha.clone(), nodes })
}

fn addr_to_string(addr: &[usize]) -> String {
    let mut s = String::from("0");
    for k in addr {
        s.push('.');
        s.push_str(&k.to_string());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::builtin_mcall;
    use crate::parser::parse;
    use crate::words::{load_word, random_compatible_word};

    fn mcall() -> Arc<OpAlphabet> {
        Arc::new(builtin_mcall())
    }

    fn wex(alpha: &Arc<OpAlphabet>) -> OpWord {
        load_word(
            alpha,
            "call{pA} han call{pB} call{pC} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}",
        )
        .unwrap()
    }

    #[test]
    fn tau_of_wex_matches_published_tree() {
        let alpha = mcall();
        let w = wex(&alpha);
        let cs = parse(&w).unwrap().chains;
        let (t, bij) = tau(&w, &cs);
        let expected = "\
0 #
  0.0 call{pA}
    0.0.0 han
      0.0.0.0 call{pB}
        0.0.0.0.0 call{pC}
          0.0.0.0.0.0 call{pC}
      0.0.0.1 exc
    0.0.1 call{pErr}
      0.0.1.0 ret{pErr}
    0.0.2 call{pErr}
      0.0.2.0 ret{pErr}
    0.0.3 ret{pA}
  0.1 #
";
        assert_eq!(t.serialize(), expected);
        // The exposed tables are mutually inverse and total.
        assert_eq!(bij.node_of.len(), w.universe_len());
        assert_eq!(bij.pos_of.len(), t.len());
        for pos in 0..w.universe_len() {
            assert_eq!(bij.pos_of[bij.node_of[pos]], pos);
        }
    }

    #[test]
    fn tau_of_tiny_words() {
        let alpha = mcall();
        let w = load_word(&alpha, "call ret").unwrap();
        let cs = parse(&w).unwrap().chains;
        let (t, _) = tau(&w, &cs);
        assert_eq!(t.serialize(), "0 #\n  0.0 call\n    0.0.0 ret\n  0.1 #\n");
        let w = load_word(&alpha, "").unwrap();
        let cs = parse(&w).unwrap().chains;
        let (t, _) = tau(&w, &cs);
        assert_eq!(t.serialize(), "0 #\n  0.0 #\n");
    }

    #[test]
    fn rc_follows_published_examples() {
        let alpha = mcall();
        let w = wex(&alpha);
        let cs = parse(&w).unwrap().chains;
        let (t, bij) = tau(&w, &cs);
        let rc_of_pos = |i: usize| t.rc(bij.node_of[i]).unwrap().map(|n| bij.pos_of[n]);
        assert_eq!(rc_of_pos(3), Some(6));
        assert_eq!(rc_of_pos(4), Some(6));
        assert_eq!(rc_of_pos(5), Some(6));
        assert_eq!(rc_of_pos(1), None); // its rightmost child 11 is an =-child
        assert_eq!(t.rc(t.root()).unwrap(), None);
    }

    #[test]
    fn compat_passes_on_tau_output_and_roundtrips() {
        let alpha = mcall();
        for seed in 0..80u64 {
            let w = random_compatible_word(&alpha, 12, seed).unwrap();
            let cs = parse(&w).unwrap().chains;
            let (t, _) = tau(&w, &cs);
            let report = check_compat(&t, &alpha);
            assert!(report.pass, "{:?} on {}", report.violation, w.serialize());
            let back = tau_inverse(&t, &alpha).unwrap();
            assert_eq!(back, w, "roundtrip of {}", w.serialize());
            assert_eq!(t.len(), w.universe_len());
        }
    }

    #[test]
    fn compat_rejects_mutated_trees() {
        let alpha = mcall();
        let w = wex(&alpha);
        let cs = parse(&w).unwrap().chains;
        let (mut t, bij) = tau(&w, &cs);
        // Relabeling position 3 to ret breaks its parent's child rule.
        t.nodes[bij.node_of[3]].label = alpha.label_set(&["ret"]).unwrap();
        let report = check_compat(&t, &alpha);
        assert!(!report.pass);

        // A root missing its #-labeled rightmost child.
        let (mut t2, _) = tau(&w, &cs);
        let root = t2.root();
        t2.nodes[root].children.pop();
        assert!(!check_compat(&t2, &alpha).pass);
    }

    #[test]
    fn serialize_load_roundtrip() {
        let alpha = mcall();
        let w = wex(&alpha);
        let cs = parse(&w).unwrap().chains;
        let (t, _) = tau(&w, &cs);
        let text = t.serialize();
        let t2 = load_tree(&alpha, &text).unwrap();
        assert_eq!(t2.serialize(), text);
        let back = tau_inverse(&t2, &alpha).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn children_precedences_in_tau_output() {
        let alpha = mcall();
        for seed in 0..40u64 {
            let w = random_compatible_word(&alpha, 12, seed).unwrap();
            let cs = parse(&w).unwrap().chains;
            let (t, _) = tau(&w, &cs);
            for (id, node) in t.nodes() {
                for (idx, &c) in node.children.iter().enumerate() {
                    let rel = alpha.precedence_of(node.label, t.node(c).label);
                    if idx + 1 < node.children.len() {
                        assert_eq!(rel, Some(PrecRel::Yields), "inner child at {}", id);
                    } else {
                        assert!(
                            matches!(rel, Some(PrecRel::Yields) | Some(PrecRel::Equals)),
                            "rightmost child at {}",
                            id
                        );
                    }
                }
            }
        }
    }
}
