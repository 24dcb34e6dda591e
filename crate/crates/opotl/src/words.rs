//! Finite OP words: delimiter-bracketed sequences of labeled positions, text
//! I/O, and seeded random generation of OPM-compatible words.

use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::alphabet::{AlphabetError, LabelSet, OpAlphabet, PrecRel, StructId};

#[derive(Debug, Error)]
pub enum WordError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("token {index}: unknown proposition `{name}`")]
    UnknownProp { index: usize, name: String },
    #[error("token {index}: missing structural label in `{token}`")]
    MissingStructuralLabel { index: usize, token: String },
    #[error("no precedence relation between adjacent positions {0} and {1}")]
    AdjacentPrecedenceUndefined(usize, usize),
    #[error("position {0} out of range (word has positions 0..={1})")]
    PositionError(usize, usize),
    #[error("no compatible word with body length <= {max_body} found after {retries} attempts")]
    GenerationFailure { max_body: usize, retries: usize },
}

/// A finite OP word `<U, <, M, P>`: positions `0..=n+1` where positions `0`
/// and `n+1` carry exactly `{#}` and every interior position carries exactly
/// one structural label plus normal decorations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpWord {
    alphabet: Arc<OpAlphabet>,
    labels: Vec<LabelSet>,
}

impl OpWord {
    /// Builds a word from interior label sets, checking that every adjacent
    /// pair of positions has a defined precedence relation.
    pub fn new(alphabet: Arc<OpAlphabet>, body: Vec<LabelSet>) -> Result<OpWord, WordError> {
        let w = OpWord::new_unchecked(alphabet, body);
        if w.body_len() > 0 {
            for i in 0..=w.body_len() {
                if w.pr(i, i + 1).is_none() {
                    return Err(WordError::AdjacentPrecedenceUndefined(i, i + 1));
                }
            }
        }
        Ok(w)
    }

    /// Builds a word without the adjacent-precedence check. Useful for feeding
    /// arbitrary (possibly incompatible) strings to the parser or to automata,
    /// which report incompatibility themselves.
    pub fn new_unchecked(alphabet: Arc<OpAlphabet>, body: Vec<LabelSet>) -> OpWord {
        let mut labels = Vec::with_capacity(body.len() + 2);
        labels.push(LabelSet::delimiter());
        labels.extend(body);
        labels.push(LabelSet::delimiter());
        OpWord { alphabet, labels }
    }

    pub fn alphabet(&self) -> &Arc<OpAlphabet> {
        &self.alphabet
    }

    /// Number of interior positions `n`.
    pub fn body_len(&self) -> usize {
        self.labels.len() - 2
    }

    /// Total number of positions `n + 2` (including both delimiters).
    pub fn universe_len(&self) -> usize {
        self.labels.len()
    }

    /// Index of the final delimiter, `n + 1`.
    pub fn end(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn label(&self, i: usize) -> LabelSet {
        self.labels[i]
    }

    pub fn labels(&self) -> &[LabelSet] {
        &self.labels
    }

    pub fn is_delimiter(&self, i: usize) -> bool {
        i == 0 || i == self.end()
    }

    /// Precedence between positions `i` and `j` (any pair, not only adjacent),
    /// panicking on out-of-range indices. See [`pr_at`](Self::pr_at) for the
    /// checked variant.
    pub fn pr(&self, i: usize, j: usize) -> Option<PrecRel> {
        self.alphabet.precedence_of(self.labels[i], self.labels[j])
    }

    /// Checked precedence lookup between two positions.
    pub fn pr_at(&self, i: usize, j: usize) -> Result<Option<PrecRel>, WordError> {
        let last = self.end();
        if i > last {
            return Err(WordError::PositionError(i, last));
        }
        if j > last {
            return Err(WordError::PositionError(j, last));
        }
        Ok(self.pr(i, j))
    }

    /// True when the proposition named `name` holds at position `i`.
    /// `#` holds exactly at the delimiters.
    pub fn holds(&self, name: &str, i: usize) -> bool {
        let ls = self.labels[i];
        if let Some(sid) = self.alphabet.struct_id(name) {
            ls.structural == sid
        } else if let Some(nid) = self.alphabet.normal_id(name) {
            ls.has_normal(nid)
        } else {
            false
        }
    }

    /// Serializes the interior as whitespace-separated tokens (no delimiters).
    pub fn serialize(&self) -> String {
        self.labels[1..self.labels.len() - 1]
            .iter()
            .map(|ls| self.alphabet.display_label_set(*ls))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses a word from whitespace-separated tokens of the form `structural` or
/// `structural{normal1,normal2}`. The `#` delimiters are implicit.
pub fn load_word(alphabet: &Arc<OpAlphabet>, text: &str) -> Result<OpWord, WordError> {
    let mut body = Vec::new();
    for (index, token) in text.split_whitespace().enumerate() {
        let ls = alphabet.label_set_from_token(token).map_err(|e| match e {
            AlphabetError::UnknownProp(name) => WordError::UnknownProp { index, name },
            AlphabetError::InvalidLabelSet { .. } => WordError::MissingStructuralLabel {
                index,
                token: token.to_string(),
            },
            other => WordError::Alphabet(other),
        })?;
        if ls.is_delimiter() {
            return Err(WordError::MissingStructuralLabel { index, token: token.to_string() });
        }
        body.push(ls);
    }
    OpWord::new(alphabet.clone(), body)
}

/// Draws a uniformly random string over the structural labels (body length
/// uniform in `0..=max_body`), without any compatibility filtering. Normal
/// decorations are sampled independently.
pub fn random_string(alphabet: &Arc<OpAlphabet>, max_body: usize, seed: u64) -> OpWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(0..=max_body);
    let k = alphabet.structurals().len();
    let body = (0..len)
        .map(|_| {
            let mut ls = LabelSet::structural_only(rng.gen_range(1..k));
            for n in 0..alphabet.normals().len() {
                if rng.gen_bool(0.25) {
                    ls = ls.with_normal(n);
                }
            }
            ls
        })
        .collect();
    OpWord::new_unchecked(alphabet.clone(), body)
}

/// Generates a random OPM-compatible word with body length at most
/// `max_body`, deterministically from `seed`.
///
/// Generation is top-down over chain skeletons: a simple-chain body compatible
/// with the matrix is sampled between two contexts, then the gaps between its
/// symbols are recursively filled with sub-chains while budget remains. This
/// guarantees compatibility even for sparse matrices where rejection sampling
/// over `Σ*` would almost always fail.
pub fn random_compatible_word(
    alphabet: &Arc<OpAlphabet>,
    max_body: usize,
    seed: u64,
) -> Result<OpWord, WordError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const RETRIES: usize = 64;
    for _ in 0..RETRIES {
        let target = rng.gen_range(0..=max_body);
        if target == 0 {
            return OpWord::new(alphabet.clone(), Vec::new());
        }
        if let Some(skeleton) = gen_chain(alphabet, &mut rng, 0, 0, target) {
            let body = skeleton
                .into_iter()
                .map(|sid| {
                    let mut ls = LabelSet::structural_only(sid);
                    for n in 0..alphabet.normals().len() {
                        if rng.gen_bool(0.25) {
                            ls = ls.with_normal(n);
                        }
                    }
                    ls
                })
                .collect();
            return OpWord::new(alphabet.clone(), body);
        }
    }
    Err(WordError::GenerationFailure { max_body, retries: RETRIES })
}

/// Samples the body of one chain with contexts `left` and `right`:
/// a simple-chain skeleton `c1 .. cl` with `left < c1`, `ci = ci+1`,
/// `cl > right`, whose gaps are recursively expanded while budget remains.
fn gen_chain(
    alpha: &OpAlphabet,
    rng: &mut ChaCha8Rng,
    left: StructId,
    right: StructId,
    budget: usize,
) -> Option<Vec<StructId>> {
    if budget == 0 {
        return None;
    }
    let skeleton = sample_simple_skeleton(alpha, rng, left, right, budget)?;
    let mut remaining = budget - skeleton.len();
    // Gap g sits between contexts gap_ctx[g] and gap_ctx[g + 1].
    let mut gap_ctx = Vec::with_capacity(skeleton.len() + 2);
    gap_ctx.push(left);
    gap_ctx.extend(skeleton.iter().copied());
    gap_ctx.push(right);
    let gaps = skeleton.len() + 1;
    let mut order: Vec<usize> = (0..gaps).collect();
    order.shuffle(rng);
    let mut sub: Vec<Vec<StructId>> = vec![Vec::new(); gaps];
    for g in order {
        if remaining == 0 {
            break;
        }
        if !rng.gen_bool(0.6) {
            continue;
        }
        let size = rng.gen_range(1..=remaining);
        if let Some(body) = gen_chain(alpha, rng, gap_ctx[g], gap_ctx[g + 1], size) {
            remaining -= body.len();
            sub[g] = body;
        }
    }
    let mut out = Vec::new();
    for (g, gap_body) in sub.iter().enumerate() {
        out.extend(gap_body.iter().copied());
        if g < skeleton.len() {
            out.push(skeleton[g]);
        }
    }
    Some(out)
}

/// Samples `c1 .. cl` with `left < c1 (= c2 = ..) > right` and `l <= budget`.
/// Falls back to a shortest feasible sequence found by BFS when random walks
/// keep failing, and returns `None` when none exists at all.
fn sample_simple_skeleton(
    alpha: &OpAlphabet,
    rng: &mut ChaCha8Rng,
    left: StructId,
    right: StructId,
    budget: usize,
) -> Option<Vec<StructId>> {
    let k = alpha.structurals().len();
    let starts: Vec<StructId> =
        (1..k).filter(|&c| alpha.rel(left, c) == Some(PrecRel::Yields)).collect();
    if starts.is_empty() {
        return None;
    }
    for _ in 0..16 {
        let mut cur = *starts.choose(rng)?;
        let mut seq = vec![cur];
        loop {
            let can_close = alpha.rel(cur, right) == Some(PrecRel::Takes);
            let nexts: Vec<StructId> =
                (1..k).filter(|&c| alpha.rel(cur, c) == Some(PrecRel::Equals)).collect();
            if can_close && (nexts.is_empty() || seq.len() >= budget || rng.gen_bool(0.5)) {
                return Some(seq);
            }
            if nexts.is_empty() || seq.len() >= budget {
                break;
            }
            cur = *nexts.choose(rng)?;
            seq.push(cur);
        }
    }
    // BFS over (symbol) for a shortest equals-chain ending in a closer.
    let mut pred: Vec<Option<StructId>> = vec![None; k];
    let mut seen = vec![false; k];
    let mut queue: std::collections::VecDeque<StructId> = Default::default();
    for &s in &starts {
        seen[s] = true;
        queue.push_back(s);
    }
    let mut dist = vec![0usize; k];
    for &s in &starts {
        dist[s] = 1;
    }
    while let Some(cur) = queue.pop_front() {
        if alpha.rel(cur, right) == Some(PrecRel::Takes) && dist[cur] <= budget {
            let mut seq = vec![cur];
            let mut p = cur;
            while let Some(prev) = pred[p] {
                seq.push(prev);
                p = prev;
            }
            seq.reverse();
            return Some(seq);
        }
        for c in 1..k {
            if !seen[c] && alpha.rel(cur, c) == Some(PrecRel::Equals) && dist[cur] < budget {
                seen[c] = true;
                dist[c] = dist[cur] + 1;
                pred[c] = Some(cur);
                queue.push_back(c);
            }
        }
    }
    None
}
