//! Shared test oracles, independent of the implementation paths they check.

use std::collections::HashMap;

use opotl::alphabet::{OpAlphabet, PrecRel, StructId};
use opotl::words::OpWord;

/// Decides whether `body` is the body of a (simple or composed) chain with
/// the given contexts, straight from the recursive definition: some
/// decomposition `s0 c1 s1 .. cl sl` with `left < c1 = c2 .. = cl > right`
/// and every gap empty or itself a chain between its neighbors. Exponential
/// without memoization; this oracle is only ever used on short words.
pub fn is_chain(alpha: &OpAlphabet, left: StructId, body: &[StructId], right: StructId) -> bool {
    let mut memo = HashMap::new();
    chain_rec(alpha, body, left, 0, body.len(), right, &mut memo)
}

type Memo = HashMap<(StructId, usize, usize, StructId), bool>;

fn chain_rec(
    alpha: &OpAlphabet,
    lab: &[StructId],
    left: StructId,
    lo: usize,
    hi: usize,
    right: StructId,
    memo: &mut Memo,
) -> bool {
    if lo >= hi {
        return false;
    }
    if let Some(&v) = memo.get(&(left, lo, hi, right)) {
        return v;
    }
    // Guard against infinite recursion through the memo default.
    memo.insert((left, lo, hi, right), false);
    let mut found = false;
    for p in lo..hi {
        if alpha.rel(left, lab[p]) != Some(PrecRel::Yields) {
            continue;
        }
        let gap_ok = p == lo || chain_rec(alpha, lab, left, lo, p, lab[p], memo);
        if gap_ok && tail_rec(alpha, lab, p, hi, right, memo) {
            found = true;
            break;
        }
    }
    memo.insert((left, lo, hi, right), found);
    found
}

/// From the chain symbol at `p`, the remainder `[p+1, hi)` completes the
/// simple-chain skeleton ending with `> right`.
fn tail_rec(
    alpha: &OpAlphabet,
    lab: &[StructId],
    p: usize,
    hi: usize,
    right: StructId,
    memo: &mut Memo,
) -> bool {
    let c = lab[p];
    if alpha.rel(c, right) == Some(PrecRel::Takes)
        && (p + 1 == hi || chain_rec(alpha, lab, c, p + 1, hi, right, memo))
    {
        return true;
    }
    for q in p + 1..hi {
        if alpha.rel(c, lab[q]) != Some(PrecRel::Equals) {
            continue;
        }
        let gap_ok = p + 1 == q || chain_rec(alpha, lab, c, p + 1, q, lab[q], memo);
        if gap_ok && tail_rec(alpha, lab, q, hi, right, memo) {
            return true;
        }
    }
    false
}

/// Structural labels of all positions, delimiters included.
pub fn structural_ids(w: &OpWord) -> Vec<StructId> {
    w.labels().iter().map(|ls| ls.structural).collect()
}
