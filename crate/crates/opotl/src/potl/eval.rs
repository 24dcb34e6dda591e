//! POTL evaluation over finite OP words.
//!
//! Every subformula is labeled bottom-up with the set of positions where it
//! holds. Next/back and chain operators are direct set transforms. Summary
//! until (resp. since) is computed by one backward (resp. forward) sweep of
//! its expansion law, which is exact because both successor edges strictly
//! increase (resp. decrease) the position. Hierarchical until/since iterate
//! the hierarchical successor edge within each context cluster.

use std::collections::HashMap;

use crate::alphabet::PrecRel;
use crate::parser::ChainSet;
use crate::potl::ast::{Dir, PotlFormula, PrSet};
use crate::words::{OpWord, WordError};

/// Precomputed relations of one word under one chain set: successor
/// precedences, chain contexts, and the hierarchical clusters.
pub struct WordContext<'a> {
    pub word: &'a OpWord,
    pub chains: &'a ChainSet,
    /// `succ_pr[i]` is the precedence between `i` and `i + 1`.
    succ_pr: Vec<Option<PrecRel>>,
    /// For each position, its chain right contexts with their precedences.
    rights: Vec<Vec<(usize, Option<PrecRel>)>>,
    /// For each position, its chain left contexts with their precedences.
    lefts: Vec<Vec<(usize, Option<PrecRel>)>>,
    /// `up_cluster_of[i]`: the sorted `<`-right-contexts of `i`.
    up_clusters: Vec<Vec<usize>>,
    /// `down_clusters[h]`: the sorted `>`-left-contexts of `h`.
    down_clusters: Vec<Vec<usize>>,
    /// `up_anchor[i] = Some(h)` when `χ(h, i)` and `h < i` (unique if any).
    up_anchor: Vec<Option<usize>>,
    /// `down_anchor[i] = Some(h)` when `χ(i, h)` and `i > h` (unique if any).
    down_anchor: Vec<Option<usize>>,
}

impl<'a> WordContext<'a> {
    pub fn new(word: &'a OpWord, chains: &'a ChainSet) -> WordContext<'a> {
        let n = word.universe_len();
        let mut succ_pr = vec![None; n];
        for i in 0..n - 1 {
            succ_pr[i] = word.pr(i, i + 1);
        }
        let mut rights = vec![Vec::new(); n];
        let mut lefts = vec![Vec::new(); n];
        for (i, j) in chains.pairs() {
            let pr = word.pr(i, j);
            rights[i].push((j, pr));
            lefts[j].push((i, pr));
        }
        for v in rights.iter_mut().chain(lefts.iter_mut()) {
            v.sort_unstable_by_key(|(p, _)| *p);
        }
        let mut up_clusters = vec![Vec::new(); n];
        let mut down_clusters = vec![Vec::new(); n];
        let mut up_anchor = vec![None; n];
        let mut down_anchor = vec![None; n];
        for i in 0..n {
            for &(j, pr) in &rights[i] {
                if pr == Some(PrecRel::Yields) {
                    up_clusters[i].push(j);
                    // By the many-to-one shape of the chain relation only one
                    // left context of j can be in the `<` relation with it.
                    up_anchor[j] = Some(i);
                }
            }
        }
        for h in 0..n {
            for &(k, pr) in &lefts[h] {
                if pr == Some(PrecRel::Takes) {
                    down_clusters[h].push(k);
                    // One-to-many shape: only one right context of k is `>`.
                    down_anchor[k] = Some(h);
                }
            }
        }
        WordContext {
            word,
            chains,
            succ_pr,
            rights,
            lefts,
            up_clusters,
            down_clusters,
            up_anchor,
            down_anchor,
        }
    }

    pub fn len(&self) -> usize {
        self.word.universe_len()
    }

    pub fn succ_pr(&self, i: usize) -> Option<PrecRel> {
        self.succ_pr[i]
    }

    pub fn rights(&self, i: usize) -> &[(usize, Option<PrecRel>)] {
        &self.rights[i]
    }

    pub fn lefts(&self, i: usize) -> &[(usize, Option<PrecRel>)] {
        &self.lefts[i]
    }

    pub fn up_anchor(&self, i: usize) -> Option<usize> {
        self.up_anchor[i]
    }

    pub fn down_anchor(&self, i: usize) -> Option<usize> {
        self.down_anchor[i]
    }

    pub fn up_cluster(&self, h: usize) -> &[usize] {
        &self.up_clusters[h]
    }

    pub fn down_cluster(&self, h: usize) -> &[usize] {
        &self.down_clusters[h]
    }
}

/// Per-subformula truth sets produced by [`eval`].
pub struct EvalResult {
    universe: usize,
    sets: HashMap<PotlFormula, Vec<bool>>,
}

impl EvalResult {
    /// True when `f` holds at position `i`. Panics if `f` is not a subformula
    /// of the evaluated formula.
    pub fn holds(&self, f: &PotlFormula, i: usize) -> bool {
        self.sets[f][i]
    }

    /// All positions (delimiters included) where `f` holds.
    pub fn positions(&self, f: &PotlFormula) -> Vec<usize> {
        (0..self.universe).filter(|&i| self.sets[f][i]).collect()
    }

    /// Interior positions where `f` holds.
    pub fn interior_positions(&self, f: &PotlFormula) -> Vec<usize> {
        (1..self.universe - 1).filter(|&i| self.sets[f][i]).collect()
    }

    pub fn universe_len(&self) -> usize {
        self.universe
    }
}

/// Evaluates `f` and all its subformulas over `w` with chain set `cs`
/// (which must be the parse of `w`).
pub fn eval(f: &PotlFormula, w: &OpWord, cs: &ChainSet) -> EvalResult {
    let ctx = WordContext::new(w, cs);
    let mut sets: HashMap<PotlFormula, Vec<bool>> = HashMap::new();
    eval_into(f, &ctx, &mut sets);
    EvalResult { universe: ctx.len(), sets }
}

fn eval_into(f: &PotlFormula, ctx: &WordContext, sets: &mut HashMap<PotlFormula, Vec<bool>>) {
    if sets.contains_key(f) {
        return;
    }
    use PotlFormula::*;
    let n = ctx.len();
    let set = match f {
        True => vec![true; n],
        Atom(a) => (0..n).map(|i| ctx.word.holds(a, i)).collect(),
        Not(a) => {
            eval_into(a, ctx, sets);
            let sa = &sets[a.as_ref()];
            (0..n).map(|i| !sa[i]).collect()
        }
        And(a, b) => {
            eval_into(a, ctx, sets);
            eval_into(b, ctx, sets);
            let (sa, sb) = (&sets[a.as_ref()], &sets[b.as_ref()]);
            (0..n).map(|i| sa[i] && sb[i]).collect()
        }
        Or(a, b) => {
            eval_into(a, ctx, sets);
            eval_into(b, ctx, sets);
            let (sa, sb) = (&sets[a.as_ref()], &sets[b.as_ref()]);
            (0..n).map(|i| sa[i] || sb[i]).collect()
        }
        Implies(a, b) => {
            eval_into(a, ctx, sets);
            eval_into(b, ctx, sets);
            let (sa, sb) = (&sets[a.as_ref()], &sets[b.as_ref()]);
            (0..n).map(|i| !sa[i] || sb[i]).collect()
        }
        Next(d, a) => {
            eval_into(a, ctx, sets);
            next_set(d.prs(), &sets[a.as_ref()], ctx)
        }
        NextPr(s, a) => {
            eval_into(a, ctx, sets);
            next_set(*s, &sets[a.as_ref()], ctx)
        }
        Back(d, a) => {
            eval_into(a, ctx, sets);
            back_set(d.prs(), &sets[a.as_ref()], ctx)
        }
        BackPr(s, a) => {
            eval_into(a, ctx, sets);
            back_set(*s, &sets[a.as_ref()], ctx)
        }
        ChainNext(d, a) => {
            eval_into(a, ctx, sets);
            chain_next_set(d.prs(), &sets[a.as_ref()], ctx)
        }
        ChainNextPr(s, a) => {
            eval_into(a, ctx, sets);
            chain_next_set(*s, &sets[a.as_ref()], ctx)
        }
        ChainBack(d, a) => {
            eval_into(a, ctx, sets);
            chain_back_set(d.prs(), &sets[a.as_ref()], ctx)
        }
        ChainBackPr(s, a) => {
            eval_into(a, ctx, sets);
            chain_back_set(*s, &sets[a.as_ref()], ctx)
        }
        Until(d, a, b) => {
            eval_into(a, ctx, sets);
            eval_into(b, ctx, sets);
            until_set(d.prs(), &sets[a.as_ref()], &sets[b.as_ref()], ctx)
        }
        Since(d, a, b) => {
            eval_into(a, ctx, sets);
            eval_into(b, ctx, sets);
            since_set(d.prs(), &sets[a.as_ref()], &sets[b.as_ref()], ctx)
        }
        HNext(d, a) => {
            eval_into(a, ctx, sets);
            hnext_set(*d, &sets[a.as_ref()], ctx)
        }
        HBack(d, a) => {
            eval_into(a, ctx, sets);
            hback_set(*d, &sets[a.as_ref()], ctx)
        }
        HUntil(d, a, b) => {
            eval_into(a, ctx, sets);
            eval_into(b, ctx, sets);
            huntil_set(*d, &sets[a.as_ref()], &sets[b.as_ref()], ctx)
        }
        HSince(d, a, b) => {
            eval_into(a, ctx, sets);
            eval_into(b, ctx, sets);
            hsince_set(*d, &sets[a.as_ref()], &sets[b.as_ref()], ctx)
        }
    };
    sets.insert(f.clone(), set);
}

fn next_set(prs: PrSet, sa: &[bool], ctx: &WordContext) -> Vec<bool> {
    let n = ctx.len();
    (0..n).map(|i| i + 1 < n && prs.admits(ctx.succ_pr(i)) && sa[i + 1]).collect()
}

fn back_set(prs: PrSet, sa: &[bool], ctx: &WordContext) -> Vec<bool> {
    let n = ctx.len();
    (0..n).map(|i| i > 0 && prs.admits(ctx.succ_pr(i - 1)) && sa[i - 1]).collect()
}

fn chain_next_set(prs: PrSet, sa: &[bool], ctx: &WordContext) -> Vec<bool> {
    (0..ctx.len())
        .map(|i| ctx.rights(i).iter().any(|&(j, pr)| prs.admits(pr) && sa[j]))
        .collect()
}

fn chain_back_set(prs: PrSet, sa: &[bool], ctx: &WordContext) -> Vec<bool> {
    (0..ctx.len())
        .map(|i| ctx.lefts(i).iter().any(|&(j, pr)| prs.admits(pr) && sa[j]))
        .collect()
}

/// Backward sweep of the summary-until expansion law: both successor edges
/// (linear successor and chain jump) point strictly forward, so one pass in
/// decreasing position order computes the exact fixpoint.
fn until_set(prs: PrSet, sa: &[bool], sb: &[bool], ctx: &WordContext) -> Vec<bool> {
    let n = ctx.len();
    let mut out = vec![false; n];
    for i in (0..n).rev() {
        let step = i + 1 < n && prs.admits(ctx.succ_pr(i)) && out[i + 1];
        let jump =
            || ctx.rights(i).iter().any(|&(j, pr)| prs.admits(pr) && out[j]);
        out[i] = sb[i] || (sa[i] && (step || jump()));
    }
    out
}

fn since_set(prs: PrSet, sa: &[bool], sb: &[bool], ctx: &WordContext) -> Vec<bool> {
    let n = ctx.len();
    let mut out = vec![false; n];
    for i in 0..n {
        let step = i > 0 && prs.admits(ctx.succ_pr(i - 1)) && out[i - 1];
        let jump = || ctx.lefts(i).iter().any(|&(j, pr)| prs.admits(pr) && out[j]);
        out[i] = sb[i] || (sa[i] && (step || jump()));
    }
    out
}

fn cluster_of<'c>(d: Dir, ctx: &'c WordContext, i: usize) -> Option<&'c [usize]> {
    match d {
        Dir::Up => ctx.up_anchor(i).map(|h| ctx.up_cluster(h)),
        Dir::Down => ctx.down_anchor(i).map(|h| ctx.down_cluster(h)),
    }
}

/// The hierarchical successor of `i`, if any: the next inner context of the
/// cluster `i` belongs to.
fn hsucc(d: Dir, ctx: &WordContext, i: usize) -> Option<usize> {
    let c = cluster_of(d, ctx, i)?;
    let idx = c.iter().position(|&k| k == i)?;
    c.get(idx + 1).copied()
}

fn hpred(d: Dir, ctx: &WordContext, i: usize) -> Option<usize> {
    let c = cluster_of(d, ctx, i)?;
    let idx = c.iter().position(|&k| k == i)?;
    idx.checked_sub(1).map(|p| c[p])
}

fn hnext_set(d: Dir, sa: &[bool], ctx: &WordContext) -> Vec<bool> {
    (0..ctx.len()).map(|i| hsucc(d, ctx, i).map_or(false, |j| sa[j])).collect()
}

fn hback_set(d: Dir, sa: &[bool], ctx: &WordContext) -> Vec<bool> {
    (0..ctx.len()).map(|i| hpred(d, ctx, i).map_or(false, |j| sa[j])).collect()
}

/// Hierarchical until along a cluster: a path of consecutive inner contexts
/// starting at the evaluation position, with `b` at its end and `a` before.
/// The singleton path only requires membership in some cluster.
fn huntil_set(d: Dir, sa: &[bool], sb: &[bool], ctx: &WordContext) -> Vec<bool> {
    let n = ctx.len();
    let mut out = vec![false; n];
    for h in 0..n {
        let cluster = match d {
            Dir::Up => ctx.up_cluster(h),
            Dir::Down => ctx.down_cluster(h),
        };
        for idx in (0..cluster.len()).rev() {
            let i = cluster[idx];
            let cont = idx + 1 < cluster.len() && out[cluster[idx + 1]];
            out[i] = sb[i] || (sa[i] && cont);
        }
    }
    out
}

fn hsince_set(d: Dir, sa: &[bool], sb: &[bool], ctx: &WordContext) -> Vec<bool> {
    let n = ctx.len();
    let mut out = vec![false; n];
    for h in 0..n {
        let cluster = match d {
            Dir::Up => ctx.up_cluster(h),
            Dir::Down => ctx.down_cluster(h),
        };
        for idx in 0..cluster.len() {
            let i = cluster[idx];
            let cont = idx > 0 && out[cluster[idx - 1]];
            out[i] = sb[i] || (sa[i] && cont);
        }
    }
    out
}

fn check_positions(w: &OpWord, i: usize, j: usize) -> Result<(), WordError> {
    let last = w.end();
    if i > last {
        return Err(WordError::PositionError(i, last));
    }
    if j > last {
        return Err(WordError::PositionError(j, last));
    }
    Ok(())
}

/// The downward summary path between `i` and `j`, per the maximal-jump
/// recurrence: the successor of `p` is the greatest chain target `<= j` among
/// the `<`/`=` chains from `p`, else `p + 1` when the precedence allows. With
/// `i > j` the since-direction path (built backward from `i` with minimal
/// backward jumps `>= j`) is returned instead. `None` when the recurrence
/// blocks before reaching the far end.
pub fn dsp(w: &OpWord, cs: &ChainSet, i: usize, j: usize) -> Result<Option<Vec<usize>>, WordError> {
    summary_path(w, cs, i, j, PrSet::YIELDS_EQUALS)
}

/// The upward summary path between `i` and `j`; as [`dsp`] with `>`/`=`.
pub fn usp(w: &OpWord, cs: &ChainSet, i: usize, j: usize) -> Result<Option<Vec<usize>>, WordError> {
    summary_path(w, cs, i, j, PrSet::TAKES_EQUALS)
}

fn summary_path(
    w: &OpWord,
    cs: &ChainSet,
    i: usize,
    j: usize,
    prs: PrSet,
) -> Result<Option<Vec<usize>>, WordError> {
    check_positions(w, i, j)?;
    let ctx = WordContext::new(w, cs);
    if i <= j {
        let mut path = vec![i];
        let mut cur = i;
        while cur < j {
            let jump = ctx
                .rights(cur)
                .iter()
                .filter(|&&(k, pr)| k <= j && prs.admits(pr))
                .map(|&(k, _)| k)
                .max();
            let next = match jump {
                Some(k) => k,
                None if prs.admits(ctx.succ_pr(cur)) => cur + 1,
                None => return Ok(None),
            };
            path.push(next);
            cur = next;
        }
        Ok(Some(path))
    } else {
        let mut path = vec![i];
        let mut cur = i;
        while cur > j {
            let jump = ctx
                .lefts(cur)
                .iter()
                .filter(|&&(k, pr)| k >= j && prs.admits(pr))
                .map(|&(k, _)| k)
                .min();
            let next = match jump {
                Some(k) => k,
                None if cur >= 1 && prs.admits(ctx.succ_pr(cur - 1)) => cur - 1,
                None => return Ok(None),
            };
            path.push(next);
            cur = next;
        }
        path.reverse();
        Ok(Some(path))
    }
}

/// The upward hierarchical path between `i` and `j`: the run of consecutive
/// `<`-right-contexts of `i`'s anchor from `i` to `j`.
pub fn uhp(w: &OpWord, cs: &ChainSet, i: usize, j: usize) -> Result<Option<Vec<usize>>, WordError> {
    hierarchical_path(w, cs, i, j, Dir::Up)
}

/// The downward hierarchical path between `i` and `j` over `>`-left-contexts.
pub fn dhp(w: &OpWord, cs: &ChainSet, i: usize, j: usize) -> Result<Option<Vec<usize>>, WordError> {
    hierarchical_path(w, cs, i, j, Dir::Down)
}

fn hierarchical_path(
    w: &OpWord,
    cs: &ChainSet,
    i: usize,
    j: usize,
    d: Dir,
) -> Result<Option<Vec<usize>>, WordError> {
    check_positions(w, i, j)?;
    let ctx = WordContext::new(w, cs);
    let (lo, hi) = (i.min(j), i.max(j));
    let anchor = match d {
        Dir::Up => ctx.up_anchor(lo),
        Dir::Down => ctx.down_anchor(lo),
    };
    let h = match anchor {
        Some(h) => h,
        None => return Ok(None),
    };
    let cluster = match d {
        Dir::Up => ctx.up_cluster(h),
        Dir::Down => ctx.down_cluster(h),
    };
    let a = cluster.iter().position(|&k| k == lo);
    let b = cluster.iter().position(|&k| k == hi);
    match (a, b) {
        (Some(a), Some(b)) => Ok(Some(cluster[a..=b].to_vec())),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::builtin_mcall;
    use crate::parser::parse;
    use crate::potl::ast::PotlFormula as F;
    use crate::words::load_word;
    use std::sync::Arc;

    fn wex() -> (OpWord, ChainSet) {
        let alpha = Arc::new(builtin_mcall());
        let w = load_word(
            &alpha,
            "call{pA} han call{pB} call{pC} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}",
        )
        .unwrap();
        let cs = parse(&w).unwrap().chains;
        (w, cs)
    }

    fn interior(f: &str, w: &OpWord, cs: &ChainSet) -> Vec<usize> {
        let f: F = f.parse().unwrap();
        eval(&f, w, cs).interior_positions(&f)
    }

    fn holds_at(f: &str, i: usize, w: &OpWord, cs: &ChainSet) -> bool {
        let f: F = f.parse().unwrap();
        eval(&f, w, cs).holds(&f, i)
    }

    #[test]
    fn next_and_back_examples() {
        let (w, cs) = wex();
        assert_eq!(interior("Nd call", &w, &cs), vec![2, 3, 4]);
        assert_eq!(interior("Bd call", &w, &cs), vec![2, 4, 5, 8, 10]);
        assert_eq!(interior("Bu call", &w, &cs), vec![6, 8, 10]);
        assert!(holds_at("Nd pB", 2, &w, &cs));
        assert!(!holds_at("Nu pB", 2, &w, &cs));
    }

    #[test]
    fn chain_next_and_back_examples() {
        let (w, cs) = wex();
        assert!(holds_at("CNd pErr", 1, &w, &cs));
        let mut calls_with_cnu_exc: Vec<usize> = interior("CNu exc", &w, &cs)
            .into_iter()
            .filter(|&i| w.holds("call", i))
            .collect();
        calls_with_cnu_exc.sort_unstable();
        assert_eq!(calls_with_cnu_exc, vec![3, 4]);
        assert!(holds_at("CBu call", 6, &w, &cs));
        assert!(holds_at("CNd ret", 1, &w, &cs) || holds_at("CNu ret", 1, &w, &cs));
    }

    #[test]
    fn summary_until_since_examples() {
        let (w, cs) = wex();
        assert!(holds_at("call Ud (ret & pErr)", 1, &w, &cs));
        assert!(holds_at("(call | exc) Su pB", 7, &w, &cs));
        assert!(holds_at("T Uu exc", 3, &w, &cs));
        assert!(!holds_at("T Uu exc", 1, &w, &cs));
        assert!(holds_at("(call | exc) Uu ret", 3, &w, &cs));
    }

    #[test]
    fn hierarchical_examples() {
        let (w, cs) = wex();
        assert!(holds_at("HNu pErr", 7, &w, &cs));
        assert!(holds_at("HBu pErr", 9, &w, &cs));
        assert!(!holds_at("HNu ret", 9, &w, &cs));
        assert!(holds_at("call HUd pC", 3, &w, &cs));
        assert!(holds_at("call HSd pB", 4, &w, &cs));
        assert!(holds_at("call HUu pErr", 7, &w, &cs));
        assert!(holds_at("call HSu pErr", 9, &w, &cs));
    }

    #[test]
    fn derived_and_shortcut_examples() {
        let (w, cs) = wex();
        let callthr = F::call_thr(F::True);
        let r = eval(&callthr, &w, &cs);
        assert!(r.holds(&callthr, 3));
        assert!(r.holds(&callthr, 4));
        assert!(r.holds(&callthr, 5));
        assert!(!r.holds(&callthr, 1));
        // Vacuous globally holds at position 0 on a word without exc.
        let alpha = w.alphabet().clone();
        let w2 = load_word(&alpha, "call ret").unwrap();
        let cs2 = parse(&w2).unwrap().chains;
        let g = F::ltl_globally(F::not(F::atom("exc")));
        assert!(eval(&g, &w2, &cs2).holds(&g, 0));
        // Fd pErr at 1.
        assert!(holds_at("Fd pErr", 1, &w, &cs));
    }

    #[test]
    fn filtered_primitives_match_directional_operators() {
        let (w, cs) = wex();
        for base in ["call", "ret", "exc", "pErr", "#"] {
            let a = format!("CN[<=] {}", base);
            let b = format!("CNd {}", base);
            let fa: F = a.parse().unwrap();
            let fb: F = b.parse().unwrap();
            let ra = eval(&fa, &w, &cs);
            let rb = eval(&fb, &w, &cs);
            assert_eq!(ra.positions(&fa), rb.positions(&fb));
            let a = format!("CB[>=] {}", base);
            let b = format!("CBu {}", base);
            let fa: F = a.parse().unwrap();
            let fb: F = b.parse().unwrap();
            let ra = eval(&fa, &w, &cs);
            let rb = eval(&fb, &w, &cs);
            assert_eq!(ra.positions(&fa), rb.positions(&fb));
        }
    }

    #[test]
    fn summary_paths_match_published_examples() {
        let (w, cs) = wex();
        assert_eq!(dsp(&w, &cs, 1, 8).unwrap(), Some(vec![1, 7, 8]));
        assert_eq!(usp(&w, &cs, 3, 7).unwrap(), Some(vec![3, 6, 7]));
        assert_eq!(dsp(&w, &cs, 5, 5).unwrap(), Some(vec![5]));
        assert_eq!(dsp(&w, &cs, 1, 6).unwrap(), Some(vec![1, 2, 6]));
        assert!(dsp(&w, &cs, 99, 1).is_err());
    }

    #[test]
    fn hierarchical_paths_match_published_examples() {
        let (w, cs) = wex();
        assert_eq!(uhp(&w, &cs, 7, 9).unwrap(), Some(vec![7, 9]));
        assert_eq!(dhp(&w, &cs, 3, 4).unwrap(), Some(vec![3, 4]));
        assert_eq!(uhp(&w, &cs, 7, 11).unwrap(), None); // 11 is the `=` context
        assert_eq!(dhp(&w, &cs, 2, 4).unwrap(), None); // 2 is the `=` context
    }

    #[test]
    fn until_includes_the_current_position() {
        let (w, cs) = wex();
        // T Ud T and T Uu T hold everywhere thanks to singleton paths.
        for i in 0..w.universe_len() {
            assert!(holds_at("T Ud T", i, &w, &cs));
            assert!(holds_at("T Uu T", i, &w, &cs));
        }
    }

    #[test]
    fn eventually_coincides_with_path_reachability() {
        // T U a holds exactly where some maximal-jump path reaches an
        // a-position: the sweep and the recurrence are two routes to the
        // same semantics.
        let alpha = Arc::new(crate::alphabet::builtin_mcall());
        for seed in 0..40u64 {
            let w = crate::words::random_compatible_word(&alpha, 10, seed).unwrap();
            let cs = parse(&w).unwrap().chains;
            for atom in ["call", "exc", "pErr", "#"] {
                for d in ["d", "u"] {
                    let f: F = format!("T U{} {}", d, atom).parse().unwrap();
                    let g: F = format!("T S{} {}", d, atom).parse().unwrap();
                    let rf = eval(&f, &w, &cs);
                    let rg = eval(&g, &w, &cs);
                    let path = |i: usize, j: usize| {
                        if d == "d" {
                            dsp(&w, &cs, i, j).unwrap()
                        } else {
                            usp(&w, &cs, i, j).unwrap()
                        }
                    };
                    for i in 0..w.universe_len() {
                        let until_expected = (i..w.universe_len())
                            .any(|j| w.holds(atom, j) && path(i, j).is_some());
                        assert_eq!(rf.holds(&f, i), until_expected, "until {} {}@{}", d, atom, i);
                        let since_expected =
                            (0..=i).any(|j| w.holds(atom, j) && path(i, j).is_some());
                        assert_eq!(rg.holds(&g, i), since_expected, "since {} {}@{}", d, atom, i);
                    }
                }
            }
        }
    }

    #[test]
    fn hierarchical_until_coincides_with_hierarchical_paths() {
        let alpha = Arc::new(crate::alphabet::builtin_mcall());
        for seed in 0..40u64 {
            let w = crate::words::random_compatible_word(&alpha, 10, seed).unwrap();
            let cs = parse(&w).unwrap().chains;
            for atom in ["call", "ret", "pErr"] {
                let f: F = format!("T HUu {}", atom).parse().unwrap();
                let rf = eval(&f, &w, &cs);
                for i in 0..w.universe_len() {
                    let expected = (i..w.universe_len())
                        .any(|j| w.holds(atom, j) && uhp(&w, &cs, i, j).unwrap().is_some());
                    assert_eq!(rf.holds(&f, i), expected, "HUu {} at {}", atom, i);
                }
                let f: F = format!("T HUd {}", atom).parse().unwrap();
                let rf = eval(&f, &w, &cs);
                for i in 0..w.universe_len() {
                    let expected = (i..w.universe_len())
                        .any(|j| w.holds(atom, j) && dhp(&w, &cs, i, j).unwrap().is_some());
                    assert_eq!(rf.holds(&f, i), expected, "HUd {} at {}", atom, i);
                }
            }
        }
    }

    #[test]
    fn hierarchical_ops_need_a_cluster() {
        let (w, cs) = wex();
        // Position 6's left contexts are 2 (`=`), 3 and 4 (`>`): no `<`
        // anchor, so upward hierarchical operators are all false there.
        assert!(!holds_at("T HUu T", 6, &w, &cs));
        assert!(!holds_at("HNu T", 6, &w, &cs));
        // Positions 7 and 9 sit in the cluster of anchor 1.
        assert!(holds_at("T HUu T", 7, &w, &cs));
        assert!(holds_at("T HSu T", 9, &w, &cs));
    }
}
