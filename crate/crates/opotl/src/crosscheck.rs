//! Randomized equivalence suites: seeded generators for formulas and
//! matrices, and the cross-checks pitting the POTL evaluator against its
//! independent oracles (the FO brute-force evaluator, the tree-logic
//! evaluator, the direct LTL evaluator, and the expansion laws).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

use crate::alphabet::{OpAlphabet, PrecRel};
use crate::fol::{fo_eval_with_limits, nu, Assignment, FoLimits};
use crate::parser::{parse, validate_chain_properties};
use crate::potl::ast::{Dir, PotlFormula, PrSet};
use crate::potl::eval::eval;
use crate::potl::ltl::{ltl_eval, translate_ltl, LtlFormula};
use crate::uot::tau;
use crate::words::random_compatible_word;
use crate::xuntil::{iota, xeval, Axis, XuntilFormula};

/// Outcome of one randomized suite: number of position-level cases checked
/// and the first few disagreements, if any.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub words: usize,
    pub formulas: usize,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!(
                "{}: pass ({} words x {} formulas, {} cases)",
                self.suite, self.words, self.formulas, self.cases
            )
        } else {
            format!(
                "{}: FAIL ({} cases, {} disagreements; first: {})",
                self.suite,
                self.cases,
                self.failures.len(),
                self.failures[0]
            )
        }
    }
}

/// Seeded random POTL formula over the full operator set.
pub fn gen_potl_formula(rng: &mut ChaCha8Rng, depth: usize, atoms: &[&str]) -> PotlFormula {
    use PotlFormula as P;
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => P::True,
            _ => P::atom(atoms.choose(rng).unwrap()),
        };
    }
    let d = if rng.gen_bool(0.5) { Dir::Down } else { Dir::Up };
    let s = *[
        PrSet::YIELDS,
        PrSet::EQUALS,
        PrSet::TAKES,
        PrSet::YIELDS_EQUALS,
        PrSet::TAKES_EQUALS,
    ]
    .choose(rng)
    .unwrap();
    match rng.gen_range(0..16) {
        0 => P::not(gen_potl_formula(rng, depth - 1, atoms)),
        1 => P::and(gen_potl_formula(rng, depth - 1, atoms), gen_potl_formula(rng, depth - 1, atoms)),
        2 => P::or(gen_potl_formula(rng, depth - 1, atoms), gen_potl_formula(rng, depth - 1, atoms)),
        3 => P::next(d, gen_potl_formula(rng, depth - 1, atoms)),
        4 => P::back(d, gen_potl_formula(rng, depth - 1, atoms)),
        5 => P::chain_next(d, gen_potl_formula(rng, depth - 1, atoms)),
        6 => P::chain_back(d, gen_potl_formula(rng, depth - 1, atoms)),
        7 => P::until(d, gen_potl_formula(rng, depth - 1, atoms), gen_potl_formula(rng, depth - 1, atoms)),
        8 => P::since(d, gen_potl_formula(rng, depth - 1, atoms), gen_potl_formula(rng, depth - 1, atoms)),
        9 => P::hnext(d, gen_potl_formula(rng, depth - 1, atoms)),
        10 => P::hback(d, gen_potl_formula(rng, depth - 1, atoms)),
        11 => P::huntil(d, gen_potl_formula(rng, depth - 1, atoms), gen_potl_formula(rng, depth - 1, atoms)),
        12 => P::hsince(d, gen_potl_formula(rng, depth - 1, atoms), gen_potl_formula(rng, depth - 1, atoms)),
        13 => P::chain_next_pr(s, gen_potl_formula(rng, depth - 1, atoms)),
        14 => P::chain_back_pr(s, gen_potl_formula(rng, depth - 1, atoms)),
        _ => P::next_pr(s, gen_potl_formula(rng, depth - 1, atoms)),
    }
}

/// Seeded random LTL formula.
pub fn gen_ltl_formula(rng: &mut ChaCha8Rng, depth: usize, atoms: &[&str]) -> LtlFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..5) {
            0 => LtlFormula::True,
            _ => LtlFormula::atom(atoms.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..9) {
        0 => LtlFormula::not(gen_ltl_formula(rng, depth - 1, atoms)),
        1 => LtlFormula::and(gen_ltl_formula(rng, depth - 1, atoms), gen_ltl_formula(rng, depth - 1, atoms)),
        2 => LtlFormula::or(gen_ltl_formula(rng, depth - 1, atoms), gen_ltl_formula(rng, depth - 1, atoms)),
        3 => LtlFormula::implies(gen_ltl_formula(rng, depth - 1, atoms), gen_ltl_formula(rng, depth - 1, atoms)),
        4 => LtlFormula::next(gen_ltl_formula(rng, depth - 1, atoms)),
        5 => LtlFormula::back(gen_ltl_formula(rng, depth - 1, atoms)),
        6 => LtlFormula::until(gen_ltl_formula(rng, depth - 1, atoms), gen_ltl_formula(rng, depth - 1, atoms)),
        7 => LtlFormula::since(gen_ltl_formula(rng, depth - 1, atoms), gen_ltl_formula(rng, depth - 1, atoms)),
        _ => LtlFormula::globally(gen_ltl_formula(rng, depth - 1, atoms)),
    }
}

/// Seeded random tree-logic formula.
pub fn gen_xuntil_formula(rng: &mut ChaCha8Rng, depth: usize, atoms: &[&str]) -> XuntilFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..5) {
            0 => XuntilFormula::True,
            _ => XuntilFormula::atom(atoms.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..6) {
        0 => XuntilFormula::not(gen_xuntil_formula(rng, depth - 1, atoms)),
        1 => XuntilFormula::and(
            gen_xuntil_formula(rng, depth - 1, atoms),
            gen_xuntil_formula(rng, depth - 1, atoms),
        ),
        k => XuntilFormula::until(
            [Axis::Down, Axis::Up, Axis::Right, Axis::Left][k - 2],
            gen_xuntil_formula(rng, depth - 1, atoms),
            gen_xuntil_formula(rng, depth - 1, atoms),
        ),
    }
}

/// A random partial matrix over a few structural labels, with the delimiter
/// rows filled so that compatible words always exist.
pub fn random_opm(seed: u64, structurals: usize, normals: usize, density: f64) -> OpAlphabet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let snames: Vec<String> = (0..structurals).map(|i| format!("s{}", i)).collect();
    let nnames: Vec<String> = (0..normals).map(|i| format!("n{}", i)).collect();
    let mut alpha = OpAlphabet::new(
        &snames.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        &nnames.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
    )
    .expect("generated names are valid");
    alpha.fill_delimiter_conventions();
    for a in &snames {
        for b in &snames {
            if rng.gen_bool(density) {
                let rel = match rng.gen_range(0..3) {
                    0 => PrecRel::Yields,
                    1 => PrecRel::Equals,
                    _ => PrecRel::Takes,
                };
                alpha.set_rel(a, b, rel).expect("fresh entry");
            }
        }
    }
    alpha
}

/// All proposition names of an alphabet plus `#`, for formula atoms.
pub fn atom_pool(alpha: &OpAlphabet) -> Vec<String> {
    let mut v: Vec<String> = alpha
        .proper_structurals()
        .map(|(_, s)| s.to_string())
        .chain(alpha.normals().iter().cloned())
        .collect();
    v.push("#".to_string());
    v
}

/// Checks `eval` against the FO brute force through the `nu` translation:
/// for every sampled word, formula and position, membership in the truth set
/// must coincide with `fo_eval(nu(f))` under `x := position`. Also asserts
/// the three-variable property on every emitted formula.
pub fn crosscheck_fo(
    alpha: &Arc<OpAlphabet>,
    n_words: usize,
    max_body: usize,
    n_formulas: usize,
    depth: usize,
    seed: u64,
) -> SuiteReport {
    let atoms = atom_pool(alpha);
    let atom_refs: Vec<&str> = atoms.iter().map(|s| s.as_str()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let formulas: Vec<PotlFormula> = (0..n_formulas)
        .map(|_| {
            let d = rng.gen_range(1..=depth.max(1));
            gen_potl_formula(&mut rng, d, &atom_refs)
        })
        .collect();
    let results: Vec<(usize, Vec<String>)> = (0..n_words as u64)
        .into_par_iter()
        .map(|wseed| {
            let w = random_compatible_word(alpha, max_body, seed ^ (wseed.wrapping_mul(0x9e37)))
                .expect("generator");
            let cs = parse(&w).unwrap().chains;
            let mut cases = 0usize;
            let mut failures = Vec::new();
            for f in &formulas {
                let direct = eval(f, &w, &cs);
                let fo = nu(f);
                if fo.distinct_variables() > 3 {
                    failures.push(format!("`{}` translated with more than 3 variables", f));
                    continue;
                }
                for i in 0..w.universe_len() {
                    cases += 1;
                    let through_fo = fo_eval_with_limits(
                        &fo,
                        &w,
                        &cs,
                        &Assignment::x(i),
                        FoLimits::generous(),
                    )
                    .expect("within limits");
                    if through_fo != direct.holds(f, i) {
                        failures.push(format!(
                            "`{}` at {} of `{}`: eval={} fo={}",
                            f,
                            i,
                            w.serialize(),
                            direct.holds(f, i),
                            through_fo
                        ));
                    }
                }
            }
            (cases, failures)
        })
        .collect();
    collect_report("fo", n_words, formulas.len(), results)
}

/// Checks `eval` of the translated tree-logic formulas against the tree
/// evaluator through the word/tree isomorphism, at interior positions.
pub fn crosscheck_xuntil(
    alpha: &Arc<OpAlphabet>,
    n_words: usize,
    max_body: usize,
    n_formulas: usize,
    depth: usize,
    seed: u64,
) -> SuiteReport {
    let atoms = atom_pool(alpha);
    let atom_refs: Vec<&str> = atoms.iter().map(|s| s.as_str()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let formulas: Vec<XuntilFormula> = (0..n_formulas)
        .map(|_| {
            let d = rng.gen_range(1..=depth.max(1));
            gen_xuntil_formula(&mut rng, d, &atom_refs)
        })
        .collect();
    let results: Vec<(usize, Vec<String>)> = (0..n_words as u64)
        .into_par_iter()
        .map(|wseed| {
            let w = random_compatible_word(alpha, max_body, seed ^ (wseed.wrapping_mul(0x51ed)))
                .expect("generator");
            let cs = parse(&w).unwrap().chains;
            let (t, bij) = tau(&w, &cs);
            let mut cases = 0usize;
            let mut failures = Vec::new();
            for f in &formulas {
                let tree_side = xeval(f, &t);
                let p = iota(f);
                let word_side = eval(&p, &w, &cs);
                for i in 1..=w.body_len() {
                    cases += 1;
                    let a = tree_side.holds(f, bij.node_of[i]);
                    let b = word_side.holds(&p, i);
                    if a != b {
                        failures.push(format!(
                            "`{}` at {} of `{}`: tree={} word={}",
                            f,
                            i,
                            w.serialize(),
                            a,
                            b
                        ));
                    }
                }
            }
            (cases, failures)
        })
        .collect();
    collect_report("xuntil", n_words, formulas.len(), results)
}

/// Checks the POTL translation of LTL against the direct LTL evaluator at
/// every position, delimiters included.
pub fn crosscheck_ltl(
    alpha: &Arc<OpAlphabet>,
    n_words: usize,
    max_body: usize,
    n_formulas: usize,
    depth: usize,
    seed: u64,
) -> SuiteReport {
    let atoms = atom_pool(alpha);
    let atom_refs: Vec<&str> = atoms.iter().map(|s| s.as_str()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let formulas: Vec<LtlFormula> = (0..n_formulas)
        .map(|_| {
            let d = rng.gen_range(1..=depth.max(1));
            gen_ltl_formula(&mut rng, d, &atom_refs)
        })
        .collect();
    let results: Vec<(usize, Vec<String>)> = (0..n_words as u64)
        .into_par_iter()
        .map(|wseed| {
            let w = random_compatible_word(alpha, max_body, seed ^ (wseed.wrapping_mul(0xc2b2)))
                .expect("generator");
            let cs = parse(&w).unwrap().chains;
            let mut cases = 0usize;
            let mut failures = Vec::new();
            for f in &formulas {
                let oracle = ltl_eval(f, &w);
                let p = translate_ltl(f);
                let r = eval(&p, &w, &cs);
                for i in 0..w.universe_len() {
                    cases += 1;
                    if r.holds(&p, i) != oracle[i] {
                        failures.push(format!(
                            "`{}` at {} of `{}`: ltl={} potl={}",
                            f,
                            i,
                            w.serialize(),
                            oracle[i],
                            r.holds(&p, i)
                        ));
                    }
                }
            }
            (cases, failures)
        })
        .collect();
    collect_report("ltl", n_words, formulas.len(), results)
}

/// The six until/since expansion laws, instantiated with both directions for
/// the summary pair. Each law must hold position-for-position.
pub fn expansion_laws(a: &PotlFormula, b: &PotlFormula) -> Vec<(String, PotlFormula, PotlFormula)> {
    use PotlFormula as P;
    let mut out = Vec::new();
    for d in [Dir::Down, Dir::Up] {
        let u = P::until(d, a.clone(), b.clone());
        out.push((
            format!("summary until ({:?})", d),
            u.clone(),
            P::or(
                b.clone(),
                P::and(a.clone(), P::or(P::next(d, u.clone()), P::chain_next(d, u))),
            ),
        ));
        let s = P::since(d, a.clone(), b.clone());
        out.push((
            format!("summary since ({:?})", d),
            s.clone(),
            P::or(
                b.clone(),
                P::and(a.clone(), P::or(P::back(d, s.clone()), P::chain_back(d, s))),
            ),
        ));
    }
    // Hierarchical until/since: the base case requires membership in a
    // cluster, i.e. a strict-`<` back chain (up) or strict-`>` chain (down).
    let up_anchor = P::chain_back_pr(PrSet::YIELDS, P::True);
    let down_anchor = P::chain_next_pr(PrSet::TAKES, P::True);
    let hu = P::huntil(Dir::Up, a.clone(), b.clone());
    out.push((
        "hierarchical until (up)".to_string(),
        hu.clone(),
        P::or(
            P::and(b.clone(), up_anchor.clone()),
            P::and(a.clone(), P::hnext(Dir::Up, hu)),
        ),
    ));
    let hs = P::hsince(Dir::Up, a.clone(), b.clone());
    out.push((
        "hierarchical since (up)".to_string(),
        hs.clone(),
        P::or(
            P::and(b.clone(), up_anchor),
            P::and(a.clone(), P::hback(Dir::Up, hs)),
        ),
    ));
    let hu = P::huntil(Dir::Down, a.clone(), b.clone());
    out.push((
        "hierarchical until (down)".to_string(),
        hu.clone(),
        P::or(
            P::and(b.clone(), down_anchor.clone()),
            P::and(a.clone(), P::hnext(Dir::Down, hu)),
        ),
    ));
    let hs = P::hsince(Dir::Down, a.clone(), b.clone());
    out.push((
        "hierarchical since (down)".to_string(),
        hs.clone(),
        P::or(
            P::and(b.clone(), down_anchor),
            P::and(a.clone(), P::hback(Dir::Down, hs)),
        ),
    ));
    out
}

/// Checks all expansion laws on random words and random operand pairs.
pub fn crosscheck_expansion(
    alpha: &Arc<OpAlphabet>,
    n_words: usize,
    max_body: usize,
    n_pairs: usize,
    depth: usize,
    seed: u64,
) -> SuiteReport {
    let atoms = atom_pool(alpha);
    let atom_refs: Vec<&str> = atoms.iter().map(|s| s.as_str()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(PotlFormula, PotlFormula)> = (0..n_pairs)
        .map(|_| {
            let da = rng.gen_range(0..=depth);
            let db = rng.gen_range(0..=depth);
            (
                gen_potl_formula(&mut rng, da, &atom_refs),
                gen_potl_formula(&mut rng, db, &atom_refs),
            )
        })
        .collect();
    let results: Vec<(usize, Vec<String>)> = (0..n_words as u64)
        .into_par_iter()
        .map(|wseed| {
            let w = random_compatible_word(alpha, max_body, seed ^ (wseed.wrapping_mul(0x165f)))
                .expect("generator");
            let cs = parse(&w).unwrap().chains;
            let mut cases = 0usize;
            let mut failures = Vec::new();
            for (a, b) in &pairs {
                for (name, lhs, rhs) in expansion_laws(a, b) {
                    let le = eval(&lhs, &w, &cs);
                    let re = eval(&rhs, &w, &cs);
                    for i in 0..w.universe_len() {
                        cases += 1;
                        if le.holds(&lhs, i) != re.holds(&rhs, i) {
                            failures.push(format!(
                                "{} with ({}, {}) at {} of `{}`",
                                name,
                                a,
                                b,
                                i,
                                w.serialize()
                            ));
                        }
                    }
                }
            }
            (cases, failures)
        })
        .collect();
    collect_report("expansion", n_words, pairs.len() * 8, results)
}

/// Parses random compatible words over several alphabets and validates the
/// four chain-relation properties on every result.
pub fn chain_property_suite(
    alphas: &[Arc<OpAlphabet>],
    n_words: usize,
    max_body: usize,
    seed: u64,
) -> SuiteReport {
    let results: Vec<(usize, Vec<String>)> = (0..n_words as u64)
        .into_par_iter()
        .map(|wseed| {
            let alpha = &alphas[(wseed as usize) % alphas.len()];
            let w = random_compatible_word(alpha, max_body, seed ^ (wseed.wrapping_mul(0x7f4a)))
                .expect("generator");
            let p = parse(&w).expect("generated words parse");
            let report = validate_chain_properties(&w, &p.chains);
            let mut failures = Vec::new();
            if !report.pass {
                failures.push(format!(
                    "chain properties violated on `{}`: {:?}",
                    w.serialize(),
                    report.violations.first()
                ));
            }
            (1, failures)
        })
        .collect();
    collect_report("chains", n_words, 0, results)
}

fn collect_report(
    suite: &str,
    words: usize,
    formulas: usize,
    results: Vec<(usize, Vec<String>)>,
) -> SuiteReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (c, fs) in results {
        cases += c;
        for f in fs {
            if failures.len() < 10 {
                failures.push(f);
            }
        }
    }
    SuiteReport { suite: suite.to_string(), words, formulas, cases, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::builtin_mcall;

    #[test]
    fn small_scale_suites_pass() {
        let alpha = Arc::new(builtin_mcall());
        let fo = crosscheck_fo(&alpha, 12, 8, 10, 2, 11);
        assert!(fo.passed(), "{}", fo.summary());
        let xu = crosscheck_xuntil(&alpha, 12, 8, 10, 2, 12);
        assert!(xu.passed(), "{}", xu.summary());
        let lt = crosscheck_ltl(&alpha, 12, 8, 10, 2, 13);
        assert!(lt.passed(), "{}", lt.summary());
        let ex = crosscheck_expansion(&alpha, 10, 8, 6, 2, 14);
        assert!(ex.passed(), "{}", ex.summary());
    }

    #[test]
    fn suites_work_on_random_matrices() {
        let alpha = Arc::new(random_opm(5, 3, 2, 0.8));
        let ex = crosscheck_expansion(&alpha, 8, 8, 4, 2, 15);
        assert!(ex.passed(), "{}", ex.summary());
        let ch = chain_property_suite(&[alpha], 30, 10, 16);
        assert!(ch.passed(), "{}", ch.summary());
    }

    #[test]
    fn printed_expansion_base_is_strictly_stronger() {
        // The as-printed hierarchical base demands a singleton cluster; the
        // path semantics only needs some `<` anchor. Word `call call exc ret`
        // separates them at position 3.
        use crate::potl::ast::PotlFormula as P;
        use crate::words::load_word;
        let alpha = Arc::new(builtin_mcall());
        let w = load_word(&alpha, "call call exc ret").unwrap();
        let cs = parse(&w).unwrap().chains;
        let psi = P::atom("exc");
        let hu = P::huntil(Dir::Up, P::not(P::True), psi.clone());
        let r = eval(&hu, &w, &cs);
        assert!(r.holds(&hu, 3), "singleton path at 3 exists (anchor 0)");
        let printed_base = P::and(
            psi,
            P::and(
                P::chain_back(Dir::Down, P::True),
                P::not(P::chain_back(Dir::Up, P::True)),
            ),
        );
        let rb = eval(&printed_base, &w, &cs);
        assert!(!rb.holds(&printed_base, 3), "the printed base rejects position 3");
        // The corrected base agrees with the path semantics.
        let fixed_base = P::and(P::atom("exc"), P::chain_back_pr(PrSet::YIELDS, P::True));
        let rf = eval(&fixed_base, &w, &cs);
        assert!(rf.holds(&fixed_base, 3));
    }
}
