//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its elapsed time and asserting its stated budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use opotl::alphabet::{builtin_mcall, OpAlphabet};
use opotl::crosscheck::{
    chain_property_suite, crosscheck_expansion, crosscheck_fo, crosscheck_ltl,
    crosscheck_xuntil, random_opm,
};
use opotl::opa::{builtin_fig5, max_automaton};
use opotl::parser::{parse, ChainSet};
use opotl::potl::ast::PotlFormula;
use opotl::potl::eval::eval;
use opotl::uot::{check_compat, tau, tau_inverse};
use opotl::words::{load_word, random_compatible_word, random_string, OpWord};

const WEX: &str =
    "call{pA} han call{pB} call{pC} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}";

fn mcall() -> Arc<OpAlphabet> {
    Arc::new(builtin_mcall())
}

fn wex(alpha: &Arc<OpAlphabet>) -> OpWord {
    load_word(alpha, WEX).unwrap()
}

fn finish(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("{}: PASS in {:?} (budget {:?})", criterion, elapsed, budget);
    assert!(
        elapsed <= budget,
        "{} exceeded its time budget: {:?} > {:?}",
        criterion,
        elapsed,
        budget
    );
}

#[test]
fn criterion_01_golden_parse() {
    let started = Instant::now();
    let alpha = mcall();
    let p = parse(&wex(&alpha)).unwrap();
    let expected_rows = [
        "# < call < han < call < call < call > exc > call = ret > call = ret > ret > #",
        "# < call < han < call < call N > exc > call = ret > call = ret > ret > #",
        "# < call < han < call N > exc > call = ret > call = ret > ret > #",
        "# < call < han = N exc > call = ret > call = ret > ret > #",
        "# < call < N call = ret > call = ret > ret > #",
        "# < call < N call = ret > ret > #",
        "# < call = N ret > #",
        "# = N #",
    ];
    assert_eq!(p.trace.rows, expected_rows, "reduction trace differs");
    let expected_chains: BTreeSet<(usize, usize)> =
        [(0, 12), (1, 11), (1, 7), (1, 9), (2, 6), (3, 6), (4, 6)].into_iter().collect();
    assert_eq!(p.chains.pairs().collect::<BTreeSet<_>>(), expected_chains);
    finish("criterion 01 (golden parse)", started, Duration::from_secs(1));
}

#[test]
fn criterion_02_truth_table() {
    let started = Instant::now();
    let alpha = mcall();
    let w = wex(&alpha);
    let cs = parse(&w).unwrap().chains;
    let interior = |f: &str| -> Vec<usize> {
        let f: PotlFormula = f.parse().unwrap();
        eval(&f, &w, &cs).interior_positions(&f)
    };
    let holds = |f: &str, i: usize| -> bool {
        let f: PotlFormula = f.parse().unwrap();
        eval(&f, &w, &cs).holds(&f, i)
    };
    // Next/back operators with exhaustive interior sets.
    assert_eq!(interior("Nd call"), vec![2, 3, 4]);
    assert_eq!(interior("Bd call"), vec![2, 4, 5, 8, 10]);
    assert_eq!(interior("Bu call"), vec![6, 8, 10]);
    // Chain next restricted to call positions.
    let cnu_exc_calls: Vec<usize> =
        interior("CNu exc").into_iter().filter(|&i| w.holds("call", i)).collect();
    assert_eq!(cnu_exc_calls, vec![3, 4]);
    assert!(holds("CBu call", 6));
    // The three summary until/since path examples.
    assert!(holds("call Ud (ret & pErr)", 1));
    assert!(holds("(call | exc) Su pB", 7));
    assert!(holds("T Uu exc", 3) && !holds("T Uu exc", 1));
    // The five hierarchical examples.
    assert!(holds("HNu pErr", 7));
    assert!(holds("HBu pErr", 9));
    assert!(!holds("HNu ret", 9));
    assert!(holds("call HUd pC", 3));
    assert!(holds("call HSd pB", 4));
    finish("criterion 02 (truth table)", started, Duration::from_secs(1));
}

#[test]
fn criterion_03_expansion_laws() {
    let started = Instant::now();
    let alpha = mcall();
    let report = crosscheck_expansion(&alpha, 300, 12, 50, 2, 0x0301);
    assert!(report.passed(), "{}", report.summary());
    assert!(report.cases > 0);
    finish("criterion 03 (expansion laws)", started, Duration::from_secs(60));
}

#[test]
fn criterion_04_chain_properties() {
    let started = Instant::now();
    let alphas: Vec<Arc<OpAlphabet>> = vec![
        mcall(),
        Arc::new(random_opm(0x0401, 3, 2, 0.8)),
        Arc::new(random_opm(0x0402, 4, 1, 0.7)),
        Arc::new(random_opm(0x0403, 2, 2, 0.9)),
    ];
    let report = chain_property_suite(&alphas, 500, 12, 0x0404);
    assert!(report.passed(), "{}", report.summary());
    assert_eq!(report.cases, 500);
    finish("criterion 04 (chain properties)", started, Duration::from_secs(30));
}

#[test]
fn criterion_05_fo_oracle() {
    let started = Instant::now();
    let alpha = mcall();
    let report = crosscheck_fo(&alpha, 200, 10, 100, 3, 0x0501);
    assert!(report.passed(), "{}", report.summary());
    assert!(report.cases > 0);
    finish("criterion 05 (FO oracle)", started, Duration::from_secs(300));
}

#[test]
fn criterion_06_tree_logic_oracle() {
    let started = Instant::now();
    let alpha = mcall();
    let report = crosscheck_xuntil(&alpha, 200, 10, 100, 3, 0x0601);
    assert!(report.passed(), "{}", report.summary());
    assert!(report.cases > 0);
    finish("criterion 06 (tree-logic oracle)", started, Duration::from_secs(300));
}

#[test]
fn criterion_07_ltl_oracle() {
    let started = Instant::now();
    let alpha = mcall();
    let report = crosscheck_ltl(&alpha, 200, 12, 100, 3, 0x0701);
    assert!(report.passed(), "{}", report.summary());
    assert!(report.cases > 0);
    finish("criterion 07 (LTL oracle)", started, Duration::from_secs(120));
}

#[test]
fn criterion_08_tree_roundtrip() {
    let started = Instant::now();
    let alpha = mcall();
    // Golden tree of the example word.
    let w = wex(&alpha);
    let cs = parse(&w).unwrap().chains;
    let (t, _) = tau(&w, &cs);
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
    // Round trip and compatibility over 500 random words.
    for seed in 0..500u64 {
        let w = random_compatible_word(&alpha, 12, 0x0801 ^ seed.wrapping_mul(0xabcd)).unwrap();
        let cs = parse(&w).unwrap().chains;
        let (t, _) = tau(&w, &cs);
        assert!(check_compat(&t, &alpha).pass, "compat on `{}`", w.serialize());
        let back = tau_inverse(&t, &alpha).unwrap();
        assert_eq!(back, w, "roundtrip of `{}`", w.serialize());
    }
    finish("criterion 08 (tree roundtrip)", started, Duration::from_secs(10));
}

#[test]
fn criterion_09_automaton_conformance() {
    let started = Instant::now();
    let fig5 = builtin_fig5();
    let alpha = fig5.alphabet.clone();
    assert!(fig5.accepts(&wex(&alpha)), "the example automaton accepts the example word");
    // Universe characterization over complete and partial matrices.
    let partial = Arc::new(random_opm(0x0901, 3, 0, 0.55));
    let mut incompatible_seen = 0usize;
    for (k, alpha) in [alpha, partial].into_iter().enumerate() {
        let max = max_automaton(alpha.clone());
        for seed in 0..250u64 {
            let w = random_string(&alpha, 8, 0x0902 ^ (seed * 31 + k as u64));
            let parsed = parse(&w).is_ok();
            if !parsed {
                incompatible_seen += 1;
            }
            assert_eq!(
                max.accepts(&w),
                parsed,
                "universe disagreement on `{}`",
                w.serialize()
            );
        }
    }
    assert!(incompatible_seen > 0, "the sample includes incompatible strings");
    finish("criterion 09 (automaton conformance)", started, Duration::from_secs(30));
}

#[test]
fn criterion_10_bounded_check_experiment() {
    let started = Instant::now();
    let fig5 = builtin_fig5();
    let f: PotlFormula = "G((call & pB & Scall(T,pA)) -> CallThr(T))".parse().unwrap();
    let words = fig5.enumerate_accepted(12).unwrap();
    assert!(!words.is_empty());
    for w in &words {
        let cs = parse(w).unwrap().chains;
        let r = eval(&f, w, &cs);
        assert!(r.holds(&f, 0), "counterexample: {}", w.serialize());
    }
    finish("criterion 10 (bounded checking)", started, Duration::from_secs(60));
}

#[test]
fn criterion_11_downward_eventually_witness() {
    let started = Instant::now();
    let alpha = mcall();
    // The example word with pA added at position 5.
    let w = load_word(
        &alpha,
        "call{pA} han call{pB} call{pC} call{pC,pA} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}",
    )
    .unwrap();
    let cs: ChainSet = parse(&w).unwrap().chains;
    let f: PotlFormula = "Fd pA".parse().unwrap();
    let r = eval(&f, &w, &cs);
    assert!(r.holds(&f, 2), "downward eventually reaches pA from the handler");
    finish("criterion 11 (eventually witness)", started, Duration::from_secs(1));
}
