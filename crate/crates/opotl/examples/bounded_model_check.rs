//! Bounded trace checking: enumerate every trace the program automaton
//! accepts up to a length bound and check a stack-inspection property at the
//! start of each one.

use opotl::opa::builtin_fig5;
use opotl::parser::parse;
use opotl::potl::ast::PotlFormula;
use opotl::potl::eval::eval;

fn main() {
    let automaton = builtin_fig5();

    // Whenever pB runs with a pA frame on the stack, pB is terminated by an
    // exception.
    let formula: PotlFormula =
        "G((call & pB & Scall(T,pA)) -> CallThr(T))".parse().unwrap();

    let max_body = 12;
    let words = automaton.enumerate_accepted(max_body).unwrap();
    println!(
        "checking `{}`\non all {} accepted traces with body length <= {}:",
        formula,
        words.len(),
        max_body
    );

    let mut counterexample = None;
    for w in &words {
        let cs = parse(w).unwrap().chains;
        let r = eval(&formula, w, &cs);
        let verdict = r.holds(&formula, 0);
        println!("  [{}] {}", if verdict { "ok" } else { "FAIL" }, w.serialize());
        if !verdict && counterexample.is_none() {
            counterexample = Some(w.serialize());
        }
    }
    match counterexample {
        None => println!("no counterexample: the property holds on the bounded language"),
        Some(w) => println!("counterexample found: {}", w),
    }
}
