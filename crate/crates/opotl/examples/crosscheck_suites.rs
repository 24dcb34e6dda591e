//! Seeded oracle-equivalence suites at example scale: the POTL evaluator
//! against the first-order brute force, the tree-logic evaluator, the direct
//! LTL evaluator, and the expansion laws.

use std::sync::Arc;

use opotl::alphabet::builtin_mcall;
use opotl::crosscheck::{
    chain_property_suite, crosscheck_expansion, crosscheck_fo, crosscheck_ltl,
    crosscheck_xuntil, random_opm,
};

fn main() {
    let alpha = Arc::new(builtin_mcall());

    for report in [
        crosscheck_fo(&alpha, 40, 9, 25, 3, 1),
        crosscheck_xuntil(&alpha, 40, 9, 25, 3, 2),
        crosscheck_ltl(&alpha, 40, 10, 25, 3, 3),
        crosscheck_expansion(&alpha, 40, 10, 12, 2, 4),
    ] {
        println!("{}", report.summary());
        assert!(report.passed());
    }

    // The chain-relation shape properties also hold on random sparse
    // matrices, not only on the built-in one.
    let alphas = vec![alpha, Arc::new(random_opm(99, 3, 2, 0.75))];
    let chains = chain_property_suite(&alphas, 120, 12, 5);
    println!("{}", chains.summary());
    assert!(chains.passed());
}
