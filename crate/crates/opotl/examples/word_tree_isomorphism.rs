//! Convert a word to its unranked ordered tree and back, inspect right
//! contexts, and check the matrix-compatibility rules.

use std::sync::Arc;

use opotl::alphabet::builtin_mcall;
use opotl::parser::parse;
use opotl::uot::{check_compat, tau, tau_inverse};
use opotl::words::load_word;

fn main() {
    let alpha = Arc::new(builtin_mcall());
    let w = load_word(
        &alpha,
        "call{pA} han call{pB} call{pC} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}",
    )
    .unwrap();
    let cs = parse(&w).unwrap().chains;

    let (t, bij) = tau(&w, &cs);
    println!("tree of the word:\n{}", t.serialize());

    println!("right contexts (position -> position):");
    for i in 0..w.universe_len() {
        if let Some(rc) = t.rc(bij.node_of[i]).unwrap() {
            println!("  Rc({}) = {}", i, bij.pos_of[rc]);
        }
    }

    let report = check_compat(&t, &alpha);
    println!("\nmatrix compatibility: {}", if report.pass { "pass" } else { "fail" });

    let back = tau_inverse(&t, &alpha).unwrap();
    println!("round trip: {}", if back == w { "identical" } else { "DIFFERENT" });
}
