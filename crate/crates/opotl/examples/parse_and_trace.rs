//! Parse a word over the built-in call/return matrix and print the bottom-up
//! reduction trace, the chain relation, and the syntax tree leaves.

use std::sync::Arc;

use opotl::alphabet::builtin_mcall;
use opotl::parser::parse;
use opotl::words::load_word;

fn main() {
    let alpha = Arc::new(builtin_mcall());
    let w = load_word(
        &alpha,
        "call{pA} han call{pB} call{pC} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}",
    )
    .unwrap();

    let p = parse(&w).unwrap();

    println!("word: {}\n", w.serialize());
    println!("bottom-up reductions:");
    for row in &p.trace.rows {
        println!("  {}", row);
    }

    println!("\nchain relation:");
    let pairs: Vec<String> = p.chains.pairs().map(|(i, j)| format!("({},{})", i, j)).collect();
    println!("  {}", pairs.join(" "));
    println!("  right contexts of 1: {:?}", p.chains.right_contexts_of(1));
    println!("  left contexts of 6:  {:?}", p.chains.left_contexts_of(6));

    println!("\nsyntax tree leaves (interior positions): {:?}", p.tree.leaves());
}
