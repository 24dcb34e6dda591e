//! Run operator precedence automata: the built-in procedural-program
//! automaton, the max-automaton, acceptance with witness runs, and bounded
//! language enumeration.

use std::sync::Arc;

use opotl::opa::{builtin_fig5, max_automaton};
use opotl::parser::parse;
use opotl::words::{load_word, random_string};

fn main() {
    let fig5 = builtin_fig5();
    let alpha = fig5.alphabet.clone();

    let w = load_word(
        &alpha,
        "call{pA} han call{pB} call{pC} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}",
    )
    .unwrap();

    println!("program automaton on the example trace:");
    match fig5.accepts_with_witness(&w) {
        Some(steps) => {
            println!("  accepted; run:");
            for s in &steps {
                println!("    {:?} on input {} -> {}", s.kind, s.lookahead, s.state);
            }
        }
        None => println!("  rejected"),
    }

    println!("\nshortest accepted traces (body length <= 11):");
    for w in fig5.enumerate_accepted(11).unwrap() {
        println!("  {}", w.serialize());
    }

    println!("\nmax-automaton vs parser on random strings:");
    let max = max_automaton(Arc::clone(&alpha));
    let mut agree = 0;
    for seed in 0..100 {
        let s = random_string(&alpha, 8, seed);
        assert_eq!(max.accepts(&s), parse(&s).is_ok());
        agree += 1;
    }
    println!("  agreement on {} strings: the max-automaton accepts exactly the universe", agree);
}
