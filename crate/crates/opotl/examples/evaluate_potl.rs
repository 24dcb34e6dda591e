//! Evaluate POTL formulas on a procedural trace: directional next/back,
//! chain jumps, summary paths, hierarchical operators, and the stack
//! inspection and exception-safety shortcuts.

use std::sync::Arc;

use opotl::alphabet::builtin_mcall;
use opotl::parser::parse;
use opotl::potl::ast::PotlFormula;
use opotl::potl::eval::{dsp, eval, uhp, usp};
use opotl::words::load_word;

fn main() {
    let alpha = Arc::new(builtin_mcall());
    let w = load_word(
        &alpha,
        "call{pA} han call{pB} call{pC} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}",
    )
    .unwrap();
    let cs = parse(&w).unwrap().chains;

    let formulas = [
        "Nd call",                  // the next position is an inner call
        "Bu call",                  // the current position closes an empty frame
        "CNu exc",                  // this frame is terminated by an exception
        "call Ud (ret & pErr)",     // a summary path reaches a pErr return
        "(call | exc) Su pB",       // stack summary back to the pB call
        "HNu pErr",                 // the next call issued by the same caller
        "call HUd pC",              // calls terminated by the same exception
        "CallThr(T)",               // terminated by an exception at all?
        "Scall(T, pA)",             // some pA frame is on the stack
        "G (call & pB -> CallThr(T))",
    ];

    for f in formulas {
        let parsed: PotlFormula = f.parse().unwrap();
        let r = eval(&parsed, &w, &cs);
        let positions: Vec<String> = r
            .positions(&parsed)
            .into_iter()
            .map(|i| if w.is_delimiter(i) { format!("{}#", i) } else { i.to_string() })
            .collect();
        println!("{:<32} holds at {{{}}}", f, positions.join(", "));
    }

    println!("\nsummary and hierarchical paths:");
    println!("  dsp 1 -> 8: {:?}", dsp(&w, &cs, 1, 8).unwrap());
    println!("  usp 3 -> 7: {:?}", usp(&w, &cs, 3, 7).unwrap());
    println!("  uhp 7 -> 9: {:?}", uhp(&w, &cs, 7, 9).unwrap());
}
