//! Operator precedence languages and the POTL temporal logic.
//!
//! The crate implements the full pipeline around operator precedence (OP)
//! words:
//!
//! - [`alphabet`]: precedence matrices over structural labels, lifted to
//!   proposition sets, with the built-in call/return matrix.
//! - [`words`]: finite OP words with text I/O and a seeded generator of
//!   matrix-compatible words.
//! - [`parser`]: the bottom-up parser producing the syntax tree, the chain
//!   relation, and the reduction trace, plus the chain-shape validator.
//! - [`opa`]: operator precedence automata with push/shift/pop runs, the
//!   max-automaton, and bounded language enumeration.
//! - [`potl`]: the POTL logic — formula trees, concrete syntax, complete
//!   finite-word evaluation (summary and hierarchical operators included),
//!   and the LTL translation with its direct-evaluation oracle.
//! - [`fol`]: three-variable first-order logic over OP words, a brute-force
//!   evaluator, and the POTL-to-FOL translation.
//! - [`uot`]: unranked ordered trees and the word/tree isomorphism.
//! - [`xuntil`]: the strict until/since tree logic and its POTL translation.
//! - [`crosscheck`]: seeded oracle-equivalence suites tying it all together.
//! - [`cli`]: the `opotl` command line.
//!
//! The `examples/` directory holds one runnable tour per capability; start
//! with `cargo run --example parse_and_trace`.

pub mod alphabet;
pub mod cli;
pub mod crosscheck;
pub mod fol;
pub mod opa;
pub mod parser;
pub mod potl;
pub mod uot;
pub mod words;
pub mod xuntil;

pub use alphabet::{builtin_mcall, load_opm, LabelSet, OpAlphabet, PrecRel};
pub use fol::{fo_eval, nu, Assignment, FoFormula};
pub use opa::{builtin_fig5, load_opa, max_automaton, Opa};
pub use parser::{parse, validate_chain_properties, ChainSet, Parse, SyntaxTree};
pub use potl::{eval, parse_potl, translate_ltl, Dir, EvalResult, PotlFormula, PrSet};
pub use uot::{check_compat, load_tree, tau, tau_inverse, Uot};
pub use words::{load_word, random_compatible_word, OpWord};
