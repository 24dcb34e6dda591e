//! The temporal logic POTL on finite OP words: formula trees, concrete
//! syntax, the evaluation semantics, and the LTL translation.

pub mod ast;
pub mod eval;
pub mod ltl;
pub mod syntax;

pub use ast::{Dir, PotlFormula, PrSet};
pub use eval::{dhp, dsp, eval, uhp, usp, EvalResult, WordContext};
pub use ltl::{ltl_eval, parse_ltl, translate_ltl, LtlFormula};
pub use syntax::{parse_potl, FormulaParseError};
