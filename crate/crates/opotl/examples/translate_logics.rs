//! The three cross-logic translations: LTL into POTL, POTL into first-order
//! logic, and the strict tree logic into POTL.

use opotl::fol::nu;
use opotl::potl::ltl::{parse_ltl, translate_ltl};
use opotl::potl::syntax::parse_potl;
use opotl::xuntil::{iota, parse_xuntil};

fn main() {
    println!("LTL -> POTL:");
    for f in ["X a", "Y a", "G a", "a U b"] {
        let t = translate_ltl(&parse_ltl(f).unwrap());
        println!("  {:<8} =>  {}", f, t);
    }

    println!("\nPOTL -> FOL (three variables suffice):");
    for f in ["a", "Nd a", "CNu b", "a Ud b", "HNu a"] {
        let fo = nu(&parse_potl(f).unwrap());
        println!("  {:<8} uses {} variables", f, fo.distinct_variables());
        println!("           {}", fo);
    }

    println!("\ntree logic -> POTL:");
    for f in ["Dn(a, b)", "Up(a, b)", "Rt(a, b)", "Lt(a, b)"] {
        let t = iota(&parse_xuntil(f).unwrap());
        println!("  {:<9} =>  {}", f, t);
    }
}
