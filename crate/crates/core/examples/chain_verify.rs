//! Checking Pfaffian and Noetherian chains on truncated witnesses, and
//! locating the first mismatch in broken ones.

use ffcount::pfaff::{library, verify_chain};

fn main() {
    let trunc = 10;
    for (name, chain) in library::passing_chains(trunc) {
        let rep = verify_chain(&chain).unwrap();
        println!(
            "{name:<14} passed={} triangular={}",
            rep.passed, rep.triangular
        );
    }
    for (name, chain, expected) in library::mutations(trunc) {
        let rep = verify_chain(&chain).unwrap();
        let m = rep.first_mismatch.unwrap();
        println!(
            "{name:<16} fails at (i={}, j={}, exps={:?}): {} vs {}  expected {}",
            m.i,
            m.j,
            m.exps,
            m.lhs,
            m.rhs,
            if m == expected { "yes" } else { "no" }
        );
    }
}
