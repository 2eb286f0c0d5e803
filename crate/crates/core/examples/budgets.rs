//! Multiplicity and block budgets as functions of the defining degree.

use ffcount::pfaff::{multiplicity_budget, wilkie_budget, ChainKind};

fn main() {
    println!("beta  pfaffian  noetherian  blocks(n=2, ell=1, r=2)");
    for beta in 1..=4 {
        let p = multiplicity_budget(beta, 2, 1, ChainKind::Pfaffian, true, None);
        let q = multiplicity_budget(beta, 2, 1, ChainKind::Noetherian, true, None);
        let w = wilkie_budget(beta, 2, 2, 1);
        println!(
            "{beta:>4}  {:>8}  {:>10}  {}",
            p.value().unwrap(),
            q.value().unwrap(),
            w.block_count_bound
        );
    }
    let w = wilkie_budget(2, 3, 2, 0);
    for l in &w.per_level_degrees {
        println!("level k={} nu={} d={}", l.k, l.nu, l.d);
    }
    println!(
        "transcendental t, Noetherian: {:?}",
        multiplicity_budget(2, 2, 1, ChainKind::Noetherian, false, None)
    );
}
