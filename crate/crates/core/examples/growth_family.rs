//! The growth family f = sum_k t^k P_{N_k}: witnesses j = 1..N_i of degree
//! below i. Pass N values as arguments, e.g. `10 100 1000 10000`.

use std::time::Instant;

use ffcount::growth::{build_growth_series, check_support_gaps, verify_growth, GrowthSpec};

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer N"))
        .collect();
    let n = if args.is_empty() { vec![1, 2, 4] } else { args };
    let depth = n.len();
    let spec = GrowthSpec::new(n.clone(), depth).expect("strictly increasing N");
    let start = Instant::now();
    let series = build_growth_series(&spec);
    if n.len() <= 3 && n[n.len() - 1] <= 8 {
        for j in 1..=n[n.len() - 1] as i64 {
            println!("f({j}) = {}", series.eval_at(j));
        }
    }
    let report = verify_growth(&series, &n, depth);
    for l in &report.levels {
        println!(
            "i={} N_i={} witnesses={} certified={}",
            l.i, l.n_i, l.witnesses, l.certified
        );
    }
    println!("passed={} in {:.2?}", report.passed, start.elapsed());
    let gaps = check_support_gaps(&n, 3);
    for e in &gaps.entries {
        println!("support gap for degree {}: from i = {:?}", e.d, e.i0);
    }
}
