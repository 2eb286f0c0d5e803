//! Block decomposition of the curves on an algebraic surface and on a
//! truncation of the growth family.

use ffcount::blocks::{decompose, DecomposeInput};
use ffcount::growth::{build_growth_series, GrowthSpec};
use ffcount::pfaff::wilkie_budget;
use ffcount::series::{MPoly, PolyCurve, TPoly};

fn show(label: &str, input: &DecomposeInput) {
    let names = ["x", "y", "t"].map(String::from);
    let blocks = decompose(input).unwrap();
    println!("{label}: {} blocks", blocks.len());
    for b in &blocks {
        let gens: Vec<String> = b.generators.iter().map(|g| g.fmt_with(&names)).collect();
        println!(
            "  #{} dim {} degree {} absorbs {}: [{}]",
            b.id,
            b.dim,
            b.degree,
            b.absorbed.len(),
            gens.join(", ")
        );
    }
}

fn main() {
    let f = MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -1), (&[1, 0, 1], -1)]);
    let mut curves = Vec::new();
    for a0 in 0..3 {
        for a1 in [0, -1] {
            let x = TPoly::from_ints(&[a0, a1]);
            let y = x.mul(&x).add(&TPoly::t().mul(&x));
            curves.push(PolyCurve::new(vec![x, y], 2).unwrap());
        }
    }
    let algebraic = DecomposeInput {
        n: 2,
        equations: vec![f],
        algebraic: true,
        curves,
        nu: 1,
        seed: 0,
    };
    show("y = x^2 + t x", &algebraic);

    let series = build_growth_series(&GrowthSpec::new(vec![1, 2, 4], 3).unwrap());
    let graph = MPoly::var(1).sub(&series.to_mpoly().remap(&[0, 2]));
    let curves = (1..=4)
        .map(|j| PolyCurve::new(vec![TPoly::from_ints(&[j]), series.eval_at(j)], 3).unwrap())
        .collect();
    let growth = DecomposeInput {
        n: 2,
        equations: vec![graph],
        algebraic: false,
        curves,
        nu: 1,
        seed: 0,
    };
    show("growth family", &growth);

    let w = wilkie_budget(2, 3, 2, 0);
    println!(
        "budget: {} blocks of degree <= {}",
        w.block_count_bound, w.block_degree_bound
    );
}
