//! Enumerating curves on a graph y = x^2 + t x from a grid of candidate
//! x-coefficients.

use ffcount::ansatz::{enumerate_points, CandidateGrid, CandidateSource};
use ffcount::series::{MPoly, Rat};

fn main() {
    let f = MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -1), (&[1, 0, 1], -1)]);
    let ints = |v: &[i64]| v.iter().map(|&a| Rat::from(a)).collect::<Vec<_>>();
    // x = a0 + a1 t with a0 in {0, 1, 2}, a1 in {0, -1}. For these a1 the
    // t^2 term of y cancels, so every curve has degree < 2.
    let axes = vec![ints(&[0, 1, 2]), ints(&[0, -1])];
    let grid = CandidateGrid::product(vec![0], &[axes]);
    let r = 2;
    let en = enumerate_points(&[f], 2, r, &CandidateSource::Grid(grid), r + 8).unwrap();
    for e in &en.found {
        println!(
            "#{} x = {}, y = {}",
            e.candidate,
            e.curve.components()[0],
            e.curve.components()[1]
        );
    }
    println!("{} curves, {} rejected", en.found.len(), en.rejected.len());
}
