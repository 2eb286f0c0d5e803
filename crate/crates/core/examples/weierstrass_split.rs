//! Finding coordinates in which the projection is finite, and checking
//! the fiber degree at a base point.

use ffcount::series::{MPoly, Rat};
use ffcount::weier::{estimate_e, fiber_count, find_split};

fn main() {
    // y^3 - x - t in (x, y, t): finite over x with fiber degree 3.
    let f = MPoly::from_int_terms(&[(&[0, 3], 1), (&[1], -1), (&[0, 0, 1], -1)]);
    let split = estimate_e(std::slice::from_ref(&f), 2, &[0]).unwrap();
    println!("split over x: {split:?}");
    let count = fiber_count(
        std::slice::from_ref(&f),
        2,
        &split,
        &[Rat::from(2)],
        &Rat::from(3),
    )
    .unwrap();
    println!("fiber count at x = 2t, t = 3: {count}");

    // x y - t: neither coordinate alone works without a shear.
    let g = MPoly::from_int_terms(&[(&[1, 1], 1), (&[0, 0, 1], -1)]);
    match find_split(&[g], 2, 1) {
        Ok(s) => println!("x y - t: {s:?}"),
        Err(e) => println!("x y - t: {e}"),
    }
}
