//! Newton lifting of fiber points: a polynomial solution is certified,
//! a genuine power series is reported as non-polynomial to the working
//! order.

use ffcount::ansatz::hensel_lift;
use ffcount::series::{MPoly, Rat};

fn main() {
    // y^2 - (1 + t)^2, variables (y, t).
    let square = MPoly::from_int_terms(&[(&[2], 1), (&[], -1), (&[0, 1], -2), (&[0, 2], -1)]);
    for y0 in [1, -1] {
        let lift = hensel_lift(std::slice::from_ref(&square), &[Rat::from(y0)], 10).unwrap();
        println!("y(0) = {y0:>2}: {:?}  {:?}", lift.curve[0], lift.status);
    }

    // y^2 - (1 + t): the binomial series of sqrt(1 + t).
    let root = MPoly::from_int_terms(&[(&[2], 1), (&[], -1), (&[0, 1], -1)]);
    for m in [4, 8, 16] {
        let lift = hensel_lift(std::slice::from_ref(&root), &[Rat::one()], m).unwrap();
        println!("M = {m:>2}: {:?}", lift.status);
    }
    let lift = hensel_lift(&[root], &[Rat::one()], 6).unwrap();
    println!("sqrt(1+t) = {:?}", lift.curve[0]);
}
