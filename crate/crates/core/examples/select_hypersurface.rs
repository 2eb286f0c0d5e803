//! Interpolating the curves of y = x^2 + t x by a conic, and the degree at
//! which the counting argument forces one.

use ffcount::interp::{select_degree, select_hypersurface};
use ffcount::series::{MPoly, PolyCurve, TPoly};

fn main() {
    let mut curves = Vec::new();
    for a0 in 0..3 {
        for a1 in [0, -1] {
            let x = TPoly::from_ints(&[a0, a1]);
            let y = x.mul(&x).add(&TPoly::t().mul(&x));
            curves.push(PolyCurve::new(vec![x, y], 2).unwrap());
        }
    }
    let g = [MPoly::var(0), MPoly::var(1)];
    let names = ["x", "y", "t"].map(String::from);
    for d in 1..=2 {
        match select_hypersurface(&curves, &g, d) {
            Ok(h) => {
                println!("d = {d}: P = {}", h.poly.fmt_with(&names));
                println!("  vanishes on all: {}", h.vanishes_on(&g, &curves).unwrap());
            }
            Err(e) => println!("d = {d}: {e}"),
        }
    }
    println!(
        "select_degree(n=2, m=1, nu=1, r=2) = {}",
        select_degree(2, 1, 1, 2)
    );
}
