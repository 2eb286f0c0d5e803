//! An interpolation determinant and its two bounds. The Vandermonde
//! instance attains the order bound.

use ffcount::interp::{greedy_order_bound, interp_det_with_model, GermModel, MonomialBasis};
use ffcount::series::PolyCurve;

fn main() {
    // Curves (j t, j^2 t^2) on y = x^2 through the origin.
    let curves: Vec<PolyCurve> = (1..=3)
        .map(|j| PolyCurve::from_ints(&[&[0, j], &[0, 0, j * j]], 3).unwrap())
        .collect();
    let basis = MonomialBasis::new(2, 1);
    let model = GermModel { n: 2, m: 1, nu: 1 };
    let rep = interp_det_with_model(&basis.polys(), &curves, model).unwrap();
    println!("det = {}", rep.value);
    println!("ord = {:?} >= {}", rep.value.ord(), rep.ord_lower_bound);
    println!("deg = {:?} <= {}", rep.value.degree(), rep.deg_upper_bound);
    println!(
        "greedy bound for mu = 3: {:?}",
        greedy_order_bound(2, 1, 1, 3)
    );
    println!("bounds hold: {}", rep.bounds_hold());
}
