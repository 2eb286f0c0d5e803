//! Truncated series, valuations, and evaluating a polynomial along a curve.

use ffcount::series::{eval_at_curve, eval_exact, q, MPoly, PolyCurve, Rat, TPoly, TSeries};

fn main() {
    // 1 - t is a unit; its inverse modulo t^8 is the geometric series.
    let one_minus_t = TSeries::exact(&TPoly::from_ints(&[1, -1]));
    let geom = one_minus_t.invert_unit_mod(8).unwrap();
    println!("1/(1-t) = {geom:?}");
    println!("ord = {:?}", geom.ord());

    // Products keep the smaller known precision.
    let sq = geom.mul(&geom);
    println!("1/(1-t)^2 = {sq:?}");

    // A known-zero truncation reports a lower bound, never exact zero.
    let z = TSeries::truncated(0, vec![Rat::zero(); 3], 3).unwrap();
    println!("zero to order 3: ord = {:?}", z.ord());

    // F = y - x^2 - t x along p(t) = (1 - t, 1 - t - t^2 ... ) truncated.
    let f = MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -1), (&[1, 0, 1], -1)]);
    let names = ["x", "y", "t"].map(String::from);
    let x = TPoly::from_ints(&[1, -1]);
    let y = x.mul(&x).add(&TPoly::t().mul(&x));
    let on = PolyCurve::new(vec![x.clone(), y], 3).unwrap();
    let off = PolyCurve::new(vec![x, TPoly::new(vec![q(1, 2)])], 3).unwrap();
    println!("F = {}", f.fmt_with(&names));
    println!("F(p_on)  = {}", eval_exact(&f, &on).unwrap());
    println!("F(p_off) = {}", eval_exact(&f, &off).unwrap());
    println!(
        "F(p_off) mod t^2 = {:?}",
        eval_at_curve(&f, &off, 2).unwrap()
    );
}
