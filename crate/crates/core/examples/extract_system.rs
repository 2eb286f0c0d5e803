//! The coefficient system whose zeros are the curves of degree < r on a
//! variety, checked against direct substitution.

use ffcount::ansatz::extract_coefficient_system;
use ffcount::series::{eval_exact, MPoly, PolyCurve};

fn main() {
    // y = x^2
    let f = MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -1)]);
    let vars = ["x", "y"].map(String::from);
    let r = 3;
    let sys = extract_coefficient_system(std::slice::from_ref(&f), &vars, r).unwrap();
    let mut names = sys.unknowns.clone();
    names.push("t".into());
    println!("unknowns: {:?}", sys.unknowns);
    for e in &sys.equations {
        println!("  [t^{}] {} = 0", e.power, e.poly.fmt_with(&names));
    }
    println!("dimension: {:?}", sys.dimension());

    for (x, y) in [
        (&[1, 2][..], &[1, 4, 4][..]),
        (&[0, 1], &[0, 0, 1]),
        (&[1, 1], &[1, 2]),
    ] {
        let p = PolyCurve::from_ints(&[x, y], 3).unwrap();
        println!(
            "curve {:?}: system says {}, substitution gives {}",
            p.components(),
            sys.contains(&p).unwrap(),
            eval_exact(&f, &p).unwrap()
        );
    }
}
