//! Invariants checked on random inputs.

use proptest::prelude::*;

use ffcount::ansatz::{
    enumerate_points, extract_coefficient_system, hensel_lift, CandidateGrid, CandidateSource,
    LiftStatus,
};
use ffcount::blocks::{covers, decompose, DecomposeInput};
use ffcount::growth::{
    build_growth_series, eval_expanded, support_within_intervals, verify_growth, GrowthSpec,
};
use ffcount::interp::{
    eval_matrix, greedy_order_bound, interp_det, poly_interp_det, select_degree,
    select_hypersurface, OrderBound,
};
use ffcount::pfaff::{library, multiplicity_budget, wilkie_budget, Chain, ChainKind};
use ffcount::series::{
    eval_at_curve, eval_exact, q, MPoly, Monomial, PolyCurve, RFunT, Rat, Ring, TPoly, TSeries,
    Valuation,
};
use ffcount::weier::{bezout_bound, estimate_e, fiber_count};

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&a| Rat::from(a)).collect()
}

fn tpoly() -> impl Strategy<Value = TPoly> {
    prop::collection::vec(-4i64..=4, 0..6).prop_map(|c| TPoly::new(ints(&c)))
}

fn nonzero_tpoly() -> impl Strategy<Value = TPoly> {
    tpoly().prop_filter("nonzero", |p| !p.is_zero())
}

fn laurent() -> impl Strategy<Value = TSeries> {
    (-3i64..=3, prop::collection::vec(-4i64..=4, 0..6))
        .prop_map(|(off, c)| TSeries::exact_laurent(off, ints(&c)))
}

/// Polynomial in `n` variables plus `t` (index `n`).
fn mpoly(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, n + 1), -3i64..=3),
        1..=max_terms,
    )
    .prop_map(|terms| {
        let mut f = MPoly::zero();
        for (e, c) in terms {
            f.add_term(Monomial::new(&e), &Rat::from(c));
        }
        f
    })
}

fn curve(n: usize, r: usize) -> impl Strategy<Value = PolyCurve> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, r), n).prop_map(move |cs| {
        PolyCurve::new(cs.iter().map(|c| TPoly::new(ints(c))).collect(), r).unwrap()
    })
}

fn lower(v: Valuation) -> Option<i64> {
    v.lower_bound()
}

// series

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_is_additive(a in laurent(), b in laurent()) {
        match (a.ord(), b.ord()) {
            (Valuation::Finite(x), Valuation::Finite(y)) => {
                prop_assert_eq!(a.mul(&b).ord(), Valuation::Finite(x + y));
            }
            _ => prop_assert_eq!(a.mul(&b).ord(), Valuation::Infinite),
        }
    }

    #[test]
    fn valuation_is_ultrametric(a in laurent(), b in laurent()) {
        let s = lower(a.add(&b).ord());
        let m = match (lower(a.ord()), lower(b.ord())) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        match (s, m) {
            (Some(s), Some(m)) => prop_assert!(s >= m),
            (Some(_), None) => prop_assert!(false, "sum of zeros is nonzero"),
            _ => {}
        }
    }

    #[test]
    fn unit_inverse_is_two_sided(c0 in 1i64..=5, rest in prop::collection::vec(-4i64..=4, 0..8), m in 1i64..12) {
        let mut c = vec![c0];
        c.extend(rest);
        let a = TSeries::exact(&TPoly::new(ints(&c))).with_trunc(m);
        let b = a.invert_unit().unwrap();
        for prod in [a.mul(&b), b.mul(&a)] {
            for k in 0..m {
                let want = if k == 0 { Rat::one() } else { Rat::zero() };
                prop_assert_eq!(prod.coeff(k).unwrap(), want);
            }
        }
    }

    #[test]
    fn curve_evaluation_is_a_ring_map(
        f in mpoly(2, 2, 4),
        g in mpoly(2, 2, 4),
        p in curve(2, 3),
        m in 1usize..10,
    ) {
        let ev = |h: &MPoly| eval_at_curve(h, &p, m).unwrap();
        let (ef, eg) = (ev(&f), ev(&g));
        let sum = ev(&f.add(&g));
        let prod = ev(&f.mul(&g));
        let (want_sum, want_prod) = (ef.add(&eg), ef.mul(&eg));
        for k in 0..m as i64 {
            prop_assert_eq!(sum.coeff(k).unwrap(), want_sum.coeff(k).unwrap());
            prop_assert_eq!(prod.coeff(k).unwrap(), want_prod.coeff(k).unwrap());
        }
    }

    #[test]
    fn rational_functions_agree_with_evaluation(
        an in tpoly(), ad in nonzero_tpoly(), bn in tpoly(), bd in nonzero_tpoly(), tau in -6i64..=6,
    ) {
        let a = RFunT::new(an, ad).unwrap();
        let b = RFunT::new(bn, bd).unwrap();
        let tau = Rat::from(tau);
        prop_assume!(a.den().eval(&tau) != Rat::zero() && b.den().eval(&tau) != Rat::zero());
        let (va, vb) = (a.eval(&tau).unwrap(), b.eval(&tau).unwrap());
        prop_assert_eq!(a.add_ref(&b).eval(&tau).unwrap(), &va + &vb);
        prop_assert_eq!(a.sub_ref(&b).eval(&tau).unwrap(), &va - &vb);
        prop_assert_eq!(a.mul_ref(&b).eval(&tau).unwrap(), &va * &vb);
    }
}

// ansatz

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extraction_matches_substitution(
        f in mpoly(2, 2, 4),
        p in curve(2, 2),
        plant in any::<bool>(),
    ) {
        // Half the time move the variety through the curve.
        let f = if plant {
            f.sub(&MPoly::from_tpoly(&eval_exact(&f, &p).unwrap(), 2))
        } else {
            f
        };
        let names = vec!["x".to_string(), "y".to_string()];
        let sys = extract_coefficient_system(std::slice::from_ref(&f), &names, 2).unwrap();
        let direct = eval_exact(&f, &p).unwrap();
        prop_assert_eq!(sys.vanishes_at(&p.coefficient_tuple()).unwrap(), direct.is_zero());
        if plant {
            prop_assert!(sys.contains(&p).unwrap());
        }
    }

    #[test]
    fn lift_residual_and_uniqueness(
        y0 in -3i64..=3,
        gap in 1i64..=3,
        g in mpoly(1, 2, 3),
        m in 1usize..8,
        extra in 1usize..6,
    ) {
        // F = (y - y0)(y - y1) + t G: the fiber point y0 is simple.
        let y1 = y0 + gap;
        let root = |c: i64| MPoly::var(0).sub(&MPoly::constant(Rat::from(c)));
        let f = root(y0).mul(&root(y1)).add(&g.mul(&MPoly::var(1)));
        let lift = hensel_lift(std::slice::from_ref(&f), &ints(&[y0]), m).unwrap();
        let t = TSeries::exact(&TPoly::t());
        let residual = f.eval(&[lift.curve[0].clone(), t]).unwrap();
        prop_assert!(residual.ord().is_at_least(m as i64), "residual {:?}", residual.ord());

        let finer = hensel_lift(std::slice::from_ref(&f), &ints(&[y0]), m + extra).unwrap();
        for k in 0..m as i64 {
            prop_assert_eq!(lift.curve[0].coeff(k), finer.curve[0].coeff(k));
        }
        if let LiftStatus::PolynomialWitnessed { r } = lift.status {
            let p = lift.poly_curve();
            prop_assert!(p.components()[0].degree().is_none_or(|d| d < r));
            prop_assert!(eval_exact(&f, &p).unwrap().is_zero());
        }
    }
}

// interp

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn determinant_bounds_hold(
        curves in prop::collection::vec(curve(2, 3), 3),
        exps in prop::collection::vec((0u32..3, 0u32..3), 3),
    ) {
        let f: Vec<MPoly> = exps
            .iter()
            .map(|&(a, b)| MPoly::term(Monomial::new(&[a, b]), Rat::one()))
            .collect();
        let rep = interp_det(&f, &curves).unwrap();
        prop_assert!(rep.bounds_hold());
        let rep = poly_interp_det(&[MPoly::var(0), MPoly::var(1)], 1, &curves).unwrap();
        prop_assert!(rep.bounds_hold());
        if let Some(d) = rep.value.degree() {
            prop_assert!(d as u64 <= rep.deg_upper_bound);
        }
    }

    #[test]
    fn curves_on_a_line_force_vanishing(
        lambda in -3i64..=3,
        kappa in -3i64..=3,
        a in prop::collection::btree_set(-9i64..=9, 6),
    ) {
        // x = a t, y = (lambda a + kappa) t all lie on y = lambda x + kappa t.
        let curves: Vec<PolyCurve> = a
            .into_iter()
            .map(|a| PolyCurve::from_ints(&[&[0, a], &[0, lambda * a + kappa]], 2).unwrap())
            .collect();
        let (mu, d, r) = (6u128, 2u128, 1u128);
        prop_assert_eq!(select_degree(2, 1, 1, 1), 2);
        let OrderBound::Finite(ord) = greedy_order_bound(2, 1, 1, 6) else {
            panic!("finite bound expected");
        };
        prop_assert!(ord > mu * d * r);
        let rep = poly_interp_det(&[MPoly::var(0), MPoly::var(1)], 2, &curves).unwrap();
        prop_assert!(rep.value.is_zero());
    }

    #[test]
    fn selected_hypersurface_vanishes(
        curves in prop::collection::vec(curve(2, 2), 1..6),
        shear in -2i64..=2,
    ) {
        // Coordinates g = (x, y + shear x).
        let g = vec![
            MPoly::var(0),
            MPoly::var(1).add(&MPoly::var(0).scale(&Rat::from(shear))),
        ];
        let h = select_hypersurface(&curves, &g, 2).unwrap();
        prop_assert!(!h.poly.is_zero());
        for p in &curves {
            prop_assert!(h.eval_on(&g, p).unwrap().is_zero());
        }
        // Kernel check through an independent evaluation of the basis.
        let composed: Vec<MPoly> = h
            .basis
            .polys()
            .iter()
            .map(|mono| mono.eval(&g).unwrap())
            .collect();
        let m = eval_matrix(&composed, &curves).unwrap();
        for j in 0..curves.len() {
            let dot = m
                .iter()
                .zip(&h.coefficients)
                .fold(TPoly::zero(), |acc, (row, c)| acc.add(&row[j].mul(c)));
            prop_assert!(dot.is_zero());
        }
    }
}

// weier

fn w_monic(nu: u32) -> impl Strategy<Value = MPoly> {
    // y^nu plus lower powers of y with coefficients in (x, t).
    prop::collection::vec((0u32..nu, 0u32..3, 0u32..3, -3i64..=3), 0..5).prop_map(move |terms| {
        let mut f = MPoly::term(Monomial::new(&[0, nu]), Rat::one());
        for (k, a, b, c) in terms {
            f.add_term(Monomial::new(&[a, k, b]), &Rat::from(c));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fiber_count_equals_nu(f in (1u32..4).prop_flat_map(w_monic), t0 in 1i64..5) {
        let split = estimate_e(std::slice::from_ref(&f), 2, &[0]).unwrap();
        for v in 1..=10 {
            let count = fiber_count(std::slice::from_ref(&f), 2, &split, &ints(&[v]), &Rat::from(t0)).unwrap();
            prop_assert_eq!(count, split.nu);
        }
        prop_assert!(bezout_bound(std::slice::from_ref(&f), &split.w_indices) >= split.nu);
    }

    #[test]
    fn projection_degree_ignores_order_and_scaling(
        f1 in mpoly(3, 2, 3),
        f2 in mpoly(3, 2, 3),
        num in 1i64..5,
        den in 1i64..5,
    ) {
        // Make both equations depend on the w coordinates (1, 2).
        let f1 = f1.add(&MPoly::var(1).pow(2));
        let f2 = f2.add(&MPoly::var(2).pow(2));
        let a = estimate_e(&[f1.clone(), f2.clone()], 3, &[0]);
        prop_assume!(a.is_ok());
        let a = a.unwrap();
        let b = estimate_e(&[f2.scale(&q(num, den)), f1.clone()], 3, &[0]).unwrap();
        prop_assert_eq!(a.nu, b.nu);
        prop_assert!(bezout_bound(&[f1, f2], &a.w_indices) >= a.nu);
    }
}

// pfaff

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn triangularity_ignores_row_order(pick in 0usize..4, trunc in 2u32..6) {
        let chains = library::passing_chains(trunc);
        let (_, c) = &chains[pick % chains.len()];
        let mut rows = c.p.clone();
        rows.reverse();
        let swapped = Chain::new(c.n, c.ell, c.alpha, c.kind, rows, c.phi.clone(), c.trunc, c.with_t).unwrap();
        prop_assert_eq!(swapped.is_triangular(), c.is_triangular());
    }

    #[test]
    fn multiplicity_budget_is_monotone(beta in 1u64..20, n in 1usize..4, ell in 0usize..3) {
        let b = |beta| multiplicity_budget(beta, n, ell, ChainKind::Pfaffian, true, None).value().unwrap();
        prop_assert!(b(beta) <= b(beta + 1));
        prop_assert_eq!(b(1), 1);
    }

    #[test]
    fn wilkie_budget_is_monotone(beta in 1u64..6, r in 1u64..4, n in 1usize..3, ell in 0usize..2) {
        let count = |beta, r| wilkie_budget(beta, r, n, ell).block_count_bound;
        prop_assert!(count(beta, r) <= count(beta + 1, r));
        prop_assert!(count(beta, r) <= count(beta, r + 1));
    }
}

// blocks

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn blocks_cover_the_curves(
        a in -2i64..=2,
        b in -2i64..=2,
        c in -2i64..=2,
        algebraic in any::<bool>(),
        axis0 in prop::collection::btree_set(-3i64..=3, 1..4),
        axis1 in prop::collection::btree_set(-2i64..=2, 1..3),
    ) {
        // Graph y = a x^2 + b x t + c t, candidates for x = u + v t.
        let f = MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -a), (&[1, 0, 1], -b), (&[0, 0, 1], -c)]);
        let axis = |s: &std::collections::BTreeSet<i64>| s.iter().map(|&v| Rat::from(v)).collect::<Vec<_>>();
        let grid = CandidateGrid::product(vec![0], &[vec![axis(&axis0), axis(&axis1)]]);
        let curves = enumerate_points(std::slice::from_ref(&f), 2, 2, &CandidateSource::Grid(grid), 8)
            .unwrap()
            .curves();
        let input = DecomposeInput { n: 2, equations: vec![f], algebraic, curves: curves.clone(), nu: 1, seed: 7 };
        let blocks = decompose(&input).unwrap();
        prop_assert!(covers(&blocks, &curves));
        for blk in &blocks {
            prop_assert!(blk.provenance.len() <= 2);
            if blk.dim == 0 {
                prop_assert_eq!(blk.absorbed.len(), 1);
            }
        }
    }
}

// growth

fn increasing(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::btree_set(1u64..40, 1..=max_len).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn growth_levels_have_n_i_witnesses(n in increasing(4), depth_seed in 0usize..4) {
        let depth = 1 + depth_seed % n.len();
        let series = build_growth_series(&GrowthSpec::new(n.clone(), depth).unwrap());
        let report = verify_growth(&series, &n, depth);
        prop_assert!(report.passed);
        for level in &report.levels {
            prop_assert_eq!(level.n_i, n[level.i - 1]);
            prop_assert_eq!(level.witnesses, level.n_i);
            let rows = report.rows.iter().filter(|r| r.i == level.i).count() as u64;
            prop_assert_eq!(rows, level.n_i);
        }
    }

    #[test]
    fn growth_support_and_evaluation(n in increasing(3), j in -5i64..45) {
        let series = build_growth_series(&GrowthSpec::new(n.clone(), n.len()).unwrap());
        let f = series.to_mpoly();
        prop_assert!(support_within_intervals(&f, &n));
        prop_assert_eq!(eval_expanded(&f, j), series.eval_at(j));
    }
}
