//! Interpolation determinants and the counting that turns their order and
//! degree into a vanishing criterion, plus selection of an interpolating
//! hypersurface through a set of curves.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::linalg::{det_tpoly, echelon_bareiss, kernel_from_rref, rref};
use crate::series::{eval_exact, MPoly, Monomial, PolyCurve, RFunT, Rat, SeriesError, TPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("shape mismatch: {rows} functions against {cols} curves")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error("curve {0} does not pass through the origin")]
    OffBasePoint(usize),
    #[error("no curves given")]
    EmptyInput,
    #[error("evaluation matrix has full column rank; increase d")]
    NoKernel,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// All exponent vectors of total degree `<= d` in `m + 1` variables, by
/// ascending degree and, within a degree, lexicographically descending
/// (so `x^2, x y, y^2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialBasis {
    pub m_plus_1: usize,
    pub d: usize,
    pub monomials: Vec<Vec<u32>>,
}

impl MonomialBasis {
    pub fn new(m_plus_1: usize, d: usize) -> Self {
        let mut monomials = Vec::new();
        for k in 0..=d as u32 {
            fill_degree(m_plus_1, k, &mut Vec::new(), &mut monomials);
        }
        MonomialBasis {
            m_plus_1,
            d,
            monomials,
        }
    }

    pub fn mu(&self) -> usize {
        self.monomials.len()
    }

    /// The basis monomials as polynomials in the g-coordinates.
    pub fn polys(&self) -> Vec<MPoly> {
        self.monomials
            .iter()
            .map(|e| MPoly::term(Monomial::new(e), Rat::one()))
            .collect()
    }
}

fn fill_degree(vars: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == vars {
        prefix.push(k);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    if vars == 0 {
        return;
    }
    for e in (0..=k).rev() {
        prefix.push(e);
        fill_degree(vars, k - e, prefix, out);
        prefix.pop();
    }
}

/// `C(d + m + 1, m + 1)`: polynomials of degree `<= d` in `m + 1` variables.
pub fn mu(d: usize, m: usize) -> u128 {
    binomial((d + m + 1) as u128, (m + 1) as u128)
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        // acc * (n - i) is divisible by i + 1; split the division so the
        // product stays small, and saturate once it no longer fits.
        let g = acc.gcd(&(i + 1));
        let Some(next) = (acc / g).checked_mul((n - i) / ((i + 1) / g)) else {
            return u128::MAX;
        };
        acc = next;
    }
    acc
}

/// Local model of the germ the curves lie on: ambient dimension `n`,
/// dimension `m` of the fibres over `t`, and projection degree `nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermModel {
    pub n: usize,
    pub m: usize,
    pub nu: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetReport {
    pub value: TPoly,
    pub ord_lower_bound: u64,
    pub deg_upper_bound: u64,
    pub vanished: bool,
    /// Set when the germ model forces the determinant to vanish.
    pub forced_vanishing: bool,
}

impl DetReport {
    /// Whether the exact value respects both bounds.
    pub fn bounds_hold(&self) -> bool {
        match (self.value.ord(), self.value.degree()) {
            (Some(o), Some(d)) => {
                o as u64 >= self.ord_lower_bound && d as u64 <= self.deg_upper_bound
            }
            _ => true,
        }
    }
}

/// Evaluation matrix `M[i][j] = f_i(p_j)`.
pub fn eval_matrix(f_list: &[MPoly], curves: &[PolyCurve]) -> Result<Vec<Vec<TPoly>>, InterpError> {
    f_list
        .par_iter()
        .map(|f| {
            curves
                .iter()
                .map(|p| eval_exact(f, p))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()
        .map_err(InterpError::from)
}

/// `det (f_i(p_j))` with generic bounds: the order is at least the sum over
/// columns of the least entry order, the degree at most the sum over
/// columns of the largest entry degree.
pub fn interp_det(f_list: &[MPoly], curves: &[PolyCurve]) -> Result<DetReport, InterpError> {
    interp_det_inner(f_list, curves, None)
}

/// As [`interp_det`], additionally applying the greedy order bound for
/// curves through the origin of a germ with the given model.
pub fn interp_det_with_model(
    f_list: &[MPoly],
    curves: &[PolyCurve],
    model: GermModel,
) -> Result<DetReport, InterpError> {
    if let Some(j) = curves
        .iter()
        .position(|p| p.base_point().iter().any(|c| !c.is_zero()))
    {
        return Err(InterpError::OffBasePoint(j));
    }
    interp_det_inner(f_list, curves, Some(model))
}

fn interp_det_inner(
    f_list: &[MPoly],
    curves: &[PolyCurve],
    model: Option<GermModel>,
) -> Result<DetReport, InterpError> {
    if f_list.len() != curves.len() {
        return Err(InterpError::ShapeMismatch {
            rows: f_list.len(),
            cols: curves.len(),
        });
    }
    let matrix = eval_matrix(f_list, curves)?;
    let mut report = report_for(matrix);
    if let Some(GermModel { n, m, nu }) = model {
        match greedy_order_bound(n, m, nu, curves.len() as u64) {
            OrderBound::Finite(b) => {
                report.ord_lower_bound = report.ord_lower_bound.max(b.min(u64::MAX as u128) as u64)
            }
            OrderBound::Vanishes => report.forced_vanishing = true,
        }
    }
    Ok(report)
}

fn report_for(matrix: Vec<Vec<TPoly>>) -> DetReport {
    let n = matrix.len();
    let (mut ord_lb, mut deg_ub) = (0u64, 0u64);
    for j in 0..n {
        let col = matrix.iter().map(|row| &row[j]);
        ord_lb += col.clone().filter_map(TPoly::ord).min().unwrap_or(0) as u64;
        deg_ub += col.filter_map(TPoly::degree).max().unwrap_or(0) as u64;
    }
    let value = det_tpoly(&matrix);
    DetReport {
        vanished: value.is_zero(),
        value,
        ord_lower_bound: ord_lb,
        deg_upper_bound: deg_ub,
        forced_vanishing: false,
    }
}

/// Largest `deg_t g_k(p_j)` over all coordinates and curves.
pub fn g_degree(g: &[MPoly], curves: &[PolyCurve]) -> Result<usize, InterpError> {
    let mut r = 0;
    for p in curves {
        for gk in g {
            r = r.max(eval_exact(gk, p)?.degree().unwrap_or(0));
        }
    }
    Ok(r)
}

/// The interpolation determinant of all monomials of degree `<= d` in the
/// coordinates `g`. The degree bound is `mu * d * r` with `r` the largest
/// t-degree of `g(p_j)`.
pub fn poly_interp_det(
    g: &[MPoly],
    d: usize,
    curves: &[PolyCurve],
) -> Result<DetReport, InterpError> {
    let basis = MonomialBasis::new(g.len(), d);
    if basis.mu() != curves.len() {
        return Err(InterpError::ShapeMismatch {
            rows: basis.mu(),
            cols: curves.len(),
        });
    }
    let matrix = g_monomial_matrix(g, &basis, curves)?;
    let mut report = report_for(matrix);
    let r = g_degree(g, curves)? as u64;
    report.deg_upper_bound = basis.mu() as u64 * d as u64 * r;
    Ok(report)
}

/// Rows indexed by curves, columns by basis monomials.
fn g_monomial_matrix(
    g: &[MPoly],
    basis: &MonomialBasis,
    curves: &[PolyCurve],
) -> Result<Vec<Vec<TPoly>>, InterpError> {
    let polys = basis.polys();
    curves
        .par_iter()
        .map(|p| -> Result<Vec<TPoly>, InterpError> {
            let gv: Vec<TPoly> = g
                .iter()
                .map(|gk| eval_exact(gk, p))
                .collect::<Result<_, _>>()?;
            Ok(polys
                .iter()
                .map(|mono| mono.eval(&gv))
                .collect::<Result<_, _>>()?)
        })
        .collect()
}

/// Upper bound on the number of independent terms of order `k`:
/// `nu^(n-m) * C(k+m-1, m-1)`. For `m = 0` only constants remain.
pub fn capacity(nu: u64, k: u64, n: usize, m: usize) -> u128 {
    let base = (nu as u128).saturating_pow((n - m) as u32);
    if m == 0 {
        return if k == 0 { base } else { 0 };
    }
    base.saturating_mul(binomial(k as u128 + m as u128 - 1, m as u128 - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum OrderBound {
    Finite(u128),
    /// More columns than independent terms: every determinant vanishes.
    Vanishes,
}

/// Fills the `mu` columns into orders `0, 1, 2, ...` with `capacity` slots
/// each and sums the orders used. Orders below `K` hold
/// `c * C(K+m-1, m)` columns whose orders sum to `c * m * C(K+m-1, m+1)`,
/// with `c = nu^(n-m)`; the last partial order is added on top.
pub fn greedy_order_bound(n: usize, m: usize, nu: u64, mu: u64) -> OrderBound {
    let left = mu as u128;
    if left == 0 {
        return OrderBound::Finite(0);
    }
    if m == 0 {
        let c = (nu as u128).saturating_pow(n as u32);
        return if left <= c {
            OrderBound::Finite(0)
        } else {
            OrderBound::Vanishes
        };
    }
    let c = (nu as u128).saturating_pow((n - m) as u32);
    let m128 = m as u128;
    let filled = |k: u128| c.saturating_mul(binomial(k + m128 - 1, m128));
    // Largest K with filled(K) <= mu.
    let (mut lo, mut hi) = (0u128, 1u128);
    while filled(hi) <= left {
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if filled(mid) <= left {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = lo;
    let full = if k == 0 {
        0
    } else {
        c.saturating_mul(m128)
            .saturating_mul(binomial(k + m128 - 1, m128 + 1))
    };
    let rest = left - filled(k);
    OrderBound::Finite(full.saturating_add(rest.saturating_mul(k)))
}

fn degree_forces_vanishing(n: usize, m: usize, nu: u64, r: u64, d: u64) -> bool {
    let mu = mu(d as usize, m);
    let deg = mu.saturating_mul(d as u128).saturating_mul(r as u128);
    match greedy_order_bound(n, m, nu, mu.min(u64::MAX as u128) as u64) {
        OrderBound::Vanishes => true,
        OrderBound::Finite(b) => b > deg,
    }
}

const LINEAR_SCAN: u64 = 1 << 16;

/// Least `d >= 1` for which the order bound of a `mu(d)`-column
/// determinant exceeds its degree bound `mu(d) * d * r`, where `r` bounds
/// the t-degree of `g(p)`. At that `d` every such determinant vanishes.
///
/// Past `2^16` the search gallops and bisects.
pub fn select_degree(n: usize, m: usize, nu: u64, r: u64) -> u64 {
    if m == 0 {
        return (nu as u128).saturating_pow(n as u32).min(u64::MAX as u128) as u64;
    }
    if let Some(d) = (1..=LINEAR_SCAN).find(|&d| degree_forces_vanishing(n, m, nu, r, d)) {
        return d;
    }
    let (mut lo, mut hi) = (LINEAR_SCAN, LINEAR_SCAN * 2);
    while !degree_forces_vanishing(n, m, nu, r, hi) {
        if hi >= u64::MAX / 2 {
            return u64::MAX;
        }
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if degree_forces_vanishing(n, m, nu, r, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// A hypersurface `P(g, t) = 0` through a set of curves. The polynomial is
/// in variables `g_0, ..., g_m, t` (t last) with coefficients in `Q[t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypersurface {
    pub basis: MonomialBasis,
    pub coefficients: Vec<TPoly>,
    pub poly: MPoly,
}

impl Hypersurface {
    /// `P(g(p(t)), t)` as an exact polynomial.
    pub fn eval_on(&self, g: &[MPoly], p: &PolyCurve) -> Result<TPoly, InterpError> {
        let mut gv: Vec<TPoly> = g
            .iter()
            .map(|gk| eval_exact(gk, p))
            .collect::<Result<_, _>>()?;
        gv.push(TPoly::t());
        Ok(self.poly.eval(&gv)?)
    }

    pub fn vanishes_on(&self, g: &[MPoly], curves: &[PolyCurve]) -> Result<bool, InterpError> {
        for p in curves {
            if !self.eval_on(g, p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Picks a nonzero polynomial of degree `<= d` in `g` vanishing on every
/// curve, from the kernel of the evaluation matrix over `Q(t)`. Among
/// kernel elements, the reduced echelon basis vector with the lowest pivot
/// is returned, scaled so that its coefficients are coprime in `Q[t]` and
/// the first nonzero one is monic.
pub fn select_hypersurface(
    curves: &[PolyCurve],
    g: &[MPoly],
    d: usize,
) -> Result<Hypersurface, InterpError> {
    if curves.is_empty() {
        return Err(InterpError::EmptyInput);
    }
    let basis = MonomialBasis::new(g.len(), d);
    let mu = basis.mu();
    let matrix = g_monomial_matrix(g, &basis, curves)?;

    let ech = echelon_bareiss(matrix);
    if ech.rank() == mu {
        return Err(InterpError::NoKernel);
    }
    let reduced: Vec<Vec<RFunT>> = ech
        .rows
        .into_iter()
        .take(ech.pivots.len())
        .map(|row| row.into_iter().map(RFunT::from_poly).collect())
        .collect();
    let (rows, pivots) = rref(reduced);
    let ker = kernel_from_rref(&rows, &pivots, mu);
    let (ker_rows, _) = rref(ker);
    let first = ker_rows.into_iter().next().ok_or(InterpError::NoKernel)?;
    let coefficients = clear_denominators(&first);

    let t_index = g.len();
    let mut poly = MPoly::zero();
    for (e, c) in basis.monomials.iter().zip(&coefficients) {
        for (k, ck) in c.coeffs().iter().enumerate() {
            if !ck.is_zero() {
                poly.add_term(Monomial::new(e).with_exp(t_index, k as u32), ck);
            }
        }
    }
    Ok(Hypersurface {
        basis,
        coefficients,
        poly,
    })
}

fn clear_denominators(v: &[RFunT]) -> Vec<TPoly> {
    let lcm = v.iter().fold(TPoly::constant(Rat::one()), |acc, x| {
        let g = acc.gcd(x.den());
        acc.mul(x.den()).div_rem(&g).0
    });
    let polys: Vec<TPoly> = v
        .iter()
        .map(|x| x.num().mul(&lcm.div_rem(x.den()).0))
        .collect();
    let content = polys
        .iter()
        .filter(|p| !p.is_zero())
        .fold(TPoly::zero(), |acc, p| acc.gcd(p));
    let lead = polys
        .iter()
        .find(|p| !p.is_zero())
        .map(|p| p.div_rem(&content).0.leading())
        .unwrap_or_else(Rat::one);
    let scale = lead.recip().expect("nonzero leading coefficient");
    polys
        .iter()
        .map(|p| p.div_rem(&content).0.scale(&scale))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::q;

    fn vandermonde_curves() -> Vec<PolyCurve> {
        (1..=3)
            .map(|j| PolyCurve::from_ints(&[&[0, j], &[0, 0, j * j]], 3).unwrap())
            .collect()
    }

    fn xy() -> Vec<MPoly> {
        vec![MPoly::var(0), MPoly::var(1)]
    }

    #[test]
    fn monomial_basis_order_and_count() {
        let b = MonomialBasis::new(2, 2);
        assert_eq!(
            b.monomials,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        for (d, m) in [(3usize, 1usize), (2, 2), (4, 0)] {
            assert_eq!(MonomialBasis::new(m + 1, d).mu() as u128, mu(d, m));
        }
    }

    #[test]
    fn two_by_two_det() {
        let f = vec![MPoly::one(), MPoly::var(0)];
        let curves = vec![
            PolyCurve::from_ints(&[&[0, 1]], 2).unwrap(),
            PolyCurve::from_ints(&[&[0, 2]], 2).unwrap(),
        ];
        let rep = interp_det(&f, &curves).unwrap();
        assert_eq!(rep.value, TPoly::t());
        assert!(!rep.vanished);
        let dup = vec![curves[0].clone(), curves[0].clone()];
        assert!(interp_det(&f, &dup).unwrap().vanished);
    }

    #[test]
    fn vandermonde_attains_greedy_bound() {
        let f = vec![MPoly::one(), MPoly::var(0), MPoly::var(1)];
        let model = GermModel { n: 2, m: 1, nu: 1 };
        let rep = interp_det_with_model(&f, &vandermonde_curves(), model).unwrap();
        assert_eq!(rep.value, TPoly::monomial(q(2, 1), 3));
        assert_eq!(rep.ord_lower_bound, 3);

        let rep = poly_interp_det(&xy(), 1, &vandermonde_curves()).unwrap();
        assert_eq!(rep.value, TPoly::monomial(q(2, 1), 3));
        assert_eq!(rep.deg_upper_bound, 6);
        assert!(rep.bounds_hold());
    }

    #[test]
    fn univariate_poly_det() {
        let curves: Vec<PolyCurve> = [0, 1, 2]
            .iter()
            .map(|&j| PolyCurve::from_ints(&[&[0, j]], 2).unwrap())
            .collect();
        let rep = poly_interp_det(&[MPoly::var(0)], 2, &curves).unwrap();
        assert_eq!(rep.value, TPoly::monomial(q(2, 1), 3));
        assert!(matches!(
            poly_interp_det(&[MPoly::var(0)], 3, &curves),
            Err(InterpError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn capacity_values() {
        assert_eq!(capacity(1, 5, 2, 1), 1);
        assert_eq!(capacity(3, 2, 3, 2), 9);
        assert_eq!(capacity(2, 0, 2, 1), 2);
    }

    #[test]
    fn greedy_values() {
        assert_eq!(greedy_order_bound(2, 1, 1, 3), OrderBound::Finite(3));
        assert_eq!(greedy_order_bound(2, 1, 2, 4), OrderBound::Finite(2));
        assert_eq!(greedy_order_bound(3, 2, 5, 1), OrderBound::Finite(0));
        assert_eq!(greedy_order_bound(2, 0, 2, 5), OrderBound::Vanishes);
    }

    #[test]
    fn greedy_closed_form_matches_iteration() {
        for n in 1..4 {
            for nu in 1..4 {
                for mu in 1..40 {
                    let mut left = mu as u128;
                    let mut sum = 0;
                    let mut k = 0;
                    while left > 0 {
                        let take = capacity(nu, k, n, 1).min(left);
                        sum += take * k as u128;
                        left -= take;
                        k += 1;
                    }
                    assert_eq!(greedy_order_bound(n, 1, nu, mu), OrderBound::Finite(sum));
                }
            }
        }
    }

    #[test]
    fn degree_selection() {
        assert_eq!(select_degree(2, 1, 1, 2), 6);
        assert_eq!(select_degree(2, 1, 1, 1), 2);
        assert!(select_degree(2, 1, 1, 3) >= 6);
        assert_eq!(select_degree(2, 0, 2, 5), 4);
    }

    #[test]
    fn hypersurface_through_parabola_points() {
        let h = select_hypersurface(&vandermonde_curves(), &xy(), 2).unwrap();
        assert!(h.vanishes_on(&xy(), &vandermonde_curves()).unwrap());
        assert!(!h.poly.is_zero());
    }

    #[test]
    fn hypersurface_single_curve() {
        let c = vec![PolyCurve::from_ints(&[&[0, 1], &[0, 1]], 2).unwrap()];
        let h = select_hypersurface(&c, &xy(), 1).unwrap();
        assert!(h.vanishes_on(&xy(), &c).unwrap());
        // t - y is the lowest-pivot echelon element; x - y is also in the kernel.
        assert_eq!(
            h.poly,
            MPoly::from_int_terms(&[(&[0, 0, 1], 1), (&[0, 1], -1)])
        );
    }

    #[test]
    fn hypersurface_twisted_parabola() {
        let curves: Vec<PolyCurve> = [0i64, 1, 2]
            .iter()
            .flat_map(|&a0| {
                [0i64, -1].into_iter().map(move |a1| {
                    let x = TPoly::from_ints(&[a0, a1]);
                    let y = x.mul(&x).add(&TPoly::t().mul(&x));
                    PolyCurve::tight(vec![x, y])
                })
            })
            .collect();
        let h = select_hypersurface(&curves, &xy(), 2).unwrap();
        assert!(h.vanishes_on(&xy(), &curves).unwrap());
        // x^2 + t x - y
        let want = MPoly::from_int_terms(&[(&[2], 1), (&[1, 0, 1], 1), (&[0, 1], -1)]);
        assert_eq!(h.poly, want);
    }

    #[test]
    fn no_kernel_when_full_rank() {
        let c = vec![
            PolyCurve::from_ints(&[&[0, 1]], 2).unwrap(),
            PolyCurve::from_ints(&[&[1]], 2).unwrap(),
        ];
        assert_eq!(
            select_hypersurface(&c, &[MPoly::var(0)], 1),
            Err(InterpError::NoKernel)
        );
    }

    fn naive_greedy(n: usize, m: usize, nu: u64, mu: u64) -> OrderBound {
        let mut left = mu as u128;
        let (mut sum, mut k) = (0u128, 0u64);
        while left > 0 {
            let cap = capacity(nu, k, n, m);
            if cap == 0 {
                return OrderBound::Vanishes;
            }
            let take = cap.min(left);
            sum += take * k as u128;
            left -= take;
            k += 1;
        }
        OrderBound::Finite(sum)
    }

    #[test]
    fn greedy_closed_form_matches_filling() {
        for n in 1..=4 {
            for m in 0..=n.min(3) {
                for nu in 1..=3 {
                    for mu in 0..60 {
                        assert_eq!(
                            greedy_order_bound(n, m, nu, mu),
                            naive_greedy(n, m, nu, mu),
                            "n={n} m={m} nu={nu} mu={mu}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_saturates() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(200, 100), u128::MAX);
        assert_eq!(binomial(130, 2), 8385);
    }
}
