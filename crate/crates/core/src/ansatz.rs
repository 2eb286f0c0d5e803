//! Reduction of curve membership to polynomial systems in the curve
//! coefficients, Newton lifting from the `t = 0` fiber, and enumeration of
//! degree-bounded curves.
//!
//! Throughout, a polynomial `F` describing the variety lives in variables
//! `x_0, ..., x_{n-1}, t` with `t` at index `n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::linalg::rref;
use crate::series::{
    eval_at_curve, eval_exact, substitution_degree_bound, MPoly, PolyCurve, Rat, Ring, SeriesError,
    TPoly, TSeries, Valuation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnsatzError {
    #[error("input encodes field inversion, which extraction does not support")]
    InversionPresent,
    #[error("system is not square: {equations} equations, {unknowns} unknowns, {point} fiber coordinates")]
    NotSquare {
        equations: usize,
        unknowns: usize,
        point: usize,
    },
    #[error("fiber point does not satisfy equation {0} at t = 0")]
    NotOnFiber(usize),
    #[error("Jacobian at the fiber point is singular")]
    Singular,
    #[error("no candidates to enumerate")]
    EmptyInput,
    #[error("equations are not in graph form for the chosen free coordinates: {0}")]
    NotGraphForm(String),
    #[error("bad candidate: {0}")]
    BadCandidate(String),
    #[error(transparent)]
    Series(SeriesError),
}

impl From<SeriesError> for AnsatzError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::NegativeExponent => AnsatzError::InversionPresent,
            other => AnsatzError::Series(other),
        }
    }
}

/// One equation of a coefficient system: the coefficient of `t^power` in
/// `F_source(p(t), t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientEquation {
    pub source: usize,
    pub power: usize,
    pub poly: MPoly,
}

/// Polynomial system in the unknowns `a_{j,l}` (`j < n`, `l < r`), indexed
/// `j * r + l`, whose common zeros are exactly the coefficient tuples of
/// curves of degree `< r` on the variety.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSystem {
    pub n: usize,
    pub r: usize,
    pub unknowns: Vec<String>,
    pub equations: Vec<CoefficientEquation>,
}

/// What can be said about the solution set of a coefficient system without
/// a general solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemDimension {
    /// Inconsistent: some unknown is constrained by a nonzero constant.
    Empty,
    /// Every unknown is pinned by univariate equations; `points` counts the
    /// solutions over the algebraic closure.
    ZeroDimensional { points: u64 },
    /// The equations are univariate but these unknowns are unconstrained.
    PositiveDimensional { free: Vec<String> },
    /// Some equation couples several unknowns; hand the system to an
    /// external solver.
    Undetermined,
}

impl CoefficientSystem {
    pub fn num_unknowns(&self) -> usize {
        self.n * self.r
    }

    /// True when every equation vanishes at the coefficient tuple.
    pub fn vanishes_at(&self, tuple: &[Rat]) -> Result<bool, AnsatzError> {
        for eq in &self.equations {
            if !eq.poly.eval_rat(tuple)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains(&self, curve: &PolyCurve) -> Result<bool, AnsatzError> {
        let padded = PolyCurve::new(curve.components().to_vec(), self.r)?;
        self.vanishes_at(&padded.coefficient_tuple())
    }

    /// Zero-dimensionality check for the univariate-eliminable case.
    pub fn dimension(&self) -> SystemDimension {
        let nu = self.num_unknowns();
        let mut per_unknown: Vec<Option<TPoly>> = vec![None; nu];
        for eq in &self.equations {
            let used: Vec<usize> = (0..nu).filter(|&u| eq.poly.involves(u)).collect();
            match used.as_slice() {
                [] => {
                    if !eq.poly.is_zero() {
                        return SystemDimension::Empty;
                    }
                }
                [u] => {
                    let p = eq.poly.to_tpoly(*u).expect("univariate equation");
                    per_unknown[*u] = Some(match per_unknown[*u].take() {
                        None => p.monic(),
                        Some(g) => g.gcd(&p),
                    });
                }
                _ => return SystemDimension::Undetermined,
            }
        }
        let mut free = Vec::new();
        let mut points: u64 = 1;
        for (u, g) in per_unknown.iter().enumerate() {
            match g {
                None => free.push(self.unknowns[u].clone()),
                Some(g) if g.is_constant() => return SystemDimension::Empty,
                Some(g) => {
                    let (_, parts) = g.square_free_decomposition();
                    let distinct: usize = parts.iter().filter_map(TPoly::degree).sum();
                    points = points.saturating_mul(distinct as u64);
                }
            }
        }
        if free.is_empty() {
            SystemDimension::ZeroDimensional { points }
        } else {
            SystemDimension::PositiveDimensional { free }
        }
    }
}

/// Names `x_0, x_1, ...` for the coefficients of each ambient variable.
pub fn unknown_names(var_names: &[String], r: usize) -> Vec<String> {
    var_names
        .iter()
        .flat_map(|v| (0..r).map(move |l| format!("{v}_{l}")))
        .collect()
}

/// Substitutes `x_j = sum_l a_{j,l} t^l` into each `F` and collects the
/// coefficient of every power of `t` up to the substitution degree bound.
/// Identically-zero coefficients are dropped.
pub fn extract_coefficient_system(
    f_list: &[MPoly],
    var_names: &[String],
    r: usize,
) -> Result<CoefficientSystem, AnsatzError> {
    let n = var_names.len();
    let nu = n * r;
    let t_index = nu;
    for f in f_list {
        if f.arity() > n + 1 {
            return Err(SeriesError::ArityMismatch {
                expected: n + 1,
                found: f.arity(),
            }
            .into());
        }
    }
    let mut subs: Vec<MPoly> = (0..n)
        .map(|j| {
            (0..r).fold(MPoly::zero(), |acc, l| {
                let term = MPoly::var(j * r + l).mul(&MPoly::var(t_index).pow(l as u32));
                acc.add(&term)
            })
        })
        .collect();
    subs.push(MPoly::var(t_index));

    let per_source: Vec<Vec<CoefficientEquation>> = f_list
        .par_iter()
        .enumerate()
        .map(|(source, f)| -> Result<_, AnsatzError> {
            let bound = substitution_degree_bound(f, n, r).unwrap_or(0);
            let expanded = f.eval(&subs)?;
            let mut by_power = vec![MPoly::zero(); bound + 1];
            for (m, c) in expanded.terms() {
                let e = m.exp(t_index) as usize;
                by_power[e].add_term(m.with_exp(t_index, 0), c);
            }
            Ok(by_power
                .into_iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(power, poly)| CoefficientEquation {
                    source,
                    power,
                    poly,
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;

    Ok(CoefficientSystem {
        n,
        r,
        unknowns: unknown_names(var_names, r),
        equations: per_source.into_iter().flatten().collect(),
    })
}

/// Certification status of a lifted or enumerated curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LiftStatus {
    /// The curve is an exact polynomial solution with every component of
    /// degree `< r`.
    PolynomialWitnessed {
        r: usize,
    },
    /// No polynomial solution of degree `< m` passes through the point.
    NonPolynomialToOrder {
        m: usize,
    },
    Singular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftResult {
    pub curve: Vec<TSeries>,
    pub status: LiftStatus,
}

impl LiftResult {
    /// The lift read as a polynomial curve (valid when the status is
    /// `PolynomialWitnessed`).
    pub fn poly_curve(&self) -> PolyCurve {
        PolyCurve::tight(self.curve.iter().map(TSeries::to_tpoly).collect())
    }
}

/// Newton lifting of a nonsingular point of the `t = 0` fiber to a power
/// series solution modulo `t^m`. Precision doubles at every step.
pub fn hensel_lift(
    f_list: &[MPoly],
    fiber_point: &[Rat],
    m: usize,
) -> Result<LiftResult, AnsatzError> {
    let k = fiber_point.len();
    if f_list.len() != k {
        return Err(AnsatzError::NotSquare {
            equations: f_list.len(),
            unknowns: k,
            point: fiber_point.len(),
        });
    }
    for f in f_list {
        if f.arity() > k + 1 {
            return Err(SeriesError::ArityMismatch {
                expected: k + 1,
                found: f.arity(),
            }
            .into());
        }
    }
    let m = m.max(1);
    let mut at_zero: Vec<Rat> = fiber_point.to_vec();
    at_zero.push(Rat::zero());
    for (i, f) in f_list.iter().enumerate() {
        if !f.eval_rat(&at_zero)?.is_zero() {
            return Err(AnsatzError::NotOnFiber(i));
        }
    }
    let jac: Vec<Vec<MPoly>> = f_list
        .iter()
        .map(|f| (0..k).map(|j| f.derivative(j)).collect())
        .collect();
    let j0: Vec<Vec<Rat>> = jac
        .iter()
        .map(|row| {
            row.iter()
                .map(|d| d.eval_rat(&at_zero))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    if rref(j0).1.len() < k {
        return Err(AnsatzError::Singular);
    }

    let mut y: Vec<TPoly> = fiber_point
        .iter()
        .map(|c| TPoly::constant(c.clone()))
        .collect();
    let mut prec = 1usize;
    while prec < m {
        let next = (2 * prec).min(m);
        let mut values: Vec<TSeries> = y
            .iter()
            .map(|p| TSeries::from_poly_mod(p, next as i64))
            .collect();
        values.push(TSeries::exact(&TPoly::t()));
        let residual: Vec<TSeries> = f_list
            .iter()
            .map(|f| f.eval(&values).map(|v| v.with_trunc(next as i64)))
            .collect::<Result<_, _>>()?;
        let jm: Vec<Vec<TSeries>> = jac
            .iter()
            .map(|row| {
                row.iter()
                    .map(|d| d.eval(&values).map(|v| v.with_trunc(next as i64)))
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, _>>()?;
        let delta = solve_unit_system(jm, residual)?;
        for (yj, dj) in y.iter_mut().zip(&delta) {
            *yj = yj.sub(&dj.to_tpoly()).truncate(next);
        }
        prec = next;
    }

    let curve: Vec<TSeries> = y
        .iter()
        .map(|p| TSeries::from_poly_mod(p, m as i64))
        .collect();
    let poly = PolyCurve::tight(y.clone());
    let mut exact = true;
    for f in f_list {
        if !eval_exact(f, &poly)?.is_zero() {
            exact = false;
            break;
        }
    }
    let status = if exact {
        LiftStatus::PolynomialWitnessed { r: poly.r() }
    } else {
        LiftStatus::NonPolynomialToOrder { m }
    };
    Ok(LiftResult { curve, status })
}

/// Solves `A x = b` over `Q[[t]]` when `A` is invertible modulo `t`.
fn solve_unit_system(
    mut a: Vec<Vec<TSeries>>,
    mut b: Vec<TSeries>,
) -> Result<Vec<TSeries>, AnsatzError> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| a[i][c].ord() == Valuation::Finite(0))
            .ok_or(AnsatzError::Singular)?;
        a.swap(p, c);
        b.swap(p, c);
        let inv = a[c][c].invert_unit()?;
        for e in a[c][c..].iter_mut() {
            *e = e.mul(&inv);
        }
        b[c] = b[c].mul(&inv);
        let pivot_row = a[c].clone();
        for i in 0..n {
            if i == c {
                continue;
            }
            let factor = a[i][c].clone();
            if factor.is_zero() {
                continue;
            }
            for (e, p) in a[i][c..].iter_mut().zip(&pivot_row[c..]) {
                *e = e.sub(&factor.mul(p));
            }
            let s = factor.mul(&b[c]);
            b[i] = b[i].sub(&s);
        }
    }
    Ok(b)
}

/// Finite candidate set for the coefficients of designated free
/// coordinates. Each point lists `r` coefficients per free coordinate,
/// free-coordinate-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateGrid {
    pub free: Vec<usize>,
    pub points: Vec<Vec<Rat>>,
}

impl CandidateGrid {
    /// Cartesian product: `axes[f][l]` lists candidate values of the
    /// coefficient of `t^l` in free coordinate `f`.
    pub fn product(free: Vec<usize>, axes: &[Vec<Vec<Rat>>]) -> Self {
        let flat: Vec<&Vec<Rat>> = axes.iter().flatten().collect();
        let mut points: Vec<Vec<Rat>> = vec![Vec::new()];
        for axis in flat {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        CandidateGrid { free, points }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CandidateSource {
    /// Points of the `t = 0` fiber to lift (square systems).
    FiberPoints(Vec<Vec<Rat>>),
    /// Candidate coefficients for free coordinates of a graph-form variety.
    Grid(CandidateGrid),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumeratedCurve {
    pub candidate: usize,
    pub curve: PolyCurve,
    pub status: LiftStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RejectedCandidate {
    pub candidate: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Enumeration {
    pub found: Vec<EnumeratedCurve>,
    pub rejected: Vec<RejectedCandidate>,
}

impl Enumeration {
    pub fn curves(&self) -> Vec<PolyCurve> {
        self.found.iter().map(|e| e.curve.clone()).collect()
    }
}

enum Outcome {
    Found(PolyCurve, LiftStatus),
    Rejected(String),
}

/// Enumerates curves of degree `< r` on `{F = 0}` from either fiber points
/// (Newton lifting to order `m`) or a candidate grid (graph mode). Only
/// curves certified to lie on the variety with every component of degree
/// `< r` are returned; everything else is listed as rejected. Duplicate
/// curves are reported once.
pub fn enumerate_points(
    f_list: &[MPoly],
    n: usize,
    r: usize,
    source: &CandidateSource,
    m: usize,
) -> Result<Enumeration, AnsatzError> {
    let outcomes: Vec<Outcome> = match source {
        CandidateSource::FiberPoints(points) => {
            if points.is_empty() {
                return Err(AnsatzError::EmptyInput);
            }
            points
                .par_iter()
                .map(|pt| lift_candidate(f_list, n, r, pt, m))
                .collect::<Result<_, _>>()?
        }
        CandidateSource::Grid(grid) => {
            if grid.points.is_empty() {
                return Err(AnsatzError::EmptyInput);
            }
            let plan = GraphPlan::new(f_list, n, &grid.free)?;
            grid.points
                .par_iter()
                .map(|pt| plan.solve(f_list, n, r, pt, m))
                .collect::<Result<_, _>>()?
        }
    };
    let mut out = Enumeration::default();
    for (candidate, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Found(curve, status) => {
                if out.found.iter().any(|e| e.curve == curve) {
                    out.rejected.push(RejectedCandidate {
                        candidate,
                        reason: "duplicate curve".into(),
                    });
                } else {
                    out.found.push(EnumeratedCurve {
                        candidate,
                        curve,
                        status,
                    });
                }
            }
            Outcome::Rejected(reason) => out.rejected.push(RejectedCandidate { candidate, reason }),
        }
    }
    Ok(out)
}

fn lift_candidate(
    f_list: &[MPoly],
    n: usize,
    r: usize,
    pt: &[Rat],
    m: usize,
) -> Result<Outcome, AnsatzError> {
    if pt.len() != n {
        return Err(AnsatzError::BadCandidate(format!(
            "fiber point has {} coordinates, expected {n}",
            pt.len()
        )));
    }
    match hensel_lift(f_list, pt, m) {
        Ok(res) => match res.status {
            LiftStatus::PolynomialWitnessed { r: rr } if rr <= r => {
                let curve = PolyCurve::new(res.poly_curve().components().to_vec(), r)?;
                Ok(Outcome::Found(curve, res.status))
            }
            LiftStatus::PolynomialWitnessed { r: rr } => {
                Ok(Outcome::Rejected(format!("polynomial lift needs r = {rr}")))
            }
            other => Ok(Outcome::Rejected(format!("{other:?}"))),
        },
        Err(AnsatzError::Singular) => Ok(Outcome::Rejected("Singular".into())),
        Err(e) => Err(e),
    }
}

/// Assignment of each dependent coordinate to an equation of the form
/// `c * y - g(free, t)` with `c` a nonzero rational.
struct GraphPlan {
    free: Vec<usize>,
    dependents: Vec<(usize, usize, Rat)>,
}

impl GraphPlan {
    fn new(f_list: &[MPoly], n: usize, free: &[usize]) -> Result<Self, AnsatzError> {
        if free.iter().any(|&v| v >= n) {
            return Err(AnsatzError::NotGraphForm(
                "free coordinate out of range".into(),
            ));
        }
        let deps: Vec<usize> = (0..n).filter(|v| !free.contains(v)).collect();
        let mut used = vec![false; f_list.len()];
        let mut dependents = Vec::new();
        for &y in &deps {
            let found = f_list.iter().enumerate().find_map(|(i, f)| {
                if used[i] || f.degree_in(y) != 1 {
                    return None;
                }
                let others_free = deps.iter().all(|&d| d == y || !f.involves(d));
                let cs = f.coeffs_in(y);
                let lead = &cs[1];
                (others_free && lead.is_constant()).then(|| (i, lead.constant_term()))
            });
            match found {
                Some((i, c)) => {
                    used[i] = true;
                    dependents.push((y, i, c));
                }
                None => {
                    return Err(AnsatzError::NotGraphForm(format!(
                        "no equation solves coordinate {y} with a constant coefficient"
                    )))
                }
            }
        }
        Ok(GraphPlan {
            free: free.to_vec(),
            dependents,
        })
    }

    fn solve(
        &self,
        f_list: &[MPoly],
        n: usize,
        r: usize,
        pt: &[Rat],
        m: usize,
    ) -> Result<Outcome, AnsatzError> {
        if pt.len() != self.free.len() * r {
            return Err(AnsatzError::BadCandidate(format!(
                "grid point has {} values, expected {}",
                pt.len(),
                self.free.len() * r
            )));
        }
        let mut values: Vec<TPoly> = vec![TPoly::zero(); n];
        for (k, &v) in self.free.iter().enumerate() {
            values[v] = TPoly::new(pt[k * r..(k + 1) * r].to_vec());
        }
        values.push(TPoly::t());
        for &(y, i, ref c) in &self.dependents {
            // c*y + rest = 0 with rest free of dependents.
            let rest = f_list[i].sub(&MPoly::var(y).scale(c));
            let val = rest.eval(&values)?;
            values[y] = val.scale(&-c.recip().expect("nonzero"));
        }
        values.pop();
        if let Some((j, d)) = values
            .iter()
            .enumerate()
            .find_map(|(j, p)| p.degree().filter(|&d| d >= r).map(|d| (j, d)))
        {
            return Ok(Outcome::Rejected(format!(
                "coordinate {j} has degree {d} >= r"
            )));
        }
        let curve = PolyCurve::new(values, r)?;
        for (i, f) in f_list.iter().enumerate() {
            if !eval_at_curve(f, &curve, m)?.ord().is_at_least(m as i64) {
                return Ok(Outcome::Rejected(format!("equation {i} does not vanish")));
            }
        }
        let status = LiftStatus::PolynomialWitnessed {
            r: PolyCurve::tight(curve.components().to_vec()).r(),
        };
        Ok(Outcome::Found(curve, status))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::q;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    // x = 0, y = 1, t = 2
    fn parabola() -> MPoly {
        MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -1)])
    }

    #[test]
    fn extraction_parabola_r2() {
        let sys = extract_coefficient_system(&[parabola()], &names(&["x", "y"]), 2).unwrap();
        assert_eq!(sys.unknowns, names(&["x_0", "x_1", "y_0", "y_1"]));
        // Unknown indices: a0 = 0, a1 = 1, b0 = 2, b1 = 3.
        let want = vec![
            MPoly::from_int_terms(&[(&[0, 0, 1], 1), (&[2], -1)]),
            MPoly::from_int_terms(&[(&[0, 0, 0, 1], 1), (&[1, 1], -2)]),
            MPoly::from_int_terms(&[(&[0, 2], -1)]),
        ];
        let got: Vec<MPoly> = sys.equations.iter().map(|e| e.poly.clone()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn extraction_linear_and_t() {
        let sys = extract_coefficient_system(&[MPoly::var(0)], &names(&["x"]), 1).unwrap();
        assert_eq!(sys.equations.len(), 1);
        assert_eq!(sys.equations[0].poly, MPoly::var(0));

        // t*x - y with r = 2: -b0, a0 - b1, a1
        let f = MPoly::from_int_terms(&[(&[1, 0, 1], 1), (&[0, 1], -1)]);
        let sys = extract_coefficient_system(&[f], &names(&["x", "y"]), 2).unwrap();
        let got: Vec<MPoly> = sys.equations.iter().map(|e| e.poly.clone()).collect();
        assert_eq!(
            got,
            vec![
                MPoly::from_int_terms(&[(&[0, 0, 1], -1)]),
                MPoly::from_int_terms(&[(&[1], 1), (&[0, 0, 0, 1], -1)]),
                MPoly::var(1),
            ]
        );
    }

    #[test]
    fn dimension_of_univariate_systems() {
        let sys = extract_coefficient_system(&[MPoly::var(0)], &names(&["x"]), 1).unwrap();
        assert_eq!(
            sys.dimension(),
            SystemDimension::ZeroDimensional { points: 1 }
        );
        let sys = extract_coefficient_system(&[parabola()], &names(&["x", "y"]), 2).unwrap();
        assert_eq!(sys.dimension(), SystemDimension::Undetermined);
    }

    #[test]
    fn lift_polynomial_branch() {
        // y^2 - (1 + t)^2 with y = 0, t = 1
        let f = MPoly::from_int_terms(&[(&[2], 1), (&[], -1), (&[0, 1], -2), (&[0, 2], -1)]);
        let res = hensel_lift(&[f], &[q(1, 1)], 6).unwrap();
        assert_eq!(res.status, LiftStatus::PolynomialWitnessed { r: 2 });
        assert_eq!(res.curve[0].to_tpoly(), TPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn lift_square_root_series() {
        let f = MPoly::from_int_terms(&[(&[2], 1), (&[], -1), (&[0, 1], -1)]);
        let res = hensel_lift(&[f], &[q(1, 1)], 4).unwrap();
        assert_eq!(res.status, LiftStatus::NonPolynomialToOrder { m: 4 });
        assert_eq!(
            res.curve[0].coeffs(),
            &[q(1, 1), q(1, 2), q(-1, 8), q(1, 16)]
        );
    }

    #[test]
    fn lift_errors() {
        let f = MPoly::from_int_terms(&[(&[2], 1)]);
        assert_eq!(
            hensel_lift(std::slice::from_ref(&f), &[q(0, 1)], 4),
            Err(AnsatzError::Singular)
        );
        assert_eq!(
            hensel_lift(&[f], &[q(1, 1)], 4),
            Err(AnsatzError::NotOnFiber(0))
        );
    }

    #[test]
    fn grid_enumeration_on_twisted_parabola() {
        // y - x^2 - t x
        let f = MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -1), (&[1, 0, 1], -1)]);
        let axes = vec![vec![
            vec![q(0, 1), q(1, 1), q(2, 1)],
            vec![q(0, 1), q(-1, 1)],
        ]];
        let grid = CandidateGrid::product(vec![0], &axes);
        let res = enumerate_points(&[f], 2, 2, &CandidateSource::Grid(grid), 10).unwrap();
        assert_eq!(res.found.len(), 6);
        let want = PolyCurve::from_ints(&[&[1, -1], &[1, -1]], 2).unwrap();
        assert!(res.found.iter().any(|e| e.curve == want));
    }

    #[test]
    fn grid_diagonal() {
        let f = MPoly::from_int_terms(&[(&[0, 1], 1), (&[1], -1)]);
        let grid = CandidateGrid {
            free: vec![0],
            points: vec![vec![q(3, 1)]],
        };
        let res = enumerate_points(&[f], 2, 1, &CandidateSource::Grid(grid), 4).unwrap();
        assert_eq!(
            res.curves(),
            vec![PolyCurve::from_ints(&[&[3], &[3]], 1).unwrap()]
        );
    }

    #[test]
    fn empty_candidates_rejected() {
        let f = MPoly::var(0);
        let err = enumerate_points(&[f], 1, 1, &CandidateSource::FiberPoints(vec![]), 4);
        assert_eq!(err, Err(AnsatzError::EmptyInput));
    }
}
