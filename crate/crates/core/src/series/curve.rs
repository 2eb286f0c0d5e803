use serde::{Deserialize, Serialize};

use super::{MPoly, Rat, SeriesError, TPoly, TSeries};

/// An `n`-tuple of polynomials in `t`, each of degree `< r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct PolyCurve {
    components: Vec<TPoly>,
    r: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    r: usize,
    components: Vec<TPoly>,
}

impl TryFrom<RawCurve> for PolyCurve {
    type Error = SeriesError;
    fn try_from(raw: RawCurve) -> Result<Self, SeriesError> {
        PolyCurve::new(raw.components, raw.r)
    }
}

impl From<PolyCurve> for RawCurve {
    fn from(c: PolyCurve) -> Self {
        RawCurve {
            r: c.r,
            components: c.components,
        }
    }
}

impl PolyCurve {
    pub fn new(components: Vec<TPoly>, r: usize) -> Result<Self, SeriesError> {
        for (i, c) in components.iter().enumerate() {
            if c.degree().is_some_and(|d| d >= r) {
                return Err(SeriesError::DegreeBound {
                    component: i,
                    degree: c.degree().unwrap_or(0),
                    r,
                });
            }
        }
        Ok(PolyCurve { components, r })
    }

    /// Uses the smallest `r` that fits every component.
    pub fn tight(components: Vec<TPoly>) -> Self {
        let r = components
            .iter()
            .filter_map(TPoly::degree)
            .max()
            .map_or(1, |d| d + 1);
        PolyCurve { components, r }
    }

    /// Builds from integer coefficient lists (coefficient `k` of `t^k`).
    pub fn from_ints(components: &[&[i64]], r: usize) -> Result<Self, SeriesError> {
        PolyCurve::new(components.iter().map(|c| TPoly::from_ints(c)).collect(), r)
    }

    pub fn components(&self) -> &[TPoly] {
        &self.components
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    /// The flat coefficient tuple `(a_{j,l})`, `j`-major.
    pub fn coefficient_tuple(&self) -> Vec<Rat> {
        self.components
            .iter()
            .flat_map(|c| (0..self.r).map(move |l| c.coeff(l)))
            .collect()
    }

    pub fn from_coefficient_tuple(tuple: &[Rat], n: usize, r: usize) -> Self {
        let components = (0..n)
            .map(|j| TPoly::new(tuple[j * r..(j + 1) * r].to_vec()))
            .collect();
        PolyCurve { components, r }
    }

    /// Value of each component at `t = 0`.
    pub fn base_point(&self) -> Vec<Rat> {
        self.components.iter().map(|c| c.coeff(0)).collect()
    }
}

/// Upper bound on `deg_t F(p(t), t)` for curves with components of degree
/// at most `r - 1`: the maximum over terms of `|a| (r - 1) + b` for a term
/// `x^a t^b`.
pub fn substitution_degree_bound(f: &MPoly, n: usize, r: usize) -> Option<usize> {
    let rr = r.saturating_sub(1) as u32;
    f.terms()
        .map(|(m, _)| {
            let xdeg: u32 = (0..n).map(|i| m.exp(i)).sum();
            (xdeg * rr + m.exp(n)) as usize
        })
        .max()
}

/// `F(p_1(t), ..., p_n(t), t)` truncated at `t^m`.
///
/// Variables `0..n` of `F` are the ambient coordinates and variable `n` is
/// `t`. The result is flagged exact when the substitution degree bound is
/// below `m`.
pub fn eval_at_curve(f: &MPoly, p: &PolyCurve, m: usize) -> Result<TSeries, SeriesError> {
    let n = p.n();
    if f.arity() > n + 1 {
        return Err(SeriesError::ArityMismatch {
            expected: n + 1,
            found: f.arity(),
        });
    }
    let bound = substitution_degree_bound(f, n, p.r()).unwrap_or(0);
    if bound < m {
        return Ok(TSeries::exact(&eval_exact(f, p)?));
    }
    let values: Vec<TruncPoly> = p
        .components()
        .iter()
        .map(|c| TruncPoly::new(c.truncate(m), m))
        .chain(std::iter::once(TruncPoly::new(TPoly::t().truncate(m), m)))
        .collect();
    let v = f.eval(&values)?;
    Ok(TSeries::from_poly_mod(&v.poly, m as i64))
}

/// Exact polynomial `F(p(t), t)`.
pub fn eval_exact(f: &MPoly, p: &PolyCurve) -> Result<TPoly, SeriesError> {
    let n = p.n();
    if f.arity() > n + 1 {
        return Err(SeriesError::ArityMismatch {
            expected: n + 1,
            found: f.arity(),
        });
    }
    let mut values: Vec<TPoly> = p.components().to_vec();
    values.push(TPoly::t());
    f.eval(&values)
}

/// Polynomial arithmetic modulo a fixed `t^m`, used for truncated
/// substitution.
#[derive(Clone, Debug, PartialEq)]
struct TruncPoly {
    poly: TPoly,
    m: usize,
}

impl TruncPoly {
    fn new(poly: TPoly, m: usize) -> Self {
        TruncPoly { poly, m }
    }
}

impl super::ring::Ring for TruncPoly {
    fn zero() -> Self {
        TruncPoly::new(TPoly::zero(), usize::MAX)
    }
    fn one() -> Self {
        TruncPoly::new(TPoly::constant(Rat::one()), usize::MAX)
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    fn from_rat(c: &Rat) -> Self {
        TruncPoly::new(TPoly::constant(c.clone()), usize::MAX)
    }
    fn add_ref(&self, o: &Self) -> Self {
        let m = self.m.min(o.m);
        TruncPoly::new(self.poly.add(&o.poly).truncate(m), m)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        let m = self.m.min(o.m);
        TruncPoly::new(self.poly.sub(&o.poly).truncate(m), m)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let m = self.m.min(o.m);
        TruncPoly::new(self.poly.mul_trunc(&o.poly, m), m)
    }
    fn neg_ref(&self) -> Self {
        TruncPoly::new(self.poly.neg(), self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Valuation;

    // Variables: x = 0, y = 1, t = 2.
    fn y_minus_x2() -> MPoly {
        MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -1)])
    }

    #[test]
    fn curve_on_parabola() {
        let p = PolyCurve::from_ints(&[&[0, 1], &[0, 0, 1]], 3).unwrap();
        let v = eval_at_curve(&y_minus_x2(), &p, 6).unwrap();
        assert!(v.is_exact());
        assert_eq!(v.ord(), Valuation::Infinite);
    }

    #[test]
    fn curve_off_parabola() {
        let p = PolyCurve::from_ints(&[&[0, 1], &[0, 1]], 2).unwrap();
        let v = eval_at_curve(&y_minus_x2(), &p, 6).unwrap();
        assert!(v.is_exact());
        assert_eq!(v, TSeries::exact(&TPoly::from_ints(&[0, 1, -1])));
    }

    #[test]
    fn t_as_variable() {
        // t*x - y on (1, t)
        let f = MPoly::from_int_terms(&[(&[1, 0, 1], 1), (&[0, 1], -1)]);
        let p = PolyCurve::from_ints(&[&[1], &[0, 1]], 2).unwrap();
        assert_eq!(eval_at_curve(&f, &p, 4).unwrap().ord(), Valuation::Infinite);
    }

    #[test]
    fn truncated_when_degree_too_high() {
        let f = MPoly::var(0).pow(5);
        let p = PolyCurve::from_ints(&[&[1, 1]], 2).unwrap();
        let v = eval_at_curve(&f, &p, 3).unwrap();
        assert_eq!(v.trunc(), Some(3));
        assert_eq!(v.to_tpoly(), TPoly::from_ints(&[1, 5, 10]));
    }

    #[test]
    fn arity_checked() {
        let f = MPoly::var(3);
        let p = PolyCurve::from_ints(&[&[1]], 1).unwrap();
        assert!(matches!(
            eval_at_curve(&f, &p, 3),
            Err(SeriesError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn degree_bound_enforced() {
        assert!(PolyCurve::from_ints(&[&[0, 0, 1]], 2).is_err());
    }
}
