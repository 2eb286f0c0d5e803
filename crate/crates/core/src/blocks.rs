//! Covering the enumerated curves of a variety by blocks: cut by an
//! interpolating hypersurface, split the cut into components, recurse on
//! each component until it is the variety itself or a point.
//!
//! The automatic path handles ambient dimension `n <= 2`. Variables are
//! `x` (0), `y` (1) and `t` (index `n`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interp::{g_degree, select_degree, select_hypersurface, InterpError};
use crate::series::{
    eval_exact, mpoly_gcd, ExactDiv, MPoly, Monomial, PolyCurve, Rat, SeriesError, TPoly,
};
use crate::weier::remove_t_content;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("no curves to cut")]
    EmptyInput,
    #[error("no coordinate projection is dominant on the component")]
    DominanceNotCertified,
    #[error("automatic decomposition supports n <= 2, got {0}")]
    UnsupportedArity(usize),
    #[error("the selected hypersurface contains the whole component")]
    ContainsComponent,
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible,
    PossiblyReducible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub poly: MPoly,
    pub flag: Irreducibility,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRecord {
    /// Dimension of the variety being cut.
    pub k: usize,
    /// Coordinates used as interpolation variables.
    pub g: Vec<usize>,
    pub d: usize,
    /// Degree at which the counting argument forces a cut.
    pub forced_degree: u64,
    pub hypersurface: MPoly,
    /// Seeded random points used to certify dominance of `g`.
    pub dominance_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub id: usize,
    /// Polynomials in `x, y, t` with coefficients in `Q[t]`.
    pub generators: Vec<MPoly>,
    pub dim: usize,
    pub degree: u32,
    pub flag: Irreducibility,
    pub absorbed: Vec<PolyCurve>,
    pub provenance: Vec<CutRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeInput {
    pub n: usize,
    pub equations: Vec<MPoly>,
    /// Whether the equations define the variety exactly. Truncated
    /// transcendental data never counts as equal to an algebraic component.
    pub algebraic: bool,
    pub curves: Vec<PolyCurve>,
    #[serde(default = "one")]
    pub nu: u64,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> u64 {
    1
}

/// `gcd(f, df/dvar)`-based square-free decomposition in `var`; returns the
/// factors of each multiplicity that involve `var`.
fn yun(f: &MPoly, var: usize) -> Vec<MPoly> {
    let df = f.derivative(var);
    let a0 = mpoly_gcd(f, &df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let mut c = df.div_exact(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative(var));
    let mut out = Vec::new();
    while b.involves(var) {
        let a = mpoly_gcd(&b, &d);
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = c.sub(&b.derivative(var));
        if a.involves(var) {
            out.push(a);
        }
    }
    out
}

/// Exact square root by leading terms, or `None`.
pub fn mpoly_sqrt(f: &MPoly) -> Option<MPoly> {
    if f.is_zero() {
        return Some(MPoly::zero());
    }
    let (lm, lc) = f.leading_term()?;
    if lm.exps().iter().any(|e| e % 2 == 1) {
        return None;
    }
    let half: Vec<u32> = lm.exps().iter().map(|e| e / 2).collect();
    let root_c = lc.sqrt_exact()?;
    let lead = (Monomial::new(&half), root_c);
    let max_deg = f.total_degree().unwrap_or(0) / 2;
    let mut s = MPoly::term(lead.0.clone(), lead.1.clone());
    let two_lead = MPoly::term(lead.0.clone(), &lead.1 * &Rat::from(2));
    loop {
        let rem = f.sub(&s.mul(&s));
        let Some((rm, rc)) = rem.leading_term() else {
            return Some(s);
        };
        let m = rm.div(&two_lead.leading_term()?.0.clone())?;
        if m.degree() > max_deg || m >= lead.0 {
            return None;
        }
        let c = rc / &two_lead.leading_term()?.1.clone();
        s = s.add(&MPoly::term(m, c));
    }
}

fn normalize(f: &MPoly, t_index: usize) -> MPoly {
    remove_t_content(f, t_index).monic()
}

/// Content-free, square-free, pairwise coprime factors of a polynomial in
/// `x, y, t`, split further by rational roots taken from `hints` and by
/// quadratics with square discriminant. Linear factors are flagged
/// irreducible; others possibly reducible.
pub fn component_split(p: &MPoly, hints: &[PolyCurve]) -> Result<Vec<Factor>, BlockError> {
    let t_index = 2;
    if p.arity() > 3 {
        return Err(BlockError::UnsupportedArity(p.arity().saturating_sub(1)));
    }
    let p = remove_t_content(p, t_index);
    if p.is_zero() || !(p.involves(0) || p.involves(1)) {
        return Ok(Vec::new());
    }
    let content_y = p.content_in(1);
    let prim = p.div_exact(&content_y).expect("content divides");
    let mut pieces: Vec<(MPoly, usize)> = Vec::new();
    if prim.involves(1) {
        pieces.extend(yun(&prim, 1).into_iter().map(|f| (f, 1)));
    }
    if content_y.involves(0) {
        pieces.extend(yun(&content_y, 0).into_iter().map(|f| (f, 0)));
    }

    let mut out = Vec::new();
    let mut stack = pieces;
    while let Some((f, var)) = stack.pop() {
        let f = normalize(&f, t_index);
        let deg = f.degree_in(var);
        if deg <= 1 {
            out.push(Factor {
                poly: f,
                flag: Irreducibility::Irreducible,
            });
            continue;
        }
        if let Some((l, q)) = split_rational_root(&f, var, hints) {
            stack.push((l, var));
            stack.push((q, var));
            continue;
        }
        if deg == 2 {
            if let Some((a, b)) = split_quadratic(&f, var) {
                stack.push((a, var));
                stack.push((b, var));
                continue;
            }
        }
        out.push(Factor {
            poly: f,
            flag: Irreducibility::PossiblyReducible,
        });
    }
    out.sort_by_key(|a| a.poly.cmp_key());
    out.dedup_by(|a, b| a.poly == b.poly);
    Ok(out)
}

trait SortKey {
    fn cmp_key(&self) -> (u32, Vec<(Vec<u32>, String)>);
}

impl SortKey for MPoly {
    fn cmp_key(&self) -> (u32, Vec<(Vec<u32>, String)>) {
        (
            self.total_degree().unwrap_or(0),
            self.terms()
                .map(|(m, c)| (m.padded(3), c.to_string()))
                .collect(),
        )
    }
}

/// For a factor in one ambient variable, tries `var - p_var(t)` from each
/// hint curve.
fn split_rational_root(f: &MPoly, var: usize, hints: &[PolyCurve]) -> Option<(MPoly, MPoly)> {
    let other = 1 - var;
    if f.involves(other) {
        return None;
    }
    for h in hints {
        let c = h.components().get(var)?;
        let lin = MPoly::var(var).sub(&MPoly::from_tpoly(c, 2));
        if let Some(q) = f.div_exact(&lin) {
            return Some((lin, q));
        }
    }
    None
}

fn split_quadratic(f: &MPoly, var: usize) -> Option<(MPoly, MPoly)> {
    let cs = f.coeffs_in(var);
    let (c, b, a) = (&cs[0], &cs[1], &cs[2]);
    let disc = b.mul(b).sub(&a.mul(c).scale(&Rat::from(4)));
    let s = mpoly_sqrt(&disc)?;
    let lead = MPoly::var(var).mul(a).scale(&Rat::from(2)).add(b);
    let f1 = lead.sub(&s);
    let f2 = lead.add(&s);
    let p1 = f1.div_exact(&f1.content_in(var))?;
    let p2 = f2.div_exact(&f2.content_in(var))?;
    Some((p1, p2))
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    crate::series::q(rng.gen_range(-40..=40), rng.gen_range(1..=40))
}

const DOMINANCE_POINTS: usize = 10;

/// First coordinate whose projection is dominant on `{q = 0}`: at seeded
/// random values of that coordinate and `t`, the fibre equation in the
/// other coordinate is non-constant.
fn dominant_coordinate(q: &MPoly, seed: u64) -> Option<usize> {
    (0..2).find(|&c| {
        let other = 1 - c;
        if !q.involves(other) {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c as u64 + 1));
        (0..DOMINANCE_POINTS).all(|_| {
            let mut vals = vec![MPoly::var(0); 3];
            vals[c] = MPoly::constant(random_rat(&mut rng));
            vals[2] = MPoly::constant(random_rat(&mut rng));
            q.eval(&vals).is_ok_and(|v| v.involves(0))
        })
    })
}

fn on_curve(f: &MPoly, p: &PolyCurve) -> bool {
    eval_exact(f, p).is_ok_and(|v| v.is_zero())
}

/// Finds the least `d` for which the curves lie on a hypersurface of
/// degree `d` in `g`, not containing `w` (given by one generator or the
/// whole space).
pub fn cut_step(
    curves: &[PolyCurve],
    w: Option<&MPoly>,
    g: &[usize],
    nu: u64,
    n: usize,
) -> Result<(MPoly, CutRecord), BlockError> {
    if curves.is_empty() {
        return Err(BlockError::EmptyInput);
    }
    let g_polys: Vec<MPoly> = g.iter().map(|&i| MPoly::var(i)).collect();
    let k = g.len();
    let r = g_degree(&g_polys, curves)? as u64;
    let forced = select_degree(n, k - 1, nu, r.max(1));
    let mut d = 1;
    let h = loop {
        match select_hypersurface(curves, &g_polys, d) {
            Ok(h) => break h,
            Err(InterpError::NoKernel) => d += 1,
            Err(e) => return Err(e.into()),
        }
    };
    // Back to ambient variables: g-coordinate i is x_{g[i]}, t is last.
    let mut map: Vec<usize> = g.to_vec();
    map.push(n);
    let p = h.poly.remap(&map);
    if let Some(wq) = w {
        if p.div_exact(wq).is_some() {
            return Err(BlockError::ContainsComponent);
        }
    }
    Ok((
        p.clone(),
        CutRecord {
            k,
            g: g.to_vec(),
            d,
            forced_degree: forced,
            hypersurface: p,
            dominance_points: if w.is_some() { DOMINANCE_POINTS } else { 0 },
        },
    ))
}

fn is_same_variety(equations: &[MPoly], q: &MPoly) -> bool {
    // Two-sided membership for principal ideals.
    !equations.is_empty()
        && equations.iter().all(|f| f.div_exact(q).is_some())
        && equations.iter().any(|f| q.div_exact(f).is_some())
}

fn ambient_degree(f: &MPoly, n: usize) -> u32 {
    let vars: Vec<usize> = (0..n).collect();
    f.degree_in_set(&vars).unwrap_or(0)
}

fn point_block(p: &PolyCurve, n: usize, provenance: Vec<CutRecord>) -> Block {
    let generators = p
        .components()
        .iter()
        .enumerate()
        .map(|(i, c)| MPoly::var(i).sub(&MPoly::from_tpoly(c, n)))
        .collect();
    Block {
        id: 0,
        generators,
        dim: 0,
        degree: 1,
        flag: Irreducibility::Irreducible,
        absorbed: vec![p.clone()],
        provenance,
    }
}

/// Decomposes the enumerated curves into blocks. Every curve ends up in a
/// block whose generators it satisfies; zero-dimensional blocks hold one
/// curve each.
pub fn decompose(input: &DecomposeInput) -> Result<Vec<Block>, BlockError> {
    let n = input.n;
    if n == 0 || n > 2 {
        return Err(BlockError::UnsupportedArity(n));
    }
    let curves = &input.curves;
    if curves.is_empty() {
        return Ok(Vec::new());
    }
    let eqs: Vec<MPoly> = input
        .equations
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| if n == 2 { normalize(f, n) } else { f.clone() })
        .collect();
    let mut blocks = if eqs.is_empty() && input.algebraic {
        vec![Block {
            id: 0,
            generators: Vec::new(),
            dim: n,
            degree: 1,
            flag: Irreducibility::Irreducible,
            absorbed: curves.clone(),
            provenance: Vec::new(),
        }]
    } else if n == 1 {
        let (_, rec) = cut_step(curves, None, &[0], input.nu, 1)?;
        curves
            .iter()
            .map(|p| point_block(p, 1, vec![rec.clone()]))
            .collect()
    } else {
        decompose_plane(input, &eqs)?
    };
    let mut seen: Vec<PolyCurve> = Vec::new();
    blocks.retain(|b| {
        if b.dim > 0 {
            return true;
        }
        let c = &b.absorbed[0];
        if seen.contains(c) {
            false
        } else {
            seen.push(c.clone());
            true
        }
    });
    for (i, b) in blocks.iter_mut().enumerate() {
        b.id = i;
    }
    Ok(blocks)
}

fn decompose_plane(input: &DecomposeInput, eqs: &[MPoly]) -> Result<Vec<Block>, BlockError> {
    let n = 2;
    let (p, rec0) = cut_step(&input.curves, None, &[0, 1], input.nu, n)?;
    let factors = component_split(&p, &input.curves)?;
    let children: Vec<Result<Vec<Block>, BlockError>> = factors
        .par_iter()
        .map(|fac| {
            let on: Vec<PolyCurve> = input
                .curves
                .iter()
                .filter(|c| on_curve(&fac.poly, c))
                .cloned()
                .collect();
            if on.is_empty() {
                return Ok(Vec::new());
            }
            if input.algebraic && is_same_variety(eqs, &fac.poly) {
                return Ok(vec![Block {
                    id: 0,
                    generators: vec![fac.poly.clone()],
                    dim: 1,
                    degree: ambient_degree(&fac.poly, n),
                    flag: fac.flag,
                    absorbed: on,
                    provenance: vec![rec0.clone()],
                }]);
            }
            let c = dominant_coordinate(&fac.poly, input.seed)
                .ok_or(BlockError::DominanceNotCertified)?;
            let (_, rec1) = cut_step(&on, Some(&fac.poly), &[c], input.nu, n)?;
            Ok(on
                .iter()
                .map(|p| point_block(p, n, vec![rec0.clone(), rec1.clone()]))
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for c in children {
        out.extend(c?);
    }
    Ok(out)
}

/// Checks covering: each curve lies in some block and satisfies its
/// generators exactly.
pub fn covers(blocks: &[Block], curves: &[PolyCurve]) -> bool {
    curves.iter().all(|c| {
        blocks
            .iter()
            .any(|b| b.absorbed.contains(c) && b.generators.iter().all(|g| on_curve(g, c)))
    })
}

/// Evaluates `g(p(t))` for each generator, as a sanity check for reports.
pub fn generator_residuals(b: &Block) -> Vec<Vec<TPoly>> {
    b.absorbed
        .iter()
        .map(|p| {
            b.generators
                .iter()
                .map(|g| eval_exact(g, p).unwrap_or_else(|_| TPoly::zero()))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::{build_growth_series, GrowthSpec};

    fn twisted_curves() -> Vec<PolyCurve> {
        let mut out = Vec::new();
        for a0 in 0..3 {
            for a1 in [0, -1] {
                let x = TPoly::from_ints(&[a0, a1]);
                let y = x.mul(&x).add(&TPoly::t().mul(&x));
                out.push(PolyCurve::new(vec![x, y], 2).unwrap());
            }
        }
        out
    }

    fn twisted() -> MPoly {
        MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -1), (&[1, 0, 1], -1)])
    }

    #[test]
    fn split_product_of_graphs() {
        // (y - x^2)(y - t x)
        let a = MPoly::from_int_terms(&[(&[0, 1], 1), (&[2], -1)]);
        let b = MPoly::from_int_terms(&[(&[0, 1], 1), (&[1, 0, 1], -1)]);
        let f = component_split(&a.mul(&b), &[]).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|x| x.flag == Irreducibility::Irreducible));
        assert!(f.iter().any(|x| x.poly == a.monic()));
        assert!(f.iter().any(|x| x.poly == b.monic()));
    }

    #[test]
    fn split_square() {
        let a = MPoly::from_int_terms(&[(&[0, 1], 1), (&[1], -1)]);
        let f = component_split(&a.mul(&a), &[]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].poly, a.monic());
    }

    #[test]
    fn non_square_discriminant_is_flagged() {
        // y^2 - t x^2
        let f = MPoly::from_int_terms(&[(&[0, 2], 1), (&[2, 0, 1], -1)]);
        let parts = component_split(&f, &[]).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].flag, Irreducibility::PossiblyReducible);
    }

    #[test]
    fn sqrt_exact_and_not() {
        let a = MPoly::from_int_terms(&[(&[1], 1), (&[0, 1], -2), (&[], 3)]);
        assert_eq!(
            mpoly_sqrt(&a.mul(&a)),
            Some(a.monic().scale(&a.leading_term().unwrap().1.clone()))
        );
        assert_eq!(
            mpoly_sqrt(&MPoly::from_int_terms(&[(&[2], 1), (&[], 1)])),
            None
        );
    }

    #[test]
    fn cut_twisted_parabola() {
        let (p, rec) = cut_step(&twisted_curves(), None, &[0, 1], 1, 2).unwrap();
        assert_eq!(rec.d, 2);
        assert_eq!(normalize(&p, 2), twisted().monic());
    }

    #[test]
    fn cut_single_curve() {
        let c = vec![PolyCurve::from_ints(&[&[0, 1], &[0, 0, 1]], 3).unwrap()];
        let (p, rec) = cut_step(&c, None, &[0, 1], 1, 2).unwrap();
        assert_eq!(rec.d, 1);
        assert!(on_curve(&p, &c[0]));
        assert_eq!(
            cut_step(&[], None, &[0, 1], 1, 2),
            Err(BlockError::EmptyInput)
        );
    }

    #[test]
    fn algebraic_example_is_one_block() {
        let input = DecomposeInput {
            n: 2,
            equations: vec![twisted()],
            algebraic: true,
            curves: twisted_curves(),
            nu: 1,
            seed: 0,
        };
        let blocks = decompose(&input).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!((blocks[0].dim, blocks[0].absorbed.len()), (1, 6));
        assert!(covers(&blocks, &input.curves));
    }

    #[test]
    fn growth_example_is_points() {
        let f = build_growth_series(&GrowthSpec::new(vec![1, 2, 4], 3).unwrap());
        let graph = MPoly::var(1).sub(&f.to_mpoly().remap(&[0, 2]));
        let curves: Vec<PolyCurve> = (1..=4)
            .map(|j| PolyCurve::new(vec![TPoly::from_ints(&[j]), f.eval_at(j)], 3).unwrap())
            .collect();
        let input = DecomposeInput {
            n: 2,
            equations: vec![graph],
            algebraic: false,
            curves: curves.clone(),
            nu: 1,
            seed: 0,
        };
        let blocks = decompose(&input).unwrap();
        assert_eq!(blocks.len(), 4);
        assert!(blocks.iter().all(|b| b.dim == 0 && b.absorbed.len() == 1));
        assert!(covers(&blocks, &curves));
    }

    #[test]
    fn empty_enumeration_gives_no_blocks() {
        let input = DecomposeInput {
            n: 2,
            equations: vec![twisted()],
            algebraic: true,
            curves: vec![],
            nu: 1,
            seed: 0,
        };
        assert!(decompose(&input).unwrap().is_empty());
    }
}
