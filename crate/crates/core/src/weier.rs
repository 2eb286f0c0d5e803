//! Coordinate splits `x = z × w` for which projecting to `(z, t)` is
//! finite, and the degree `nu` of that projection.
//!
//! Equations live in `x_0, ..., x_{n-1}, t` with `t` at index `n`. The
//! degree is read off an eliminant: the equation itself when there is one
//! `w` coordinate, or the resultant eliminating the second `w` coordinate
//! of a square system in two.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::linalg::det_bareiss;
use crate::series::{ExactDiv, MPoly, Rat, SeriesError, TPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeierError {
    #[error("eliminant has no dependence on the w coordinates; projection is not finite")]
    NotFinite,
    #[error("unsupported shape: {0}")]
    Unsupported(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// w-degree of the eliminant after removing its t-content.
    Resultant,
    UserSupplied,
    /// Product of the w-degrees of the equations; an upper bound only.
    BezoutUpperBound,
}

/// `x_target <- x_target + factor * x_source`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateChange {
    pub target: usize,
    pub source: usize,
    pub factor: i64,
}

impl CoordinateChange {
    pub fn apply(&self, f: &MPoly, nvars: usize) -> Result<MPoly, SeriesError> {
        let subs: Vec<MPoly> = (0..nvars)
            .map(|i| {
                if i == self.target {
                    MPoly::var(i).add(&MPoly::var(self.source).scale(&Rat::from(self.factor)))
                } else {
                    MPoly::var(i)
                }
            })
            .collect();
        f.eval(&subs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassSplit {
    pub z_indices: Vec<usize>,
    pub w_indices: Vec<usize>,
    pub nu: u64,
    pub certificate: Certificate,
    /// The eliminant is not square-free in `w` at random base points
    /// (non-reduced input such as `x^2`).
    pub degenerate: bool,
    /// Coordinate change applied before splitting, if any.
    pub change: Option<CoordinateChange>,
}

fn check_split(n: usize, z: &[usize]) -> Result<Vec<usize>, WeierError> {
    let mut seen = vec![false; n];
    for &i in z {
        if i >= n || seen[i] {
            return Err(WeierError::InvalidSplit(format!("bad z index {i}")));
        }
        seen[i] = true;
    }
    Ok((0..n).filter(|i| !seen[*i]).collect())
}

/// Divides out the largest factor depending on `t` alone.
pub fn remove_t_content(f: &MPoly, t_index: usize) -> MPoly {
    if f.is_zero() {
        return MPoly::zero();
    }
    let content = f
        .collect_univariate(t_index)
        .values()
        .fold(TPoly::zero(), |g, p| g.gcd(p));
    f.div_exact(&MPoly::from_tpoly(&content, t_index))
        .expect("content divides")
}

/// Resultant with respect to `var`, as the Sylvester determinant.
pub fn resultant(a: &MPoly, b: &MPoly, var: usize) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let (da, db) = (a.degree_in(var) as usize, b.degree_in(var) as usize);
    if da == 0 {
        return a.pow(db as u32);
    }
    if db == 0 {
        return b.pow(da as u32);
    }
    let ca: Vec<MPoly> = a.coeffs_in(var).into_iter().rev().collect();
    let cb: Vec<MPoly> = b.coeffs_in(var).into_iter().rev().collect();
    let size = da + db;
    let mut rows = Vec::with_capacity(size);
    for i in 0..db {
        let mut row = vec![MPoly::zero(); size];
        row[i..i + da + 1].clone_from_slice(&ca);
        rows.push(row);
    }
    for i in 0..da {
        let mut row = vec![MPoly::zero(); size];
        row[i..i + db + 1].clone_from_slice(&cb);
        rows.push(row);
    }
    det_bareiss(rows)
}

/// Eliminant in the first `w` coordinate, before content removal.
fn eliminant(f_list: &[MPoly], w: &[usize]) -> Result<MPoly, WeierError> {
    match (w.len(), f_list.len()) {
        (1, 1) => Ok(f_list[0].clone()),
        (2, 2) => Ok(resultant(&f_list[0], &f_list[1], w[1])),
        (k, e) => Err(WeierError::Unsupported(format!(
            "{e} equations with {k} w coordinates"
        ))),
    }
}

/// Product over equations of the total degree in the `w` coordinates.
pub fn bezout_bound(f_list: &[MPoly], w: &[usize]) -> u64 {
    f_list
        .iter()
        .map(|f| f.degree_in_set(w).unwrap_or(0) as u64)
        .product()
}

/// Projection degree for the split with the given `z` coordinates.
pub fn estimate_e(f_list: &[MPoly], n: usize, z: &[usize]) -> Result<WeierstrassSplit, WeierError> {
    let w = check_split(n, z)?;
    if w.is_empty() {
        return Err(WeierError::Unsupported("no w coordinates".into()));
    }
    let square = f_list.len() == w.len();
    let supported = (w.len() == 1 && f_list.len() == 1) || (w.len() == 2 && square && n <= 3);
    if !supported {
        if square {
            let nu = bezout_bound(f_list, &w);
            if nu == 0 {
                return Err(WeierError::NotFinite);
            }
            return Ok(WeierstrassSplit {
                z_indices: z.to_vec(),
                w_indices: w,
                nu,
                certificate: Certificate::BezoutUpperBound,
                degenerate: false,
                change: None,
            });
        }
        return Err(WeierError::Unsupported(format!(
            "{} equations with {} w coordinates",
            f_list.len(),
            w.len()
        )));
    }
    let e = remove_t_content(&eliminant(f_list, &w)?, n);
    if e.is_zero() {
        return Err(WeierError::NotFinite);
    }
    let nu = e.degree_in(w[0]) as u64;
    if nu == 0 {
        return Err(WeierError::NotFinite);
    }
    Ok(WeierstrassSplit {
        z_indices: z.to_vec(),
        w_indices: w.clone(),
        nu,
        certificate: Certificate::Resultant,
        degenerate: f_list.iter().any(|f| {
            w.iter()
                .any(|&wi| f.involves(wi) && is_degenerate(f, n, wi))
        }),
        change: None,
    })
}

/// A split with caller-supplied degree.
pub fn with_user_nu(n: usize, z: &[usize], nu: u64) -> Result<WeierstrassSplit, WeierError> {
    let w = check_split(n, z)?;
    if nu == 0 {
        return Err(WeierError::InvalidSplit("nu must be positive".into()));
    }
    Ok(WeierstrassSplit {
        z_indices: z.to_vec(),
        w_indices: w,
        nu,
        certificate: Certificate::UserSupplied,
        degenerate: false,
        change: None,
    })
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num: i64 = rng.gen_range(-50..=50);
    let den: i64 = rng.gen_range(1..=50);
    crate::series::q(num, den)
}

/// Not square-free in `w` at each of a few seeded random specializations of
/// the other variables. Applied to the input equations, since a resultant
/// against an equation free of the eliminated variable is a power.
fn is_degenerate(e: &MPoly, n: usize, w: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..3).all(|_| {
        let values: Vec<Rat> = (0..=n).map(|_| random_rat(&mut rng)).collect();
        let p = specialize_univariate(e, &values, w);
        p.degree().is_some_and(|d| d > 0) && !p.gcd(&p.derivative()).is_constant()
    })
}

/// Substitutes `values` for every variable except `keep`.
fn specialize_univariate(f: &MPoly, values: &[Rat], keep: usize) -> TPoly {
    let subs: Vec<MPoly> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i == keep {
                MPoly::var(0)
            } else {
                MPoly::constant(v.clone())
            }
        })
        .collect();
    f.eval(&subs)
        .expect("values cover every variable")
        .to_tpoly(0)
        .expect("univariate after specialization")
}

/// All `m`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Fixed list of integer unimodular shears tried when no coordinate split
/// works.
pub fn shear_family(n: usize) -> Vec<CoordinateChange> {
    let mut out = Vec::new();
    for factor in [1, -1, 2] {
        for target in 0..n {
            for source in 0..n {
                if source != target {
                    out.push(CoordinateChange {
                        target,
                        source,
                        factor,
                    });
                }
            }
        }
    }
    out
}

/// First split, in a fixed order, for which `estimate_e` succeeds. Plain
/// coordinate partitions are tried before shears.
pub fn find_split(f_list: &[MPoly], n: usize, m: usize) -> Result<WeierstrassSplit, WeierError> {
    if m >= n {
        return Err(WeierError::InvalidSplit(format!(
            "m = {m} must be below n = {n}"
        )));
    }
    let zs = subsets(n, m);
    let mut candidates: Vec<(Option<CoordinateChange>, Vec<usize>)> =
        zs.iter().map(|z| (None, z.clone())).collect();
    for c in shear_family(n) {
        for z in &zs {
            candidates.push((Some(c), z.clone()));
        }
    }
    let results: Vec<Result<WeierstrassSplit, WeierError>> = candidates
        .par_iter()
        .map(|(change, z)| {
            let fs: Vec<MPoly> = match change {
                None => f_list.to_vec(),
                Some(c) => f_list
                    .iter()
                    .map(|f| c.apply(f, n + 1))
                    .collect::<Result<_, _>>()?,
            };
            let mut s = estimate_e(&fs, n, z)?;
            s.change = *change;
            Ok(s)
        })
        .collect();
    let mut last = None;
    for r in results {
        match r {
            Ok(s) => return Ok(s),
            Err(e) => last = Some(e),
        }
    }
    Err(match last {
        Some(WeierError::NotFinite) | None => {
            WeierError::Unsupported("no tried split is finite".into())
        }
        Some(e) => e,
    })
}

/// Number of `w` solutions, with multiplicity, over the base point
/// `z = v * t0`, `t = t0`. The system is specialized first and then
/// eliminated, so this is independent of [`estimate_e`].
pub fn fiber_count(
    f_list: &[MPoly],
    n: usize,
    split: &WeierstrassSplit,
    v: &[Rat],
    t0: &Rat,
) -> Result<u64, WeierError> {
    if v.len() != split.z_indices.len() {
        return Err(WeierError::InvalidSplit(
            "base point has wrong length".into(),
        ));
    }
    let fs: Vec<MPoly> = match split.change {
        None => f_list.to_vec(),
        Some(c) => f_list
            .iter()
            .map(|f| c.apply(f, n + 1))
            .collect::<Result<_, _>>()?,
    };
    // Keep w coordinates as variables 0.., substitute the rest.
    let mut subs: Vec<MPoly> = vec![MPoly::zero(); n + 1];
    for (k, &zi) in split.z_indices.iter().enumerate() {
        subs[zi] = MPoly::constant(&v[k] * t0);
    }
    for (k, &wi) in split.w_indices.iter().enumerate() {
        subs[wi] = MPoly::var(k);
    }
    subs[n] = MPoly::constant(t0.clone());
    let spec: Vec<MPoly> = fs.iter().map(|f| f.eval(&subs)).collect::<Result<_, _>>()?;
    let uni = match (split.w_indices.len(), spec.len()) {
        (1, 1) => spec[0].clone(),
        (2, 2) => resultant(&spec[0], &spec[1], 1),
        (k, e) => {
            return Err(WeierError::Unsupported(format!(
                "{e} equations with {k} w coordinates"
            )))
        }
    };
    let p = uni
        .to_tpoly(0)
        .ok_or_else(|| WeierError::Unsupported("not univariate".into()))?;
    if p.is_zero() {
        return Err(WeierError::NotFinite);
    }
    let (_, parts) = p.square_free_decomposition();
    Ok(parts
        .iter()
        .enumerate()
        .map(|(i, q)| (i as u64 + 1) * q.degree().unwrap_or(0) as u64)
        .sum())
}
