//! The series `f = sum_i t^i P_{N_i}` with `P_k = x^k (x-1)...(x-k)`,
//! whose graph has at least `N_i` polynomial points of degree `< i`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{MPoly, Monomial, Rat, TPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrowthError {
    #[error("N must be a strictly increasing list of positive integers")]
    NotIncreasing,
    #[error("depth {depth} exceeds the {len} given values of N")]
    DepthTooLarge { depth: usize, len: usize },
    #[error("truncation {m} must exceed depth {depth}")]
    TruncationTooLow { m: usize, depth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSpec {
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    pub depth: usize,
    /// t-truncation; defaults to `depth + 1`.
    #[serde(default)]
    pub m: Option<usize>,
}

impl GrowthSpec {
    pub fn new(n: Vec<u64>, depth: usize) -> Result<Self, GrowthError> {
        let spec = GrowthSpec { n, depth, m: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn truncation(&self) -> usize {
        self.m.unwrap_or(self.depth + 1)
    }

    pub fn validate(&self) -> Result<(), GrowthError> {
        if !is_strictly_increasing(&self.n) {
            return Err(GrowthError::NotIncreasing);
        }
        if self.depth > self.n.len() {
            return Err(GrowthError::DepthTooLarge {
                depth: self.depth,
                len: self.n.len(),
            });
        }
        if self.truncation() <= self.depth {
            return Err(GrowthError::TruncationTooLow {
                m: self.truncation(),
                depth: self.depth,
            });
        }
        Ok(())
    }
}

pub fn is_strictly_increasing(n: &[u64]) -> bool {
    n.first().is_some_and(|&a| a > 0) && n.windows(2).all(|w| w[0] < w[1])
}

/// `f = sum_{i=1}^{depth} t^i P_{N_i}`, held by its exponents `N_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthSeries {
    pub terms: Vec<u64>,
}

pub fn build_growth_series(spec: &GrowthSpec) -> GrowthSeries {
    GrowthSeries {
        terms: spec.n[..spec.depth.min(spec.n.len())].to_vec(),
    }
}

/// `P_k(j) = j^k (j-1)(j-2)...(j-k)` for integer `j`.
pub fn p_at(k: u64, j: i64) -> BigInt {
    let fall = (1..=k as i64).fold(BigInt::one(), |acc, l| acc * BigInt::from(j - l));
    if fall.is_zero() {
        return fall;
    }
    BigInt::from(j).pow(k as u32) * fall
}

/// `P_k` as a polynomial in `x` (variable 0).
pub fn p_poly(k: u64) -> MPoly {
    (1..=k as i64).fold(MPoly::var(0).pow(k as u32), |acc, l| {
        acc.mul(&MPoly::var(0).sub(&MPoly::constant(Rat::from(l))))
    })
}

impl GrowthSeries {
    /// Bivariate polynomial in `x` (index 0) and `t` (index 1).
    pub fn to_mpoly(&self) -> MPoly {
        self.terms
            .iter()
            .enumerate()
            .fold(MPoly::zero(), |acc, (i, &k)| {
                acc.add(&p_poly(k).mul_term(&Monomial::var(1, i as u32 + 1), &Rat::one()))
            })
    }

    /// `f(j)` as a polynomial in `t`, from the product form of each `P_k`.
    pub fn eval_at(&self, j: i64) -> TPoly {
        let mut coeffs = vec![Rat::zero()];
        for &k in &self.terms {
            coeffs.push(Rat::from(p_at(k, j)));
        }
        TPoly::new(coeffs)
    }

    /// `deg_t f(j)` for `j = 1..=jmax` (`None` when `f(j) = 0`). Each
    /// coefficient is computed exactly, updating the falling factorial
    /// from `j` to `j + 1` by `j / (j - k)`.
    pub fn degrees_up_to(&self, jmax: u64) -> Vec<Option<usize>> {
        let nonzero: Vec<Vec<bool>> = self
            .terms
            .par_iter()
            .map(|&k| {
                let mut out = Vec::with_capacity(jmax as usize);
                let mut fall: Option<BigInt> = None;
                for j in 1..=jmax {
                    if j <= k {
                        out.push(false);
                        continue;
                    }
                    let f = match fall.take() {
                        None => (1..=k).fold(BigInt::one(), |a, l| a * BigInt::from(l)),
                        Some(prev) => prev * BigInt::from(j - 1) / BigInt::from(j - 1 - k),
                    };
                    let value = BigInt::from(j).pow(k as u32) * &f;
                    out.push(!value.is_zero());
                    fall = Some(f);
                }
                out
            })
            .collect();
        (0..jmax as usize)
            .map(|jj| {
                (0..self.terms.len())
                    .rev()
                    .find(|&i| nonzero[i][jj])
                    .map(|i| i + 1)
            })
            .collect()
    }
}

/// Horner evaluation of the expanded polynomial; a cross-check of
/// [`GrowthSeries::eval_at`].
pub fn eval_expanded(f: &MPoly, j: i64) -> TPoly {
    let mut per_t: Vec<Rat> = Vec::new();
    for (t_exp, xpoly) in f
        .collect_univariate(0)
        .into_iter()
        .map(|(m, p)| (m.exp(1) as usize, p))
    {
        let x = Rat::from(j);
        let v = xpoly
            .coeffs()
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| &(&acc * &x) + c);
        if per_t.len() <= t_exp {
            per_t.resize(t_exp + 1, Rat::zero());
        }
        per_t[t_exp] = &per_t[t_exp] + &v;
    }
    TPoly::new(per_t)
}

/// Exponents of `x` with a nonzero coefficient.
pub fn support_x(f: &MPoly) -> Vec<u32> {
    let mut s: Vec<u32> = f.terms().map(|(m, _)| m.exp(0)).collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Every exponent lies in some `[N_i, 2 N_i]`.
pub fn support_within_intervals(f: &MPoly, n: &[u64]) -> bool {
    support_x(f)
        .iter()
        .all(|&e| n.iter().any(|&k| k <= e as u64 && e as u64 <= 2 * k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub i: usize,
    pub j: u64,
    /// `deg_t f(j)`, with `-1` for `f(j) = 0`.
    pub deg: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub i: usize,
    pub n_i: u64,
    pub witnesses: u64,
    /// `#X(i) >= N_i` certified by the witnesses.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub monotone: bool,
    pub levels: Vec<LevelSummary>,
    pub rows: Vec<WitnessRow>,
    pub passed: bool,
}

/// For each `i <= imax` and `j = 1..=N_i`, checks `deg_t f(j) < i`.
pub fn verify_growth(f: &GrowthSeries, n: &[u64], imax: usize) -> GrowthReport {
    let monotone = is_strictly_increasing(n);
    let imax = imax.min(n.len());
    let jmax = n[..imax].iter().copied().max().unwrap_or(0);
    let degrees = f.degrees_up_to(jmax);
    let mut rows = Vec::new();
    let mut levels = Vec::new();
    for i in 1..=imax {
        let n_i = n[i - 1];
        let mut witnesses = 0;
        for j in 1..=n_i {
            let deg = degrees[j as usize - 1].map_or(-1, |d| d as i64);
            let pass = deg < i as i64;
            witnesses += u64::from(pass);
            rows.push(WitnessRow { i, j, deg, pass });
        }
        levels.push(LevelSummary {
            i,
            n_i,
            witnesses,
            certified: witnesses >= n_i,
        });
    }
    let passed = monotone && imax > 0 && levels.iter().all(|l| l.certified);
    GrowthReport {
        monotone,
        levels,
        rows,
        passed,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapEntry {
    pub d: u64,
    /// Least 1-based index from which `N_i > 2 d N_{i-1}` holds through the
    /// end of the list.
    pub i0: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCertificate {
    pub entries: Vec<GapEntry>,
    pub passed: bool,
}

pub fn check_support_gaps(n: &[u64], d_max: u64) -> GapCertificate {
    let entries: Vec<GapEntry> = (1..=d_max)
        .map(|d| {
            let holds = |i: usize| n[i - 1] as u128 > 2 * d as u128 * n[i - 2] as u128;
            let mut i0 = n.len();
            while i0 >= 2 && holds(i0) {
                i0 -= 1;
            }
            // i0 is now the last failing index (or 1, which has no predecessor).
            let first_ok = if i0 <= 1 { 1 } else { i0 + 1 };
            GapEntry {
                d,
                i0: (first_ok <= n.len()).then_some(first_ok),
            }
        })
        .collect();
    let passed = !n.is_empty() && entries.iter().all(|e| e.i0.is_some());
    GapCertificate { entries, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::q;

    fn small() -> GrowthSeries {
        build_growth_series(&GrowthSpec::new(vec![1, 2, 4], 3).unwrap())
    }

    #[test]
    fn witness_values() {
        let f = small();
        assert!(f.eval_at(1).is_zero());
        assert_eq!(f.eval_at(2), TPoly::from_ints(&[0, 2]));
        assert_eq!(f.eval_at(3), TPoly::from_ints(&[0, 6, 18]));
        assert_eq!(f.eval_at(4), TPoly::from_ints(&[0, 12, 96]));
    }

    #[test]
    fn expanded_form_agrees() {
        let f = small();
        let m = f.to_mpoly();
        for j in -3..10 {
            assert_eq!(eval_expanded(&m, j), f.eval_at(j), "j = {j}");
        }
        let single = build_growth_series(&GrowthSpec::new(vec![1], 1).unwrap()).to_mpoly();
        assert_eq!(
            single,
            MPoly::from_int_terms(&[(&[2, 1], 1), (&[1, 1], -1)])
        );
        assert_eq!(m.coeff(&Monomial::new(&[8, 3])), q(1, 1));
    }

    #[test]
    fn support_in_intervals() {
        let m = small().to_mpoly();
        assert_eq!(support_x(&m), vec![1, 2, 3, 4, 5, 6, 7, 8]);
        assert!(support_within_intervals(&m, &[1, 2, 4]));
        assert!(!support_within_intervals(&m, &[1, 2, 6]));
    }

    #[test]
    fn table_for_small_family() {
        let rep = verify_growth(&small(), &[1, 2, 4], 3);
        assert_eq!(rep.rows.len(), 7);
        assert!(rep.passed);
        let degs: Vec<i64> = rep.rows.iter().map(|r| r.deg).collect();
        assert_eq!(degs, vec![-1, -1, 1, -1, 1, 2, 2]);
    }

    #[test]
    fn incremental_degrees_match_direct() {
        let f = GrowthSeries {
            terms: vec![2, 5, 9],
        };
        let degs = f.degrees_up_to(14);
        for j in 1..=14 {
            assert_eq!(
                degs[j as usize - 1],
                f.eval_at(j).degree().filter(|&d| d > 0),
                "j = {j}"
            );
        }
    }

    #[test]
    fn broken_sequence_flagged() {
        let f = GrowthSeries {
            terms: vec![1, 4, 2],
        };
        let rep = verify_growth(&f, &[1, 4, 2], 3);
        assert!(!rep.monotone && !rep.passed);
        assert_eq!(
            GrowthSpec::new(vec![1, 4, 2], 3),
            Err(GrowthError::NotIncreasing)
        );
    }

    #[test]
    fn gaps() {
        let n: Vec<u64> = (1..=5).map(|i| 7u64.pow(i)).collect();
        let c = check_support_gaps(&n, 3);
        assert!(c.passed);
        assert!(c.entries.iter().all(|e| e.i0 == Some(1)));

        let linear: Vec<u64> = (1..=6).collect();
        let c = check_support_gaps(&linear, 3);
        assert!(c.entries.iter().all(|e| e.i0.is_none()));

        let c = check_support_gaps(&[1, 2], 1);
        assert_eq!(c.entries[0].i0, None);
    }
}
