//! Pfaffian and Noetherian chains: checking the defining differential
//! identities on truncated witnesses, and the complexity budgets that
//! drive degree selection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interp::select_degree;
use crate::series::{MPoly, Monomial, Rat, SeriesError, TermJson};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfaffError {
    #[error("witness truncation {0} is below 2")]
    TruncationTooLow(u32),
    #[error("chain table has wrong shape: {0}")]
    Shape(String),
    #[error("beta {beta} is below the degree {degree} of a defining polynomial")]
    BetaTooSmall { beta: u32, degree: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    Pfaffian,
    Noetherian,
}

/// `d phi_j / d x_i = P[i][j](x, phi, t)`.
///
/// `p[i][j]` is in variables `x_0..x_{n-1}, phi_0..phi_{ell-1}` and, when
/// `with_t`, `t` at index `n + ell`. Each witness `phi[j]` is in
/// `x_0..x_{n-1}` (and `t` at index `n`), known up to total x-degree
/// `< trunc`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainJson", into = "ChainJson")]
pub struct Chain {
    pub n: usize,
    pub ell: usize,
    pub alpha: u32,
    pub kind: ChainKind,
    pub p: Vec<Vec<MPoly>>,
    pub phi: Vec<MPoly>,
    pub trunc: u32,
    pub with_t: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainJson {
    n: usize,
    ell: usize,
    alpha: u32,
    kind: ChainKind,
    #[serde(rename = "P")]
    p: Vec<Vec<Vec<TermJson>>>,
    phi: Vec<Vec<TermJson>>,
    trunc: u32,
    #[serde(default)]
    with_t: bool,
}

impl TryFrom<ChainJson> for Chain {
    type Error = PfaffError;
    fn try_from(c: ChainJson) -> Result<Self, PfaffError> {
        let tv = usize::from(c.with_t);
        let p =
            c.p.iter()
                .map(|row| {
                    row.iter()
                        .map(|terms| MPoly::from_json(terms, c.n + c.ell + tv))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
        let phi = c
            .phi
            .iter()
            .map(|terms| MPoly::from_json(terms, c.n + tv))
            .collect::<Result<Vec<_>, _>>()?;
        Chain::new(c.n, c.ell, c.alpha, c.kind, p, phi, c.trunc, c.with_t)
    }
}

impl From<Chain> for ChainJson {
    fn from(c: Chain) -> Self {
        let tv = usize::from(c.with_t);
        ChainJson {
            n: c.n,
            ell: c.ell,
            alpha: c.alpha,
            kind: c.kind,
            p: c.p
                .iter()
                .map(|row| row.iter().map(|f| f.to_json(c.n + c.ell + tv)).collect())
                .collect(),
            phi: c.phi.iter().map(|f| f.to_json(c.n + tv)).collect(),
            trunc: c.trunc,
            with_t: c.with_t,
        }
    }
}

impl Chain {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        ell: usize,
        alpha: u32,
        kind: ChainKind,
        p: Vec<Vec<MPoly>>,
        phi: Vec<MPoly>,
        trunc: u32,
        with_t: bool,
    ) -> Result<Self, PfaffError> {
        if p.len() != n || p.iter().any(|row| row.len() != ell) {
            return Err(PfaffError::Shape(format!("P must be {n} x {ell}")));
        }
        if phi.len() != ell {
            return Err(PfaffError::Shape(format!(
                "expected {ell} witnesses, found {}",
                phi.len()
            )));
        }
        Ok(Chain {
            n,
            ell,
            alpha,
            kind,
            p,
            phi,
            trunc,
            with_t,
        })
    }

    /// `P[i][j]` involves only `phi_0..phi_j`.
    pub fn is_triangular(&self) -> bool {
        self.p.iter().all(|row| {
            row.iter()
                .enumerate()
                .all(|(j, f)| (j + 1..self.ell).all(|k| !f.involves(self.n + k)))
        })
    }

    pub fn max_p_degree(&self) -> u32 {
        self.p
            .iter()
            .flatten()
            .filter_map(MPoly::total_degree)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub i: usize,
    pub j: usize,
    /// x-exponents of the coefficient (t exponent last when present).
    pub exps: Vec<u32>,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl Mismatch {
    fn key(&self, n: usize) -> (u32, Vec<u32>, usize, usize) {
        (
            self.exps[..n].iter().sum(),
            self.exps.clone(),
            self.i,
            self.j,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub passed: bool,
    pub identities_hold: bool,
    pub triangular: bool,
    pub degree_within_alpha: bool,
    /// Compared coefficients have x-degree below this.
    pub checked_below: u32,
    pub first_mismatch: Option<Mismatch>,
}

fn x_degree(m: &Monomial, n: usize) -> u32 {
    (0..n).map(|i| m.exp(i)).sum()
}

fn truncate_x(f: &MPoly, n: usize, below: u32) -> MPoly {
    MPoly::from_terms(
        f.terms()
            .filter(|(m, _)| x_degree(m, n) < below)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Compares both sides of every identity coefficient by coefficient up to
/// x-degree `trunc - 1`, where both are determined by the witnesses.
pub fn verify_chain(chain: &Chain) -> Result<ChainReport, PfaffError> {
    if chain.trunc < 2 {
        return Err(PfaffError::TruncationTooLow(chain.trunc));
    }
    let n = chain.n;
    let below = chain.trunc - 1;
    let phi: Vec<MPoly> = chain
        .phi
        .iter()
        .map(|f| truncate_x(f, n, chain.trunc))
        .collect();
    let mut subs: Vec<MPoly> = (0..n).map(MPoly::var).collect();
    subs.extend(phi.iter().cloned());
    if chain.with_t {
        subs.push(MPoly::var(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..chain.ell).map(move |j| (i, j)))
        .collect();
    let firsts: Vec<Option<Mismatch>> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Option<Mismatch>, PfaffError> {
            let lhs = truncate_x(&phi[j].derivative(i), n, below);
            let rhs = truncate_x(&chain.p[i][j].eval(&subs)?, n, below);
            let diff = lhs.sub(&rhs);
            let first = diff
                .terms()
                .map(|(m, _)| Mismatch {
                    i,
                    j,
                    exps: m.padded(n + usize::from(chain.with_t)),
                    lhs: lhs.coeff(m),
                    rhs: rhs.coeff(m),
                })
                .min_by_key(|mm| mm.key(n));
            Ok(first)
        })
        .collect::<Result<_, _>>()?;
    let first_mismatch = firsts.into_iter().flatten().min_by_key(|mm| mm.key(n));
    let triangular = chain.is_triangular();
    let degree_within_alpha = chain.max_p_degree() <= chain.alpha;
    let identities_hold = first_mismatch.is_none();
    Ok(ChainReport {
        passed: identities_hold
            && degree_within_alpha
            && (chain.kind == ChainKind::Noetherian || triangular),
        identities_hold,
        triangular,
        degree_within_alpha,
        checked_below: below,
        first_mismatch,
    })
}

/// A variety cut out by polynomials in `(x, phi, t)` of degree at most
/// `beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoethVariety {
    pub chain: Chain,
    pub f_polys: Vec<MPoly>,
    pub beta: u32,
    pub t_algebraic: bool,
}

impl NoethVariety {
    pub fn new(
        chain: Chain,
        f_polys: Vec<MPoly>,
        beta: u32,
        t_algebraic: bool,
    ) -> Result<Self, PfaffError> {
        let degree = f_polys
            .iter()
            .filter_map(MPoly::total_degree)
            .max()
            .unwrap_or(0);
        if degree > beta {
            return Err(PfaffError::BetaTooSmall { beta, degree });
        }
        Ok(NoethVariety {
            chain,
            f_polys,
            beta,
            t_algebraic,
        })
    }

    pub fn multiplicity_budget(&self, noetherian_exponent: Option<u32>) -> MultiplicityBudget {
        multiplicity_budget(
            self.beta as u64,
            self.chain.n,
            self.chain.ell,
            self.chain.kind,
            self.t_algebraic,
            noetherian_exponent,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplicityBudget {
    /// `beta^(n + ell)` with the unstated constant set to 1.
    NormalizedConstant {
        value: u128,
    },
    /// `beta^exponent`, exponent chosen by configuration.
    Heuristic {
        value: u128,
        exponent: u32,
    },
    Unavailable,
}

impl MultiplicityBudget {
    pub fn value(&self) -> Option<u128> {
        match *self {
            MultiplicityBudget::NormalizedConstant { value }
            | MultiplicityBudget::Heuristic { value, .. } => Some(value),
            MultiplicityBudget::Unavailable => None,
        }
    }
}

pub fn default_noetherian_exponent(n: usize, ell: usize) -> u32 {
    (n + ell + 2) as u32
}

pub fn multiplicity_budget(
    beta: u64,
    n: usize,
    ell: usize,
    kind: ChainKind,
    t_algebraic: bool,
    noetherian_exponent: Option<u32>,
) -> MultiplicityBudget {
    match (kind, t_algebraic) {
        (ChainKind::Pfaffian, _) => MultiplicityBudget::NormalizedConstant {
            value: (beta as u128).saturating_pow((n + ell) as u32),
        },
        (ChainKind::Noetherian, true) => {
            let exponent =
                noetherian_exponent.unwrap_or_else(|| default_noetherian_exponent(n, ell));
            MultiplicityBudget::Heuristic {
                value: (beta as u128).saturating_pow(exponent),
                exponent,
            }
        }
        (ChainKind::Noetherian, false) => MultiplicityBudget::Unavailable,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDegree {
    /// Dimension of the current variety is `k`; hypersurfaces have `m = k - 1`.
    pub k: usize,
    pub nu: u128,
    pub d: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WilkieBudget {
    pub block_count_bound: u128,
    pub block_degree_bound: u128,
    pub per_level_degrees: Vec<LevelDegree>,
    pub normalized_constant: bool,
    /// Some value hit the integer ceiling; the bounds are then lower
    /// bounds on the true figures.
    pub saturated: bool,
}

/// Budgets for a Pfaffian variety with defining degree `beta`.
pub fn wilkie_budget(beta: u64, r: u64, n: usize, ell: usize) -> WilkieBudget {
    let top = multiplicity_budget(beta, n, ell, ChainKind::Pfaffian, true, None)
        .value()
        .expect("Pfaffian budget is always available");
    wilkie_budget_with_nu(top, r, n)
}

/// Level `k` (from `n` down to 1) uses `nu = top^(n + 1 - k)` and the
/// degree `d_k = select_degree(n, k - 1, nu, r)`. Block count and degree
/// are bounded by the product of the `d_k`.
pub fn wilkie_budget_with_nu(top: u128, r: u64, n: usize) -> WilkieBudget {
    let mut per_level_degrees = Vec::new();
    let mut product: u128 = 1;
    for k in (1..=n).rev() {
        let nu = top.saturating_pow((n + 1 - k) as u32);
        let d = select_degree(n, k - 1, nu.min(u64::MAX as u128) as u64, r);
        product = product.saturating_mul(d as u128);
        per_level_degrees.push(LevelDegree { k, nu, d });
    }
    let saturated = product == u128::MAX
        || per_level_degrees
            .iter()
            .any(|l| l.d == u64::MAX || l.nu >= u64::MAX as u128);
    WilkieBudget {
        block_count_bound: product,
        block_degree_bound: product,
        per_level_degrees,
        normalized_constant: true,
        saturated,
    }
}

/// Bundled chains and mutations with known outcomes.
pub mod library {
    use super::*;
    use crate::series::q;

    fn factorial(k: u32) -> Rat {
        (1..=k as i64).fold(Rat::one(), |acc, i| &acc * &Rat::from(i))
    }

    fn series_1d(coeff: impl Fn(u32) -> Rat, trunc: u32) -> MPoly {
        MPoly::from_terms((0..trunc).map(|k| (Monomial::var(0, k), coeff(k))))
    }

    pub fn exp_chain(trunc: u32) -> Chain {
        let phi = series_1d(|k| factorial(k).recip().expect("nonzero"), trunc);
        Chain::new(
            1,
            1,
            1,
            ChainKind::Pfaffian,
            vec![vec![MPoly::var(1)]],
            vec![phi],
            trunc,
            false,
        )
        .expect("well-formed")
    }

    pub fn sin_cos_chain(trunc: u32) -> Chain {
        let sin = series_1d(
            |k| match k % 4 {
                1 => factorial(k).recip().expect("nonzero"),
                3 => -factorial(k).recip().expect("nonzero"),
                _ => Rat::zero(),
            },
            trunc,
        );
        let cos = series_1d(
            |k| match k % 4 {
                0 => factorial(k).recip().expect("nonzero"),
                2 => -factorial(k).recip().expect("nonzero"),
                _ => Rat::zero(),
            },
            trunc,
        );
        let p = vec![vec![MPoly::var(2), MPoly::var(1).neg()]];
        Chain::new(
            1,
            2,
            1,
            ChainKind::Noetherian,
            p,
            vec![sin, cos],
            trunc,
            false,
        )
        .expect("well-formed")
    }

    /// `phi = 1 / (1 - x)`, `phi' = phi^2`.
    pub fn geometric_chain(trunc: u32) -> Chain {
        let phi = series_1d(|_| Rat::one(), trunc);
        Chain::new(
            1,
            1,
            2,
            ChainKind::Pfaffian,
            vec![vec![MPoly::var(1).pow(2)]],
            vec![phi],
            trunc,
            false,
        )
        .expect("well-formed")
    }

    /// `phi = exp(x_0 + x_1)` in two variables.
    pub fn exp_sum_chain(trunc: u32) -> Chain {
        let s = MPoly::var(0).add(&MPoly::var(1));
        let mut phi = MPoly::zero();
        for k in 0..trunc {
            phi = phi.add(&s.pow(k).scale(&factorial(k).recip().expect("nonzero")));
        }
        let p = vec![vec![MPoly::var(2)], vec![MPoly::var(2)]];
        Chain::new(2, 1, 1, ChainKind::Pfaffian, p, vec![phi], trunc, false).expect("well-formed")
    }

    pub fn passing_chains(trunc: u32) -> Vec<(&'static str, Chain)> {
        vec![
            ("exp", exp_chain(trunc)),
            ("sin_cos", sin_cos_chain(trunc)),
            ("geometric", geometric_chain(trunc)),
            ("exp_sum", exp_sum_chain(trunc)),
        ]
    }

    fn set_coeff(f: &MPoly, exps: &[u32], c: Rat) -> MPoly {
        let m = Monomial::new(exps);
        let mut out = f.clone();
        out.add_term(m.clone(), &(&c - &f.coeff(&m)));
        out
    }

    /// Each mutation perturbs one coefficient and carries the first
    /// mismatch it must produce, worked out by termwise differentiation.
    pub fn mutations(trunc: u32) -> Vec<(&'static str, Chain, Mismatch)> {
        let mm = |i, j, exps: &[u32], lhs: Rat, rhs: Rat| Mismatch {
            i,
            j,
            exps: exps.to_vec(),
            lhs,
            rhs,
        };
        let mut out = Vec::new();

        // phi' = phi + 1: constant terms 1 against 2.
        let mut c = exp_chain(trunc);
        c.p[0][0] = c.p[0][0].add(&MPoly::one());
        out.push(("exp_plus_one", c, mm(0, 0, &[0], q(1, 1), q(2, 1))));

        // x^3 coefficient 1/6 -> 1/5: at x^2, 3/5 against 1/2.
        let mut c = exp_chain(trunc);
        c.phi[0] = set_coeff(&c.phi[0], &[3], q(1, 5));
        out.push(("exp_cubic", c, mm(0, 0, &[2], q(3, 5), q(1, 2))));

        // cos' = +sin: at x, -1 against 1.
        let mut c = sin_cos_chain(trunc);
        c.p[0][1] = c.p[0][1].neg();
        out.push(("cos_sign", c, mm(0, 1, &[1], q(-1, 1), q(1, 1))));

        // sin x^3 coefficient -1/6 -> -1/5: at x^2 of sin', -3/5 against -1/2.
        let mut c = sin_cos_chain(trunc);
        c.phi[0] = set_coeff(&c.phi[0], &[3], q(-1, 5));
        out.push(("sin_cubic", c, mm(0, 0, &[2], q(-3, 5), q(-1, 2))));

        // phi' = phi^2 + x: at x, 2 against 3.
        let mut c = geometric_chain(trunc);
        c.p[0][0] = c.p[0][0].add(&MPoly::var(0));
        out.push(("geometric_shift", c, mm(0, 0, &[1], q(2, 1), q(3, 1))));

        // x0 x1 coefficient 1 -> 2: d/dx0 at x1 gives 2 against 1.
        let mut c = exp_sum_chain(trunc);
        c.phi[0] = set_coeff(&c.phi[0], &[1, 1], q(2, 1));
        out.push(("exp_sum_mixed", c, mm(0, 0, &[0, 1], q(2, 1), q(1, 1))));

        out
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;

    #[test]
    fn bundled_chains_pass() {
        for (name, c) in passing_chains(10) {
            let rep = verify_chain(&c).unwrap();
            assert!(rep.identities_hold, "{name}: {:?}", rep.first_mismatch);
            assert!(rep.passed, "{name}");
        }
        assert!(verify_chain(&exp_chain(10)).unwrap().triangular);
        assert!(!verify_chain(&sin_cos_chain(10)).unwrap().triangular);
    }

    #[test]
    fn mutations_fail_where_expected() {
        for (name, c, want) in mutations(10) {
            let rep = verify_chain(&c).unwrap();
            assert!(!rep.passed, "{name}");
            assert_eq!(rep.first_mismatch.as_ref(), Some(&want), "{name}");
        }
    }

    #[test]
    fn truncation_too_low() {
        assert_eq!(
            verify_chain(&exp_chain(1)),
            Err(PfaffError::TruncationTooLow(1))
        );
    }

    #[test]
    fn pfaffian_tag_requires_triangularity() {
        let mut c = sin_cos_chain(8);
        c.kind = ChainKind::Pfaffian;
        let rep = verify_chain(&c).unwrap();
        assert!(rep.identities_hold && !rep.passed);
    }

    #[test]
    fn chain_json_round_trip() {
        let c = sin_cos_chain(6);
        let s = serde_json::to_string(&c).unwrap();
        let back: Chain = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn multiplicity_values() {
        assert_eq!(
            multiplicity_budget(3, 2, 1, ChainKind::Pfaffian, false, None),
            MultiplicityBudget::NormalizedConstant { value: 27 }
        );
        assert_eq!(
            multiplicity_budget(1, 4, 3, ChainKind::Pfaffian, false, None).value(),
            Some(1)
        );
        assert_eq!(
            multiplicity_budget(2, 1, 1, ChainKind::Noetherian, false, None),
            MultiplicityBudget::Unavailable
        );
        assert_eq!(
            multiplicity_budget(2, 1, 1, ChainKind::Noetherian, true, None),
            MultiplicityBudget::Heuristic {
                value: 16,
                exponent: 4
            }
        );
    }

    #[test]
    fn wilkie_values() {
        let b = wilkie_budget(1, 1, 1, 0);
        assert_eq!(
            b.per_level_degrees,
            vec![LevelDegree {
                k: 1,
                nu: 1,
                d: select_degree(1, 0, 1, 1)
            }]
        );
        assert!(b.block_count_bound >= 1);

        let b = wilkie_budget(3, 2, 2, 1);
        assert_eq!(b.per_level_degrees[0].nu, 27);
        assert_eq!(b.per_level_degrees[0].d, select_degree(2, 1, 27, 2));
    }

    #[test]
    fn wilkie_monotone() {
        for beta in 1..4 {
            for r in 1..4 {
                let b = wilkie_budget(beta, r, 2, 0).block_count_bound;
                assert!(wilkie_budget(beta + 1, r, 2, 0).block_count_bound >= b);
                assert!(wilkie_budget(beta, r + 1, 2, 0).block_count_bound >= b);
            }
        }
    }
}
