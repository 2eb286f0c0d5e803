use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::ring::{ExactDiv, Ring};
use super::{Rat, SeriesError, TPoly};

/// Exponent vector with trailing zeros trimmed, so that monomials of
/// different nominal arity compare and hash consistently. The derived
/// ordering is lexicographic with variable 0 most significant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn new(exps: &[u32]) -> Self {
        let mut v: SmallVec<[u32; 4]> = exps.into();
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Monomial::new(&v)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// Exponents padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        (0..n.max(self.0.len())).map(|i| self.exp(i)).collect()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of leading variable slots this monomial touches.
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let v: Vec<u32> = (0..n).map(|i| self.exp(i) + other.exp(i)).collect();
        Monomial::new(&v)
    }

    pub fn divides(&self, other: &Self) -> bool {
        (0..self.0.len()).all(|i| self.exp(i) <= other.exp(i))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        let v: Vec<u32> = (0..self.0.len())
            .map(|i| self.exp(i) - other.exp(i))
            .collect();
        Some(Monomial::new(&v))
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Self {
        let mut v = self.padded(i + 1);
        v[i] = e;
        Monomial::new(&v)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// One term of a polynomial as it appears in JSON files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exps: Vec<i64>,
    pub coeff: Rat,
}

/// Sparse multivariate polynomial over `Q`.
///
/// Variables are positional; the caller's context says what index `i`
/// stands for. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<TermJson>", try_from = "Vec<TermJson>")]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl From<MPoly> for Vec<TermJson> {
    fn from(p: MPoly) -> Self {
        let n = p.arity();
        p.to_json(n)
    }
}

impl TryFrom<Vec<TermJson>> for MPoly {
    type Error = SeriesError;

    fn try_from(terms: Vec<TermJson>) -> Result<Self, SeriesError> {
        let n = terms.iter().map(|t| t.exps.len()).max().unwrap_or(0);
        let padded: Vec<TermJson> = terms
            .into_iter()
            .map(|mut t| {
                t.exps.resize(n, 0);
                t
            })
            .collect();
        MPoly::from_json(&padded, n)
    }
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        MPoly::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        MPoly::term(Monomial::var(i, 1), Rat::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(it: I) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; convenient in tests.
    pub fn from_int_terms(terms: &[(&[u32], i64)]) -> Self {
        MPoly::from_terms(terms.iter().map(|(e, c)| (Monomial::new(e), Rat::from(*c))))
    }

    /// Validates JSON terms against the expected arity. Negative exponents
    /// encode field inversion and are rejected.
    pub fn from_json(terms: &[TermJson], nvars: usize) -> Result<Self, SeriesError> {
        let mut p = MPoly::zero();
        for t in terms {
            if t.exps.len() != nvars {
                return Err(SeriesError::ArityMismatch {
                    expected: nvars,
                    found: t.exps.len(),
                });
            }
            if t.exps.iter().any(|&e| e < 0) {
                return Err(SeriesError::NegativeExponent);
            }
            let exps: Vec<u32> = t.exps.iter().map(|&e| e as u32).collect();
            p.add_term(Monomial::new(&exps), &t.coeff);
        }
        Ok(p)
    }

    pub fn to_json(&self, nvars: usize) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                exps: m.padded(nvars).into_iter().map(i64::from).collect(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.arity() == 0)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one())
    }

    /// Number of variable slots used (one past the highest index present).
    pub fn arity(&self) -> usize {
        self.terms.keys().map(Monomial::arity).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Total degree restricted to the variables in `vars`.
    pub fn degree_in_set(&self, vars: &[usize]) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|&i| m.exp(i)).sum())
            .max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    /// Lex-leading term (variable 0 most significant).
    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        Ring::pow_u32(self, e)
    }

    pub fn derivative(&self, var: usize) -> Self {
        MPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(var);
            (e > 0).then(|| (m.with_exp(var, e - 1), c * &Rat::from(i64::from(e))))
        }))
    }

    /// Evaluates with `values[i]` substituted for variable `i`.
    pub fn eval<R: Ring>(&self, values: &[R]) -> Result<R, SeriesError> {
        let arity = self.arity();
        if arity > values.len() {
            return Err(SeriesError::ArityMismatch {
                expected: values.len(),
                found: arity,
            });
        }
        let mut powers: Vec<Vec<R>> = vec![vec![R::one()]; arity];
        for i in 0..arity {
            let need = self.degree_in(i) as usize;
            for k in 1..=need {
                let next = powers[i][k - 1].mul_ref(&values[i]);
                powers[i].push(next);
            }
        }
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut term = R::from_rat(c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    term = term.mul_ref(&powers[i][e as usize]);
                }
            }
            acc = acc.add_ref(&term);
        }
        Ok(acc)
    }

    /// Evaluates at a rational point.
    pub fn eval_rat(&self, values: &[Rat]) -> Result<Rat, SeriesError> {
        self.eval(values)
    }

    /// Renames variable `i` to `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let n = map.iter().copied().max().map_or(0, |x| x + 1);
            let mut v = vec![0u32; n];
            for (i, &e) in m.exps().iter().enumerate() {
                v[map[i]] += e;
            }
            (Monomial::new(&v), c.clone())
        }))
    }

    /// Coefficients with respect to `var`: `self = sum_k out[k] * var^k`,
    /// where no `out[k]` involves `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(); self.degree_in(var) as usize + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            out[e].add_term(m.with_exp(var, 0), c);
        }
        out
    }

    pub fn from_coeffs_in(var: usize, coeffs: &[MPoly]) -> Self {
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out = out.add(&c.mul_term(&Monomial::var(var, k as u32), &Rat::one()));
        }
        out
    }

    /// Leading coefficient with respect to `var`.
    pub fn lc_in(&self, var: usize) -> MPoly {
        self.coeffs_in(var).pop().unwrap_or_default()
    }

    /// Groups terms by their non-`var` part and reads each group as a
    /// univariate polynomial in `var`.
    pub fn collect_univariate(&self, var: usize) -> BTreeMap<Monomial, TPoly> {
        let mut groups: BTreeMap<Monomial, Vec<Rat>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            let v = groups.entry(m.with_exp(var, 0)).or_default();
            if v.len() <= e {
                v.resize(e + 1, Rat::zero());
            }
            v[e] = c.clone();
        }
        groups
            .into_iter()
            .map(|(m, v)| (m, TPoly::new(v)))
            .collect()
    }

    /// Embeds a univariate polynomial as a polynomial in variable `var`.
    pub fn from_tpoly(p: &TPoly, var: usize) -> Self {
        MPoly::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(var, k as u32), c.clone())),
        )
    }

    /// Reads a polynomial that only involves `var` as a `TPoly`.
    pub fn to_tpoly(&self, var: usize) -> Option<TPoly> {
        let mut v = Vec::new();
        for (m, c) in &self.terms {
            if m.arity() > 0 && Monomial::var(var, m.exp(var)) != *m {
                return None;
            }
            let e = m.exp(var) as usize;
            if v.len() <= e {
                v.resize(e + 1, Rat::zero());
            }
            v[e] = c.clone();
        }
        Some(TPoly::new(v))
    }

    /// Divides by the lex-leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => MPoly::zero(),
            Some((_, c)) => self.scale(&c.recip().expect("nonzero")),
        }
    }

    /// Pseudo-remainder of `self` by `divisor` with respect to `var`.
    pub fn pseudo_rem(&self, divisor: &Self, var: usize) -> Self {
        let n = divisor.degree_in(var);
        let lc = divisor.lc_in(var);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= n {
            let dr = r.degree_in(var);
            let lr = r.lc_in(var);
            let shift = Monomial::var(var, dr - n);
            r = lc
                .mul(&r)
                .sub(&lr.mul(divisor).mul_term(&shift, &Rat::one()));
        }
        r
    }

    /// Content with respect to `var`: gcd of the coefficients in `var`.
    pub fn content_in(&self, var: usize) -> Self {
        self.coeffs_in(var)
            .iter()
            .fold(MPoly::zero(), |g, c| mpoly_gcd(&g, c))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("v{i}"));
                match e {
                    0 => {}
                    1 => mono.push(name),
                    _ => mono.push(format!("{name}^{e}")),
                }
            }
            let s = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono.join("*")
            } else if (-c).is_one() {
                format!("-{}", mono.join("*"))
            } else {
                format!("({c})*{}", mono.join("*"))
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Greatest common divisor in `Q[x_0, x_1, ...]`, normalized to have
/// lex-leading coefficient 1. Recursive primitive remainder sequence.
pub fn mpoly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if provably_coprime(a, b) {
        return MPoly::one();
    }
    // The highest slot is used by at least one input (monomials are trimmed).
    let var = a.arity().max(b.arity()) - 1;
    gcd_in(a, b, var)
}

/// Degree of the gcd in `v` is at most that of the gcd of specializations
/// of the other variables, as long as the leading coefficient of `a` in `v`
/// survives. A constant gcd for every variable proves coprimality.
fn provably_coprime(a: &MPoly, b: &MPoly) -> bool {
    let n = a.arity().max(b.arity());
    let point: Vec<Rat> = (0..n).map(|i| Rat::from(3 + 2 * i as i64)).collect();
    (0..n).filter(|&v| a.involves(v) || b.involves(v)).all(|v| {
        if !(a.involves(v) && b.involves(v)) {
            return false;
        }
        let vals: Vec<MPoly> = (0..n)
            .map(|i| {
                if i == v {
                    MPoly::var(0)
                } else {
                    MPoly::constant(point[i].clone())
                }
            })
            .collect();
        let lc = a.lc_in(v);
        let lc_vals: Vec<Rat> = point.clone();
        if lc.eval_rat(&lc_vals).map_or(true, |c| c.is_zero()) {
            return false;
        }
        let (Ok(sa), Ok(sb)) = (a.eval(&vals), b.eval(&vals)) else {
            return false;
        };
        match (sa.to_tpoly(0), sb.to_tpoly(0)) {
            (Some(ua), Some(ub)) => ua.gcd(&ub).degree() == Some(0),
            _ => false,
        }
    })
}

fn gcd_in(a: &MPoly, b: &MPoly, var: usize) -> MPoly {
    match (a.involves(var), b.involves(var)) {
        (false, false) => mpoly_gcd(a, b),
        (false, true) => mpoly_gcd(a, &b.content_in(var)),
        (true, false) => mpoly_gcd(&a.content_in(var), b),
        (true, true) => {
            let ca = a.content_in(var);
            let cb = b.content_in(var);
            let mut pa = a.div_exact(&ca).expect("content divides");
            let mut pb = b.div_exact(&cb).expect("content divides");
            if pa.degree_in(var) < pb.degree_in(var) {
                std::mem::swap(&mut pa, &mut pb);
            }
            let g = loop {
                let r = pa.pseudo_rem(&pb, var);
                if r.is_zero() {
                    break pb;
                }
                if !r.involves(var) {
                    break MPoly::one();
                }
                let cr = r.content_in(var);
                pa = pb;
                pb = r.div_exact(&cr).expect("content divides");
            };
            let gp = g.div_exact(&g.content_in(var)).expect("content divides");
            mpoly_gcd(&ca, &cb).mul(&gp).monic()
        }
    }
}

impl ExactDiv for MPoly {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lm_d, lc_d) = divisor.leading_term()?;
        let (lm_d, lc_d_inv) = (lm_d.clone(), lc_d.recip()?);
        let mut r = self.clone();
        let mut q = MPoly::zero();
        while let Some((lm_r, lc_r)) = r.leading_term() {
            let m = lm_r.div(&lm_d)?;
            let c = lc_r * &lc_d_inv;
            q.add_term(m.clone(), &c);
            r = r.sub(&divisor.mul_term(&m, &c));
        }
        Some(q)
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn from_rat(c: &Rat) -> Self {
        MPoly::constant(c.clone())
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}
