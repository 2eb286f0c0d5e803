use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::{ExactDiv, Ring};
use super::Rat;

/// A dense univariate polynomial in `t` with exact rational coefficients.
///
/// Coefficient `k` multiplies `t^k`. Trailing zeros are never stored, so the
/// zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Rat>", into = "Vec<Rat>")]
pub struct TPoly {
    coeffs: Vec<Rat>,
}

impl From<Vec<Rat>> for TPoly {
    fn from(coeffs: Vec<Rat>) -> Self {
        TPoly::new(coeffs)
    }
}

impl From<TPoly> for Vec<Rat> {
    fn from(p: TPoly) -> Self {
        p.coeffs
    }
}

impl TPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        TPoly::new(cs.iter().map(|&c| Rat::from(c)).collect())
    }

    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        TPoly::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return TPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        TPoly { coeffs }
    }

    pub fn t() -> Self {
        TPoly::monomial(Rat::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient (`ord_t`), `None` for zero.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return TPoly::zero();
        }
        TPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return TPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TPoly { coeffs }
    }

    /// Drops every power `t^k` with `k >= n`.
    pub fn truncate(&self, n: usize) -> Self {
        TPoly::new(self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        TPoly::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, usize::MAX)
    }

    /// Product modulo `t^n`.
    pub fn mul_trunc(&self, other: &Self, n: usize) -> Self {
        if self.is_zero() || other.is_zero() || n == 0 {
            return TPoly::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(n);
        let mut out = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        TPoly::new(out)
    }

    pub fn derivative(&self) -> Self {
        TPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Rat::from(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => TPoly::zero(),
            Some(lc) => self.scale(&lc.recip().expect("nonzero leading coefficient")),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc_inv = divisor
            .leading()
            .recip()
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (TPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let sub = &c * d;
                rem[k + j] -= &sub;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (TPoly::new(quot), TPoly::new(rem))
    }

    /// Monic greatest common divisor over `Q`; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, e: u32) -> Self {
        Ring::pow_u32(self, e)
    }

    /// Composition `self(inner(t))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = TPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&TPoly::constant(c.clone()));
        }
        acc
    }

    /// Square-free decomposition (Yun): returns `(c, [a_1, a_2, ...])` with
    /// `self = c * prod a_i^i`, every `a_i` monic, square-free and pairwise
    /// coprime. Zero input returns `(0, [])`.
    pub fn square_free_decomposition(&self) -> (Rat, Vec<TPoly>) {
        if self.is_zero() {
            return (Rat::zero(), Vec::new());
        }
        let lc = self.leading();
        let f = self.monic();
        if f.is_constant() {
            return (lc, Vec::new());
        }
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut factors = Vec::new();
        loop {
            let ai = b.gcd(&d);
            b = b.div_rem(&ai).0;
            c = d.div_rem(&ai).0;
            factors.push(ai);
            if b.is_constant() {
                break;
            }
            d = c.sub(&b.derivative());
        }
        while factors.last().is_some_and(TPoly::is_constant) {
            factors.pop();
        }
        (lc, factors)
    }

    /// Exact square root when `self` is a perfect square in `Q[t]`.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(TPoly::zero());
        }
        let deg = self.degree()?;
        let low = self.ord()?;
        if deg % 2 == 1 || low % 2 == 1 {
            return None;
        }
        let shifted = TPoly::new(self.coeffs[low..].to_vec());
        let n = (deg - low) / 2;
        // Solve for s with s^2 = shifted, from the constant term upward.
        let s0 = shifted.coeff(0).sqrt_exact()?;
        let two_s0_inv = (&s0 * &Rat::from(2)).recip()?;
        let mut s = vec![s0];
        for k in 1..=n {
            let mut acc = shifted.coeff(k);
            for i in 1..k {
                acc -= &(&s[i] * &s[k - i]);
            }
            s.push(&acc * &two_s0_inv);
        }
        let root = TPoly::new(s).shift(low / 2);
        if root.mul(&root) == *self {
            Some(root)
        } else {
            None
        }
    }
}

impl Ring for TPoly {
    fn zero() -> Self {
        TPoly::zero()
    }
    fn one() -> Self {
        TPoly::constant(Rat::one())
    }
    fn is_zero(&self) -> bool {
        TPoly::is_zero(self)
    }
    fn from_rat(c: &Rat) -> Self {
        TPoly::constant(c.clone())
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

impl ExactDiv for TPoly {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::q;

    #[test]
    fn division_and_gcd() {
        // (t - 1)(t + 2) and (t - 1)(t - 3)
        let a = TPoly::from_ints(&[-2, 1, 1]);
        let b = TPoly::from_ints(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), TPoly::from_ints(&[-1, 1]));
        let (qt, r) = a.div_rem(&TPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(qt, TPoly::from_ints(&[2, 1]));
    }

    #[test]
    fn yun_multiplicities() {
        // (t - 1)^2 (t + 1)^3 * 5
        let l1 = TPoly::from_ints(&[-1, 1]);
        let l2 = TPoly::from_ints(&[1, 1]);
        let f = l1.pow(2).mul(&l2.pow(3)).scale(&q(5, 1));
        let (c, fs) = f.square_free_decomposition();
        assert_eq!(c, q(5, 1));
        assert_eq!(fs.len(), 3);
        assert!(fs[0].is_constant());
        assert_eq!(fs[1], l1);
        assert_eq!(fs[2], l2);
        let total: usize = fs
            .iter()
            .enumerate()
            .map(|(i, g)| (i + 1) * g.degree().unwrap_or(0))
            .sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn sqrt_of_square() {
        let s = TPoly::from_ints(&[0, 2, 0, -3]);
        assert_eq!(s.mul(&s).sqrt_exact(), Some(s.clone()));
        assert_eq!(TPoly::t().sqrt_exact(), None);
    }

    #[test]
    fn truncated_product() {
        let a = TPoly::from_ints(&[1, 1, 1]);
        assert_eq!(a.mul_trunc(&a, 2), TPoly::from_ints(&[1, 2]));
    }
}
