use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::Ring;
use super::{Rat, SeriesError, TPoly};

/// The `t`-adic valuation of a series, as far as it can be certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Valuation {
    /// Index of the first nonzero coefficient.
    Finite(i64),
    /// Every known coefficient vanishes; the series is only known modulo `t^M`.
    AtLeast(i64),
    /// The exact zero series.
    Infinite,
}

impl Valuation {
    /// Lower bound usable in truncation bookkeeping (`None` means infinity).
    pub fn lower_bound(self) -> Option<i64> {
        match self {
            Valuation::Finite(k) | Valuation::AtLeast(k) => Some(k),
            Valuation::Infinite => None,
        }
    }

    pub fn is_at_least(self, m: i64) -> bool {
        self.lower_bound().is_none_or(|k| k >= m)
    }
}

/// A truncated Laurent series in `t` with exact rational coefficients.
///
/// `coeffs[k]` is the coefficient of `t^(offset + k)`. A truncated series is
/// known modulo `t^trunc` and stores exactly `trunc - offset` coefficients;
/// an exact series (`trunc == None`) is a Laurent polynomial with trailing
/// zeros trimmed.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct TSeries {
    offset: i64,
    coeffs: Vec<Rat>,
    trunc: Option<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeries {
    offset: i64,
    coeffs: Vec<Rat>,
    trunc: Option<i64>,
}

impl TryFrom<RawSeries> for TSeries {
    type Error = SeriesError;

    fn try_from(raw: RawSeries) -> Result<Self, Self::Error> {
        match raw.trunc {
            None => Ok(TSeries::exact_laurent(raw.offset, raw.coeffs)),
            Some(m) => {
                if raw.coeffs.len() as i64 != m - raw.offset {
                    return Err(SeriesError::BadTruncation {
                        offset: raw.offset,
                        trunc: m,
                        len: raw.coeffs.len(),
                    });
                }
                TSeries::truncated(raw.offset, raw.coeffs, m)
            }
        }
    }
}

impl From<TSeries> for RawSeries {
    fn from(s: TSeries) -> Self {
        RawSeries {
            offset: s.offset,
            coeffs: s.coeffs,
            trunc: s.trunc,
        }
    }
}

impl TSeries {
    pub fn zero() -> Self {
        TSeries {
            offset: 0,
            coeffs: Vec::new(),
            trunc: None,
        }
    }

    pub fn one() -> Self {
        TSeries::exact(&TPoly::constant(Rat::one()))
    }

    pub fn exact(p: &TPoly) -> Self {
        TSeries::exact_laurent(0, p.coeffs().to_vec())
    }

    /// Exact Laurent polynomial `sum coeffs[k] t^(offset + k)`.
    pub fn exact_laurent(offset: i64, coeffs: Vec<Rat>) -> Self {
        let mut s = TSeries {
            offset,
            coeffs,
            trunc: None,
        };
        s.normalize_exact();
        s
    }

    /// A series known modulo `t^trunc`. Coefficients past `trunc` are
    /// dropped and missing ones are zero-filled.
    pub fn truncated(offset: i64, mut coeffs: Vec<Rat>, trunc: i64) -> Result<Self, SeriesError> {
        if trunc <= offset {
            return Err(SeriesError::BadTruncation {
                offset,
                trunc,
                len: coeffs.len(),
            });
        }
        coeffs.resize((trunc - offset) as usize, Rat::zero());
        Ok(TSeries {
            offset,
            coeffs,
            trunc: Some(trunc),
        })
    }

    /// The power series `p mod t^m` (`m >= 1`).
    pub fn from_poly_mod(p: &TPoly, m: i64) -> Self {
        TSeries::truncated(0, p.coeffs().to_vec(), m.max(1)).expect("positive truncation")
    }

    fn normalize_exact(&mut self) {
        while self.coeffs.last().is_some_and(Rat::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.offset += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.offset = 0;
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn trunc(&self) -> Option<i64> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Coefficient of `t^k`, or `None` when `k` is beyond the truncation.
    pub fn coeff(&self, k: i64) -> Option<Rat> {
        if self.trunc.is_some_and(|m| k >= m) {
            return None;
        }
        if k < self.offset {
            return Some(Rat::zero());
        }
        Some(
            self.coeffs
                .get((k - self.offset) as usize)
                .cloned()
                .unwrap_or_default(),
        )
    }

    pub fn ord(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Valuation::Finite(self.offset + i as i64),
            None => match self.trunc {
                Some(m) => Valuation::AtLeast(m),
                None => Valuation::Infinite,
            },
        }
    }

    /// Lowers the precision to `t^m` (no-op when already coarser).
    pub fn with_trunc(&self, m: i64) -> Self {
        let m = self.trunc.map_or(m, |cur| cur.min(m));
        let offset = self.offset.min(m - 1);
        let coeffs = (offset..m)
            .map(|k| self.coeff(k).unwrap_or_default())
            .collect();
        TSeries {
            offset,
            coeffs,
            trunc: Some(m),
        }
    }

    /// Drops negative powers and reads the known part as a polynomial.
    pub fn to_tpoly(&self) -> TPoly {
        let top = self.offset + self.coeffs.len() as i64;
        TPoly::new(
            (0..top.max(0))
                .map(|k| self.coeff(k).unwrap_or_default())
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        TSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            trunc: self.trunc,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = min_opt(self.trunc, other.trunc);
        let offset = self.offset.min(other.offset);
        let top = match trunc {
            Some(m) => m,
            None => (self.offset + self.coeffs.len() as i64)
                .max(other.offset + other.coeffs.len() as i64),
        };
        let coeffs = (offset..top)
            .map(|k| {
                let a = self.coeff(k).unwrap_or_default();
                let b = other.coeff(k).unwrap_or_default();
                a + b
            })
            .collect();
        match trunc {
            None => TSeries::exact_laurent(offset, coeffs),
            Some(m) => TSeries::truncated(offset, coeffs, m).expect("offset below truncation"),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product with truncation `min(M_a + v_b, M_b + v_a, min(M_a, M_b))`,
    /// where `v` are certified valuation lower bounds.
    pub fn mul(&self, other: &Self) -> Self {
        let (va, vb) = (self.ord(), other.ord());
        if va == Valuation::Infinite || vb == Valuation::Infinite {
            return TSeries::zero();
        }
        let trunc = match (self.trunc, other.trunc) {
            (None, None) => None,
            (ma, mb) => {
                let cross_a = ma.map(|m| m + vb.lower_bound().expect("finite valuation"));
                let cross_b = mb.map(|m| m + va.lower_bound().expect("finite valuation"));
                min_opt(min_opt(cross_a, cross_b), min_opt(ma, mb))
            }
        };
        let offset = self.offset + other.offset;
        let mut prod =
            vec![Rat::zero(); (self.coeffs.len() + other.coeffs.len()).saturating_sub(1)];
        let limit = trunc.map(|m| (m - offset).max(0) as usize);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if limit.is_some_and(|l| i + j >= l) {
                    break;
                }
                if !b.is_zero() {
                    prod[i + j] += &(a * b);
                }
            }
        }
        match trunc {
            None => TSeries::exact_laurent(offset, prod),
            Some(m) => {
                let start = offset.min(m - 1);
                let coeffs = (start..m)
                    .map(|k| {
                        if k < offset {
                            Rat::zero()
                        } else {
                            prod.get((k - offset) as usize).cloned().unwrap_or_default()
                        }
                    })
                    .collect();
                TSeries::truncated(start, coeffs, m).expect("offset below truncation")
            }
        }
    }

    /// Inverse of a unit of `Q[[t]]`, valid modulo the input's truncation.
    pub fn invert_unit(&self) -> Result<Self, SeriesError> {
        match self.ord() {
            Valuation::Finite(0) => {}
            v => return Err(SeriesError::NotAUnit(v)),
        }
        let m = match self.trunc {
            Some(m) => m,
            None => {
                if self.coeffs.len() == 1 {
                    return Ok(TSeries::exact(&TPoly::constant(
                        self.coeffs[0].recip().expect("unit"),
                    )));
                }
                return Err(SeriesError::NeedsTruncation);
            }
        };
        let a: Vec<Rat> = (0..m).map(|k| self.coeff(k).unwrap_or_default()).collect();
        let b0 = a[0].recip().expect("unit constant term");
        let mut b = vec![b0.clone()];
        for k in 1..m as usize {
            let mut acc = Rat::zero();
            for i in 1..=k {
                if !a[i].is_zero() {
                    acc += &(&a[i] * &b[k - i]);
                }
            }
            b.push(-(&acc * &b0));
        }
        TSeries::truncated(0, b, m)
    }

    /// Exact inverse modulo `t^m` of a unit given as an exact polynomial.
    pub fn invert_unit_mod(&self, m: i64) -> Result<Self, SeriesError> {
        self.with_trunc(m).invert_unit()
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl PartialEq for TSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.trunc != other.trunc {
            return false;
        }
        let lo = self.offset.min(other.offset);
        let hi = match self.trunc {
            Some(m) => m,
            None => (self.offset + self.coeffs.len() as i64)
                .max(other.offset + other.coeffs.len() as i64),
        };
        (lo..hi).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl Ring for TSeries {
    fn zero() -> Self {
        TSeries::zero()
    }
    fn one() -> Self {
        TSeries::one()
    }
    fn is_zero(&self) -> bool {
        self.ord() == Valuation::Infinite
    }
    fn from_rat(c: &Rat) -> Self {
        TSeries::exact(&TPoly::constant(c.clone()))
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

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})t^{}", self.offset + i as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        match self.trunc {
            Some(m) => write!(f, " mod t^{m}"),
            None => write!(f, " (exact)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::q;

    fn ser(cs: &[i64], m: i64) -> TSeries {
        TSeries::truncated(0, cs.iter().map(|&c| Rat::from(c)).collect(), m).unwrap()
    }

    #[test]
    fn ord_examples() {
        assert_eq!(ser(&[0, 0, 3, 1], 10).ord(), Valuation::Finite(2));
        assert_eq!(TSeries::zero().ord(), Valuation::Infinite);
        assert_eq!(ser(&[], 5).ord(), Valuation::AtLeast(5));
    }

    #[test]
    fn arithmetic_examples() {
        let p = ser(&[1, 1], 3).mul(&ser(&[1, -1], 3));
        assert_eq!(p, ser(&[1, 0, -1], 3));

        let z = TSeries::truncated(1, vec![Rat::one()], 4)
            .unwrap()
            .add(&TSeries::truncated(1, vec![-Rat::one()], 4).unwrap());
        assert_eq!(z.ord(), Valuation::AtLeast(4));
        assert_eq!(z.trunc(), Some(4));

        // Independent convolution oracle: (2t^2)(3t) = 6t^3.
        let a = ser(&[0, 0, 2], 5);
        let b = ser(&[0, 3], 5);
        let c = a.mul(&b);
        assert_eq!(c.trunc(), Some(5));
        for k in 0..5 {
            let mut want = Rat::zero();
            for i in 0..=k {
                want += &(&a.coeff(i).unwrap() * &b.coeff(k - i).unwrap());
            }
            assert_eq!(c.coeff(k).unwrap(), want);
        }
        assert_eq!(c.coeff(3), Some(q(6, 1)));
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(ser(&[1, -1], 3).invert_unit().unwrap(), ser(&[1, 1, 1], 3));
        assert_eq!(
            ser(&[2], 2).invert_unit().unwrap(),
            TSeries::truncated(0, vec![q(1, 2)], 2).unwrap()
        );
        let a = ser(&[1, 1, 1], 4);
        let inv = a.invert_unit().unwrap();
        assert_eq!(inv, ser(&[1, -1, 0, 1], 4));
        // Multiply-back oracle.
        assert_eq!(a.mul(&inv), ser(&[1], 4));
        assert!(matches!(
            ser(&[0, 1], 3).invert_unit(),
            Err(SeriesError::NotAUnit(_))
        ));
        assert!(matches!(
            ser(&[], 3).invert_unit(),
            Err(SeriesError::NotAUnit(_))
        ));
    }

    #[test]
    fn json_shape() {
        let s = ser(&[1, 2], 3);
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"offset":0,"coeffs":["1","2","0"],"trunc":3}"#);
        let back: TSeries = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        assert!(
            serde_json::from_str::<TSeries>(r#"{"offset":0,"coeffs":["1"],"trunc":3}"#).is_err()
        );
    }
}
