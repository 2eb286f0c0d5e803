use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::{Field, Ring};
use super::{Rat, SeriesError, TPoly};

/// Element of `Q(t)`: a reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRFun", into = "RawRFun")]
pub struct RFunT {
    num: TPoly,
    den: TPoly,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRFun {
    num: TPoly,
    den: TPoly,
}

impl TryFrom<RawRFun> for RFunT {
    type Error = SeriesError;
    fn try_from(r: RawRFun) -> Result<Self, SeriesError> {
        RFunT::new(r.num, r.den)
    }
}

impl From<RFunT> for RawRFun {
    fn from(r: RFunT) -> Self {
        RawRFun {
            num: r.num,
            den: r.den,
        }
    }
}

impl RFunT {
    pub fn new(num: TPoly, den: TPoly) -> Result<Self, SeriesError> {
        if den.is_zero() {
            return Err(SeriesError::ZeroDenominator);
        }
        Ok(RFunT::reduce(num, den))
    }

    fn reduce(num: TPoly, den: TPoly) -> Self {
        if num.is_zero() {
            return RFunT::from_poly(TPoly::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let lc = den.leading().recip().expect("nonzero denominator");
        RFunT {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn from_poly(p: TPoly) -> Self {
        RFunT {
            num: p,
            den: TPoly::constant(Rat::one()),
        }
    }

    pub fn num(&self) -> &TPoly {
        &self.num
    }

    pub fn den(&self) -> &TPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Value at `t = tau`, `None` when `tau` is a pole.
    pub fn eval(&self, tau: &Rat) -> Option<Rat> {
        let d = self.den.eval(tau);
        d.recip().map(|di| &self.num.eval(tau) * &di)
    }
}

impl Ring for RFunT {
    fn zero() -> Self {
        RFunT::from_poly(TPoly::zero())
    }
    fn one() -> Self {
        RFunT::from_poly(TPoly::constant(Rat::one()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_rat(c: &Rat) -> Self {
        RFunT::from_poly(TPoly::constant(c.clone()))
    }
    fn add_ref(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RFunT::reduce(self.num.add(&other.num), self.den.clone());
        }
        RFunT::reduce(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RFunT::zero();
        }
        RFunT::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg_ref(&self) -> Self {
        RFunT {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Field for RFunT {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RFunT::reduce(self.den.clone(), self.num.clone()))
        }
    }
}

impl fmt::Debug for RFunT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
