use std::fmt::Debug;

use super::Rat;

/// Commutative ring operations used by the generic evaluation and
/// elimination routines.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rat(c: &Rat) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    fn pow_u32(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

/// A ring where divisions known to be exact can be carried out
/// (integral domains such as `Q[t]` or `Q[x, y, t]`).
pub trait ExactDiv: Ring {
    /// Returns `Some(q)` with `q * divisor == self`, or `None` when the
    /// division is not exact.
    fn div_exact(&self, divisor: &Self) -> Option<Self>;
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul_ref(&i))
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn from_rat(c: &Rat) -> Self {
        c.clone()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl ExactDiv for Rat {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        divisor.recip().map(|r| self * &r)
    }
}

impl Field for Rat {
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
}
