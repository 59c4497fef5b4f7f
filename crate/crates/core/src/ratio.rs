//! Quotients of series, compared by cross-multiplication.

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::series::{JacobiSeries, QOrder};

#[derive(Clone, Debug)]
pub struct SeriesRatio {
    pub num: JacobiSeries,
    pub den: JacobiSeries,
}

impl SeriesRatio {
    pub fn new(num: JacobiSeries, den: JacobiSeries) -> Self {
        Self { num, den }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?))
    }

    /// Order up to which a/b = c/d can be decided from a*d and c*b.
    pub fn cross_order(&self, other: &Self) -> Result<QOrder> {
        let l = self.num.mul(&other.den)?;
        let r = other.num.mul(&self.den)?;
        Ok(l.q_order().min(r.q_order()))
    }

    /// Decides a/b = c/d through a*d = c*b up to `order`.
    pub fn cross_equal(&self, other: &Self, order: Q) -> Result<bool> {
        let l = self.num.mul(&other.den)?;
        let r = other.num.mul(&self.den)?;
        l.equal_to_order(&r, order)
    }

    /// Same as `cross_equal` at the largest order both products support.
    pub fn cross_equal_max(&self, other: &Self) -> Result<(bool, QOrder)> {
        if self.den.is_zero() || other.den.is_zero() {
            return Err(Error::NotInvertible("zero denominator"));
        }
        let l = self.num.mul(&other.den)?;
        let r = other.num.mul(&self.den)?;
        let order = l.q_order().min(r.q_order());
        let equal = match order {
            QOrder::Finite(o) => l.equal_to_order(&r, o)?,
            QOrder::Exact => l == r,
        };
        Ok((equal, order))
    }
}
