//! Reduction parameters (M, m, m2, k1, k2, heart) and the conformal weight and
//! charge of the resulting modules.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{invalid, Error, Result};
use crate::rational::{q, qi, Q};

/// Which of the four simple-root systems the parameters refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heart {
    I,
    II,
    III,
    IV,
}

impl Heart {
    pub const ALL: [Heart; 4] = [Heart::I, Heart::II, Heart::III, Heart::IV];

    /// Whether (k1, k2) is in range for this heart at level denominator M.
    pub fn admits(self, m_big: i64, k1: i64, k2: i64) -> bool {
        let s = 2 * k1 + k2;
        match self {
            Heart::I => k1 >= 0 && k2 >= 0 && s < m_big,
            Heart::II => k1 >= 1 && k2 >= 1 && s <= m_big,
            Heart::III => k1 >= 0 && k2 >= 1 && s < m_big,
            Heart::IV => k1 >= 1 && k2 >= 0 && s <= m_big,
        }
    }
}

impl fmt::Display for Heart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Heart::I => "I",
            Heart::II => "II",
            Heart::III => "III",
            Heart::IV => "IV",
        };
        f.write_str(s)
    }
}

impl FromStr for Heart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Heart::I),
            "II" => Ok(Heart::II),
            "III" => Ok(Heart::III),
            "IV" => Ok(Heart::IV),
            _ => Err(Error::Parse(format!("unknown heart {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReductionParams {
    pub m_big: i64,
    pub m: i64,
    pub m2: i64,
    pub k1: i64,
    pub k2: i64,
    pub heart: Heart,
    pub twisted: bool,
}

impl ReductionParams {
    pub fn new(m_big: i64, m: i64, m2: i64, k1: i64, k2: i64, heart: Heart, twisted: bool) -> Result<Self> {
        let p = Self { m_big, m, m2, k1, k2, heart, twisted };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_big < 1 || self.m < 1 {
            return Err(invalid(format!("M={} and m={} must be positive", self.m_big, self.m)));
        }
        if self.m_big.gcd(&self.m) != 1 {
            return Err(invalid(format!("M={} and m={} must be coprime", self.m_big, self.m)));
        }
        if self.m2 < 0 || self.m2 > self.m {
            return Err(invalid(format!("m2={} must satisfy 0 <= m2 <= m={}", self.m2, self.m)));
        }
        if !self.heart.admits(self.m_big, self.k1, self.k2) {
            return Err(invalid(format!(
                "(k1, k2) = ({}, {}) out of range for heart {} at M={}",
                self.k1, self.k2, self.heart, self.m_big
            )));
        }
        Ok(())
    }

    /// Every valid parameter tuple for fixed (M, m, twisted).
    pub fn enumerate(m_big: i64, m: i64, twisted: bool) -> Vec<ReductionParams> {
        let mut out = Vec::new();
        for heart in Heart::ALL {
            for k1 in 0..=m_big {
                for k2 in 0..=m_big {
                    for m2 in 0..=m {
                        if let Ok(p) = ReductionParams::new(m_big, m, m2, k1, k2, heart, twisted) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Central charge 6(1 - M)/M of the m = 1 modules.
pub fn central_charge(m_big: i64) -> Q {
    q(6 * (1 - m_big), m_big)
}

/// (h, s) of the reduced module, or (h^tw, s^tw) when `twisted`.
pub fn reduction_hs(p: &ReductionParams) -> Result<(Q, Q)> {
    p.validate()?;
    let r = q(p.m, p.m_big);
    let (k1, k2, m2) = (qi(p.k1), qi(p.k2), qi(p.m2));
    let half = q(1, 2);
    let one = qi(1);
    if !p.twisted {
        let s = match p.heart {
            Heart::I | Heart::IV => -r * k2 + m2,
            Heart::II | Heart::III => r * k2 - m2 - 2,
        };
        let (a, b) = match p.heart {
            Heart::I | Heart::III => (k1 + half, k1 + k2 + half),
            Heart::II | Heart::IV => (k1 - half, k1 + k2 - half),
        };
        let h = -r * a * b + (m2 + one) * a - (-r + 2) / 4;
        Ok((h, s))
    } else {
        let s = match p.heart {
            Heart::I | Heart::IV => r * (k2 + one) - m2 - one,
            Heart::II | Heart::III => -r * (k2 - one) + m2 + one,
        };
        let (a, b) = match p.heart {
            Heart::I => (k1, k1 + k2 + one),
            Heart::II => (k1, k1 + k2 - one),
            Heart::III => (k1 + one, k1 + k2),
            Heart::IV => (k1 - one, k1 + k2),
        };
        let h = -r * a * b + (m2 + one) * a - (-r + one) / 4;
        Ok((h, s))
    }
}

/// True exactly when the reduction of these parameters is the zero module:
/// heart I or III, 2k1 + k2 + 1 = M and m2 = m.
pub fn vanishes(p: &ReductionParams) -> bool {
    matches!(p.heart, Heart::I | Heart::III) && 2 * p.k1 + p.k2 + 1 == p.m_big && p.m2 == p.m
}

/// Checks the nice-case ranges and returns k2 = M - 1 - 2 k1.
pub fn nice_k2(m_big: i64, k1: i64, heart: Heart) -> Result<i64> {
    let k2 = m_big - 1 - 2 * k1;
    let ok = match heart {
        Heart::I => k1 >= 0 && 2 * k1 < m_big,
        Heart::III => k1 >= 0 && 2 * k1 <= m_big - 2,
        _ => false,
    };
    if m_big < 1 || !ok {
        return Err(invalid(format!("no nice parameters for heart {heart} with M={m_big}, k1={k1}")));
    }
    Ok(k2)
}

/// The index j of the irreducible module obtained in the nice case.
pub fn nice_param_to_j(m_big: i64, k1: i64, heart: Heart, twisted: bool) -> Result<Q> {
    nice_k2(m_big, k1, heart)?;
    Ok(match (heart, twisted) {
        (Heart::I, false) => qi(k1) + q(1, 2),
        (Heart::III, false) => -(qi(k1) + q(1, 2)),
        (Heart::I, true) => qi(-k1),
        _ => qi(k1 + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = ReductionParams::new(3, 1, 0, 0, 2, Heart::I, false).unwrap();
        assert_eq!(reduction_hs(&p).unwrap().1, q(-2, 3));
        assert_eq!(central_charge(1), qi(0));
        assert_eq!(central_charge(2), qi(-3));
        assert_eq!(central_charge(3), qi(-4));
        assert_eq!(nice_param_to_j(2, 0, Heart::I, false).unwrap(), q(1, 2));
        assert_eq!(nice_param_to_j(2, 0, Heart::III, true).unwrap(), qi(1));
        assert_eq!(nice_param_to_j(5, 2, Heart::I, true).unwrap(), qi(-2));
        assert!(nice_param_to_j(2, 1, Heart::III, false).is_err());
    }

    #[test]
    fn vanishing_examples() {
        let p = ReductionParams::new(3, 1, 1, 1, 0, Heart::I, false).unwrap();
        assert!(vanishes(&p));
        let p = ReductionParams::new(3, 1, 0, 1, 0, Heart::I, false).unwrap();
        assert!(!vanishes(&p));
        for p in ReductionParams::enumerate(5, 2, false) {
            if p.heart == Heart::II {
                assert!(!vanishes(&p));
            }
        }
    }

    #[test]
    fn ranges() {
        assert!(ReductionParams::new(3, 1, 0, 2, 0, Heart::I, false).is_err());
        assert!(ReductionParams::new(4, 2, 0, 0, 0, Heart::I, false).is_err());
        assert!(ReductionParams::new(3, 1, 2, 0, 0, Heart::I, false).is_err());
        assert!(ReductionParams::new(3, 1, 0, 1, 1, Heart::II, false).is_ok());
    }
}
