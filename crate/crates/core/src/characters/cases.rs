//! The single table mapping (heart, twisted, sign) to the Psi indices and the
//! global sign of each character numerator.

use super::reduction::{nice_k2, Heart};
use super::Sign;
use crate::error::{invalid, Result};
use crate::psi::PsiParams;
use crate::rational::{q, qi, Q};

/// c + a k1 + b k2 + d M, with c in halves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub halves: i64,
    pub k1: i64,
    pub k2: i64,
    pub m: i64,
}

impl Affine {
    const fn new(halves: i64, k1: i64, k2: i64, m: i64) -> Self {
        Self { halves, k1, k2, m }
    }

    pub fn eval(&self, m_big: i64, k1: i64, k2: i64) -> Q {
        q(self.halves, 2) + qi(self.k1 * k1 + self.k2 * k2 + self.m * m_big)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseRow {
    pub heart: Heart,
    pub twisted: bool,
    /// j = k of the diagonal Psi in the nice case 2k1 + k2 = M - 1.
    pub nice_j: Affine,
    /// (j, k) of the Psi for general in-range (k1, k2).
    pub dd_j: Affine,
    pub dd_k: Affine,
    /// Global sign for the character and the supercharacter.
    pub sign_plus: i64,
    pub sign_minus: i64,
}

pub const CASES: [CaseRow; 4] = [
    CaseRow {
        heart: Heart::I,
        twisted: false,
        nice_j: Affine::new(1, 1, 0, 0),
        dd_j: Affine::new(1, 1, 0, 0),
        dd_k: Affine::new(-1, -1, -1, 1),
        sign_plus: 1,
        sign_minus: -1,
    },
    CaseRow {
        heart: Heart::III,
        twisted: false,
        nice_j: Affine::new(-1, -1, 0, 0),
        dd_j: Affine::new(-1, -1, 0, 1),
        dd_k: Affine::new(1, 1, 1, 0),
        sign_plus: -1,
        sign_minus: 1,
    },
    CaseRow {
        heart: Heart::I,
        twisted: true,
        nice_j: Affine::new(0, -1, 0, 0),
        dd_j: Affine::new(0, -1, 0, 1),
        dd_k: Affine::new(2, 1, 1, 0),
        sign_plus: -1,
        sign_minus: -1,
    },
    CaseRow {
        heart: Heart::III,
        twisted: true,
        nice_j: Affine::new(2, 1, 0, 0),
        dd_j: Affine::new(2, 1, 0, 0),
        dd_k: Affine::new(0, -1, -1, 1),
        sign_plus: 1,
        sign_minus: 1,
    },
];

pub fn case_row(heart: Heart, twisted: bool) -> Result<&'static CaseRow> {
    CASES
        .iter()
        .find(|r| r.heart == heart && r.twisted == twisted)
        .ok_or_else(|| invalid(format!("numerators exist only for hearts I and III, got {heart}")))
}

impl CaseRow {
    pub fn global_sign(&self, sign: Sign) -> i64 {
        match sign {
            Sign::Plus => self.sign_plus,
            Sign::Minus => self.sign_minus,
        }
    }
}

fn eps_prime(twisted: bool) -> Q {
    if twisted {
        qi(0)
    } else {
        q(1, 2)
    }
}

/// Psi parameters and global sign of the nice-case numerator.
pub fn nice_psi(m: i64, k1: i64, heart: Heart, sign: Sign, twisted: bool) -> Result<(PsiParams, i64)> {
    let row = case_row(heart, twisted)?;
    let k2 = nice_k2(m, k1, heart)?;
    let j = row.nice_j.eval(m, k1, k2);
    Ok((PsiParams::new(m, j, j, sign.eps(), eps_prime(twisted))?, row.global_sign(sign)))
}

/// Psi parameters and global sign of the numerator for in-range (k1, k2).
pub fn dd_psi(m: i64, k1: i64, k2: i64, heart: Heart, sign: Sign, twisted: bool) -> Result<(PsiParams, i64)> {
    let row = case_row(heart, twisted)?;
    if m < 1 || !heart.admits(m, k1, k2) {
        return Err(invalid(format!("(k1, k2) = ({k1}, {k2}) out of range for heart {heart} at M={m}")));
    }
    let params = PsiParams::new(m, row.dd_j.eval(m, k1, k2), row.dd_k.eval(m, k1, k2), sign.eps(), eps_prime(twisted))?;
    Ok((params, row.global_sign(sign)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_indices_example() {
        let (p, g) = dd_psi(3, 0, 0, Heart::I, Sign::Minus, false).unwrap();
        assert_eq!((p.j, p.k, p.eps, g), (q(1, 2), q(5, 2), qi(0), -1));
    }

    #[test]
    fn nice_case_is_dd_mod_m() {
        for m in 1..=6 {
            for heart in [Heart::I, Heart::III] {
                for twisted in [false, true] {
                    for k1 in 0..m {
                        let Ok((n, gn)) = nice_psi(m, k1, heart, Sign::Plus, twisted) else { continue };
                        let (d, gd) = dd_psi(m, k1, m - 1 - 2 * k1, heart, Sign::Plus, twisted).unwrap();
                        assert_eq!(gn, gd);
                        assert!(((d.j - n.j) / m).is_integer());
                        assert_eq!(d.j - n.j, d.k - n.k);
                    }
                }
            }
        }
    }
}
