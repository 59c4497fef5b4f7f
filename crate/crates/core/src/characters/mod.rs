//! Characters and supercharacters of the N=4 modules at central charge
//! 6(1 - M)/M, their denominators, and the parameter bookkeeping behind them.

mod cases;
mod reduction;

use std::fmt;
use std::str::FromStr;

pub use cases::{case_row, dd_psi, nice_psi, CaseRow, CASES};
pub use reduction::{central_charge, nice_k2, nice_param_to_j, reduction_hs, vanishes, Heart, ReductionParams};

use crate::error::{invalid, Error, Result};
use crate::psi::{product, psi_diag_ratio, psi_on_diagonal, to_order};
use crate::rational::{q, qi, GaussianRational, Q};
use crate::ratio::SeriesRatio;
use crate::series::{JacobiSeries, XWindow};
use crate::theta::{eta, theta_at, ThetaLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    NS,
    Ramond,
}

impl Sector {
    /// eps' = 1/2 for NS, 0 for Ramond.
    pub fn eps_prime(self) -> Q {
        match self {
            Sector::NS => q(1, 2),
            Sector::Ramond => qi(0),
        }
    }

    pub fn from_twisted(twisted: bool) -> Self {
        if twisted {
            Sector::Ramond
        } else {
            Sector::NS
        }
    }

    pub fn is_twisted(self) -> bool {
        self == Sector::Ramond
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::NS => "NS",
            Sector::Ramond => "R",
        })
    }
}

impl FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "NS" | "ns" => Ok(Sector::NS),
            "R" | "r" | "Ramond" | "ramond" => Ok(Sector::Ramond),
            _ => Err(Error::Parse(format!("unknown sector {s:?} (expected NS or R)"))),
        }
    }
}

/// Character (+) or supercharacter (-).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// eps = 1/2 for the character, 0 for the supercharacter.
    pub fn eps(self) -> Q {
        match self {
            Sign::Plus => q(1, 2),
            Sign::Minus => qi(0),
        }
    }

    pub fn from_eps(eps: Q) -> Self {
        if eps == q(1, 2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("unknown sign {s:?} (expected + or -)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharacterSpec {
    pub m: i64,
    pub j: Q,
    pub sector: Sector,
    pub sign: Sign,
}

/// Admissible j: half-odd (NS) or integral (Ramond) with -(M-1)/2 <= j <= M/2.
pub fn index_set(m: i64, sector: Sector) -> Vec<Q> {
    let offset = match sector {
        Sector::NS => q(1, 2),
        Sector::Ramond => qi(0),
    };
    (-m..=m)
        .map(|n| qi(n) + offset)
        .filter(|j| *j >= q(1 - m, 2) && *j <= q(m, 2))
        .collect()
}

impl CharacterSpec {
    pub fn new(m: i64, j: Q, sector: Sector, sign: Sign) -> Result<Self> {
        let s = Self { m, j, sector, sign };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(invalid(format!("M must be positive, got {}", self.m)));
        }
        if !index_set(self.m, self.sector).contains(&self.j) {
            let set: Vec<String> = index_set(self.m, self.sector).iter().map(|j| j.to_string()).collect();
            return Err(invalid(format!(
                "j={} not admissible for M={} sector {}; admissible: {{{}}}",
                self.j,
                self.m,
                self.sector,
                set.join(", ")
            )));
        }
        Ok(())
    }

    /// The theta label theta_{1-2eps', 1-2eps} whose square divides the denominator.
    pub fn denominator_label(&self) -> ThetaLabel {
        denominator_label(self.sign, self.sector)
    }
}

fn denominator_label(sign: Sign, sector: Sector) -> ThetaLabel {
    match (sector, sign) {
        (Sector::NS, Sign::Plus) => ThetaLabel::T00,
        (Sector::NS, Sign::Minus) => ThetaLabel::T01,
        (Sector::Ramond, Sign::Plus) => ThetaLabel::T10,
        (Sector::Ramond, Sign::Minus) => ThetaLabel::T11,
    }
}

fn others(label: ThetaLabel) -> Vec<ThetaLabel> {
    ThetaLabel::ALL.into_iter().filter(|l| *l != label).collect()
}

fn plain(label: ThetaLabel, order: Q) -> Result<JacobiSeries> {
    theta_at(label, 1, 1, qi(0), qi(0), order)
}

/// (-1)^(2 eps) i
fn denominator_constant(sign: Sign) -> GaussianRational {
    match sign {
        Sign::Plus => GaussianRational::from_ints(0, -1),
        Sign::Minus => GaussianRational::i(),
    }
}

/// The denominator as (-1)^(2 eps) i eta^3 theta11(tau, 2z) over theta_{1-2eps',1-2eps}(tau, z)^2.
pub fn denominator(sign: Sign, sector: Sector, order: Q) -> Result<SeriesRatio> {
    let label = denominator_label(sign, sector);
    let num = to_order(order, |o| {
        Ok(product(&[eta(o).pow(3)?, theta_at(ThetaLabel::T11, 1, 2, qi(0), qi(0), o)?])?
            .scale(&denominator_constant(sign)))
    })?;
    let den = to_order(order, |o| plain(label, o)?.pow(2))?;
    Ok(SeriesRatio::new(num, den))
}

/// The same denominator as three thetas over one.
pub fn denominator_three_over_one(sign: Sign, sector: Sector, order: Q) -> Result<SeriesRatio> {
    let label = denominator_label(sign, sector);
    let num = to_order(order, |o| {
        let f: Vec<_> = others(label).into_iter().map(|l| plain(l, o)).collect::<Result<_>>()?;
        Ok(product(&f)?.scale(&denominator_constant(sign)))
    })?;
    let den = plain(label, order)?;
    Ok(SeriesRatio::new(num, den))
}

/// sgn(j) = 1 for j > 0 and -1 for j <= 0.
pub fn sgn(j: Q) -> i64 {
    if j > qi(0) {
        1
    } else {
        -1
    }
}

/// The closed-form character as a ratio of theta products:
/// numerator g q^(j^2/M) x^(2j/M) theta00 theta01 theta_a (M tau, z + j tau) theta_L(tau, z),
/// denominator theta_b(M tau, z + j tau) times the three plain thetas other than theta_L,
/// where (a, b) = (11, 10) for the character and (10, 11) for the supercharacter.
pub fn character_ratio(spec: &CharacterSpec, order: Q) -> Result<SeriesRatio> {
    spec.validate()?;
    let CharacterSpec { m, j, sector, sign } = *spec;
    let g = match (sector, sign) {
        (Sector::NS, Sign::Minus) => sgn(j),
        _ => -sgn(j),
    };
    let (top, bottom) = match sign {
        Sign::Plus => (ThetaLabel::T11, ThetaLabel::T10),
        Sign::Minus => (ThetaLabel::T10, ThetaLabel::T11),
    };
    let label = spec.denominator_label();
    let at = |l, o| theta_at(l, m, 1, j, qi(0), o);
    let num = to_order(order, |o| {
        let p = product(&[at(ThetaLabel::T00, o)?, at(ThetaLabel::T01, o)?, at(top, o)?, plain(label, o)?])?;
        Ok(p.scale_monomial(&GaussianRational::from_ints(g, 0), j * j / m, j * 2 / m))
    })?;
    let den = to_order(order, |o| {
        let mut f = vec![at(bottom, o)?];
        for l in others(label) {
            f.push(plain(l, o)?);
        }
        product(&f)
    })?;
    Ok(SeriesRatio::new(num, den))
}

/// Lowest q-exponent of the character: -c/24 + h.
pub fn leading_exponent(spec: &CharacterSpec) -> Q {
    let m = spec.m;
    let j = spec.j;
    match spec.sector {
        Sector::NS => j * j / m - q(1, 4),
        Sector::Ramond => j * j / m,
    }
}

/// The character expanded in q with each q-level in descending powers of x,
/// exact for x-exponents inside `window` and q-exponents below `order`.
pub fn character_series(spec: &CharacterSpec, order: Q, window: XWindow) -> Result<JacobiSeries> {
    spec.validate()?;
    let series = to_order(order, |o| {
        let mut build = o;
        let mut r = character_ratio(spec, build)?;
        while r.den.is_zero() {
            build += qi(1);
            r = character_ratio(spec, build)?;
        }
        let (lo, hi) = r.num.x_range().unwrap_or((qi(0), qi(0)));
        let inv_window = XWindow::new(window.lo - hi, window.hi - lo)?;
        r.num.mul(&r.den.invert_directed(inv_window)?)
    })?;
    let expected = leading_exponent(spec);
    match series.valuation() {
        Some(v) if v == expected => Ok(series),
        Some(v) => Err(Error::LeadingExponent { found: v, expected }),
        None => Err(invalid(format!("x-window [{}, {}] holds no leading coefficients", window.lo, window.hi))),
    }
}

/// (h, s) of the module with index j in the given sector.
pub fn h_s_values(spec: &CharacterSpec) -> Result<(Q, Q)> {
    spec.validate()?;
    let (m, j) = (spec.m, spec.j);
    Ok(match spec.sector {
        Sector::NS => (j * j / m + q(1, 4 * m) - q(1, 2), j * 2 / m - 1),
        Sector::Ramond => (j * j / m + q(1, 4 * m) - q(1, 4), j * 2 / m),
    })
}

/// Numerator of the nice-case character, R times ch, as a signed diagonal Psi.
pub fn nice_numerator(m: i64, k1: i64, heart: Heart, sign: Sign, twisted: bool, order: Q) -> Result<SeriesRatio> {
    let (params, g) = nice_psi(m, k1, heart, sign, twisted)?;
    let r = psi_diag_ratio(&params, order)?;
    Ok(SeriesRatio::new(r.num.scale(&GaussianRational::from_ints(g, 0)), r.den))
}

/// Numerator of the (in general reducible) module for any in-range (k1, k2).
pub fn dd_numerator(m: i64, k1: i64, k2: i64, heart: Heart, sign: Sign, twisted: bool, order: Q) -> Result<SeriesRatio> {
    let (params, g) = dd_psi(m, k1, k2, heart, sign, twisted)?;
    let r = psi_on_diagonal(&params, order)?;
    Ok(SeriesRatio::new(r.num.scale(&GaussianRational::from_ints(g, 0)), r.den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_sets() {
        assert_eq!(index_set(1, Sector::NS), vec![q(1, 2)]);
        assert_eq!(index_set(1, Sector::Ramond), vec![qi(0)]);
        assert_eq!(index_set(2, Sector::NS), vec![q(-1, 2), q(1, 2)]);
        assert_eq!(index_set(2, Sector::Ramond), vec![qi(0), qi(1)]);
        assert_eq!(index_set(5, Sector::Ramond), vec![qi(-2), qi(-1), qi(0), qi(1), qi(2)]);
    }

    #[test]
    fn hs_examples() {
        let hs = |m, j, s| h_s_values(&CharacterSpec::new(m, j, s, Sign::Plus).unwrap()).unwrap();
        assert_eq!(hs(2, q(1, 2), Sector::NS), (q(-1, 4), q(-1, 2)));
        assert_eq!(hs(2, qi(0), Sector::Ramond), (q(-1, 8), qi(0)));
        assert_eq!(hs(1, q(1, 2), Sector::NS), (qi(0), qi(0)));
        assert!(CharacterSpec::new(2, qi(0), Sector::NS, Sign::Plus).is_err());
    }

    #[test]
    fn trivial_characters() {
        for sector in [Sector::NS, Sector::Ramond] {
            for sign in [Sign::Plus, Sign::Minus] {
                let j = index_set(1, sector)[0];
                let r = character_ratio(&CharacterSpec::new(1, j, sector, sign).unwrap(), qi(6)).unwrap();
                let one = SeriesRatio::new(JacobiSeries::one(), JacobiSeries::one());
                assert!(r.cross_equal(&one, qi(6)).unwrap(), "{sector} {sign}");
            }
        }
    }

    #[test]
    fn denominator_forms_agree() {
        for sector in [Sector::NS, Sector::Ramond] {
            for sign in [Sign::Plus, Sign::Minus] {
                let a = denominator(sign, sector, qi(6)).unwrap();
                let b = denominator_three_over_one(sign, sector, qi(6)).unwrap();
                assert!(a.cross_equal(&b, qi(6)).unwrap());
            }
        }
    }
}
