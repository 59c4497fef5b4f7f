//! Mumford theta functions and the Dedekind eta function, as exact series and
//! as floating-point values.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::rational::{q, qi, GaussianRational, Q};
use crate::series::{JacobiSeries, QOrder};

/// Characteristic (a, b) of theta_ab(tau, z) = sum_n e((n + a/2)^2 tau / 2 + (n + a/2)(z + b/2)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThetaLabel {
    T00,
    T01,
    T10,
    T11,
}

impl ThetaLabel {
    pub const ALL: [ThetaLabel; 4] = [ThetaLabel::T00, ThetaLabel::T01, ThetaLabel::T10, ThetaLabel::T11];

    pub fn from_ab(a: u8, b: u8) -> Result<Self> {
        match (a, b) {
            (0, 0) => Ok(ThetaLabel::T00),
            (0, 1) => Ok(ThetaLabel::T01),
            (1, 0) => Ok(ThetaLabel::T10),
            (1, 1) => Ok(ThetaLabel::T11),
            _ => Err(invalid(format!("theta characteristic ({a}, {b})"))),
        }
    }

    pub fn ab(self) -> (u8, u8) {
        match self {
            ThetaLabel::T00 => (0, 0),
            ThetaLabel::T01 => (0, 1),
            ThetaLabel::T10 => (1, 0),
            ThetaLabel::T11 => (1, 1),
        }
    }
}

impl fmt::Display for ThetaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.ab();
        write!(f, "theta{a}{b}")
    }
}

impl FromStr for ThetaLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim_start_matches("theta");
        match digits {
            "00" => Ok(ThetaLabel::T00),
            "01" => Ok(ThetaLabel::T01),
            "10" => Ok(ThetaLabel::T10),
            "11" => Ok(ThetaLabel::T11),
            _ => Err(Error::Parse(format!("unknown theta label {s:?}"))),
        }
    }
}

fn g(re: i64) -> GaussianRational {
    GaussianRational::from_ints(re, 0)
}

/// 1 + c q^a x^b
fn binomial(c: i64, a: Q, b: Q) -> JacobiSeries {
    JacobiSeries::from_terms([(qi(0), qi(0), g(1)), (a, b, g(c))], QOrder::Exact)
}

fn product_to(factors: impl IntoIterator<Item = JacobiSeries>, order: Q) -> JacobiSeries {
    let mut acc = JacobiSeries::one().truncate(order);
    for f in factors {
        acc = acc.mul(&f).expect("plain product").truncate(order);
    }
    acc
}

/// Triple-product form, trusted below q^order.
pub fn theta_product(label: ThetaLabel, order: Q) -> JacobiSeries {
    let (a, b) = label.ab();
    let sign = if b == 0 { 1 } else { -1 };
    if a == 0 {
        let mut factors = Vec::new();
        let mut n = 1;
        while qi(n) - q(1, 2) < order {
            if qi(n) < order {
                factors.push(binomial(-1, qi(n), qi(0)));
            }
            factors.push(binomial(sign, qi(n) - q(1, 2), qi(1)));
            factors.push(binomial(sign, qi(n) - q(1, 2), qi(-1)));
            n += 1;
        }
        product_to(factors, order)
    } else {
        let inner_order = order - q(1, 8);
        let mut factors = Vec::new();
        let mut n = 1;
        while qi(n - 1) < inner_order {
            if qi(n) < inner_order {
                factors.push(binomial(-1, qi(n), qi(0)));
                factors.push(binomial(sign, qi(n), qi(1)));
            }
            factors.push(binomial(sign, qi(n - 1), qi(-1)));
            n += 1;
        }
        let lead = if b == 0 { g(1) } else { GaussianRational::i() };
        product_to(factors, inner_order).scale_monomial(&lead, q(1, 8), q(1, 2))
    }
}

/// Lattice-sum form, trusted below q^order.
pub fn theta_sum(label: ThetaLabel, order: Q) -> JacobiSeries {
    let (a, b) = label.ab();
    let shift = q(a as i64, 2);
    let mut terms = Vec::new();
    // (n + a/2)^2 / 2 < order bounds |n| by sqrt(2 order) + 1.
    let bound = (2.0 * crate::rational::q_to_f64(&order)).max(0.0).sqrt() as i64 + 2;
    for n in -bound..=bound {
        let m = qi(n) + shift;
        let e = m * m / 2;
        if e < order {
            let phase = GaussianRational::root_of_unity(m * q(b as i64, 2)).expect("quarter root");
            terms.push((e, m, phase));
        }
    }
    JacobiSeries::from_terms(terms, QOrder::Finite(order))
}

/// eta(tau) = q^(1/24) prod (1 - q^n), trusted below q^order.
pub fn eta(order: Q) -> JacobiSeries {
    let inner = order - q(1, 24);
    let mut terms = Vec::new();
    // Pentagonal numbers: prod (1 - q^n) = sum (-1)^k q^(k(3k-1)/2).
    let mut k = 0i64;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = qi(kk * (3 * kk - 1) / 2);
            if e < inner {
                terms.push((e, qi(0), g(if kk % 2 == 0 { 1 } else { -1 })));
                any = true;
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    JacobiSeries::from_terms(terms, QOrder::Finite(inner)).scale_monomial(&g(1), q(1, 24), qi(0))
}

/// eta(m tau), trusted below q^order.
pub fn eta_scaled(m: i64, order: Q) -> Result<JacobiSeries> {
    eta(order / m).subst_scale_tau(m)
}

/// theta(m tau, k z + r_tau tau + r_one), trusted below q^order.
///
/// Built by substitution from the product form, shifting before the z-scaling
/// so that x-exponents step by one. The base order starts high enough for the
/// x-support to exceed |r_tau| / m and is raised until the order lost in the
/// shift is recovered.
pub fn theta_at(label: ThetaLabel, m: i64, k: i64, r_tau: Q, r_one: Q, order: Q) -> Result<JacobiSeries> {
    if m <= 0 || k == 0 {
        return Err(invalid(format!("theta_at needs m > 0 and k != 0, got m={m}, k={k}")));
    }
    let reach = num_traits::Signed::abs(&r_tau) / m + 2;
    let mut base = (order / m).max(reach * reach / 2);
    for _ in 0..64 {
        let s = theta_product(label, base)
            .subst_scale_tau(m)?
            .subst_shift_z(r_tau, r_one)?;
        match s.q_order() {
            QOrder::Finite(got) if got < order => {
                base += (order - got) / m + q(1, 2);
            }
            _ => return Ok(s.subst_scale_z(k)?.truncate(order)),
        }
    }
    Err(Error::TruncationCap(format!("theta_at did not reach order {order}")))
}

fn check_domain(tau: Complex64, abs_err: f64) -> Result<()> {
    if !(tau.im > 0.0) {
        return Err(invalid(format!("Im tau must be positive, got {}", tau.im)));
    }
    if !(abs_err > 0.0) {
        return Err(invalid(format!("absolute error must be positive, got {abs_err}")));
    }
    Ok(())
}

const TERM_CAP: i64 = 1_000_000;

/// theta_ab(tau, z) by direct summation, absolute error below `abs_err`.
pub fn theta_numeric(label: ThetaLabel, tau: Complex64, z: Complex64, abs_err: f64) -> Result<Complex64> {
    check_domain(tau, abs_err)?;
    let (a, b) = label.ab();
    let shift = a as f64 / 2.0;
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let w = z + b as f64 / 2.0;
    let term = |m: f64| (i2pi * (tau * (m * m / 2.0) + w * m)).exp();
    // log|term(m)| = -pi Im(tau) m^2 - 2 pi m Im(z): peaked at m = -Im z / Im tau.
    let log_mag = |m: f64| -PI * tau.im * m * m - 2.0 * PI * m * z.im;
    let centre = (-z.im / tau.im - shift).round() as i64;
    let mut sum = term(centre as f64 + shift);
    for dir in [1i64, -1] {
        let mut n = centre + dir;
        loop {
            let m = n as f64 + shift;
            sum += term(m);
            // Ratio of successive magnitudes going outward, then a geometric tail.
            let r = (log_mag(m + dir as f64) - log_mag(m)).exp();
            let mag = log_mag(m).exp();
            if r < 1.0 && mag * r / (1.0 - r) < abs_err / 4.0 {
                break;
            }
            n += dir;
            if (n - centre).abs() > TERM_CAP {
                return Err(Error::TruncationCap(format!("{label} sum exceeded {TERM_CAP} terms")));
            }
        }
    }
    Ok(sum)
}

/// eta(tau) from the pentagonal-number series.
pub fn eta_numeric(tau: Complex64, abs_err: f64) -> Result<Complex64> {
    check_domain(tau, abs_err)?;
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let qpow = |e: f64| (i2pi * tau * e).exp();
    let mut sum = Complex64::new(1.0, 0.0);
    let mut k = 1i64;
    loop {
        let e1 = (k * (3 * k - 1) / 2) as f64;
        let e2 = (k * (3 * k + 1) / 2) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += (qpow(e1) + qpow(e2)) * sign;
        // Following terms are bounded by a geometric series in |q|^(3k+1).
        let next = (-2.0 * PI * tau.im * ((k + 1) * (3 * k + 2) / 2) as f64).exp();
        let r = (-2.0 * PI * tau.im).exp();
        if 2.0 * next / (1.0 - r) < abs_err / 4.0 {
            break;
        }
        k += 1;
        if k > TERM_CAP {
            return Err(Error::TruncationCap("eta sum".into()));
        }
    }
    Ok(qpow(1.0 / 24.0) * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn leading_terms() {
        let t = theta_product(ThetaLabel::T11, qi(2));
        assert_eq!(t.coeff(q(1, 8), q(1, 2)), GaussianRational::i());
        assert_eq!(t.coeff(q(1, 8), q(-1, 2)), GaussianRational::from_ints(0, -1));
        let e = eta(qi(3));
        assert_eq!(e.valuation(), Some(q(1, 24)));
        assert_eq!(e.coeff(q(25, 24), qi(0)), g(-1));
    }

    #[test]
    fn product_matches_sum() {
        for label in ThetaLabel::ALL {
            let order = qi(6);
            assert!(theta_product(label, order).equal_to_order(&theta_sum(label, order), order).unwrap());
        }
    }

    #[test]
    fn numeric_matches_series() {
        let tau = Complex64::new(0.1, 0.9);
        let z = Complex64::new(0.23, 0.05);
        for label in ThetaLabel::ALL {
            let series = theta_sum(label, qi(30)).eval_numeric(tau, z);
            let direct = theta_numeric(label, tau, z, 1e-15).unwrap();
            assert_relative_eq!(series.re, direct.re, epsilon = 1e-12);
            assert_relative_eq!(series.im, direct.im, epsilon = 1e-12);
        }
        let e = eta(qi(30)).eval_numeric(tau, z);
        let d = eta_numeric(tau, 1e-15).unwrap();
        assert!((e - d).norm() < 1e-12);
    }

    #[test]
    fn numeric_rejects_bad_domain() {
        let z = Complex64::new(0.0, 0.0);
        assert!(theta_numeric(ThetaLabel::T00, Complex64::new(0.0, -1.0), z, 1e-10).is_err());
        assert!(theta_numeric(ThetaLabel::T00, Complex64::new(0.0, 1.0), z, 0.0).is_err());
    }

    #[test]
    fn labels_parse() {
        for label in ThetaLabel::ALL {
            assert_eq!(label.to_string().parse::<ThetaLabel>().unwrap(), label);
        }
        assert!("12".parse::<ThetaLabel>().is_err());
    }
}
