//! Level-one mock theta functions: the closed-form Phi, the Psi family built
//! from it, and the A(1|1) Appell-type sum.
//!
//! The Zwegers-modified Phi coincides with Phi at m = 1, so only Phi exists here.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::rational::{q, q_to_f64, qi, GaussianRational, Q};
use crate::ratio::SeriesRatio;
use crate::series::{JacobiSeries, QOrder};
use crate::theta::{eta_numeric, eta_scaled, theta_at, theta_numeric, ThetaLabel};

/// Denominators with modulus below this are treated as poles.
pub const POLE_EPS: f64 = 1e-6;

/// Default absolute truncation error for theta sums.
pub const DEFAULT_ABS_ERR: f64 = 1e-16;

/// A point (tau, z1, z2, t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub tau: Complex64,
    pub z1: Complex64,
    pub z2: Complex64,
    pub t: Complex64,
}

impl Point {
    pub fn new(tau: Complex64, z1: Complex64, z2: Complex64, t: Complex64) -> Self {
        Self { tau, z1, z2, t }
    }

    /// (tau, z, z, 0).
    pub fn diagonal(tau: Complex64, z: Complex64) -> Self {
        Self::new(tau, z, z, Complex64::zero())
    }
}

/// Indices (M, j, k, eps, eps') of Psi with m = 1, s = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PsiParams {
    pub m: i64,
    pub j: Q,
    pub k: Q,
    pub eps: Q,
    pub eps_prime: Q,
}

pub(crate) fn is_half_or_zero(r: Q) -> bool {
    r == qi(0) || r == q(1, 2)
}

impl PsiParams {
    pub fn new(m: i64, j: Q, k: Q, eps: Q, eps_prime: Q) -> Result<Self> {
        let p = Self { m, j, k, eps, eps_prime };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(invalid(format!("M must be positive, got {}", self.m)));
        }
        if !is_half_or_zero(self.eps) || !is_half_or_zero(self.eps_prime) {
            return Err(invalid("eps and eps' must be 0 or 1/2"));
        }
        if !(self.j - self.eps_prime).is_integer() || !(self.k - self.eps_prime).is_integer() {
            return Err(invalid(format!("j={} and k={} must lie in eps'={} + Z", self.j, self.k, self.eps_prime)));
        }
        Ok(())
    }
}

fn e(x: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * x).exp()
}

fn guarded(what: &str, v: Complex64) -> Result<Complex64> {
    if v.norm() < POLE_EPS {
        return Err(Error::PoleProximity { what: what.into(), modulus: v.norm() });
    }
    Ok(v)
}

/// Phi^[1,s](tau, z1, z2, t); independent of s.
pub fn phi1_numeric(_s: i64, p: Point) -> Result<Complex64> {
    phi1_numeric_with(p, DEFAULT_ABS_ERR)
}

pub fn phi1_numeric_with(p: Point, abs_err: f64) -> Result<Complex64> {
    let th = |z| theta_numeric(ThetaLabel::T11, p.tau, z, abs_err);
    let d1 = guarded("theta11(tau, z1)", th(p.z1)?)?;
    let d2 = guarded("theta11(tau, z2)", th(p.z2)?)?;
    let eta = eta_numeric(p.tau, abs_err)?;
    Ok(Complex64::new(0.0, -1.0) * e(-p.t) * eta.powi(3) * th(p.z1 + p.z2)? / (d1 * d2))
}

pub fn psi_numeric(params: &PsiParams, p: Point) -> Result<Complex64> {
    psi_numeric_with(params, p, DEFAULT_ABS_ERR)
}

/// Psi^[M,1;0;eps]_{j,k;eps'}(tau, z1, z2, t) from the theta quotient.
pub fn psi_numeric_with(params: &PsiParams, p: Point, abs_err: f64) -> Result<Complex64> {
    params.validate()?;
    let m = params.m as f64;
    let (j, k, eps) = (q_to_f64(&params.j), q_to_f64(&params.k), q_to_f64(&params.eps));
    let mt = p.tau * m;
    let th = |z| theta_numeric(ThetaLabel::T11, mt, z, abs_err);
    let d1 = guarded("theta11(M tau, z1 + j tau + eps)", th(p.z1 + p.tau * j + eps)?)?;
    let d2 = guarded("theta11(M tau, z2 + k tau - eps)", th(p.z2 + p.tau * k - eps)?)?;
    let num = th(p.z1 + p.z2 + p.tau * (j + k))? * eta_numeric(mt, abs_err)?.powi(3);
    let pre = Complex64::new(0.0, -1.0) * e(-p.t / m + p.tau * (j * k / m) + (p.z1 * k + p.z2 * j) / m);
    Ok(pre * num / (d1 * d2))
}

/// Builds a series whose trusted order depends on the order of its inputs,
/// raising the input order until the output reaches `target`.
pub(crate) fn to_order<F>(target: Q, mut build: F) -> Result<JacobiSeries>
where
    F: FnMut(Q) -> Result<JacobiSeries>,
{
    let mut order = target;
    for _ in 0..32 {
        let s = build(order)?;
        match s.q_order() {
            QOrder::Finite(got) if got < target => order += target - got,
            _ => return Ok(s.truncate(target)),
        }
    }
    Err(Error::TruncationCap(format!("could not reach q-order {target}")))
}

pub(crate) fn product(factors: &[JacobiSeries]) -> Result<JacobiSeries> {
    let mut acc = JacobiSeries::one();
    for f in factors {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

/// Psi on the diagonal z1 = z2 = z, t = 0, for j = k, as the three-theta quotient
/// q^(j^2/M) x^(2j/M) (+-i) theta00 theta01 theta_a / theta_b at (M tau, z + j tau),
/// with (a, b) = (11, 10) for eps = 1/2 and (10, 11) for eps = 0.
pub fn psi_diag_ratio(params: &PsiParams, order: Q) -> Result<SeriesRatio> {
    params.validate()?;
    if params.j != params.k {
        return Err(invalid("psi_diag_ratio needs j = k"));
    }
    let (m, j) = (params.m, params.j);
    let (top, bottom, lead) = if params.eps == q(1, 2) {
        (ThetaLabel::T11, ThetaLabel::T10, GaussianRational::i())
    } else {
        (ThetaLabel::T10, ThetaLabel::T11, GaussianRational::from_ints(0, -1))
    };
    let at = |label, o| theta_at(label, m, 1, j, qi(0), o);
    let num = to_order(order, |o| {
        let p = product(&[at(ThetaLabel::T00, o)?, at(ThetaLabel::T01, o)?, at(top, o)?])?;
        Ok(p.scale_monomial(&lead, j * j / m, j * 2 / m))
    })?;
    let den = to_order(order, |o| at(bottom, o))?;
    Ok(SeriesRatio::new(num, den))
}

/// Psi_{j,k} on the diagonal z1 = z2 = z, t = 0, for any j, k:
/// -i q^(jk/M) x^((j+k)/M) eta(M tau)^3 theta11(M tau, 2z + (j+k) tau)
/// over theta11(M tau, z + j tau + eps) theta11(M tau, z + k tau - eps).
pub fn psi_on_diagonal(params: &PsiParams, order: Q) -> Result<SeriesRatio> {
    params.validate()?;
    let PsiParams { m, j, k, eps, .. } = *params;
    let num = to_order(order, |o| {
        let p = product(&[
            eta_scaled(m, o)?.pow(3)?,
            theta_at(ThetaLabel::T11, m, 2, j + k, qi(0), o)?,
        ])?;
        Ok(p.scale_monomial(&GaussianRational::from_ints(0, -1), j * k / m, (j + k) / m))
    })?;
    let den = to_order(order, |o| {
        product(&[
            theta_at(ThetaLabel::T11, m, 1, j, eps, o)?,
            theta_at(ThetaLabel::T11, m, 1, k, -eps, o)?,
        ])
    })?;
    Ok(SeriesRatio::new(num, den))
}

/// Truncated A(1|1) sum with an estimate of the omitted tail.
#[derive(Clone, Copy, Debug)]
pub struct TruncatedSum {
    pub value: Complex64,
    pub tail: f64,
}

/// Phi_1^(A(1|1))[m,s](tau, z1, z2, t) summed over |j| <= j_cutoff.
pub fn phi_a11_numeric(m: i64, s: Q, p: Point, j_cutoff: i64, tol: f64) -> Result<TruncatedSum> {
    if m < 1 || j_cutoff < 1 {
        return Err(invalid("phi_a11_numeric needs m >= 1 and j_cutoff >= 1"));
    }
    if !(p.tau.im > 0.0) {
        return Err(invalid("Im tau must be positive"));
    }
    let term = |j: i64| -> Result<Complex64> {
        let jf = j as f64;
        let mf = m as f64;
        let sf = q_to_f64(&s);
        let den = Complex64::new(1.0, 0.0) - e(p.z1 + p.tau * jf);
        let den = guarded(&format!("1 - x q^{j}"), den)?;
        Ok(e((p.z1 + p.z2) * (mf * jf) + p.z1 * sf + p.tau * (mf * jf * jf + sf * jf)) / (den * den))
    };
    let mut sum = term(0)?;
    for j in 1..=j_cutoff {
        sum += term(j)? + term(-j)?;
    }
    let mut tail = 0.0;
    for dir in [1, -1] {
        let a = term(dir * (j_cutoff + 1))?.norm();
        let b = term(dir * (j_cutoff + 2))?.norm();
        tail += if a == 0.0 {
            0.0
        } else if b < a {
            a * a / (a - b)
        } else {
            f64::INFINITY
        };
    }
    if tail > tol {
        return Err(Error::ResidualTooLarge { residual: tail, tol });
    }
    Ok(TruncatedSum {
        value: e(-p.t * m as f64) * sum,
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn generic() -> Point {
        Point::new(c(0.13, 0.87), c(0.21, 0.04), c(-0.17, 0.06), c(0.05, 0.01))
    }

    #[test]
    fn phi1_is_s_independent_and_symmetric() {
        let p = generic();
        let a = phi1_numeric(0, p).unwrap();
        assert!((a - phi1_numeric(5, p).unwrap()).norm() < 1e-14);
        let swapped = Point::new(p.tau, p.z2, p.z1, p.t);
        assert!((a - phi1_numeric(0, swapped).unwrap()).norm() < 1e-13);
        let half = Point::new(p.tau, p.z1, p.z2, p.t + 0.5);
        assert!((phi1_numeric(0, half).unwrap() + a).norm() < 1e-13);
    }

    #[test]
    fn psi_reduces_to_phi1() {
        let p = generic();
        let params = PsiParams::new(1, qi(0), qi(0), qi(0), qi(0)).unwrap();
        assert!((psi_numeric(&params, p).unwrap() - phi1_numeric(0, p).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn params_validate() {
        assert!(PsiParams::new(2, q(1, 2), qi(1), qi(0), q(1, 2)).is_err());
        assert!(PsiParams::new(0, qi(0), qi(0), qi(0), qi(0)).is_err());
        assert!(PsiParams::new(2, qi(0), qi(0), q(1, 3), qi(0)).is_err());
    }

    #[test]
    fn pole_detected() {
        let p = Point::new(c(0.1, 0.9), c(0.0, 0.0), c(0.3, 0.0), c(0.0, 0.0));
        assert!(matches!(phi1_numeric(0, p), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn a11_converges_and_resums() {
        let p = generic();
        let a = phi_a11_numeric(1, qi(1), p, 30, 1e-12).unwrap();
        let b = phi_a11_numeric(1, qi(1), p, 40, 1e-12).unwrap();
        assert!((a.value - b.value).norm() < 1e-14);
        let p0 = Point::new(p.tau, p.z1, p.z2, c(0.0, 0.0));
        let v0 = phi_a11_numeric(2, qi(1), p0, 30, 1e-12).unwrap().value;
        let vt = phi_a11_numeric(2, qi(1), p, 30, 1e-12).unwrap().value;
        assert!((vt - e(-p.t * 2.0) * v0).norm() < 1e-13);
    }
}
