//! Floating-point checks of modular transformation laws and least-squares
//! certificates that a family of characters spans an SL(2, Z)-stable space.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{dd_psi, Heart, Sector, Sign};
use crate::error::{invalid, Error, Result};
use crate::psi::{psi_numeric_with, Point, PsiParams, POLE_EPS};
use crate::rational::{q, q_to_f64, qi, Q};
use crate::theta::{eta_numeric, theta_numeric, ThetaLabel};

pub type NumericPoint = Point;

pub const DEFAULT_IM_TAU_FLOOR: f64 = 0.3;
pub const DEFAULT_PRECISION_BITS: u32 = 52;
/// Sample points per family member.
pub const OVERSAMPLING: usize = 3;
/// Least-squares systems with a larger condition number are rejected.
pub const MAX_CONDITION: f64 = 1e10;
/// Relative singular-value cutoff for selecting an independent basis.
const RANK_CUTOFF: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Transform {
    S,
    T,
}

impl std::str::FromStr for Transform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "s" => Ok(Transform::S),
            "T" | "t" => Ok(Transform::T),
            _ => Err(Error::Parse(format!("unknown transform {s:?} (expected S or T)"))),
        }
    }
}

pub fn abs_err(bits: u32) -> f64 {
    2f64.powi(-(bits as i32))
}

pub fn check_point(p: &NumericPoint, floor: f64) -> Result<()> {
    if !(p.tau.im >= floor) {
        return Err(invalid(format!("Im tau = {} below floor {floor}", p.tau.im)));
    }
    Ok(())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn e(x: Complex64) -> Complex64 {
    (c(0.0, 2.0 * PI) * x).exp()
}

fn s_image(p: &NumericPoint) -> NumericPoint {
    Point::new(-1.0 / p.tau, p.z1 / p.tau, p.z2 / p.tau, p.t)
}

fn t_image(p: &NumericPoint) -> NumericPoint {
    Point::new(p.tau + 1.0, p.z1, p.z2, p.t)
}

/// (eps + eps') reduced into {0, 1/2}.
fn add_half(a: Q, b: Q) -> Q {
    let s = a + b;
    if s >= qi(1) {
        s - 1
    } else {
        s
    }
}

/// |Psi(-1/tau, z1/tau, z2/tau, t) - (tau/M) e(z1 z2/(M tau)) sum_{a,b} e(-(a k + b j)/M) Psi'_{a,b}(tau, z1, z2, t)|,
/// where Psi' swaps eps and eps' and (a, b) runs over (eps + {0, .., M-1})^2.
pub fn psi_s_residual(params: &PsiParams, p: &NumericPoint, bits: u32) -> Result<f64> {
    params.validate()?;
    let err = abs_err(bits);
    let m = params.m;
    let mf = m as f64;
    let lhs = psi_numeric_with(params, s_image(p), err)?;
    let (jf, kf) = (q_to_f64(&params.j), q_to_f64(&params.k));
    let mut sum = c(0.0, 0.0);
    for ai in 0..m {
        for bi in 0..m {
            let a = params.eps + ai;
            let b = params.eps + bi;
            let swapped = PsiParams::new(m, a, b, params.eps_prime, params.eps)?;
            let phase = e(c(-(q_to_f64(&a) * kf + q_to_f64(&b) * jf) / mf, 0.0));
            sum += phase * psi_numeric_with(&swapped, *p, err)?;
        }
    }
    let rhs = p.tau / mf * e(p.z1 * p.z2 / (p.tau * mf)) * sum;
    Ok((lhs - rhs).norm())
}

/// |Psi(tau + 1, ...) - e(jk/M) Psi^{eps + eps'}(tau, ...)|.
pub fn psi_t_residual(params: &PsiParams, p: &NumericPoint, bits: u32) -> Result<f64> {
    params.validate()?;
    let err = abs_err(bits);
    let lhs = psi_numeric_with(params, t_image(p), err)?;
    let shifted = PsiParams { eps: add_half(params.eps, params.eps_prime), ..*params };
    let phase = e(c(q_to_f64(&(params.j * params.k / params.m)), 0.0));
    let rhs = phase * psi_numeric_with(&shifted, *p, err)?;
    Ok((lhs - rhs).norm())
}

fn denominator_label(sign: Sign, sector: Sector) -> ThetaLabel {
    match (sector, sign) {
        (Sector::NS, Sign::Plus) => ThetaLabel::T00,
        (Sector::NS, Sign::Minus) => ThetaLabel::T01,
        (Sector::Ramond, Sign::Plus) => ThetaLabel::T10,
        (Sector::Ramond, Sign::Minus) => ThetaLabel::T11,
    }
}

/// (-1)^(2 eps) i eta(tau)^3 theta11(tau, 2z) / theta_{1-2eps', 1-2eps}(tau, z)^2.
pub fn denominator_numeric(sign: Sign, sector: Sector, tau: Complex64, z: Complex64, bits: u32) -> Result<Complex64> {
    let err = abs_err(bits);
    let label = denominator_label(sign, sector);
    let d = theta_numeric(label, tau, z, err)?;
    if d.norm() < POLE_EPS {
        return Err(Error::PoleProximity { what: format!("{label}(tau, z)"), modulus: d.norm() });
    }
    let lead = match sign {
        Sign::Plus => c(0.0, -1.0),
        Sign::Minus => c(0.0, 1.0),
    };
    Ok(lead * eta_numeric(tau, err)?.powi(3) * theta_numeric(ThetaLabel::T11, tau, z * 2.0, err)? / (d * d))
}

fn sector_of(eps_prime: Q) -> Sector {
    if eps_prime == q(1, 2) {
        Sector::NS
    } else {
        Sector::Ramond
    }
}

fn eps_prime_of(sector: Sector) -> Q {
    sector.eps_prime()
}

/// Residual of the S or T law for the denominator with (eps, eps') = (sign, sector), at z = p.z1:
/// S: R(-1/tau, z/tau) = (-1)^(4 eps eps') tau e(z^2/tau) R' with eps and eps' swapped;
/// T: R(tau + 1, z) = e(-eps'/2) R with eps replaced by eps + eps'.
pub fn denominator_transform_residual(sign: Sign, sector: Sector, which: Transform, p: &NumericPoint, bits: u32) -> Result<f64> {
    let (tau, z) = (p.tau, p.z1);
    let eps = sign.eps();
    let epsp = eps_prime_of(sector);
    match which {
        Transform::S => {
            let lhs = denominator_numeric(sign, sector, -1.0 / tau, z / tau, bits)?;
            let swapped = denominator_numeric(Sign::from_eps(epsp), sector_of(eps), tau, z, bits)?;
            let parity = if eps == q(1, 2) && epsp == q(1, 2) { -1.0 } else { 1.0 };
            Ok((lhs - parity * tau * e(z * z / tau) * swapped).norm())
        }
        Transform::T => {
            let lhs = denominator_numeric(sign, sector, tau + 1.0, z, bits)?;
            let shifted = denominator_numeric(Sign::from_eps(add_half(eps, epsp)), sector, tau, z, bits)?;
            let phase = e(c(-q_to_f64(&epsp) / 2.0, 0.0));
            Ok((lhs - phase * shifted).norm())
        }
    }
}

/// One character of the family: numerator Psi (with global sign) over the denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyMember {
    pub m: i64,
    pub k1: i64,
    pub k2: i64,
    pub heart: Heart,
    pub sign: Sign,
    pub twisted: bool,
}

impl FamilyMember {
    pub fn id(&self) -> String {
        format!(
            "ch{}{} {}({},{})",
            self.sign,
            if self.twisted { "tw" } else { "" },
            self.heart,
            self.k1,
            self.k2
        )
    }

    pub fn psi(&self) -> Result<(PsiParams, i64)> {
        dd_psi(self.m, self.k1, self.k2, self.heart, self.sign, self.twisted)
    }

    fn key(&self) -> Result<(Q, Q, Q, Q)> {
        let (p, _) = self.psi()?;
        Ok((p.eps, p.eps_prime, p.j.min(p.k), p.j.max(p.k)))
    }
}

/// Character of the module for in-range (k1, k2) at (tau, z), as numerator over denominator.
#[allow(clippy::too_many_arguments)]
pub fn character_numeric(
    m: i64,
    k1: i64,
    k2: i64,
    heart: Heart,
    sign: Sign,
    twisted: bool,
    tau: Complex64,
    z: Complex64,
    bits: u32,
) -> Result<Complex64> {
    let (params, g) = dd_psi(m, k1, k2, heart, sign, twisted)?;
    let num = psi_numeric_with(&params, Point::diagonal(tau, z), abs_err(bits))?;
    let den = denominator_numeric(sign, Sector::from_twisted(twisted), tau, z, bits)?;
    if den.norm() < POLE_EPS {
        return Err(Error::PoleProximity { what: "denominator".into(), modulus: den.norm() });
    }
    Ok(num * g as f64 / den)
}

fn member_value(f: &FamilyMember, tau: Complex64, z: Complex64, bits: u32) -> Result<Complex64> {
    character_numeric(f.m, f.k1, f.k2, f.heart, f.sign, f.twisted, tau, z, bits)
}

/// (S f)(tau, z) = e(-c z^2 / (6 tau)) f(-1/tau, z/tau) with c = 6(1 - M)/M; (T f)(tau, z) = f(tau + 1, z).
fn transformed_value(f: &FamilyMember, which: Transform, tau: Complex64, z: Complex64, bits: u32) -> Result<Complex64> {
    match which {
        Transform::S => {
            let cc = 6.0 * (1.0 - f.m as f64) / f.m as f64;
            Ok(e(-cc * z * z / (tau * 6.0)) * member_value(f, -1.0 / tau, z / tau, bits)?)
        }
        Transform::T => member_value(f, tau + 1.0, z, bits),
    }
}

/// The character family closed under S and T: statement 1 collects the characters and
/// supercharacters of the untwisted modules together with the twisted
/// characters; statement 2 the twisted supercharacters. Members sharing a
/// numerator up to the symmetry Psi_{j,k} = Psi_{k,j} are kept once.
pub fn family(m: i64, statement: u8) -> Result<Vec<FamilyMember>> {
    if m < 1 {
        return Err(invalid("M must be positive"));
    }
    let kinds: &[(Sign, bool)] = match statement {
        1 => &[(Sign::Plus, false), (Sign::Minus, false), (Sign::Plus, true)],
        2 => &[(Sign::Minus, true)],
        _ => return Err(invalid(format!("statement must be 1 or 2, got {statement}"))),
    };
    let mut out: Vec<FamilyMember> = Vec::new();
    let mut seen = Vec::new();
    for &(sign, twisted) in kinds {
        for heart in [Heart::I, Heart::III] {
            for k1 in 0..m {
                for k2 in 0..m {
                    if !heart.admits(m, k1, k2) {
                        continue;
                    }
                    let f = FamilyMember { m, k1, k2, heart, sign, twisted };
                    let key = f.key()?;
                    if !seen.contains(&key) {
                        seen.push(key);
                        out.push(f);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Deterministic sample points: tau = (frac(n g1) - 1/2) + i (0.8 + 0.6 frac(n g2)),
/// z = 0.05 + 0.25 frac(n g3) + 0.1 i (frac(n g4) - 1/2), with g1..g4 the
/// fractional parts of the golden ratio, sqrt 2, sqrt 3 and sqrt 5.
pub fn default_point(n: usize) -> NumericPoint {
    let frac = |x: f64| x - x.floor();
    let n = n as f64 + 1.0;
    let g1 = 0.618_033_988_749_894_8;
    let g2 = 0.414_213_562_373_095_1;
    let g3 = 0.732_050_807_568_877_3;
    let g4 = 0.236_067_977_499_789_7;
    let tau = c(frac(n * g1) - 0.5, 0.8 + 0.6 * frac(n * g2));
    let z = c(0.05 + 0.25 * frac(n * g3), 0.1 * (frac(n * g4) - 0.5));
    Point::diagonal(tau, z)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointJson {
    pub tau: ComplexJson,
    pub z: ComplexJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanCertificate {
    pub transform: Transform,
    #[serde(rename = "M")]
    pub m: i64,
    pub statement: u8,
    pub family: Vec<String>,
    /// Indices into `family` of the independent members the fit is expressed in.
    pub basis: Vec<usize>,
    /// Row i: coefficients of the transform of member i over `basis`.
    pub coefficients: Vec<Vec<ComplexJson>>,
    pub residual: f64,
    pub tol: f64,
    pub passes: bool,
    pub condition_number: f64,
    pub points: Vec<PointJson>,
    pub precision_bits: u32,
}

impl SpanCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn coefficient(&self, i: usize, b: usize) -> Complex64 {
        let v = self.coefficients[i][b];
        c(v.re, v.im)
    }
}

/// Values of the family and of its transforms at one point, or None if the
/// point is too close to a pole of any of them.
fn sample(fam: &[FamilyMember], which: Transform, p: &NumericPoint, bits: u32) -> Result<Option<(Vec<Complex64>, Vec<Complex64>)>> {
    let mut a = Vec::with_capacity(fam.len());
    let mut b = Vec::with_capacity(fam.len());
    for f in fam {
        match (member_value(f, p.tau, p.z1, bits), transformed_value(f, which, p.tau, p.z1, bits)) {
            (Ok(x), Ok(y)) => {
                a.push(x);
                b.push(y);
            }
            (Err(Error::PoleProximity { .. }), _) | (_, Err(Error::PoleProximity { .. })) => return Ok(None),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(Some((a, b)))
}

fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    s
}

/// Greedy choice of columns that stay well conditioned.
fn independent_columns(a: &DMatrix<Complex64>) -> Vec<usize> {
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..a.ncols() {
        let mut trial = basis.clone();
        trial.push(i);
        let sub = a.select_columns(&trial);
        let s = singular_values(&sub);
        if s[0] > 0.0 && s[s.len() - 1] / s[0] > RANK_CUTOFF {
            basis = trial;
        }
    }
    basis
}

/// Fits the transform of every family member as a combination of the family
/// and reports the largest pointwise misfit.
pub fn span_closure(
    m: i64,
    statement: u8,
    which: Transform,
    points: Option<&[NumericPoint]>,
    tol: f64,
    bits: u32,
) -> Result<SpanCertificate> {
    let fam = family(m, statement)?;
    let needed = OVERSAMPLING * fam.len();
    let rows: Vec<(NumericPoint, Vec<Complex64>, Vec<Complex64>)> = match points {
        Some(pts) => {
            if pts.len() < needed {
                return Err(invalid(format!(
                    "{} points given, {needed} needed for {} members with {OVERSAMPLING}x oversampling",
                    pts.len(),
                    fam.len()
                )));
            }
            let mut rows = Vec::new();
            for p in pts {
                check_point(p, DEFAULT_IM_TAU_FLOOR)?;
                match sample(&fam, which, p, bits)? {
                    Some((a, b)) => rows.push((*p, a, b)),
                    None => {
                        return Err(Error::PoleProximity {
                            what: format!("family member at tau={}, z={}", p.tau, p.z1),
                            modulus: 0.0,
                        })
                    }
                }
            }
            rows
        }
        None => {
            let mut rows = Vec::new();
            let mut n = 0;
            while rows.len() < needed {
                let batch: Vec<NumericPoint> = (n..n + needed).map(default_point).collect();
                n += needed;
                let sampled: Vec<_> = batch
                    .par_iter()
                    .map(|p| sample(&fam, which, p, bits).map(|r| r.map(|(a, b)| (*p, a, b))))
                    .collect::<Result<_>>()?;
                rows.extend(sampled.into_iter().flatten());
                if n > 100 * needed {
                    return Err(Error::TruncationCap("could not find pole-free sample points".into()));
                }
            }
            rows.truncate(needed);
            rows
        }
    };
    let np = rows.len();
    let nf = fam.len();
    let a = DMatrix::from_fn(np, nf, |r, i| rows[r].1[i]);
    let b = DMatrix::from_fn(np, nf, |r, i| rows[r].2[i]);
    let basis = independent_columns(&a);
    let ab = a.select_columns(&basis);
    let s = singular_values(&ab);
    let cond = s[0] / s[s.len() - 1];
    if !(cond < MAX_CONDITION) {
        return Err(Error::IllConditioned(cond));
    }
    let coeffs = ab
        .clone()
        .svd(true, true)
        .solve(&b, 0.0)
        .map_err(|e| invalid(format!("least squares failed: {e}")))?;
    let fit = &ab * &coeffs;
    let residual = (0..np)
        .flat_map(|r| (0..nf).map(move |i| (r, i)))
        .map(|(r, i)| (fit[(r, i)] - b[(r, i)]).norm())
        .fold(0.0, f64::max);
    Ok(SpanCertificate {
        transform: which,
        m,
        statement,
        family: fam.iter().map(|f| f.id()).collect(),
        coefficients: (0..nf)
            .map(|i| (0..basis.len()).map(|k| coeffs[(k, i)].into()).collect())
            .collect(),
        basis,
        residual,
        tol,
        passes: residual < tol,
        condition_number: cond,
        points: rows
            .iter()
            .map(|(p, _, _)| PointJson { tau: p.tau.into(), z: p.z1.into() })
            .collect(),
        precision_bits: bits,
    })
}

/// Expected T-coefficients when the family is independent: member A maps to
/// the member B with the same Psi indices and eps shifted by eps', with
/// coefficient (g_A / g_B) e(jk/M + eps'/2).
pub fn predicted_t_coefficients(m: i64, statement: u8) -> Result<DMatrix<Complex64>> {
    let fam = family(m, statement)?;
    let n = fam.len();
    let mut out = DMatrix::from_element(n, n, c(0.0, 0.0));
    for (ia, fa) in fam.iter().enumerate() {
        let (pa, ga) = fa.psi()?;
        let target = (add_half(pa.eps, pa.eps_prime), pa.eps_prime, pa.j.min(pa.k), pa.j.max(pa.k));
        let ib = fam
            .iter()
            .position(|f| f.key().ok() == Some(target))
            .ok_or_else(|| invalid(format!("no T-partner for {}", fa.id())))?;
        let (_, gb) = fam[ib].psi()?;
        let phase = q_to_f64(&(pa.j * pa.k / m)) + q_to_f64(&pa.eps_prime) / 2.0;
        out[(ia, ib)] = e(c(phase, 0.0)) * (ga as f64 / gb as f64);
    }
    Ok(out)
}

/// Largest deviation of a T certificate's coefficients from the predicted
/// phases; None when the fit used a reduced basis.
pub fn t_phase_deviation(cert: &SpanCertificate) -> Result<Option<f64>> {
    if cert.transform != Transform::T || cert.basis.len() != cert.family.len() {
        return Ok(None);
    }
    let pred = predicted_t_coefficients(cert.m, cert.statement)?;
    let mut worst: f64 = 0.0;
    for i in 0..cert.family.len() {
        for k in 0..cert.basis.len() {
            worst = worst.max((cert.coefficient(i, k) - pred[(i, cert.basis[k])]).norm());
        }
    }
    Ok(Some(worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        assert_eq!(family(1, 1).unwrap().len(), 3);
        assert_eq!(family(1, 2).unwrap().len(), 1);
        assert_eq!(family(2, 1).unwrap().len(), 9);
        assert_eq!(family(2, 2).unwrap().len(), 3);
        assert_eq!(family(3, 1).unwrap().len(), 18);
        assert_eq!(family(3, 2).unwrap().len(), 6);
    }

    #[test]
    fn t_law_phase_example() {
        let p = PsiParams::new(3, qi(1), qi(2), qi(0), qi(0)).unwrap();
        let pt = Point::new(c(0.17, 0.93), c(0.11, 0.02), c(-0.23, 0.05), c(0.0, 0.0));
        assert!(psi_t_residual(&p, &pt, 52).unwrap() < 1e-9);
    }

    #[test]
    fn m1_character_is_one() {
        let v = character_numeric(1, 0, 0, Heart::I, Sign::Plus, false, c(0.1, 0.9), c(0.13, 0.02), 52).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
    }
}
