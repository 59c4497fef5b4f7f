//! Named identity suites. Each case is an independent check with a pass/fail
//! outcome and a one-line detail; cases run in parallel and are reported in a
//! fixed order.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{
    central_charge, character_ratio, character_series, dd_numerator, denominator, denominator_three_over_one,
    h_s_values, index_set, nice_k2, nice_numerator, nice_param_to_j, reduction_hs, vanishes, CharacterSpec, Heart,
    ReductionParams, Sector, Sign,
};
use crate::error::Result;
use crate::modular::{
    character_numeric, default_point, denominator_numeric, denominator_transform_residual, psi_s_residual,
    psi_t_residual, span_closure, t_phase_deviation, NumericPoint, Transform,
};
use crate::psi::{
    phi1_numeric_with, product, psi_diag_ratio, psi_numeric_with, psi_on_diagonal, to_order, Point, PsiParams,
};
use crate::rational::{fmt_q, q, qi, GaussianRational, Q};
use crate::ratio::SeriesRatio;
use crate::series::{JacobiSeries, QOrder, XWindow};
use crate::theta::{eta, eta_numeric, eta_scaled, theta_at, theta_numeric, theta_product, theta_sum, ThetaLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub q_order: String,
    pub tol: f64,
    pub precision_bits: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
    pub wall_time_ms: u128,
    pub config: SuiteConfig,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub q_order: Q,
    pub tol: f64,
    pub precision_bits: u32,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            q_order: qi(8),
            tol: 1e-9,
            precision_bits: crate::modular::DEFAULT_PRECISION_BITS,
        }
    }
}

pub const SUITES: [&str; 5] = ["theta", "psi", "characters", "reduction", "modular"];

type Check = Box<dyn Fn() -> Result<(bool, String)> + Send + Sync>;

struct Cases(Vec<(String, Check)>);

impl Cases {
    fn new() -> Self {
        Self(Vec::new())
    }

    fn add(&mut self, id: impl Into<String>, f: impl Fn() -> Result<(bool, String)> + Send + Sync + 'static) {
        self.0.push((id.into(), Box::new(f)));
    }

    fn run(self, suite: &str, cfg: &Config) -> SuiteReport {
        let start = Instant::now();
        let cases = self
            .0
            .into_par_iter()
            .map(|(id, f)| {
                let (status, detail) = match f() {
                    Ok((true, d)) => (Status::Pass, d),
                    Ok((false, d)) => (Status::Fail, d),
                    Err(e) => (Status::Fail, format!("error: {e}")),
                };
                CaseResult { id, status, detail }
            })
            .collect();
        SuiteReport {
            suite: suite.into(),
            cases,
            wall_time_ms: start.elapsed().as_millis(),
            config: SuiteConfig {
                q_order: fmt_q(&cfg.q_order),
                tol: cfg.tol,
                precision_bits: cfg.precision_bits,
            },
        }
    }
}

pub fn run_suite(name: &str, cfg: &Config) -> Option<SuiteReport> {
    let cases = match name {
        "theta" => theta_cases(cfg),
        "psi" => psi_cases(cfg),
        "characters" => character_cases(cfg),
        "reduction" => reduction_cases(),
        "modular" => modular_cases(cfg),
        _ => return None,
    };
    Some(cases.run(name, cfg))
}

fn exact(equal: bool, order: Q) -> (bool, String) {
    (equal, format!("exact to q^{order}"))
}

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

/// theta_L(m tau, k z + r tau)
fn th(label: ThetaLabel, m: i64, k: i64, r: Q, order: Q) -> Result<JacobiSeries> {
    theta_at(label, m, k, r, qi(0), order)
}

/// Checks c q^a x^b prod(lhs) = prod(rhs) to `order`.
fn product_identity<L, R>(order: Q, lhs: L, (c, a, b): (GaussianRational, Q, Q), rhs: R) -> Result<(bool, String)>
where
    L: Fn(Q) -> Result<Vec<JacobiSeries>>,
    R: Fn(Q) -> Result<Vec<JacobiSeries>>,
{
    let l = to_order(order, |o| Ok(product(&lhs(o)?)?.scale_monomial(&c, a, b)))?;
    let r = to_order(order, |o| product(&rhs(o)?))?;
    Ok(exact(l.equal_to_order(&r, order)?, order))
}

/// Compares two ratios to `order`, raising the build order until their cross
/// products reach it.
pub fn ratios_equal<F>(order: Q, build: F) -> Result<bool>
where
    F: Fn(Q) -> Result<(SeriesRatio, SeriesRatio)>,
{
    let mut at = order;
    for _ in 0..16 {
        let (a, b) = build(at)?;
        match a.cross_order(&b)? {
            QOrder::Finite(got) if got < order => at += order - got,
            _ => return a.cross_equal(&b, order),
        }
    }
    Err(crate::Error::TruncationCap(format!("could not reach q-order {order}")))
}

fn theta_cases(cfg: &Config) -> Cases {
    use ThetaLabel::*;
    let order = cfg.q_order;
    let mut cs = Cases::new();
    let one = || (g(1, 0), qi(0), qi(0));
    for label in ThetaLabel::ALL {
        cs.add(format!("product = sum {label}"), move || {
            Ok(exact(theta_product(label, order).equal_to_order(&theta_sum(label, order), order)?, order))
        });
        cs.add(format!("parity {label}"), move || {
            let t = theta_product(label, order);
            let expected = if label == T11 { t.neg() } else { t.clone() };
            Ok(exact(t.subst_negate_z().equal_to_order(&expected, order)?, order))
        });
    }
    // theta_a(tau, z + tau/2) = c q^(-1/8) x^(-1/2) theta_b(tau, z)
    for (a, b, c) in [(T00, T10, g(1, 0)), (T01, T11, g(0, -1)), (T10, T00, g(1, 0)), (T11, T01, g(0, -1))] {
        cs.add(format!("half-period shift {a}"), move || {
            product_identity(order, |o| Ok(vec![th(b, 1, 1, qi(0), o)?]), (c.clone(), q(-1, 8), q(-1, 2)), |o| {
                Ok(vec![th(a, 1, 1, q(1, 2), o)?])
            })
        });
    }
    // theta_a theta_b (2 tau, z +- tau/2) eta(tau) = c q^(-1/8) x^(-+1/2) eta(2 tau)^2 theta_d(tau, z)
    for (r, xs, c2) in [(q(1, 2), q(-1, 2), g(0, -1)), (q(-1, 2), q(1, 2), g(0, 1))] {
        for (a, b, d, c) in [(T00, T10, T00, g(1, 0)), (T01, T11, T01, c2.clone())] {
            cs.add(format!("doubling shifted {a}*{b} at z{}tau/2", if r > qi(0) { "+" } else { "-" }), move || {
                product_identity(
                    order,
                    |o| Ok(vec![eta_scaled(2, o)?.pow(2)?, th(d, 1, 1, qi(0), o)?]),
                    (c.clone(), q(-1, 8), xs),
                    |o| Ok(vec![th(a, 2, 1, r, o)?, th(b, 2, 1, r, o)?, eta(o)]),
                )
            });
        }
    }
    // theta_a theta_b (tau, z) eta(2 tau) = eta(tau)^2 theta_d(2 tau, 2z)
    for (a, b, d) in [(T00, T01, T01), (T10, T11, T11)] {
        cs.add(format!("duplication {a}*{b}"), move || {
            product_identity(
                order,
                |o| Ok(vec![eta(o).pow(2)?, th(d, 2, 2, qi(0), o)?]),
                one(),
                |o| Ok(vec![th(a, 1, 1, qi(0), o)?, th(b, 1, 1, qi(0), o)?, eta_scaled(2, o)?]),
            )
        });
    }
    // theta_a theta_b (2 tau, z) eta(tau) = eta(2 tau)^2 theta_d(tau, z)
    for (a, b, d) in [(T00, T10, T10), (T01, T11, T11)] {
        cs.add(format!("halving {a}*{b}"), move || {
            product_identity(
                order,
                |o| Ok(vec![eta_scaled(2, o)?.pow(2)?, th(d, 1, 1, qi(0), o)?]),
                one(),
                |o| Ok(vec![th(a, 2, 1, qi(0), o)?, th(b, 2, 1, qi(0), o)?, eta(o)]),
            )
        });
    }
    // theta_a(2 tau, z + tau) = c q^(-1/4) x^(-1/2) theta_b(2 tau, z)
    for (a, b, c) in [(T00, T10, g(1, 0)), (T01, T11, g(0, -1)), (T10, T00, g(1, 0)), (T11, T01, g(0, -1))] {
        cs.add(format!("period shift at 2tau {a}"), move || {
            product_identity(order, |o| Ok(vec![th(b, 2, 1, qi(0), o)?]), (c.clone(), q(-1, 4), q(-1, 2)), |o| {
                Ok(vec![th(a, 2, 1, qi(1), o)?])
            })
        });
    }
    cs.add("quadruple product", move || {
        product_identity(
            order,
            |o| Ok(vec![eta(o).pow(3)?, th(T11, 1, 2, qi(0), o)?]),
            one(),
            |o| ThetaLabel::ALL.iter().map(|l| th(*l, 1, 1, qi(0), o)).collect(),
        )
    });
    for (shift, sign) in [(q(1, 2), -1), (q(-1, 2), 1)] {
        cs.add(format!("theta11 at z{}1/2", if sign < 0 { "+" } else { "-" }), move || {
            let l = theta_at(T11, 1, 1, qi(0), shift, order)?;
            let r = theta_product(T10, order).scale(&g(sign, 0));
            Ok(exact(l.equal_to_order(&r, order)?, order))
        });
    }
    cs.add("theta00 S-law smoke", || {
        let tau = Complex64::new(0.3, 0.7);
        let z = Complex64::new(0.1, 0.0);
        let lhs = theta_numeric(T00, -1.0 / tau, z / tau, 1e-16)?;
        let i_pi = Complex64::new(0.0, std::f64::consts::PI);
        let rhs = (-Complex64::i() * tau).sqrt() * (i_pi * z * z / tau).exp() * theta_numeric(T00, tau, z, 1e-16)?;
        let r = (lhs - rhs).norm();
        Ok((r < 1e-12, format!("residual {r:.2e}")))
    });
    cs.add("eta numeric vs series", || {
        let tau = Complex64::new(0.0, 1.0);
        let r = (eta(qi(40)).eval_numeric(tau, Complex64::new(0.0, 0.0)) - eta_numeric(tau, 1e-16)?).norm();
        Ok((r < 1e-12, format!("residual {r:.2e}")))
    });
    cs
}

/// Generic points (tau, z1, z2, t) for two-variable checks.
pub fn generic_point(n: usize, t: Complex64) -> NumericPoint {
    let base = default_point(n);
    let frac = |x: f64| x - x.floor();
    let nf = n as f64 + 1.0;
    let z2 = Complex64::new(-0.07 - 0.2 * frac(nf * 0.302_775_637_731_994_6), 0.08 * (frac(nf * 0.645_751_311_064_590_6) - 0.5));
    Point::new(base.tau, base.z1, z2, t)
}

fn worst(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut w: f64 = 0.0;
    for v in values {
        w = w.max(v?);
    }
    Ok(w)
}

fn below(r: f64, tol: f64) -> (bool, String) {
    (r < tol, format!("max residual {r:.2e} (tol {tol:.0e})"))
}

fn halves() -> [Q; 2] {
    [qi(0), q(1, 2)]
}

fn psi_cases(cfg: &Config) -> Cases {
    let tol = cfg.tol;
    let bits = cfg.precision_bits;
    let err = crate::modular::abs_err(bits);
    let mut cs = Cases::new();
    let pts: Vec<NumericPoint> = (0..5).map(|n| generic_point(n, Complex64::new(0.0, 0.0))).collect();
    for m in 1..=4i64 {
        for eps in halves() {
            for epsp in halves() {
                let pts = pts.clone();
                let id = format!("Psi symmetries M={m} eps={eps} eps'={epsp}");
                cs.add(id, move || {
                    let mut r: f64 = 0.0;
                    for (j0, k0) in [(0, 0), (1, -1), (-1, 2)] {
                        let (j, k) = (epsp + j0, epsp + k0);
                        let psi = |j: Q, k: Q, p: Point| psi_numeric_with(&PsiParams::new(m, j, k, eps, epsp)?, p, err);
                        for p in &pts {
                            let neg = Point::new(p.tau, -p.z1, -p.z2, p.t);
                            let swap = Point::new(p.tau, p.z2, p.z1, p.t);
                            let base = psi(j, k, *p)?;
                            for (a, b) in [(1i64, 0i64), (0, 1), (-1, 2)] {
                                let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ((a - b) as f64) * crate::rational::q_to_f64(&eps));
                                r = r.max((psi(j + a * m, k + b * m, *p)? - phase * base).norm());
                            }
                            r = r.max((psi(j, k, neg)? + psi(-k, -j, swap)?).norm());
                            r = r.max((psi(j, k, swap)? - psi(k, j, *p)?).norm());
                            r = r.max((psi(j, k, neg)? + psi(-j, -k, *p)?).norm());
                        }
                    }
                    Ok(below(r, tol))
                });
            }
        }
    }
    for m in 1..=4i64 {
        for eps in halves() {
            for epsp in halves() {
                let pts = pts.clone();
                cs.add(format!("diagonal series vs numeric M={m} eps={eps} eps'={epsp}"), move || {
                    let order = qi(12);
                    let mut r: f64 = 0.0;
                    for j0 in [-1i64, 0, 1] {
                        let j = epsp + j0;
                        let params = PsiParams::new(m, j, j, eps, epsp)?;
                        let ratio = psi_diag_ratio(&params, order)?;
                        let general = psi_on_diagonal(&params, order)?;
                        let (same, _) = ratio.cross_equal_max(&general)?;
                        if !same {
                            return Ok((false, format!("three-theta and eta forms differ at j={j}")));
                        }
                        for p in &pts {
                            let (tau, z) = (p.tau, p.z1);
                            let series = ratio.num.eval_numeric(tau, z) / ratio.den.eval_numeric(tau, z);
                            let direct = psi_numeric_with(&params, Point::diagonal(tau, z), err)?;
                            r = r.max((series - direct).norm());
                        }
                    }
                    Ok(below(r, 1e-10))
                });
            }
        }
    }
    cs.add("Phi s-independence and symmetry", move || {
        let mut r: f64 = 0.0;
        for n in 0..5 {
            let p = generic_point(n, Complex64::new(0.05, 0.01));
            let a = phi1_numeric_with(p, err)?;
            let swapped = phi1_numeric_with(Point::new(p.tau, p.z2, p.z1, p.t), err)?;
            let psi = psi_numeric_with(&PsiParams::new(1, qi(0), qi(0), qi(0), qi(0))?, p, err)?;
            r = r.max((a - swapped).norm()).max((a - psi).norm());
        }
        Ok(below(r, tol))
    });
    cs
}

/// Reference forms of the M = 2 characters as eta/theta quotients.
pub fn m2_closed_form(j: Q, sector: Sector, sign: Sign, order: Q) -> Result<SeriesRatio> {
    use ThetaLabel::*;
    let eta_ratio_num = |o| eta_scaled(2, o)?.pow(3);
    let (c, n2, n1, d2, d_last, shift): (GaussianRational, ThetaLabel, ThetaLabel, ThetaLabel, ThetaLabel, Q) =
        match (sector, sign) {
            (Sector::NS, Sign::Plus) => (g(0, 1), T00, T00, T10, T11, j),
            (Sector::NS, Sign::Minus) => (g(if j > qi(0) { 1 } else { -1 }, 0), T01, T01, T11, T11, j),
            (Sector::Ramond, Sign::Plus) if j == qi(0) => (g(1, 0), T00, T10, T10, T01, qi(0)),
            (Sector::Ramond, Sign::Minus) if j == qi(0) => (g(1, 0), T01, T11, T11, T01, qi(0)),
            (Sector::Ramond, Sign::Plus) => (g(1, 0), T10, T10, T00, T01, qi(0)),
            (Sector::Ramond, Sign::Minus) => (g(-1, 0), T11, T11, T01, T01, qi(0)),
        };
    let num = to_order(order, |o| {
        Ok(product(&[eta_ratio_num(o)?, th(n2, 2, 1, shift, o)?, th(n1, 1, 1, qi(0), o)?])?.scale(&c))
    })?;
    let den = to_order(order, |o| product(&[eta(o).pow(3)?, th(d2, 2, 1, shift, o)?, th(d_last, 2, 2, qi(0), o)?]))?;
    Ok(SeriesRatio::new(num, den))
}

fn one_ratio() -> SeriesRatio {
    SeriesRatio::new(JacobiSeries::one(), JacobiSeries::one())
}

/// Expected lowest q-level of the M = 2 characters in a window, as (x-exponent, coefficient).
pub fn m2_leading_level(j: Q, sector: Sector, sign: Sign, window: XWindow) -> Vec<(Q, GaussianRational)> {
    let mut out = Vec::new();
    match sector {
        Sector::NS => {
            // x^s / (1 - x^-2) expanded in descending powers, s = 2j/M - 1.
            let mut e = j - 1;
            while e >= window.lo {
                if e <= window.hi {
                    out.push((e, g(1, 0)));
                }
                e -= 2;
            }
        }
        Sector::Ramond if j == qi(0) => out.push((qi(0), g(1, 0))),
        Sector::Ramond => {
            let mid = if sign == Sign::Plus { 2 } else { -2 };
            for (e, c) in [(qi(-1), 1), (qi(0), mid), (qi(1), 1)] {
                if window.contains(e) {
                    out.push((e, g(c, 0)));
                }
            }
        }
    }
    out.sort_by_key(|a| a.0);
    out
}

fn character_cases(cfg: &Config) -> Cases {
    let order = cfg.q_order;
    let mut cs = Cases::new();
    let both_signs = [Sign::Plus, Sign::Minus];
    let sectors = [Sector::NS, Sector::Ramond];
    for sector in sectors {
        for sign in both_signs {
            cs.add(format!("M=1 {sector}{sign} character is 1"), move || {
                let spec = CharacterSpec::new(1, index_set(1, sector)[0], sector, sign)?;
                Ok(exact(ratios_equal(order, |o| Ok((character_ratio(&spec, o)?, one_ratio())))?, order))
            });
            cs.add(format!("denominator forms {sector}{sign}"), move || {
                let eq = ratios_equal(order, |o| Ok((denominator(sign, sector, o)?, denominator_three_over_one(sign, sector, o)?)))?;
                Ok(exact(eq, order))
            });
            cs.add(format!("denominator half shift {sector}{sign}"), move || {
                let other = if sign == Sign::Plus { Sign::Minus } else { Sign::Plus };
                let eq = ratios_equal(order, |o| {
                    let a = denominator(sign, sector, o)?;
                    let shifted = SeriesRatio::new(a.num.subst_shift_z(qi(0), q(1, 2))?, a.den.subst_shift_z(qi(0), q(1, 2))?);
                    Ok((shifted, denominator(other, sector, o)?))
                })?;
                Ok(exact(eq, order))
            });
        }
    }
    for m in 1..=5i64 {
        for twisted in [false, true] {
            cs.add(format!("numerator = denominator x character M={m} {}", if twisted { "R" } else { "NS" }), move || {
                let mut n = 0;
                for heart in [Heart::I, Heart::III] {
                    for k1 in 0..m {
                        if nice_k2(m, k1, heart).is_err() {
                            continue;
                        }
                        for sign in [Sign::Plus, Sign::Minus] {
                            let j = nice_param_to_j(m, k1, heart, twisted)?;
                            let spec = CharacterSpec::new(m, j, Sector::from_twisted(twisted), sign)?;
                            let eq = ratios_equal(order, |o| {
                                let num = nice_numerator(m, k1, heart, sign, twisted, o)?;
                                Ok((num, denominator(sign, spec.sector, o)?.mul(&character_ratio(&spec, o)?)?))
                            })?;
                            if !eq {
                                return Ok((false, format!("mismatch at heart {heart} k1={k1} sign {sign}")));
                            }
                            n += 1;
                        }
                    }
                }
                Ok((true, format!("{n} cases exact to q^{order}")))
            });
        }
    }
    for m in 1..=4i64 {
        cs.add(format!("general numerator reduces to nice case M={m}"), move || {
            let mut n = 0;
            for heart in [Heart::I, Heart::III] {
                for twisted in [false, true] {
                    for k1 in 0..m {
                        let Ok(k2) = nice_k2(m, k1, heart) else { continue };
                        for sign in [Sign::Plus, Sign::Minus] {
                            let eq = ratios_equal(order, |o| {
                                Ok((nice_numerator(m, k1, heart, sign, twisted, o)?, dd_numerator(m, k1, k2, heart, sign, twisted, o)?))
                            })?;
                            if !eq {
                                return Ok((false, format!("mismatch at heart {heart} k1={k1}")));
                            }
                            n += 1;
                        }
                    }
                }
            }
            Ok((true, format!("{n} cases exact to q^{order}")))
        });
    }
    for sector in sectors {
        for sign in both_signs {
            for j in index_set(2, sector) {
                cs.add(format!("M=2 closed form {sector}{sign} j={j}"), move || {
                    let spec = CharacterSpec::new(2, j, sector, sign)?;
                    let eq = ratios_equal(order, |o| Ok((character_ratio(&spec, o)?, m2_closed_form(j, sector, sign, o)?)))?;
                    Ok(exact(eq, order))
                });
                cs.add(format!("M=2 leading term {sector}{sign} j={j}"), move || {
                    let spec = CharacterSpec::new(2, j, sector, sign)?;
                    let window = XWindow::new(qi(-8), qi(4))?;
                    let lead = crate::characters::leading_exponent(&spec);
                    let s = character_series(&spec, lead + q(1, 2), window)?;
                    let got = s.level(lead);
                    let want = m2_leading_level(j, sector, sign, window);
                    Ok((got == want, format!("q^{lead}: {} terms in window [-8, 4]", got.len())))
                });
            }
        }
    }
    for m in 1..=6i64 {
        cs.add(format!("leading exponent -c/24 + h M={m}"), move || {
            let mut n = 0;
            for sector in sectors {
                for sign in both_signs {
                    for j in index_set(m, sector) {
                        let spec = CharacterSpec::new(m, j, sector, sign)?;
                        let (h, _) = h_s_values(&spec)?;
                        let expected = -central_charge(m) / 24 + h;
                        let window = XWindow::new(qi(-2 * m), qi(2 * m))?;
                        let s = character_series(&spec, expected + q(1, 2), window)?;
                        if s.valuation() != Some(expected) {
                            return Ok((false, format!("j={j} {sector}{sign}: got {:?}", s.valuation())));
                        }
                        n += 1;
                    }
                }
            }
            Ok((true, format!("{n} characters")))
        });
    }
    cs
}

/// Closed forms of (h, s) and (h^tw, s^tw) for m = 1, m2 = 0, 2k1 + k2 = M - 1.
pub fn nice_case_closed_form(m: i64, k1: i64, heart: Heart, twisted: bool) -> (Q, Q) {
    let k = qi(k1);
    let half = q(1, 2);
    match (twisted, heart) {
        (false, Heart::I) => ((k + half) * (k + half) / m + q(1, 4 * m) - half, (k * 2 + 1) / m - 1),
        (false, _) => ((k + half) * (k + half) / m + q(1, 4 * m) - half, -(k * 2 + 1) / m - 1),
        (true, Heart::I) => (k * k / m + q(1, 4 * m) - q(1, 4), -k * 2 / m),
        (true, _) => ((k + 1) * (k + 1) / m + q(1, 4 * m) - q(1, 4), (k + 1) * 2 / m),
    }
}

/// The pairing of Lambda + rho with alpha_0 that decides vanishing.
pub fn alpha0_pairing(p: &ReductionParams) -> Q {
    let r = q(p.m, p.m_big);
    match p.heart {
        Heart::I | Heart::III => -r * (2 * p.k1 + p.k2 + 1) + p.m2 + 1,
        Heart::II | Heart::IV => r * (2 * p.k1 + p.k2 - 1) - p.m2 - 1,
    }
}

fn reduction_cases() -> Cases {
    let mut cs = Cases::new();
    cs.add("nice-case closed forms M<=9", || {
        let mut n = 0;
        for m in 1..=9i64 {
            for heart in [Heart::I, Heart::III] {
                for k1 in 0..m {
                    let Ok(k2) = nice_k2(m, k1, heart) else { continue };
                    for twisted in [false, true] {
                        let p = ReductionParams::new(m, 1, 0, k1, k2, heart, twisted)?;
                        let want = nice_case_closed_form(m, k1, heart, twisted);
                        if reduction_hs(&p)? != want {
                            return Ok((false, format!("M={m} k1={k1} {heart} tw={twisted}")));
                        }
                        let j = nice_param_to_j(m, k1, heart, twisted)?;
                        let spec = CharacterSpec::new(m, j, Sector::from_twisted(twisted), Sign::Plus)?;
                        if h_s_values(&spec)? != want {
                            return Ok((false, format!("j={j} disagrees with (h, s) at M={m}")));
                        }
                        n += 1;
                    }
                }
            }
        }
        Ok((true, format!("{n} parameter sets")))
    });
    cs.add("equivalent pairs M<=7 m<=3", || {
        let mut n = 0;
        for m_big in 1..=7i64 {
            for m in 1..=3i64 {
                for twisted in [false, true] {
                    for p in ReductionParams::enumerate(m_big, m, twisted) {
                        let partner = match p.heart {
                            Heart::I if 2 * p.k1 + p.k2 <= m_big - 2 => Heart::IV,
                            Heart::III if 2 * p.k1 + p.k2 <= m_big - 2 => Heart::II,
                            _ => continue,
                        };
                        let other = ReductionParams::new(m_big, m, p.m2, p.k1 + 1, p.k2, partner, twisted)?;
                        if reduction_hs(&p)? != reduction_hs(&other)? {
                            return Ok((false, format!("{p:?}")));
                        }
                        n += 1;
                    }
                }
            }
        }
        Ok((true, format!("{n} pairs")))
    });
    cs.add("vanishing criterion M<=6 m<=3", || {
        let mut n = 0;
        for m_big in 1..=6i64 {
            for m in 1..=3i64 {
                for p in ReductionParams::enumerate(m_big, m, false) {
                    let pairing = alpha0_pairing(&p);
                    let natural = pairing.is_integer() && pairing >= qi(1);
                    if vanishes(&p) != natural {
                        return Ok((false, format!("{p:?}: pairing {pairing}")));
                    }
                    n += 1;
                }
            }
        }
        Ok((true, format!("{n} parameter sets")))
    });
    cs.add("central charge", || {
        Ok((
            central_charge(1) == qi(0) && central_charge(2) == qi(-3) && central_charge(3) == qi(-4),
            "M=1,2,3".into(),
        ))
    });
    cs
}

fn modular_cases(cfg: &Config) -> Cases {
    let tol = cfg.tol;
    let bits = cfg.precision_bits;
    let mut cs = Cases::new();
    let pts: Vec<NumericPoint> = (0..5).map(|n| generic_point(n, Complex64::new(0.03, 0.01))).collect();
    for m in 1..=3i64 {
        for which in [Transform::S, Transform::T] {
            let pts = pts.clone();
            cs.add(format!("Psi {which:?}-law M={m}"), move || {
                let mut checks = Vec::new();
                for eps in halves() {
                    for epsp in halves() {
                        for (j0, k0) in [(0, 0), (0, 1), (1, 2)] {
                            let params = PsiParams::new(m, epsp + j0, epsp + k0, eps, epsp)?;
                            for p in &pts {
                                checks.push(match which {
                                    Transform::S => psi_s_residual(&params, p, bits),
                                    Transform::T => psi_t_residual(&params, p, bits),
                                });
                            }
                        }
                    }
                }
                Ok(below(worst(checks)?, tol))
            });
        }
    }
    for sector in [Sector::NS, Sector::Ramond] {
        for sign in [Sign::Plus, Sign::Minus] {
            for which in [Transform::S, Transform::T] {
                let pts = pts.clone();
                cs.add(format!("denominator {which:?}-law {sector}{sign}"), move || {
                    Ok(below(worst(pts.iter().map(|p| denominator_transform_residual(sign, sector, which, p, bits)))?, tol))
                });
            }
        }
    }
    cs.add("denominator odd in z", move || {
        let mut r: f64 = 0.0;
        for n in 0..5 {
            let p = default_point(n);
            let (tau, z) = (p.tau, p.z1);
            let v = denominator_numeric(Sign::Plus, Sector::NS, tau, z, bits)?;
            let back = denominator_numeric(Sign::Plus, Sector::NS, tau, -z, bits)?;
            r = r.max((back + v).norm());
        }
        Ok(below(r, 1e-8))
    });
    cs.add("M=2 closed form numeric", move || {
        let mut r: f64 = 0.0;
        for n in 0..5 {
            let p = default_point(n);
            let (tau, z) = (p.tau, p.z1);
            let err = crate::modular::abs_err(bits);
            let eta_q = eta_numeric(tau * 2.0, err)? / eta_numeric(tau, err)?;
            let w = z + tau / 2.0;
            let closed = Complex64::i() * eta_q.powi(3) * theta_numeric(ThetaLabel::T00, tau * 2.0, w, err)?
                * theta_numeric(ThetaLabel::T00, tau, z, err)?
                / (theta_numeric(ThetaLabel::T10, tau * 2.0, w, err)? * theta_numeric(ThetaLabel::T11, tau * 2.0, z * 2.0, err)?);
            let direct = character_numeric(2, 0, 1, Heart::I, Sign::Plus, false, tau, z, bits)?;
            r = r.max((closed - direct).norm());
        }
        Ok(below(r, 1e-10))
    });
    for m in 1..=3i64 {
        for statement in [1u8, 2] {
            for which in [Transform::S, Transform::T] {
                cs.add(format!("span closure M={m} statement {statement} {which:?}"), move || {
                    let cert = span_closure(m, statement, which, None, 1e-7, bits)?;
                    let mut detail = format!(
                        "residual {:.2e}, {} members, basis {}, cond {:.1e}",
                        cert.residual,
                        cert.family.len(),
                        cert.basis.len(),
                        cert.condition_number
                    );
                    let mut ok = cert.passes;
                    if let Some(dev) = t_phase_deviation(&cert)? {
                        detail.push_str(&format!(", phase deviation {dev:.1e}"));
                        ok &= dev < 1e-6;
                    }
                    Ok((ok, detail))
                });
            }
        }
    }
    cs
}
