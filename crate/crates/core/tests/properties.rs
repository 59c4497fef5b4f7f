use num_complex::Complex64;
use proptest::prelude::*;

use n4char::psi::{psi_numeric_with, Point, PsiParams};
use n4char::rational::{q, qi};
use n4char::theta::{theta_at, theta_product, ThetaLabel};
use n4char::{GaussianRational, JacobiSeries, QOrder, XWindow};

/// Small series on the lattice (1/2)Z x (1/2)Z with q-exponents in [0, 3)
/// and x-exponents in [-2, 2], trusted below q^order.
fn series() -> impl Strategy<Value = JacobiSeries> {
    let term = (0i64..6, -4i64..=4, -3i64..=3, -3i64..=3);
    (prop::collection::vec(term, 0..6), 4i64..8, any::<bool>()).prop_map(|(terms, order, exact)| {
        let terms = terms.into_iter().map(|(a, b, re, im)| (q(a, 2), q(b, 2), GaussianRational::from_ints(re, im)));
        let order = if exact { QOrder::Exact } else { QOrder::Finite(q(order, 2)) };
        JacobiSeries::from_terms(terms, order)
    })
}

/// Series with a nonzero constant level 1 + c x^k and random higher levels.
fn invertible() -> impl Strategy<Value = JacobiSeries> {
    let term = (1i64..5, -2i64..=2, -2i64..=2);
    (-2i64..=2, 1i64..=2, prop::collection::vec(term, 0..5), 3i64..6).prop_map(|(c, k, terms, order)| {
        let mut all = vec![(qi(0), qi(0), GaussianRational::one())];
        if c != 0 {
            all.push((qi(0), qi(-k), GaussianRational::from_ints(c, 0)));
        }
        all.extend(terms.into_iter().map(|(a, b, re)| (qi(a), qi(b), GaussianRational::from_ints(re, 1))));
        JacobiSeries::from_terms(all, QOrder::Finite(qi(order)))
    })
}

fn common_order(series: &[&JacobiSeries]) -> QOrder {
    series.iter().map(|s| s.q_order()).min().unwrap()
}

fn same(a: &JacobiSeries, b: &JacobiSeries) -> bool {
    match common_order(&[a, b]) {
        QOrder::Finite(o) => a.equal_to_order(b, o).unwrap(),
        QOrder::Exact => a == b,
    }
}

fn label() -> impl Strategy<Value = ThetaLabel> {
    prop::sample::select(ThetaLabel::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn add_and_mul_commute(a in series(), b in series()) {
        prop_assert!(same(&a.add(&b).unwrap(), &b.add(&a).unwrap()));
        prop_assert!(same(&a.mul(&b).unwrap(), &b.mul(&a).unwrap()));
    }

    #[test]
    fn add_and_mul_associate(a in series(), b in series(), c in series()) {
        let l = a.add(&b).unwrap().add(&c).unwrap();
        let r = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert!(same(&l, &r));
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(same(&l, &r));
    }

    #[test]
    fn mul_distributes(a in series(), b in series(), c in series()) {
        let l = a.mul(&b.add(&c).unwrap()).unwrap();
        let r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(same(&l, &r));
    }

    #[test]
    fn sub_self_is_zero(a in series()) {
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn directed_inverse_is_inverse(s in invertible(), lo in -10i64..-6, hi in 4i64..7) {
        let inv = s.invert_directed(XWindow::new(qi(lo), qi(hi)).unwrap()).unwrap();
        let prod = inv.mul(&s).unwrap();
        let one = JacobiSeries::one().restrict_window(prod.x_window().unwrap()).unwrap();
        let order = prod.q_order().finite().unwrap();
        prop_assert!(prod.equal_to_order(&one, order).unwrap());
    }

    #[test]
    fn shift_round_trip(s in series(), a in -2i64..=2, b in -2i64..=2) {
        let r_tau = q(a, 2);
        let r_one = q(b, 2);
        let there = s.subst_shift_z(r_tau, r_one).unwrap();
        let back = there.subst_shift_z(-r_tau, -r_one).unwrap();
        let survivors: Vec<_> = s
            .terms()
            .filter(|(a, b, _)| there.q_order().admits(*a + r_tau * *b) && back.q_order().admits(*a))
            .map(|(a, b, c)| (a, b, c.clone()))
            .collect();
        let back_terms: Vec<_> = back.terms().map(|(a, b, c)| (a, b, c.clone())).collect();
        prop_assert_eq!(back_terms, survivors);
    }

    #[test]
    fn negate_z_is_involution(s in series()) {
        prop_assert_eq!(s.subst_negate_z().subst_negate_z(), s);
    }

    #[test]
    fn eval_is_multiplicative(a in series(), b in series(), re in -0.5f64..0.5, im in 0.5f64..1.5, zr in -0.3f64..0.3) {
        let tau = Complex64::new(re, im);
        let z = Complex64::new(zr, 0.05);
        let prod = a.mul(&b).unwrap();
        let lhs = prod.eval_numeric(tau, z);
        let rhs = a.eval_numeric(tau, z) * b.eval_numeric(tau, z);
        // Terms dropped at the product's order are bounded by |q|^order times the coefficient mass.
        let bound = match prod.q_order() {
            QOrder::Finite(o) => {
                let mass = |s: &JacobiSeries| s.terms().map(|(_, x, c)| c.to_complex().norm() * (2.0 * std::f64::consts::PI * 0.05 * x.to_integer().abs() as f64 + 1.0).exp()).sum::<f64>();
                (-2.0 * std::f64::consts::PI * im * (*o.numer() as f64 / *o.denom() as f64)).exp() * (mass(&a) + 1.0) * (mass(&b) + 1.0) * 50.0
            }
            QOrder::Exact => 0.0,
        };
        prop_assert!((lhs - rhs).norm() <= bound + 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn json_round_trip(s in series()) {
        let text = s.to_json();
        let back = JacobiSeries::from_json(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn theta_parity(l in label(), order in 1i64..12) {
        let t = theta_product(l, qi(order));
        let expected = if l == ThetaLabel::T11 { t.neg() } else { t.clone() };
        prop_assert_eq!(t.subst_negate_z(), expected);
    }

    #[test]
    fn theta_at_matches_lattice_sum(l in label(), m in 1i64..=3, k in prop::sample::select(vec![-1i64, 1, 2]), r in -4i64..=4, s in -1i64..=1) {
        let order = qi(6);
        let (r, s) = (q(r, 2), q(s, 2));
        let (a, b) = l.ab();
        let mut terms = Vec::new();
        for n in -60i64..=60 {
            let nu = qi(n) + q(a as i64, 2);
            let e = nu * nu * m / 2 + r * nu;
            if e < order {
                terms.push((e, nu * k, GaussianRational::root_of_unity(nu * (s + q(b as i64, 2))).unwrap()));
            }
        }
        let lattice = JacobiSeries::from_terms(terms, QOrder::Finite(order));
        let direct = theta_at(l, m, k, r, s, order).unwrap();
        prop_assert!(direct.equal_to_order(&lattice, order).unwrap());
    }
}

fn point(re: f64, im: f64, z1: (f64, f64), z2: (f64, f64)) -> Point {
    let c = Complex64::new;
    Point::new(c(re, im), c(z1.0, z1.1), c(z2.0, z2.1), c(0.0, 0.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_index_periodicity(
        m in 1i64..=4, half_eps in 0i64..2, half_epsp in 0i64..2, j0 in -2i64..=2, k0 in -2i64..=2,
        a in -2i64..=2, b in -2i64..=2, re in -0.5f64..0.5, im in 0.7f64..1.3,
    ) {
        let (eps, epsp) = (q(half_eps, 2), q(half_epsp, 2));
        let p = point(re, im, (0.113, 0.021), (-0.171, -0.034));
        let psi = |j, k| psi_numeric_with(&PsiParams::new(m, j, k, eps, epsp).unwrap(), p, 1e-16).unwrap();
        let (j, k) = (epsp + j0, epsp + k0);
        let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (a - b) as f64 * half_eps as f64 / 2.0);
        let base = psi(j, k);
        let r = (psi(j + a * m, k + b * m) - phase * base).norm();
        prop_assert!(r < 1e-9 * (1.0 + base.norm()), "residual {r:e}");
    }

    #[test]
    fn psi_t_dependence(m in 1i64..=3, j0 in -1i64..=1, tr in -0.5f64..0.5, ti in -0.1f64..0.1) {
        let c = Complex64::new;
        let t = c(tr, ti);
        let params = PsiParams::new(m, q(1, 2) + j0, q(1, 2), q(1, 2), q(1, 2)).unwrap();
        let p0 = point(0.1, 0.9, (0.12, 0.02), (-0.05, 0.01));
        let pt = Point::new(p0.tau, p0.z1, p0.z2, t);
        let v0 = psi_numeric_with(&params, p0, 1e-16).unwrap();
        let vt = psi_numeric_with(&params, pt, 1e-16).unwrap();
        let factor = (c(0.0, -2.0 * std::f64::consts::PI) * t / m as f64).exp();
        prop_assert!((vt - factor * v0).norm() < 1e-12 * (1.0 + v0.norm()));
    }
}

#[test]
fn residuals_do_not_grow_with_precision() {
    use n4char::modular::{default_point, psi_s_residual};
    let params = PsiParams::new(2, q(1, 2), q(1, 2), q(1, 2), q(1, 2)).unwrap();
    for n in 0..4 {
        let p = default_point(n);
        let p = Point::new(p.tau, p.z1, Complex64::new(0.07, 0.0), Complex64::new(0.0, 0.0));
        let coarse = psi_s_residual(&params, &p, 12).unwrap();
        let fine = psi_s_residual(&params, &p, 52).unwrap();
        assert!(fine <= coarse.max(1e-13), "point {n}: {fine:e} > {coarse:e}");
    }
}
