//! Truncated two-variable Laurent series in q = e(tau) and x = e(z) with exact
//! Gaussian-rational coefficients and rational exponents.
//!
//! Exponents live on the lattice (1/q_den)Z x (1/x_den)Z. Every coefficient with
//! q-exponent below `q_order` is exact; nothing is claimed at or beyond it. A
//! series may additionally carry an x-window, in which case only coefficients
//! with x-exponent inside the window are stored and trusted.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil_q, floor_q, lcm, q_to_f64, qi, GaussianRational, Q};

/// Strict upper bound on trusted q-exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QOrder {
    Finite(Q),
    Exact,
}

impl QOrder {
    pub fn finite(self) -> Option<Q> {
        match self {
            QOrder::Finite(r) => Some(r),
            QOrder::Exact => None,
        }
    }

    fn shift(self, by: Q) -> QOrder {
        match self {
            QOrder::Finite(r) => QOrder::Finite(r + by),
            QOrder::Exact => QOrder::Exact,
        }
    }

    fn scale(self, k: Q) -> QOrder {
        match self {
            QOrder::Finite(r) => QOrder::Finite(r * k),
            QOrder::Exact => QOrder::Exact,
        }
    }

    /// True when `exp` is strictly below the order.
    pub fn admits(self, exp: Q) -> bool {
        match self {
            QOrder::Finite(r) => exp < r,
            QOrder::Exact => true,
        }
    }
}

impl fmt::Display for QOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QOrder::Finite(r) => write!(f, "{r}"),
            QOrder::Exact => write!(f, "inf"),
        }
    }
}

/// Closed interval of trusted x-exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct XWindow {
    pub lo: Q,
    pub hi: Q,
}

impl XWindow {
    pub fn new(lo: Q, hi: Q) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParameter(format!("empty x-window [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, e: Q) -> bool {
        self.lo <= e && e <= self.hi
    }

    fn intersect(a: Option<XWindow>, b: Option<XWindow>) -> Result<Option<XWindow>> {
        match (a, b) {
            (None, w) | (w, None) => Ok(w),
            (Some(a), Some(b)) => {
                let lo = a.lo.max(b.lo);
                let hi = a.hi.min(b.hi);
                if lo > hi {
                    Err(Error::DisjointWindows)
                } else {
                    Ok(Some(XWindow { lo, hi }))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiSeries {
    q_den: i64,
    x_den: i64,
    /// Keyed by lattice numerators (q * q_den, x * x_den); no zero entries.
    terms: BTreeMap<(i64, i64), GaussianRational>,
    q_order: QOrder,
    x_window: Option<XWindow>,
}

impl JacobiSeries {
    pub fn zero(q_order: QOrder) -> Self {
        Self {
            q_den: 1,
            x_den: 1,
            terms: BTreeMap::new(),
            q_order,
            x_window: None,
        }
    }

    pub fn one() -> Self {
        Self::monomial(GaussianRational::one(), qi(0), qi(0))
    }

    /// c q^a x^b, exact.
    pub fn monomial(c: GaussianRational, a: Q, b: Q) -> Self {
        Self::from_terms([(a, b, c)], QOrder::Exact)
    }

    /// Builds a series from rational-exponent terms; repeated exponents add.
    pub fn from_terms<I>(terms: I, q_order: QOrder) -> Self
    where
        I: IntoIterator<Item = (Q, Q, GaussianRational)>,
    {
        Self::from_terms_windowed(terms, q_order, None)
    }

    pub fn from_terms_windowed<I>(terms: I, q_order: QOrder, x_window: Option<XWindow>) -> Self
    where
        I: IntoIterator<Item = (Q, Q, GaussianRational)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let mut qd = 1;
        let mut xd = 1;
        for (a, b, _) in &terms {
            qd = lcm(qd, *a.denom());
            xd = lcm(xd, *b.denom());
        }
        let mut map: BTreeMap<(i64, i64), GaussianRational> = BTreeMap::new();
        for (a, b, c) in terms {
            let key = ((a * qd).to_integer(), (b * xd).to_integer());
            match map.get_mut(&key) {
                Some(v) => *v += &c,
                None => {
                    map.insert(key, c);
                }
            }
        }
        let mut s = Self {
            q_den: qd,
            x_den: xd,
            terms: map,
            q_order,
            x_window,
        };
        s.normalize();
        s
    }

    /// Low-level constructor on an explicit lattice, used by deserialization.
    pub(crate) fn from_lattice(
        q_den: i64,
        x_den: i64,
        terms: BTreeMap<(i64, i64), GaussianRational>,
        q_order: QOrder,
        x_window: Option<XWindow>,
    ) -> Self {
        let mut s = Self {
            q_den,
            x_den,
            terms,
            q_order,
            x_window,
        };
        s.normalize();
        s
    }

    /// Drops zero and untrusted terms and reduces the lattice denominators.
    fn normalize(&mut self) {
        let (qd, xd, order, window) = (self.q_den, self.x_den, self.q_order, self.x_window);
        self.terms.retain(|&(a, b), c| {
            !c.is_zero() && order.admits(Q::new(a, qd)) && window.is_none_or(|w| w.contains(Q::new(b, xd)))
        });
        let mut gq = 0i64;
        let mut gx = 0i64;
        for &(a, b) in self.terms.keys() {
            gq = gq.gcd(&a);
            gx = gx.gcd(&b);
        }
        let rq = if gq == 0 { qd } else { gq.gcd(&qd) };
        let rx = if gx == 0 { xd } else { gx.gcd(&xd) };
        if rq != 1 || rx != 1 {
            let terms = std::mem::take(&mut self.terms);
            self.terms = terms.into_iter().map(|((a, b), c)| ((a / rq, b / rx), c)).collect();
            self.q_den /= rq;
            self.x_den /= rx;
        }
    }

    pub fn q_den(&self) -> i64 {
        self.q_den
    }

    pub fn x_den(&self) -> i64 {
        self.x_den
    }

    pub fn q_order(&self) -> QOrder {
        self.q_order
    }

    pub fn x_window(&self) -> Option<XWindow> {
        self.x_window
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<(i64, i64), GaussianRational> {
        &self.terms
    }

    /// Terms as (q-exponent, x-exponent, coefficient), sorted by (q, x).
    pub fn terms(&self) -> impl Iterator<Item = (Q, Q, &GaussianRational)> + '_ {
        self.terms
            .iter()
            .map(move |(&(a, b), c)| (Q::new(a, self.q_den), Q::new(b, self.x_den), c))
    }

    pub fn coeff(&self, a: Q, b: Q) -> GaussianRational {
        let ka = a * self.q_den;
        let kb = b * self.x_den;
        if !ka.is_integer() || !kb.is_integer() {
            return GaussianRational::zero();
        }
        self.terms
            .get(&(ka.to_integer(), kb.to_integer()))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Lowest stored q-exponent.
    pub fn valuation(&self) -> Option<Q> {
        self.terms.keys().next().map(|&(a, _)| Q::new(a, self.q_den))
    }

    /// Lower bound on the q-valuation of the true series: the lowest stored
    /// exponent, or the order itself for a truncated zero.
    fn valuation_bound(&self) -> QOrder {
        match self.valuation() {
            Some(v) => QOrder::Finite(v),
            None => self.q_order,
        }
    }

    /// Range of x-exponents present.
    pub fn x_range(&self) -> Option<(Q, Q)> {
        let mut it = self.terms.keys().map(|&(_, b)| b);
        let first = it.next()?;
        let (lo, hi) = it.fold((first, first), |(lo, hi), b| (lo.min(b), hi.max(b)));
        Some((Q::new(lo, self.x_den), Q::new(hi, self.x_den)))
    }

    /// Coefficients at a single q-exponent, as a map from x-exponent.
    pub fn level(&self, a: Q) -> Vec<(Q, GaussianRational)> {
        self.terms().filter(|(qa, _, _)| *qa == a).map(|(_, b, c)| (b, c.clone())).collect()
    }

    /// Distinct q-exponents present, ascending.
    pub fn levels(&self) -> Vec<Q> {
        let mut out: Vec<Q> = self.terms().map(|(a, _, _)| a).collect();
        out.dedup();
        out
    }

    pub fn truncate(&self, order: Q) -> Self {
        let mut s = self.clone();
        s.q_order = s.q_order.min(QOrder::Finite(order));
        s.normalize();
        s
    }

    /// Restricts to an x-window, discarding coefficients outside it.
    pub fn restrict_window(&self, w: XWindow) -> Result<Self> {
        let mut s = self.clone();
        s.x_window = XWindow::intersect(s.x_window, Some(w))?;
        s.normalize();
        Ok(s)
    }

    fn relattice(&self, qd: i64, xd: i64) -> impl Iterator<Item = ((i64, i64), &GaussianRational)> + '_ {
        let fq = qd / self.q_den;
        let fx = xd / self.x_den;
        self.terms.iter().map(move |(&(a, b), c)| ((a * fq, b * fx), c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let qd = lcm(self.q_den, other.q_den);
        let xd = lcm(self.x_den, other.x_den);
        let mut terms: BTreeMap<(i64, i64), GaussianRational> = self.relattice(qd, xd).map(|(k, c)| (k, c.clone())).collect();
        for (k, c) in other.relattice(qd, xd) {
            match terms.get_mut(&k) {
                Some(v) => *v += c,
                None => {
                    terms.insert(k, c.clone());
                }
            }
        }
        let window = XWindow::intersect(self.x_window, other.x_window)?;
        Ok(Self::from_lattice(qd, xd, terms, self.q_order.min(other.q_order), window))
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussianRational::from_ints(-1, 0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by a constant.
    pub fn scale(&self, c: &GaussianRational) -> Self {
        let terms = self.terms.iter().map(|(&k, v)| (k, v * c)).collect();
        Self::from_lattice(self.q_den, self.x_den, terms, self.q_order, self.x_window)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (window, plain) = match (self.x_window, other.x_window) {
            (Some(_), Some(_)) => return Err(Error::WindowedProduct),
            (Some(w), None) => (Some(w), other),
            (None, Some(w)) => (Some(w), self),
            (None, None) => (None, self),
        };
        let window = match (window, plain.x_range()) {
            (Some(w), Some((lo, hi))) => {
                let (lo, hi) = (w.lo + hi, w.hi + lo);
                if lo > hi {
                    return Err(Error::DisjointWindows);
                }
                Some(XWindow { lo, hi })
            }
            (w, _) => w,
        };
        let order = mul_order(self, other);
        let qd = lcm(self.q_den, other.q_den);
        let xd = lcm(self.x_den, other.x_den);
        let limit = match order {
            QOrder::Finite(r) => Some(ceil_q(&(r * qd))),
            QOrder::Exact => None,
        };
        let a: Vec<_> = self.relattice(qd, xd).collect();
        let b: Vec<_> = other.relattice(qd, xd).collect();
        let mut terms: BTreeMap<(i64, i64), GaussianRational> = BTreeMap::new();
        for &((a1, b1), c1) in &a {
            for &((a2, b2), c2) in &b {
                let key = (a1 + a2, b1 + b2);
                if limit.is_some_and(|l| key.0 >= l) {
                    // b is sorted by q, so later entries are no better.
                    break;
                }
                let p = c1 * c2;
                match terms.get_mut(&key) {
                    Some(v) => *v += &p,
                    None => {
                        terms.insert(key, p);
                    }
                }
            }
        }
        Ok(Self::from_lattice(qd, xd, terms, order, window))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// c q^a x^b times the series.
    pub fn scale_monomial(&self, c: &GaussianRational, a: Q, b: Q) -> Self {
        let terms = self
            .terms()
            .map(|(qa, xb, v)| (qa + a, xb + b, v * c))
            .collect::<Vec<_>>();
        let window = self.x_window.map(|w| XWindow { lo: w.lo + b, hi: w.hi + b });
        Self::from_terms_windowed(terms, self.q_order.shift(a), window)
    }

    /// tau -> k tau.
    pub fn subst_scale_tau(&self, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::InvalidParameter(format!("tau scale must be positive, got {k}")));
        }
        let terms = self.terms.iter().map(|(&(a, b), c)| ((a * k, b), c.clone())).collect();
        Ok(Self::from_lattice(self.q_den, self.x_den, terms, self.q_order.scale(qi(k)), self.x_window))
    }

    /// z -> k z.
    pub fn subst_scale_z(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("z scale must be nonzero".into()));
        }
        let terms = self.terms.iter().map(|(&(a, b), c)| ((a, b * k), c.clone())).collect();
        let window = self.x_window.map(|w| {
            let (lo, hi) = (w.lo * k, w.hi * k);
            XWindow { lo: lo.min(hi), hi: lo.max(hi) }
        });
        Ok(Self::from_lattice(self.q_den, self.x_den, terms, self.q_order, window))
    }

    /// z -> -z.
    pub fn subst_negate_z(&self) -> Self {
        self.subst_scale_z(-1).expect("nonzero scale")
    }

    /// z -> z + r_tau tau + r_one.
    ///
    /// A term q^a x^b becomes e(r_one b) q^(a + r_tau b) x^b, so every b * r_one
    /// must be a multiple of 1/4. The new order is old - |r_tau| (E + 1) with E
    /// the largest |x-exponent| present. This is sound when every omitted term
    /// q^a x^b has |b| >= E + 1 and a - |r_tau| |b| growing in |b|, as for a theta
    /// series in z whose x-support is wider than |r_tau|.
    pub fn subst_shift_z(&self, r_tau: Q, r_one: Q) -> Result<Self> {
        if self.x_window.is_some() && !r_tau.is_zero() {
            return Err(Error::WindowedOperand("subst_shift_z with a tau shift"));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        let mut emax = qi(0);
        for (a, b, c) in self.terms() {
            let phase = GaussianRational::root_of_unity(b * r_one)?;
            terms.push((a + r_tau * b, b, c * &phase));
            emax = emax.max(b.abs());
        }
        let order = if r_tau.is_zero() {
            self.q_order
        } else {
            self.q_order.shift(-(r_tau.abs() * (emax + 1)))
        };
        Ok(Self::from_terms_windowed(terms, order, self.x_window))
    }

    /// Evaluates the stored terms at q = e(tau), x = e(z).
    pub fn eval_numeric(&self, tau: Complex64, z: Complex64) -> Complex64 {
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        self.terms()
            .map(|(a, b, c)| c.to_complex() * (two_pi_i * (tau * q_to_f64(&a) + z * q_to_f64(&b))).exp())
            .sum()
    }

    /// Coefficientwise equality for q-exponents below `order`, inside the common
    /// x-window if any.
    pub fn equal_to_order(&self, other: &Self, order: Q) -> Result<bool> {
        for s in [self, other] {
            if let QOrder::Finite(avail) = s.q_order {
                if order > avail {
                    return Err(Error::InsufficientOrder { requested: order, available: avail });
                }
            }
        }
        let window = XWindow::intersect(self.x_window, other.x_window)?;
        let keep = |a: Q, b: Q| a < order && window.is_none_or(|w| w.contains(b));
        let lhs: Vec<_> = self.terms().filter(|(a, b, _)| keep(*a, *b)).collect();
        let rhs: Vec<_> = other.terms().filter(|(a, b, _)| keep(*a, *b)).collect();
        Ok(lhs == rhs)
    }

    /// Largest bit height among coefficients.
    pub fn height_bits(&self) -> u64 {
        self.terms.values().map(|c| c.height_bits()).max().unwrap_or(0)
    }
}

/// Rigorous order of a product: min(Qa + v(b), Qb + v(a)).
fn mul_order(a: &JacobiSeries, b: &JacobiSeries) -> QOrder {
    let add = |o: QOrder, v: QOrder| match (o, v) {
        (QOrder::Finite(o), QOrder::Finite(v)) => QOrder::Finite(o + v),
        (QOrder::Finite(o), QOrder::Exact) => QOrder::Finite(o),
        _ => QOrder::Exact,
    };
    let va = a.valuation_bound();
    let vb = b.valuation_bound();
    // An exact zero factor makes the product exactly zero.
    if (a.is_zero() && a.q_order == QOrder::Exact) || (b.is_zero() && b.q_order == QOrder::Exact) {
        return QOrder::Exact;
    }
    add(a.q_order, vb).min(add(b.q_order, va))
}

impl fmt::Display for JacobiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (a, b, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if !a.is_zero() {
                write!(f, "*q^({a})")?;
            }
            if !b.is_zero() {
                write!(f, "*x^({b})")?;
            }
        }
        if let QOrder::Finite(r) = self.q_order {
            write!(f, " + O(q^({r}))")?;
        }
        if let Some(w) = self.x_window {
            write!(f, " [x in {}..{}]", w.lo, w.hi)?;
        }
        Ok(())
    }
}

/// Floor and ceiling of a rational window in lattice units of 1/den.
pub(crate) fn window_units(w: XWindow, den: i64) -> (i64, i64) {
    (ceil_q(&(w.lo * den)), floor_q(&(w.hi * den)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn g(re: i64) -> GaussianRational {
        GaussianRational::from_ints(re, 0)
    }

    fn one_minus_x() -> JacobiSeries {
        JacobiSeries::from_terms([(qi(0), qi(0), g(1)), (qi(0), qi(1), g(-1))], QOrder::Exact)
    }

    #[test]
    fn lattice_reduces() {
        let s = JacobiSeries::from_terms([(q(1, 2), qi(0), g(1)), (q(3, 2), qi(1), g(2))], QOrder::Exact);
        assert_eq!(s.q_den(), 2);
        let t = s.subst_scale_tau(2).unwrap();
        assert_eq!(t.q_den(), 1);
        assert_eq!(t.coeff(qi(3), qi(1)), g(2));
    }

    #[test]
    fn add_cancels_to_zero() {
        let s = one_minus_x();
        let z = s.sub(&s).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.q_order(), QOrder::Exact);
    }

    #[test]
    fn mul_order_uses_valuations() {
        let a = JacobiSeries::from_terms([(q(-1, 8), qi(0), g(1))], QOrder::Finite(qi(2)));
        let b = JacobiSeries::from_terms([(qi(0), qi(0), g(1))], QOrder::Finite(qi(2)));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.q_order(), QOrder::Finite(q(15, 8)));
    }

    #[test]
    fn shift_phase() {
        let s = JacobiSeries::from_terms([(qi(0), q(1, 2), g(1))], QOrder::Exact);
        let t = s.subst_shift_z(qi(0), q(1, 2)).unwrap();
        assert_eq!(t.coeff(qi(0), q(1, 2)), GaussianRational::i());
        assert!(s.subst_shift_z(qi(0), q(1, 4)).is_err());
    }

    #[test]
    fn equal_to_order_respects_bounds() {
        let a = one_minus_x().truncate(qi(3));
        assert!(a.equal_to_order(&one_minus_x(), qi(3)).unwrap());
        assert!(a.equal_to_order(&one_minus_x(), qi(4)).is_err());
    }

    #[test]
    fn windowed_product_window() {
        let a = one_minus_x().restrict_window(XWindow::new(qi(-5), qi(5)).unwrap()).unwrap();
        let p = a.mul(&one_minus_x()).unwrap();
        assert_eq!(p.x_window(), Some(XWindow { lo: qi(-4), hi: qi(5) }));
        assert!(matches!(a.mul(&a), Err(Error::WindowedProduct)));
    }
}
