//! Inversion of a series as a Laurent series in descending powers of x.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::{ceil_q, GaussianRational, Q};
use crate::series::{window_units, JacobiSeries, QOrder, XWindow};

type Poly = BTreeMap<i64, GaussianRational>;

fn add_into(acc: &mut Poly, e: i64, c: GaussianRational) {
    match acc.get_mut(&e) {
        Some(v) => *v += &c,
        None => {
            acc.insert(e, c);
        }
    }
}

/// Product restricted to exponents >= floor.
fn conv(a: &Poly, b: &Poly, floor: i64, acc: &mut Poly) {
    for (&ea, ca) in a {
        for (&eb, cb) in b.iter().rev() {
            if ea + eb < floor {
                break;
            }
            add_into(acc, ea + eb, ca * cb);
        }
    }
}

impl JacobiSeries {
    /// Reciprocal expanded in descending powers of x at every q-level, exact for
    /// x-exponents in `window`.
    ///
    /// Writing the series as q^v (P_0(x) + q^(1/d) P_1(x) + ...), the leading
    /// polynomial P_0 is inverted by long division from its top x-power and the
    /// higher levels follow from the usual recursion. The result is trusted below
    /// q-order Q - 2v.
    pub fn invert_directed(&self, window: XWindow) -> Result<JacobiSeries> {
        if self.x_window().is_some() {
            return Err(Error::WindowedOperand("invert_directed"));
        }
        let a0 = match self.raw_terms().keys().next() {
            Some(&(a, _)) => a,
            None => return Err(Error::NotInvertible("zero series")),
        };
        let qd = self.q_den();
        let xd = self.x_den();
        let v = Q::new(a0, qd);
        let (levels, out_order) = match self.q_order() {
            QOrder::Finite(order) => (ceil_q(&((order - v) * qd)).max(0) as usize, QOrder::Finite(order - v - v)),
            QOrder::Exact => {
                if self.raw_terms().keys().any(|&(a, _)| a != a0) {
                    return Err(Error::NotInvertible("exact series with several q-levels has no finite inverse"));
                }
                (1, QOrder::Exact)
            }
        };
        let mut p: Vec<Poly> = vec![Poly::new(); levels.max(1)];
        for (&(a, b), c) in self.raw_terms() {
            let n = (a - a0) as usize;
            if n < p.len() {
                p[n].insert(b, c.clone());
            }
        }
        let (&top, lead) = p[0].iter().next_back().expect("leading level is nonempty");
        let lead_inv = lead.inv().expect("nonzero leading coefficient");

        // Exactness floor of each output level relative to the working floor F,
        // and the top x-exponent of each level.
        let mut floor_off: Vec<Option<i64>> = vec![Some(0)];
        let mut tops: Vec<Option<i64>> = vec![Some(-top)];
        let mut conv_off: Vec<Option<i64>> = vec![None];
        for n in 1..levels {
            let mut r: Option<i64> = None;
            let mut t: Option<i64> = None;
            for k in 1..=n {
                let hk = match p[k].keys().next_back() {
                    Some(&h) => h,
                    None => continue,
                };
                if let (Some(f), Some(tp)) = (floor_off[n - k], tops[n - k]) {
                    r = Some(r.map_or(f + hk, |r: i64| r.max(f + hk)));
                    t = Some(t.map_or(tp + hk, |t: i64| t.max(tp + hk)));
                }
            }
            conv_off.push(r);
            match (r, t) {
                (Some(r), Some(t)) => {
                    floor_off.push(Some((r - top).max(t)));
                    tops.push(Some(t - top));
                }
                _ => {
                    floor_off.push(None);
                    tops.push(None);
                }
            }
        }
        let (lo, hi) = window_units(window, xd);
        let worst = floor_off.iter().flatten().copied().max().unwrap_or(0);
        let floor = lo - worst;

        let mut t0 = Poly::new();
        let mut e = -top;
        while e >= floor {
            let d = -top - e;
            let mut acc = if d == 0 { GaussianRational::one() } else { GaussianRational::zero() };
            for (&pe, pc) in p[0].range(top - d..top) {
                let dp = top - pe;
                if let Some(tc) = t0.get(&(-top - (d - dp))) {
                    acc = &acc - &(pc * tc);
                }
            }
            let val = &acc * &lead_inv;
            if !val.is_zero() {
                t0.insert(e, val);
            }
            e -= 1;
        }

        let mut t: Vec<Poly> = vec![t0];
        for n in 1..levels {
            let mut s = Poly::new();
            if let Some(r) = conv_off[n] {
                for k in 1..=n {
                    if !p[k].is_empty() {
                        conv(&p[k], &t[n - k], floor + r, &mut s);
                    }
                }
            }
            s.retain(|_, c| !c.is_zero());
            let mut tn = Poly::new();
            if let Some(f) = floor_off[n] {
                conv(&t[0], &s, floor + f, &mut tn);
            }
            let tn = tn
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e, -c))
                .collect();
            t.push(tn);
        }

        let mut out = BTreeMap::new();
        for (n, tn) in t.iter().enumerate() {
            for (&e, c) in tn.range(lo..=hi) {
                out.insert((n as i64 - a0, e), c.clone());
            }
        }
        Ok(JacobiSeries::from_lattice(qd, xd, out, out_order, Some(window)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn g(re: i64) -> GaussianRational {
        GaussianRational::from_ints(re, 0)
    }

    #[test]
    fn geometric_series_descending() {
        // 1/(1 - x) = -x^-1 - x^-2 - ... in descending powers.
        let s = JacobiSeries::from_terms([(qi(0), qi(0), g(1)), (qi(0), qi(1), g(-1))], QOrder::Exact);
        let w = XWindow::new(qi(-6), qi(3)).unwrap();
        let inv = s.invert_directed(w).unwrap();
        assert_eq!(inv.len(), 6);
        for k in 1..=6 {
            assert_eq!(inv.coeff(qi(0), qi(-k)), g(-1));
        }
        let prod = inv.mul(&s).unwrap();
        assert!(prod.equal_to_order(&JacobiSeries::one(), qi(100)).unwrap());
    }

    #[test]
    fn inverse_order() {
        let s = JacobiSeries::from_terms(
            [(q(1, 8), qi(0), g(1)), (q(9, 8), qi(1), g(1)), (q(9, 8), qi(-1), g(1))],
            QOrder::Finite(q(41, 8)),
        );
        let inv = s.invert_directed(XWindow::new(qi(-4), qi(4)).unwrap()).unwrap();
        assert_eq!(inv.q_order(), QOrder::Finite(qi(5) - q(1, 8)));
        let prod = inv.mul(&s).unwrap();
        let one = JacobiSeries::one().restrict_window(prod.x_window().unwrap()).unwrap();
        let order = prod.q_order().finite().unwrap();
        assert!(prod.equal_to_order(&one, order).unwrap());
    }

    #[test]
    fn rejects_zero_and_windowed() {
        assert!(JacobiSeries::zero(QOrder::Finite(qi(3))).invert_directed(XWindow::new(qi(0), qi(1)).unwrap()).is_err());
        let w = XWindow::new(qi(-1), qi(1)).unwrap();
        let s = JacobiSeries::one().restrict_window(w).unwrap();
        assert!(s.invert_directed(w).is_err());
    }
}
