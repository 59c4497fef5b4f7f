//! Canonical JSON form of a series.
//!
//! Rationals are `"p/q"` strings, terms are sorted by (q, x) lattice numerators
//! and the lattice is reduced, so equal series serialize to identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_big, fmt_q, parse_big, parse_q, GaussianRational};
use crate::series::{JacobiSeries, QOrder, XWindow};

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    q_den: i64,
    x_den: i64,
    q_order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x_window: Option<[String; 2]>,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    q: i64,
    x: i64,
    re: String,
    im: String,
}

impl JacobiSeries {
    pub fn to_json(&self) -> String {
        let doc = SeriesJson {
            q_den: self.q_den(),
            x_den: self.x_den(),
            q_order: match self.q_order() {
                QOrder::Finite(r) => fmt_q(&r),
                QOrder::Exact => "inf".into(),
            },
            x_window: self.x_window().map(|w| [fmt_q(&w.lo), fmt_q(&w.hi)]),
            terms: self
                .raw_terms()
                .iter()
                .map(|(&(q, x), c)| TermJson {
                    q,
                    x,
                    re: fmt_big(&c.re),
                    im: fmt_big(&c.im),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("series serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesJson = serde_json::from_str(text)?;
        if doc.q_den <= 0 || doc.x_den <= 0 {
            return Err(Error::Parse("lattice denominators must be positive".into()));
        }
        let q_order = match doc.q_order.as_str() {
            "inf" => QOrder::Exact,
            s => QOrder::Finite(parse_q(s)?),
        };
        let x_window = match doc.x_window {
            Some([lo, hi]) => Some(XWindow::new(parse_q(&lo)?, parse_q(&hi)?)?),
            None => None,
        };
        let mut terms = BTreeMap::new();
        for t in doc.terms {
            let c = GaussianRational::new(parse_big(&t.re)?, parse_big(&t.im)?);
            if terms.insert((t.q, t.x), c).is_some() {
                return Err(Error::Parse(format!("duplicate term ({}, {})", t.q, t.x)));
            }
        }
        Ok(JacobiSeries::from_lattice(doc.q_den, doc.x_den, terms, q_order, x_window))
    }
}
