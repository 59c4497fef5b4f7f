//! Text rendering of series and the parameter table.

use std::fmt::Write;

use num_traits::{Signed, Zero};

use n4char::characters::{central_charge, h_s_values, nice_k2, nice_param_to_j, CharacterSpec, Heart, Sector, Sign};
use n4char::rational::fmt_q;
use n4char::{JacobiSeries, QOrder, Result, Q};
use serde::Serialize;

/// One line per q-level, terms in descending powers of x.
pub fn series_text(s: &JacobiSeries) -> String {
    let levels = s.levels();
    let labels: Vec<String> = levels.iter().map(|a| format!("q^{a}")).collect();
    let width = labels.iter().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (a, label) in levels.iter().zip(&labels) {
        let mut line = String::new();
        for (b, c) in s.level(*a).iter().rev() {
            let real_negative = c.im.is_zero() && c.re.is_negative();
            let shown = if real_negative { (-c.re.clone()).to_string() } else { c.to_string() };
            match (line.is_empty(), real_negative) {
                (true, true) => line.push('-'),
                (true, false) => {}
                (false, true) => line.push_str(" - "),
                (false, false) => line.push_str(" + "),
            }
            line.push_str(&shown);
            if !b.is_zero() {
                write!(line, " x^{b}").unwrap();
            }
        }
        writeln!(out, "{label:>width$} : {line}").unwrap();
    }
    if levels.is_empty() {
        writeln!(out, "0").unwrap();
    }
    match s.q_order() {
        QOrder::Finite(o) => writeln!(out, "O(q^{o})").unwrap(),
        QOrder::Exact => writeln!(out, "exact").unwrap(),
    }
    if let Some(w) = s.x_window() {
        writeln!(out, "x-window [{}, {}]", w.lo, w.hi).unwrap();
    }
    out
}

#[derive(Serialize)]
pub struct Row {
    #[serde(rename = "M")]
    pub m: i64,
    pub sector: String,
    pub j: String,
    pub heart: String,
    pub k1: i64,
    pub k2: i64,
    pub c: String,
    pub h: String,
    pub s: String,
}

/// Nice-case parameters (2 k1 + k2 = M - 1, hearts I and III) for each M, in one sector.
pub fn table_rows(ms: impl IntoIterator<Item = i64>, twisted: bool) -> Result<Vec<Row>> {
    let sector = Sector::from_twisted(twisted);
    let mut rows = Vec::new();
    for m in ms {
        for heart in [Heart::I, Heart::III] {
            for k1 in 0..m {
                let Ok(k2) = nice_k2(m, k1, heart) else { continue };
                let j: Q = nice_param_to_j(m, k1, heart, twisted)?;
                let (h, s) = h_s_values(&CharacterSpec::new(m, j, sector, Sign::Plus)?)?;
                rows.push(Row {
                    m,
                    sector: sector.to_string(),
                    j: fmt_q(&j),
                    heart: heart.to_string(),
                    k1,
                    k2,
                    c: fmt_q(&central_charge(m)),
                    h: fmt_q(&h),
                    s: fmt_q(&s),
                });
            }
        }
    }
    Ok(rows)
}

pub fn table_csv(rows: &[Row]) -> String {
    let mut out = String::from("M,sector,j,heart,k1,k2,c,h,s\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{},{},{},{},{}", r.m, r.sector, r.j, r.heart, r.k1, r.k2, r.c, r.h, r.s).unwrap();
    }
    out
}
