//! CSV and JSON renderings of the verification artifacts.
//!
//! Floats are written with 17 significant digits in scientific notation,
//! `.` as decimal separator and `\n` line endings, so identical runs give
//! byte-identical files.

use serde::Serialize;

use crate::arith::ConvolutionTable;
use crate::davenport::{AuditReport, SideValues};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Fixed 17-significant-digit float rendering.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{:.16e}", x + 0.0)
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub const REPORT_CSV_HEADER: &str = "N,re_s,im_s,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,pass";

pub fn reports_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let fields = [
            r.order.to_string(),
            fmt_f64(r.s.re),
            fmt_f64(r.s.im),
            fmt_f64(r.lhs.re),
            fmt_f64(r.lhs.im),
            fmt_f64(r.rhs.re),
            fmt_f64(r.rhs.im),
            fmt_f64(r.abs_err),
            fmt_f64(r.rel_err),
            r.pass.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Per-`x` rows `x, lhs, rhs, abs_err` and, with `per_k`, `S_k, C_k` pairs.
pub fn sides_csv(order: u32, rows: &[SideValues], per_k: bool) -> String {
    let mut header = vec!["x".to_string(), "lhs".into(), "rhs".into(), "abs_err".into()];
    if per_k {
        for k in 0..order {
            header.push(format!("S_{k}"));
            header.push(format!("C_{k}"));
        }
    }
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let mut fields = vec![fmt_f64(r.x), fmt_f64(r.lhs), fmt_f64(r.rhs), fmt_f64(r.abs_err())];
        if per_k {
            for t in &r.per_k {
                fields.push(fmt_opt(t.sin_sum));
                fields.push(fmt_opt(t.cos_sum));
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn audit_csv(report: &AuditReport) -> String {
    let mut out = String::from("x,lhs,rhs_paper_literal,rhs_corrected,err_paper_literal,err_corrected\n");
    for r in &report.rows {
        let fields = [r.x, r.lhs, r.rhs_paper_literal, r.rhs_corrected, r.err_paper_literal, r.err_corrected].map(fmt_f64);
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Exact tables print `p/q` rationals; floating tables use [`fmt_f64`].
pub trait TableCell {
    fn cell(&self) -> String;
}

impl TableCell for f64 {
    fn cell(&self) -> String {
        fmt_f64(*self)
    }
}

impl TableCell for num_rational::BigRational {
    fn cell(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            self.to_string()
        }
    }
}

pub fn fk_table_csv<T>(table: &ConvolutionTable<T>) -> String
where
    T: crate::arith::ConvolutionScalar + TableCell,
{
    let mut header = vec!["n".to_string(), "A".into()];
    header.extend(table.k_list().iter().map(|k| format!("F_{k}")));
    let mut out = header.join(",");
    out.push('\n');
    for n in 1..=table.max_n() {
        let mut fields = vec![n.to_string(), table.divisor_sum(n).cell()];
        for &k in table.k_list() {
            fields.push(table.get(k, n).expect("tabulated").cell());
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Exact-table rows as floats, for JSON output.
pub fn fk_table_json<T: crate::arith::ConvolutionScalar + TableCell>(table: &ConvolutionTable<T>) -> Result<String> {
    #[derive(Serialize)]
    struct Row {
        n: u64,
        a: String,
        f: Vec<(u32, String)>,
    }
    let rows: Vec<Row> = (1..=table.max_n())
        .map(|n| Row {
            n,
            a: table.divisor_sum(n).cell(),
            f: table
                .k_list()
                .iter()
                .map(|&k| (k, table.get(k, n).expect("tabulated").cell()))
                .collect(),
        })
        .collect();
    to_json(&rows)
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
