//! CSV, JSON and console renderings of evaluation and comparison results.
//! Column layouts are documented in the README.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::eval::{Comparison, EvalReport, PrCurve};

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

fn curve_headers() -> impl Iterator<Item = String> {
    PrCurve::RECALL_LEVELS.iter().map(|r| format!("ip@{r:.1}"))
}

/// One row per evaluated query, then a row with qid `all` holding sums of
/// the counts and means of the metrics.
pub fn write_eval_csv<W: Write>(report: &EvalReport, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![
        "qid".to_owned(),
        "num_rel".into(),
        "num_ret".into(),
        "num_rel_ret".into(),
    ];
    header.extend(report.k_levels.iter().map(|k| format!("P@{k}")));
    header.extend(curve_headers());
    out.write_record(&header)?;

    for q in &report.queries {
        let mut row = vec![
            q.qid.clone(),
            q.num_rel.to_string(),
            q.num_ret.to_string(),
            q.num_rel_ret.to_string(),
        ];
        row.extend(q.precision_at.iter().copied().map(f4));
        row.extend(q.curve.0.iter().copied().map(f4));
        out.write_record(&row)?;
    }

    let sum = |f: fn(&crate::eval::QueryEval) -> usize| report.queries.iter().map(f).sum::<usize>().to_string();
    let mut row = vec![
        "all".to_owned(),
        sum(|q| q.num_rel),
        sum(|q| q.num_ret),
        sum(|q| q.num_rel_ret),
    ];
    row.extend(report.mean_precision_at.iter().copied().map(f4));
    row.extend(report.mean_curve.0.iter().copied().map(f4));
    out.write_record(&row)?;
    out.flush().map_err(Error::Write)?;
    Ok(())
}

pub fn write_json<W: Write, T: serde::Serialize>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w).map_err(Error::Write)?;
    Ok(())
}

/// `qid,indicator,min_delta,max_delta`, one row per query.
pub fn write_comparison_csv<W: Write>(cmp: &Comparison, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["qid", "indicator", "min_delta", "max_delta"])?;
    for r in &cmp.rows {
        out.write_record([r.qid.as_str(), r.indicator.symbol(), &f4(r.min_delta), &f4(r.max_delta)])?;
    }
    out.flush().map_err(Error::Write)?;
    Ok(())
}

/// Mean P@k and the mean 11-point curve as two small tables.
pub fn render_eval(report: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "run {}: {} queries evaluated", report.tag, report.queries.len());
    for (k, p) in report.k_levels.iter().zip(&report.mean_precision_at) {
        let _ = write!(s, "  P@{k:<4}{p:.3}");
    }
    s.push('\n');
    let _ = writeln!(s, "  recall  precision");
    for (r, p) in PrCurve::RECALL_LEVELS.iter().zip(report.mean_curve.0) {
        let _ = writeln!(s, "  {r:>6.1}  {p:.3}");
    }
    s
}

pub fn render_comparison(cmp: &Comparison) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} vs {}", cmp.baseline_tag, cmp.variant_tag);
    let width = cmp.rows.iter().map(|r| r.qid.len()).max().unwrap_or(3).max(3);
    for r in &cmp.rows {
        let _ = writeln!(s, "  {:<width$}  {}", r.qid, r.indicator);
    }
    for c in &cmp.summary.counts {
        let _ = writeln!(s, "  {}  {:>4} ({}%)", c.tag, c.count, c.percent);
    }
    for ((k, b), v) in cmp
        .k_levels
        .iter()
        .zip(&cmp.baseline_precision_at)
        .zip(&cmp.variant_precision_at)
    {
        let _ = writeln!(s, "  P@{k:<4}{b:.3} -> {v:.3} ({:+.3})", v - b);
    }
    let _ = writeln!(s, "  recall  {:>8}  {:>8}", cmp.baseline_tag, cmp.variant_tag);
    for ((r, b), v) in PrCurve::RECALL_LEVELS
        .iter()
        .zip(cmp.baseline_curve.0)
        .zip(cmp.variant_curve.0)
    {
        let _ = writeln!(s, "  {r:>6.1}  {b:>8.3}  {v:>8.3}");
    }
    s
}
