//! Error tables and their CSV / text renderings.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub x: f64,
    pub exact: Option<f64>,
    pub approx: f64,
    /// `|exact − approx|`, present together with `exact`.
    pub abs_error: Option<f64>,
    /// Equation residual, reported when no exact solution is known.
    pub residual: Option<f64>,
}

impl Row {
    pub fn with_exact(x: f64, exact: f64, approx: f64) -> Row {
        Row { x, exact: Some(exact), approx, abs_error: Some((exact - approx).abs()), residual: None }
    }

    pub fn with_residual(x: f64, approx: f64, residual: f64) -> Row {
        Row { x, exact: None, approx, abs_error: None, residual: Some(residual) }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunMetadata {
    /// `example 4.1` or the problem file path.
    pub source: String,
    pub nodes: usize,
    pub nonlinear: bool,
    /// Linear solves performed.
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorTable {
    /// Whether rows carry exact values (otherwise residuals).
    pub has_exact: bool,
    pub rows: Vec<Row>,
    pub meta: RunMetadata,
}

impl ErrorTable {
    pub fn max_abs_error(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.abs_error).reduce(f64::max)
    }

    pub fn row_at(&self, x: f64) -> Option<&Row> {
        self.rows.iter().find(|r| r.x == x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(BenchError::Syntax { line: 0, msg: format!("unknown format `{other}` (csv or text)") }),
        }
    }
}

pub const CSV_HEADER: &str = "x,exact,approx,abs_error";
pub const CSV_RESIDUAL_HEADER: &str = "x,approx,residual";

pub fn emit(table: &ErrorTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => emit_csv(table),
        OutputFormat::Text => emit_text(table),
    }
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn emit_csv(table: &ErrorTable) -> String {
    let mut out = String::new();
    out.push_str(if table.has_exact { CSV_HEADER } else { CSV_RESIDUAL_HEADER });
    out.push('\n');
    for r in &table.rows {
        let fields = match (r.exact, r.abs_error) {
            (Some(e), Some(err)) => [sci(r.x), sci(e), sci(r.approx), sci(err)].join(","),
            _ => [sci(r.x), sci(r.approx), sci(r.residual.unwrap_or(f64::NAN))].join(","),
        };
        out.push_str(&fields);
        out.push('\n');
    }
    out
}

fn emit_text(table: &ErrorTable) -> String {
    let mut out = String::new();
    if table.has_exact {
        let _ = writeln!(out, "{:>8}  {:>18}  {:>18}  {:>12}", "x", "exact", "approx", "abs_error");
        for r in &table.rows {
            let _ = writeln!(
                out,
                "{:>8.4}  {:>18.12}  {:>18.12}  {:>12.4e}",
                r.x,
                r.exact.unwrap_or(f64::NAN),
                r.approx,
                r.abs_error.unwrap_or(f64::NAN)
            );
        }
    } else {
        let _ = writeln!(out, "{:>8}  {:>18}  {:>12}", "x", "approx", "residual");
        for r in &table.rows {
            let _ = writeln!(out, "{:>8.4}  {:>18.12}  {:>12.4e}", r.x, r.approx, r.residual.unwrap_or(f64::NAN));
        }
    }
    let m = &table.meta;
    let _ = writeln!(out);
    let _ = writeln!(out, "source:     {}", m.source);
    let _ = writeln!(out, "nodes:      {}", m.nodes);
    let _ = writeln!(out, "problem:    {}", if m.nonlinear { "nonlinear" } else { "linear" });
    let _ = writeln!(out, "iterations: {}{}", m.iterations, if m.converged { "" } else { " (not converged)" });
    if let Some(e) = table.max_abs_error() {
        let _ = writeln!(out, "max error:  {e:.4e}");
    }
    let _ = writeln!(out, "wall time:  {:.3} s", m.wall_time.as_secs_f64());
    out
}
