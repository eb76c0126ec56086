//! Per-iteration records and their CSV encoding.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::geometry::Point;

pub const CSV_HEADER: &str = "n,fixed_residual,step,z_residual,ref_distance,qx_inner";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Implicit,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalStatus {
    Converged,
    BudgetExhausted,
    /// The implicit inner loop hit its cap; the trace ends at the last
    /// completed outer step.
    InnerBudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub x: Point,
    /// `d(x_n, T x_n)`.
    pub fixed_residual: f64,
    /// `d(x_{n+1}, x_n)` for the explicit iteration, `d(x_m, x_{m−1})` for
    /// the implicit one.
    pub step: f64,
    /// `d(P_C y_n, x_n)`; explicit only.
    pub z_residual: Option<f64>,
    /// `d(x_n, q)` for the configured reference point.
    pub ref_distance: Option<f64>,
    /// `⟨→qo, →qx_n⟩` for the configured reference point.
    pub qx_inner: Option<f64>,
    pub alpha: f64,
    /// `d(u_n, o)`.
    pub perturbation_norm: f64,
    /// `d(x_n, o)`.
    pub iterate_norm: f64,
    /// `d(T x_n, o)`.
    pub image_norm: f64,
    pub inner_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub algorithm: Algorithm,
    pub rows: Vec<TraceRow>,
    pub status: TerminalStatus,
    pub final_point: Point,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

impl IterationTrace {
    /// Writes the header and one line per row. Floats carry 17 significant
    /// digits; absent values are empty fields.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{:.16e},{:.16e},{},{},{}",
                r.n,
                r.fixed_residual,
                r.step,
                opt(r.z_residual),
                opt(r.ref_distance),
                opt(r.qx_inner)
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is ascii")
    }

    pub fn converged(&self) -> bool {
        self.status == TerminalStatus::Converged
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }
}
