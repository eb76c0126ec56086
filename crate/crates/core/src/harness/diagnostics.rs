//! Tail statistics of a solver trace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{quasilin, Basepoint, Geodesic, Point};
use crate::solvers::IterationTrace;
use crate::spaces::Space;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticThresholds {
    pub fixed_residual: f64,
    pub z_residual: f64,
    /// Multiplied by `1 + d²(q, o)`.
    pub qx_inner: f64,
}

impl Default for DiagnosticThresholds {
    fn default() -> Self {
        Self { fixed_residual: 1e-3, z_residual: 1e-3, qx_inner: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticCheck {
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl DiagnosticCheck {
    fn new(value: f64, threshold: f64) -> Self {
        Self { value, threshold, passed: value <= threshold }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDiagnostics {
    pub rows_examined: usize,
    /// Max `d(x_n, T x_n)` over the tail.
    pub fixed_residual: DiagnosticCheck,
    /// Max `d(z_n, x_n)` over the tail; explicit traces only.
    pub z_residual: Option<DiagnosticCheck>,
    /// Max `⟨→qo, →qx_n⟩` over the tail.
    pub qx_inner: DiagnosticCheck,
}

impl TraceDiagnostics {
    pub fn all_passed(&self) -> bool {
        self.fixed_residual.passed && self.qx_inner.passed && self.z_residual.as_ref().is_none_or(|c| c.passed)
    }
}

/// Maxima over the last `tail_fraction` of the rows (at least one row).
pub fn trace_diagnostics(
    space: &Space,
    trace: &IterationTrace,
    q: &Point,
    base: &Basepoint,
    tail_fraction: f64,
    thresholds: &DiagnosticThresholds,
) -> Result<TraceDiagnostics> {
    if trace.rows.is_empty() {
        return Err(Error::InvalidArgument("trace has no rows".into()));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!("tail fraction {tail_fraction} outside (0, 1]")));
    }
    let len = trace.rows.len();
    let take = ((len as f64 * tail_fraction).ceil() as usize).clamp(1, len);
    let tail = &trace.rows[len - take..];
    let mut fixed = 0.0f64;
    let mut z: Option<f64> = None;
    let mut qx = f64::NEG_INFINITY;
    for r in tail {
        fixed = fixed.max(r.fixed_residual);
        if let Some(v) = r.z_residual {
            z = Some(z.map_or(v, |m| m.max(v)));
        }
        qx = qx.max(quasilin(space, q, &base.o, q, &r.x)?);
    }
    let scale = 1.0 + space.distance(q, &base.o)?.powi(2);
    Ok(TraceDiagnostics {
        rows_examined: take,
        fixed_residual: DiagnosticCheck::new(fixed, thresholds.fixed_residual),
        z_residual: z.map(|v| DiagnosticCheck::new(v, thresholds.z_residual)),
        qx_inner: DiagnosticCheck::new(qx, thresholds.qx_inner * scale),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SpaceDescriptor;
    use crate::solvers::{Algorithm, TerminalStatus, TraceRow};

    #[test]
    fn constant_trace_at_q_is_clean() {
        let s = Space::new(&SpaceDescriptor::Euclidean { dim: 2 }).unwrap();
        let q = Point::euclidean(vec![0.0, 1.0]);
        let row = |n| TraceRow {
            n,
            x: q.clone(),
            fixed_residual: 0.0,
            step: 0.0,
            z_residual: Some(0.0),
            ref_distance: None,
            qx_inner: None,
            alpha: 0.5,
            perturbation_norm: 0.0,
            iterate_norm: 1.0,
            image_norm: 1.0,
            inner_iterations: 0,
        };
        let trace = IterationTrace {
            algorithm: Algorithm::Explicit,
            rows: (0..10).map(row).collect(),
            status: TerminalStatus::BudgetExhausted,
            final_point: q.clone(),
        };
        let o = Basepoint::new(s.origin());
        let d = trace_diagnostics(&s, &trace, &q, &o, 0.1, &DiagnosticThresholds::default()).unwrap();
        assert_eq!(d.rows_examined, 1);
        assert_eq!(d.fixed_residual.value, 0.0);
        assert_eq!(d.z_residual.unwrap().value, 0.0);
        assert_eq!(d.qx_inner.value, 0.0);
    }
}
