//! The implicit and explicit perturbed iterations.

use crate::convex::{contains, probe_points, project_point, validate_set, ConvexSet, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::geometry::{quasilin, Basepoint, Geodesic, Point};
use crate::rng::{self, Stream};
use crate::spaces::Space;

use super::mapping::Mapping;
use super::schedule::{validate_implicit_schedule, validate_schedules, Schedule};
use super::trace::{Algorithm, IterationTrace, TerminalStatus, TraceRow};

/// Iteration limits and bookkeeping shared by both algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Stop once `d(x_n, T x_n)` falls to this level; a negative value runs
    /// the whole budget.
    pub outer_tol: f64,
    /// Distance-to-fixed-point guarantee for each implicit step.
    pub inner_tol: f64,
    pub max_inner: usize,
    /// Seeds the perturbation directions.
    pub seed: u64,
    /// When set, rows record `d(x_n, q)` and `⟨→qo, →qx_n⟩`.
    pub reference: Option<Point>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { outer_tol: 1e-8, inner_tol: 1e-10, max_inner: 100_000, seed: 0, reference: None }
    }
}

/// Fixed point of `Φ(x) = P_C(αu ⊕ (1−α)Tx)` by Picard iteration.
///
/// `Φ` is a `(1−α)`-contraction, so stopping once
/// `d(x_{k+1}, x_k)·(1−α)/α ≤ inner_tol` leaves the returned point within
/// `inner_tol` of the fixed point.
#[allow(clippy::too_many_arguments)]
pub fn implicit_step(
    space: &Space,
    set: &ConvexSet,
    mapping: &Mapping,
    alpha: f64,
    u: &Point,
    x_start: &Point,
    inner_tol: f64,
    max_inner: usize,
) -> Result<(Point, usize)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::WeightOutOfRange(alpha));
    }
    let phi = |x: &Point| -> Result<Point> {
        let tx = mapping.apply(space, x)?;
        let y = space.geodesic_point(u, &tx, alpha)?;
        Ok(project_point(space, set, &y)?.0)
    };
    let factor = (1.0 - alpha) / alpha;
    let mut x = x_start.clone();
    let mut best = (f64::INFINITY, x.clone());
    for k in 1..=max_inner {
        let next = phi(&x)?;
        let bound = space.distance(&next, &x)? * factor;
        if bound <= inner_tol {
            return Ok((next, k));
        }
        if bound < best.0 {
            best = (bound, next.clone());
        }
        x = next;
    }
    Err(Error::InnerBudget { best: Box::new(best.1), iterations: max_inner, bound: best.0 })
}

struct Bookkeeping<'a> {
    space: &'a Space,
    base: &'a Basepoint,
    reference: Option<&'a Point>,
}

impl Bookkeeping<'_> {
    fn reference_columns(&self, x: &Point) -> Result<(Option<f64>, Option<f64>)> {
        match self.reference {
            None => Ok((None, None)),
            Some(q) => Ok((Some(self.space.distance(x, q)?), Some(quasilin(self.space, q, &self.base.o, q, x)?))),
        }
    }
}

fn perturbation(space: &Space, base: &Basepoint, norm: f64, stream: &mut Stream) -> Result<Point> {
    space.random_at_distance(&base.o, norm, stream)
}

fn check_common(space: &Space, set: &ConvexSet, mapping: &Mapping, base: &Basepoint, budget: usize) -> Result<()> {
    validate_set(space, set)?;
    mapping.validate(space)?;
    if let Some(v) = space.validate_point(&base.o) {
        return Err(Error::InvalidArgument(format!("basepoint: {v}")));
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    Ok(())
}

/// `x_m = P_C(α_m u_m ⊕ (1−α_m)T x_m)` for `m = 1..=budget`, each solved by
/// [`implicit_step`] warm-started from `x_{m−1}` (`x_0 = P_C o`).
#[allow(clippy::too_many_arguments)]
pub fn run_implicit(
    space: &Space,
    set: &ConvexSet,
    mapping: &Mapping,
    schedule: &Schedule,
    base: &Basepoint,
    budget: usize,
    options: &RunOptions,
) -> Result<IterationTrace> {
    check_common(space, set, mapping, base, budget)?;
    let report = validate_implicit_schedule(schedule, budget);
    if let Some((name, c)) = report.failures().first() {
        return Err(Error::InvalidSchedule(format!("{name}: {}", c.evidence)));
    }
    let book = Bookkeeping { space, base, reference: options.reference.as_ref() };
    let mut stream = rng::stream(options.seed, "perturbation", 0);
    let mut x = project_point(space, set, &base.o)?.0;
    let mut rows = Vec::with_capacity(budget.min(1 << 16));
    let mut status = TerminalStatus::BudgetExhausted;
    for m in 1..=budget {
        let alpha = schedule.alpha.value(m);
        let u_norm = schedule.perturbation.value(m);
        let u = perturbation(space, base, u_norm, &mut stream)?;
        let (next, inner) =
            match implicit_step(space, set, mapping, alpha, &u, &x, options.inner_tol, options.max_inner) {
                Ok(r) => r,
                Err(Error::InnerBudget { .. }) => {
                    status = TerminalStatus::InnerBudgetExhausted;
                    break;
                }
                Err(e) => return Err(e),
            };
        let tx = mapping.apply(space, &next)?;
        let fixed_residual = space.distance(&next, &tx)?;
        let (ref_distance, qx_inner) = book.reference_columns(&next)?;
        rows.push(TraceRow {
            n: m,
            fixed_residual,
            step: space.distance(&next, &x)?,
            z_residual: None,
            ref_distance,
            qx_inner,
            alpha,
            perturbation_norm: space.distance(&u, &base.o)?,
            iterate_norm: space.distance(&next, &base.o)?,
            image_norm: space.distance(&tx, &base.o)?,
            inner_iterations: inner,
            x: next.clone(),
        });
        x = next;
        if fixed_residual <= options.outer_tol {
            status = TerminalStatus::Converged;
            break;
        }
    }
    Ok(IterationTrace { algorithm: Algorithm::Implicit, rows, status, final_point: x })
}

/// `y_n = α_n u_n ⊕ (1−α_n)T x_n`, `z_n = P_C y_n`,
/// `x_{n+1} = (1−β_n)x_n ⊕ β_n z_n` for `n = 0..budget`.
///
/// Row `n` describes `x_n`. On convergence the final point is the `x_n`
/// whose residual met the tolerance; otherwise it is `x_budget`.
#[allow(clippy::too_many_arguments)]
pub fn run_explicit(
    space: &Space,
    set: &ConvexSet,
    mapping: &Mapping,
    schedule: &Schedule,
    base: &Basepoint,
    x0: &Point,
    budget: usize,
    options: &RunOptions,
) -> Result<IterationTrace> {
    check_common(space, set, mapping, base, budget)?;
    if let Some(v) = space.validate_point(x0) {
        return Err(Error::InvalidArgument(format!("x0: {v}")));
    }
    if !contains(space, set, x0, MEMBERSHIP_TOL)? {
        return Err(Error::InvalidArgument("x0 must lie in the convex set".into()));
    }
    let report = validate_schedules(schedule, budget);
    if let Some((name, c)) = report.failures().first() {
        return Err(Error::InvalidSchedule(format!("{name}: {}", c.evidence)));
    }
    let beta_law = schedule.beta.as_ref().expect("validated");
    let book = Bookkeeping { space, base, reference: options.reference.as_ref() };
    let mut stream = rng::stream(options.seed, "perturbation", 0);
    let mut x = x0.clone();
    let mut rows = Vec::with_capacity(budget.min(1 << 16));
    let mut status = TerminalStatus::BudgetExhausted;
    for n in 0..budget {
        let alpha = schedule.alpha.value(n);
        let beta = beta_law.value(n);
        let u = perturbation(space, base, schedule.perturbation.value(n), &mut stream)?;
        let tx = mapping.apply(space, &x)?;
        let y = space.geodesic_point(&u, &tx, alpha)?;
        let z = project_point(space, set, &y)?.0;
        let next = space.geodesic_point(&x, &z, 1.0 - beta)?;
        let fixed_residual = space.distance(&x, &tx)?;
        let (ref_distance, qx_inner) = book.reference_columns(&x)?;
        rows.push(TraceRow {
            n,
            fixed_residual,
            step: space.distance(&next, &x)?,
            z_residual: Some(space.distance(&z, &x)?),
            ref_distance,
            qx_inner,
            alpha,
            perturbation_norm: space.distance(&u, &base.o)?,
            iterate_norm: space.distance(&x, &base.o)?,
            image_norm: space.distance(&tx, &base.o)?,
            inner_iterations: 0,
            x: x.clone(),
        });
        if fixed_residual <= options.outer_tol {
            status = TerminalStatus::Converged;
            break;
        }
        x = next;
    }
    Ok(IterationTrace { algorithm: Algorithm::Explicit, rows, status, final_point: x })
}

/// Where the fixed-point set comes from.
#[derive(Debug, Clone, Copy)]
pub enum FixedSetSource<'a> {
    Set(&'a ConvexSet),
    Samples(&'a [Point]),
}

/// `max_p ⟨→qo, →qp⟩` over points `p` of the fixed-point set. Nonpositive
/// values certify `q` as the point of the set nearest `o`, at the resolution
/// of the probes.
pub fn nearest_fixed_point_residual(
    space: &Space,
    q: &Point,
    base: &Basepoint,
    fixed: FixedSetSource<'_>,
    probes: usize,
    seed: u64,
) -> Result<f64> {
    let sampled;
    let points = match fixed {
        FixedSetSource::Samples(p) => p,
        FixedSetSource::Set(set) => {
            let anchor = project_point(space, set, q)?.0;
            sampled = probe_points(space, set, &anchor, probes, &mut rng::stream(seed, "fixed-point-probes", 0))?;
            &sampled[..]
        }
    };
    if points.is_empty() {
        return Err(Error::InvalidArgument("the fixed-point set has no samples".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    for p in points {
        worst = worst.max(quasilin(space, q, &base.o, q, p)?);
    }
    Ok(worst)
}
