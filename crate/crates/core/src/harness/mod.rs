//! Randomized verification of the metric inequalities a Hadamard space must
//! satisfy, a recursion demonstrator, and diagnostics over solver traces.
//!
//! Every trial draws its own stream from `(seed, family, trial)`, so trials
//! run in parallel and reports do not depend on scheduling.

mod diagnostics;
mod liu;
mod properties;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Geodesic, Point};
use crate::rng;
use crate::spaces::{SamplingRegion, Space};

pub use diagnostics::{trace_diagnostics, DiagnosticCheck, DiagnosticThresholds, TraceDiagnostics};
pub use liu::{liu_recursion, LiuHypotheses, LiuOutcome};
pub use properties::{Evaluation, Property, Relation, Witness, AXIOMS, LEMMAS};

/// Sampling radius used by the default checks; hyperbolic samples fill a
/// ball of this radius.
pub const DEFAULT_SAMPLING_SCALE: f64 = 5.0;
/// Points drawn per trial; enough for every property.
const WITNESS_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub trials: usize,
    pub violations: usize,
    /// Smallest `slack / scale` seen; negative below `−tolerance` means a
    /// violation.
    pub worst_margin: f64,
    pub worst_witness: Option<Witness>,
    pub tolerance: f64,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Re-evaluates a witness standalone.
pub fn replay<G: Geodesic + ?Sized>(geometry: &G, property: Property, witness: &Witness) -> Result<Evaluation> {
    property.evaluate(geometry, witness)
}

/// A geometry whose distance is `d^power` of an underlying space while
/// geodesics are left unchanged. For `power ≠ 1` it is not CAT(0), which
/// makes it a negative control for the checks.
#[derive(Debug, Clone)]
pub struct PowerDistorted {
    pub inner: Space,
    pub power: f64,
}

impl Geodesic for PowerDistorted {
    fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        Ok(self.inner.distance(a, b)?.powf(self.power))
    }

    fn geodesic_point(&self, a: &Point, b: &Point, lambda: f64) -> Result<Point> {
        self.inner.geodesic_point(a, b, lambda)
    }
}

fn draw_witness(sampler: &Space, region: &SamplingRegion, seed: u64, family: &str, trial: usize) -> Result<Witness> {
    use rand::Rng;
    let mut s = rng::stream(seed, family, trial as u64);
    let points = (0..WITNESS_POINTS).map(|_| sampler.random_point(region, &mut s)).collect::<Result<Vec<_>>>()?;
    // one trial in sixteen pins λ to an endpoint
    let lambda = match trial % 16 {
        0 => 0.0,
        8 => 1.0,
        _ => s.gen::<f64>(),
    };
    Ok(Witness { points, lambda })
}

/// Runs `properties` on `trials` witnesses drawn from `region` of `sampler`
/// and evaluated in `geometry`.
#[allow(clippy::too_many_arguments)]
pub fn check_properties<G: Geodesic + ?Sized>(
    geometry: &G,
    sampler: &Space,
    region: &SamplingRegion,
    properties: &[Property],
    family: &str,
    trials: usize,
    eps: f64,
    seed: u64,
) -> Result<Vec<PropertyReport>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {eps} must be nonnegative")));
    }
    let outcomes: Vec<(Witness, Vec<Evaluation>)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<_> {
            let w = draw_witness(sampler, region, seed, family, t)?;
            let evals = properties.iter().map(|p| p.evaluate(geometry, &w)).collect::<Result<Vec<_>>>()?;
            Ok((w, evals))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut reports: Vec<PropertyReport> = properties
        .iter()
        .map(|&property| PropertyReport {
            property,
            trials,
            violations: 0,
            worst_margin: f64::INFINITY,
            worst_witness: None,
            tolerance: eps,
        })
        .collect();
    for (w, evals) in &outcomes {
        for (report, e) in reports.iter_mut().zip(evals) {
            let margin = e.slack() / e.scale;
            if !e.holds(eps) || margin.is_nan() {
                report.violations += 1;
            }
            if margin < report.worst_margin || (margin.is_nan() && !report.worst_margin.is_nan()) {
                report.worst_margin = margin;
                report.worst_witness = Some(w.clone());
            }
        }
    }
    Ok(reports)
}

/// Metric symmetry, triangle inequality, both geodesic distance identities,
/// Cauchy–Schwarz and the quasilinearization identities.
pub fn check_space_axioms(space: &Space, trials: usize, eps: f64, seed: u64) -> Result<Vec<PropertyReport>> {
    let region = space.default_region(DEFAULT_SAMPLING_SCALE);
    check_properties(space, space, &region, &AXIOMS, "axioms", trials, eps, seed)
}

/// The five geodesic and quasilinearization inequalities.
pub fn check_lemmas(space: &Space, trials: usize, eps: f64, seed: u64) -> Result<Vec<PropertyReport>> {
    let region = space.default_region(DEFAULT_SAMPLING_SCALE);
    check_properties(space, space, &region, &LEMMAS, "lemmas", trials, eps, seed)
}

/// Axioms and lemmas against a geometry that only borrows `sampler` for its
/// points.
pub fn check_geometry<G: Geodesic + ?Sized>(
    geometry: &G,
    sampler: &Space,
    trials: usize,
    eps: f64,
    seed: u64,
) -> Result<Vec<PropertyReport>> {
    let region = sampler.default_region(DEFAULT_SAMPLING_SCALE);
    let mut out = check_properties(geometry, sampler, &region, &AXIOMS, "axioms", trials, eps, seed)?;
    out.extend(check_properties(geometry, sampler, &region, &LEMMAS, "lemmas", trials, eps, seed)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SpaceDescriptor;
    use crate::spaces::tree::TreeTopology;

    #[test]
    fn euclidean_plane_passes_everything() {
        let s = Space::new(&SpaceDescriptor::Euclidean { dim: 2 }).unwrap();
        for r in check_space_axioms(&s, 500, 1e-9, 1).unwrap().iter().chain(&check_lemmas(&s, 500, 1e-9, 1).unwrap()) {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn random_tree_passes_the_lemmas() {
        let topo = TreeTopology::random(10, &mut rng::stream(3, "tree", 0));
        let s = Space::new(&SpaceDescriptor::WeightedTree { topology: topo }).unwrap();
        for r in check_lemmas(&s, 500, 1e-9, 2).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn distorted_metric_is_caught_and_replays() {
        let inner = Space::new(&SpaceDescriptor::Euclidean { dim: 2 }).unwrap();
        let bad = PowerDistorted { inner: inner.clone(), power: 1.5 };
        let reports = check_geometry(&bad, &inner, 300, 1e-8, 5).unwrap();
        let failing: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
        assert!(!failing.is_empty());
        for r in failing {
            let w = r.worst_witness.as_ref().unwrap();
            assert!(replay(&bad, r.property, w).unwrap().slack() < 0.0);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let s = Space::new(&SpaceDescriptor::Hyperbolic { dim: 2 }).unwrap();
        assert_eq!(check_lemmas(&s, 200, 1e-8, 9).unwrap(), check_lemmas(&s, 200, 1e-8, 9).unwrap());
    }

    #[test]
    fn zero_trials_is_rejected() {
        let s = Space::new(&SpaceDescriptor::Euclidean { dim: 1 }).unwrap();
        assert!(check_space_axioms(&s, 0, 1e-8, 0).is_err());
    }
}
