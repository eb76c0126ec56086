//! Worst-case simulation of `a_{n+1} ≤ (1−γ_n)a_n + γ_nδ_n + σ_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::schedule::{condition_i, summable};
use crate::solvers::{ConditionCheck, Law};

/// The three hypotheses under which `a_n → 0`, decided from the laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiuHypotheses {
    /// `γ_n → 0` and `Σ γ_n = ∞`.
    pub gamma: ConditionCheck,
    /// `limsup δ_n ≤ 0` or `Σ γ_n|δ_n| < ∞`.
    pub delta: ConditionCheck,
    /// `Σ σ_n < ∞`.
    pub sigma: ConditionCheck,
}

impl LiuHypotheses {
    pub fn all_passed(&self) -> bool {
        self.gamma.passed() && self.delta.passed() && self.sigma.passed()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiuOutcome {
    /// `a_0, …, a_N`.
    pub values: Vec<f64>,
    pub hypotheses: LiuHypotheses,
    /// `a_N ≤ threshold`.
    pub consistent: bool,
    /// `a_n` is nonincreasing over the second half of the run.
    pub decreasing_tail: bool,
    pub threshold: f64,
}

impl LiuOutcome {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("a_0 is always present")
    }
}

fn delta_hypothesis(gamma: &Law, delta: &Law) -> ConditionCheck {
    match delta.decay() {
        None => ConditionCheck::new(false, true, "delta: cannot estimate the decay of the table"),
        Some((scale, p, heuristic)) => {
            if scale <= 0.0 && p <= 0.0 {
                return ConditionCheck::new(true, heuristic, format!("delta is eventually {scale} <= 0"));
            }
            if scale <= 0.0 || p > 0.0 {
                return ConditionCheck::new(true, heuristic, format!("delta -> 0 (exponent {p}), so limsup <= 0"));
            }
            match gamma.decay() {
                Some((_, pg, hg)) if pg + p > 1.0 => ConditionCheck::new(
                    true,
                    heuristic || hg,
                    format!("gamma*|delta| decays with exponent {} > 1", pg + p),
                ),
                _ => ConditionCheck::new(false, heuristic, "delta stays positive and gamma*|delta| is not summable"),
            }
        }
    }
}

/// Iterates the recursion with equality for `n = 0..N`, clamping at zero.
///
/// `consistent` reports `a_N ≤ threshold`; this demonstrates the conclusion
/// numerically and proves nothing.
pub fn liu_recursion(a0: f64, gamma: &Law, delta: &Law, sigma: &Law, n: usize, threshold: f64) -> Result<LiuOutcome> {
    if !(a0 >= 0.0 && a0.is_finite()) {
        return Err(Error::InvalidArgument(format!("a0 = {a0} must be finite and nonnegative")));
    }
    let mut values = Vec::with_capacity(n + 1);
    values.push(a0);
    let mut a = a0;
    for k in 0..n {
        let g = gamma.value(k);
        if !(g > 0.0 && g < 1.0) {
            return Err(Error::InvalidArgument(format!("gamma_{k} = {g} is outside (0, 1)")));
        }
        let s = sigma.value(k);
        if !(s >= 0.0) {
            return Err(Error::InvalidArgument(format!("sigma_{k} = {s} is negative")));
        }
        a = ((1.0 - g) * a + g * delta.value(k) + s).max(0.0);
        values.push(a);
    }
    let hypotheses = LiuHypotheses {
        gamma: {
            let mut c = condition_i(gamma);
            c.evidence = c.evidence.replace("alpha", "gamma");
            c
        },
        delta: delta_hypothesis(gamma, delta),
        sigma: summable(sigma, "sigma"),
    };
    let decreasing_tail = values[values.len() / 2..].windows(2).all(|w| w[1] <= w[0]);
    Ok(LiuOutcome { consistent: a <= threshold, decreasing_tail, threshold, hypotheses, values })
}
