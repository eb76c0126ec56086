//! Step-size and perturbation schedules and the convergence-condition check.
//!
//! Power laws are decided analytically from their exponents. Tabulated
//! sequences are judged by a heuristic: the decay exponent is estimated from
//! the log-log slope between the midpoint and the end of the table, and the
//! power-law rules are applied to that estimate. Such verdicts are flagged.

use serde::{Deserialize, Serialize};

/// Tables shorter than this are never accepted by the heuristic.
pub const MIN_TABLE_LEN: usize = 8;
/// Minimum horizon for range checks.
pub const MIN_HORIZON: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// `scale · (n + shift)^(−exponent)`.
    PowerLaw { scale: f64, shift: f64, exponent: f64 },
    Constant { value: f64 },
    /// Explicit values; the last one repeats past the end.
    Table { values: Vec<f64> },
}

impl Law {
    pub fn power(scale: f64, shift: f64, exponent: f64) -> Self {
        Law::PowerLaw { scale, shift, exponent }
    }

    pub fn value(&self, n: usize) -> f64 {
        match self {
            Law::PowerLaw { scale, shift, exponent } => scale * (n as f64 + shift).powf(-exponent),
            Law::Constant { value } => *value,
            Law::Table { values } => values.get(n).or(values.last()).copied().unwrap_or(f64::NAN),
        }
    }

    /// Decay exponent and whether it was estimated. `None` when no exponent
    /// can be assigned.
    pub(crate) fn decay(&self) -> Option<(f64, f64, bool)> {
        match self {
            Law::PowerLaw { scale, exponent, .. } => Some((*scale, *exponent, false)),
            Law::Constant { value } => Some((*value, 0.0, false)),
            Law::Table { values } => {
                if values.len() < MIN_TABLE_LEN {
                    return None;
                }
                let (i, j) = (values.len() / 2, values.len() - 1);
                let (a, b) = (values[i], values[j]);
                if a == 0.0 && b == 0.0 && values[i..].iter().all(|v| *v == 0.0) {
                    return Some((0.0, f64::INFINITY, true));
                }
                if !(a > 0.0 && b > 0.0) {
                    return None;
                }
                let p = -(b / a).ln() / ((j as f64 + 1.0) / (i as f64 + 1.0)).ln();
                Some((b, p, true))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// `α_n`, the weight on the perturbation point.
    pub alpha: Law,
    /// `β_n`, the relaxation weight (explicit algorithm only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Law>,
    /// `‖u_n‖ = d(u_n, o)`.
    pub perturbation: Law,
}

impl Schedule {
    /// `α_m = 1/(m+1)`, `‖u_m‖ = 1/(m+1)²`, indexed from `m = 1`.
    pub fn default_implicit() -> Self {
        Self { alpha: Law::power(1.0, 1.0, 1.0), beta: None, perturbation: Law::power(1.0, 1.0, 2.0) }
    }

    /// `α_n = (n+2)^(−0.7)`, `β_n = 0.5`, `‖u_n‖ = (n+2)^(−1)`, indexed from `n = 0`.
    pub fn default_explicit() -> Self {
        Self {
            alpha: Law::power(1.0, 2.0, 0.7),
            beta: Some(Law::Constant { value: 0.5 }),
            perturbation: Law::power(1.0, 2.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub verdict: Verdict,
    pub heuristic: bool,
    pub evidence: String,
}

impl ConditionCheck {
    pub(crate) fn new(pass: bool, heuristic: bool, evidence: impl Into<String>) -> Self {
        Self { verdict: if pass { Verdict::Pass } else { Verdict::Fail }, heuristic, evidence: evidence.into() }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Outcome of [`validate_schedules`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleReport {
    /// `α_n → 0` and `Σ α_n = ∞`.
    pub condition_i: ConditionCheck,
    /// `0 < liminf β_n ≤ limsup β_n < 1`.
    pub condition_ii: ConditionCheck,
    /// `Σ α_n ‖u_n‖ < ∞`.
    pub condition_iii: ConditionCheck,
    /// `0 < α_n < 1` and `0 < β_n < 1` over the horizon.
    pub range: ConditionCheck,
}

impl ScheduleReport {
    pub fn all_passed(&self) -> bool {
        [&self.condition_i, &self.condition_ii, &self.condition_iii, &self.range].iter().all(|c| c.passed())
    }

    /// Failing checks, conditions first.
    pub fn failures(&self) -> Vec<(&'static str, &ConditionCheck)> {
        [
            ("condition (i)", &self.condition_i),
            ("condition (ii)", &self.condition_ii),
            ("condition (iii)", &self.condition_iii),
            ("range", &self.range),
        ]
        .into_iter()
        .filter(|(_, c)| !c.passed())
        .collect()
    }
}

/// Preconditions of the implicit algorithm: `α_m → 0`, `‖u_m‖ → 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicitReport {
    pub alpha_vanishes: ConditionCheck,
    pub perturbation_vanishes: ConditionCheck,
    pub range: ConditionCheck,
}

impl ImplicitReport {
    pub fn all_passed(&self) -> bool {
        self.alpha_vanishes.passed() && self.perturbation_vanishes.passed() && self.range.passed()
    }

    pub fn failures(&self) -> Vec<(&'static str, &ConditionCheck)> {
        [
            ("alpha -> 0", &self.alpha_vanishes),
            ("perturbation norm -> 0", &self.perturbation_vanishes),
            ("range", &self.range),
        ]
        .into_iter()
        .filter(|(_, c)| !c.passed())
        .collect()
    }
}

fn vanishes(law: &Law, name: &str) -> ConditionCheck {
    match law.decay() {
        None => ConditionCheck::new(false, true, format!("{name}: cannot estimate the decay of the table")),
        Some((scale, p, heuristic)) => {
            let pass = scale == 0.0 || p > 0.0;
            ConditionCheck::new(pass, heuristic, format!("{name}: scale {scale}, decay exponent {p}"))
        }
    }
}

/// `Σ law_n < ∞`.
pub(crate) fn summable(law: &Law, name: &str) -> ConditionCheck {
    match law.decay() {
        None => ConditionCheck::new(false, true, format!("{name}: cannot estimate the decay of the table")),
        Some((scale, p, heuristic)) => {
            let pass = scale == 0.0 || p > 1.0;
            ConditionCheck::new(pass, heuristic, format!("{name}: scale {scale}, decay exponent {p}"))
        }
    }
}

pub(crate) fn condition_i(alpha: &Law) -> ConditionCheck {
    match alpha.decay() {
        None => ConditionCheck::new(false, true, "alpha: cannot estimate the decay of the table"),
        Some((scale, p, heuristic)) => {
            if !(scale > 0.0) {
                ConditionCheck::new(false, heuristic, "alpha vanishes identically, so its sum is finite")
            } else if p <= 0.0 {
                ConditionCheck::new(false, heuristic, format!("alpha does not tend to 0 (exponent {p})"))
            } else if p > 1.0 {
                ConditionCheck::new(false, heuristic, format!("sum of alpha converges (p-series with exponent {p} > 1)"))
            } else {
                ConditionCheck::new(true, heuristic, format!("alpha -> 0 and sum diverges (exponent {p} in (0, 1])"))
            }
        }
    }
}

fn condition_ii(beta: Option<&Law>) -> ConditionCheck {
    match beta {
        None => ConditionCheck::new(false, false, "beta schedule missing"),
        Some(Law::Constant { value }) => {
            ConditionCheck::new(*value > 0.0 && *value < 1.0, false, format!("constant beta {value}"))
        }
        Some(Law::PowerLaw { scale, exponent, .. }) => {
            if *exponent == 0.0 {
                ConditionCheck::new(*scale > 0.0 && *scale < 1.0, false, format!("constant beta {scale}"))
            } else if *exponent > 0.0 {
                ConditionCheck::new(false, false, format!("beta -> 0 (exponent {exponent}), liminf is 0"))
            } else {
                ConditionCheck::new(false, false, format!("beta grows (exponent {exponent})"))
            }
        }
        Some(Law::Table { values }) => {
            if values.len() < MIN_TABLE_LEN {
                return ConditionCheck::new(false, true, "beta table too short to judge");
            }
            let tail = &values[values.len() / 2..];
            let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            ConditionCheck::new(lo > 0.0 && hi < 1.0, true, format!("tail of beta spans [{lo}, {hi}]"))
        }
    }
}

fn condition_iii(alpha: &Law, norm: &Law) -> ConditionCheck {
    match (alpha.decay(), norm.decay()) {
        (_, Some((0.0, _, heuristic))) => {
            ConditionCheck::new(true, heuristic, "perturbation vanishes identically")
        }
        (Some((_, pa, ha)), Some((_, pu, hu))) => {
            let total = pa + pu;
            ConditionCheck::new(
                total > 1.0,
                ha || hu,
                format!("alpha*|u| decays with exponent {total} ({} 1)", if total > 1.0 { ">" } else { "<=" }),
            )
        }
        _ => ConditionCheck::new(false, true, "cannot estimate the decay of alpha*|u|"),
    }
}

fn range_check(schedule: &Schedule, first: usize, horizon: usize, with_beta: bool) -> ConditionCheck {
    let horizon = horizon.max(MIN_HORIZON);
    for n in first..first + horizon {
        let a = schedule.alpha.value(n);
        if !(a > 0.0 && a < 1.0) {
            return ConditionCheck::new(false, false, format!("alpha_{n} = {a} is outside (0, 1)"));
        }
        if with_beta {
            if let Some(beta) = &schedule.beta {
                let b = beta.value(n);
                if !(b > 0.0 && b < 1.0) {
                    return ConditionCheck::new(false, false, format!("beta_{n} = {b} is outside (0, 1)"));
                }
            }
        }
        let u = schedule.perturbation.value(n);
        if !(u >= 0.0 && u.is_finite()) {
            return ConditionCheck::new(false, false, format!("perturbation norm {u} at step {n} is invalid"));
        }
    }
    ConditionCheck::new(true, false, format!("all values in range for n in [{first}, {})", first + horizon))
}

/// Checks the three conditions under which the explicit iteration converges,
/// plus the `(0, 1)` range of `α_n` and `β_n` for `n` in `0..horizon`.
pub fn validate_schedules(schedule: &Schedule, horizon: usize) -> ScheduleReport {
    ScheduleReport {
        condition_i: condition_i(&schedule.alpha),
        condition_ii: condition_ii(schedule.beta.as_ref()),
        condition_iii: condition_iii(&schedule.alpha, &schedule.perturbation),
        range: range_check(schedule, 0, horizon, true),
    }
}

/// Checks the implicit iteration's requirements for `m` in `1..=horizon`.
pub fn validate_implicit_schedule(schedule: &Schedule, horizon: usize) -> ImplicitReport {
    ImplicitReport {
        alpha_vanishes: vanishes(&schedule.alpha, "alpha"),
        perturbation_vanishes: vanishes(&schedule.perturbation, "perturbation norm"),
        range: range_check(schedule, 1, horizon, false),
    }
}
