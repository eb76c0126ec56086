use thiserror::Error;

use crate::geometry::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is not an element of {space}: {reason}")]
    PointMismatch { space: String, reason: String },

    #[error("non-finite coordinate in point")]
    NonFinite,

    #[error("interpolation weight {0} lies outside [0, 1]")]
    WeightOutOfRange(f64),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid convex set: {0}")]
    InvalidSet(String),

    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point lies outside the convex set (distance {distance:e})")]
    NotInSet { distance: f64 },

    /// The inner Picard loop ran out of iterations; `best` is the last iterate.
    #[error("inner iteration budget of {iterations} exhausted; error bound {bound:e} above tolerance")]
    InnerBudget {
        best: Box<Point>,
        iterations: usize,
        bound: f64,
    },
}
