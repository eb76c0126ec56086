//! Geodesic computation in Hadamard (complete CAT(0)) spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: the metric/geodesic interface and the quasilinearization
//!   form `⟨→ab, →cd⟩` derived from it.
//! * [`spaces`]: Euclidean, hyperbolic (hyperboloid), metric-tree and product
//!   model spaces with seeded sampling.
//! * [`convex`]: closed convex sets, metric projections and the variational
//!   certificate `⟨→xu, →uy⟩ ≥ 0`.
//! * [`solvers`]: nonexpansive mappings and the implicit and explicit
//!   perturbed iterations for their fixed points.
//! * [`harness`]: randomized verification of the metric inequalities and
//!   diagnostics over solver traces.
//! * [`experiment`]: JSON-configured runs producing CSV traces and summaries.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convex;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod harness;
pub mod rng;
pub mod solvers;
pub mod spaces;

pub use error::{Error, Result};
pub use geometry::{cauchy_schwarz_gap, norm, quasilin, Basepoint, Geodesic, OrientedPair, Point, SpaceDescriptor};
pub use spaces::{SamplingRegion, Space};
