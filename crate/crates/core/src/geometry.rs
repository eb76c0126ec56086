//! Geodesic metric structure shared by every model space.
//!
//! A Hadamard space is only ever touched through two primitives, the metric
//! and the geodesic combination `λx ⊕ (1−λ)y`. Everything else in this module
//! (the quasilinearization form, norms relative to a base point, the
//! Cauchy–Schwarz gap) is derived from those two and therefore works unchanged
//! for any implementor of [`Geodesic`], including deliberately broken ones
//! used as negative controls.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::tree::TreeTopology;

/// Which model space a computation lives in.
///
/// JSON form is externally tagged, e.g. `{"euclidean":{"dim":2}}` or
/// `{"product":{"left":{..},"right":{..}}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceDescriptor {
    Euclidean { dim: usize },
    Hyperbolic { dim: usize },
    WeightedTree { topology: TreeTopology },
    Product { left: Box<SpaceDescriptor>, right: Box<SpaceDescriptor> },
}

impl SpaceDescriptor {
    pub fn product(left: SpaceDescriptor, right: SpaceDescriptor) -> Self {
        SpaceDescriptor::Product { left: Box::new(left), right: Box::new(right) }
    }

    /// Number of nested `Product` levels (0 for a factor space).
    pub fn product_depth(&self) -> usize {
        match self {
            SpaceDescriptor::Product { left, right } => 1 + left.product_depth().max(right.product_depth()),
            _ => 0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SpaceDescriptor::Euclidean { dim } => format!("euclidean({dim})"),
            SpaceDescriptor::Hyperbolic { dim } => format!("hyperbolic({dim})"),
            SpaceDescriptor::WeightedTree { topology } => {
                format!("tree({} vertices)", topology.vertices)
            }
            SpaceDescriptor::Product { left, right } => {
                format!("product({}, {})", left.label(), right.label())
            }
        }
    }
}

/// An element of a model space.
///
/// The variant doubles as the space tag: coordinates are only meaningful
/// together with the [`crate::spaces::Space`] that validated them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    /// Cartesian coordinates, length `dim`.
    Euclidean(Vec<f64>),
    /// Hyperboloid coordinates `(x₀, x₁, …, x_dim)` with `x₀ > 0`.
    Hyperboloid(Vec<f64>),
    /// Arc-length `offset` from the first listed endpoint of `edge`.
    Tree { edge: usize, offset: f64 },
    Product(Box<Point>, Box<Point>),
}

impl Point {
    pub fn euclidean(coords: impl Into<Vec<f64>>) -> Self {
        Point::Euclidean(coords.into())
    }

    pub fn tree(edge: usize, offset: f64) -> Self {
        Point::Tree { edge, offset }
    }

    pub fn pair(left: Point, right: Point) -> Self {
        Point::Product(Box::new(left), Box::new(right))
    }

    /// Raw coordinate slice for the vector-backed variants.
    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Point::Euclidean(c) | Point::Hyperboloid(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Point::Euclidean(c) | Point::Hyperboloid(c) => c.iter().all(|v| v.is_finite()),
            Point::Tree { offset, .. } => offset.is_finite(),
            Point::Product(l, r) => l.is_finite() && r.is_finite(),
        }
    }
}

/// The formal vector `→ab`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedPair {
    pub tail: Point,
    pub head: Point,
}

impl OrientedPair {
    pub fn new(tail: Point, head: Point) -> Self {
        Self { tail, head }
    }

    /// `⟨→self, →other⟩`.
    pub fn inner<G: Geodesic + ?Sized>(&self, geometry: &G, other: &OrientedPair) -> Result<f64> {
        quasilin(geometry, &self.tail, &self.head, &other.tail, &other.head)
    }
}

/// The distinguished "zero" `o` that defines `‖x‖ := d(x, o)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Basepoint {
    pub o: Point,
}

impl Basepoint {
    pub fn new(o: Point) -> Self {
        Self { o }
    }
}

/// A uniquely geodesic metric space.
pub trait Geodesic: Send + Sync {
    fn distance(&self, a: &Point, b: &Point) -> Result<f64>;

    /// `λx ⊕ (1−λ)y`: the point `z` on `[x, y]` with `d(z,x) = (1−λ)d(x,y)`
    /// and `d(z,y) = λ d(x,y)`. The weight `λ` sits on `x`.
    fn geodesic_point(&self, x: &Point, y: &Point, lambda: f64) -> Result<Point>;
}

impl<G: Geodesic + ?Sized> Geodesic for &G {
    fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        (**self).distance(a, b)
    }

    fn geodesic_point(&self, x: &Point, y: &Point, lambda: f64) -> Result<Point> {
        (**self).geodesic_point(x, y, lambda)
    }
}

pub(crate) fn check_weight(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::WeightOutOfRange(lambda))
    }
}

/// Quasilinearization `⟨→ab, →cd⟩ = ½(d²(a,d) + d²(b,c) − d²(a,c) − d²(b,d))`.
pub fn quasilin<G: Geodesic + ?Sized>(geometry: &G, a: &Point, b: &Point, c: &Point, d: &Point) -> Result<f64> {
    let ad = geometry.distance(a, d)?;
    let bc = geometry.distance(b, c)?;
    let ac = geometry.distance(a, c)?;
    let bd = geometry.distance(b, d)?;
    Ok(0.5 * ((ad * ad + bc * bc) - (ac * ac + bd * bd)))
}

/// `‖x‖ = d(x, o)`.
pub fn norm<G: Geodesic + ?Sized>(geometry: &G, x: &Point, base: &Basepoint) -> Result<f64> {
    geometry.distance(x, &base.o)
}

/// `d(a,b)·d(c,d) − ⟨→ab, →cd⟩`; nonnegative in every CAT(0) space.
pub fn cauchy_schwarz_gap<G: Geodesic + ?Sized>(geometry: &G, a: &Point, b: &Point, c: &Point, d: &Point) -> Result<f64> {
    let ab = geometry.distance(a, b)?;
    let cd = geometry.distance(c, d)?;
    Ok(ab * cd - quasilin(geometry, a, b, c, d)?)
}

/// `1 + Σ d²` over all pairs of `points`; the unit in which every
/// degree-two inequality tolerance is expressed.
pub fn tolerance_scale<G: Geodesic + ?Sized>(geometry: &G, points: &[&Point]) -> Result<f64> {
    let mut scale = 1.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = geometry.distance(a, b)?;
            scale += d * d;
        }
    }
    Ok(scale)
}
