//! The inequalities and identities under test, each evaluated on a witness.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{quasilin, tolerance_scale, Geodesic, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// `d(a,b) = d(b,a)`.
    MetricSymmetry,
    /// `d(a,c) ≤ d(a,b) + d(b,c)`.
    TriangleInequality,
    /// `d(λa ⊕ (1−λ)b, a) = (1−λ)d(a,b)`.
    GeodesicDistanceToStart,
    /// `d(λa ⊕ (1−λ)b, b) = λd(a,b)`.
    GeodesicDistanceToEnd,
    /// `⟨→ab, →cd⟩ ≤ d(a,b)d(c,d)`.
    CauchySchwarz,
    /// `⟨→ab, →cd⟩ = ⟨→cd, →ab⟩`.
    QuasilinSymmetry,
    /// `⟨→ab, →cd⟩ = −⟨→ba, →cd⟩`.
    QuasilinAntisymmetry,
    /// `⟨→ax, →cd⟩ + ⟨→xb, →cd⟩ = ⟨→ab, →cd⟩`.
    QuasilinAdditivity,
    /// `d(λp ⊕ (1−λ)q, λr ⊕ (1−λ)s) ≤ λd(p,r) + (1−λ)d(q,s)`.
    GeodesicPairContraction,
    /// `d(λx ⊕ (1−λ)y, z) ≤ λd(x,z) + (1−λ)d(y,z)`.
    DistanceConvexity,
    /// `d²(λx ⊕ (1−λ)y, z) ≤ λd²(x,z) + (1−λ)d²(y,z) − λ(1−λ)d²(x,y)`.
    SquaredDistanceConvexity,
    /// With `z = λx ⊕ (1−λ)y`: `⟨→zy, →zw⟩ ≤ λ⟨→xy, →zw⟩`.
    QuasilinGeodesicScaling,
    /// `d²(λx ⊕ (1−λ)y, z) ≤ λ²d²(x,z) + (1−λ)²d²(y,z) + 2λ(1−λ)⟨→xz, →yz⟩`.
    SquareExpansion,
}

pub const AXIOMS: [Property; 8] = [
    Property::MetricSymmetry,
    Property::TriangleInequality,
    Property::GeodesicDistanceToStart,
    Property::GeodesicDistanceToEnd,
    Property::CauchySchwarz,
    Property::QuasilinSymmetry,
    Property::QuasilinAntisymmetry,
    Property::QuasilinAdditivity,
];

pub const LEMMAS: [Property; 5] = [
    Property::GeodesicPairContraction,
    Property::DistanceConvexity,
    Property::SquaredDistanceConvexity,
    Property::QuasilinGeodesicScaling,
    Property::SquareExpansion,
];

/// Whether the property bounds `lhs` by `rhs` or equates them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// `1 + Σ d²` over distinct pairs of the witness points.
    pub scale: f64,
}

impl Evaluation {
    /// Nonnegative when the property holds exactly.
    pub fn slack(&self) -> f64 {
        match self.relation {
            Relation::AtMost => self.rhs - self.lhs,
            Relation::Equal => -(self.lhs - self.rhs).abs(),
        }
    }

    pub fn holds(&self, eps: f64) -> bool {
        self.slack() >= -eps * self.scale
    }
}

/// Points and weight a property is evaluated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<Point>,
    pub lambda: f64,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::MetricSymmetry => "metric_symmetry",
            Property::TriangleInequality => "triangle_inequality",
            Property::GeodesicDistanceToStart => "geodesic_distance_to_start",
            Property::GeodesicDistanceToEnd => "geodesic_distance_to_end",
            Property::CauchySchwarz => "cauchy_schwarz",
            Property::QuasilinSymmetry => "quasilin_symmetry",
            Property::QuasilinAntisymmetry => "quasilin_antisymmetry",
            Property::QuasilinAdditivity => "quasilin_additivity",
            Property::GeodesicPairContraction => "geodesic_pair_contraction",
            Property::DistanceConvexity => "distance_convexity",
            Property::SquaredDistanceConvexity => "squared_distance_convexity",
            Property::QuasilinGeodesicScaling => "quasilin_geodesic_scaling",
            Property::SquareExpansion => "square_expansion",
        }
    }

    /// Number of witness points consumed.
    pub fn arity(self) -> usize {
        match self {
            Property::MetricSymmetry | Property::GeodesicDistanceToStart | Property::GeodesicDistanceToEnd => 2,
            Property::TriangleInequality | Property::DistanceConvexity | Property::SquaredDistanceConvexity => 3,
            Property::SquareExpansion => 3,
            Property::QuasilinAdditivity => 5,
            _ => 4,
        }
    }

    /// Evaluates both sides on the first [`Self::arity`] witness points.
    pub fn evaluate<G: Geodesic + ?Sized>(self, g: &G, w: &Witness) -> Result<Evaluation> {
        let p = &w.points;
        let l = w.lambda;
        let d = |a: &Point, b: &Point| g.distance(a, b);
        let q = |a: &Point, b: &Point, c: &Point, e: &Point| quasilin(g, a, b, c, e);
        let at = |a: &Point, b: &Point| g.geodesic_point(a, b, l);
        let (lhs, rhs, relation, extra): (f64, f64, Relation, Option<Point>) = match self {
            Property::MetricSymmetry => (d(&p[0], &p[1])?, d(&p[1], &p[0])?, Relation::Equal, None),
            Property::TriangleInequality => {
                (d(&p[0], &p[2])?, d(&p[0], &p[1])? + d(&p[1], &p[2])?, Relation::AtMost, None)
            }
            Property::GeodesicDistanceToStart => {
                let z = at(&p[0], &p[1])?;
                (d(&z, &p[0])?, (1.0 - l) * d(&p[0], &p[1])?, Relation::Equal, Some(z))
            }
            Property::GeodesicDistanceToEnd => {
                let z = at(&p[0], &p[1])?;
                (d(&z, &p[1])?, l * d(&p[0], &p[1])?, Relation::Equal, Some(z))
            }
            Property::CauchySchwarz => (
                q(&p[0], &p[1], &p[2], &p[3])?,
                d(&p[0], &p[1])? * d(&p[2], &p[3])?,
                Relation::AtMost,
                None,
            ),
            Property::QuasilinSymmetry => {
                (q(&p[0], &p[1], &p[2], &p[3])?, q(&p[2], &p[3], &p[0], &p[1])?, Relation::Equal, None)
            }
            Property::QuasilinAntisymmetry => {
                (q(&p[0], &p[1], &p[2], &p[3])?, -q(&p[1], &p[0], &p[2], &p[3])?, Relation::Equal, None)
            }
            Property::QuasilinAdditivity => {
                // points: a, b, c, d, x
                let split = q(&p[0], &p[4], &p[2], &p[3])? + q(&p[4], &p[1], &p[2], &p[3])?;
                (split, q(&p[0], &p[1], &p[2], &p[3])?, Relation::Equal, None)
            }
            Property::GeodesicPairContraction => {
                // points: p, q, r, s
                let (m1, m2) = (at(&p[0], &p[1])?, at(&p[2], &p[3])?);
                let rhs = l * d(&p[0], &p[2])? + (1.0 - l) * d(&p[1], &p[3])?;
                (d(&m1, &m2)?, rhs, Relation::AtMost, None)
            }
            Property::DistanceConvexity => {
                let z = at(&p[0], &p[1])?;
                (d(&z, &p[2])?, l * d(&p[0], &p[2])? + (1.0 - l) * d(&p[1], &p[2])?, Relation::AtMost, Some(z))
            }
            Property::SquaredDistanceConvexity => {
                let z = at(&p[0], &p[1])?;
                let rhs = l * d(&p[0], &p[2])?.powi(2) + (1.0 - l) * d(&p[1], &p[2])?.powi(2)
                    - l * (1.0 - l) * d(&p[0], &p[1])?.powi(2);
                (d(&z, &p[2])?.powi(2), rhs, Relation::AtMost, Some(z))
            }
            Property::QuasilinGeodesicScaling => {
                // points: x, y, w, (unused); z on [x, y]
                let z = at(&p[0], &p[1])?;
                (q(&z, &p[1], &z, &p[2])?, l * q(&p[0], &p[1], &z, &p[2])?, Relation::AtMost, Some(z))
            }
            Property::SquareExpansion => {
                let z = at(&p[0], &p[1])?;
                let rhs = l * l * d(&p[0], &p[2])?.powi(2)
                    + (1.0 - l).powi(2) * d(&p[1], &p[2])?.powi(2)
                    + 2.0 * l * (1.0 - l) * q(&p[0], &p[2], &p[1], &p[2])?;
                (d(&z, &p[2])?.powi(2), rhs, Relation::AtMost, Some(z))
            }
        };
        let mut involved: Vec<&Point> = p.iter().take(self.arity()).collect();
        if let Some(z) = extra.as_ref() {
            involved.push(z);
        }
        Ok(Evaluation { lhs, rhs, relation, scale: tolerance_scale(g, &involved)? })
    }
}
