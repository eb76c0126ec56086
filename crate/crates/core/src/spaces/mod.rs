//! Concrete Hadamard model spaces and seeded sampling.

pub mod hyperbolic;
pub mod tree;

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_weight, Geodesic, Point, SpaceDescriptor};
use tree::TreeIndex;

/// Deepest `Product` nesting accepted by [`Space::new`].
pub const MAX_PRODUCT_DEPTH: usize = 4;

/// Hyperbolic sampling radii are capped here so `cosh` stays finite with
/// room to spare.
pub const MAX_HYPERBOLIC_RADIUS: f64 = 20.0;

/// Where random points are drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingRegion {
    EuclideanBox { lo: Vec<f64>, hi: Vec<f64> },
    HyperbolicBall { center: Point, radius: f64 },
    TreeWhole,
    ProductOf(Box<SamplingRegion>, Box<SamplingRegion>),
}

impl SamplingRegion {
    /// `[-half, half]^dim`.
    pub fn cube(dim: usize, half: f64) -> Self {
        SamplingRegion::EuclideanBox { lo: vec![-half; dim], hi: vec![half; dim] }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Euclidean(usize),
    Hyperbolic(usize),
    Tree(Arc<TreeIndex>),
    Product(Box<Space>, Box<Space>),
}

/// A validated, immutable model space.
#[derive(Debug, Clone)]
pub struct Space {
    descriptor: SpaceDescriptor,
    kind: Kind,
}

impl Space {
    /// Validates `descriptor` and precomputes whatever the space needs
    /// (path tables for trees).
    pub fn new(descriptor: &SpaceDescriptor) -> Result<Self> {
        if descriptor.product_depth() > MAX_PRODUCT_DEPTH {
            return Err(Error::InvalidSpace(format!("product nesting deeper than {MAX_PRODUCT_DEPTH}")));
        }
        let kind = match descriptor {
            SpaceDescriptor::Euclidean { dim } | SpaceDescriptor::Hyperbolic { dim } if *dim == 0 => {
                return Err(Error::InvalidSpace("dimension must be at least 1".into()))
            }
            SpaceDescriptor::Euclidean { dim } => Kind::Euclidean(*dim),
            SpaceDescriptor::Hyperbolic { dim } => Kind::Hyperbolic(*dim),
            SpaceDescriptor::WeightedTree { topology } => Kind::Tree(Arc::new(TreeIndex::new(topology)?)),
            SpaceDescriptor::Product { left, right } => {
                Kind::Product(Box::new(Space::new(left)?), Box::new(Space::new(right)?))
            }
        };
        Ok(Self { descriptor: descriptor.clone(), kind })
    }

    pub fn descriptor(&self) -> &SpaceDescriptor {
        &self.descriptor
    }

    /// Dimension of a Euclidean space.
    pub fn euclidean_dim(&self) -> Option<usize> {
        match self.kind {
            Kind::Euclidean(d) => Some(d),
            _ => None,
        }
    }

    /// Dimension of a hyperbolic space.
    pub fn hyperbolic_dim(&self) -> Option<usize> {
        match self.kind {
            Kind::Hyperbolic(d) => Some(d),
            _ => None,
        }
    }

    pub fn tree(&self) -> Option<&TreeIndex> {
        match &self.kind {
            Kind::Tree(t) => Some(t),
            _ => None,
        }
    }

    pub fn factors(&self) -> Option<(&Space, &Space)> {
        match &self.kind {
            Kind::Product(l, r) => Some((l, r)),
            _ => None,
        }
    }

    fn mismatch(&self, reason: impl Into<String>) -> Error {
        Error::PointMismatch { space: self.descriptor.label(), reason: reason.into() }
    }

    fn coords<'a>(&self, p: &'a Point) -> Result<&'a [f64]> {
        let c = match (&self.kind, p) {
            (Kind::Euclidean(d), Point::Euclidean(c)) if c.len() == *d => c,
            (Kind::Hyperbolic(d), Point::Hyperboloid(c)) if c.len() == *d + 1 => c,
            _ => return Err(self.mismatch("wrong point kind or coordinate count")),
        };
        if c.iter().all(|v| v.is_finite()) {
            Ok(c)
        } else {
            Err(Error::NonFinite)
        }
    }

    fn halves<'a>(&self, p: &'a Point) -> Result<(&'a Point, &'a Point)> {
        match p {
            Point::Product(l, r) => Ok((l, r)),
            _ => Err(self.mismatch("expected a product pair")),
        }
    }

    /// `d²(x, γ(λ₁)) − d²(x, γ(λ₂))` for `γ(λ) = λa ⊕ (1−λ)b`.
    ///
    /// Euclidean and hyperbolic factors evaluate it in closed form with a
    /// rounding error proportional to `|λ₁ − λ₂|`, so the sign stays
    /// reliable for candidates far closer than `√ε`.
    pub fn segment_squared_distance_difference(
        &self,
        a: &Point,
        b: &Point,
        x: &Point,
        l1: f64,
        l2: f64,
    ) -> Result<f64> {
        match &self.kind {
            Kind::Euclidean(_) => {
                let (ac, bc, xc) = (self.coords(a)?, self.coords(b)?, self.coords(x)?);
                // (p − q)·(p + q − 2x) with p − q = (λ₁ − λ₂)(a − b)
                Ok((l1 - l2)
                    * ac.iter()
                        .zip(bc)
                        .zip(xc)
                        .map(|((ai, bi), xi)| {
                            let mid = 0.5 * (l1 + l2);
                            (ai - bi) * (2.0 * (mid * ai + (1.0 - mid) * bi) - 2.0 * xi)
                        })
                        .sum::<f64>())
            }
            Kind::Hyperbolic(_) => {
                let (ac, bc, xc) = (self.coords(a)?, self.coords(b)?, self.coords(x)?);
                let d = hyperbolic::distance(ac, bc);
                if d == 0.0 || l1 == l2 {
                    return Ok(0.0);
                }
                let (ca, cb) = (hyperbolic::minkowski(xc, ac), hyperbolic::minkowski(xc, bc));
                // cosh d(x,γ(λ)) = −(A sinh(λd) + B sinh((1−λ)d)) / sinh d; the
                // difference factors through sinh((λ₁−λ₂)d/2)
                let m = 0.5 * (l1 + l2);
                let bracket = ca * (m * d).cosh() - cb * ((1.0 - m) * d).cosh();
                let dcosh = -2.0 * (0.5 * (l1 - l2) * d).sinh() / d.sinh() * bracket;
                let dp = hyperbolic::distance(xc, &hyperbolic::geodesic_point(ac, bc, l1));
                let dq = hyperbolic::distance(xc, &hyperbolic::geodesic_point(ac, bc, l2));
                let sum = dp + dq;
                if sum == 0.0 {
                    return Ok(0.0);
                }
                // cosh dp − cosh dq = 2 sinh((dp+dq)/2) sinh((dp−dq)/2)
                let delta = 2.0 * (dcosh / (2.0 * (0.5 * sum).sinh())).asinh();
                Ok(delta * sum)
            }
            Kind::Tree(_) => {
                let (dp, dq) =
                    (self.distance(x, &self.geodesic_point(a, b, l1)?)?, self.distance(x, &self.geodesic_point(a, b, l2)?)?);
                Ok((dp - dq) * (dp + dq))
            }
            Kind::Product(l, r) => {
                let ((a1, a2), (b1, b2), (x1, x2)) = (self.halves(a)?, self.halves(b)?, self.halves(x)?);
                Ok(l.segment_squared_distance_difference(a1, b1, x1, l1, l2)?
                    + r.segment_squared_distance_difference(a2, b2, x2, l1, l2)?)
            }
        }
    }

    /// Checks the point invariants; `None` means the point is valid.
    pub fn validate_point(&self, p: &Point) -> Option<String> {
        match &self.kind {
            Kind::Euclidean(_) => self.coords(p).err().map(|e| e.to_string()),
            Kind::Hyperbolic(_) => {
                let c = match self.coords(p) {
                    Ok(c) => c,
                    Err(e) => return Some(e.to_string()),
                };
                let residual = hyperbolic::constraint_residual(c);
                if residual > hyperbolic::CONSTRAINT_TOL {
                    Some(format!(
                        "Minkowski self-product {} differs from -1 (relative residual {residual:e})",
                        hyperbolic::minkowski(c, c)
                    ))
                } else if c[0] <= 0.0 {
                    Some("point lies on the lower sheet (x0 <= 0)".into())
                } else {
                    None
                }
            }
            Kind::Tree(t) => t.violation(p),
            Kind::Product(l, r) => match self.halves(p) {
                Ok((a, b)) => l
                    .validate_point(a)
                    .map(|v| format!("left factor: {v}"))
                    .or_else(|| r.validate_point(b).map(|v| format!("right factor: {v}"))),
                Err(e) => Some(e.to_string()),
            },
        }
    }

    /// The base point of a Euclidean (origin) or hyperbolic space
    /// (`(1,0,…,0)`), or the root of a tree. Products combine factors.
    pub fn origin(&self) -> Point {
        match &self.kind {
            Kind::Euclidean(d) => Point::Euclidean(vec![0.0; *d]),
            Kind::Hyperbolic(d) => {
                let mut c = vec![0.0; d + 1];
                c[0] = 1.0;
                Point::Hyperboloid(c)
            }
            Kind::Tree(t) => t.vertex_point(0),
            Kind::Product(l, r) => Point::pair(l.origin(), r.origin()),
        }
    }

    /// A sampling region that suits this space.
    pub fn default_region(&self, scale: f64) -> SamplingRegion {
        match &self.kind {
            Kind::Euclidean(d) => SamplingRegion::cube(*d, scale),
            Kind::Hyperbolic(_) => SamplingRegion::HyperbolicBall { center: self.origin(), radius: scale },
            Kind::Tree(_) => SamplingRegion::TreeWhole,
            Kind::Product(l, r) => {
                SamplingRegion::ProductOf(Box::new(l.default_region(scale)), Box::new(r.default_region(scale)))
            }
        }
    }

    /// Draws a point from `region`; deterministic in the state of `rng`.
    pub fn random_point<R: Rng + ?Sized>(&self, region: &SamplingRegion, rng: &mut R) -> Result<Point> {
        match (&self.kind, region) {
            (Kind::Euclidean(d), SamplingRegion::EuclideanBox { lo, hi }) => {
                if lo.len() != *d || hi.len() != *d {
                    return Err(Error::InvalidArgument("box dimension does not match the space".into()));
                }
                if lo.iter().zip(hi).any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
                    return Err(Error::InvalidArgument("box bounds must satisfy lo <= hi".into()));
                }
                Ok(Point::Euclidean(lo.iter().zip(hi).map(|(a, b)| a + (b - a) * rng.gen::<f64>()).collect()))
            }
            (Kind::Hyperbolic(_), SamplingRegion::HyperbolicBall { center, radius }) => {
                if !(*radius > 0.0 && *radius <= MAX_HYPERBOLIC_RADIUS) {
                    return Err(Error::InvalidArgument(format!(
                        "hyperbolic sampling radius must lie in (0, {MAX_HYPERBOLIC_RADIUS}]"
                    )));
                }
                let c = self.coords(center)?;
                let v = hyperbolic::random_direction(c, rng);
                let rim = hyperbolic::exp_direction(c, &v, *radius).expect("nonzero direction");
                let lambda: f64 = rng.gen();
                Ok(Point::Hyperboloid(hyperbolic::geodesic_point(c, &rim, lambda)))
            }
            (Kind::Tree(t), SamplingRegion::TreeWhole) => Ok(t.random_point(rng)),
            (Kind::Product(l, r), SamplingRegion::ProductOf(a, b)) => {
                let left = l.random_point(a, rng)?;
                let right = r.random_point(b, rng)?;
                Ok(Point::pair(left, right))
            }
            _ => Err(Error::InvalidArgument(format!(
                "sampling region is incompatible with {}",
                self.descriptor.label()
            ))),
        }
    }

    /// A point at distance `r` from `center` in a uniformly random direction.
    /// In a tree the distance is capped by the farthest vertex.
    pub fn random_at_distance<R: Rng + ?Sized>(&self, center: &Point, r: f64, rng: &mut R) -> Result<Point> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("distance {r} must be finite and nonnegative")));
        }
        match &self.kind {
            Kind::Euclidean(_) => {
                let c = self.coords(center)?;
                let dir = loop {
                    let w: Vec<f64> = (0..c.len()).map(|_| rng.sample(StandardNormal)).collect();
                    let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if n > 1e-12 {
                        break w.into_iter().map(|v| v / n).collect::<Vec<_>>();
                    }
                };
                Ok(Point::Euclidean(c.iter().zip(dir).map(|(a, u)| a + r * u).collect()))
            }
            Kind::Hyperbolic(_) => {
                let c = self.coords(center)?;
                if r == 0.0 {
                    return Ok(center.clone());
                }
                let v = hyperbolic::random_direction(c, rng);
                Ok(Point::Hyperboloid(hyperbolic::exp_direction(c, &v, r.min(MAX_HYPERBOLIC_RADIUS)).expect("nonzero")))
            }
            Kind::Tree(t) => t.random_at_distance(center, r, rng),
            Kind::Product(l, rt) => {
                let (a, b) = self.halves(center)?;
                let theta = rng.gen::<f64>() * std::f64::consts::FRAC_PI_2;
                Ok(Point::pair(l.random_at_distance(a, r * theta.cos(), rng)?, rt.random_at_distance(b, r * theta.sin(), rng)?))
            }
        }
    }

    /// The point at distance `dist` from `from` on the geodesic ray through
    /// `through`. `None` when the ray is not determined (coincident points,
    /// or geodesics in a tree that would have to be extended past a vertex).
    pub fn extend_ray(&self, from: &Point, through: &Point, dist: f64) -> Result<Option<Point>> {
        match &self.kind {
            Kind::Euclidean(_) => {
                let (a, b) = (self.coords(from)?, self.coords(through)?);
                let n = a.iter().zip(b).map(|(x, y)| (y - x) * (y - x)).sum::<f64>().sqrt();
                if n == 0.0 {
                    return Ok(None);
                }
                Ok(Some(Point::Euclidean(a.iter().zip(b).map(|(x, y)| x + (y - x) * dist / n).collect())))
            }
            Kind::Hyperbolic(_) => {
                let (a, b) = (self.coords(from)?, self.coords(through)?);
                let v = hyperbolic::tangent_at(a, b);
                Ok(hyperbolic::exp_direction(a, &v, dist).map(Point::Hyperboloid))
            }
            Kind::Tree(t) => {
                let d = t.distance(from, through)?;
                if d == 0.0 || dist > d {
                    return Ok(None);
                }
                Ok(Some(t.geodesic_point(from, through, 1.0 - dist / d)?))
            }
            Kind::Product(l, r) => {
                let ((fa, fb), (ta, tb)) = (self.halves(from)?, self.halves(through)?);
                let (dl, dr) = (l.distance(fa, ta)?, r.distance(fb, tb)?);
                let total = dl.hypot(dr);
                if total == 0.0 {
                    return Ok(None);
                }
                let s = dist / total;
                let left = if dl == 0.0 { Some(fa.clone()) } else { l.extend_ray(fa, ta, dl * s)? };
                let right = if dr == 0.0 { Some(fb.clone()) } else { r.extend_ray(fb, tb, dr * s)? };
                Ok(left.zip(right).map(|(a, b)| Point::pair(a, b)))
            }
        }
    }

    /// In a two-dimensional Euclidean or hyperbolic space, the point at
    /// distance `r` from `center` in direction `angle` (measured in the
    /// tangent plane at `center`, zero along the first axis).
    pub fn point_at_angle(&self, center: &Point, angle: f64, r: f64) -> Result<Option<Point>> {
        match self.kind {
            Kind::Euclidean(2) => {
                let c = self.coords(center)?;
                Ok(Some(Point::euclidean(vec![c[0] + r * angle.cos(), c[1] + r * angle.sin()])))
            }
            Kind::Hyperbolic(2) => {
                let c = self.coords(center)?;
                let at_base = [r.cosh(), r.sinh() * angle.cos(), r.sinh() * angle.sin()];
                Ok(Some(Point::Hyperboloid(hyperbolic::renormalize(hyperbolic::boost_to(c, &at_base)))))
            }
            _ => Ok(None),
        }
    }
}

impl Geodesic for Space {
    fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        match &self.kind {
            Kind::Euclidean(_) => {
                let (x, y) = (self.coords(a)?, self.coords(b)?);
                Ok(x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt())
            }
            Kind::Hyperbolic(_) => Ok(hyperbolic::distance(self.coords(a)?, self.coords(b)?)),
            Kind::Tree(t) => t.distance(a, b),
            Kind::Product(l, r) => {
                let ((a1, a2), (b1, b2)) = (self.halves(a)?, self.halves(b)?);
                let (d1, d2) = (l.distance(a1, b1)?, r.distance(a2, b2)?);
                Ok((d1 * d1 + d2 * d2).sqrt())
            }
        }
    }

    fn geodesic_point(&self, x: &Point, y: &Point, lambda: f64) -> Result<Point> {
        check_weight(lambda)?;
        match &self.kind {
            Kind::Euclidean(_) => {
                let (a, b) = (self.coords(x)?, self.coords(y)?);
                if lambda == 1.0 {
                    return Ok(x.clone());
                }
                Ok(Point::Euclidean(a.iter().zip(b).map(|(p, q)| lambda * p + (1.0 - lambda) * q).collect()))
            }
            Kind::Hyperbolic(_) => {
                let (a, b) = (self.coords(x)?, self.coords(y)?);
                if lambda == 1.0 {
                    return Ok(x.clone());
                }
                if lambda == 0.0 {
                    return Ok(y.clone());
                }
                Ok(Point::Hyperboloid(hyperbolic::geodesic_point(a, b, lambda)))
            }
            Kind::Tree(t) => t.geodesic_point(x, y, lambda),
            Kind::Product(l, r) => {
                let ((x1, x2), (y1, y2)) = (self.halves(x)?, self.halves(y)?);
                Ok(Point::pair(l.geodesic_point(x1, y1, lambda)?, r.geodesic_point(x2, y2, lambda)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use tree::TreeTopology;

    fn e2() -> Space {
        Space::new(&SpaceDescriptor::Euclidean { dim: 2 }).unwrap()
    }

    fn h2() -> Space {
        Space::new(&SpaceDescriptor::Hyperbolic { dim: 2 }).unwrap()
    }

    fn star() -> Space {
        Space::new(&SpaceDescriptor::WeightedTree { topology: TreeTopology::star(3, 2.0) }).unwrap()
    }

    #[test]
    fn make_space_rejects_zero_dimension_and_deep_products() {
        assert!(Space::new(&SpaceDescriptor::Euclidean { dim: 0 }).is_err());
        assert!(Space::new(&SpaceDescriptor::Hyperbolic { dim: 0 }).is_err());
        let mut d = SpaceDescriptor::Euclidean { dim: 1 };
        for _ in 0..MAX_PRODUCT_DEPTH {
            d = SpaceDescriptor::product(d.clone(), SpaceDescriptor::Euclidean { dim: 1 });
        }
        assert!(Space::new(&d).is_ok());
        d = SpaceDescriptor::product(d, SpaceDescriptor::Euclidean { dim: 1 });
        assert!(Space::new(&d).is_err());
        assert_eq!(Space::new(&SpaceDescriptor::Euclidean { dim: 3 }).unwrap().euclidean_dim(), Some(3));
    }

    #[test]
    fn distance_examples() {
        let d = e2().distance(&Point::euclidean(vec![0.0, 0.0]), &Point::euclidean(vec![3.0, 4.0])).unwrap();
        assert_eq!(d, 5.0);
        let h = h2();
        let d = h
            .distance(&Point::Hyperboloid(vec![1.0, 0.0, 0.0]), &Point::Hyperboloid(vec![1f64.cosh(), 1f64.sinh(), 0.0]))
            .unwrap();
        assert!((d - 1.0).abs() < 1e-14);
        let p = Point::Hyperboloid(vec![2f64.cosh(), 0.0, 2f64.sinh()]);
        assert_eq!(h.distance(&p, &p).unwrap(), 0.0);
        let t = star();
        assert!((t.distance(&Point::tree(0, 1.0), &Point::tree(1, 1.5)).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn mismatched_and_non_finite_points_are_errors() {
        let s = e2();
        assert!(s.distance(&Point::euclidean(vec![0.0]), &Point::euclidean(vec![0.0, 1.0])).is_err());
        assert!(s.distance(&Point::tree(0, 0.0), &Point::euclidean(vec![0.0, 1.0])).is_err());
        assert_eq!(
            s.distance(&Point::euclidean(vec![f64::NAN, 0.0]), &Point::euclidean(vec![0.0, 1.0])),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn geodesic_point_examples() {
        let s = e2();
        let (x, y) = (Point::euclidean(vec![0.0, 0.0]), Point::euclidean(vec![4.0, 0.0]));
        assert_eq!(s.geodesic_point(&x, &y, 0.25).unwrap(), Point::euclidean(vec![3.0, 0.0]));
        assert_eq!(s.geodesic_point(&x, &y, 1.0).unwrap(), x);
        assert_eq!(s.geodesic_point(&x, &y, 0.0).unwrap(), y);
        assert_eq!(s.geodesic_point(&x, &y, 1.5), Err(Error::WeightOutOfRange(1.5)));
        assert!(s.geodesic_point(&x, &y, -0.1).is_err());

        let t = star();
        let hub = t.geodesic_point(&Point::tree(0, 2.0), &Point::tree(1, 2.0), 0.5).unwrap();
        assert_eq!(hub, Point::tree(0, 0.0));
    }

    #[test]
    fn product_of_lines_is_the_plane() {
        let prod = Space::new(&SpaceDescriptor::product(
            SpaceDescriptor::Euclidean { dim: 1 },
            SpaceDescriptor::Euclidean { dim: 1 },
        ))
        .unwrap();
        let a = Point::pair(Point::euclidean(vec![1.0]), Point::euclidean(vec![-2.0]));
        let b = Point::pair(Point::euclidean(vec![4.0]), Point::euclidean(vec![2.0]));
        assert!((prod.distance(&a, &b).unwrap() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn validate_point_examples() {
        let h = h2();
        assert!(h.validate_point(&Point::Hyperboloid(vec![1.0, 0.0, 0.0])).is_none());
        let v = h.validate_point(&Point::Hyperboloid(vec![1.0, 1.0, 0.0])).unwrap();
        assert!(v.contains("self-product 0"), "{v}");
        assert!(h.validate_point(&Point::Hyperboloid(vec![-1.0, 0.0, 0.0])).is_some());
        assert!(star().validate_point(&Point::tree(0, 2.5)).is_some());
        assert!(e2().validate_point(&Point::euclidean(vec![1.0])).is_some());
    }

    #[test]
    fn random_points_are_deterministic_and_contained() {
        let h = h2();
        let region = SamplingRegion::HyperbolicBall { center: h.origin(), radius: 3.0 };
        let a = h.random_point(&region, &mut stream(11, "t", 0)).unwrap();
        let b = h.random_point(&region, &mut stream(11, "t", 0)).unwrap();
        assert_eq!(a, b);
        let mut rng = stream(12, "t", 0);
        for _ in 0..1000 {
            let p = h.random_point(&region, &mut rng).unwrap();
            assert!(h.validate_point(&p).is_none());
            assert!(h.distance(&h.origin(), &p).unwrap() <= 3.0 + 1e-9);
        }
        assert!(h.random_point(&SamplingRegion::TreeWhole, &mut rng).is_err());
        let too_big = SamplingRegion::HyperbolicBall { center: h.origin(), radius: 25.0 };
        assert!(h.random_point(&too_big, &mut rng).is_err());
    }

    #[test]
    fn tree_sampling_is_uniform_over_length() {
        let t = star();
        let mut rng = stream(5, "uniform", 0);
        let mut hits = [0usize; 3];
        let n = 10_000;
        for _ in 0..n {
            match t.random_point(&SamplingRegion::TreeWhole, &mut rng).unwrap() {
                Point::Tree { edge, .. } => hits[edge] += 1,
                _ => unreachable!(),
            }
        }
        for h in hits {
            let frac = h as f64 / n as f64;
            assert!((frac - 1.0 / 3.0).abs() < 0.05, "{hits:?}");
        }
    }

    #[test]
    fn random_at_distance_hits_the_radius() {
        let mut rng = stream(3, "radius", 0);
        for space in [e2(), h2()] {
            let c = space.random_point(&space.default_region(1.0), &mut rng).unwrap();
            let p = space.random_at_distance(&c, 0.7, &mut rng).unwrap();
            assert!((space.distance(&c, &p).unwrap() - 0.7).abs() < 1e-12);
        }
        let t = star();
        let p = t.random_at_distance(&Point::tree(0, 0.0), 1.5, &mut rng).unwrap();
        assert!((t.distance(&Point::tree(0, 0.0), &p).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn extend_ray_and_angles() {
        let h = h2();
        let o = h.origin();
        let x = h.point_at_angle(&o, 0.3, 1.0).unwrap().unwrap();
        let far = h.extend_ray(&o, &x, 2.5).unwrap().unwrap();
        assert!((h.distance(&o, &far).unwrap() - 2.5).abs() < 1e-12);
        assert!((h.distance(&x, &far).unwrap() - 1.5).abs() < 1e-12);
        assert!(star().extend_ray(&Point::tree(0, 0.0), &Point::tree(0, 1.0), 3.0).unwrap().is_none());
    }
}
