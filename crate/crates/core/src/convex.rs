//! Closed convex sets, metric projections and the variational certificate.
//!
//! `u = P_C x` exactly when `⟨→xu, →uy⟩ ≥ 0` for every `y ∈ C`. The
//! certificate evaluates that quantity over a finite probe set, so it can
//! refute a candidate but only ever approximates a proof: a denser probe set
//! near `u` trades time for sensitivity to small misplacements.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{quasilin, Geodesic, Point};
use crate::rng;
use crate::spaces::Space;

/// Probe count used by [`project`] for its certificate.
pub const DEFAULT_PROBES: usize = 256;
/// Seed of the probe stream used by [`project`].
pub const CERTIFICATE_SEED: u64 = 0x5eed_c0de;
/// Iteration cap of the one-dimensional segment search.
pub const SEGMENT_MAX_ITER: usize = 200;
/// Default interval width of the segment search.
pub const DEFAULT_LAMBDA_TOL: f64 = 1e-12;
/// Relative membership tolerance, multiplied by `1 + d²(x, u)`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// A nonempty closed convex subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexSet {
    WholeSpace,
    Ball { center: Point, radius: f64 },
    /// The geodesic segment `[a, b]`.
    Segment { a: Point, b: Point },
    /// The subtree spanned by a connected vertex set (tree spaces only).
    Subtree { vertices: Vec<usize> },
    /// `{x : normal·x ≥ offset}` (Euclidean spaces only).
    HalfSpace { normal: Vec<f64>, offset: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub u: Point,
    /// Minimum of `⟨→xu, →uy⟩` over the certificate probes.
    pub certificate_residual: f64,
    pub iterations_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentProjection {
    /// Weight on `a`: `u = λ*·a ⊕ (1−λ*)·b`.
    pub lambda: f64,
    pub u: Point,
    pub iterations: usize,
}

/// Where certificate probes come from.
#[derive(Debug, Clone, Copy)]
pub enum Probes<'a> {
    Given(&'a [Point]),
    Sampled { count: usize, seed: u64 },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn euclidean_coords<'a>(space: &Space, p: &'a Point) -> Result<&'a [f64]> {
    match (space.euclidean_dim(), p) {
        (Some(d), Point::Euclidean(c)) if c.len() == d => Ok(c),
        _ => Err(Error::PointMismatch { space: space.descriptor().label(), reason: "expected Euclidean coordinates".into() }),
    }
}

/// Checks the set invariants against `space`.
pub fn validate_set(space: &Space, set: &ConvexSet) -> Result<()> {
    let point_ok = |p: &Point| match space.validate_point(p) {
        None => Ok(()),
        Some(v) => Err(Error::InvalidSet(v)),
    };
    match set {
        ConvexSet::WholeSpace => Ok(()),
        ConvexSet::Ball { center, radius } => {
            point_ok(center)?;
            if radius.is_finite() && *radius > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSet(format!("ball radius {radius} must be positive")))
            }
        }
        ConvexSet::Segment { a, b } => {
            point_ok(a)?;
            point_ok(b)
        }
        ConvexSet::Subtree { vertices } => {
            let tree = space.tree().ok_or_else(|| Error::InvalidSet("subtrees need a tree space".into()))?;
            if vertices.is_empty() {
                return Err(Error::InvalidSet("subtree vertex set is empty".into()));
            }
            if let Some(v) = vertices.iter().find(|&&v| v >= tree.vertex_count()) {
                return Err(Error::InvalidSet(format!("vertex {v} does not exist")));
            }
            let mut member = vec![false; tree.vertex_count()];
            vertices.iter().for_each(|&v| member[v] = true);
            // an induced subgraph of a tree is connected iff it has |S|-1 edges
            let distinct = member.iter().filter(|m| **m).count();
            let induced = (0..tree.edge_count())
                .filter(|&e| {
                    let (u, v) = tree.endpoints(e);
                    member[u] && member[v]
                })
                .count();
            if induced + 1 == distinct {
                Ok(())
            } else {
                Err(Error::InvalidSet("subtree vertex set is not connected".into()))
            }
        }
        ConvexSet::HalfSpace { normal, offset } => {
            let dim = space
                .euclidean_dim()
                .ok_or_else(|| Error::InvalidSet("half-spaces need a Euclidean space".into()))?;
            if normal.len() != dim {
                return Err(Error::InvalidSet(format!("normal has {} components, space has {dim}", normal.len())));
            }
            if !offset.is_finite() || normal.iter().any(|v| !v.is_finite()) || dot(normal, normal) == 0.0 {
                return Err(Error::InvalidSet("half-space normal must be finite and nonzero".into()));
            }
            Ok(())
        }
    }
}

fn subtree_membership(space: &Space, vertices: &[usize]) -> Vec<bool> {
    let tree = space.tree().expect("validated subtree");
    let mut member = vec![false; tree.vertex_count()];
    vertices.iter().for_each(|&v| member[v] = true);
    member
}

fn in_subtree(space: &Space, member: &[bool], p: &Point) -> Result<bool> {
    let tree = space.tree().expect("validated subtree");
    let (edge, offset) = match *p {
        Point::Tree { edge, offset } if edge < tree.edge_count() => (edge, offset),
        _ => return Err(Error::PointMismatch { space: "tree".into(), reason: "expected a tree location".into() }),
    };
    let (u, v) = tree.endpoints(edge);
    Ok(match tree.vertex_at(edge, offset) {
        Some(w) => member[w],
        None => member[u] && member[v],
    })
}

/// `argmin_λ d(x, λa ⊕ (1−λ)b)` by golden-section ternary search.
///
/// Candidates are ranked by the sign of `d²(x,p) − d²(x,q)` computed without
/// cancellation, so `λ` resolves to near machine precision rather than to
/// the square root of it.
pub fn project_segment(space: &Space, a: &Point, b: &Point, x: &Point, lambda_tol: f64) -> Result<SegmentProjection> {
    if !(lambda_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda tolerance {lambda_tol} must be positive")));
    }
    // the search compares parameters; points are built once at the end
    let closer = |p: f64, q: f64| -> Result<bool> { Ok(space.segment_squared_distance_difference(a, b, x, p, q)? < 0.0) };
    let shrink = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut c = hi - shrink * (hi - lo);
    let mut d = lo + shrink * (hi - lo);
    let mut iterations = 0;
    while hi - lo > lambda_tol && iterations < SEGMENT_MAX_ITER {
        iterations += 1;
        if closer(c, d)? {
            hi = d;
            d = c;
            c = hi - shrink * (hi - lo);
        } else {
            lo = c;
            c = d;
            d = lo + shrink * (hi - lo);
        }
    }
    let mut lambda = 0.5 * (lo + hi);
    for end in [0.0, 1.0] {
        if ((end == 0.0 && lo == 0.0) || (end == 1.0 && hi == 1.0)) && !closer(lambda, end)? {
            lambda = end;
        }
    }
    let best = space.geodesic_point(a, b, lambda)?;
    Ok(SegmentProjection { lambda, u: best, iterations })
}

/// `P_C x` without a certificate, plus the iterations spent.
pub fn project_point(space: &Space, set: &ConvexSet, x: &Point) -> Result<(Point, usize)> {
    match set {
        ConvexSet::WholeSpace => {
            space.distance(x, x)?;
            Ok((x.clone(), 0))
        }
        ConvexSet::Ball { center, radius } => {
            let d = space.distance(center, x)?;
            if d <= *radius {
                Ok((x.clone(), 0))
            } else {
                // weight on the center is 1 − r/d, leaving distance r from it
                Ok((space.geodesic_point(center, x, 1.0 - radius / d)?, 0))
            }
        }
        ConvexSet::Segment { a, b } => {
            let s = project_segment(space, a, b, x, DEFAULT_LAMBDA_TOL)?;
            Ok((s.u, s.iterations))
        }
        ConvexSet::Subtree { vertices } => {
            let member = subtree_membership(space, vertices);
            if in_subtree(space, &member, x)? {
                return Ok((x.clone(), 0));
            }
            let tree = space.tree().expect("validated subtree");
            let mut best: Option<(f64, Point)> = None;
            for &v in vertices {
                let p = tree.vertex_point(v);
                let d = tree.distance(x, &p)?;
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, p));
                }
            }
            let (_, p) = best.ok_or_else(|| Error::InvalidSet("subtree vertex set is empty".into()))?;
            Ok((p, vertices.len()))
        }
        ConvexSet::HalfSpace { normal, offset } => {
            let c = euclidean_coords(space, x)?;
            let slack = dot(normal, c) - offset;
            if slack >= 0.0 {
                return Ok((x.clone(), 0));
            }
            let t = -slack / dot(normal, normal);
            Ok((Point::Euclidean(c.iter().zip(normal).map(|(xi, ni)| xi + t * ni).collect()), 0))
        }
    }
}

/// Distance from `p` to the set.
pub fn distance_to_set(space: &Space, set: &ConvexSet, p: &Point) -> Result<f64> {
    match set {
        ConvexSet::WholeSpace => space.distance(p, p),
        ConvexSet::Ball { center, radius } => Ok((space.distance(center, p)? - radius).max(0.0)),
        ConvexSet::HalfSpace { normal, offset } => {
            let c = euclidean_coords(space, p)?;
            Ok(((offset - dot(normal, c)) / dot(normal, normal).sqrt()).max(0.0))
        }
        _ => {
            let (u, _) = project_point(space, set, p)?;
            space.distance(p, &u)
        }
    }
}

/// Membership up to an additive distance tolerance.
pub fn contains(space: &Space, set: &ConvexSet, p: &Point, tol: f64) -> Result<bool> {
    validate_set(space, set)?;
    Ok(distance_to_set(space, set, p)? <= tol)
}

/// `P_C x` with its certificate residual over [`DEFAULT_PROBES`] probes.
pub fn project(space: &Space, set: &ConvexSet, x: &Point) -> Result<ProjectionResult> {
    validate_set(space, set)?;
    let (u, iterations_used) = project_point(space, set, x)?;
    let certificate_residual = characterization_residual(
        space,
        set,
        x,
        &u,
        Probes::Sampled { count: DEFAULT_PROBES, seed: CERTIFICATE_SEED },
    )?;
    Ok(ProjectionResult { u, certificate_residual, iterations_used })
}

/// `min_y ⟨→xu, →uy⟩` over the probes `y ∈ C`.
pub fn characterization_residual(space: &Space, set: &ConvexSet, x: &Point, u: &Point, probes: Probes<'_>) -> Result<f64> {
    let dxu = space.distance(x, u)?;
    let gap = distance_to_set(space, set, u)?;
    if gap > MEMBERSHIP_TOL * (1.0 + dxu * dxu) {
        return Err(Error::NotInSet { distance: gap });
    }
    let sampled;
    let probes = match probes {
        Probes::Given(p) => p,
        Probes::Sampled { count, seed } => {
            sampled = probe_points(space, set, u, count, &mut rng::stream(seed, "certificate-probes", 0))?;
            &sampled[..]
        }
    };
    if probes.is_empty() {
        return Err(Error::InvalidArgument("characterization needs at least one probe".into()));
    }
    let mut worst = f64::INFINITY;
    for y in probes {
        worst = worst.min(quasilin(space, x, u, u, y)?);
    }
    Ok(worst)
}

fn log_scale(i: usize, n: usize, lo_exp: f64, hi_exp: f64) -> f64 {
    let t = if n <= 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
    10f64.powf(lo_exp + (hi_exp - lo_exp) * t)
}

/// `count` points of `set`, concentrated around `anchor`.
///
/// A quarter of the probes are pulled geodesically toward `anchor`
/// (`0.5 … 0.999` of the way); the rest follow the set's parametrization:
/// boundary fans near the anchor's direction, a boundary ring and interior
/// shells for balls, a uniform grid for segments, vertices and edge samples
/// for subtrees.
pub fn probe_points<R: Rng + ?Sized>(space: &Space, set: &ConvexSet, anchor: &Point, count: usize, rng: &mut R) -> Result<Vec<Point>> {
    validate_set(space, set)?;
    let pulled = count / 4;
    let base_count = count - pulled;
    let mut base = Vec::with_capacity(count);
    match set {
        ConvexSet::WholeSpace => {
            for i in 0..base_count {
                let r = log_scale(i, base_count, -3.0, 1.0);
                base.push(space.random_at_distance(anchor, r, rng)?);
            }
        }
        ConvexSet::Ball { center, radius } => {
            let fan = base_count / 3;
            let ring = base_count / 3;
            for i in 0..fan {
                let s = radius * log_scale(i, fan, -4.0, 0.3);
                let w = space.random_at_distance(anchor, s, rng)?;
                let y = match space.extend_ray(center, &w, *radius)? {
                    Some(y) => y,
                    None => space.random_at_distance(center, *radius, rng)?,
                };
                base.push(y);
            }
            let phase: f64 = rng.gen();
            for i in 0..ring {
                let angle = std::f64::consts::TAU * (i as f64 + phase) / ring as f64;
                let y = match space.point_at_angle(center, angle, *radius)? {
                    Some(y) => y,
                    None => space.random_at_distance(center, *radius, rng)?,
                };
                base.push(y);
            }
            for i in 0..base_count - fan - ring {
                let r = radius * ((i % 8) as f64 + rng.gen::<f64>()) / 8.0;
                base.push(space.random_at_distance(center, r, rng)?);
            }
        }
        ConvexSet::Segment { a, b } => {
            let grid = base_count / 2;
            for i in 0..grid {
                let lambda = if grid <= 1 { 0.5 } else { i as f64 / (grid - 1) as f64 };
                base.push(space.geodesic_point(a, b, lambda)?);
            }
            for _ in grid..base_count {
                base.push(space.geodesic_point(a, b, rng.gen())?);
            }
        }
        ConvexSet::Subtree { vertices } => {
            let tree = space.tree().expect("validated subtree");
            let member = subtree_membership(space, vertices);
            let edges: Vec<usize> = (0..tree.edge_count())
                .filter(|&e| {
                    let (u, v) = tree.endpoints(e);
                    member[u] && member[v]
                })
                .collect();
            for i in 0..base_count {
                if edges.is_empty() || i < vertices.len().min(base_count / 4 + 1) {
                    base.push(tree.vertex_point(vertices[i % vertices.len()]));
                } else {
                    let e = edges[rng.gen_range(0..edges.len())];
                    let offset = rng.gen::<f64>() * tree.edge_length(e);
                    base.push(match tree.vertex_at(e, offset) {
                        Some(v) => tree.vertex_point(v),
                        None => Point::tree(e, offset),
                    });
                }
            }
        }
        ConvexSet::HalfSpace { .. } => {
            let c = euclidean_coords(space, anchor)?;
            for i in 0..base_count {
                let s = log_scale(i, base_count, -3.0, 1.0);
                let w: Vec<f64> = c.iter().map(|ci| ci + s * rng.sample::<f64, _>(StandardNormal)).collect();
                base.push(project_point(space, set, &Point::Euclidean(w))?.0);
            }
        }
    }
    let weights = [0.5, 0.9, 0.99, 0.999];
    let mut out = base.clone();
    for i in 0..pulled {
        let y = &base[i % base.len().max(1)];
        out.push(space.geodesic_point(anchor, y, weights[i % weights.len()])?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SpaceDescriptor;
    use crate::spaces::tree::TreeTopology;

    fn e2() -> Space {
        Space::new(&SpaceDescriptor::Euclidean { dim: 2 }).unwrap()
    }

    fn p(x: f64, y: f64) -> Point {
        Point::euclidean(vec![x, y])
    }

    fn unit_ball() -> ConvexSet {
        ConvexSet::Ball { center: p(0.0, 0.0), radius: 1.0 }
    }

    #[test]
    fn contains_examples() {
        let s = e2();
        assert!(contains(&s, &unit_ball(), &p(0.5, 0.0), 0.0).unwrap());
        let seg = ConvexSet::Segment { a: p(0.0, 0.0), b: p(1.0, 0.0) };
        assert!(contains(&s, &seg, &p(0.5, 1e-12), 1e-9).unwrap());
        let half = ConvexSet::HalfSpace { normal: vec![1.0, 0.0], offset: 0.0 };
        assert!(!contains(&s, &half, &p(-0.1, 0.0), 0.0).unwrap());
        assert!(contains(&s, &half, &p(0.1, 3.0), 0.0).unwrap());
    }

    #[test]
    fn incompatible_sets_are_rejected() {
        let s = e2();
        assert!(contains(&s, &ConvexSet::Subtree { vertices: vec![0] }, &p(0.0, 0.0), 0.0).is_err());
        let h = Space::new(&SpaceDescriptor::Hyperbolic { dim: 2 }).unwrap();
        let half = ConvexSet::HalfSpace { normal: vec![1.0, 0.0], offset: 0.0 };
        assert!(project(&h, &half, &h.origin()).is_err());
        assert!(project(&s, &ConvexSet::Ball { center: p(0.0, 0.0), radius: 0.0 }, &p(1.0, 0.0)).is_err());
        let zero = ConvexSet::HalfSpace { normal: vec![0.0, 0.0], offset: 0.0 };
        assert!(project(&s, &zero, &p(1.0, 0.0)).is_err());
    }

    #[test]
    fn ball_projection_scales_radially() {
        let r = project(&e2(), &unit_ball(), &p(2.0, 0.0)).unwrap();
        assert!(e2().distance(&r.u, &p(1.0, 0.0)).unwrap() < 1e-15);
        assert!(r.certificate_residual >= -1e-12);
    }

    #[test]
    fn points_inside_project_to_themselves() {
        let x = p(0.2, -0.3);
        let r = project(&e2(), &unit_ball(), &x).unwrap();
        assert_eq!(r.u, x);
        assert_eq!(r.certificate_residual, 0.0);
    }

    #[test]
    fn segment_projection_weights_the_first_endpoint() {
        let s = e2();
        let r = project_segment(&s, &p(0.0, 0.0), &p(4.0, 0.0), &p(1.0, 2.0), 1e-12).unwrap();
        assert!((r.lambda - 0.75).abs() < 1e-11);
        assert!(s.distance(&r.u, &p(1.0, 0.0)).unwrap() < 1e-10);

        let a = p(0.3, 0.3);
        let r = project_segment(&s, &a, &p(4.0, 0.0), &a, 1e-10).unwrap();
        assert!((r.lambda - 1.0).abs() <= 1e-10);
        assert!(project_segment(&s, &a, &a, &a, 0.0).is_err());
    }

    #[test]
    fn characterization_examples() {
        let s = e2();
        let ball = unit_ball();
        let probes: Vec<Point> = (0..64)
            .map(|i| {
                let t = i as f64 * 0.1;
                p(0.9 * t.cos() * (i as f64 / 64.0), 0.9 * t.sin())
            })
            .collect();
        let ok = characterization_residual(&s, &ball, &p(2.0, 0.0), &p(1.0, 0.0), Probes::Given(&probes)).unwrap();
        assert!(ok >= 0.0);

        let wrong = characterization_residual(&s, &ball, &p(2.0, 0.0), &p(0.0, 1.0), Probes::Given(&[p(1.0, 0.0)])).unwrap();
        assert!((wrong + 3.0).abs() < 1e-12);

        let x = p(0.1, 0.1);
        let zero = characterization_residual(&s, &ball, &x, &x, Probes::Sampled { count: 100, seed: 1 }).unwrap();
        assert_eq!(zero, 0.0);

        assert!(matches!(
            characterization_residual(&s, &ball, &p(2.0, 0.0), &p(2.0, 0.0), Probes::Given(&probes)),
            Err(Error::NotInSet { .. })
        ));
        assert!(characterization_residual(&s, &ball, &x, &x, Probes::Given(&[])).is_err());
    }

    #[test]
    fn subtree_projection_walks_to_the_entry_vertex() {
        // path 0-1-2-3 with unit edges; subtree {2,3}
        let topology = TreeTopology { vertices: 4, edges: vec![(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)] };
        let s = Space::new(&SpaceDescriptor::WeightedTree { topology }).unwrap();
        let set = ConvexSet::Subtree { vertices: vec![2, 3] };
        let r = project(&s, &set, &Point::tree(0, 0.25)).unwrap();
        assert_eq!(r.u, Point::tree(1, 1.0));
        assert!(r.certificate_residual >= -1e-12);
        let inside = Point::tree(2, 0.5);
        assert_eq!(project(&s, &set, &inside).unwrap().u, inside);
        assert!(validate_set(&s, &ConvexSet::Subtree { vertices: vec![0, 2] }).is_err());
    }

    #[test]
    fn probes_stay_in_the_set() {
        let s = e2();
        let mut rng = rng::stream(4, "probes", 0);
        let sets = [
            unit_ball(),
            ConvexSet::Segment { a: p(-1.0, 0.0), b: p(2.0, 1.0) },
            ConvexSet::HalfSpace { normal: vec![1.0, 1.0], offset: 0.5 },
        ];
        for set in &sets {
            let (anchor, _) = project_point(&s, set, &p(3.0, 3.0)).unwrap();
            let probes = probe_points(&s, set, &anchor, 400, &mut rng).unwrap();
            assert_eq!(probes.len(), 400);
            for y in &probes {
                assert!(distance_to_set(&s, set, y).unwrap() < 1e-9, "{set:?} {y:?}");
            }
        }
    }
}
