//! A small catalog of nonexpansive self-maps with known fixed-point sets.

use serde::{Deserialize, Serialize};

use crate::convex::{project_point, validate_set, ConvexSet};
use crate::error::{Error, Result};
use crate::geometry::{Geodesic, Point};
use crate::spaces::{hyperbolic, Space};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mapping {
    Identity,
    /// Rotation by `angle` radians about `center`; planar spaces only.
    Rotation { center: Point, angle: f64 },
    ProjectionOnto { set: ConvexSet },
    /// `x ↦ λx ⊕ (1−λ)S(x)`.
    GeodesicAverage { lambda: f64, inner: Box<Mapping> },
    /// Applied first to last. `fixed_set` declares `F(T)` when the
    /// constructor knows it.
    Composition {
        maps: Vec<Mapping>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fixed_set: Option<ConvexSet>,
    },
    /// `x ↦ x + offset` (Euclidean only); fixed-point free unless the
    /// offset vanishes.
    Translation { offset: Vec<f64> },
}

/// What is known about `F(T)`.
#[derive(Debug, Clone, PartialEq)]
pub enum FixedPoints {
    Known(ConvexSet),
    Empty,
    Unknown,
}

fn rotate_plane(c: &[f64], x: &[f64], angle: f64) -> Vec<f64> {
    let (s, co) = angle.sin_cos();
    let (dx, dy) = (x[0] - c[0], x[1] - c[1]);
    vec![c[0] + co * dx - s * dy, c[1] + s * dx + co * dy]
}

impl Mapping {
    pub fn validate(&self, space: &Space) -> Result<()> {
        match self {
            Mapping::Identity => Ok(()),
            Mapping::Rotation { center, angle } => {
                let planar = space.euclidean_dim() == Some(2) || space.hyperbolic_dim() == Some(2);
                if !planar {
                    return Err(Error::InvalidMapping(format!(
                        "rotations need euclidean(2) or hyperbolic(2), not {}",
                        space.descriptor().label()
                    )));
                }
                if !angle.is_finite() {
                    return Err(Error::InvalidMapping("rotation angle must be finite".into()));
                }
                match space.validate_point(center) {
                    None => Ok(()),
                    Some(v) => Err(Error::InvalidMapping(format!("rotation center: {v}"))),
                }
            }
            Mapping::ProjectionOnto { set } => validate_set(space, set),
            Mapping::GeodesicAverage { lambda, inner } => {
                if !(0.0..=1.0).contains(lambda) {
                    return Err(Error::InvalidMapping(format!("average weight {lambda} outside [0, 1]")));
                }
                inner.validate(space)
            }
            Mapping::Composition { maps, fixed_set } => {
                maps.iter().try_for_each(|m| m.validate(space))?;
                fixed_set.as_ref().map_or(Ok(()), |s| validate_set(space, s))
            }
            Mapping::Translation { offset } => match space.euclidean_dim() {
                Some(d) if d == offset.len() && offset.iter().all(|v| v.is_finite()) => Ok(()),
                _ => Err(Error::InvalidMapping("translations need a Euclidean space of matching dimension".into())),
            },
        }
    }

    pub fn apply(&self, space: &Space, x: &Point) -> Result<Point> {
        match self {
            Mapping::Identity => {
                space.distance(x, x)?;
                Ok(x.clone())
            }
            Mapping::Rotation { center, angle } => match (center, x) {
                (Point::Euclidean(c), Point::Euclidean(p)) if space.euclidean_dim() == Some(2) && p.len() == 2 => {
                    Ok(Point::Euclidean(rotate_plane(c, p, *angle)))
                }
                (Point::Hyperboloid(c), Point::Hyperboloid(p)) if space.hyperbolic_dim() == Some(2) && p.len() == 3 => {
                    // carry the center to the base point, rotate the spatial
                    // coordinates there, and carry back
                    let at_base = hyperbolic::boost_from(c, p);
                    let spun = rotate_plane(&[0.0, 0.0], &at_base[1..], *angle);
                    let rotated = [at_base[0], spun[0], spun[1]];
                    Ok(Point::Hyperboloid(hyperbolic::renormalize(hyperbolic::boost_to(c, &rotated))))
                }
                _ => Err(Error::InvalidMapping(format!(
                    "rotation is unsupported in {}",
                    space.descriptor().label()
                ))),
            },
            Mapping::ProjectionOnto { set } => Ok(project_point(space, set, x)?.0),
            Mapping::GeodesicAverage { lambda, inner } => {
                let image = inner.apply(space, x)?;
                space.geodesic_point(x, &image, *lambda)
            }
            Mapping::Composition { maps, .. } => {
                let mut y = x.clone();
                for m in maps {
                    y = m.apply(space, &y)?;
                }
                Ok(y)
            }
            Mapping::Translation { offset } => match x {
                Point::Euclidean(c) if c.len() == offset.len() => {
                    Ok(Point::Euclidean(c.iter().zip(offset).map(|(a, b)| a + b).collect()))
                }
                _ => Err(Error::InvalidMapping("translation applied outside its Euclidean space".into())),
            },
        }
    }

    pub fn fixed_points(&self) -> FixedPoints {
        match self {
            Mapping::Identity => FixedPoints::Known(ConvexSet::WholeSpace),
            Mapping::Rotation { center, angle } => {
                if angle.rem_euclid(std::f64::consts::TAU) == 0.0 {
                    FixedPoints::Known(ConvexSet::WholeSpace)
                } else {
                    FixedPoints::Known(ConvexSet::Segment { a: center.clone(), b: center.clone() })
                }
            }
            Mapping::ProjectionOnto { set } => FixedPoints::Known(set.clone()),
            Mapping::GeodesicAverage { lambda, inner } => {
                if *lambda == 1.0 {
                    FixedPoints::Known(ConvexSet::WholeSpace)
                } else {
                    inner.fixed_points()
                }
            }
            Mapping::Composition { maps, fixed_set } => {
                if let Some(set) = fixed_set {
                    return FixedPoints::Known(set.clone());
                }
                let mut active = maps.iter().filter(|m| !matches!(m, Mapping::Identity));
                match (active.next(), active.next()) {
                    (None, _) => FixedPoints::Known(ConvexSet::WholeSpace),
                    (Some(only), None) => only.fixed_points(),
                    _ => FixedPoints::Unknown,
                }
            }
            Mapping::Translation { offset } => {
                if offset.iter().all(|v| *v == 0.0) {
                    FixedPoints::Known(ConvexSet::WholeSpace)
                } else {
                    FixedPoints::Empty
                }
            }
        }
    }
}

/// `T(x)`.
pub fn apply_mapping(space: &Space, mapping: &Mapping, x: &Point) -> Result<Point> {
    mapping.apply(space, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SpaceDescriptor;

    fn e2() -> Space {
        Space::new(&SpaceDescriptor::Euclidean { dim: 2 }).unwrap()
    }

    #[test]
    fn quarter_turn_about_an_offset_center() {
        let s = e2();
        let t = Mapping::Rotation { center: Point::euclidean(vec![0.5, 0.0]), angle: std::f64::consts::FRAC_PI_2 };
        let y = t.apply(&s, &Point::euclidean(vec![1.5, 0.0])).unwrap();
        assert!(s.distance(&y, &Point::euclidean(vec![0.5, 1.0])).unwrap() < 1e-15);
    }

    #[test]
    fn identity_and_trivial_average_fix_everything() {
        let s = e2();
        let x = Point::euclidean(vec![0.3, -2.0]);
        assert_eq!(Mapping::Identity.apply(&s, &x).unwrap(), x);
        let avg = Mapping::GeodesicAverage {
            lambda: 1.0,
            inner: Box::new(Mapping::Translation { offset: vec![5.0, 5.0] }),
        };
        assert_eq!(avg.apply(&s, &x).unwrap(), x);
        assert_eq!(avg.fixed_points(), FixedPoints::Known(ConvexSet::WholeSpace));
    }

    #[test]
    fn hyperbolic_rotation_fixes_its_center_and_preserves_distance() {
        let h = Space::new(&SpaceDescriptor::Hyperbolic { dim: 2 }).unwrap();
        let c = h.point_at_angle(&h.origin(), 0.4, 0.8).unwrap().unwrap();
        let t = Mapping::Rotation { center: c.clone(), angle: 2.0 };
        let tc = t.apply(&h, &c).unwrap();
        assert!(h.distance(&tc, &c).unwrap() < 1e-12);
        let x = h.point_at_angle(&h.origin(), -1.0, 1.3).unwrap().unwrap();
        let tx = t.apply(&h, &x).unwrap();
        assert!((h.distance(&tx, &c).unwrap() - h.distance(&x, &c).unwrap()).abs() < 1e-12);
        assert!(h.validate_point(&tx).is_none());
    }

    #[test]
    fn rotations_need_planar_spaces() {
        let s = Space::new(&SpaceDescriptor::Euclidean { dim: 3 }).unwrap();
        let t = Mapping::Rotation { center: Point::euclidean(vec![0.0, 0.0, 0.0]), angle: 1.0 };
        assert!(t.validate(&s).is_err());
        assert!(t.apply(&s, &Point::euclidean(vec![1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn fixed_point_catalog() {
        let c = Point::euclidean(vec![1.0, 1.0]);
        let rot = Mapping::Rotation { center: c.clone(), angle: 1.0 };
        assert_eq!(rot.fixed_points(), FixedPoints::Known(ConvexSet::Segment { a: c.clone(), b: c }));
        let seg = ConvexSet::Segment { a: Point::euclidean(vec![0.0, 0.0]), b: Point::euclidean(vec![1.0, 0.0]) };
        let proj = Mapping::ProjectionOnto { set: seg.clone() };
        let avg = Mapping::GeodesicAverage { lambda: 0.3, inner: Box::new(proj.clone()) };
        assert_eq!(avg.fixed_points(), FixedPoints::Known(seg.clone()));
        let comp = Mapping::Composition { maps: vec![Mapping::Identity, proj.clone()], fixed_set: None };
        assert_eq!(comp.fixed_points(), FixedPoints::Known(seg));
        let both = Mapping::Composition { maps: vec![rot, proj], fixed_set: None };
        assert_eq!(both.fixed_points(), FixedPoints::Unknown);
        assert_eq!(Mapping::Translation { offset: vec![1.0, 0.0] }.fixed_points(), FixedPoints::Empty);
    }

    #[test]
    fn mapping_json_shape() {
        let m: Mapping = serde_json::from_str(
            r#"{"geodesic_average":{"lambda":0.5,"inner":{"composition":{"maps":["identity",{"translation":{"offset":[1.0,0.0]}}]}}}}"#,
        )
        .unwrap();
        assert!(matches!(m, Mapping::GeodesicAverage { .. }));
    }
}
