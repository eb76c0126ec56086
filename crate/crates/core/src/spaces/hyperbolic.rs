//! Hyperboloid model of hyperbolic space with curvature −1.
//!
//! Points live on the upper sheet `{x : ⟨x,x⟩_M = −1, x₀ > 0}` of
//! `R^{1,dim}` with the Minkowski product `⟨x,y⟩_M = −x₀y₀ + Σ xᵢyᵢ`.

use rand::Rng;
use rand_distr::StandardNormal;

/// Relative tolerance on the hyperboloid constraint.
pub const CONSTRAINT_TOL: f64 = 1e-9;

pub fn minkowski(a: &[f64], b: &[f64]) -> f64 {
    let spatial: f64 = a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum();
    spatial - a[0] * b[0]
}

/// `|⟨x,x⟩_M + 1|` scaled by the size of the coordinates.
pub fn constraint_residual(x: &[f64]) -> f64 {
    (minkowski(x, x) + 1.0).abs() / (1.0 + x[0] * x[0])
}

/// Geodesic distance.
///
/// Far apart points use `arcosh(−⟨a,b⟩_M)` with the argument clamped to
/// `≥ 1`. Close points use the equivalent `2·asinh(‖a−b‖_M / 2)`, which
/// does not lose half the digits to cancellation near `arcosh(1)`.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    let cosh_d = (-minkowski(a, b)).max(1.0);
    if cosh_d > 2.0 {
        return cosh_d.acosh();
    }
    let mut chord = -(a[0] - b[0]).powi(2);
    for (x, y) in a[1..].iter().zip(&b[1..]) {
        chord += (x - y).powi(2);
    }
    2.0 * (chord.max(0.0).sqrt() / 2.0).asinh()
}

/// Rescales onto the sheet: divide by `√(−⟨x,x⟩_M)`.
pub fn renormalize(mut x: Vec<f64>) -> Vec<f64> {
    let q = -minkowski(&x, &x);
    if q > 0.0 {
        let s = q.sqrt();
        x.iter_mut().for_each(|v| *v /= s);
    }
    if x[0] < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    x
}

/// `λx ⊕ (1−λ)y = (sinh(λd)·x + sinh((1−λ)d)·y) / sinh(d)`.
pub fn geodesic_point(x: &[f64], y: &[f64], lambda: f64) -> Vec<f64> {
    let d = distance(x, y);
    let (wx, wy) = if d < 1e-9 {
        (lambda, 1.0 - lambda)
    } else {
        let s = d.sinh();
        ((lambda * d).sinh() / s, ((1.0 - lambda) * d).sinh() / s)
    };
    renormalize(x.iter().zip(y).map(|(a, b)| wx * a + wy * b).collect())
}

/// Projects an ambient vector onto the tangent space at `p`.
pub fn tangent_at(p: &[f64], w: &[f64]) -> Vec<f64> {
    let c = minkowski(p, w);
    w.iter().zip(p).map(|(wi, pi)| wi + c * pi).collect()
}

/// Exponential map at `p` applied to the tangent direction `v` scaled to
/// length `t`.
pub fn exp_direction(p: &[f64], v: &[f64], t: f64) -> Option<Vec<f64>> {
    let len = minkowski(v, v).max(0.0).sqrt();
    if !(len > 0.0) {
        return None;
    }
    let (c, s) = (t.cosh(), t.sinh() / len);
    Some(renormalize(p.iter().zip(v).map(|(pi, vi)| c * pi + s * vi).collect()))
}

/// Uniformly distributed unit tangent direction at `p`.
pub fn random_direction<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..p.len()).map(|_| rng.sample(StandardNormal)).collect();
        let v = tangent_at(p, &w);
        if minkowski(&v, &v) > 1e-12 {
            return v;
        }
    }
}

/// Lorentz boost carrying the base point `(1,0,…,0)` to `c`.
pub fn boost_to(c: &[f64], x: &[f64]) -> Vec<f64> {
    let c0 = c[0];
    let cs = &c[1..];
    let xs = &x[1..];
    let dot: f64 = cs.iter().zip(xs).map(|(a, b)| a * b).sum();
    let mut out = Vec::with_capacity(x.len());
    out.push(c0 * x[0] + dot);
    for (ci, xi) in cs.iter().zip(xs) {
        out.push(ci * x[0] + xi + ci * dot / (1.0 + c0));
    }
    out
}

/// Inverse of [`boost_to`]: carries `c` to the base point.
pub fn boost_from(c: &[f64], x: &[f64]) -> Vec<f64> {
    let mut inv = c.to_vec();
    inv[1..].iter_mut().for_each(|v| *v = -*v);
    boost_to(&inv, x)
}
