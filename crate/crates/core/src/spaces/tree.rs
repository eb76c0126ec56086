//! Metric trees with positive edge lengths.
//!
//! The tree is rooted at vertex 0 once, at construction. Every point is then
//! handled internally as a [`Located`] value: the child endpoint of its edge
//! plus the height above that child. Distances and geodesics only need root
//! depths and lowest common ancestors, so each query costs O(tree depth).

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// `{"vertices": N, "edges": [[u, v, length], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeTopology {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl TreeTopology {
    /// A hub (vertex 0) with `rays` edges `(0, i+1, length)`.
    pub fn star(rays: usize, length: f64) -> Self {
        Self { vertices: rays + 1, edges: (0..rays).map(|i| (0, i + 1, length)).collect() }
    }

    /// A random recursive tree with `edges` edges and lengths in `[0.5, 2)`.
    pub fn random<R: Rng + ?Sized>(edges: usize, rng: &mut R) -> Self {
        let list = (1..=edges)
            .map(|v| (rng.gen_range(0..v), v, rng.gen_range(0.5..2.0)))
            .collect();
        Self { vertices: edges + 1, edges: list }
    }
}

/// A point expressed relative to the rooted tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Located {
    /// Child endpoint of the edge holding the point.
    pub child: usize,
    /// Arc length from `child` up toward its parent, in `[0, len]`.
    pub height: f64,
}

/// Validated topology with rooted path tables.
#[derive(Debug, Clone)]
pub struct TreeIndex {
    topology: TreeTopology,
    parent: Vec<usize>,
    parent_edge: Vec<usize>,
    /// Weighted distance from the root.
    depth: Vec<f64>,
    /// Hop count from the root.
    level: Vec<usize>,
    /// Lowest-indexed edge incident to each vertex.
    lowest_edge: Vec<usize>,
    /// Child endpoint of each edge.
    edge_child: Vec<usize>,
    total_length: f64,
}

const NONE: usize = usize::MAX;

impl TreeIndex {
    pub fn new(topology: &TreeTopology) -> Result<Self> {
        let n = topology.vertices;
        if n < 2 {
            return Err(Error::InvalidSpace("a tree needs at least two vertices".into()));
        }
        if topology.edges.len() != n - 1 {
            return Err(Error::InvalidSpace(format!(
                "a tree on {n} vertices has {} edges, found {}",
                n - 1,
                topology.edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut lowest_edge = vec![NONE; n];
        for (e, &(u, v, len)) in topology.edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidSpace(format!("edge {e} references a vertex outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidSpace(format!("edge {e} is a self-loop")));
            }
            if !(len.is_finite() && len > 0.0) {
                return Err(Error::InvalidSpace(format!("edge {e} has non-positive length {len}")));
            }
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
            lowest_edge[u] = lowest_edge[u].min(e);
            lowest_edge[v] = lowest_edge[v].min(e);
        }

        let mut parent = vec![NONE; n];
        let mut parent_edge = vec![NONE; n];
        let mut depth = vec![0.0; n];
        let mut level = vec![0; n];
        let mut seen = vec![false; n];
        let mut edge_child = vec![NONE; n - 1];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &adjacency[u] {
                if seen[v] {
                    if parent_edge[u] != e {
                        return Err(Error::InvalidSpace("edge list contains a cycle".into()));
                    }
                    continue;
                }
                seen[v] = true;
                parent[v] = u;
                parent_edge[v] = e;
                depth[v] = depth[u] + topology.edges[e].2;
                level[v] = level[u] + 1;
                edge_child[e] = v;
                queue.push_back(v);
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSpace("tree is disconnected".into()));
        }
        let total_length = topology.edges.iter().map(|e| e.2).sum();
        Ok(Self {
            topology: topology.clone(),
            parent,
            parent_edge,
            depth,
            level,
            lowest_edge,
            edge_child,
            total_length,
        })
    }

    pub fn topology(&self) -> &TreeTopology {
        &self.topology
    }

    pub fn vertex_count(&self) -> usize {
        self.topology.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.topology.edges.len()
    }

    pub fn edge_length(&self, edge: usize) -> f64 {
        self.topology.edges[edge].2
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Canonical representative of a vertex: its lowest-indexed incident
    /// edge, with the offset that lands on the vertex.
    pub fn vertex_point(&self, vertex: usize) -> Point {
        let e = self.lowest_edge[vertex];
        let (u, _, len) = self.topology.edges[e];
        Point::Tree { edge: e, offset: if u == vertex { 0.0 } else { len } }
    }

    /// Vertex sitting at a tree point, if any.
    pub fn vertex_at(&self, edge: usize, offset: f64) -> Option<usize> {
        let (u, v, len) = self.topology.edges[edge];
        if offset <= 0.0 {
            Some(u)
        } else if offset >= len {
            Some(v)
        } else {
            None
        }
    }

    pub(crate) fn check(&self, p: &Point) -> Result<(usize, f64)> {
        match *p {
            Point::Tree { edge, offset } => {
                if !offset.is_finite() {
                    return Err(Error::NonFinite);
                }
                if edge >= self.edge_count() {
                    return Err(Error::PointMismatch {
                        space: "tree".into(),
                        reason: format!("edge {edge} does not exist"),
                    });
                }
                Ok((edge, offset))
            }
            _ => Err(Error::PointMismatch { space: "tree".into(), reason: "expected a tree location".into() }),
        }
    }

    /// Violations of the point invariants, if any.
    pub fn violation(&self, p: &Point) -> Option<String> {
        let (edge, offset) = match self.check(p) {
            Ok(v) => v,
            Err(e) => return Some(e.to_string()),
        };
        let len = self.edge_length(edge);
        if offset < 0.0 || offset > len {
            return Some(format!("offset {offset} outside [0, {len}] on edge {edge}"));
        }
        if let Some(vertex) = self.vertex_at(edge, offset) {
            if self.lowest_edge[vertex] != edge {
                return Some(format!(
                    "vertex {vertex} is not in canonical form (expected edge {})",
                    self.lowest_edge[vertex]
                ));
            }
        }
        None
    }

    pub(crate) fn locate(&self, p: &Point) -> Result<Located> {
        let (edge, offset) = self.check(p)?;
        let (u, _, len) = self.topology.edges[edge];
        let offset = offset.clamp(0.0, len);
        let child = self.edge_child[edge];
        let height = if child == u { offset } else { len - offset };
        Ok(Located { child, height })
    }

    /// Converts back to the public representation, canonicalising vertices.
    pub(crate) fn to_point(&self, loc: Located) -> Point {
        let edge = self.parent_edge[loc.child];
        let (u, _, len) = self.topology.edges[edge];
        if loc.height <= 0.0 {
            return self.vertex_point(loc.child);
        }
        if loc.height >= len {
            return self.vertex_point(self.parent[loc.child]);
        }
        let offset = if self.edge_child[edge] == u { loc.height } else { len - loc.height };
        Point::Tree { edge, offset }
    }

    fn root_depth(&self, loc: Located) -> f64 {
        self.depth[loc.child] - loc.height
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.level[a] > self.level[b] {
            a = self.parent[a];
        }
        while self.level[b] > self.level[a] {
            b = self.parent[b];
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
        }
        a
    }

    /// Root depth of the highest point on the path between `a` and `b`.
    fn meeting_depth(&self, a: Located, b: Located) -> f64 {
        let (ra, rb) = (self.root_depth(a), self.root_depth(b));
        if a.child == b.child {
            return ra.min(rb);
        }
        let w = self.lca(a.child, b.child);
        if w == a.child {
            ra
        } else if w == b.child {
            rb
        } else {
            self.depth[w]
        }
    }

    pub(crate) fn distance_located(&self, a: Located, b: Located) -> f64 {
        let (ra, rb) = (self.root_depth(a), self.root_depth(b));
        if a.child == b.child {
            return (ra - rb).abs();
        }
        let m = self.meeting_depth(a, b);
        ((ra - m) + (rb - m)).max(0.0)
    }

    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        Ok(self.distance_located(self.locate(a)?, self.locate(b)?))
    }

    /// Point on the root-ward path from `from` whose root depth is `target`.
    fn ascend(&self, from: Located, target: f64) -> Located {
        let target = target.max(0.0);
        let mut child = from.child;
        while target < self.depth[self.parent[child]] {
            child = self.parent[child];
        }
        let len = self.depth[child] - self.depth[self.parent[child]];
        Located { child, height: (self.depth[child] - target).clamp(0.0, len) }
    }

    /// `λx ⊕ (1−λ)y` along the unique path.
    pub fn geodesic_point(&self, x: &Point, y: &Point, lambda: f64) -> Result<Point> {
        let (a, b) = (self.locate(x)?, self.locate(y)?);
        if lambda >= 1.0 {
            return Ok(self.to_point(a));
        }
        if lambda <= 0.0 {
            return Ok(self.to_point(b));
        }
        let d = self.distance_located(a, b);
        let (ra, rb) = (self.root_depth(a), self.root_depth(b));
        let m = if a.child == b.child { ra.min(rb) } else { self.meeting_depth(a, b) };
        let from_x = (1.0 - lambda) * d;
        let rise_x = ra - m;
        let loc = if from_x <= rise_x {
            self.ascend(a, ra - from_x)
        } else {
            let from_y = (d - from_x).clamp(0.0, rb - m);
            self.ascend(b, rb - from_y)
        };
        Ok(self.to_point(loc))
    }

    /// Uniform sample with respect to arc length.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let mut target = rng.gen::<f64>() * self.total_length;
        let mut edge = self.edge_count() - 1;
        for (e, &(_, _, len)) in self.topology.edges.iter().enumerate() {
            if target < len {
                edge = e;
                break;
            }
            target -= len;
        }
        let len = self.edge_length(edge);
        let offset = rng.gen::<f64>() * len;
        let loc = self.locate(&Point::Tree { edge, offset }).expect("edge index in range");
        self.to_point(loc)
    }

    /// A point at distance `r` from `center` (or the farthest reachable one).
    pub fn random_at_distance<R: Rng + ?Sized>(&self, center: &Point, r: f64, rng: &mut R) -> Result<Point> {
        let c = self.locate(center)?;
        let mut far = Vec::new();
        let mut best = (0usize, f64::NEG_INFINITY);
        for v in 0..self.vertex_count() {
            let d = self.distance_located(c, self.locate(&self.vertex_point(v))?);
            if d >= r {
                far.push((v, d));
            }
            if d > best.1 {
                best = (v, d);
            }
        }
        let (target, d) = if far.is_empty() { best } else { far[rng.gen_range(0..far.len())] };
        if d <= 0.0 {
            return Ok(center.clone());
        }
        // weight on center is λ, so d(center, result) = (1 − λ)d = min(r, d)
        let lambda = (1.0 - r / d).max(0.0);
        self.geodesic_point(center, &self.vertex_point(target), lambda)
    }

    pub fn parent(&self, vertex: usize) -> Option<usize> {
        (vertex != 0).then(|| self.parent[vertex])
    }

    /// Edge endpoints.
    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        let (u, v, _) = self.topology.edges[edge];
        (u, v)
    }
}
