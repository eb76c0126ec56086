//! Property tests for the model spaces and the quasilinearization form.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use hadamard::geometry::tolerance_scale;
use hadamard::rng::stream;
use hadamard::spaces::tree::TreeTopology;
use hadamard::{cauchy_schwarz_gap, quasilin, Geodesic, Point, Space, SpaceDescriptor};
use proptest::prelude::*;

fn descriptor(kind: u8, seed: u64) -> SpaceDescriptor {
    match kind % 5 {
        0 => SpaceDescriptor::Euclidean { dim: 3 },
        1 => SpaceDescriptor::Hyperbolic { dim: 2 },
        2 => SpaceDescriptor::Hyperbolic { dim: 4 },
        3 => SpaceDescriptor::WeightedTree { topology: TreeTopology::random(8, &mut stream(seed, "proptest-tree", 0)) },
        _ => SpaceDescriptor::product(SpaceDescriptor::Euclidean { dim: 2 }, SpaceDescriptor::Hyperbolic { dim: 2 }),
    }
}

fn sample(kind: u8, seed: u64, count: usize) -> (Space, Vec<Point>) {
    let space = Space::new(&descriptor(kind, seed)).unwrap();
    let region = space.default_region(3.0);
    let mut rng = stream(seed, "proptest-points", kind as u64);
    let points = (0..count).map(|_| space.random_point(&region, &mut rng).unwrap()).collect();
    (space, points)
}

const EPS: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn metric_axioms(kind in 0u8..5, seed in any::<u64>()) {
        let (s, p) = sample(kind, seed, 3);
        let scale = tolerance_scale(&s, &[&p[0], &p[1], &p[2]]).unwrap();
        let (ab, ba) = (s.distance(&p[0], &p[1]).unwrap(), s.distance(&p[1], &p[0]).unwrap());
        prop_assert!(ab >= 0.0);
        prop_assert!(s.distance(&p[0], &p[0]).unwrap() <= EPS);
        prop_assert!((ab - ba).abs() <= EPS * scale);
        let via = s.distance(&p[0], &p[2]).unwrap() + s.distance(&p[2], &p[1]).unwrap();
        prop_assert!(ab <= via + EPS * scale);
    }

    #[test]
    fn geodesic_points_split_the_distance(kind in 0u8..5, seed in any::<u64>(), lambda in 0.0f64..=1.0) {
        let (s, p) = sample(kind, seed, 2);
        let d = s.distance(&p[0], &p[1]).unwrap();
        let z = s.geodesic_point(&p[0], &p[1], lambda).unwrap();
        let tol = EPS * (1.0 + d * d);
        prop_assert!((s.distance(&z, &p[0]).unwrap() - (1.0 - lambda) * d).abs() <= tol);
        prop_assert!((s.distance(&z, &p[1]).unwrap() - lambda * d).abs() <= tol);
    }

    #[test]
    fn quasilin_identities(kind in 0u8..5, seed in any::<u64>()) {
        let (s, p) = sample(kind, seed, 5);
        let (a, b, c, d, x) = (&p[0], &p[1], &p[2], &p[3], &p[4]);
        let scale = tolerance_scale(&s, &[a, b, c, d, x]).unwrap();
        let q = |a, b, c, d| quasilin(&s, a, b, c, d).unwrap();
        prop_assert!((q(a, b, c, d) - q(c, d, a, b)).abs() <= EPS * scale);
        prop_assert!((q(a, b, c, d) + q(b, a, c, d)).abs() <= EPS * scale);
        prop_assert!((q(a, b, c, d) - q(a, x, c, d) - q(x, b, c, d)).abs() <= EPS * scale);
        let ab = s.distance(a, b).unwrap();
        prop_assert!((q(a, b, a, b) - ab * ab).abs() <= EPS * scale);
        prop_assert!(cauchy_schwarz_gap(&s, a, b, c, d).unwrap() >= -EPS * scale);
    }

    #[test]
    fn product_distance_is_the_l2_combination(seed in any::<u64>()) {
        let (s, p) = sample(4, seed, 2);
        let e = Space::new(&SpaceDescriptor::Euclidean { dim: 2 }).unwrap();
        let h = Space::new(&SpaceDescriptor::Hyperbolic { dim: 2 }).unwrap();
        let (Point::Product(a1, a2), Point::Product(b1, b2)) = (&p[0], &p[1]) else { unreachable!() };
        let parts = e.distance(a1, b1).unwrap().powi(2) + h.distance(a2, b2).unwrap().powi(2);
        let d = s.distance(&p[0], &p[1]).unwrap();
        prop_assert!((d * d - parts).abs() <= EPS * (1.0 + parts));
    }

    #[test]
    fn tree_distance_matches_a_subdivided_graph(seed in any::<u64>(), picks in prop::collection::vec((0usize..8, 0usize..=4), 2)) {
        const PIECES: usize = 4;
        let topology = TreeTopology::random(8, &mut stream(seed, "proptest-tree", 0));
        let s = Space::new(&SpaceDescriptor::WeightedTree { topology: topology.clone() }).unwrap();
        let points: Vec<Point> = picks
            .iter()
            .map(|&(e, j)| Point::tree(e, topology.edges[e].2 * j as f64 / PIECES as f64))
            .collect();
        let graph = SubdividedTree::new(&topology, PIECES);
        let want = graph.dijkstra(graph.node(picks[0]))[graph.node(picks[1])];
        let got = s.distance(&points[0], &points[1]).unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want), "got {got}, want {want}");
    }
}

/// Each edge cut into equal pieces; interior nodes are numbered after the
/// original vertices.
struct SubdividedTree {
    vertices: usize,
    pieces: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl SubdividedTree {
    fn new(topology: &TreeTopology, pieces: usize) -> Self {
        let vertices = topology.vertices;
        let total = vertices + topology.edges.len() * (pieces - 1);
        let mut adjacency = vec![Vec::new(); total];
        let mut link = |a: usize, b: usize, w: f64| {
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        };
        for (e, &(u, v, len)) in topology.edges.iter().enumerate() {
            let step = len / pieces as f64;
            let interior = |j: usize| vertices + e * (pieces - 1) + (j - 1);
            let chain: Vec<usize> =
                std::iter::once(u).chain((1..pieces).map(interior)).chain(std::iter::once(v)).collect();
            for w in chain.windows(2) {
                link(w[0], w[1], step);
            }
        }
        Self { vertices, pieces, edges: topology.edges.clone(), adjacency }
    }

    /// Node at `j/pieces` of the way along `edge` from its first endpoint.
    fn node(&self, (edge, j): (usize, usize)) -> usize {
        let (u, v, _) = self.edges[edge];
        match j {
            0 => u,
            j if j == self.pieces => v,
            j => self.vertices + edge * (self.pieces - 1) + (j - 1),
        }
    }

    fn dijkstra(&self, source: usize) -> Vec<f64> {
        #[derive(PartialEq)]
        struct Entry(f64, usize);
        impl Eq for Entry {}
        impl PartialOrd for Entry {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Entry {
            fn cmp(&self, other: &Self) -> Ordering {
                other.0.total_cmp(&self.0)
            }
        }
        let mut dist = vec![f64::INFINITY; self.adjacency.len()];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::from([Entry(0.0, source)]);
        while let Some(Entry(d, n)) = heap.pop() {
            if d > dist[n] {
                continue;
            }
            for &(m, w) in &self.adjacency[n] {
                if d + w < dist[m] {
                    dist[m] = d + w;
                    heap.push(Entry(d + w, m));
                }
            }
        }
        dist
    }
}
