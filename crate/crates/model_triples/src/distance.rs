use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ModelError;

/// Undirected graph with positive edge lengths, standing in for a discretized manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricGraph {
    names: Vec<String>,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl MetricGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self, ModelError> {
        let mut adjacency = vec![Vec::new(); vertices];
        for &(u, v, len) in &edges {
            if u >= vertices || v >= vertices || !(len.is_finite() && len > 0.0) {
                return Err(ModelError::BadEdge(u, v, len));
            }
            adjacency[u].push((v, len));
            adjacency[v].push((u, len));
        }
        let names = (0..vertices).map(|v| v.to_string()).collect();
        Ok(Self { names, edges, adjacency })
    }

    /// Graph from edges between named vertices, numbered in order of first appearance.
    pub fn from_named_edges(edges: &[(String, String, f64)]) -> Result<Self, ModelError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut names: Vec<String> = Vec::new();
        let mut numbered = Vec::with_capacity(edges.len());
        for (u, v, len) in edges {
            let mut ends = [0; 2];
            for (slot, name) in ends.iter_mut().zip([u, v]) {
                *slot = *index.entry(name.as_str()).or_insert_with(|| {
                    names.push(name.clone());
                    names.len() - 1
                });
            }
            numbered.push((ends[0], ends[1], *len));
        }
        let mut graph = Self::new(names.len(), numbered)?;
        graph.names = names;
        Ok(graph)
    }

    /// Regular `n`-gon inscribed in a circle, edges weighted by chord length.
    pub fn discretized_circle(n: usize, radius: f64) -> Result<Self, ModelError> {
        let chord = 2.0 * radius * (std::f64::consts::PI / n as f64).sin();
        Self::new(n, (0..n).map(|k| (k, (k + 1) % n, chord)).collect())
    }

    /// Random spanning tree plus `extra` random edges, lengths in `[0.1, 2)`.
    pub fn random_connected(seed: u64, vertices: usize, extra: usize) -> Result<Self, ModelError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::with_capacity(vertices + extra);
        for v in 1..vertices {
            edges.push((rng.gen_range(0..v), v, rng.gen_range(0.1..2.0)));
        }
        if vertices >= 2 {
            for _ in 0..extra {
                let u = rng.gen_range(0..vertices);
                let v = (u + rng.gen_range(1..vertices)) % vertices;
                edges.push((u, v, rng.gen_range(0.1..2.0)));
            }
        }
        Self::new(vertices, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn vertex(&self, name: &str) -> Result<usize, ModelError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| ModelError::UnknownVertex(name.to_string()))
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.shortest_paths(0).iter().all(|d| d.is_finite())
    }

    /// Dijkstra distances from `source`; unreachable vertices get `+∞`.
    pub fn shortest_paths(&self, source: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.vertex_count()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Reverse((Ordered(0.0), source)));
        while let Some(Reverse((Ordered(d), u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, len) in &self.adjacency[u] {
                let candidate = d + len;
                if candidate < dist[v] {
                    dist[v] = candidate;
                    heap.push(Reverse((Ordered(candidate), v)));
                }
            }
        }
        dist
    }

    fn check_vertex(&self, v: usize) -> Result<(), ModelError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(ModelError::UnknownVertex(v.to_string()))
        }
    }
}

#[derive(Clone, Copy)]
struct Ordered(f64);

impl PartialEq for Ordered {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Ordered {}

impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// `sup { a(x) - a(y) : |a(u) - a(v)| ≤ len(u, v) on every edge }`, computed
/// as the shortest-path distance, which is the exact dual.
pub fn connes_distance(g: &MetricGraph, x: usize, y: usize) -> Result<f64, ModelError> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let d = g.shortest_paths(x)[y];
    if d.is_finite() {
        Ok(d)
    } else {
        Err(ModelError::Disconnected(x, y))
    }
}

/// The Lipschitz linear program solved directly, for cross-validation.
pub fn lp_distance(g: &MetricGraph, x: usize, y: usize) -> Result<f64, ModelError> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Ok(0.0);
    }
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..g.vertex_count())
        .map(|v| match v {
            _ if v == x => problem.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY)),
            _ if v == y => problem.add_var(0.0, (0.0, 0.0)),
            _ => problem.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)),
        })
        .collect();
    for &(u, v, len) in g.edges() {
        problem.add_constraint([(vars[u], 1.0), (vars[v], -1.0)], ComparisonOp::Le, len);
        problem.add_constraint([(vars[v], 1.0), (vars[u], -1.0)], ComparisonOp::Le, len);
    }
    match problem.solve() {
        Ok(solution) if solution.objective().is_finite() => Ok(solution.objective()),
        Ok(_) => Err(ModelError::Disconnected(x, y)),
        Err(minilp::Error::Unbounded) => Err(ModelError::Disconnected(x, y)),
        Err(e) => Err(ModelError::Lp(e.to_string())),
    }
}
