//! Decorated graphs and their AKLT Hamiltonians.
//!
//! Vertex ids are positions in the vertex list and double as tensor-factor
//! positions of the physical Hilbert space. Builders assign them
//! deterministically so every assembled operator is bit-reproducible.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{invalid, Result};
use crate::sparse::{self, SparseHermitianOperator, TwoSiteTerm};
use crate::spin;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "GL")]
    Gl,
    #[serde(rename = "CN")]
    Cn,
    #[serde(rename = "GR")]
    Gr,
    #[serde(rename = "CENTER")]
    Center,
    #[serde(rename = "BULK")]
    Bulk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub two_s: u32,
    pub region: Region,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<[usize; 2]>,
}

impl DecoratedGraph {
    /// Validates ids, endpoints and that no vertex has more bonds than its
    /// spin can carry (each edge uses one virtual spin-1/2).
    pub fn new(vertices: Vec<Vertex>, edges: Vec<[usize; 2]>) -> Result<Self> {
        if vertices.is_empty() {
            return invalid("graph has no vertices");
        }
        for (k, v) in vertices.iter().enumerate() {
            if v.id != k {
                return invalid(format!("vertex at position {k} has id {}", v.id));
            }
            if v.two_s == 0 {
                return invalid(format!("vertex {k} has spin 0"));
            }
        }
        let mut seen = BTreeSet::new();
        for &[a, b] in &edges {
            if a >= vertices.len() || b >= vertices.len() || a == b {
                return invalid(format!("invalid edge ({a}, {b})"));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return invalid(format!("duplicate edge ({a}, {b})"));
            }
        }
        let graph = Self { vertices, edges };
        for v in &graph.vertices {
            let deg = graph.degree(v.id);
            if deg > v.two_s as usize {
                return invalid(format!(
                    "vertex {} has degree {deg} but spin {}/2",
                    v.id, v.two_s
                ));
            }
        }
        Ok(graph)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&id)).count()
    }

    /// Twice the total spin selected by the interaction on `edge`.
    ///
    /// This is the sum of the endpoint degrees in the full decorated
    /// lattice, which equals the sum of the spin tags (a spin-s vertex sits
    /// at a site of lattice degree 2s).
    pub fn z(&self, edge: usize) -> u32 {
        let [a, b] = self.edges[edge];
        self.vertices[a].two_s + self.vertices[b].two_s
    }

    pub fn local_dims(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v.two_s as usize + 1).collect()
    }

    pub fn hilbert_dim(&self) -> Result<usize> {
        sparse::product_dim(&self.local_dims())
    }

    pub fn vertices_in(&self, region: Region) -> Vec<usize> {
        self.vertices
            .iter()
            .filter(|v| v.region == region)
            .map(|v| v.id)
            .collect()
    }

    /// Subgraph on `ids`, renumbered in the given order, keeping every edge
    /// with both endpoints inside.
    pub fn induced_subgraph(&self, ids: &[usize]) -> Result<Self> {
        let mut position = HashMap::new();
        for (k, &id) in ids.iter().enumerate() {
            if id >= self.vertices.len() || position.insert(id, k).is_some() {
                return invalid(format!("invalid or repeated vertex {id}"));
            }
        }
        let vertices = ids
            .iter()
            .enumerate()
            .map(|(k, &id)| Vertex { id: k, ..self.vertices[id] })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|&[a, b]| Some([*position.get(&a)?, *position.get(&b)?]))
            .collect();
        Self::new(vertices, edges)
    }

    /// Hub `hub` together with the spin-1 paths on its incident edges.
    pub fn y_neighborhood(&self, hub: usize) -> Vec<usize> {
        let mut out = vec![hub];
        let mut queue = VecDeque::from([hub]);
        let mut seen = BTreeSet::from([hub]);
        while let Some(x) = queue.pop_front() {
            for &[a, b] in &self.edges {
                let y = match (a == x, b == x) {
                    (true, _) => b,
                    (_, true) => a,
                    _ => continue,
                };
                if self.vertices[y].region == Region::Bulk && seen.insert(y) {
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out
    }

    /// Edges with both endpoints in `ids`.
    pub fn edges_within(&self, ids: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = ids.iter().copied().collect();
        (0..self.edges.len())
            .filter(|&e| set.contains(&self.edges[e][0]) && set.contains(&self.edges[e][1]))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(text)?;
        Self::new(raw.vertices, raw.edges)
    }
}

fn vertex(id: usize, two_s: u32, region: Region) -> Vertex {
    Vertex { id, two_s, region }
}

fn require_n(n: usize) -> Result<()> {
    if n == 0 {
        return invalid("decoration number n must be at least 1");
    }
    Ok(())
}

/// `Y_v(n)`: hub 0, then leg `l` occupies ids `1 + l*n .. 1 + (l+1)*n`,
/// ordered outward from the hub.
pub fn build_y_graph(n: usize) -> Result<DecoratedGraph> {
    require_n(n)?;
    let mut vertices = vec![vertex(0, 3, Region::Center)];
    let mut edges = Vec::with_capacity(3 * n);
    for leg in 0..3 {
        for m in 0..n {
            let id = 1 + leg * n + m;
            vertices.push(vertex(id, 2, Region::Bulk));
            edges.push([if m == 0 { 0 } else { id - 1 }, id]);
        }
    }
    DecoratedGraph::new(vertices, edges)
}

/// `G(n) = G_L - C_n - G_R`, in the tensor order of the boundary tensors:
///
/// * `G_L`: `u1_1, u2_1, ..., u1_n, u2_n, v` with `u*_n` bonded to `v`;
/// * `C_n`: `c_1, ..., c_n` with `c_1` bonded to `v` and `c_n` to `w`;
/// * `G_R`: `u3_1, u4_1, ..., u3_n, u4_n, w` with `u*_1` bonded to `w`.
///
/// The hubs `v`, `w` carry region tags `GL`, `GR`.
pub fn build_g_graph(n: usize) -> Result<DecoratedGraph> {
    require_n(n)?;
    let mut vertices = Vec::with_capacity(5 * n + 2);
    let mut push = |two_s, region| {
        let id = vertices.len();
        vertices.push(vertex(id, two_s, region));
        id
    };
    let left_pairs: Vec<[usize; 2]> =
        (0..n).map(|_| [push(2, Region::Gl), push(2, Region::Gl)]).collect();
    let v = push(3, Region::Gl);
    let chain: Vec<usize> = (0..n).map(|_| push(2, Region::Cn)).collect();
    let right_pairs: Vec<[usize; 2]> =
        (0..n).map(|_| [push(2, Region::Gr), push(2, Region::Gr)]).collect();
    let w = push(3, Region::Gr);

    let mut edges = Vec::with_capacity(5 * n + 1);
    for a in 0..2 {
        for m in 0..n - 1 {
            edges.push([left_pairs[m][a], left_pairs[m + 1][a]]);
        }
        edges.push([left_pairs[n - 1][a], v]);
    }
    edges.push([v, chain[0]]);
    for m in 0..n - 1 {
        edges.push([chain[m], chain[m + 1]]);
    }
    edges.push([chain[n - 1], w]);
    for a in 0..2 {
        edges.push([w, right_pairs[0][a]]);
        for m in 0..n - 1 {
            edges.push([right_pairs[m][a], right_pairs[m + 1][a]]);
        }
    }
    DecoratedGraph::new(vertices, edges)
}

/// Vertex ids of `Y_v = G_L ∪ C_n` and `Y_w = C_n ∪ G_R` inside `G(n)`, in
/// tensor order.
pub fn g_graph_halves(g: &DecoratedGraph) -> (Vec<usize>, Vec<usize>) {
    let gl = g.vertices_in(Region::Gl);
    let cn = g.vertices_in(Region::Cn);
    let gr = g.vertices_in(Region::Gr);
    let left = gl.iter().chain(&cn).copied().collect();
    let right = cn.iter().chain(&gr).copied().collect();
    (left, right)
}

/// Periodic decorated honeycomb in brick-wall coordinates. Cell `(x, y)`
/// holds hubs `A(x,y)`, `B(x,y)`; `A(x,y)` bonds to `B(x,y)`, `B(x-1,y)`
/// and `B(x,y-1)`, and every hub bond is subdivided into `n` spin-1 sites.
/// Hubs come first (`A`, `B` per cell, row-major), then each path from its
/// `A` end to its `B` end.
pub fn build_decorated_torus(cells_x: usize, cells_y: usize, n: usize) -> Result<DecoratedGraph> {
    if cells_x == 0 || cells_y == 0 {
        return invalid("torus needs at least one cell in each direction");
    }
    require_n(n)?;
    let cells = cells_x * cells_y;
    let a = |x: usize, y: usize| 2 * (y * cells_x + x);
    let b = |x: usize, y: usize| 2 * (y * cells_x + x) + 1;
    let mut vertices: Vec<Vertex> = (0..2 * cells).map(|id| vertex(id, 3, Region::Center)).collect();
    let mut edges = Vec::with_capacity(3 * cells * (n + 1));
    for y in 0..cells_y {
        for x in 0..cells_x {
            let left = (x + cells_x - 1) % cells_x;
            let down = (y + cells_y - 1) % cells_y;
            for partner in [b(x, y), b(left, y), b(x, down)] {
                let mut prev = a(x, y);
                for _ in 0..n {
                    let id = vertices.len();
                    vertices.push(vertex(id, 2, Region::Bulk));
                    edges.push([prev, id]);
                    prev = id;
                }
                edges.push([prev, partner]);
            }
        }
    }
    DecoratedGraph::new(vertices, edges)
}

/// Total-spin projectors keyed by endpoint spins, built once per pair.
#[derive(Default)]
struct ProjectorCache(HashMap<(u32, u32), DenseMatrix>);

impl ProjectorCache {
    fn get(&mut self, two_s_a: u32, two_s_b: u32) -> Result<&DenseMatrix> {
        if !self.0.contains_key(&(two_s_a, two_s_b)) {
            let p = spin::total_spin_projector(two_s_a, two_s_b, two_s_a + two_s_b)?;
            self.0.insert((two_s_a, two_s_b), p);
        }
        Ok(&self.0[&(two_s_a, two_s_b)])
    }
}

/// `Σ_{e ∈ edges} P^{(z(e)/2)}_e` on the full Hilbert space of `graph`.
pub fn hamiltonian_on_edges(graph: &DecoratedGraph, edges: &[usize]) -> Result<SparseHermitianOperator> {
    let mut cache = ProjectorCache::default();
    for &e in edges {
        let [a, b] = graph.edges()[e];
        cache.get(graph.vertices()[a].two_s, graph.vertices()[b].two_s)?;
    }
    let terms: Vec<TwoSiteTerm<'_>> = edges
        .iter()
        .map(|&e| {
            let [a, b] = graph.edges()[e];
            let key = (graph.vertices()[a].two_s, graph.vertices()[b].two_s);
            TwoSiteTerm { op: &cache.0[&key], sites: (a, b) }
        })
        .collect();
    SparseHermitianOperator::from_two_site_terms(&graph.local_dims(), &terms)
}

/// AKLT Hamiltonian `Σ_e P^{(z(e)/2)}_e`.
pub fn hamiltonian(graph: &DecoratedGraph) -> Result<SparseHermitianOperator> {
    if graph.edges().is_empty() {
        return SparseHermitianOperator::zero(&graph.local_dims());
    }
    let all: Vec<usize> = (0..graph.edges().len()).collect();
    hamiltonian_on_edges(graph, &all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_graph_shape() {
        let g = build_y_graph(2).unwrap();
        assert_eq!(g.vertices().len(), 7);
        assert_eq!(g.degree(0), 3);
        let zs: Vec<u32> = (0..g.edges().len()).map(|e| g.z(e)).collect();
        assert_eq!(zs.iter().filter(|&&z| z == 5).count(), 3);
        assert_eq!(zs.iter().filter(|&&z| z == 4).count(), 3);
    }

    #[test]
    fn zero_decoration_is_rejected() {
        assert!(build_y_graph(0).is_err());
        assert!(build_g_graph(0).is_err());
        assert!(build_decorated_torus(1, 1, 0).is_err());
        assert!(build_decorated_torus(0, 1, 1).is_err());
    }

    #[test]
    fn overfull_vertex_is_rejected() {
        let vs = vec![vertex(0, 1, Region::Bulk), vertex(1, 2, Region::Bulk), vertex(2, 2, Region::Bulk)];
        assert!(DecoratedGraph::new(vs, vec![[0, 1], [0, 2]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = build_g_graph(1).unwrap();
        let text = g.to_json().unwrap();
        assert!(text.contains("\"region\": \"CN\""));
        assert_eq!(DecoratedGraph::from_json(&text).unwrap(), g);
    }
}
