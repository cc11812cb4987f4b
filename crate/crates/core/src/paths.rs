//! Shortest paths over the mesh edge graph, with edges weighted by their
//! Euclidean length.
//!
//! Ties are broken toward the lower vertex index, both in the priority queue
//! and when picking a farthest vertex, so every search is deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;
use thiserror::Error;

use crate::mesh::Mesh;

pub const NO_VERTEX: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("vertex {vertex} out of range (vertex count {count})")]
    InvalidVertex { vertex: usize, count: usize },
    #[error("vertex {0} is forbidden")]
    Forbidden(usize),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("vertex {0} repeats in path")]
    RepeatedVertex(usize),
    #[error("empty path")]
    Empty,
}

/// Per-vertex membership flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMask(Vec<bool>);

impl VertexMask {
    pub fn new(vertex_count: usize) -> Self {
        Self(vec![false; vertex_count])
    }

    pub fn from_vertices(vertex_count: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::new(vertex_count);
        for v in vertices {
            m.insert(v);
        }
        m
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0[v]
    }

    pub fn insert(&mut self, v: usize) {
        self.0[v] = true;
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }
}

/// An ordered, simple walk along mesh edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathOnMesh {
    vertices: Vec<usize>,
    length: f64,
}

impl PathOnMesh {
    /// Checks adjacency and simplicity, and sums the edge lengths.
    pub fn from_vertices(mesh: &Mesh, vertices: Vec<usize>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        let n = mesh.vertex_count();
        let mut seen = VertexMask::new(n);
        let mut length = 0.0;
        for (i, &v) in vertices.iter().enumerate() {
            if v >= n {
                return Err(PathError::InvalidVertex {
                    vertex: v,
                    count: n,
                });
            }
            if seen.contains(v) {
                return Err(PathError::RepeatedVertex(v));
            }
            seen.insert(v);
            if i > 0 {
                let a = vertices[i - 1];
                let e = mesh
                    .edge_between(a, v)
                    .ok_or(PathError::NotAdjacent(a, v))?;
                length += mesh.edge_length(e);
            }
        }
        Ok(Self { vertices, length })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// Path lengths from the start to every vertex along the path.
    pub fn prefix_lengths(&self, mesh: &Mesh) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.vertices.len());
        let mut acc = 0.0;
        out.push(0.0);
        for w in self.vertices.windows(2) {
            acc += mesh.edge_length(mesh.edge_between(w[0], w[1]).unwrap());
            out.push(acc);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    pub source: usize,
    /// `f64::INFINITY` where unreachable.
    pub dist: Vec<f64>,
    /// [`NO_VERTEX`] for the source and unreachable vertices.
    pub parent: Vec<usize>,
}

impl ShortestPathTree {
    pub fn is_reachable(&self, v: usize) -> bool {
        self.dist[v].is_finite()
    }

    /// Reachable vertex with the largest distance; lowest index on ties.
    pub fn farthest(&self) -> usize {
        let mut best = self.source;
        for (v, &d) in self.dist.iter().enumerate() {
            if d.is_finite() && d > self.dist[best] {
                best = v;
            }
        }
        best
    }

    /// Reachable vertices that are nobody's parent.
    pub fn leaves(&self) -> Vec<usize> {
        let mut has_child = vec![false; self.dist.len()];
        for &p in &self.parent {
            if p != NO_VERTEX {
                has_child[p] = true;
            }
        }
        (0..self.dist.len())
            .filter(|&v| self.is_reachable(v) && !has_child[v])
            .collect()
    }

    pub fn path_to(&self, mesh: &Mesh, t: usize) -> Option<PathOnMesh> {
        if !self.is_reachable(t) {
            return None;
        }
        let mut verts = vec![t];
        let mut cur = t;
        while self.parent[cur] != NO_VERTEX {
            cur = self.parent[cur];
            verts.push(cur);
        }
        verts.reverse();
        let length = self.dist[t];
        debug_assert!(PathOnMesh::from_vertices(mesh, verts.clone()).is_ok());
        Some(PathOnMesh {
            vertices: verts,
            length,
        })
    }
}

fn check_vertex(mesh: &Mesh, v: usize) -> Result<(), PathError> {
    if v >= mesh.vertex_count() {
        return Err(PathError::InvalidVertex {
            vertex: v,
            count: mesh.vertex_count(),
        });
    }
    Ok(())
}

/// Full single-source shortest-path tree, avoiding `forbidden` vertices.
pub fn dijkstra(
    mesh: &Mesh,
    source: usize,
    forbidden: Option<&VertexMask>,
) -> Result<ShortestPathTree, PathError> {
    check_vertex(mesh, source)?;
    if forbidden.is_some_and(|f| f.contains(source)) {
        return Err(PathError::Forbidden(source));
    }
    let mut ws = SearchWorkspace::new(mesh.vertex_count());
    ws.begin();
    ws.seed(source, 0.0, NO_VERTEX);
    while let Some((d, v)) = ws.pop() {
        ws.relax_from(mesh, v, d, forbidden);
    }
    Ok(ws.into_tree(source))
}

#[derive(Debug, Clone)]
pub struct Diameter {
    pub u: usize,
    pub v: usize,
    pub tree_u: ShortestPathTree,
}

impl Diameter {
    pub fn length(&self) -> f64 {
        self.tree_u.dist[self.v]
    }
}

/// Two-sweep diameter estimate: `u` is farthest from `seed`, `v` farthest
/// from `u`. On a connected graph `dist(u, v)` is at least half the diameter.
pub fn approx_diameter(mesh: &Mesh, seed: usize) -> Result<Diameter, PathError> {
    let tree_s = dijkstra(mesh, seed, None)?;
    let u = tree_s.farthest();
    let tree_u = dijkstra(mesh, u, None)?;
    let v = tree_u.farthest();
    Ok(Diameter { u, v, tree_u })
}

/// Shortest `s`→`t` path avoiding `forbidden`; stops as soon as `t` settles.
pub fn shortest_path(
    mesh: &Mesh,
    s: usize,
    t: usize,
    forbidden: Option<&VertexMask>,
) -> Result<Option<PathOnMesh>, PathError> {
    check_vertex(mesh, s)?;
    check_vertex(mesh, t)?;
    for x in [s, t] {
        if forbidden.is_some_and(|f| f.contains(x)) {
            return Err(PathError::Forbidden(x));
        }
    }
    let mut ws = SearchWorkspace::new(mesh.vertex_count());
    ws.begin();
    ws.seed(s, 0.0, NO_VERTEX);
    while let Some((d, v)) = ws.pop() {
        if v == t {
            return Ok(Some(ws.trace(t)));
        }
        ws.relax_from(mesh, v, d, forbidden);
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    dist: f64,
    vertex: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Reusable Dijkstra state. Distances are invalidated in O(1) between
/// searches with an epoch counter, so many small early-terminating searches
/// on one mesh do not pay O(n) each.
#[derive(Debug, Clone)]
pub struct SearchWorkspace {
    dist: Vec<f64>,
    parent: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    heap: BinaryHeap<HeapEntry>,
}

impl SearchWorkspace {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            dist: vec![f64::INFINITY; vertex_count],
            parent: vec![NO_VERTEX; vertex_count],
            stamp: vec![0; vertex_count],
            epoch: 0,
            heap: BinaryHeap::new(),
        }
    }

    /// Starts a new search, forgetting all previous labels.
    pub fn begin(&mut self) {
        self.heap.clear();
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    #[inline]
    pub fn dist(&self, v: usize) -> f64 {
        if self.stamp[v] == self.epoch {
            self.dist[v]
        } else {
            f64::INFINITY
        }
    }

    #[inline]
    pub fn parent(&self, v: usize) -> usize {
        if self.stamp[v] == self.epoch {
            self.parent[v]
        } else {
            NO_VERTEX
        }
    }

    /// Offers `v` at distance `d`; keeps the smaller label.
    #[inline]
    pub fn seed(&mut self, v: usize, d: f64, parent: usize) -> bool {
        if d < self.dist(v) {
            self.stamp[v] = self.epoch;
            self.dist[v] = d;
            self.parent[v] = parent;
            self.heap.push(HeapEntry { dist: d, vertex: v });
            true
        } else {
            false
        }
    }

    /// Next settled vertex, skipping stale queue entries.
    #[inline]
    pub fn pop(&mut self) -> Option<(f64, usize)> {
        while let Some(HeapEntry { dist, vertex }) = self.heap.pop() {
            if dist <= self.dist(vertex) {
                return Some((dist, vertex));
            }
        }
        None
    }

    /// Smallest queued key, possibly stale.
    pub fn peek_dist(&self) -> Option<f64> {
        self.heap.peek().map(|e| e.dist)
    }

    #[inline]
    pub fn relax_from(&mut self, mesh: &Mesh, v: usize, d: f64, forbidden: Option<&VertexMask>) {
        for (w, len) in mesh.weighted_neighbors(v) {
            if forbidden.is_some_and(|f| f.contains(w)) {
                continue;
            }
            self.seed(w, d + len, v);
        }
    }

    /// Vertices from the search root to `t` following parent links.
    pub fn trace(&self, t: usize) -> PathOnMesh {
        let mut verts = vec![t];
        let mut cur = t;
        while self.parent(cur) != NO_VERTEX {
            cur = self.parent(cur);
            verts.push(cur);
        }
        verts.reverse();
        PathOnMesh {
            length: self.dist(t) - self.dist(verts[0]),
            vertices: verts,
        }
    }

    fn into_tree(self, source: usize) -> ShortestPathTree {
        let n = self.dist.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut parent = vec![NO_VERTEX; n];
        for v in 0..n {
            if self.stamp[v] == self.epoch {
                dist[v] = self.dist[v];
                parent[v] = self.parent[v];
            }
        }
        ShortestPathTree {
            source,
            dist,
            parent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::fixtures::unit_tetrahedron;
    use crate::oracle::synth::{icosphere, Synthetic};
    use proptest::prelude::*;

    /// Relaxes every edge until nothing changes.
    fn bellman_ford(mesh: &Mesh, source: usize) -> Vec<f64> {
        let mut d = vec![f64::INFINITY; mesh.vertex_count()];
        d[source] = 0.0;
        loop {
            let mut changed = false;
            for (e, &[a, b]) in mesh.edges().iter().enumerate() {
                let l = mesh.edge_length(e);
                if d[a] + l < d[b] {
                    d[b] = d[a] + l;
                    changed = true;
                }
                if d[b] + l < d[a] {
                    d[a] = d[b] + l;
                    changed = true;
                }
            }
            if !changed {
                return d;
            }
        }
    }

    fn all_pairs_diameter(mesh: &Mesh) -> f64 {
        (0..mesh.vertex_count())
            .map(|s| {
                dijkstra(mesh, s, None)
                    .unwrap()
                    .dist
                    .into_iter()
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn tetrahedron_unit_distances() {
        let m = unit_tetrahedron();
        for s in 0..4 {
            let t = dijkstra(&m, s, None).unwrap();
            for v in 0..4 {
                let expected = if v == s { 0.0 } else { 1.0 };
                assert!((t.dist[v] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn forbidding_all_neighbors_isolates_source() {
        let m = icosphere(2);
        let f = VertexMask::from_vertices(m.vertex_count(), m.neighbors(7).iter().copied());
        let t = dijkstra(&m, 7, Some(&f)).unwrap();
        for v in 0..m.vertex_count() {
            assert_eq!(t.is_reachable(v), v == 7);
        }
        assert!(matches!(
            dijkstra(
                &m,
                7,
                Some(&VertexMask::from_vertices(m.vertex_count(), [7]))
            ),
            Err(PathError::Forbidden(7))
        ));
        assert!(dijkstra(&m, 100_000, None).is_err());
    }

    #[test]
    fn dijkstra_matches_bellman_ford() {
        // 1k-ish vertex sphere with perturbed positions so edge lengths vary
        let base = icosphere(4);
        let positions = base
            .positions()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let s = 1.0 + 0.05 * ((i as f64) * 0.731).sin();
                [p[0] * s, p[1] * s, p[2] * s]
            })
            .collect();
        let m = Mesh::from_triangles(positions, base.faces().to_vec()).unwrap();
        for source in [0, 17, 999] {
            let fast = dijkstra(&m, source, None).unwrap();
            let slow = bellman_ford(&m, source);
            for (v, (a, b)) in fast.dist.iter().zip(&slow).enumerate() {
                assert!((a - b).abs() < 1e-12, "v={v}");
            }
        }
    }

    #[test]
    fn tree_invariants() {
        let m = icosphere(3);
        let t = dijkstra(&m, 5, None).unwrap();
        assert_eq!(t.dist[5], 0.0);
        for v in 0..m.vertex_count() {
            if v != 5 {
                let p = t.parent[v];
                let e = m.edge_between(p, v).unwrap();
                assert!((t.dist[v] - t.dist[p] - m.edge_length(e)).abs() < 1e-12);
            }
        }
        for (e, &[a, b]) in m.edges().iter().enumerate() {
            assert!((t.dist[a] - t.dist[b]).abs() <= m.edge_length(e) + 1e-12);
        }
        // the farthest vertex is always a leaf
        assert!(t.leaves().contains(&t.farthest()));
    }

    #[test]
    fn cigar_diameter_endpoints_are_tips() {
        let m: Mesh = "cylinder:0.3,6,8"
            .parse::<Synthetic>()
            .unwrap()
            .build()
            .unwrap();
        assert!(m.vertex_count() <= 300, "{}", m.vertex_count());
        let d = approx_diameter(&m, 0).unwrap();
        let exact = all_pairs_diameter(&m);
        assert!(d.length() >= exact / 2.0);
        // tips sit on opposite caps
        let (zu, zv) = (m.position(d.u)[2], m.position(d.v)[2]);
        assert!((zu - zv).abs() > 5.9, "{zu} {zv}");
        assert!((d.length() - exact).abs() < 0.35 * exact);
    }

    #[test]
    fn sphere_diameter_half_bound() {
        let m = icosphere(2);
        let d = approx_diameter(&m, 0).unwrap();
        assert!(d.length() >= all_pairs_diameter(&m) / 2.0);
    }

    #[test]
    fn second_sweep_is_idempotent() {
        let m = icosphere(2);
        let d = approx_diameter(&m, 0).unwrap();
        let again = approx_diameter(&m, d.u).unwrap();
        // from u, the farthest vertex is v again
        assert_eq!(dijkstra(&m, d.u, None).unwrap().farthest(), d.v);
        assert_eq!(again.tree_u.dist.len(), m.vertex_count());
    }

    #[test]
    fn shortest_path_basics() {
        let m = icosphere(2);
        let p = shortest_path(&m, 3, 3, None).unwrap().unwrap();
        assert_eq!(p.vertices(), &[3]);
        assert_eq!(p.length(), 0.0);
        let w = m.neighbors(3)[0];
        let p = shortest_path(&m, 3, w, None).unwrap().unwrap();
        assert_eq!(p.vertices(), &[3, w]);
        assert!((p.length() - m.edge_length(m.edge_between(3, w).unwrap())).abs() < 1e-15);
    }

    #[test]
    fn separated_by_forbidden_ring() {
        let m = icosphere(2);
        // the ring of neighbors around vertex 0 separates it from the rest
        let ring = VertexMask::from_vertices(m.vertex_count(), m.neighbors(0).iter().copied());
        let far = dijkstra(&m, 0, None).unwrap().farthest();
        assert_eq!(shortest_path(&m, 0, far, Some(&ring)).unwrap(), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn point_to_point_matches_tree(s in 0usize..162, t in 0usize..162) {
            let m = icosphere(2);
            let tree = dijkstra(&m, s, None).unwrap();
            let p = shortest_path(&m, s, t, None).unwrap().unwrap();
            prop_assert!((p.length() - tree.dist[t]).abs() < 1e-12);
            let checked = PathOnMesh::from_vertices(&m, p.vertices().to_vec()).unwrap();
            prop_assert!((checked.length() - p.length()).abs() < 1e-12);
        }

        #[test]
        fn sweep_beats_random_sources(seed in 0usize..642) {
            let m = icosphere(3);
            let d = approx_diameter(&m, seed).unwrap();
            for r in (0..642).step_by(32) {
                let t = dijkstra(&m, r, None).unwrap();
                prop_assert!(d.length() >= t.dist[t.farthest()] / 2.0);
            }
        }
    }
}
