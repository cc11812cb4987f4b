//! Indexed triangle meshes with precomputed edge lengths, face areas, and a
//! rotationally ordered vertex adjacency.
//!
//! Vertex and face indices are 0-based positions in input order and are never
//! renumbered.

mod io;
mod validate;

pub use io::{load_mesh, parse_mesh, MeshFormat};
pub use validate::{validate, ValidationReport};

use std::collections::HashMap;

use thiserror::Error;

use crate::sum::NeumaierSum;

pub type Point3 = [f64; 3];

/// Marker for "no face" in [`Mesh::edge_faces`].
pub const NO_FACE: usize = usize::MAX;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: non-triangular face with {count} vertices")]
    NonTriangularFace { line: usize, count: usize },
    #[error("line {line}: vertex index {index} out of range (vertex count {count})")]
    IndexOutOfRange {
        line: usize,
        index: i64,
        count: usize,
    },
    #[error("face {face} repeats vertex {vertex}")]
    RepeatedVertex { face: usize, vertex: usize },
    #[error("zero-length edge between vertices {a} and {b}")]
    ZeroLengthEdge { a: usize, b: usize },
    #[error("mesh has no faces")]
    Empty,
    #[error("unsupported format: {0}")]
    Unsupported(String),
    #[error("{kind} index {index} out of range (count {count})")]
    OutOfRange {
        kind: &'static str,
        index: usize,
        count: usize,
    },
}

/// Immutable triangulated surface.
#[derive(Debug, Clone)]
pub struct Mesh {
    positions: Vec<Point3>,
    faces: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    edge_lengths: Vec<f64>,
    edge_faces: Vec<[usize; 2]>,
    edge_face_count: Vec<u32>,
    // number of faces that traverse the edge as (edges[e][0] -> edges[e][1])
    edge_forward: Vec<u32>,
    face_edges: Vec<[usize; 3]>,
    face_areas: Vec<f64>,
    nbr_offsets: Vec<usize>,
    nbr: Vec<usize>,
    nbr_edge: Vec<usize>,
    rotation_ok: Vec<bool>,
    total_area: f64,
}

impl Mesh {
    /// Builds a mesh from raw positions and triangles.
    ///
    /// Zero-area faces are accepted; zero-length edges and repeated vertices
    /// within a face are rejected. Topological defects (boundary, non-manifold
    /// edges, inconsistent orientation) do not fail construction and are
    /// reported by [`validate`].
    pub fn from_triangles(
        positions: Vec<Point3>,
        faces: Vec<[usize; 3]>,
    ) -> Result<Self, MeshError> {
        if faces.is_empty() {
            return Err(MeshError::Empty);
        }
        let nv = positions.len();
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v >= nv {
                    return Err(MeshError::OutOfRange {
                        kind: "vertex",
                        index: v,
                        count: nv,
                    });
                }
            }
            if f[0] == f[1] || f[0] == f[2] {
                return Err(MeshError::RepeatedVertex {
                    face: fi,
                    vertex: f[0],
                });
            }
            if f[1] == f[2] {
                return Err(MeshError::RepeatedVertex {
                    face: fi,
                    vertex: f[1],
                });
            }
        }

        let mut edge_index: HashMap<(usize, usize), usize> =
            HashMap::with_capacity(faces.len() * 3 / 2);
        let mut edges = Vec::new();
        let mut edge_faces = Vec::new();
        let mut edge_face_count = Vec::new();
        let mut edge_forward = Vec::new();
        let mut face_edges = Vec::with_capacity(faces.len());
        for (fi, f) in faces.iter().enumerate() {
            let mut fe = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let e = *edge_index.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    edge_faces.push([NO_FACE, NO_FACE]);
                    edge_face_count.push(0);
                    edge_forward.push(0);
                    edges.len() - 1
                });
                let slot = edge_face_count[e] as usize;
                if slot < 2 {
                    edge_faces[e][slot] = fi;
                }
                edge_face_count[e] += 1;
                if a < b {
                    edge_forward[e] += 1;
                }
                fe[k] = e;
            }
            face_edges.push(fe);
        }

        let mut edge_lengths = Vec::with_capacity(edges.len());
        for &[a, b] in &edges {
            let len = dist(&positions[a], &positions[b]);
            if len <= 0.0 || !len.is_finite() {
                return Err(MeshError::ZeroLengthEdge { a, b });
            }
            edge_lengths.push(len);
        }

        let face_areas: Vec<f64> = faces
            .iter()
            .map(|f| triangle_area(&positions[f[0]], &positions[f[1]], &positions[f[2]]))
            .collect();
        let mut total = NeumaierSum::default();
        for &a in &face_areas {
            total.add(a);
        }

        let (nbr_offsets, nbr, nbr_edge, rotation_ok) =
            build_rotation(nv, &faces, &edges, &face_edges);

        Ok(Self {
            positions,
            faces,
            edges,
            edge_lengths,
            edge_faces,
            edge_face_count,
            edge_forward,
            face_edges,
            face_areas,
            nbr_offsets,
            nbr,
            nbr_edge,
            rotation_ok,
            total_area: total.total(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn positions(&self) -> &[Point3] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> Point3 {
        self.positions[v]
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        self.edge_lengths[e]
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_lengths
    }

    /// The (up to) two faces incident to edge `e`; missing slots hold [`NO_FACE`].
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        self.face_edges[f]
    }

    pub fn face_areas(&self) -> &[f64] {
        &self.face_areas
    }

    /// Area of face `f`: half the magnitude of its edge cross product.
    pub fn face_area(&self, f: usize) -> Result<f64, MeshError> {
        self.face_areas
            .get(f)
            .copied()
            .ok_or(MeshError::OutOfRange {
                kind: "face",
                index: f,
                count: self.faces.len(),
            })
    }

    /// Compensated sum of all face areas.
    pub fn total_area(&self) -> f64 {
        self.total_area
    }

    /// Neighbors of `v` in rotational order around `v`, consistent with the
    /// face winding. The sequence starts at the lowest-indexed neighbor.
    pub fn cyclic_neighbors(&self, v: usize) -> Result<&[usize], MeshError> {
        if v >= self.positions.len() {
            return Err(MeshError::OutOfRange {
                kind: "vertex",
                index: v,
                count: self.positions.len(),
            });
        }
        Ok(self.neighbors(v))
    }

    /// Unchecked variant of [`Mesh::cyclic_neighbors`].
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbr[self.nbr_offsets[v]..self.nbr_offsets[v + 1]]
    }

    /// Edge ids parallel to [`Mesh::neighbors`].
    #[inline]
    pub fn neighbor_edges(&self, v: usize) -> &[usize] {
        &self.nbr_edge[self.nbr_offsets[v]..self.nbr_offsets[v + 1]]
    }

    /// `(neighbor, edge length)` pairs around `v`.
    #[inline]
    pub fn weighted_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.neighbors(v)
            .iter()
            .zip(self.neighbor_edges(v))
            .map(move |(&w, &e)| (w, self.edge_lengths[e]))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbr_offsets[v + 1] - self.nbr_offsets[v]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.neighbors(a)
            .iter()
            .position(|&w| w == b)
            .map(|i| self.neighbor_edges(a)[i])
    }

    /// Whether the neighbor list of `v` is a genuine rotation (closed fan).
    pub fn has_rotation(&self, v: usize) -> bool {
        self.rotation_ok[v]
    }

    pub(crate) fn edge_face_count(&self, e: usize) -> u32 {
        self.edge_face_count[e]
    }

    pub(crate) fn edge_forward_count(&self, e: usize) -> u32 {
        self.edge_forward[e]
    }

    /// Same mesh with every face winding reversed.
    pub fn flipped(&self) -> Self {
        let faces = self.faces.iter().map(|f| [f[0], f[2], f[1]]).collect();
        Self::from_triangles(self.positions.clone(), faces).expect("flipping preserves validity")
    }

    /// Same mesh with all coordinates multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self, MeshError> {
        let positions = self
            .positions
            .iter()
            .map(|p| [p[0] * s, p[1] * s, p[2] * s])
            .collect();
        Self::from_triangles(positions, self.faces.clone())
    }
}

fn build_rotation(
    nv: usize,
    faces: &[[usize; 3]],
    edges: &[[usize; 2]],
    face_edges: &[[usize; 3]],
) -> (Vec<usize>, Vec<usize>, Vec<usize>, Vec<bool>) {
    // (vertex, next-around, edge to next) for every corner, grouped by vertex.
    let mut corners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    let mut incident_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let v = f[k];
            let b = f[(k + 1) % 3];
            let c = f[(k + 2) % 3];
            corners[v].push((b, c));
        }
        for &e in &face_edges[fi] {
            let [a, b] = edges[e];
            incident_edges[a].push((b, e));
            incident_edges[b].push((a, e));
        }
    }

    let mut offsets = Vec::with_capacity(nv + 1);
    let mut nbr = Vec::new();
    let mut nbr_edge = Vec::new();
    let mut ok = vec![false; nv];
    offsets.push(0);
    for v in 0..nv {
        let inc = &mut incident_edges[v];
        inc.sort_unstable();
        inc.dedup();
        let ring = rotation_order(&corners[v], inc);
        match ring {
            Some(order) => {
                ok[v] = true;
                for w in order {
                    let e = inc[inc.binary_search_by_key(&w, |&(n, _)| n).unwrap()].1;
                    nbr.push(w);
                    nbr_edge.push(e);
                }
            }
            None => {
                for &(w, e) in inc.iter() {
                    nbr.push(w);
                    nbr_edge.push(e);
                }
            }
        }
        offsets.push(nbr.len());
    }
    (offsets, nbr, nbr_edge, ok)
}

/// Walks the successor map of the fan around a vertex. Returns `None` unless
/// the corners form exactly one closed cycle over all neighbors.
fn rotation_order(corners: &[(usize, usize)], neighbors: &[(usize, usize)]) -> Option<Vec<usize>> {
    if corners.is_empty() || corners.len() != neighbors.len() {
        return None;
    }
    let mut succ: HashMap<usize, usize> = HashMap::with_capacity(corners.len());
    for &(b, c) in corners {
        if succ.insert(b, c).is_some() {
            return None;
        }
    }
    let start = neighbors[0].0;
    let mut order = Vec::with_capacity(corners.len());
    let mut cur = start;
    loop {
        order.push(cur);
        cur = *succ.get(&cur)?;
        if cur == start {
            break;
        }
        if order.len() > corners.len() {
            return None;
        }
    }
    (order.len() == neighbors.len()).then_some(order)
}

pub fn dist(a: &Point3, b: &Point3) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

pub fn triangle_area(a: &Point3, b: &Point3, c: &Point3) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let w = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let x = [
        u[1] * w[2] - u[2] * w[1],
        u[2] * w[0] - u[0] * w[2],
        u[0] * w[1] - u[1] * w[0],
    ];
    0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}
