//! Lasso cycles along a base path.
//!
//! At an interior path vertex `v`, the neighbors of `v` split into two arcs
//! separated by the two path edges. The lasso is `v` plus the shortest path
//! from one arc to the other that avoids every path vertex, so it wraps
//! around the path without crossing it.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::mesh::Mesh;
use crate::paths::{PathOnMesh, SearchWorkspace, VertexMask, NO_VERTEX};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycleError {
    #[error("position {position} is an endpoint of a path with {len} vertices")]
    Endpoint { position: usize, len: usize },
    #[error("position {position} outside a path with {len} vertices")]
    OutOfRange { position: usize, len: usize },
    #[error("path with {0} vertices has no interior vertex")]
    PathTooShort(usize),
    #[error("vertex {0} has no closed rotation")]
    NoRotation(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cycle {
    pub base_vertex: usize,
    pub base_path_id: usize,
    /// Index of `base_vertex` along the generating path.
    pub position: usize,
    /// Closed loop starting at `base_vertex`, stored without repeating it.
    pub vertices: Vec<usize>,
    pub length: f64,
    /// Whether `length < max(d(start, v), d(v, end))` along the path.
    pub lasso_condition: bool,
}

impl Cycle {
    /// Edge ids of the closed loop.
    pub fn edges(&self, mesh: &Mesh) -> Vec<usize> {
        loop_edges(mesh, &self.vertices)
    }
}

/// Edge ids of a closed vertex loop; panics if consecutive vertices are not adjacent.
pub fn loop_edges(mesh: &Mesh, vertices: &[usize]) -> Vec<usize> {
    let k = vertices.len();
    (0..k)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % k]);
            mesh.edge_between(a, b)
                .unwrap_or_else(|| panic!("loop vertices {a} and {b} are not adjacent"))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleFamily {
    pub path_id: usize,
    pub path: PathOnMesh,
    /// Strictly increasing by position.
    pub cycles: Vec<Cycle>,
    pub skipped_positions: Vec<usize>,
}

/// The two neighbor arcs of `v` between its path neighbors `prev` and `next`,
/// walking the rotation forward from `prev` and from `next`.
fn side_arcs(mesh: &Mesh, v: usize, prev: usize, next: usize) -> (Vec<usize>, Vec<usize>) {
    let ring = mesh.neighbors(v);
    let k = ring.len();
    let ip = ring
        .iter()
        .position(|&x| x == prev)
        .expect("prev is a neighbor");
    let inx = ring
        .iter()
        .position(|&x| x == next)
        .expect("next is a neighbor");
    let arc = |from: usize, to: usize| {
        let mut out = Vec::new();
        let mut i = (from + 1) % k;
        while i != to {
            out.push(ring[i]);
            i = (i + 1) % k;
        }
        out
    };
    (arc(ip, inx), arc(inx, ip))
}

/// Reusable state for lasso searches along one path.
pub struct LassoSearch<'m> {
    mesh: &'m Mesh,
    ws: SearchWorkspace,
    target: Vec<f64>,
    target_stamp: Vec<u32>,
    epoch: u32,
}

impl<'m> LassoSearch<'m> {
    pub fn new(mesh: &'m Mesh) -> Self {
        let n = mesh.vertex_count();
        Self {
            mesh,
            ws: SearchWorkspace::new(n),
            target: vec![0.0; n],
            target_stamp: vec![0; n],
            epoch: 0,
        }
    }

    /// Lasso at `path[position]` with all of `on_path` forbidden.
    pub fn lasso(
        &mut self,
        path: &PathOnMesh,
        on_path: &VertexMask,
        prefix: &[f64],
        position: usize,
        path_id: usize,
    ) -> Result<Option<Cycle>, CycleError> {
        let mesh = self.mesh;
        let verts = path.vertices();
        let len = verts.len();
        if position >= len {
            return Err(CycleError::OutOfRange { position, len });
        }
        if position == 0 || position + 1 == len {
            return Err(CycleError::Endpoint { position, len });
        }
        let v = verts[position];
        if !mesh.has_rotation(v) {
            return Err(CycleError::NoRotation(v));
        }
        let (left, right) = side_arcs(mesh, v, verts[position - 1], verts[position + 1]);
        let closing = |x: usize| mesh.edge_length(mesh.edge_between(v, x).unwrap());

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.target_stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let mut any_target = false;
        for &b in &right {
            if !on_path.contains(b) {
                self.target_stamp[b] = self.epoch;
                self.target[b] = closing(b);
                any_target = true;
            }
        }
        self.ws.begin();
        let mut any_source = false;
        for &a in &left {
            if !on_path.contains(a) {
                self.ws.seed(a, closing(a), NO_VERTEX);
                any_source = true;
            }
        }
        if !any_source || !any_target {
            return Ok(None);
        }

        let mut best = f64::INFINITY;
        let mut best_end = NO_VERTEX;
        while let Some((d, x)) = self.ws.pop() {
            if d >= best {
                break;
            }
            if self.target_stamp[x] == self.epoch {
                let total = d + self.target[x];
                if total < best {
                    best = total;
                    best_end = x;
                }
            }
            self.ws.relax_from(mesh, x, d, Some(on_path));
        }
        if best_end == NO_VERTEX {
            return Ok(None);
        }
        let walk = self.ws.trace(best_end);
        let mut vertices = Vec::with_capacity(walk.len() + 1);
        vertices.push(v);
        vertices.extend_from_slice(walk.vertices());
        let (to_start, to_end) = (prefix[position], prefix[len - 1] - prefix[position]);
        Ok(Some(Cycle {
            base_vertex: v,
            base_path_id: path_id,
            position,
            vertices,
            length: best,
            lasso_condition: best < to_start.max(to_end),
        }))
    }
}

/// Lasso at one interior position of `path`.
pub fn lasso_at(
    mesh: &Mesh,
    path: &PathOnMesh,
    position: usize,
) -> Result<Option<Cycle>, CycleError> {
    let on_path = VertexMask::from_vertices(mesh.vertex_count(), path.vertices().iter().copied());
    let prefix = path.prefix_lengths(mesh);
    LassoSearch::new(mesh).lasso(path, &on_path, &prefix, position, 0)
}

/// Lassos at every interior position, in order.
pub fn cycles_along_path(
    mesh: &Mesh,
    path: &PathOnMesh,
    path_id: usize,
) -> Result<CycleFamily, CycleError> {
    cycles_along_path_parallel(mesh, path, path_id, false)
}

/// As [`cycles_along_path`]; with `parallel`, positions are searched on the
/// current rayon pool. The result does not depend on the schedule.
pub fn cycles_along_path_parallel(
    mesh: &Mesh,
    path: &PathOnMesh,
    path_id: usize,
    parallel: bool,
) -> Result<CycleFamily, CycleError> {
    let len = path.len();
    if len < 3 {
        return Err(CycleError::PathTooShort(len));
    }
    let on_path = VertexMask::from_vertices(mesh.vertex_count(), path.vertices().iter().copied());
    let prefix = path.prefix_lengths(mesh);
    let results: Vec<Result<Option<Cycle>, CycleError>> = if parallel {
        (1..len - 1)
            .into_par_iter()
            .map_init(
                || LassoSearch::new(mesh),
                |s, p| s.lasso(path, &on_path, &prefix, p, path_id),
            )
            .collect()
    } else {
        let mut s = LassoSearch::new(mesh);
        (1..len - 1)
            .map(|p| s.lasso(path, &on_path, &prefix, p, path_id))
            .collect()
    };
    let mut cycles = Vec::new();
    let mut skipped_positions = Vec::new();
    for (p, r) in (1..len - 1).zip(results) {
        match r? {
            Some(c) => cycles.push(c),
            None => skipped_positions.push(p),
        }
    }
    Ok(CycleFamily {
        path_id,
        path: path.clone(),
        cycles,
        skipped_positions,
    })
}

/// Component labels of the mesh graph with `removed` vertices deleted;
/// removed vertices get `usize::MAX`.
fn components_without(mesh: &Mesh, removed: &[usize]) -> Vec<usize> {
    let n = mesh.vertex_count();
    let mut label = vec![NO_VERTEX - 1; n];
    for &r in removed {
        label[r] = NO_VERTEX;
    }
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != NO_VERTEX - 1 {
            continue;
        }
        label[s] = next;
        stack.push(s);
        while let Some(x) = stack.pop() {
            for &y in mesh.neighbors(x) {
                if label[y] == NO_VERTEX - 1 {
                    label[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Pairs `(i, j)` of cycles where cycle `j` crosses cycle `i`: after deleting
/// the vertices of cycle `i`, the vertices of cycle `j` not on cycle `i` do
/// not all fall in one component.
pub fn crossing_pairs(mesh: &Mesh, cycles: &[Cycle]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, ci) in cycles.iter().enumerate() {
        let label = components_without(mesh, &ci.vertices);
        for (j, cj) in cycles.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut seen = None;
            let crosses = cj.vertices.iter().any(|&x| {
                let l = label[x];
                if l == NO_VERTEX {
                    return false;
                }
                match seen {
                    None => {
                        seen = Some(l);
                        false
                    }
                    Some(s) => s != l,
                }
            });
            if crosses {
                out.push((i, j));
            }
        }
    }
    out
}
