//! Direct side areas of a closed loop by flood filling the face dual graph.

use std::collections::VecDeque;

use thiserror::Error;

use crate::mesh::{Mesh, NO_FACE};
use crate::sum::NeumaierSum;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FloodFillError {
    #[error("loop vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("loop repeats edge {0}")]
    RepeatedEdge(usize),
    #[error("loop needs at least three vertices")]
    TooShort,
    #[error("loop leaves {0} face region(s), expected two")]
    NotSeparating(usize),
}

/// Two-sided split of the faces by a loop.
#[derive(Debug, Clone)]
pub struct Split {
    /// 0 or 1 per face.
    pub side: Vec<u8>,
    pub area: [f64; 2],
}

impl Split {
    pub fn area_containing_face(&self, f: usize) -> f64 {
        self.area[self.side[f] as usize]
    }

    /// Area of the side holding `v`; `None` if `v` touches both sides.
    pub fn area_containing_vertex(&self, mesh: &Mesh, v: usize) -> Option<f64> {
        let mut sides = mesh
            .neighbor_edges(v)
            .iter()
            .flat_map(|&e| mesh.edge_faces(e))
            .filter(|&f| f != NO_FACE)
            .map(|f| self.side[f]);
        let first = sides.next()?;
        sides.all(|s| s == first).then(|| self.area[first as usize])
    }

    pub fn min_area(&self) -> f64 {
        self.area[0].min(self.area[1])
    }
}

/// Splits the faces along the edges of the closed loop `vertices`.
pub fn region_area_floodfill(mesh: &Mesh, vertices: &[usize]) -> Result<Split, FloodFillError> {
    let k = vertices.len();
    if k < 3 {
        return Err(FloodFillError::TooShort);
    }
    let mut barrier = vec![false; mesh.edge_count()];
    for i in 0..k {
        let (a, b) = (vertices[i], vertices[(i + 1) % k]);
        let e = mesh
            .edge_between(a, b)
            .ok_or(FloodFillError::NotAdjacent(a, b))?;
        if barrier[e] {
            return Err(FloodFillError::RepeatedEdge(e));
        }
        barrier[e] = true;
    }
    let mut label = vec![u8::MAX; mesh.face_count()];
    let mut area = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..mesh.face_count() {
        if label[start] != u8::MAX {
            continue;
        }
        let id = area.len();
        if id >= 2 {
            return Err(FloodFillError::NotSeparating(3));
        }
        let mut sum = NeumaierSum::default();
        label[start] = id as u8;
        queue.push_back(start);
        while let Some(f) = queue.pop_front() {
            sum.add(mesh.face_areas()[f]);
            for e in mesh.face_edges(f) {
                if barrier[e] {
                    continue;
                }
                for g in mesh.edge_faces(e) {
                    if g != NO_FACE && label[g] == u8::MAX {
                        label[g] = id as u8;
                        queue.push_back(g);
                    }
                }
            }
        }
        area.push(sum.total());
    }
    if area.len() != 2 {
        return Err(FloodFillError::NotSeparating(area.len()));
    }
    Ok(Split {
        side: label,
        area: [area[0], area[1]],
    })
}
