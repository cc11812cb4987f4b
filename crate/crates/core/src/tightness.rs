//! Side areas of lasso families and the tightness score
//! `min(area_a, area_b) / length²`.
//!
//! Consecutive cycles of a family bound strips of faces. Each strip is found
//! by a flood fill over the face dual graph that may not cross a cycle edge,
//! seeded from the faces along the path segment between the two base
//! vertices. Prefix sums of the strips give the area on the path-start side
//! of every cycle.

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::cycles::{loop_edges, Cycle, CycleFamily};
use crate::mesh::{Mesh, NO_FACE};
use crate::oracle::floodfill::region_area_floodfill;
use crate::sum::NeumaierSum;

pub const DEFAULT_EPSILON: f64 = 0.15;
pub const DEFAULT_WINDOW: usize = 5;

/// Tightness of a hemisphere boundary on a round sphere.
pub const SPHERE_TIGHTNESS: f64 = 1.0 / (2.0 * PI);

pub fn threshold(epsilon: f64) -> f64 {
    SPHERE_TIGHTNESS * (1.0 - epsilon)
}

#[derive(Debug, Error, PartialEq)]
pub enum TightnessError {
    #[error("cycle at position {0} has zero length")]
    ZeroLength(usize),
    #[error("cycles {0:?} cross: strips overlap or leave faces unassigned")]
    Crossing(Vec<usize>),
    #[error("cycle at position {position} does not split the surface in two")]
    NotSeparating { position: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessRecord {
    pub cycle: Cycle,
    /// Area on the side containing the start of the generating path.
    pub area_side_u: f64,
    pub area_side_other: f64,
    pub tightness: f64,
}

impl TightnessRecord {
    pub fn area_min_side(&self) -> f64 {
        self.area_side_u.min(self.area_side_other)
    }

    pub fn area_max_side(&self) -> f64 {
        self.area_side_u.max(self.area_side_other)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeckCut {
    pub record: TightnessRecord,
    /// 1-based, by descending tightness over all families.
    pub rank: usize,
    pub window: usize,
}

/// Flood fills the dual graph from `seeds`, never crossing a `barrier` edge.
/// Faces already owned by another region stop the fill and are reported.
fn fill_region(
    mesh: &Mesh,
    seeds: &[usize],
    barrier: &[bool],
    owner: &mut [usize],
    region: usize,
) -> (f64, bool) {
    let mut queue = VecDeque::new();
    let mut sum = NeumaierSum::default();
    let mut collided = false;
    for &f in seeds {
        if owner[f] == usize::MAX {
            owner[f] = region;
            queue.push_back(f);
        } else if owner[f] != region {
            collided = true;
        }
    }
    while let Some(f) = queue.pop_front() {
        sum.add(mesh.face_areas()[f]);
        for e in mesh.face_edges(f) {
            if barrier[e] {
                continue;
            }
            for g in mesh.edge_faces(e) {
                if g == NO_FACE || g == f {
                    continue;
                }
                if owner[g] == usize::MAX {
                    owner[g] = region;
                    queue.push_back(g);
                } else if owner[g] != region {
                    collided = true;
                }
            }
        }
    }
    (sum.total(), collided)
}

/// Faces incident to the path edges between positions `from` and `to`.
fn segment_faces(mesh: &Mesh, path: &[usize], from: usize, to: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for w in path[from..=to].windows(2) {
        let e = mesh.edge_between(w[0], w[1]).expect("path edge");
        out.extend(mesh.edge_faces(e).into_iter().filter(|&f| f != NO_FACE));
    }
    out
}

/// Areas of the start cap, the strips between consecutive cycles, and the
/// end cap: `cycles.len() + 1` entries summing to the total area.
pub fn strip_areas(mesh: &Mesh, family: &CycleFamily) -> Result<Vec<f64>, TightnessError> {
    let path = family.path.vertices();
    let k = family.cycles.len();
    let mut bounds = Vec::with_capacity(k + 2);
    bounds.push(0);
    bounds.extend(family.cycles.iter().map(|c| c.position));
    bounds.push(path.len() - 1);
    let edges: Vec<Vec<usize>> = family
        .cycles
        .iter()
        .map(|c| loop_edges(mesh, &c.vertices))
        .collect();

    let mut barrier = vec![false; mesh.edge_count()];
    let mut owner = vec![usize::MAX; mesh.face_count()];
    let mut strips = Vec::with_capacity(k + 1);
    let mut bad = Vec::new();
    for r in 0..=k {
        let bounding: Vec<&Vec<usize>> = [r.checked_sub(1), (r < k).then_some(r)]
            .into_iter()
            .flatten()
            .map(|i| &edges[i])
            .collect();
        for es in &bounding {
            for &e in es.iter() {
                barrier[e] = true;
            }
        }
        let seeds = segment_faces(mesh, path, bounds[r], bounds[r + 1]);
        let (area, collided) = fill_region(mesh, &seeds, &barrier, &mut owner, r);
        if collided {
            bad.extend(r.checked_sub(1));
            if r < k {
                bad.push(r);
            }
        }
        for es in &bounding {
            for &e in es.iter() {
                barrier[e] = false;
            }
        }
        strips.push(area);
    }
    if owner.contains(&usize::MAX) {
        bad.extend(unowned_neighbors(mesh, &owner, &edges));
    }
    if !bad.is_empty() {
        bad.sort_unstable();
        bad.dedup();
        return Err(TightnessError::Crossing(bad));
    }
    Ok(strips)
}

/// Cycles whose edges border a face no strip reached.
fn unowned_neighbors(mesh: &Mesh, owner: &[usize], edges: &[Vec<usize>]) -> Vec<usize> {
    edges
        .iter()
        .enumerate()
        .filter(|(_, es)| {
            es.iter().any(|&e| {
                mesh.edge_faces(e)
                    .iter()
                    .any(|&f| f != NO_FACE && owner[f] == usize::MAX)
            })
        })
        .map(|(i, _)| i)
        .collect()
}

/// Path-start side area of each cycle: prefix sums of the strips.
pub fn side_areas(strips: &[f64]) -> Vec<f64> {
    let mut acc = NeumaierSum::default();
    strips[..strips.len().saturating_sub(1)]
        .iter()
        .map(|&s| {
            acc.add(s);
            acc.total()
        })
        .collect()
}

pub fn score(
    cycle: Cycle,
    area_side_u: f64,
    total_area: f64,
) -> Result<TightnessRecord, TightnessError> {
    if cycle.length <= 0.0 {
        return Err(TightnessError::ZeroLength(cycle.position));
    }
    let area_side_other = total_area - area_side_u;
    let tightness = area_side_u.min(area_side_other).max(0.0) / (cycle.length * cycle.length);
    Ok(TightnessRecord {
        cycle,
        area_side_u,
        area_side_other,
        tightness,
    })
}

/// Scored family plus any warning raised while computing it.
#[derive(Debug, Clone)]
pub struct ScoredFamily {
    pub records: Vec<TightnessRecord>,
    pub warning: Option<String>,
}

/// Scores every cycle of a family. If strips cannot be separated, side
/// areas fall back to a flood fill per cycle.
pub fn score_family(mesh: &Mesh, family: &CycleFamily) -> Result<ScoredFamily, TightnessError> {
    let total = mesh.total_area();
    let (sides, warning) = match strip_areas(mesh, family) {
        Ok(strips) => (side_areas(&strips), None),
        Err(TightnessError::Crossing(pairs)) => {
            let p = family.path.vertices();
            let first_edge = mesh.edge_between(p[0], p[1]).expect("path edge");
            let start_face = mesh.edge_faces(first_edge)[0];
            let sides = family
                .cycles
                .iter()
                .map(|c| {
                    region_area_floodfill(mesh, &c.vertices)
                        .ok()
                        .map(|s| s.area_containing_face(start_face))
                        .ok_or(TightnessError::NotSeparating {
                            position: c.position,
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let msg = format!(
                "path {}: crossing cycles near indices {pairs:?}; used per-cycle flood fill",
                family.path_id
            );
            (sides, Some(msg))
        }
        Err(e) => return Err(e),
    };
    let records = family
        .cycles
        .iter()
        .zip(sides)
        .map(|(c, a)| score(c.clone(), a, total))
        .collect::<Result<_, _>>()?;
    Ok(ScoredFamily { records, warning })
}

/// Index of records that survive the threshold and are the maximum of the
/// survivors within `window / 2` places on either side. Ties go to the
/// lower position, so a plateau yields one representative.
pub fn windowed_maxima(records: &[TightnessRecord], threshold: f64, window: usize) -> Vec<usize> {
    let survivors: Vec<usize> = (0..records.len())
        .filter(|&i| records[i].tightness >= threshold)
        .collect();
    let half = window / 2;
    let t = |i: usize| records[survivors[i]].tightness;
    (0..survivors.len())
        .filter(|&i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(survivors.len() - 1);
            (lo..=hi).all(|j| j == i || t(j) < t(i) || (t(j) == t(i) && j > i))
        })
        .map(|i| survivors[i])
        .collect()
}

/// Threshold, windowed maxima per family, then one global ranking.
pub fn select_cuts(
    families: &[Vec<TightnessRecord>],
    threshold: f64,
    window: usize,
) -> Vec<NeckCut> {
    let mut picked: Vec<&TightnessRecord> = families
        .iter()
        .flat_map(|recs| {
            windowed_maxima(recs, threshold, window)
                .into_iter()
                .map(move |i| &recs[i])
        })
        .collect();
    picked.sort_by(|a, b| {
        b.tightness
            .total_cmp(&a.tightness)
            .then(a.cycle.base_path_id.cmp(&b.cycle.base_path_id))
            .then(a.cycle.position.cmp(&b.cycle.position))
    });
    picked
        .into_iter()
        .enumerate()
        .map(|(i, r)| NeckCut {
            record: r.clone(),
            rank: i + 1,
            window,
        })
        .collect()
}
