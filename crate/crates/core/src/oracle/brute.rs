//! Exhaustive search over simple cycles for the tightest one.
//!
//! Every cycle of length `L` has tightness at most `(A/2) / L²`, so once a
//! cycle of tightness `t` is known only cycles shorter than `sqrt((A/2)/t)`
//! can beat it. The enumeration bounds cycle length, grows the bound until
//! it certifies the best, and prunes partial walks whose length plus the
//! straight-line distance back to the start exceeds the bound.

use serde::Serialize;

use crate::mesh::{dist, Mesh, NO_FACE};
use crate::oracle::{LoopScore, OracleError};

pub const MAX_BRUTE_VERTICES: usize = 300;
const STEP_BUDGET: u64 = 400_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct BruteForceResult {
    pub best: Option<LoopScore>,
    /// True when the step budget ran out; `best` is then only a lower bound.
    pub budget_exceeded: bool,
    pub cycles_scored: u64,
}

/// Side areas of simple loops, reusing face labels between calls.
struct SideMeasure<'m> {
    mesh: &'m Mesh,
    barrier: Vec<bool>,
    label: Vec<u32>,
    epoch: u32,
    queues: [Vec<usize>; 2],
}

impl<'m> SideMeasure<'m> {
    fn new(mesh: &'m Mesh) -> Self {
        Self {
            mesh,
            barrier: vec![false; mesh.edge_count()],
            label: vec![0; mesh.face_count()],
            epoch: 0,
            queues: [Vec::new(), Vec::new()],
        }
    }

    /// Grows both sides of the loop in lockstep; the first to exhaust has
    /// its area summed exactly and the other is the remainder. Returns the
    /// area of the side on the left of the first loop edge and the other.
    #[allow(clippy::needless_range_loop)]
    fn sides(&mut self, loop_vertices: &[usize]) -> Option<(f64, f64)> {
        let mesh = self.mesh;
        let k = loop_vertices.len();
        let edges: Vec<usize> = (0..k)
            .map(|i| {
                mesh.edge_between(loop_vertices[i], loop_vertices[(i + 1) % k])
                    .unwrap()
            })
            .collect();
        for &e in &edges {
            self.barrier[e] = true;
        }
        if self.epoch >= u32::MAX - 2 {
            self.label.iter_mut().for_each(|l| *l = 0);
            self.epoch = 0;
        }
        self.epoch += 2;
        let base = self.epoch;
        let first = mesh.edge_faces(edges[0]);
        let mut result = None;
        if first[0] != NO_FACE && first[1] != NO_FACE {
            for q in &mut self.queues {
                q.clear();
            }
            let mut heads = [0usize; 2];
            for s in 0..2 {
                self.label[first[s]] = base + s as u32;
                self.queues[s].push(first[s]);
            }
            'grow: loop {
                for s in 0..2 {
                    if heads[s] == self.queues[s].len() {
                        let area: f64 = crate::sum::compensated_sum(
                            self.queues[s].iter().map(|&f| mesh.face_areas()[f]),
                        );
                        let rest = mesh.total_area() - area;
                        result = Some(if s == 0 { (area, rest) } else { (rest, area) });
                        break 'grow;
                    }
                    let f = self.queues[s][heads[s]];
                    heads[s] += 1;
                    for e in mesh.face_edges(f) {
                        if self.barrier[e] {
                            continue;
                        }
                        for g in mesh.edge_faces(e) {
                            if g == NO_FACE {
                                continue;
                            }
                            let l = self.label[g];
                            if l == base + s as u32 {
                                continue;
                            }
                            if l == base + 1 - s as u32 {
                                // both sides meet: the loop does not separate
                                break 'grow;
                            }
                            self.label[g] = base + s as u32;
                            self.queues[s].push(g);
                        }
                    }
                }
            }
        }
        for &e in &edges {
            self.barrier[e] = false;
        }
        result
    }
}

struct Enumerator<'m> {
    mesh: &'m Mesh,
    measure: SideMeasure<'m>,
    max_edges: usize,
    half_area: f64,
    bound: f64,
    best: Option<LoopScore>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    steps: u64,
    scored: u64,
    length_pruned: bool,
    exhausted: bool,
}

impl Enumerator<'_> {
    /// Effective length bound: the round bound, tightened by the best so far.
    fn limit(&self) -> f64 {
        match &self.best {
            Some(b) if b.tightness > 0.0 => self.bound.min((self.half_area / b.tightness).sqrt()),
            _ => self.bound,
        }
    }

    fn run_from(&mut self, s: usize) {
        self.path.clear();
        self.path.push(s);
        self.on_path[s] = true;
        self.extend(s, 0.0);
        self.on_path[s] = false;
    }

    fn extend(&mut self, s: usize, length: f64) {
        if self.exhausted {
            return;
        }
        self.steps += 1;
        if self.steps > STEP_BUDGET {
            self.exhausted = true;
            return;
        }
        let mesh = self.mesh;
        let x = *self.path.last().unwrap();
        let ps = mesh.position(s);
        for (y, w) in mesh.weighted_neighbors(x) {
            let l = length + w;
            if y == s {
                // each cycle once: the start is its smallest vertex and the
                // second vertex is smaller than the last
                if self.path.len() >= 3 && self.path[1] < x && l <= self.limit() {
                    self.score(l);
                }
                continue;
            }
            if y < s || self.on_path[y] {
                continue;
            }
            if self.path.len() + 1 > self.max_edges {
                continue;
            }
            if l + dist(&mesh.position(y), &ps) > self.limit() {
                self.length_pruned = true;
                continue;
            }
            self.on_path[y] = true;
            self.path.push(y);
            self.extend(s, l);
            self.path.pop();
            self.on_path[y] = false;
        }
    }

    fn score(&mut self, length: f64) {
        self.scored += 1;
        let Some((a, b)) = self.measure.sides(&self.path) else {
            return;
        };
        let t = a.min(b) / (length * length);
        let better = match &self.best {
            None => true,
            Some(best) => t > best.tightness,
        };
        if better {
            self.best = Some(LoopScore {
                vertices: self.path.clone(),
                length,
                area_min_side: a.min(b),
                area_other_side: a.max(b),
                tightness: t,
            });
        }
    }
}

/// Tightest simple cycle with at most `max_cycle_edges` edges.
pub fn brute_force_best_cycle(
    mesh: &Mesh,
    max_cycle_edges: usize,
) -> Result<BruteForceResult, OracleError> {
    let n = mesh.vertex_count();
    if n > MAX_BRUTE_VERTICES {
        return Err(OracleError::TooLarge {
            vertices: n,
            limit: MAX_BRUTE_VERTICES,
        });
    }
    let shortest_edge = mesh
        .edge_lengths()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let mut en = Enumerator {
        mesh,
        measure: SideMeasure::new(mesh),
        max_edges: max_cycle_edges.max(3),
        half_area: mesh.total_area() / 2.0,
        bound: 4.0 * shortest_edge,
        best: None,
        on_path: vec![false; n],
        path: Vec::new(),
        steps: 0,
        scored: 0,
        length_pruned: false,
        exhausted: false,
    };
    loop {
        en.length_pruned = false;
        for s in 0..n {
            en.run_from(s);
        }
        if en.exhausted || !en.length_pruned {
            break;
        }
        // certified once no cycle beyond the bound can beat the best
        let needed = en
            .best
            .as_ref()
            .filter(|b| b.tightness > 0.0)
            .map(|b| (en.half_area / b.tightness).sqrt());
        match needed {
            Some(l) if l <= en.bound => break,
            Some(l) => en.bound = l.min(en.bound * 1.25),
            None => en.bound *= 1.25,
        }
        // cycles found so far remain valid; repeat with the larger bound
    }
    Ok(BruteForceResult {
        best: en.best,
        budget_exceeded: en.exhausted,
        cycles_scored: en.scored,
    })
}

/// All simple cycles with at most `max_edges` edges, each listed once.
pub fn simple_cycles(mesh: &Mesh, max_edges: usize) -> Vec<Vec<usize>> {
    fn go(
        mesh: &Mesh,
        s: usize,
        path: &mut Vec<usize>,
        on: &mut [bool],
        max: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        let x = *path.last().unwrap();
        for &y in mesh.neighbors(x) {
            if y == s && path.len() >= 3 && path[1] < x {
                out.push(path.clone());
            } else if y > s && !on[y] && path.len() < max {
                on[y] = true;
                path.push(y);
                go(mesh, s, path, on, max, out);
                path.pop();
                on[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on = vec![false; mesh.vertex_count()];
    for s in 0..mesh.vertex_count() {
        on[s] = true;
        go(mesh, s, &mut vec![s], &mut on, max_edges, &mut out);
        on[s] = false;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::fixtures::{unit_octahedron, unit_tetrahedron};
    use crate::oracle::floodfill::region_area_floodfill;

    /// Plain reference: flood fill every simple cycle.
    fn naive_best(mesh: &Mesh, max_edges: usize) -> f64 {
        simple_cycles(mesh, max_edges)
            .into_iter()
            .map(|c| {
                let len: f64 = crate::cycles::loop_edges(mesh, &c)
                    .iter()
                    .map(|&e| mesh.edge_length(e))
                    .sum();
                region_area_floodfill(mesh, &c).unwrap().min_area() / (len * len)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn tetrahedron_best_is_four_cycle() {
        let m = unit_tetrahedron();
        // 4 triangles and 3 quadrilaterals
        assert_eq!(simple_cycles(&m, 10).len(), 7);
        let r = brute_force_best_cycle(&m, 10).unwrap();
        let best = r.best.unwrap();
        // a quadrilateral splits the faces two and two
        let expected = 3f64.sqrt() / 32.0;
        assert!(
            (best.tightness - expected).abs() < 1e-12,
            "{}",
            best.tightness
        );
        assert_eq!(best.vertices.len(), 4);
        // restricted to triangles, each bounds one face
        let tri = brute_force_best_cycle(&m, 3).unwrap().best.unwrap();
        assert!((tri.tightness - 3f64.sqrt() / 4.0 / 9.0).abs() < 1e-12);
        assert!(!r.budget_exceeded);
    }

    #[test]
    fn octahedron_equator() {
        let m = unit_octahedron();
        let best = brute_force_best_cycle(&m, 12).unwrap().best.unwrap();
        assert!((best.tightness - 3f64.sqrt() / 16.0).abs() < 1e-12);
        assert!((naive_best(&m, 12) - best.tightness).abs() < 1e-12);
    }

    #[test]
    fn pruned_search_matches_naive_on_icosahedron() {
        let m = crate::oracle::synth::icosphere(0);
        let fast = brute_force_best_cycle(&m, 8).unwrap().best.unwrap();
        assert!((naive_best(&m, 8) - fast.tightness).abs() < 1e-12);
    }

    #[test]
    fn size_guard() {
        let m = crate::oracle::synth::icosphere(3);
        assert!(matches!(
            brute_force_best_cycle(&m, 8),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
