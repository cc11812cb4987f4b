//! Sleeve-bracketed lasso search over sampled source/target pairs.
//!
//! For each pair `(s, t)` the shortest path between them carries a family
//! of lassos. Two lassos bound a sleeve when the faces between them form an
//! annulus: Euler characteristic zero, with every boundary edge on one of
//! the two lassos. Every lasso strictly inside some sleeve is a candidate
//! and the tightest candidate over all pairs wins.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cycles::{cycles_along_path, loop_edges, Cycle};
use crate::mesh::{Mesh, NO_FACE};
use crate::oracle::floodfill::{region_area_floodfill, Split};
use crate::oracle::{LoopScore, OracleError};
use crate::paths::{approx_diameter, shortest_path};

pub const MAX_COLLAR_VERTICES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PairBudget {
    /// The approximate diametrical pair, then `count - 1` random pairs.
    Sampled { count: usize, seed: u64 },
    /// Every unordered vertex pair.
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollarBest {
    pub score: LoopScore,
    pub source: usize,
    pub target: usize,
    pub position: usize,
    /// Positions of the two lassos bounding the sleeve.
    pub sleeve: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollarResult {
    pub best: Option<CollarBest>,
    /// Set when no sleeve was found and `best` is the tightest lasso overall.
    pub no_sleeve: bool,
    pub pairs_examined: usize,
    pub sleeves_found: usize,
}

struct Lasso {
    cycle: Cycle,
    split: Split,
    /// Side label of the path start.
    start_side: u8,
    edges: Vec<usize>,
    tightness: f64,
}

fn score_of(l: &Lasso) -> LoopScore {
    LoopScore {
        vertices: l.cycle.vertices.clone(),
        length: l.cycle.length,
        area_min_side: l.split.min_area(),
        area_other_side: l.split.area[0].max(l.split.area[1]),
        tightness: l.tightness,
    }
}

/// Whether the faces past `a` (away from the path start) and before `b`
/// form an annulus bounded by the two loops.
fn is_sleeve(mesh: &Mesh, a: &Lasso, b: &Lasso, on_loop: &mut [bool]) -> bool {
    let inside: Vec<bool> = (0..mesh.face_count())
        .map(|f| a.split.side[f] != a.start_side && b.split.side[f] == b.start_side)
        .collect();
    let face_count = inside.iter().filter(|&&x| x).count();
    if face_count == 0 {
        return false;
    }
    for &e in a.edges.iter().chain(&b.edges) {
        on_loop[e] = true;
    }
    let mut edge_count = 0i64;
    let mut boundary_ok = true;
    let mut vertex_used = vec![false; mesh.vertex_count()];
    for (e, &[x, y]) in mesh.edges().iter().enumerate() {
        let n_in = mesh
            .edge_faces(e)
            .iter()
            .filter(|&&f| f != NO_FACE && inside[f])
            .count();
        if n_in == 0 {
            continue;
        }
        edge_count += 1;
        vertex_used[x] = true;
        vertex_used[y] = true;
        if n_in == 1 && !on_loop[e] {
            boundary_ok = false;
        }
    }
    for &e in a.edges.iter().chain(&b.edges) {
        on_loop[e] = false;
    }
    let vertex_count = vertex_used.iter().filter(|&&x| x).count() as i64;
    boundary_ok && vertex_count - edge_count + face_count as i64 == 0
}

/// Tightest lasso bracketed by a sleeve, over the given vertex pairs.
pub fn exhaustive_collar(mesh: &Mesh, budget: PairBudget) -> Result<CollarResult, OracleError> {
    let n = mesh.vertex_count();
    if n > MAX_COLLAR_VERTICES {
        return Err(OracleError::TooLarge {
            vertices: n,
            limit: MAX_COLLAR_VERTICES,
        });
    }
    let pairs: Vec<(usize, usize)> = match budget {
        PairBudget::All => (0..n)
            .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
            .collect(),
        PairBudget::Sampled { count, seed } => {
            let d = approx_diameter(mesh, 0)?;
            let mut out = vec![(d.u, d.v)];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while out.len() < count && n > 1 {
                let s = rng.gen_range(0..n);
                let t = rng.gen_range(0..n);
                if s != t {
                    out.push((s, t));
                }
            }
            out.truncate(count.max(1));
            out
        }
    };

    let total = mesh.total_area();
    let mut on_loop = vec![false; mesh.edge_count()];
    let mut best: Option<CollarBest> = None;
    let mut fallback: Option<CollarBest> = None;
    let mut sleeves_found = 0;
    for &(s, t) in &pairs {
        let Some(path) = shortest_path(mesh, s, t, None)? else {
            continue;
        };
        if path.len() < 3 {
            continue;
        }
        let family = cycles_along_path(mesh, &path, 0)?;
        let first_edge = mesh
            .edge_between(path.vertices()[0], path.vertices()[1])
            .unwrap();
        let start_face = mesh.edge_faces(first_edge)[0];
        let lassos: Vec<Lasso> = family
            .cycles
            .into_iter()
            .filter_map(|c| {
                let split = region_area_floodfill(mesh, &c.vertices).ok()?;
                let tightness = split.min_area() / (c.length * c.length);
                Some(Lasso {
                    start_side: split.side[start_face],
                    edges: loop_edges(mesh, &c.vertices),
                    cycle: c,
                    split,
                    tightness,
                })
            })
            .collect();
        debug_assert!(lassos
            .iter()
            .all(|l| (l.split.area[0] + l.split.area[1] - total).abs() < 1e-9 * total));

        for l in &lassos {
            if fallback
                .as_ref()
                .is_none_or(|b| l.tightness > b.score.tightness)
            {
                fallback = Some(CollarBest {
                    score: score_of(l),
                    source: s,
                    target: t,
                    position: l.cycle.position,
                    sleeve: None,
                });
            }
        }
        let k = lassos.len();
        // inside[p]: some sleeve brackets lasso p
        let mut bracket: Vec<Option<(usize, usize)>> = vec![None; k];
        for i in 0..k {
            for j in i + 2..k {
                if (i + 1..j).all(|p| bracket[p].is_some()) {
                    continue;
                }
                if is_sleeve(mesh, &lassos[i], &lassos[j], &mut on_loop) {
                    sleeves_found += 1;
                    for slot in bracket.iter_mut().take(j).skip(i + 1) {
                        slot.get_or_insert((lassos[i].cycle.position, lassos[j].cycle.position));
                    }
                }
            }
        }
        for (p, l) in lassos.iter().enumerate() {
            let Some(sleeve) = bracket[p] else { continue };
            if best
                .as_ref()
                .is_none_or(|b| l.tightness > b.score.tightness)
            {
                best = Some(CollarBest {
                    score: score_of(l),
                    source: s,
                    target: t,
                    position: l.cycle.position,
                    sleeve: Some(sleeve),
                });
            }
        }
    }
    let no_sleeve = best.is_none();
    Ok(CollarResult {
        best: best.or(fallback),
        no_sleeve,
        pairs_examined: pairs.len(),
        sleeves_found,
    })
}
