//! Salient points: local maxima of the distance field from the diameter
//! endpoint `u`, thinned by an `r`-hop neighborhood test.

use std::collections::VecDeque;

use serde::Serialize;

use crate::mesh::Mesh;
use crate::paths::ShortestPathTree;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SalientSet {
    /// Descending by distance from `source_u`, ties by ascending index.
    pub points: Vec<usize>,
    pub source_u: usize,
    /// Hop radius used for filtering; `None` for raw candidates.
    pub r_filter: Option<usize>,
}

impl SalientSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.points.contains(&v)
    }
}

/// `a` beats `b` when it is farther from `u`, or equally far with a lower index.
#[inline]
fn beats(dist: &[f64], a: usize, b: usize) -> bool {
    dist[a] > dist[b] || (dist[a] == dist[b] && a < b)
}

fn sort_by_distance(points: &mut [usize], dist: &[f64]) {
    points.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
}

/// Every vertex that beats all of its mesh neighbors. Such a vertex has no
/// child in `tree_u`, so the scan over all vertices only ever returns leaves.
pub fn candidate_salient(mesh: &Mesh, tree_u: &ShortestPathTree) -> SalientSet {
    let dist = &tree_u.dist;
    let mut points: Vec<usize> = (0..mesh.vertex_count())
        .filter(|&x| {
            dist[x].is_finite()
                && mesh.degree(x) > 0
                && mesh.neighbors(x).iter().all(|&y| beats(dist, x, y))
        })
        .collect();
    sort_by_distance(&mut points, dist);
    SalientSet {
        points,
        source_u: tree_u.source,
        r_filter: None,
    }
}

/// Keeps the candidates that beat every other candidate within `r` hops.
/// Each candidate is judged against the original set, so the result does
/// not depend on iteration order.
pub fn filter_salient(
    mesh: &Mesh,
    cands: &SalientSet,
    tree_u: &ShortestPathTree,
    r: usize,
) -> SalientSet {
    let dist = &tree_u.dist;
    let n = mesh.vertex_count();
    let mut is_cand = vec![false; n];
    for &c in &cands.points {
        is_cand[c] = true;
    }
    let mut stamp = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::new();
    let mut points = Vec::with_capacity(cands.points.len());
    for (ci, &c) in cands.points.iter().enumerate() {
        queue.clear();
        stamp[c] = ci;
        depth[c] = 0;
        queue.push_back(c);
        let mut survives = true;
        'bfs: while let Some(x) = queue.pop_front() {
            if depth[x] == r {
                continue;
            }
            for &y in mesh.neighbors(x) {
                if stamp[y] == ci {
                    continue;
                }
                stamp[y] = ci;
                depth[y] = depth[x] + 1;
                if is_cand[y] && beats(dist, y, c) {
                    survives = false;
                    break 'bfs;
                }
                queue.push_back(y);
            }
        }
        if survives {
            points.push(c);
        }
    }
    sort_by_distance(&mut points, dist);
    SalientSet {
        points,
        source_u: cands.source_u,
        r_filter: Some(r),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SalientPointRecord {
    pub vertex: usize,
    pub position: [f64; 3],
    pub distance_from_u: f64,
}

pub fn salient_records(
    mesh: &Mesh,
    set: &SalientSet,
    tree_u: &ShortestPathTree,
) -> Vec<SalientPointRecord> {
    set.points
        .iter()
        .map(|&v| SalientPointRecord {
            vertex: v,
            position: mesh.position(v),
            distance_from_u: tree_u.dist[v],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::fixtures::unit_tetrahedron;
    use crate::oracle::synth::Synthetic;
    use crate::paths::{approx_diameter, dijkstra};
    use proptest::prelude::*;

    fn bfs_hops(mesh: &Mesh, s: usize) -> Vec<usize> {
        let mut d = vec![usize::MAX; mesh.vertex_count()];
        d[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in mesh.neighbors(x) {
                if d[y] == usize::MAX {
                    d[y] = d[x] + 1;
                    q.push_back(y);
                }
            }
        }
        d
    }

    #[test]
    fn tetrahedron_tie_rule_keeps_lowest_index() {
        let m = unit_tetrahedron();
        let t = dijkstra(&m, 0, None).unwrap();
        let c = candidate_salient(&m, &t);
        // vertices 1, 2, 3 tie at distance 1; only vertex 1 beats its equals
        assert_eq!(c.points, vec![1]);
        assert_eq!(t.farthest(), 1);
    }

    #[test]
    fn ellipsoid_opposite_pole_is_candidate() {
        let m = "ellipsoid:4,1,1,3"
            .parse::<Synthetic>()
            .unwrap()
            .build()
            .unwrap();
        // u at the -x pole
        let u = (0..m.vertex_count())
            .min_by(|&a, &b| m.position(a)[0].total_cmp(&m.position(b)[0]))
            .unwrap();
        let t = dijkstra(&m, u, None).unwrap();
        let c = candidate_salient(&m, &t);
        // brute-force scan of the strict local-maximum condition
        let brute: Vec<usize> = (0..m.vertex_count())
            .filter(|&x| m.neighbors(x).iter().all(|&y| beats(&t.dist, x, y)))
            .collect();
        let mut sorted = c.points.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, brute);
        let far = c.points[0];
        assert!(m.position(far)[0] > 3.9, "{:?}", m.position(far));
        assert_eq!(far, t.farthest());
    }

    #[test]
    fn candidates_are_leaves() {
        let m = "dumbbell:1,0.2,3,16"
            .parse::<Synthetic>()
            .unwrap()
            .build()
            .unwrap();
        let d = approx_diameter(&m, 0).unwrap();
        let leaves = d.tree_u.leaves();
        let c = candidate_salient(&m, &d.tree_u);
        assert!(c.contains(d.v));
        assert!(c.points.iter().all(|p| leaves.contains(p)));
    }

    #[test]
    fn zero_radius_keeps_all() {
        let m = "ellipsoid:2,1,1.5,3"
            .parse::<Synthetic>()
            .unwrap()
            .build()
            .unwrap();
        let d = approx_diameter(&m, 0).unwrap();
        let c = candidate_salient(&m, &d.tree_u);
        assert_eq!(filter_salient(&m, &c, &d.tree_u, 0).points, c.points);
    }

    #[test]
    fn nearby_weaker_candidate_removed() {
        // strip of two rows: candidates at columns 2 and 5 with distinct distances
        let cols = 9;
        let mut positions = Vec::new();
        for row in 0..2 {
            for i in 0..cols {
                positions.push([i as f64, row as f64, 0.0]);
            }
        }
        let id = |row: usize, i: usize| row * cols + i;
        let mut faces = Vec::new();
        for i in 0..cols - 1 {
            faces.push([id(0, i), id(0, i + 1), id(1, i + 1)]);
            faces.push([id(0, i), id(1, i + 1), id(1, i)]);
        }
        let m = Mesh::from_triangles(positions, faces).unwrap();
        let mut dist = vec![0.0; m.vertex_count()];
        dist[id(0, 2)] = 5.0;
        dist[id(0, 5)] = 7.0;
        let tree = ShortestPathTree {
            source: id(1, 0),
            dist,
            parent: vec![crate::paths::NO_VERTEX; m.vertex_count()],
        };
        let cands = SalientSet {
            points: vec![id(0, 5), id(0, 2)],
            source_u: id(1, 0),
            r_filter: None,
        };
        assert_eq!(bfs_hops(&m, id(0, 2))[id(0, 5)], 3);
        let f = filter_salient(&m, &cands, &tree, 5);
        assert_eq!(f.points, vec![id(0, 5)]);
        let f = filter_salient(&m, &cands, &tree, 2);
        assert_eq!(f.points, vec![id(0, 5), id(0, 2)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn filtering_is_monotone(r1 in 0usize..12, dr in 0usize..12, seed in 0usize..600) {
            let m = "ellipsoid:3,1,1.4,3".parse::<Synthetic>().unwrap().build().unwrap();
            let d = approx_diameter(&m, seed % m.vertex_count()).unwrap();
            let c = candidate_salient(&m, &d.tree_u);
            let a = filter_salient(&m, &c, &d.tree_u, r1);
            let b = filter_salient(&m, &c, &d.tree_u, r1 + dr);
            prop_assert!(b.points.iter().all(|p| a.points.contains(p)));
            prop_assert!(b.contains(d.v));
            for &p in &b.points {
                prop_assert!(m.neighbors(p).iter().all(|&y| beats(&d.tree_u.dist, p, y)));
            }
            // survivors beat every candidate within r hops
            for &p in &b.points {
                let hops = bfs_hops(&m, p);
                for &q in &c.points {
                    if q != p && hops[q] <= r1 + dr {
                        prop_assert!(beats(&d.tree_u.dist, p, q));
                    }
                }
            }
        }
    }
}
