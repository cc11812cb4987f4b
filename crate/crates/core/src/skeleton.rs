//! Trees of shortest paths spanning the salient points.

use serde::Serialize;
use thiserror::Error;

use crate::mesh::Mesh;
use crate::paths::{shortest_path, PathError, PathOnMesh, SearchWorkspace, VertexMask, NO_VERTEX};
use crate::salient::SalientSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkeletonError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("vertex {0} cannot be reached from the skeleton")]
    Unreachable(usize),
    #[error("need at least two terminals")]
    TooFewTerminals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SkeletonVariant {
    Greedy,
    Prim,
}

impl std::str::FromStr for SkeletonVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Self::Greedy),
            "prim" => Ok(Self::Prim),
            other => Err(format!("unknown skeleton variant '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Skeleton {
    pub paths: Vec<PathOnMesh>,
    /// `(terminal, attachment vertex)` per added path, in insertion order.
    pub attach_order: Vec<(usize, usize)>,
    #[serde(skip)]
    pub covered: VertexMask,
}

impl Skeleton {
    pub fn total_length(&self) -> f64 {
        self.paths.iter().map(PathOnMesh::length).sum()
    }

    pub fn covered_vertices(&self) -> Vec<usize> {
        self.covered.iter().collect()
    }

    fn add_path(&mut self, path: PathOnMesh, terminal: usize) {
        for &v in path.vertices() {
            self.covered.insert(v);
        }
        self.attach_order.push((terminal, path.start()));
        self.paths.push(path);
    }
}

/// Multi-source search from every covered vertex. Stops once `stop` accepts a
/// settled vertex and returns the path from the skeleton to it. Covered
/// vertices are seeded at zero, so only the first path vertex is covered.
fn search_from_skeleton(
    mesh: &Mesh,
    ws: &mut SearchWorkspace,
    skeleton: &Skeleton,
    stop: impl Fn(usize) -> bool,
) -> Option<PathOnMesh> {
    ws.begin();
    for v in skeleton.covered.iter() {
        ws.seed(v, 0.0, NO_VERTEX);
    }
    while let Some((d, v)) = ws.pop() {
        if stop(v) {
            return Some(ws.trace(v));
        }
        ws.relax_from(mesh, v, d, None);
    }
    None
}

/// Starts from the shortest `u`–`v` path, then attaches each remaining
/// salient point (in stored order) through its nearest skeleton vertex.
pub fn build_skeleton_greedy(
    mesh: &Mesh,
    u: usize,
    v: usize,
    salient: &SalientSet,
) -> Result<Skeleton, SkeletonError> {
    let n = mesh.vertex_count();
    let first = shortest_path(mesh, u, v, None)?.ok_or(SkeletonError::Unreachable(v))?;
    let mut sk = Skeleton {
        paths: Vec::new(),
        attach_order: Vec::new(),
        covered: VertexMask::new(n),
    };
    sk.add_path(first, v);
    let mut ws = SearchWorkspace::new(n);
    for &s in &salient.points {
        if sk.covered.contains(s) {
            continue;
        }
        let path = search_from_skeleton(mesh, &mut ws, &sk, |x| x == s)
            .ok_or(SkeletonError::Unreachable(s))?;
        sk.add_path(path, s);
    }
    Ok(sk)
}

/// Prim-style construction over the terminals `{source_u} ∪ salient`: each
/// round runs one multi-source search from the current tree and attaches the
/// nearest unreached terminal. The tree weighs no more than the minimum
/// spanning tree of the terminals under graph distance.
pub fn build_skeleton_prim(mesh: &Mesh, salient: &SalientSet) -> Result<Skeleton, SkeletonError> {
    let n = mesh.vertex_count();
    let mut terminal = vec![false; n];
    terminal[salient.source_u] = true;
    let mut remaining = 0usize;
    for &s in &salient.points {
        if !terminal[s] {
            terminal[s] = true;
            remaining += 1;
        }
    }
    if remaining == 0 {
        return Err(SkeletonError::TooFewTerminals);
    }
    let mut sk = Skeleton {
        paths: Vec::new(),
        attach_order: Vec::new(),
        covered: VertexMask::from_vertices(n, [salient.source_u]),
    };
    let mut ws = SearchWorkspace::new(n);
    while remaining > 0 {
        let path = search_from_skeleton(mesh, &mut ws, &sk, |x| {
            terminal[x] && !sk.covered.contains(x)
        })
        .ok_or(SkeletonError::Unreachable(salient.points[0]))?;
        for &x in path.vertices() {
            if terminal[x] && !sk.covered.contains(x) {
                remaining -= 1;
            }
        }
        let end = path.end();
        sk.add_path(path, end);
    }
    Ok(sk)
}

/// Graph-distance MST weight over a terminal set (Prim on the metric closure).
pub fn terminal_mst_weight(mesh: &Mesh, terminals: &[usize]) -> Result<f64, PathError> {
    let k = terminals.len();
    let dists: Vec<Vec<f64>> = terminals
        .iter()
        .map(|&t| {
            crate::paths::dijkstra(mesh, t, None)
                .map(|tr| terminals.iter().map(|&s| tr.dist[s]).collect())
        })
        .collect::<Result<_, _>>()?;
    let mut in_tree = vec![false; k];
    let mut best = vec![f64::INFINITY; k];
    let mut total = 0.0;
    if k == 0 {
        return Ok(0.0);
    }
    best[0] = 0.0;
    for _ in 0..k {
        let i = (0..k)
            .filter(|&i| !in_tree[i])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .unwrap();
        in_tree[i] = true;
        total += best[i];
        for j in 0..k {
            if !in_tree[j] && dists[i][j] < best[j] {
                best[j] = dists[i][j];
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::synth::Synthetic;
    use crate::paths::{approx_diameter, dijkstra};
    use crate::salient::{candidate_salient, filter_salient};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    /// Union-find over traversed edges: acyclic and connected.
    fn assert_tree(mesh: &Mesh, sk: &Skeleton) {
        let n = mesh.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        let mut edges = std::collections::HashSet::new();
        for p in &sk.paths {
            for w in p.vertices().windows(2) {
                let e = mesh.edge_between(w[0], w[1]).unwrap();
                assert!(edges.insert(e), "edge {e} traversed twice");
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                assert_ne!(a, b, "cycle through edge {e}");
                parent[a] = b;
            }
        }
        let verts = sk.covered_vertices();
        let root = find(&mut parent, verts[0]);
        assert!(verts.iter().all(|&v| find(&mut parent, v) == root));
        assert_eq!(edges.len() + 1, verts.len());
    }

    #[test]
    fn two_points_give_single_path() {
        let m = "ellipsoid:3,1,1,3"
            .parse::<Synthetic>()
            .unwrap()
            .build()
            .unwrap();
        let d = approx_diameter(&m, 0).unwrap();
        let s = SalientSet {
            points: vec![d.v],
            source_u: d.u,
            r_filter: Some(20),
        };
        let g = build_skeleton_greedy(&m, d.u, d.v, &s).unwrap();
        assert_eq!(g.paths.len(), 1);
        assert!((g.total_length() - d.length()).abs() < 1e-12);
        let p = build_skeleton_prim(&m, &s).unwrap();
        assert_eq!(p.paths.len(), 1);
        assert_eq!(p.paths[0].vertices(), g.paths[0].vertices());
    }

    fn cross_tubes() -> Mesh {
        crate::oracle::synth::fingers(4, 1.5, 40).unwrap().mesh
    }

    #[test]
    fn third_point_attaches_to_nearest_skeleton_vertex() {
        let m = cross_tubes();
        let d = approx_diameter(&m, 0).unwrap();
        let c = filter_salient(&m, &candidate_salient(&m, &d.tree_u), &d.tree_u, 20);
        assert!(c.len() >= 3, "{:?}", c.points);
        let sk = build_skeleton_greedy(&m, d.u, d.v, &c).unwrap();
        assert_tree(&m, &sk);
        let first =
            VertexMask::from_vertices(m.vertex_count(), sk.paths[0].vertices().iter().copied());
        let (s, attach) = sk.attach_order[1];
        // full Dijkstra from the third point: the attachment minimizes distance
        let tree = dijkstra(&m, s, None).unwrap();
        let best = first
            .iter()
            .map(|x| tree.dist[x])
            .fold(f64::INFINITY, f64::min);
        assert!((tree.dist[attach] - best).abs() < 1e-12);
        assert!(first.contains(attach));
        assert!(attach != d.u && attach != d.v, "Y junction is interior");
        for p in &c.points {
            assert!(sk.covered.contains(*p));
        }
        assert!(sk.paths.len() <= c.len());
    }

    #[test]
    fn prim_bounded_by_terminal_mst() {
        let m = cross_tubes();
        let d = approx_diameter(&m, 0).unwrap();
        let c = filter_salient(&m, &candidate_salient(&m, &d.tree_u), &d.tree_u, 20);
        let sk = build_skeleton_prim(&m, &c).unwrap();
        assert_tree(&m, &sk);
        let mut terms = vec![c.source_u];
        terms.extend(&c.points);
        let mst = terminal_mst_weight(&m, &terms).unwrap();
        assert!(
            sk.total_length() <= mst + 1e-9,
            "{} > {mst}",
            sk.total_length()
        );
        for t in terms {
            assert!(sk.covered.contains(t));
        }
    }

    #[test]
    fn prim_within_mst_on_random_subsets() {
        let m = "ellipsoid:4,1,1,3"
            .parse::<Synthetic>()
            .unwrap()
            .build()
            .unwrap();
        let d = approx_diameter(&m, 0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pool: Vec<usize> = (0..m.vertex_count())
            .filter(|&x| x != d.u && x != d.v)
            .collect();
        for _ in 0..50 {
            let mut pts: Vec<usize> = pool.choose_multiple(&mut rng, 5).copied().collect();
            pts.push(d.v);
            pts.sort_by(|&a, &b| {
                d.tree_u.dist[b]
                    .total_cmp(&d.tree_u.dist[a])
                    .then(a.cmp(&b))
            });
            let set = SalientSet {
                points: pts.clone(),
                source_u: d.u,
                r_filter: None,
            };
            let g = build_skeleton_greedy(&m, d.u, d.v, &set).unwrap();
            let p = build_skeleton_prim(&m, &set).unwrap();
            assert_tree(&m, &g);
            assert_tree(&m, &p);
            let mut terms = vec![d.u];
            terms.extend(&pts);
            let mst = terminal_mst_weight(&m, &terms).unwrap();
            assert!(p.total_length() <= mst + 1e-9);
        }
    }
}
