use serde::Serialize;

use super::Mesh;

/// Topological health of a mesh. Validation never fails; it reports.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub euler_characteristic: i64,
    pub is_manifold: bool,
    pub is_connected: bool,
    pub is_oriented: bool,
    pub is_genus_zero: bool,
    pub defects: Vec<String>,
}

impl ValidationReport {
    /// Whether the pipeline may run on this mesh.
    pub fn accepts(&self) -> bool {
        self.is_genus_zero && self.is_oriented
    }
}

const MAX_LISTED: usize = 8;
// faces with area below this fraction of their squared longest edge are degenerate
const DEGENERATE_AREA_RATIO: f64 = 1e-12;

pub fn validate(mesh: &Mesh) -> ValidationReport {
    let nv = mesh.vertex_count();
    let ne = mesh.edge_count();
    let nf = mesh.face_count();
    let mut defects = Vec::new();

    let mut boundary = Vec::new();
    let mut over_shared = Vec::new();
    let mut misoriented = Vec::new();
    for e in 0..ne {
        match mesh.edge_face_count(e) {
            1 => boundary.push(e),
            2 => {
                if mesh.edge_forward_count(e) != 1 {
                    misoriented.push(e);
                }
            }
            _ => over_shared.push(e),
        }
    }
    report_edges(&mut defects, mesh, &boundary, "boundary edge");
    report_edges(
        &mut defects,
        mesh,
        &over_shared,
        "edge shared by more than two faces",
    );
    report_edges(
        &mut defects,
        mesh,
        &misoriented,
        "inconsistently oriented edge",
    );

    let mut isolated = 0usize;
    let mut pinched = Vec::new();
    for v in 0..nv {
        if mesh.degree(v) == 0 {
            isolated += 1;
        } else if !mesh.has_rotation(v) {
            pinched.push(v);
        }
    }
    if isolated > 0 {
        defects.push(format!(
            "{isolated} vertices are not referenced by any face"
        ));
    }
    // vertices whose fan is broken only because of boundary or orientation
    // problems are already covered above
    if boundary.is_empty()
        && over_shared.is_empty()
        && misoriented.is_empty()
        && !pinched.is_empty()
    {
        let listed: Vec<String> = pinched
            .iter()
            .take(MAX_LISTED)
            .map(|v| v.to_string())
            .collect();
        defects.push(format!(
            "{} non-manifold vertices (e.g. {})",
            pinched.len(),
            listed.join(", ")
        ));
    }

    let degenerate: Vec<usize> = (0..nf)
        .filter(|&f| {
            let longest = mesh
                .face_edges(f)
                .iter()
                .map(|&e| mesh.edge_length(e))
                .fold(0.0, f64::max);
            mesh.face_areas()[f] <= DEGENERATE_AREA_RATIO * longest * longest
        })
        .collect();
    if !degenerate.is_empty() {
        let listed: Vec<String> = degenerate
            .iter()
            .take(MAX_LISTED)
            .map(|f| f.to_string())
            .collect();
        defects.push(format!(
            "warning: {} zero-area faces (e.g. {})",
            degenerate.len(),
            listed.join(", ")
        ));
    }

    let components = count_components(mesh);
    let is_connected = components == 1 && isolated == 0;
    if components > 1 {
        defects.push(format!("{components} connected components"));
    }

    let euler = nv as i64 - ne as i64 + nf as i64;
    let is_manifold =
        boundary.is_empty() && over_shared.is_empty() && pinched.is_empty() && isolated == 0;
    let is_oriented = misoriented.is_empty() && over_shared.is_empty();
    let is_genus_zero = is_manifold && is_connected && euler == 2;
    if is_manifold && is_connected && euler != 2 {
        defects.push(format!(
            "euler characteristic {euler} (genus {})",
            (2 - euler) / 2
        ));
    }

    ValidationReport {
        vertex_count: nv,
        edge_count: ne,
        face_count: nf,
        euler_characteristic: euler,
        is_manifold,
        is_connected,
        is_oriented,
        is_genus_zero,
        defects,
    }
}

fn report_edges(defects: &mut Vec<String>, mesh: &Mesh, edges: &[usize], what: &str) {
    if edges.is_empty() {
        return;
    }
    let listed: Vec<String> = edges
        .iter()
        .take(MAX_LISTED)
        .map(|&e| {
            let [a, b] = mesh.edges()[e];
            format!("({a},{b})")
        })
        .collect();
    defects.push(format!(
        "{} x {what} (e.g. {})",
        edges.len(),
        listed.join(" ")
    ));
}

fn count_components(mesh: &Mesh) -> usize {
    let nv = mesh.vertex_count();
    let mut seen = vec![false; nv];
    let mut stack = Vec::new();
    let mut components = 0;
    for start in 0..nv {
        if seen[start] || mesh.degree(start) == 0 {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &w in mesh.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::fixtures::unit_tetrahedron;
    use crate::oracle::synth::{torus, Synthetic};

    #[test]
    fn tetrahedron_is_genus_zero() {
        let r = validate(&unit_tetrahedron());
        assert_eq!(r.euler_characteristic, 2);
        assert!(r.is_genus_zero && r.is_oriented && r.accepts());
        assert!(r.defects.is_empty());
    }

    #[test]
    fn torus_is_rejected() {
        let r = validate(&torus(1.0, 0.3, 12, 8));
        assert_eq!(r.euler_characteristic, 0);
        assert!(r.is_manifold && r.is_connected);
        assert!(!r.is_genus_zero);
    }

    #[test]
    fn two_tetrahedra_are_disconnected() {
        let t = unit_tetrahedron();
        let mut positions = t.positions().to_vec();
        positions.extend(t.positions().iter().map(|p| [p[0] + 5.0, p[1], p[2]]));
        let mut faces = t.faces().to_vec();
        faces.extend(t.faces().iter().map(|f| [f[0] + 4, f[1] + 4, f[2] + 4]));
        let r = validate(&Mesh::from_triangles(positions, faces).unwrap());
        assert!(!r.is_connected);
        assert!(!r.is_genus_zero);
        assert_eq!(r.euler_characteristic, 4);
    }

    #[test]
    fn open_mesh_reports_boundary() {
        let t = unit_tetrahedron();
        let m = Mesh::from_triangles(t.positions().to_vec(), t.faces()[..3].to_vec()).unwrap();
        let r = validate(&m);
        assert!(!r.is_manifold);
        assert!(r.defects.iter().any(|d| d.contains("boundary")));
    }

    #[test]
    fn flipped_face_breaks_orientation() {
        let t = unit_tetrahedron();
        let mut faces = t.faces().to_vec();
        faces[0] = [faces[0][0], faces[0][2], faces[0][1]];
        let r = validate(&Mesh::from_triangles(t.positions().to_vec(), faces).unwrap());
        assert!(!r.is_oriented);
        assert!(!r.accepts());
    }

    #[test]
    fn degenerate_face_is_a_warning() {
        // vertex 3 on the midpoint of edge (0,1) makes face [0,3,1] collinear
        let t = unit_tetrahedron();
        let mut positions = t.positions().to_vec();
        positions[3] = [
            0.5 * (positions[0][0] + positions[1][0]),
            0.5 * (positions[0][1] + positions[1][1]),
            0.5 * (positions[0][2] + positions[1][2]),
        ];
        let m = Mesh::from_triangles(positions, t.faces().to_vec()).unwrap();
        let r = validate(&m);
        assert!(r.is_genus_zero);
        assert!(r.defects.iter().any(|d| d.contains("zero-area")));
    }

    #[test]
    fn synthetic_meshes_are_genus_zero() {
        for spec in [
            "icosphere:2",
            "cylinder:1,5,16",
            "dumbbell:1,0.2,3,12",
            "ellipsoid:4,1,1,2",
        ] {
            let m = spec.parse::<Synthetic>().unwrap().build().unwrap();
            let r = validate(&m);
            assert!(r.accepts(), "{spec}: {:?}", r.defects);
        }
    }
}
