//! Procedural test surfaces with known geometry.
//!
//! All generators emit closed, consistently outward-oriented genus-zero
//! triangulations (except [`torus`], which exists to exercise rejection).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::mesh::{Mesh, MeshError, Point3};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synthetic spec '{0}'")]
    Syntax(String),
    #[error("{0}")]
    Parameter(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// A parameterized synthetic surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Synthetic {
    /// Unit icosphere with `subdiv` levels of 4-way refinement (20·4^subdiv faces).
    Icosphere { subdiv: u32 },
    /// Unit geodesic sphere with `frequency`² triangles per icosahedron face.
    Geodesic { frequency: usize },
    /// Axis-aligned ellipsoid built from an icosphere scaled by (a, b, c).
    Ellipsoid { a: f64, b: f64, c: f64, subdiv: u32 },
    /// Capped cylinder along z from 0 to `height`.
    Cylinder {
        radius: f64,
        height: f64,
        segments: usize,
    },
    /// Two spheres joined by a tube along z; `tube_length` is the exposed
    /// tube between the spheres, centered at z = 0.
    Dumbbell {
        sphere_radius: f64,
        tube_radius: f64,
        tube_length: f64,
        resolution: usize,
    },
    /// Ellipsoidal palm with `count` capped tubes around its equator.
    Fingers {
        count: usize,
        length: f64,
        resolution: usize,
    },
}

/// Closed-form reference values where the geometry admits them.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Analytic {
    pub area: Option<f64>,
    pub optimal_cut_length: Option<f64>,
    pub optimal_min_side: Option<f64>,
    pub optimal_tightness: Option<f64>,
}

impl FromStr for Synthetic {
    type Err = SynthError;

    /// `kind:p1,p2,...`, e.g. `icosphere:3`, `dumbbell:1,0.2,3,24`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SynthError::Syntax(s.to_string());
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        let arg = |i: usize, default: Option<f64>| nums.get(i).copied().or(default).ok_or_else(bad);
        let int = |x: f64| -> Result<usize, SynthError> {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(bad())
            }
        };
        let spec = match kind {
            "icosphere" => Self::Icosphere {
                subdiv: int(arg(0, Some(3.0))?)? as u32,
            },
            "geodesic" => Self::Geodesic {
                frequency: int(arg(0, None)?)?,
            },
            "ellipsoid" => Self::Ellipsoid {
                a: arg(0, None)?,
                b: arg(1, None)?,
                c: arg(2, None)?,
                subdiv: int(arg(3, Some(3.0))?)? as u32,
            },
            "cylinder" => Self::Cylinder {
                radius: arg(0, Some(1.0))?,
                height: arg(1, Some(5.0))?,
                segments: int(arg(2, Some(24.0))?)?,
            },
            "dumbbell" => Self::Dumbbell {
                sphere_radius: arg(0, Some(1.0))?,
                tube_radius: arg(1, Some(0.2))?,
                tube_length: arg(2, Some(3.0))?,
                resolution: int(arg(3, Some(24.0))?)?,
            },
            "fingers" => Self::Fingers {
                count: int(arg(0, Some(5.0))?)?,
                length: arg(1, Some(1.6))?,
                resolution: int(arg(2, Some(48.0))?)?,
            },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

impl Synthetic {
    pub fn build(&self) -> Result<Mesh, SynthError> {
        match *self {
            Self::Icosphere { subdiv } => {
                if subdiv > 8 {
                    return Err(SynthError::Parameter(
                        "icosphere subdivision above 8".into(),
                    ));
                }
                Ok(icosphere(subdiv))
            }
            Self::Geodesic { frequency } => {
                if frequency == 0 {
                    return Err(SynthError::Parameter(
                        "geodesic frequency must be positive".into(),
                    ));
                }
                Ok(geodesic_sphere(frequency))
            }
            Self::Ellipsoid { a, b, c, subdiv } => {
                positive(&[a, b, c])?;
                let s = icosphere(subdiv);
                let pos = s
                    .positions()
                    .iter()
                    .map(|p| [p[0] * a, p[1] * b, p[2] * c])
                    .collect();
                Ok(Mesh::from_triangles(pos, s.faces().to_vec())?)
            }
            Self::Cylinder {
                radius,
                height,
                segments,
            } => {
                positive(&[radius, height])?;
                min_segments(segments)?;
                let ds = 2.0 * PI * radius / segments as f64;
                let cap = ((radius / ds).round() as usize).max(1);
                let rows = ((height / ds).round() as usize).max(1);
                let mut profile = Vec::new();
                for j in 1..=cap {
                    profile.push((0.0, radius * j as f64 / cap as f64));
                }
                for j in 1..rows {
                    profile.push((height * j as f64 / rows as f64, radius));
                }
                for j in (1..=cap).rev() {
                    profile.push((height, radius * j as f64 / cap as f64));
                }
                Ok(revolve(0.0, &profile, height, segments)?)
            }
            Self::Dumbbell {
                sphere_radius,
                tube_radius,
                tube_length,
                resolution,
            } => {
                positive(&[sphere_radius, tube_radius, tube_length])?;
                min_segments(resolution)?;
                if tube_radius >= sphere_radius {
                    return Err(SynthError::Parameter(
                        "tube radius must be below sphere radius".into(),
                    ));
                }
                Ok(dumbbell(
                    sphere_radius,
                    tube_radius,
                    tube_length,
                    resolution,
                )?)
            }
            Self::Fingers {
                count,
                length,
                resolution,
            } => {
                positive(&[length])?;
                if count == 0 || resolution < 8 * count.max(2) {
                    return Err(SynthError::Parameter(
                        "fingers need at least 8 body columns per finger".into(),
                    ));
                }
                Ok(fingers(count, length, resolution)?.mesh)
            }
        }
    }

    pub fn analytic(&self) -> Analytic {
        match *self {
            Self::Icosphere { .. } | Self::Geodesic { .. } => Analytic {
                area: Some(4.0 * PI),
                optimal_cut_length: Some(2.0 * PI),
                optimal_min_side: Some(2.0 * PI),
                optimal_tightness: Some(1.0 / (2.0 * PI)),
            },
            Self::Cylinder { radius, height, .. } => {
                let area = 2.0 * PI * radius * height + 2.0 * PI * radius * radius;
                let len = 2.0 * PI * radius;
                Analytic {
                    area: Some(area),
                    optimal_cut_length: Some(len),
                    optimal_min_side: Some(area / 2.0),
                    optimal_tightness: Some(area / 2.0 / (len * len)),
                }
            }
            Self::Dumbbell {
                sphere_radius,
                tube_radius,
                tube_length,
                ..
            } => {
                let d = DumbbellGeometry::new(sphere_radius, tube_radius, tube_length);
                let len = 2.0 * PI * tube_radius;
                Analytic {
                    area: Some(d.area()),
                    optimal_cut_length: Some(len),
                    optimal_min_side: Some(d.area() / 2.0),
                    optimal_tightness: Some(d.area() / 2.0 / (len * len)),
                }
            }
            Self::Ellipsoid { .. } | Self::Fingers { .. } => Analytic::default(),
        }
    }
}

fn positive(xs: &[f64]) -> Result<(), SynthError> {
    if xs.iter().all(|x| x.is_finite() && *x > 0.0) {
        Ok(())
    } else {
        Err(SynthError::Parameter("dimensions must be positive".into()))
    }
}

fn min_segments(k: usize) -> Result<(), SynthError> {
    if k < 3 {
        return Err(SynthError::Parameter(format!(
            "{k} segments cannot close a surface of revolution"
        )));
    }
    Ok(())
}

/// Exact surface areas of the dumbbell construction.
#[derive(Debug, Clone, Copy)]
pub struct DumbbellGeometry {
    pub sphere_radius: f64,
    pub tube_radius: f64,
    pub tube_length: f64,
}

impl DumbbellGeometry {
    pub fn new(sphere_radius: f64, tube_radius: f64, tube_length: f64) -> Self {
        Self {
            sphere_radius,
            tube_radius,
            tube_length,
        }
    }

    /// Sphere surface left after removing the cap the tube enters through.
    pub fn lobe_area(&self) -> f64 {
        let r = self.sphere_radius;
        let cap_height = r - (r * r - self.tube_radius * self.tube_radius).sqrt();
        4.0 * PI * r * r - 2.0 * PI * r * cap_height
    }

    pub fn area(&self) -> f64 {
        2.0 * self.lobe_area() + 2.0 * PI * self.tube_radius * self.tube_length
    }

    /// Area below the height `z` for a cut across the tube.
    pub fn area_below(&self, z: f64) -> f64 {
        let h = (z + self.tube_length / 2.0).clamp(0.0, self.tube_length);
        self.lobe_area() + 2.0 * PI * self.tube_radius * h
    }

    pub fn on_tube(&self, p: &Point3, tol: f64) -> bool {
        let radial = (p[0] * p[0] + p[1] * p[1]).sqrt();
        p[2].abs() <= self.tube_length / 2.0 + tol && (radial - self.tube_radius).abs() <= tol
    }
}

/// Regular icosahedron with outward windings, circumradius 1.
fn icosahedron() -> (Vec<Point3>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let pos: Vec<Point3> = raw.iter().map(normalize).collect();
    let edge = crate::mesh::dist(&pos[0], &pos[1]);
    let adjacent = |a: usize, b: usize| (crate::mesh::dist(&pos[a], &pos[b]) - edge).abs() < 1e-9;
    let mut faces = Vec::with_capacity(20);
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                if adjacent(i, j) && adjacent(j, k) && adjacent(i, k) {
                    let n = cross(&sub(&pos[j], &pos[i]), &sub(&pos[k], &pos[i]));
                    let c = add(&add(&pos[i], &pos[j]), &pos[k]);
                    if dot(&n, &c) > 0.0 {
                        faces.push([i, j, k]);
                    } else {
                        faces.push([i, k, j]);
                    }
                }
            }
        }
    }
    debug_assert_eq!(faces.len(), 20);
    (pos, faces)
}

/// Unit icosphere with `subdiv` levels of refinement.
pub fn icosphere(subdiv: u32) -> Mesh {
    geodesic_sphere(1usize << subdiv)
}

/// Class-I geodesic sphere: each icosahedron face split into `frequency`²
/// triangles on a barycentric lattice, then projected to the unit sphere.
pub fn geodesic_sphere(frequency: usize) -> Mesh {
    let f = frequency.max(1);
    let (ico, ico_faces) = icosahedron();
    let mut index: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
    let mut positions: Vec<Point3> = Vec::new();
    let mut faces = Vec::with_capacity(20 * f * f);
    for tri in &ico_faces {
        let mut lattice = |i: usize, j: usize| -> usize {
            let weights = [(tri[0], f - i - j), (tri[1], i), (tri[2], j)];
            let mut key: Vec<(usize, usize)> =
                weights.iter().copied().filter(|w| w.1 > 0).collect();
            key.sort_unstable();
            *index.entry(key).or_insert_with(|| {
                let mut p = [0.0; 3];
                for &(v, w) in &weights {
                    for k in 0..3 {
                        p[k] += ico[v][k] * w as f64 / f as f64;
                    }
                }
                positions.push(normalize(&p));
                positions.len() - 1
            })
        };
        for i in 0..f {
            for j in 0..f - i {
                let a = lattice(i, j);
                let b = lattice(i + 1, j);
                let c = lattice(i, j + 1);
                faces.push([a, b, c]);
                if i + j + 2 <= f {
                    let d = lattice(i + 1, j + 1);
                    faces.push([b, d, c]);
                }
            }
        }
    }
    Mesh::from_triangles(positions, faces).expect("geodesic sphere is well formed")
}

/// Surface of revolution about the z axis. `profile` lists interior
/// meridian samples `(z, radius)` from the bottom pole at `z_bottom` to the
/// top pole at `z_top`.
fn revolve(
    z_bottom: f64,
    profile: &[(f64, f64)],
    z_top: f64,
    segments: usize,
) -> Result<Mesh, MeshError> {
    let k = segments;
    let mut positions = Vec::with_capacity(profile.len() * k + 2);
    positions.push([0.0, 0.0, z_bottom]);
    for &(z, r) in profile {
        for i in 0..k {
            let t = 2.0 * PI * i as f64 / k as f64;
            positions.push([r * t.cos(), r * t.sin(), z]);
        }
    }
    let top = positions.len();
    positions.push([0.0, 0.0, z_top]);
    let ring = |j: usize, i: usize| 1 + j * k + (i % k);
    let mut faces = Vec::new();
    for i in 0..k {
        faces.push([0, ring(0, i + 1), ring(0, i)]);
    }
    for j in 0..profile.len() - 1 {
        for i in 0..k {
            let (a, b, c, d) = (
                ring(j, i),
                ring(j, i + 1),
                ring(j + 1, i + 1),
                ring(j + 1, i),
            );
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    let last = profile.len() - 1;
    for i in 0..k {
        faces.push([ring(last, i), ring(last, i + 1), top]);
    }
    Mesh::from_triangles(positions, faces)
}

/// Places `n` interior samples on `[0, length]` with spacing proportional to
/// `spacing(t)`; returns sample parameters excluding both ends.
fn adaptive_samples(length: f64, spacing: impl Fn(f64) -> f64) -> Vec<f64> {
    const STEPS: usize = 2000;
    let h = length / STEPS as f64;
    let mut cum = Vec::with_capacity(STEPS + 1);
    let mut acc = 0.0;
    cum.push(0.0);
    for s in 0..STEPS {
        let t = (s as f64 + 0.5) * h;
        acc += h / spacing(t);
        cum.push(acc);
    }
    let n = (acc.round() as usize).max(1);
    let mut out = Vec::with_capacity(n);
    let mut s = 0;
    for i in 1..n {
        let target = acc * i as f64 / n as f64;
        while cum[s + 1] < target {
            s += 1;
        }
        let frac = (target - cum[s]) / (cum[s + 1] - cum[s]);
        out.push((s as f64 + frac) * h);
    }
    out
}

fn dumbbell(
    sphere_radius: f64,
    tube_radius: f64,
    tube_length: f64,
    k: usize,
) -> Result<Mesh, MeshError> {
    let (rs, rt, lt) = (sphere_radius, tube_radius, tube_length);
    let min_ds = 2.0 * PI * rt / k as f64;
    let spacing = |radius: f64| (2.0 * PI * radius / k as f64).max(min_ds);
    // polar angle where the sphere radius matches the tube
    let junction = PI - (rt / rs).asin();
    let offset = (rs * rs - rt * rt).sqrt();
    let c1 = -lt / 2.0 - offset;
    let c2 = lt / 2.0 + offset;
    let arc = rs * junction;

    let mut profile = Vec::new();
    // lower sphere, from its bottom pole up to the junction
    for t in adaptive_samples(arc, |t| spacing(rs * (t / rs).sin())) {
        let phi = t / rs;
        profile.push((c1 - rs * phi.cos(), rs * phi.sin()));
    }
    profile.push((-lt / 2.0, rt));
    for t in adaptive_samples(lt, |_| min_ds) {
        profile.push((-lt / 2.0 + t, rt));
    }
    profile.push((lt / 2.0, rt));
    // upper sphere, from the junction to its top pole
    for t in adaptive_samples(arc, |t| spacing(rs * ((arc - t) / rs).sin())) {
        let phi = PI - junction + t / rs;
        profile.push((c2 - rs * phi.cos(), rs * phi.sin()));
    }
    revolve(c1 - rs, &profile, c2 + rs, k)
}

/// Generated palm-with-fingers surface plus per-finger bookkeeping.
#[derive(Debug, Clone)]
pub struct FingerMesh {
    pub mesh: Mesh,
    /// Unit direction of each finger axis.
    pub directions: Vec<Point3>,
    /// Vertex ids of each finger's tube and cap (excluding the palm).
    pub finger_vertices: Vec<Vec<usize>>,
    pub finger_radius: f64,
}

/// Palm: ellipsoid of revolution with radii (1, 1, 1.3). Fingers: capped
/// tubes of the given length attached through rectangular holes at the
/// equator, one every `resolution / count` columns.
pub fn fingers(count: usize, length: f64, resolution: usize) -> Result<FingerMesh, MeshError> {
    let k = resolution;
    let (rxy, rz) = (1.0, 1.3);
    let ds = 2.0 * PI * rxy / k as f64;
    let rows = (((PI * (rxy + rz) / 2.0) / ds).round() as usize).max(4) | 1;
    let eq = rows / 2;
    let mut positions: Vec<Point3> = vec![[0.0, 0.0, -rz]];
    for j in 0..rows {
        let phi = PI * (j + 1) as f64 / (rows + 1) as f64;
        let z = -rz * phi.cos();
        let r = rxy * phi.sin();
        for i in 0..k {
            let t = 2.0 * PI * i as f64 / k as f64;
            positions.push([r * t.cos(), r * t.sin(), z]);
        }
    }
    let top = positions.len();
    positions.push([0.0, 0.0, rz]);
    let grid = |j: usize, i: usize| 1 + j * k + (i % k);

    // hole: quads with rows [eq-h, eq+h) and columns [c-w, c+w)
    let (w, h) = (2usize, 2usize);
    let centers: Vec<usize> = (0..count).map(|f| f * k / count).collect();
    let in_hole = |j: usize, i: usize| {
        j + h >= eq && j < eq + h && {
            centers.iter().any(|&c| {
                let di = (i + k - (c + k - w) % k) % k;
                di < 2 * w
            })
        }
    };

    let mut faces = Vec::new();
    for i in 0..k {
        faces.push([0, grid(0, i + 1), grid(0, i)]);
    }
    for j in 0..rows - 1 {
        for i in 0..k {
            if in_hole(j, i) {
                continue;
            }
            let (a, b, c, d) = (
                grid(j, i),
                grid(j, i + 1),
                grid(j + 1, i + 1),
                grid(j + 1, i),
            );
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    for i in 0..k {
        faces.push([grid(rows - 1, i), grid(rows - 1, i + 1), top]);
    }

    // directed boundary edges of the palm, keyed by tail
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &faces {
        for e in 0..3 {
            *directed.entry((f[e], f[(e + 1) % 3])).or_default() += 1;
        }
    }
    let mut next: HashMap<usize, usize> = HashMap::new();
    for &(a, b) in directed.keys() {
        if !directed.contains_key(&(b, a)) {
            next.insert(a, b);
        }
    }

    let mut directions = Vec::new();
    let mut finger_vertices: Vec<Vec<usize>> = Vec::new();
    let radius = (w as f64) * ds;
    for &c in &centers {
        let start = grid(eq - h, (c + k - w) % k);
        let mut body_loop = vec![start];
        let mut cur = next[&start];
        while cur != start {
            body_loop.push(cur);
            cur = next[&cur];
        }
        body_loop.reverse();
        let lp = &body_loop;
        let m = lp.len();

        let theta = 2.0 * PI * c as f64 / k as f64;
        let axis = [theta.cos(), theta.sin(), 0.0];
        let center = [axis[0] * rxy, axis[1] * rxy, positions[grid(eq, 0)][2]];
        let e2 = [0.0, 0.0, 1.0];
        let e1 = cross(&e2, &axis);
        let angles: Vec<f64> = lp
            .iter()
            .map(|&v| {
                let d = sub(&positions[v], &center);
                dot(&d, &e2).atan2(dot(&d, &e1))
            })
            .collect();

        let first = positions.len();
        let tube_rows = ((length / ds).round() as usize).max(2);
        let cap_rows = ((PI / 2.0 * radius / ds).round() as usize).max(1);
        let mut rings: Vec<Vec<usize>> = vec![lp.clone()];
        let ring_at = |positions: &mut Vec<Point3>, along: f64, r: f64| -> Vec<usize> {
            angles
                .iter()
                .map(|&a| {
                    let p = [
                        center[0] + axis[0] * along + r * (a.cos() * e1[0] + a.sin() * e2[0]),
                        center[1] + axis[1] * along + r * (a.cos() * e1[1] + a.sin() * e2[1]),
                        center[2] + axis[2] * along + r * (a.cos() * e1[2] + a.sin() * e2[2]),
                    ];
                    positions.push(p);
                    positions.len() - 1
                })
                .collect()
        };
        for t in 1..=tube_rows {
            let along = length * t as f64 / tube_rows as f64;
            rings.push(ring_at(&mut positions, along, radius));
        }
        for t in 1..=cap_rows {
            let beta = (PI / 2.0) * t as f64 / (cap_rows + 1) as f64;
            rings.push(ring_at(
                &mut positions,
                length + radius * beta.sin(),
                radius * beta.cos(),
            ));
        }
        let tip = positions.len();
        positions.push([
            center[0] + axis[0] * (length + radius),
            center[1] + axis[1] * (length + radius),
            center[2],
        ]);
        for r in 0..rings.len() - 1 {
            for i in 0..m {
                let i1 = (i + 1) % m;
                let (a, b, cc, d) = (rings[r][i], rings[r][i1], rings[r + 1][i1], rings[r + 1][i]);
                faces.push([a, b, cc]);
                faces.push([a, cc, d]);
            }
        }
        let last = rings.last().unwrap();
        for i in 0..m {
            faces.push([last[i], last[(i + 1) % m], tip]);
        }
        directions.push(axis);
        finger_vertices.push((first..positions.len()).collect());
    }

    // drop the palm vertices left inside the holes
    let mut remap = vec![usize::MAX; positions.len()];
    for f in &faces {
        for &v in f {
            remap[v] = 0;
        }
    }
    let mut kept = Vec::with_capacity(positions.len());
    for (v, p) in positions.into_iter().enumerate() {
        if remap[v] == 0 {
            remap[v] = kept.len();
            kept.push(p);
        }
    }
    for f in &mut faces {
        for v in f.iter_mut() {
            *v = remap[*v];
        }
    }
    for fv in &mut finger_vertices {
        for v in fv.iter_mut() {
            *v = remap[*v];
        }
    }

    Ok(FingerMesh {
        mesh: Mesh::from_triangles(kept, faces)?,
        directions,
        finger_vertices,
        finger_radius: radius,
    })
}

/// Torus in the xy plane; genus one.
pub fn torus(major: f64, minor: f64, nu: usize, nv: usize) -> Mesh {
    let mut positions = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = 2.0 * PI * i as f64 / nu as f64;
        for j in 0..nv {
            let v = 2.0 * PI * j as f64 / nv as f64;
            let r = major + minor * v.cos();
            positions.push([r * u.cos(), r * u.sin(), minor * v.sin()]);
        }
    }
    let id = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut faces = Vec::new();
    for i in 0..nu {
        for j in 0..nv {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Mesh::from_triangles(positions, faces).expect("torus is well formed")
}

fn normalize(p: &Point3) -> Point3 {
    let n = dot(p, p).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

fn sub(a: &Point3, b: &Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: &Point3, b: &Point3) -> Point3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn dot(a: &Point3, b: &Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Point3, b: &Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
