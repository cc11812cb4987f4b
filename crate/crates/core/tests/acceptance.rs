//! Acceptance checks. Each test prints one `[PASS]` or `[FAIL]` line with
//! the measured values, then asserts.
//!
//! Run with `cargo test -p neckcut --test acceptance`.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

use neckcut::cycles::crossing_pairs;
use neckcut::oracle::brute::brute_force_best_cycle;
use neckcut::oracle::collar::{exhaustive_collar, PairBudget};
use neckcut::oracle::floodfill::region_area_floodfill;
use neckcut::oracle::synth::{fingers, geodesic_sphere, icosphere, DumbbellGeometry, Synthetic};
use neckcut::pipeline::ExportFlags;
use neckcut::tightness::{side_areas, strip_areas, SPHERE_TIGHTNESS};
use neckcut::{run_on_mesh, run_pipeline, InputSource, Mesh, RunConfig};

// Timing-sensitive checks must not share the machine with the others.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

/// Writes past the test harness capture so the line is always visible.
fn report(name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "[{tag}] {name}: {detail}");
    let _ = out.flush();
    assert!(pass, "{name}: {detail}");
}

fn synth(spec: &str) -> Mesh {
    spec.parse::<Synthetic>().unwrap().build().unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn sphere_baseline() {
    let _g = serial();
    let mesh = icosphere(4);
    let t = Instant::now();
    let out = run_on_mesh(&mesh, &RunConfig::default()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let best = out.best_record().unwrap();
    let selected = out.cuts.first().map(|c| &c.record).unwrap_or(best);
    let sides = [selected.area_side_u, selected.area_side_other];
    let pass = rel(best.tightness, SPHERE_TIGHTNESS) <= 0.05
        && sides.iter().all(|&a| rel(a, 2.0 * PI) <= 0.05)
        && secs < 2.0;
    report(
        "sphere baseline",
        pass,
        &format!(
            "icosphere(4): max tightness {:.5} vs 1/2π = {:.5} (tol 5%); selected sides {:.4}, {:.4} vs 2π (tol 5%); {} cuts; {:.3} s",
            best.tightness,
            SPHERE_TIGHTNESS,
            sides[0],
            sides[1],
            out.cuts.len(),
            secs
        ),
    );
}

#[test]
fn dumbbell_neck() {
    let _g = serial();
    let geo = DumbbellGeometry::new(1.0, 0.2, 3.0);
    let mesh = synth("dumbbell:1,0.2,3");
    let t = Instant::now();
    let out = run_on_mesh(&mesh, &RunConfig::default()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let (pass, detail) = match out.cuts.as_slice() {
        [cut] => {
            let verts = &cut.record.cycle.vertices;
            let tol = 0.05 * geo.tube_radius;
            let on_tube = verts.iter().all(|&v| geo.on_tube(&mesh.position(v), tol));
            let z = verts.iter().map(|&v| mesh.position(v)[2]).sum::<f64>() / verts.len() as f64;
            let below = geo.area_below(z);
            let min_side = below.min(geo.area() - below);
            let expected = min_side / (2.0 * PI * geo.tube_radius).powi(2);
            let err = rel(cut.record.tightness, expected);
            (
                on_tube && err <= 0.15 && secs < 2.0,
                format!(
                    "1 cut, on tube: {on_tube}, tightness {:.4} vs analytic {:.4} (err {:.2}%, tol 15%); {:.3} s",
                    cut.record.tightness,
                    expected,
                    100.0 * err,
                    secs
                ),
            )
        }
        cuts => (false, format!("{} cuts, expected exactly 1", cuts.len())),
    };
    report("dumbbell neck", pass, &detail);
}

#[test]
fn oracle_equivalence() {
    let _g = serial();
    let mut worst_side = 0.0f64;
    let mut worst_total = 0.0f64;
    let mut cycles = 0;
    let mut failures = Vec::new();
    for spec in [
        "icosphere:2",
        "cylinder",
        "cylinder:0.4,4,16",
        "dumbbell:1,0.2,3",
        "dumbbell:1,0.3,2,12",
    ] {
        let mesh = synth(spec);
        let total = mesh.total_area();
        let out = run_on_mesh(&mesh, &RunConfig::default()).unwrap();
        for fam in &out.families {
            if fam.cycles.is_empty() {
                continue;
            }
            let strips = match strip_areas(&mesh, fam) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("{spec} path {}: {e}", fam.path_id));
                    continue;
                }
            };
            let sum: f64 = strips.iter().sum();
            worst_total = worst_total.max(rel(sum, total));
            let p = fam.path.vertices();
            let first_face = mesh.edge_faces(mesh.edge_between(p[0], p[1]).unwrap())[0];
            for (c, prefix) in fam.cycles.iter().zip(side_areas(&strips)) {
                let split = region_area_floodfill(&mesh, &c.vertices).unwrap();
                let direct = split.area_containing_face(first_face);
                worst_side = worst_side.max((prefix - direct).abs() / total);
                cycles += 1;
            }
        }
    }
    let pass = failures.is_empty() && worst_side <= 1e-9 && worst_total <= 1e-9 && cycles > 0;
    report(
        "oracle equivalence",
        pass,
        &format!(
            "{cycles} cycles on icosphere(2), cylinders, dumbbells: max side diff {worst_side:.2e}, max strip-sum diff {worst_total:.2e} (tol 1e-9 relative to total area); errors {failures:?}"
        ),
    );
}

#[test]
fn non_crossing_families() {
    let _g = serial();
    let mut families = 0;
    let mut pairs = 0;
    let mut crossings = Vec::new();
    for spec in [
        "cylinder",
        "cylinder:0.4,4,16",
        "cylinder:0.5,3,10",
        "dumbbell:1,0.2,3",
        "dumbbell:1,0.2,3,12",
        "dumbbell:1,0.35,1.5,16",
    ] {
        let mesh = synth(spec);
        let out = run_on_mesh(&mesh, &RunConfig::default()).unwrap();
        for fam in &out.families {
            let k = fam.cycles.len();
            families += 1;
            pairs += k * k.saturating_sub(1) / 2;
            for (i, j) in crossing_pairs(&mesh, &fam.cycles) {
                crossings.push(format!("{spec} path {} cycles {i},{j}", fam.path_id));
            }
        }
    }
    report(
        "non-crossing",
        crossings.is_empty() && pairs > 0,
        &format!("{families} families, {pairs} pairs checked on cylinders and dumbbells; crossings {crossings:?}"),
    );
}

#[test]
fn approximation_factor() {
    let _g = serial();
    let mesh = synth("dumbbell:1,0.2,3,8");
    let n = mesh.vertex_count();
    let out = run_on_mesh(&mesh, &RunConfig::default()).unwrap();
    let pipeline = out.best_record().map_or(0.0, |r| r.tightness);
    let brute = brute_force_best_cycle(&mesh, 64).unwrap();
    let collar = exhaustive_collar(
        &mesh,
        PairBudget::Sampled {
            count: 64,
            seed: 11,
        },
    )
    .unwrap();
    let b = brute.best.as_ref().map_or(0.0, |s| s.tightness);
    let c = collar.best.as_ref().map_or(0.0, |s| s.score.tightness);
    let pass = n <= 300 && !brute.budget_exceeded && b > 0.0 && c >= b / 2.0 && pipeline >= c / 2.0;
    report(
        "approximation factor",
        pass,
        &format!(
            "dumbbell with {n} vertices: brute {b:.4} (exhaustive: {}), collar {c:.4} (no sleeve: {}), pipeline {pipeline:.4}; need collar >= brute/2 and pipeline >= collar/2",
            !brute.budget_exceeded, collar.no_sleeve
        ),
    );
}

#[test]
fn runtime_scaling() {
    let _g = serial();
    let mut points = Vec::new();
    for freq in [11, 22, 44] {
        let mesh = geodesic_sphere(freq);
        let _ = run_on_mesh(&mesh, &RunConfig::default()).unwrap();
        let mut runs: Vec<f64> = (0..3)
            .map(|_| {
                let t = Instant::now();
                let out = run_on_mesh(&mesh, &RunConfig::default()).unwrap();
                std::hint::black_box(&out);
                t.elapsed().as_secs_f64()
            })
            .collect();
        runs.sort_by(f64::total_cmp);
        points.push((mesh.face_count() as f64, runs[1]));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / 3.0;
    let my = ys.iter().sum::<f64>() / 3.0;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let per_face_us = points.iter().map(|p| 1e6 * p.1 / p.0).fold(0.0, f64::max);
    let summary: Vec<String> = points
        .iter()
        .map(|p| format!("{} faces {:.1} ms", p.0, 1e3 * p.1))
        .collect();
    report(
        "runtime scaling",
        slope < 1.5,
        &format!(
            "{}; fitted exponent {slope:.3} (need < 1.5); worst {per_face_us:.1} us/face (soft reference 380 us/face)",
            summary.join(", ")
        ),
    );
}

#[test]
fn one_cut_per_protrusion() {
    let _g = serial();
    let fm = fingers(5, 1.6, 48).unwrap();
    let mesh = &fm.mesh;
    let out = run_on_mesh(mesh, &RunConfig::default()).unwrap();
    let total = mesh.total_area();
    let mut per_finger = vec![0usize; fm.finger_vertices.len()];
    let mut stray = 0;
    for cut in &out.cuts {
        let verts = &cut.record.cycle.vertices;
        let owner = fm
            .finger_vertices
            .iter()
            .position(|fv| verts.iter().all(|v| fv.contains(v)));
        let split = region_area_floodfill(mesh, verts).unwrap();
        match owner {
            Some(i) if split.min_area() < total / 4.0 => per_finger[i] += 1,
            _ => stray += 1,
        }
    }
    let pass = stray == 0 && per_finger.iter().all(|&c| c == 1);
    report(
        "one cut per protrusion",
        pass,
        &format!(
            "5-finger mesh ({} faces): {} salient points, cuts per finger {per_finger:?}, cuts off any finger {stray}",
            mesh.face_count(),
            out.salient.len()
        ),
    );
}

#[test]
fn deterministic_json() {
    let _g = serial();
    let spec = "fingers:5,1.6,228";
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut faces = 0;
    for d in &dirs {
        let config = RunConfig {
            input: Some(InputSource::Synthetic(spec.parse().unwrap())),
            out_dir: Some(d.path().to_path_buf()),
            exports: ExportFlags {
                json: true,
                ..Default::default()
            },
            ..RunConfig::default()
        };
        let (mesh, _) = run_pipeline(&config).unwrap();
        faces = mesh.face_count();
    }
    let mut differing = Vec::new();
    for name in ["cuts.json", "salient.json", "skeleton.json", "cycles.json"] {
        let a = fs::read(dirs[0].path().join(name)).unwrap();
        let b = fs::read(dirs[1].path().join(name)).unwrap();
        if a != b {
            differing.push(name);
        }
    }
    report(
        "deterministic output",
        differing.is_empty() && faces > 60_000,
        &format!("{spec} ({faces} faces), two runs: differing files {differing:?}"),
    );
}
