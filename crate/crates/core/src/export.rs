//! JSON, OBJ polyline and CSV artifacts.
//!
//! The JSON documents hold no timings, so identical runs produce identical
//! bytes. Timings go to the CSV row only.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::mesh::Mesh;
use crate::pipeline::{DiameterSummary, ExportFlags, PipelineError, PipelineOutput};
use crate::salient::SalientPointRecord;
use crate::tightness::NeckCut;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutRecord {
    pub path_id: usize,
    pub position: usize,
    pub vertex_loop: Vec<usize>,
    pub length: f64,
    pub area_min_side: f64,
    pub area_other_side: f64,
    pub tightness: f64,
    pub rank: usize,
}

impl From<&NeckCut> for CutRecord {
    fn from(c: &NeckCut) -> Self {
        let r = &c.record;
        Self {
            path_id: r.cycle.base_path_id,
            position: r.cycle.position,
            vertex_loop: r.cycle.vertices.clone(),
            length: r.cycle.length,
            area_min_side: r.area_min_side(),
            area_other_side: r.area_max_side(),
            tightness: r.tightness,
            rank: c.rank,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CutsDocument<'a> {
    pub input: &'a str,
    pub vertex_count: usize,
    pub face_count: usize,
    pub total_area: f64,
    pub threshold: f64,
    pub window: usize,
    pub diameter: DiameterSummary,
    pub salient_count: usize,
    pub cuts: Vec<CutRecord>,
    pub warnings: &'a [String],
}

pub fn cuts_document<'a>(input: &'a str, mesh: &Mesh, out: &'a PipelineOutput) -> CutsDocument<'a> {
    CutsDocument {
        input,
        vertex_count: mesh.vertex_count(),
        face_count: mesh.face_count(),
        total_area: mesh.total_area(),
        threshold: out.threshold,
        window: out.window,
        diameter: out.diameter,
        salient_count: out.salient.len(),
        cuts: out.cuts.iter().map(CutRecord::from).collect(),
        warnings: &out.warnings,
    }
}

#[derive(Debug, Serialize)]
struct SalientDocument<'a> {
    source_u: usize,
    r_filter: Option<usize>,
    points: &'a [SalientPointRecord],
}

#[derive(Debug, Serialize)]
struct SkeletonDocument {
    paths: Vec<Vec<usize>>,
    attach_order: Vec<(usize, usize)>,
    total_length: f64,
}

#[derive(Debug, Serialize)]
struct FamilyDocument<'a> {
    path_id: usize,
    path: &'a [usize],
    skipped_positions: &'a [usize],
    cycles: Vec<FamilyCycle<'a>>,
}

#[derive(Debug, Serialize)]
struct FamilyCycle<'a> {
    position: usize,
    base_vertex: usize,
    vertex_loop: &'a [usize],
    length: f64,
    area_side_u: f64,
    area_side_other: f64,
    tightness: f64,
    lasso_condition: bool,
}

/// OBJ text with every mesh vertex and one polyline per loop or path.
pub fn obj_polylines(mesh: &Mesh, lines: &[(&[usize], bool)]) -> String {
    let mut s = String::new();
    for p in mesh.positions() {
        let _ = writeln!(s, "v {} {} {}", p[0], p[1], p[2]);
    }
    for (verts, closed) in lines {
        s.push('l');
        for v in verts.iter() {
            let _ = write!(s, " {}", v + 1);
        }
        if *closed {
            if let Some(first) = verts.first() {
                let _ = write!(s, " {}", first + 1);
            }
        }
        s.push('\n');
    }
    s
}

pub const CSV_HEADER: [&str; 8] = [
    "input",
    "faces",
    "salient_count",
    "salient_ms",
    "cycles_ms",
    "tightness_ms",
    "total_ms",
    "cuts_found",
];

pub fn csv_row(input: &str, mesh: &Mesh, out: &PipelineOutput) -> Vec<String> {
    let t = &out.timing;
    vec![
        input.to_string(),
        mesh.face_count().to_string(),
        t.salient_count.to_string(),
        format!("{:.3}", t.salient_ms),
        format!("{:.3}", t.cycles_ms),
        format!("{:.3}", t.tightness_ms),
        format!("{:.3}", t.total_ms),
        out.cuts.len().to_string(),
    ]
}

fn write_file(path: PathBuf, contents: &[u8]) -> Result<PathBuf, PipelineError> {
    fs::write(&path, contents).map_err(|source| PipelineError::Export {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(value).expect("serializable");
    s.push(b'\n');
    s
}

/// Writes the enabled artifacts into `dir` and returns their paths.
pub fn write_exports(
    dir: &Path,
    input: &str,
    mesh: &Mesh,
    out: &PipelineOutput,
    flags: ExportFlags,
) -> Result<Vec<PathBuf>, PipelineError> {
    fs::create_dir_all(dir).map_err(|source| PipelineError::Export {
        path: dir.display().to_string(),
        source,
    })?;
    let mut written = Vec::new();
    if flags.json {
        written.push(write_file(
            dir.join("cuts.json"),
            &to_json(&cuts_document(input, mesh, out)),
        )?);
        let salient = SalientDocument {
            source_u: out.salient.source_u,
            r_filter: out.salient.r_filter,
            points: &out.salient_records,
        };
        written.push(write_file(dir.join("salient.json"), &to_json(&salient))?);
        let skeleton = SkeletonDocument {
            paths: out
                .skeleton
                .paths
                .iter()
                .map(|p| p.vertices().to_vec())
                .collect(),
            attach_order: out.skeleton.attach_order.clone(),
            total_length: out.skeleton.total_length(),
        };
        written.push(write_file(dir.join("skeleton.json"), &to_json(&skeleton))?);
        let families: Vec<FamilyDocument> = out
            .families
            .iter()
            .zip(&out.records)
            .map(|(f, recs)| FamilyDocument {
                path_id: f.path_id,
                path: f.path.vertices(),
                skipped_positions: &f.skipped_positions,
                cycles: recs
                    .iter()
                    .map(|r| FamilyCycle {
                        position: r.cycle.position,
                        base_vertex: r.cycle.base_vertex,
                        vertex_loop: &r.cycle.vertices,
                        length: r.cycle.length,
                        area_side_u: r.area_side_u,
                        area_side_other: r.area_side_other,
                        tightness: r.tightness,
                        lasso_condition: r.cycle.lasso_condition,
                    })
                    .collect(),
            })
            .collect();
        written.push(write_file(dir.join("cycles.json"), &to_json(&families))?);
    }
    if flags.obj {
        let cuts: Vec<(&[usize], bool)> = out
            .cuts
            .iter()
            .map(|c| (c.record.cycle.vertices.as_slice(), true))
            .collect();
        written.push(write_file(
            dir.join("cuts.obj"),
            obj_polylines(mesh, &cuts).as_bytes(),
        )?);
        let paths: Vec<(&[usize], bool)> = out
            .skeleton
            .paths
            .iter()
            .map(|p| (p.vertices(), false))
            .collect();
        written.push(write_file(
            dir.join("skeleton.obj"),
            obj_polylines(mesh, &paths).as_bytes(),
        )?);
    }
    if flags.csv {
        let path = dir.join("stats.csv");
        let mut w = csv::Writer::from_writer(Vec::new());
        let row = csv_row(input, mesh, out);
        w.write_record(CSV_HEADER)
            .and_then(|_| w.write_record(&row))
            .map_err(|e| PipelineError::Internal(e.to_string()))?;
        let bytes = w
            .into_inner()
            .map_err(|e| PipelineError::Internal(e.to_string()))?;
        written.push(write_file(path, &bytes)?);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::synth::Synthetic;
    use crate::pipeline::{run_on_mesh, RunConfig};

    #[test]
    fn writes_all_artifacts() {
        let m = "dumbbell:1,0.2,3,16"
            .parse::<Synthetic>()
            .unwrap()
            .build()
            .unwrap();
        let out = run_on_mesh(&m, &RunConfig::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let flags = ExportFlags {
            json: true,
            obj: true,
            csv: true,
        };
        let files = write_exports(dir.path(), "dumbbell", &m, &out, flags).unwrap();
        assert_eq!(files.len(), 7);
        let cuts: serde_json::Value =
            serde_json::from_slice(&fs::read(dir.path().join("cuts.json")).unwrap()).unwrap();
        let first = &cuts["cuts"][0];
        for key in [
            "path_id",
            "position",
            "vertex_loop",
            "length",
            "area_min_side",
            "area_other_side",
            "tightness",
            "rank",
        ] {
            assert!(!first[key].is_null(), "{key}");
        }
        let csv = fs::read_to_string(dir.path().join("stats.csv")).unwrap();
        assert!(csv.starts_with(
            "input,faces,salient_count,salient_ms,cycles_ms,tightness_ms,total_ms,cuts_found\n"
        ));
        let obj = fs::read_to_string(dir.path().join("cuts.obj")).unwrap();
        let line = obj.lines().find(|l| l.starts_with('l')).unwrap();
        let idx: Vec<&str> = line.split_whitespace().skip(1).collect();
        assert_eq!(idx.first(), idx.last());
    }
}
