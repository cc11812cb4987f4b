//! End-to-end neck-cut detection: load, validate, salient points, skeleton,
//! lassos, tightness, selection.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cycles::{cycles_along_path_parallel, CycleFamily};
use crate::mesh::{load_mesh, validate, Mesh, MeshError, MeshFormat, ValidationReport};
use crate::oracle::brute::{brute_force_best_cycle, BruteForceResult};
use crate::oracle::collar::{exhaustive_collar, CollarResult, PairBudget};
use crate::oracle::floodfill::region_area_floodfill;
use crate::oracle::synth::{SynthError, Synthetic};
use crate::oracle::OracleError;
use crate::paths::approx_diameter;
use crate::salient::{
    candidate_salient, filter_salient, salient_records, SalientPointRecord, SalientSet,
};
use crate::skeleton::{build_skeleton_greedy, build_skeleton_prim, Skeleton, SkeletonVariant};
use crate::tightness::{
    score_family, select_cuts, threshold, NeckCut, TightnessRecord, DEFAULT_EPSILON, DEFAULT_WINDOW,
};

pub const DEFAULT_R_FILTER: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    File(PathBuf),
    Synthetic(Synthetic),
}

impl InputSource {
    pub fn label(&self) -> String {
        match self {
            Self::File(p) => p.display().to_string(),
            Self::Synthetic(s) => {
                format!("synthetic:{}", serde_json::to_string(s).unwrap_or_default())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ExportFlags {
    pub json: bool,
    pub obj: bool,
    pub csv: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<InputSource>,
    pub format: Option<MeshFormat>,
    pub r_filter: usize,
    pub window: usize,
    pub epsilon: f64,
    pub seed_vertex: usize,
    pub skeleton: SkeletonVariant,
    pub workers: usize,
    pub out_dir: Option<PathBuf>,
    pub exports: ExportFlags,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            format: None,
            r_filter: DEFAULT_R_FILTER,
            window: DEFAULT_WINDOW,
            epsilon: DEFAULT_EPSILON,
            seed_vertex: 0,
            skeleton: SkeletonVariant::Greedy,
            workers: 1,
            out_dir: None,
            exports: ExportFlags::default(),
        }
    }
}

impl RunConfig {
    pub fn check(&self) -> Result<(), PipelineError> {
        if self.window == 0 {
            return Err(PipelineError::Config("window must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(PipelineError::Config(format!(
                "epsilon {} outside [0, 1)",
                self.epsilon
            )));
        }
        if self.workers == 0 {
            return Err(PipelineError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn threshold(&self) -> f64 {
        threshold(self.epsilon)
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no input given")]
    NoInput,
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Synthetic(#[from] SynthError),
    #[error("mesh rejected: {}", .0.defects.join("; "))]
    Invalid(Box<ValidationReport>),
    #[error("writing {path}: {source}")]
    Export {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl PipelineError {
    /// 1 for input/output failures, 2 for rejected input, 3 for internal errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Mesh(e) => match e {
                MeshError::Io { .. }
                | MeshError::Parse { .. }
                | MeshError::NonTriangularFace { .. }
                | MeshError::IndexOutOfRange { .. }
                | MeshError::Unsupported(_) => 1,
                _ => 2,
            },
            Self::Export { .. } | Self::NoInput => 1,
            Self::Config(_) | Self::Invalid(_) | Self::Oracle(OracleError::TooLarge { .. }) => 2,
            Self::Synthetic(SynthError::Mesh(_)) => 3,
            Self::Synthetic(_) => 2,
            Self::Oracle(_) | Self::Internal(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TimingReport {
    /// Diameter, salient points and skeleton.
    pub salient_ms: f64,
    pub cycles_ms: f64,
    pub tightness_ms: f64,
    pub total_ms: f64,
    pub salient_count: usize,
    pub path_cycle_counts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiameterSummary {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub diameter: DiameterSummary,
    pub salient: SalientSet,
    pub salient_records: Vec<SalientPointRecord>,
    pub skeleton: Skeleton,
    pub families: Vec<CycleFamily>,
    /// Per family, ordered by position.
    pub records: Vec<Vec<TightnessRecord>>,
    pub cuts: Vec<NeckCut>,
    pub threshold: f64,
    pub window: usize,
    pub warnings: Vec<String>,
    pub timing: TimingReport,
}

impl PipelineOutput {
    /// Highest tightness over every scored cycle.
    pub fn best_record(&self) -> Option<&TightnessRecord> {
        self.records
            .iter()
            .flatten()
            .max_by(|a, b| a.tightness.total_cmp(&b.tightness))
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn load_input(config: &RunConfig) -> Result<Mesh, PipelineError> {
    match config.input.as_ref().ok_or(PipelineError::NoInput)? {
        InputSource::File(p) => Ok(load_mesh(p, config.format)?),
        InputSource::Synthetic(s) => Ok(s.build()?),
    }
}

/// Loads the configured input, runs the pipeline and writes the exports.
pub fn run_pipeline(config: &RunConfig) -> Result<(Mesh, PipelineOutput), PipelineError> {
    config.check()?;
    let start = Instant::now();
    let mesh = load_input(config)?;
    let mut out = run_on_mesh(&mesh, config)?;
    out.timing.total_ms = ms(start);
    if let Some(dir) = &config.out_dir {
        let label = config
            .input
            .as_ref()
            .map(InputSource::label)
            .unwrap_or_default();
        crate::export::write_exports(dir, &label, &mesh, &out, config.exports)?;
    }
    Ok((mesh, out))
}

fn with_pool<T: Send>(
    workers: usize,
    f: impl FnOnce(bool) -> T + Send,
) -> Result<T, PipelineError> {
    if workers <= 1 {
        return Ok(f(false));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| PipelineError::Internal(e.to_string()))?;
    Ok(pool.install(|| f(true)))
}

/// Runs every stage on an already loaded mesh.
pub fn run_on_mesh(mesh: &Mesh, config: &RunConfig) -> Result<PipelineOutput, PipelineError> {
    config.check()?;
    let start = Instant::now();
    let report = validate(mesh);
    if !report.accepts() {
        return Err(PipelineError::Invalid(Box::new(report)));
    }
    if config.seed_vertex >= mesh.vertex_count() {
        return Err(PipelineError::Config(format!(
            "seed vertex {} out of range (vertex count {})",
            config.seed_vertex,
            mesh.vertex_count()
        )));
    }
    let internal = |e: &dyn std::fmt::Display| PipelineError::Internal(e.to_string());
    let mut warnings: Vec<String> = report
        .defects
        .iter()
        .map(|d| format!("validation: {d}"))
        .collect();

    let t = Instant::now();
    let diameter = approx_diameter(mesh, config.seed_vertex).map_err(|e| internal(&e))?;
    let cands = candidate_salient(mesh, &diameter.tree_u);
    let salient = filter_salient(mesh, &cands, &diameter.tree_u, config.r_filter);
    let skeleton = match config.skeleton {
        SkeletonVariant::Greedy => build_skeleton_greedy(mesh, diameter.u, diameter.v, &salient),
        SkeletonVariant::Prim => build_skeleton_prim(mesh, &salient),
    }
    .map_err(|e| internal(&e))?;
    let salient_ms = ms(t);
    if salient.is_empty() {
        warnings.push("no salient points".into());
    }

    let t = Instant::now();
    let families: Vec<CycleFamily> = with_pool(config.workers, |parallel| {
        let one = |(id, path): (usize, &crate::paths::PathOnMesh)| {
            if path.len() < 3 {
                Ok(CycleFamily {
                    path_id: id,
                    path: path.clone(),
                    cycles: Vec::new(),
                    skipped_positions: Vec::new(),
                })
            } else {
                cycles_along_path_parallel(mesh, path, id, parallel)
            }
        };
        if parallel {
            skeleton
                .paths
                .par_iter()
                .enumerate()
                .map(one)
                .collect::<Result<Vec<_>, _>>()
        } else {
            skeleton
                .paths
                .iter()
                .enumerate()
                .map(one)
                .collect::<Result<Vec<_>, _>>()
        }
    })?
    .map_err(|e| internal(&e))?;
    let cycles_ms = ms(t);

    let t = Instant::now();
    let scored = with_pool(config.workers, |parallel| {
        if parallel {
            families
                .par_iter()
                .map(|f| score_family(mesh, f))
                .collect::<Result<Vec<_>, _>>()
        } else {
            families
                .iter()
                .map(|f| score_family(mesh, f))
                .collect::<Result<Vec<_>, _>>()
        }
    })?
    .map_err(|e| internal(&e))?;
    let mut records = Vec::with_capacity(scored.len());
    for s in scored {
        warnings.extend(s.warning);
        records.push(s.records);
    }
    let th = config.threshold();
    let cuts = select_cuts(&records, th, config.window);
    let tightness_ms = ms(t);

    let timing = TimingReport {
        salient_ms,
        cycles_ms,
        tightness_ms,
        total_ms: ms(start),
        salient_count: salient.len(),
        path_cycle_counts: families.iter().map(|f| f.cycles.len()).collect(),
    };
    Ok(PipelineOutput {
        diameter: crate::pipeline::DiameterSummary {
            u: diameter.u,
            v: diameter.v,
            length: diameter.length(),
        },
        salient_records: salient_records(mesh, &salient, &diameter.tree_u),
        salient,
        skeleton,
        families,
        records,
        cuts,
        threshold: th,
        window: config.window,
        warnings,
        timing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Floodfill,
    Brute,
    Collar,
}

impl std::str::FromStr for OracleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "floodfill" => Ok(Self::Floodfill),
            "brute" => Ok(Self::Brute),
            "collar" => Ok(Self::Collar),
            other => Err(format!("unknown oracle '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AreaDiff {
    pub path_id: usize,
    pub position: usize,
    pub prefix_sum: f64,
    pub flood_fill: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub pipeline_best_tightness: Option<f64>,
    pub pipeline_best_cut_tightness: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_diffs: Option<Vec<AreaDiff>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_relative_area_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute: Option<BruteForceResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collar: Option<CollarResult>,
}

pub const BRUTE_MAX_EDGES: usize = 64;
pub const COLLAR_PAIRS: usize = 16;
pub const COLLAR_SEED: u64 = 0x5eed;

/// Runs the selected oracles next to the pipeline output.
pub fn run_oracle_compare(
    mesh: &Mesh,
    out: &PipelineOutput,
    oracles: &[OracleKind],
) -> Result<OracleReport, PipelineError> {
    let mut report = OracleReport {
        pipeline_best_tightness: out.best_record().map(|r| r.tightness),
        pipeline_best_cut_tightness: out.cuts.first().map(|c| c.record.tightness),
        area_diffs: None,
        max_relative_area_diff: None,
        brute: None,
        collar: None,
    };
    let total = mesh.total_area();
    for kind in oracles {
        match kind {
            OracleKind::Floodfill => {
                let mut diffs = Vec::new();
                for (fam, recs) in out.families.iter().zip(&out.records) {
                    let p = fam.path.vertices();
                    let e = mesh.edge_between(p[0], p[1]).expect("path edge");
                    let face = mesh.edge_faces(e)[0];
                    for r in recs {
                        let split = region_area_floodfill(mesh, &r.cycle.vertices)
                            .map_err(|e| PipelineError::Internal(e.to_string()))?;
                        let ff = split.area_containing_face(face);
                        diffs.push(AreaDiff {
                            path_id: fam.path_id,
                            position: r.cycle.position,
                            prefix_sum: r.area_side_u,
                            flood_fill: ff,
                            abs_diff: (ff - r.area_side_u).abs(),
                        });
                    }
                }
                report.max_relative_area_diff =
                    Some(diffs.iter().map(|d| d.abs_diff / total).fold(0.0, f64::max));
                report.area_diffs = Some(diffs);
            }
            OracleKind::Brute => {
                report.brute = Some(brute_force_best_cycle(mesh, BRUTE_MAX_EDGES)?)
            }
            OracleKind::Collar => {
                report.collar = Some(exhaustive_collar(
                    mesh,
                    PairBudget::Sampled {
                        count: COLLAR_PAIRS,
                        seed: COLLAR_SEED,
                    },
                )?)
            }
        }
    }
    Ok(report)
}
