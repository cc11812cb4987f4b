//! Command-line front end for neck-cut detection.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use neckcut::export::{csv_row, cuts_document, CutsDocument, CSV_HEADER};
use neckcut::oracle::synth::Synthetic;
use neckcut::pipeline::{
    run_oracle_compare, ExportFlags, OracleKind, OracleReport, DEFAULT_R_FILTER,
};
use neckcut::tightness::{DEFAULT_EPSILON, DEFAULT_WINDOW};
use neckcut::{
    load_mesh, run_on_mesh, run_pipeline, InputSource, MeshFormat, PipelineError, RunConfig,
    SkeletonVariant,
};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "neckcut",
    version,
    about = "Find neck cuts on genus-zero triangle meshes"
)]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every mesh in a directory and write one CSV row per model.
    Dataset(DatasetArgs),
}

#[derive(Args, Debug, Clone)]
struct PipelineArgs {
    /// Mesh format override (obj, off, ply); default from the extension.
    #[arg(long)]
    format: Option<String>,
    /// Hop radius for salient point filtering.
    #[arg(long, default_value_t = DEFAULT_R_FILTER)]
    r_filter: usize,
    /// Window size for local maxima along each path.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Threshold tolerance; cuts need tightness at least (1 - epsilon) / 2π.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Vertex the diameter search starts from.
    #[arg(long, default_value_t = 0)]
    seed_vertex: usize,
    #[arg(long, value_enum, default_value_t = SkeletonArg::Greedy)]
    skeleton: SkeletonArg,
    /// Worker threads for the cycle and tightness stages.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Mesh file (OBJ, OFF or ASCII PLY).
    #[arg(long, conflicts_with = "synthetic")]
    input: Option<PathBuf>,
    /// Built-in surface, e.g. `dumbbell:1,0.2,3` or `icosphere:4`.
    #[arg(long)]
    synthetic: Option<String>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Directory for the exported artifacts; without it the cuts are
    /// printed as JSON on stdout.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Artifacts to write into --out-dir (default: json).
    #[arg(long, value_enum, value_delimiter = ',')]
    export: Vec<ExportArg>,
    /// Reference computations to run next to the pipeline.
    #[arg(long, value_enum, value_delimiter = ',')]
    oracle: Vec<OracleArg>,
}

#[derive(Args, Debug)]
struct DatasetArgs {
    /// Directory of mesh files; subdirectories are not searched.
    dir: PathBuf,
    /// CSV output file; stdout if absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SkeletonArg {
    Greedy,
    Prim,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ExportArg {
    Json,
    Obj,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum OracleArg {
    Floodfill,
    Brute,
    Collar,
}

impl From<OracleArg> for OracleKind {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Floodfill => OracleKind::Floodfill,
            OracleArg::Brute => OracleKind::Brute,
            OracleArg::Collar => OracleKind::Collar,
        }
    }
}

impl PipelineArgs {
    fn config(&self) -> Result<RunConfig, PipelineError> {
        let format = self
            .format
            .as_deref()
            .map(|f| {
                f.parse::<MeshFormat>()
                    .map_err(|e| PipelineError::Config(e.to_string()))
            })
            .transpose()?;
        Ok(RunConfig {
            format,
            r_filter: self.r_filter,
            window: self.window,
            epsilon: self.epsilon,
            seed_vertex: self.seed_vertex,
            skeleton: match self.skeleton {
                SkeletonArg::Greedy => SkeletonVariant::Greedy,
                SkeletonArg::Prim => SkeletonVariant::Prim,
            },
            workers: self.workers,
            ..RunConfig::default()
        })
    }
}

#[derive(Serialize)]
struct WithOracle<'a> {
    cuts: CutsDocument<'a>,
    oracle: &'a OracleReport,
}

fn run(args: &RunArgs) -> Result<(), PipelineError> {
    let mut config = args.pipeline.config()?;
    config.input = match (&args.input, &args.synthetic) {
        (Some(p), _) => Some(InputSource::File(p.clone())),
        (None, Some(s)) => Some(InputSource::Synthetic(s.parse::<Synthetic>()?)),
        (None, None) => None,
    };
    config.out_dir = args.out_dir.clone();
    config.exports = if args.export.is_empty() {
        ExportFlags {
            json: true,
            ..Default::default()
        }
    } else {
        ExportFlags {
            json: args.export.contains(&ExportArg::Json),
            obj: args.export.contains(&ExportArg::Obj),
            csv: args.export.contains(&ExportArg::Csv),
        }
    };
    config.check()?;
    let (mesh, out) = run_pipeline(&config)?;
    let label = config
        .input
        .as_ref()
        .map(InputSource::label)
        .unwrap_or_default();

    let kinds: Vec<OracleKind> = args.oracle.iter().map(|&o| o.into()).collect();
    let report = if kinds.is_empty() {
        None
    } else {
        Some(run_oracle_compare(&mesh, &out, &kinds)?)
    };

    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "{} faces, {} salient points, {} cuts, {:.1} ms",
        mesh.face_count(),
        out.salient.len(),
        out.cuts.len(),
        out.timing.total_ms
    );

    let doc = cuts_document(&label, &mesh, &out);
    match &config.out_dir {
        Some(dir) => {
            if let Some(report) = &report {
                let path = dir.join("oracle.json");
                let mut bytes = serde_json::to_vec_pretty(report)
                    .map_err(|e| PipelineError::Internal(e.to_string()))?;
                bytes.push(b'\n');
                fs::write(&path, bytes).map_err(|source| PipelineError::Export {
                    path: path.display().to_string(),
                    source,
                })?;
            }
        }
        None => {
            let text = match &report {
                Some(oracle) => serde_json::to_string_pretty(&WithOracle { cuts: doc, oracle }),
                None => serde_json::to_string_pretty(&doc),
            }
            .map_err(|e| PipelineError::Internal(e.to_string()))?;
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|source| PipelineError::Export {
                path: "<stdout>".into(),
                source,
            })?;
        }
    }
    Ok(())
}

fn is_mesh_file(p: &Path) -> bool {
    p.is_file() && MeshFormat::from_path(p).is_some()
}

/// Returns the number of models that failed.
fn dataset(args: &DatasetArgs) -> anyhow::Result<usize> {
    let config = args.pipeline.config()?;
    config.check()?;
    let mut files: Vec<PathBuf> = fs::read_dir(&args.dir)
        .with_context(|| format!("reading {}", args.dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| is_mesh_file(p))
        .collect();
    files.sort();

    let sink: Box<dyn Write> = match &args.csv {
        Some(p) => {
            Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    let mut failed = 0;
    for path in &files {
        let result = load_mesh(path, config.format)
            .map_err(PipelineError::from)
            .and_then(|mesh| run_on_mesh(&mesh, &config).map(|out| (mesh, out)));
        match result {
            Ok((mesh, out)) => w.write_record(csv_row(&path.display().to_string(), &mesh, &out))?,
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                failed += 1;
            }
        }
    }
    w.flush()?;
    eprintln!("{} models, {} failed", files.len(), failed);
    Ok(failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Some(Command::Dataset(args)) => match dataset(args) {
            Ok(_) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                let code = e
                    .downcast_ref::<PipelineError>()
                    .map_or(1, PipelineError::exit_code);
                ExitCode::from(code as u8)
            }
        },
        None => match run(&cli.run) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
