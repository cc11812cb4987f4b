//! Neck cuts on genus-zero triangle meshes.
//!
//! A neck cut is a closed loop on the surface whose tightness,
//! `min(area of either side) / length²`, is large. The pipeline picks
//! salient points as local maxima of the graph distance from one end of an
//! approximate diameter, joins them with a tree of shortest paths, grows a
//! lasso around each path vertex, and keeps the locally tightest lassos.
//!
//! ```
//! use neckcut::{run_on_mesh, oracle::synth::Synthetic, RunConfig};
//!
//! let mesh = "dumbbell:1,0.2,3,16".parse::<Synthetic>().unwrap().build().unwrap();
//! let out = run_on_mesh(&mesh, &RunConfig::default()).unwrap();
//! assert_eq!(out.cuts.len(), 1);
//! ```

pub mod cycles;
pub mod export;
pub mod mesh;
pub mod oracle;
pub mod paths;
pub mod pipeline;
pub mod salient;
pub mod skeleton;
pub mod sum;
pub mod tightness;

pub use cycles::{cycles_along_path, lasso_at, Cycle, CycleError, CycleFamily};
pub use mesh::{load_mesh, validate, Mesh, MeshError, MeshFormat, ValidationReport};
pub use paths::{approx_diameter, dijkstra, shortest_path, PathOnMesh, ShortestPathTree};
pub use pipeline::{
    run_on_mesh, run_pipeline, InputSource, PipelineError, PipelineOutput, RunConfig, TimingReport,
};
pub use salient::{candidate_salient, filter_salient, SalientSet};
pub use skeleton::{build_skeleton_greedy, build_skeleton_prim, Skeleton, SkeletonVariant};
pub use tightness::{select_cuts, NeckCut, TightnessRecord};
