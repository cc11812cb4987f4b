//! Reference computations used to check the pipeline: synthetic surfaces
//! with known geometry, direct flood-fill areas, and exhaustive searches on
//! small meshes.

pub mod brute;
pub mod collar;
pub mod floodfill;
pub mod synth;

use serde::Serialize;
use thiserror::Error;

use crate::cycles::CycleError;
use crate::paths::PathError;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("mesh has {vertices} vertices; this oracle accepts at most {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

/// A closed loop with its side areas and tightness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopScore {
    pub vertices: Vec<usize>,
    pub length: f64,
    pub area_min_side: f64,
    pub area_other_side: f64,
    pub tightness: f64,
}
