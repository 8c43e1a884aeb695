//! Trajectory log formats and run manifests.
//!
//! Two interchangeable trajectory encodings:
//! - line-delimited JSON (one frame per line) for inspection and tooling;
//! - a binary columnar layout for training throughput: a header listing
//!   field names, per-field dims, and the frame count, followed by one
//!   little-endian f32 block per field (frame-major within the block).

pub mod columnar;
pub mod jsonl;

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("format: {0}")]
    Format(String),
}

/// Manifest describing a batch of demonstration trajectories.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemoManifest {
    pub task: String,
    pub oracle_config_hash: String,
    pub entries: Vec<DemoEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemoEntry {
    pub path: PathBuf,
    pub seed: u64,
    pub frames: usize,
}

impl DemoManifest {
    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<DemoManifest, IoError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Manifest written next to segmentation outputs so stale artifacts are
/// detected when discriminator sources change.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SegmentationManifest {
    pub task: String,
    /// Per-skill discriminator content hashes, in skill order.
    pub discriminator_hashes: Vec<String>,
    pub demo_count: usize,
}

impl SegmentationManifest {
    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<SegmentationManifest, IoError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
