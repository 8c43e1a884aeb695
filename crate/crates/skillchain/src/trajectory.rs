//! Time-indexed trajectory records shared by demonstration collection,
//! segmentation, training, and transition synthesis.

use crate::seglang::FrameContext;
use crate::world::{WorldState, WorldTemplate, ROBOT_DOF};
use serde::{Deserialize, Serialize};

/// Execution stage of a frame: transit motion or one of the K skills.
/// Skills are 1-indexed to match subtask numbering.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stage {
    Transition,
    Skill(usize),
}

impl Stage {
    /// Dense index: transition = 0, skill_i = i.
    pub fn index(self) -> usize {
        match self {
            Stage::Transition => 0,
            Stage::Skill(i) => i,
        }
    }

    pub fn from_index(i: usize) -> Stage {
        if i == 0 {
            Stage::Transition
        } else {
            Stage::Skill(i)
        }
    }

    pub fn label(self) -> String {
        match self {
            Stage::Transition => "transition".into(),
            Stage::Skill(i) => format!("skill_{i}"),
        }
    }
}

/// Where a trajectory came from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajectorySource {
    OracleDemo,
    SimRollout,
    Transition,
}

/// One simulation frame: the world state after the action was applied, the
/// raw joint-target action that produced it, and the tracked keypoints.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Frame {
    pub state: WorldState,
    pub action: [f64; ROBOT_DOF],
    /// Tracked keypoint positions (world frame). Ground truth plus tracking
    /// noise once `track_keypoints` has run.
    pub keypoints: Vec<(String, crate::geom::Vec2)>,
}

impl Frame {
    /// Frame view for discriminator evaluation.
    pub fn context(&self, tpl: &WorldTemplate) -> FrameContext {
        FrameContext {
            keypoints: self.keypoints.clone(),
            contacts: self.state.contacts.clone(),
            objects: tpl
                .objects
                .iter()
                .enumerate()
                .map(|(i, o)| (o.name.clone(), i as u32))
                .collect(),
            contact_force_threshold: tpl.sim.contact_force_threshold,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub task: String,
    pub seed: u64,
    pub source: TrajectorySource,
    pub dt: f64,
}

/// A time-ordered frame sequence with uniform dt.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub meta: TrajectoryMeta,
    pub frames: Vec<Frame>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Check the uniform-dt, strictly-increasing-time invariant.
    pub fn validate_timing(&self) -> Result<(), String> {
        for w in self.frames.windows(2) {
            let dt = w[1].state.time - w[0].state.time;
            if dt <= 0.0 {
                return Err(format!(
                    "timestamps not strictly increasing at t={}",
                    w[0].state.time
                ));
            }
            if (dt - self.meta.dt).abs() > 1e-9 {
                return Err(format!(
                    "non-uniform dt {dt} (expected {}) at t={}",
                    self.meta.dt, w[0].state.time
                ));
            }
        }
        Ok(())
    }
}

/// Populate frame keypoints with exact body-frame anchors transformed by the
/// true poses (the noiseless baseline the tracker perturbs).
pub fn ground_truth_keypoints(state: &WorldState) -> Vec<(String, crate::geom::Vec2)> {
    let mut out = Vec::new();
    for b in &state.bodies {
        for k in &b.keypoint_anchors {
            out.push((k.name.clone(), b.keypoint_world(k)));
        }
    }
    out
}
