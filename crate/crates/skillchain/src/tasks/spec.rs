//! Task specification: schema, loading, and validation.

use super::oracle::OraclePrimitive;
use crate::seglang::{
    compile_predicate, CompileError, Discriminator, Expr, Vocabulary,
};
use crate::world::{self, ObsMode, WorldState, WorldTemplate};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TaskError {
    #[error("schema error in '{field}': {reason}")]
    Schema { field: String, reason: String },
    #[error("dsl error in subtask '{subtask}' ({which}): {source}")]
    Dsl {
        subtask: String,
        which: &'static str,
        #[source]
        source: CompileError,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Per-object initial-pose ranges making up the initial state distribution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InitRange {
    pub object: String,
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub theta: [f64; 2],
    /// Reuse another entry's sampled offset instead of sampling (keeps
    /// multi-body fixtures together).
    #[serde(default)]
    pub couple_to: Option<String>,
}

impl InitRange {
    /// Ranges scaled by `factor` around their centers (OOD evaluation).
    pub fn scaled(&self, factor: f64) -> InitRange {
        let scale = |r: [f64; 2]| {
            let c = 0.5 * (r[0] + r[1]);
            let h = 0.5 * (r[1] - r[0]) * factor;
            [c - h, c + h]
        };
        InitRange {
            object: self.object.clone(),
            x: scale(self.x),
            y: scale(self.y),
            theta: scale(self.theta),
            couple_to: self.couple_to.clone(),
        }
    }
}

/// Raw on-disk form of a subtask.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubtaskConfig {
    pub name: String,
    pub point_constraint: String,
    pub contact_constraint: String,
    pub success: String,
    #[serde(default = "default_timeout")]
    pub timeout: usize,
    pub oracle: Vec<OraclePrimitive>,
}

fn default_timeout() -> usize {
    400
}

/// Raw on-disk form of a task.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskConfig {
    pub name: String,
    pub horizon: usize,
    #[serde(default = "default_obs_mode")]
    pub obs_mode: ObsMode,
    pub world: WorldTemplate,
    pub rho0: Vec<InitRange>,
    pub subtasks: Vec<SubtaskConfig>,
}

fn default_obs_mode() -> ObsMode {
    ObsMode::Pose
}

/// A fully resolved subtask: compiled discriminator and success predicate.
#[derive(Clone, Debug)]
pub struct SubtaskSpec {
    pub name: String,
    pub point_src: String,
    pub contact_src: String,
    pub success_src: String,
    pub timeout: usize,
    pub discriminator: Discriminator,
    pub success: Expr,
    pub oracle: Vec<OraclePrimitive>,
}

/// A fully resolved task.
#[derive(Clone, Debug)]
pub struct TaskSpec {
    pub name: String,
    pub horizon: usize,
    pub obs_mode: ObsMode,
    pub world: WorldTemplate,
    pub rho0: Vec<InitRange>,
    pub subtasks: Vec<SubtaskSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemoConfig {
    pub n_demos: usize,
    /// Gaussian jitter added to oracle joint-target actions (rad).
    pub action_jitter: f64,
    /// Gaussian jitter added to oracle waypoints (m).
    pub waypoint_jitter: f64,
    pub seed: u64,
    /// Retries per demo before giving up (fresh seed each retry).
    pub retry_cap: usize,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig {
            n_demos: 15,
            action_jitter: 0.004,
            waypoint_jitter: 0.002,
            seed: 0,
            retry_cap: 20,
        }
    }
}

/// Load and resolve a task from a config file.
pub fn load_task(path: &Path) -> Result<TaskSpec, TaskError> {
    let text = std::fs::read_to_string(path)?;
    load_task_from_str(&text)
}

/// Load and resolve a task from config text (JSON).
pub fn load_task_from_str(text: &str) -> Result<TaskSpec, TaskError> {
    let cfg: TaskConfig = serde_json::from_str(text)?;
    resolve_task(cfg)
}

pub fn resolve_task(cfg: TaskConfig) -> Result<TaskSpec, TaskError> {
    if cfg.subtasks.is_empty() {
        return Err(TaskError::Schema {
            field: "subtasks".into(),
            reason: "subtask list must be nonempty".into(),
        });
    }
    if cfg.horizon == 0 {
        return Err(TaskError::Schema {
            field: "horizon".into(),
            reason: "horizon must be positive".into(),
        });
    }
    for o in &cfg.world.objects {
        o.shape.validate().map_err(|reason| TaskError::Schema {
            field: format!("world.objects.{}.shape", o.name),
            reason,
        })?;
        for k in &o.keypoints {
            if !o.shape.contains_local(k.local, 1e-6) {
                return Err(TaskError::Schema {
                    field: format!("world.objects.{}.keypoints.{}", o.name, k.name),
                    reason: "keypoint anchor must lie on or inside the shape".into(),
                });
            }
        }
    }
    for r in &cfg.rho0 {
        if cfg.world.object_index(&r.object).is_none() {
            return Err(TaskError::Schema {
                field: "rho0".into(),
                reason: format!("unknown object '{}'", r.object),
            });
        }
    }
    cfg.world
        .randomization
        .validate()
        .map_err(|e| TaskError::Schema {
            field: "world.randomization".into(),
            reason: e.to_string(),
        })?;

    let vocab = Vocabulary::with_standard_fingers(
        cfg.world.keypoint_names(),
        cfg.world.objects.iter().map(|o| o.name.clone()).collect(),
    );

    let mut subtasks = Vec::with_capacity(cfg.subtasks.len());
    for (i, sc) in cfg.subtasks.iter().enumerate() {
        let discriminator =
            Discriminator::compile(i + 1, &sc.point_constraint, &sc.contact_constraint, &vocab)
                .map_err(|source| TaskError::Dsl {
                    subtask: sc.name.clone(),
                    which: "discriminator",
                    source,
                })?;
        let success = compile_predicate(&sc.success, &vocab).map_err(|source| TaskError::Dsl {
            subtask: sc.name.clone(),
            which: "success predicate",
            source,
        })?;
        subtasks.push(SubtaskSpec {
            name: sc.name.clone(),
            point_src: sc.point_constraint.clone(),
            contact_src: sc.contact_constraint.clone(),
            success_src: sc.success.clone(),
            timeout: sc.timeout,
            discriminator,
            success,
            oracle: sc.oracle.clone(),
        });
    }

    Ok(TaskSpec {
        name: cfg.name,
        horizon: cfg.horizon,
        obs_mode: cfg.obs_mode,
        world: cfg.world,
        rho0: cfg.rho0,
        subtasks,
    })
}

impl TaskSpec {
    pub fn k(&self) -> usize {
        self.subtasks.len()
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary::with_standard_fingers(
            self.world.keypoint_names(),
            self.world.objects.iter().map(|o| o.name.clone()).collect(),
        )
    }

    /// Sample an initial state: template poses, per-object rho0 perturbation,
    /// penetration projection, and initial-pose capture. Randomization is
    /// applied separately by the caller when training.
    pub fn sample_initial_state<R: Rng>(&self, rng: &mut R, rho0_scale: f64) -> WorldState {
        let mut st = self.world.nominal_state();
        let mut offsets: Vec<(String, crate::geom::Vec2, f64)> = Vec::new();
        for r in &self.rho0 {
            let r = if rho0_scale != 1.0 { r.scaled(rho0_scale) } else { r.clone() };
            let Some(i) = self.world.object_index(&r.object) else {
                continue;
            };
            let nominal = self.world.objects[i].pose;
            if let Some(psrc) = r.couple_to.as_ref().and_then(|src| {
                offsets.iter().find(|(n, _, _)| n == src).map(|(_, d, dth)| (*d, *dth))
            }) {
                st.bodies[i].pose.pos = nominal.pos + psrc.0;
                st.bodies[i].pose.theta = nominal.theta + psrc.1;
                continue;
            }
            let sample_range = |range: [f64; 2], rng: &mut R| {
                if range[0] == range[1] {
                    range[0]
                } else {
                    rng.gen_range(range[0]..range[1])
                }
            };
            let pose = crate::geom::pose2(
                sample_range(r.x, rng),
                sample_range(r.y, rng),
                sample_range(r.theta, rng),
            );
            st.bodies[i].pose = pose;
            offsets.push((
                r.object.clone(),
                pose.pos - nominal.pos,
                pose.theta - nominal.theta,
            ));
        }
        world::project_penetrations(&self.world, &mut st, 16);
        world::settle_attachments(&self.world, &mut st);
        for b in &mut st.bodies {
            b.vel = crate::world::Velocity2::ZERO;
            b.accum_rotation = 0.0;
        }
        st.capture_initial_poses();
        st
    }
}
