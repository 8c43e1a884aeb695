//! Scripted oracle demonstrators: closed-loop waypoint programs that stand in
//! for human teleoperation. Each subtask carries a primitive list; targets
//! are re-evaluated from live keypoints every frame, so programs tolerate
//! initial-state variation.

use super::spec::{DemoConfig, TaskSpec};
use super::subtask_success;
use crate::geom::{vec2, Pose2, Vec2};
use crate::trajectory::{
    ground_truth_keypoints, Frame, Stage, Trajectory, TrajectoryMeta, TrajectorySource,
};
use crate::world::{arm_ik, step, ControlCommand, Kinematics, WorldState, ARM_DOF, ROBOT_DOF};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleFailure {
    #[error("oracle failed on task '{task}' after {attempts} attempts: {reason}")]
    RetriesExhausted {
        task: String,
        attempts: usize,
        reason: String,
    },
}

/// Target reference for a motion primitive.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Anchor {
    /// A live keypoint, re-read every frame.
    Keypoint { name: String },
    /// Fixed world coordinates.
    Absolute { point: [f64; 2] },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OraclePrimitive {
    /// Drive the grip point to `anchor + offset` with hand orientation
    /// `orient`, rate-limited in joint space.
    MoveGrip {
        anchor: Anchor,
        #[serde(default)]
        offset: [f64; 2],
        orient: f64,
        #[serde(default = "default_tol")]
        tol: f64,
        #[serde(default = "default_move_frames")]
        max_frames: usize,
    },
    /// Interpolate finger joint targets to a posture over `frames`.
    Fingers { targets: [f64; 4], frames: usize },
    /// Close the fingers toward a pinch posture until a grasp engages.
    CloseUntilGrasp {
        targets: [f64; 4],
        #[serde(default = "default_move_frames")]
        max_frames: usize,
    },
    /// Open to the release posture until any grasp disengages, plus a
    /// settling margin.
    Open {
        #[serde(default = "default_open_frames")]
        frames: usize,
    },
    /// Rotate the wrist target by `delta` over `frames`.
    TurnWrist { delta: f64, frames: usize },
    /// Regrasp-and-turn cycles until the current subtask succeeds: turn the
    /// wrist by `turn`, release, counter-rotate, regrasp, repeat.
    ScrewCycles {
        turn: f64,
        grasp_targets: [f64; 4],
        max_cycles: usize,
    },
    /// Best-effort move toward a grip target for a fixed number of frames
    /// (no convergence requirement; used to press against constraints).
    Push {
        anchor: Anchor,
        #[serde(default)]
        offset: [f64; 2],
        orient: f64,
        frames: usize,
    },
    /// Like `Push`, but drives a followed keypoint onto the anchor instead of
    /// the grip point, cancelling in-hand pose offsets.
    AlignedPush {
        follow: String,
        anchor: Anchor,
        #[serde(default)]
        offset: [f64; 2],
        orient: f64,
        frames: usize,
    },
    /// Hold current targets for a fixed number of frames.
    Wait { frames: usize },
    /// Hold current targets until the current subtask's success predicate
    /// fires (closed-loop safety net for settle-dependent stages).
    UntilSuccess { max_frames: usize },
}

fn default_tol() -> f64 {
    0.006
}
fn default_move_frames() -> usize {
    400
}
fn default_open_frames() -> usize {
    30
}

/// Finger posture considered "open" for release and approach.
pub const OPEN_FINGERS: [f64; 4] = [-0.05, -0.05, 0.0, 0.05];

/// Joint-space rate limits per frame (rad): arm, fingers.
const ARM_RATE: f64 = 0.02;
const FINGER_RATE: f64 = 0.035;

struct Runner<'a> {
    task: &'a TaskSpec,
    state: WorldState,
    arm_targets: [f64; ARM_DOF],
    finger_targets: [f64; 4],
    frames: Vec<Frame>,
    action_noise: Option<Normal<f64>>,
    waypoint_noise: Option<Normal<f64>>,
    trace: Option<Vec<String>>,
}

enum StepOutcome {
    Ok,
    Blownup,
}

impl<'a> Runner<'a> {
    fn new(task: &'a TaskSpec, state: WorldState, cfg: &DemoConfig) -> Runner<'a> {
        let arm_targets = state.robot.arm_q;
        Runner {
            task,
            state,
            arm_targets,
            finger_targets: OPEN_FINGERS,
            frames: Vec::with_capacity(task.horizon),
            action_noise: (cfg.action_jitter > 0.0)
                .then(|| Normal::new(0.0, cfg.action_jitter).unwrap()),
            waypoint_noise: (cfg.waypoint_jitter > 0.0)
                .then(|| Normal::new(0.0, cfg.waypoint_jitter).unwrap()),
            trace: None,
        }
    }

    fn note(&mut self, what: &str) {
        if self.trace.is_none() {
            return;
        }
        let grip = self.grip_world();
        let kin = self.kin();
        let mut line = format!(
            "[{:>5}] {what}: grip=({:.4},{:.4}) hand_th={:.3} q={:.2?} grasp={:?}",
            self.frames.len(),
            grip.x,
            grip.y,
            kin.hand.theta,
            self.state.robot.arm_q,
            self.state.grasp.map(|g| g.object)
        );
        for b in self.state.bodies.iter().filter(|b| !b.is_static) {
            line.push_str(&format!(
                " | body ({:.4},{:.4},{:.3})",
                b.pose.pos.x, b.pose.pos.y, b.pose.theta
            ));
        }
        line.push_str(&format!(" mech={:?}", self.state.mech));
        if let Some(t) = self.trace.as_mut() {
            t.push(line);
        }
    }

    fn kin(&self) -> Kinematics {
        Kinematics::new(&self.task.world.robot, &self.state.robot)
    }

    fn grip_world(&self) -> Vec2 {
        let kin = self.kin();
        kin.hand.transform(grip_offset(&self.task.world.robot))
    }

    fn step_once<R: Rng>(&mut self, rng: &mut R) -> StepOutcome {
        let mut targets = [0.0; ROBOT_DOF];
        targets[..ARM_DOF].copy_from_slice(&self.arm_targets);
        targets[ARM_DOF..].copy_from_slice(&self.finger_targets);
        if let Some(n) = self.action_noise {
            for t in targets.iter_mut() {
                *t += n.sample(rng);
            }
        }
        let cmd = ControlCommand { targets };
        match step(&self.task.world, &self.state, &cmd, self.task.world.sim.dt) {
            Ok(next) => {
                self.state = next;
                self.frames.push(Frame {
                    state: self.state.clone(),
                    action: cmd.targets,
                    keypoints: ground_truth_keypoints(&self.state),
                });
                StepOutcome::Ok
            }
            Err(_) => StepOutcome::Blownup,
        }
    }

    fn over_horizon(&self) -> bool {
        self.frames.len() >= self.task.horizon
    }

    fn anchor_point(&self, anchor: &Anchor) -> Option<Vec2> {
        match anchor {
            Anchor::Keypoint { name } => self.state.keypoint(name),
            Anchor::Absolute { point } => Some(vec2(point[0], point[1])),
        }
    }

    fn run_primitive<R: Rng>(
        &mut self,
        prim: &OraclePrimitive,
        subtask: usize,
        rng: &mut R,
    ) -> Result<(), String> {
        match prim {
            OraclePrimitive::MoveGrip {
                anchor,
                offset,
                orient,
                tol,
                max_frames,
            } => {
                let jitter = self
                    .waypoint_noise
                    .map(|n| vec2(n.sample(rng), n.sample(rng)))
                    .unwrap_or(Vec2::ZERO);
                for _ in 0..*max_frames {
                    if self.over_horizon() {
                        return Err("horizon exceeded".into());
                    }
                    let Some(base) = self.anchor_point(anchor) else {
                        return Err("anchor keypoint missing".into());
                    };
                    let target = base + vec2(offset[0], offset[1]) + jitter;
                    let go = grip_offset(&self.task.world.robot);
                    let hand_target = Pose2 {
                        pos: target - Pose2 { pos: Vec2::ZERO, theta: *orient }.rotate(go),
                        theta: *orient,
                    };
                    let Some(q_goal) = arm_ik(&self.task.world.robot, hand_target, true) else {
                        return Err(format!("ik unreachable for target {target:?}"));
                    };
                    for i in 0..ARM_DOF {
                        let d = (q_goal[i] - self.arm_targets[i]).clamp(-ARM_RATE, ARM_RATE);
                        self.arm_targets[i] += d;
                    }
                    if let StepOutcome::Blownup = self.step_once(rng) {
                        return Err("simulation diverged".into());
                    }
                    let err = (self.grip_world() - target).norm();
                    let rot_err =
                        crate::geom::wrap_angle(self.kin().hand.theta - *orient).abs();
                    let settled = self
                        .state
                        .robot
                        .arm_qd
                        .iter()
                        .all(|v| v.abs() < 0.5);
                    if err <= *tol && rot_err <= 0.03 && settled {
                        return Ok(());
                    }
                }
                Err("move did not converge".into())
            }
            OraclePrimitive::Fingers { targets, frames } => {
                let start = self.finger_targets;
                for f in 0..*frames {
                    if self.over_horizon() {
                        return Err("horizon exceeded".into());
                    }
                    let t = (f + 1) as f64 / *frames as f64;
                    for i in 0..4 {
                        self.finger_targets[i] = start[i] + (targets[i] - start[i]) * t;
                    }
                    if let StepOutcome::Blownup = self.step_once(rng) {
                        return Err("simulation diverged".into());
                    }
                }
                Ok(())
            }
            OraclePrimitive::CloseUntilGrasp { targets, max_frames } => {
                for _ in 0..*max_frames {
                    if self.over_horizon() {
                        return Err("horizon exceeded".into());
                    }
                    for i in 0..4 {
                        let d = (targets[i] - self.finger_targets[i])
                            .clamp(-FINGER_RATE, FINGER_RATE);
                        self.finger_targets[i] += d;
                    }
                    if let StepOutcome::Blownup = self.step_once(rng) {
                        return Err("simulation diverged".into());
                    }
                    if self.state.grasp.is_some() {
                        return Ok(());
                    }
                }
                Err("grasp did not engage".into())
            }
            OraclePrimitive::Open { frames } => {
                let mut settled = 0;
                let cap = frames + 300;
                for _ in 0..cap {
                    if self.over_horizon() {
                        return Err("horizon exceeded".into());
                    }
                    for i in 0..4 {
                        let d = (OPEN_FINGERS[i] - self.finger_targets[i])
                            .clamp(-FINGER_RATE, FINGER_RATE);
                        self.finger_targets[i] += d;
                    }
                    if let StepOutcome::Blownup = self.step_once(rng) {
                        return Err("simulation diverged".into());
                    }
                    if self.state.grasp.is_none() {
                        settled += 1;
                        if settled >= *frames {
                            return Ok(());
                        }
                    }
                }
                Err("release did not settle".into())
            }
            OraclePrimitive::TurnWrist { delta, frames } => {
                let per = delta / *frames as f64;
                for _ in 0..*frames {
                    if self.over_horizon() {
                        return Err("horizon exceeded".into());
                    }
                    self.arm_targets[2] += per;
                    if let StepOutcome::Blownup = self.step_once(rng) {
                        return Err("simulation diverged".into());
                    }
                }
                Ok(())
            }
            OraclePrimitive::ScrewCycles {
                turn,
                grasp_targets,
                max_cycles,
            } => {
                let per = 0.012 * turn.signum();
                let frames = (turn.abs() / 0.012).ceil() as usize;
                for _cycle in 0..*max_cycles {
                    // Turn with a per-frame success check, then restore the
                    // wrist so the held object ends where the swing started.
                    let mut swept = 0.0;
                    let mut done = false;
                    for _ in 0..frames {
                        if self.over_horizon() {
                            return Err("horizon exceeded".into());
                        }
                        self.arm_targets[2] += per;
                        swept += per;
                        if let StepOutcome::Blownup = self.step_once(rng) {
                            return Err("simulation diverged".into());
                        }
                        if subtask_success(self.task, subtask, &self.state) {
                            done = true;
                            break;
                        }
                    }
                    if done {
                        return Ok(());
                    }
                    self.run_primitive(&OraclePrimitive::Open { frames: 12 }, subtask, rng)?;
                    self.run_primitive(
                        &OraclePrimitive::TurnWrist { delta: -swept, frames },
                        subtask,
                        rng,
                    )?;
                    self.run_primitive(
                        &OraclePrimitive::CloseUntilGrasp {
                            targets: *grasp_targets,
                            max_frames: 200,
                        },
                        subtask,
                        rng,
                    )?;
                }
                Err("screw cycles exhausted".into())
            }
            OraclePrimitive::Push { anchor, offset, orient, frames } => {
                for _ in 0..*frames {
                    if self.over_horizon() {
                        return Err("horizon exceeded".into());
                    }
                    // Presses drive against constraints; stop once the stage
                    // goal is met so they cannot over-drive.
                    if subtask_success(self.task, subtask, &self.state) {
                        return Ok(());
                    }
                    let Some(base) = self.anchor_point(anchor) else {
                        return Err("anchor keypoint missing".into());
                    };
                    let target = base + vec2(offset[0], offset[1]);
                    let go = grip_offset(&self.task.world.robot);
                    let hand_target = Pose2 {
                        pos: target - Pose2 { pos: Vec2::ZERO, theta: *orient }.rotate(go),
                        theta: *orient,
                    };
                    if let Some(q_goal) = arm_ik(&self.task.world.robot, hand_target, true) {
                        for i in 0..ARM_DOF {
                            let d = (q_goal[i] - self.arm_targets[i]).clamp(-ARM_RATE, ARM_RATE);
                            self.arm_targets[i] += d;
                        }
                    }
                    if let StepOutcome::Blownup = self.step_once(rng) {
                        return Err("simulation diverged".into());
                    }
                }
                Ok(())
            }
            OraclePrimitive::AlignedPush {
                follow,
                anchor,
                offset,
                orient,
                frames,
            } => {
                for _ in 0..*frames {
                    if self.over_horizon() {
                        return Err("horizon exceeded".into());
                    }
                    if subtask_success(self.task, subtask, &self.state) {
                        return Ok(());
                    }
                    let Some(base) = self.anchor_point(anchor) else {
                        return Err("anchor keypoint missing".into());
                    };
                    let Some(follow_pt) = self.state.keypoint(follow) else {
                        return Err("follow keypoint missing".into());
                    };
                    // Grip target that places the followed point on the anchor.
                    let target = base + vec2(offset[0], offset[1]) + (self.grip_world() - follow_pt);
                    let go = grip_offset(&self.task.world.robot);
                    let hand_target = Pose2 {
                        pos: target - Pose2 { pos: Vec2::ZERO, theta: *orient }.rotate(go),
                        theta: *orient,
                    };
                    if let Some(q_goal) = arm_ik(&self.task.world.robot, hand_target, true) {
                        for i in 0..ARM_DOF {
                            let d = (q_goal[i] - self.arm_targets[i]).clamp(-ARM_RATE, ARM_RATE);
                            self.arm_targets[i] += d;
                        }
                    }
                    if let StepOutcome::Blownup = self.step_once(rng) {
                        return Err("simulation diverged".into());
                    }
                }
                Ok(())
            }
            OraclePrimitive::Wait { frames } => {
                for _ in 0..*frames {
                    if self.over_horizon() {
                        return Err("horizon exceeded".into());
                    }
                    if let StepOutcome::Blownup = self.step_once(rng) {
                        return Err("simulation diverged".into());
                    }
                }
                Ok(())
            }
            OraclePrimitive::UntilSuccess { max_frames } => {
                for _ in 0..*max_frames {
                    if subtask_success(self.task, subtask, &self.state) {
                        return Ok(());
                    }
                    if self.over_horizon() {
                        return Err("horizon exceeded".into());
                    }
                    if let StepOutcome::Blownup = self.step_once(rng) {
                        return Err("simulation diverged".into());
                    }
                }
                Err("success predicate never fired".into())
            }
        }
    }
}

/// Grip reference point in the hand frame: where a pinched object's center
/// sits. Derived from the digit geometry.
pub fn grip_offset(robot: &crate::world::RobotSpec) -> Vec2 {
    let _ = robot;
    vec2(0.0826, 0.0027)
}

/// Run one full demonstration attempt from a sampled initial state.
fn attempt(task: &TaskSpec, cfg: &DemoConfig, seed: u64) -> Result<Trajectory, String> {
    attempt_traced(task, cfg, seed, false).0
}

fn attempt_traced(
    task: &TaskSpec,
    cfg: &DemoConfig,
    seed: u64,
    traced: bool,
) -> (Result<Trajectory, String>, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = task.sample_initial_state(&mut rng, 1.0);
    let mut runner = Runner::new(task, init, cfg);
    if traced {
        runner.trace = Some(Vec::new());
    }
    let result = run_all(task, &mut runner, &mut rng);
    let trace = runner.trace.take().unwrap_or_default();
    match result {
        Ok(()) => (
            Ok(Trajectory {
                meta: TrajectoryMeta {
                    task: task.name.clone(),
                    seed,
                    source: TrajectorySource::OracleDemo,
                    dt: task.world.sim.dt,
                },
                frames: runner.frames,
            }),
            trace,
        ),
        Err(e) => (Err(e), trace),
    }
}

fn run_all<R: Rng>(task: &TaskSpec, runner: &mut Runner, rng: &mut R) -> Result<(), String> {
    for (si, sub) in task.subtasks.iter().enumerate() {
        runner.note(&format!("start subtask '{}'", sub.name));
        for (pi, prim) in sub.oracle.iter().enumerate() {
            runner
                .run_primitive(prim, si + 1, rng)
                .map_err(|e| format!("subtask '{}': {e}", sub.name))?;
            runner.note(&format!("done '{}' prim {}", sub.name, pi));
        }
        if !subtask_success(task, si + 1, &runner.state) {
            return Err(format!(
                "subtask '{}' predicate false after its program",
                sub.name
            ));
        }
    }
    Ok(())
}

/// Traced single attempt for calibration tooling.
#[doc(hidden)]
pub fn debug_demo(
    task: &TaskSpec,
    cfg: &DemoConfig,
    seed: u64,
) -> (Result<Trajectory, String>, Vec<String>) {
    attempt_traced(task, cfg, seed, true)
}

use rand::SeedableRng;

/// Generate one demonstration, retrying with fresh seeds up to the cap.
/// Every returned trajectory completes all subtasks.
pub fn scripted_demo(
    task: &TaskSpec,
    cfg: &DemoConfig,
    seed: u64,
) -> Result<Trajectory, OracleFailure> {
    let mut last_err = String::new();
    for retry in 0..cfg.retry_cap.max(1) {
        let attempt_seed = seed
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(retry as u64);
        match attempt(task, cfg, attempt_seed) {
            Ok(t) => return Ok(t),
            Err(e) => last_err = e,
        }
    }
    Err(OracleFailure::RetriesExhausted {
        task: task.name.clone(),
        attempts: cfg.retry_cap.max(1),
        reason: last_err,
    })
}

/// A batch of demos plus their ground-truth stage labels (kept apart from the
/// trajectories: the learning pipeline never reads them).
pub struct DemoBatch {
    pub trajectories: Vec<Trajectory>,
    pub ground_truth: Vec<Vec<Stage>>,
}

/// Generate `cfg.n_demos` demonstrations with consecutive seeds.
pub fn demo_batch(task: &TaskSpec, cfg: &DemoConfig) -> Result<DemoBatch, OracleFailure> {
    let mut trajectories = Vec::with_capacity(cfg.n_demos);
    let mut ground_truth = Vec::with_capacity(cfg.n_demos);
    for d in 0..cfg.n_demos {
        let traj = scripted_demo(task, cfg, cfg.seed.wrapping_add(d as u64))?;
        ground_truth.push(ground_truth_labels(task, &traj));
        trajectories.push(traj);
    }
    Ok(DemoBatch {
        trajectories,
        ground_truth,
    })
}

/// Ideal per-frame stage labels: each skill's discriminator evaluated on
/// noiseless keypoints with immediate (debounce-free) activation and monotone
/// skill ordering. Evaluation-only reference data.
pub fn ground_truth_labels(task: &TaskSpec, traj: &Trajectory) -> Vec<Stage> {
    let tpl = &task.world;
    let mut labels = Vec::with_capacity(traj.len());
    let mut active: Option<usize> = None; // 1-based skill
    let mut completed = 0usize;
    for frame in &traj.frames {
        let mut ctx = frame.context(tpl);
        ctx.keypoints = ground_truth_keypoints(&frame.state);
        let fire = |i: usize| -> bool {
            task.subtasks[i - 1]
                .discriminator
                .eval(&ctx)
                .unwrap_or(false)
        };
        match active {
            Some(i) => {
                if fire(i) {
                    labels.push(Stage::Skill(i));
                } else {
                    completed = i;
                    active = None;
                    labels.push(Stage::Transition);
                }
            }
            None => {
                let next = completed + 1;
                if next <= task.k() && fire(next) {
                    active = Some(next);
                    labels.push(Stage::Skill(next));
                } else {
                    labels.push(Stage::Transition);
                }
            }
        }
    }
    labels
}

/// Stable hash of the oracle-relevant demo configuration, recorded in demo
/// manifests.
pub fn oracle_config_hash(task: &TaskSpec, cfg: &DemoConfig) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(task.name.as_bytes());
    h.update(serde_json::to_string(cfg).unwrap_or_default().as_bytes());
    for s in &task.subtasks {
        h.update(serde_json::to_string(&s.oracle).unwrap_or_default().as_bytes());
    }
    format!("{:x}", h.finalize())[..16].to_string()
}
