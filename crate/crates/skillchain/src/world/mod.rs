//! Deterministic planar rigid-body world with a 3-link arm and a
//! two-finger-plus-thumb gripper.
//!
//! The world steps under PD joint control with gravity, Coulomb friction,
//! and impulse-based contacts (semi-implicit Euler, Baumgarte
//! stabilization). Task mechanisms (compliant grasp, screw channels,
//! breakable attachments) layer kinematic behavior on top. Batch stepping
//! is element-independent, so results never depend on batch layout.

pub mod body;
pub mod contact;
pub mod observe;
pub mod randomization;
pub mod robot;
pub mod step;
pub mod template;

pub use body::{BodyState, KeypointAnchor, Material, Velocity2};
pub use contact::{BodyRef, ContactRecord};
pub use observe::{obs_dim, observe, ObsMode, Observation};
pub use randomization::{
    sample_randomization, ApplyMode, Dist, ParamSpec, RandError, RandomizationSample,
    RandomizationSpec,
};
pub use robot::{
    arm_ik, ControlCommand, Finger, Kinematics, LinkId, RobotSpec, RobotState, ARM_DOF,
    FINGER_DOF, ROBOT_DOF,
};
pub use step::{settle_attachments, step};
pub use template::{
    apply_randomization, GraspParams, MechState, Mechanism, ObjectDef, ObserveParams, SimParams,
    WorldTemplate,
};

use crate::geom::Pose2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("state became non-finite at t={time}")]
    NonFiniteState { time: f64 },
    #[error("unsupported observation mode '{0}' for this task")]
    UnsupportedMode(&'static str),
    #[error("bad input: {0}")]
    BadInput(String),
}

/// Active compliant grasp: the held object and its pose in the hand frame.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraspState {
    pub object: u32,
    pub rel: Pose2,
    pub since: f64,
}

/// Full simulator state. Body order matches the template's object list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorldState {
    pub robot: RobotState,
    pub bodies: Vec<BodyState>,
    pub contacts: Vec<ContactRecord>,
    pub time: f64,
    pub rand: RandomizationSample,
    pub grasp: Option<GraspState>,
    pub mech: Vec<MechState>,
    /// Object poses captured at episode reset; pose-mode observations report
    /// these rather than live poses.
    pub initial_object_poses: Vec<Pose2>,
}

impl WorldState {
    pub fn body<'t>(&self, tpl: &'t WorldTemplate, name: &str) -> Option<&BodyState> {
        tpl.object_index(name).map(|i| &self.bodies[i])
    }

    pub fn body_mut<'t>(&mut self, tpl: &'t WorldTemplate, name: &str) -> Option<&mut BodyState> {
        tpl.object_index(name).map(move |i| &mut self.bodies[i])
    }

    /// World position of a named keypoint, searching all bodies.
    pub fn keypoint(&self, name: &str) -> Option<crate::geom::Vec2> {
        self.bodies.iter().find_map(|b| b.keypoint(name))
    }

    /// Record current object poses as the episode-initial poses.
    pub fn capture_initial_poses(&mut self) {
        self.initial_object_poses = self.bodies.iter().map(|b| b.pose).collect();
    }

    /// Is the named object currently held by the gripper?
    pub fn is_grasped(&self, tpl: &WorldTemplate, name: &str) -> bool {
        match (self.grasp, tpl.object_index(name)) {
            (Some(g), Some(i)) => g.object as usize == i,
            _ => false,
        }
    }

    pub fn hand_pose(&self, tpl: &WorldTemplate) -> Pose2 {
        Kinematics::new(&tpl.robot, &self.robot).hand
    }
}

/// Step every environment independently. Element `i` of the result equals
/// `step(states[i], controls[i], dt)` exactly; failures are collected
/// per element rather than aborting the batch.
pub fn step_batch(
    tpl: &WorldTemplate,
    states: &[WorldState],
    controls: &[ControlCommand],
    dt: f64,
) -> Vec<Result<WorldState, WorldError>> {
    assert_eq!(
        states.len(),
        controls.len(),
        "states and controls must have equal length"
    );
    if states.len() < 16 {
        states
            .iter()
            .zip(controls)
            .map(|(s, c)| step(tpl, s, c, dt))
            .collect()
    } else {
        states
            .par_iter()
            .zip(controls.par_iter())
            .map(|(s, c)| step(tpl, s, c, dt))
            .collect()
    }
}

/// Resolve penetrations among objects by translating dynamic bodies apart
/// (position-only Gauss-Seidel). Robot links are ignored: fingertip squeeze
/// on a held object is legitimate overlap.
pub fn project_penetrations(tpl: &WorldTemplate, state: &mut WorldState, max_passes: usize) {
    let tol = tpl.sim.penetration_tolerance;
    for _ in 0..max_passes {
        let mut worst: f64 = 0.0;
        let n = state.bodies.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let (si, sj) = (state.bodies[i].is_static, state.bodies[j].is_static);
                if si && sj {
                    continue;
                }
                let (a, b) = (&state.bodies[i], &state.bodies[j]);
                let Some(m) = crate::geom::contact(&a.shape, a.pose, &b.shape, b.pose, 0.0) else {
                    continue;
                };
                let depth = m
                    .points
                    .iter()
                    .map(|p| p.depth)
                    .fold(f64::NEG_INFINITY, f64::max);
                if depth <= tol * 0.5 {
                    continue;
                }
                worst = worst.max(depth);
                let push = m.normal * (depth - tol * 0.25);
                match (si, sj) {
                    (false, false) => {
                        state.bodies[i].pose.pos -= push * 0.5;
                        state.bodies[j].pose.pos += push * 0.5;
                    }
                    (true, false) => state.bodies[j].pose.pos += push,
                    (false, true) => state.bodies[i].pose.pos -= push,
                    (true, true) => unreachable!(),
                }
            }
        }
        if worst <= tol {
            break;
        }
    }
}

/// Maximum object-object or object-static penetration depth in the state.
pub fn max_penetration(tpl: &WorldTemplate, state: &WorldState) -> f64 {
    let _ = tpl;
    let n = state.bodies.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&state.bodies[i], &state.bodies[j]);
            if a.is_static && b.is_static {
                continue;
            }
            if let Some(m) = crate::geom::contact(&a.shape, a.pose, &b.shape, b.pose, 0.0) {
                for p in &m.points {
                    worst = worst.max(p.depth);
                }
            }
        }
    }
    worst
}
