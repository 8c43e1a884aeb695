//! World templates: the immutable description a task instantiates states from.

use super::body::{BodyState, KeypointAnchor, Material};
use super::randomization::{RandomizationSample, RandomizationSpec};
use super::robot::{RobotSpec, RobotState, ARM_DOF, FINGER_DOF};
use crate::geom::{Pose2, Shape, Vec2};
use serde::{Deserialize, Serialize};

/// Fixed description of one body in the scene.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObjectDef {
    pub name: String,
    pub shape: Shape,
    #[serde(default = "default_density")]
    pub density: f64,
    #[serde(default)]
    pub material: Material,
    pub pose: Pose2,
    #[serde(default)]
    pub is_static: bool,
    /// Whether this body appears in policy observations.
    #[serde(default)]
    pub observed: bool,
    #[serde(default)]
    pub keypoints: Vec<KeypointAnchor>,
}

fn default_density() -> f64 {
    300.0
}

/// Integrator and solver settings.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
pub struct SimParams {
    pub dt: f64,
    pub solver_iterations: usize,
    /// Guaranteed maximum resting penetration.
    pub penetration_tolerance: f64,
    pub baumgarte: f64,
    /// Force above which a contact counts as "in contact" for discriminators.
    pub contact_force_threshold: f64,
    pub restitution_threshold: f64,
    pub gravity: Vec2,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            dt: 0.01,
            solver_iterations: 4,
            penetration_tolerance: 1e-3,
            baumgarte: 0.2,
            contact_force_threshold: 0.1,
            restitution_threshold: 0.2,
            gravity: Vec2 { x: 0.0, y: -9.81 },
        }
    }
}

/// Compliant-grasp coupling between the hand and a pinched object.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
pub struct GraspParams {
    /// Positional stiffness, in 1/s^2 (force = mass * kp * error).
    pub kp: f64,
    pub kd: f64,
    pub kp_rot: f64,
    pub kd_rot: f64,
    /// Acceleration cap for the grasp wrench.
    pub max_accel: f64,
    pub max_rot_accel: f64,
    /// Tip separation above which an engaged grasp releases.
    pub release_gap: f64,
    /// Minimum contact force for a fingertip to count toward engagement.
    pub engage_force: f64,
}

impl Default for GraspParams {
    fn default() -> Self {
        GraspParams {
            kp: 900.0,
            kd: 60.0,
            kp_rot: 900.0,
            kd_rot: 60.0,
            max_accel: 80.0,
            max_rot_accel: 400.0,
            release_gap: 0.070,
            engage_force: 0.05,
        }
    }
}

/// Kinematic task mechanisms layered on top of rigid-body dynamics.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mechanism {
    /// A threaded channel on `base`: once `object`'s tip keypoint enters the
    /// mouth, the object is held on the channel axis and rotation advances it
    /// by `pitch` meters per radian (ratcheting; it cannot back out).
    ScrewChannel {
        object: String,
        tip_keypoint: String,
        base: String,
        /// Channel mouth center in the base body frame.
        mouth_local: Vec2,
        /// Unit direction into the channel, base frame.
        axis_local: Vec2,
        pitch: f64,
        max_depth: f64,
        capture_radius: f64,
        capture_depth: f64,
        /// Max angle between the object's tip axis and the channel axis at capture.
        align_tol: f64,
        /// Sign of rotation that advances the thread (-1 = clockwise).
        screw_sign: f64,
    },
    /// `child` rides welded to `parent` until the contact force on the child
    /// exceeds `break_force`, at which point it detaches and becomes dynamic.
    /// With `attach_radius` set, a detached (and never-broken) child snaps on
    /// when the parent's anchor keypoint comes within that radius; breaking
    /// is one-shot — a broken attachment never re-engages.
    Attachment {
        parent: String,
        child: String,
        rel: Pose2,
        break_force: f64,
        #[serde(default = "default_true")]
        initially_attached: bool,
        #[serde(default)]
        attach_radius: Option<f64>,
        /// Keypoint on the parent used for the proximity test and snap pose.
        #[serde(default)]
        parent_anchor: Option<String>,
    },
}

fn default_true() -> bool {
    true
}

/// Runtime state for one mechanism (parallel to `WorldTemplate::mechanisms`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MechState {
    Screw {
        engaged: bool,
        /// Object accum_rotation (relative to base) at engagement.
        theta_ref: f64,
        depth: f64,
    },
    Attach {
        attached: bool,
        /// Set when the attachment has been broken; it never re-engages.
        spent: bool,
        /// Relative pose captured at (re-)attachment.
        rel: Pose2,
    },
}

/// Observation-generation settings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObserveParams {
    pub n_points: usize,
    /// Per-point Gaussian noise sigma for point-set observations.
    pub point_noise: f64,
    /// Probability a point is replaced by large "flying" noise.
    pub p_fly: f64,
    pub fly_sigma: f64,
    /// Workspace bounds (min, max) used for point checks and fly support.
    pub workspace_min: Vec2,
    pub workspace_max: Vec2,
}

impl Default for ObserveParams {
    fn default() -> Self {
        ObserveParams {
            n_points: 256,
            point_noise: 0.002,
            p_fly: 0.005,
            fly_sigma: 0.5,
            workspace_min: Vec2 { x: -0.2, y: -0.1 },
            workspace_max: Vec2 { x: 1.0, y: 0.9 },
        }
    }
}

/// Everything fixed about a scene: robot, bodies, mechanisms, physics, and
/// randomization ranges. `WorldState`s are instantiated from this.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorldTemplate {
    pub robot: RobotSpec,
    pub objects: Vec<ObjectDef>,
    pub sim: SimParams,
    pub grasp: GraspParams,
    #[serde(default)]
    pub mechanisms: Vec<Mechanism>,
    pub home_arm_q: [f64; ARM_DOF],
    pub home_finger_q: [f64; FINGER_DOF],
    pub randomization: RandomizationSpec,
    pub observe: ObserveParams,
}

impl WorldTemplate {
    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.name == name)
    }

    pub fn object_name(&self, index: usize) -> &str {
        &self.objects[index].name
    }

    pub fn observed_indices(&self) -> Vec<usize> {
        self.objects
            .iter()
            .enumerate()
            .filter(|(_, o)| o.observed)
            .map(|(i, _)| i)
            .collect()
    }

    /// All keypoint names across objects, in template order.
    pub fn keypoint_names(&self) -> Vec<String> {
        self.objects
            .iter()
            .flat_map(|o| o.keypoints.iter().map(|k| k.name.clone()))
            .collect()
    }

    /// Build the nominal (un-randomized) state with bodies at template poses.
    pub fn nominal_state(&self) -> super::WorldState {
        let bodies = self
            .objects
            .iter()
            .map(|def| {
                let mut b = if def.is_static {
                    BodyState::new_static(def.shape.clone(), def.pose)
                } else {
                    BodyState::new_dynamic(def.shape.clone(), def.density, def.pose)
                };
                b.material = def.material;
                b.keypoint_anchors = def.keypoints.clone();
                b
            })
            .collect::<Vec<_>>();
        let robot = RobotState::from_joints(&self.robot, self.home_arm_q, self.home_finger_q);
        let mech = self
            .mechanisms
            .iter()
            .map(|m| match m {
                Mechanism::ScrewChannel { .. } => MechState::Screw {
                    engaged: false,
                    theta_ref: 0.0,
                    depth: 0.0,
                },
                Mechanism::Attachment { rel, initially_attached, .. } => MechState::Attach {
                    attached: *initially_attached,
                    spent: false,
                    rel: *rel,
                },
            })
            .collect();
        let initial_object_poses = bodies.iter().map(|b| b.pose).collect();
        super::WorldState {
            robot,
            bodies,
            contacts: Vec::new(),
            time: 0.0,
            rand: RandomizationSample::identity(),
            grasp: None,
            mech,
            initial_object_poses,
        }
    }
}

/// Multiply nominal quantities in `template_state` by the sampled scaling
/// parameters and record the sample for observe/step-time noise.
pub fn apply_randomization(
    template_state: &super::WorldState,
    sample: &RandomizationSample,
) -> super::WorldState {
    let mut st = template_state.clone();
    let mass_scale = sample.scale("object_mass");
    let fric_scale = sample.scale("object_static_friction");
    let rest_scale = sample.scale("restitution");
    for b in &mut st.bodies {
        if !b.is_static {
            b.mass *= mass_scale;
            b.inertia *= mass_scale;
        }
        b.material.friction *= fric_scale;
        b.material.restitution *= rest_scale;
    }
    st.rand = sample.clone();
    st
}
