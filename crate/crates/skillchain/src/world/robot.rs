//! Planar robot: a 3-link arm carrying a two-finger-plus-thumb gripper.
//!
//! Joint layout (7 DOF): arm shoulder/elbow/wrist, then index, middle,
//! thumb proximal, thumb distal. Fingers close toward the hand axis; the
//! thumb closes from the opposite side, giving a pinch grasp in the plane.

use crate::geom::{pose2, vec2, Pose2, Shape, Vec2};
use serde::{Deserialize, Serialize};

pub const ARM_DOF: usize = 3;
pub const FINGER_DOF: usize = 4;
pub const ROBOT_DOF: usize = ARM_DOF + FINGER_DOF;

/// Identifiers for robot collision links.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinkId {
    Arm1,
    Arm2,
    Arm3,
    IndexProx,
    IndexTip,
    MiddleProx,
    MiddleTip,
    ThumbProx,
    ThumbDist,
    ThumbTip,
}

impl LinkId {
    pub const ALL: [LinkId; 10] = [
        LinkId::Arm1,
        LinkId::Arm2,
        LinkId::Arm3,
        LinkId::IndexProx,
        LinkId::IndexTip,
        LinkId::MiddleProx,
        LinkId::MiddleTip,
        LinkId::ThumbProx,
        LinkId::ThumbDist,
        LinkId::ThumbTip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LinkId::Arm1 => "arm1",
            LinkId::Arm2 => "arm2",
            LinkId::Arm3 => "arm3",
            LinkId::IndexProx => "index_prox",
            LinkId::IndexTip => "index_tip",
            LinkId::MiddleProx => "middle_prox",
            LinkId::MiddleTip => "middle_tip",
            LinkId::ThumbProx => "thumb_prox",
            LinkId::ThumbDist => "thumb_dist",
            LinkId::ThumbTip => "thumb_tip",
        }
    }
}

/// Named fingertips exposed to the discriminator language.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Finger {
    Index,
    Middle,
    Thumb,
}

impl Finger {
    pub const ALL: [Finger; 3] = [Finger::Index, Finger::Middle, Finger::Thumb];

    pub fn name(self) -> &'static str {
        match self {
            Finger::Index => "index",
            Finger::Middle => "middle",
            Finger::Thumb => "thumb",
        }
    }

    pub fn tip_link(self) -> LinkId {
        match self {
            Finger::Index => LinkId::IndexTip,
            Finger::Middle => LinkId::MiddleTip,
            Finger::Thumb => LinkId::ThumbTip,
        }
    }

    pub fn from_name(name: &str) -> Option<Finger> {
        Finger::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// Per-joint PD gains and dynamics parameters.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
pub struct JointParams {
    pub kp: f64,
    pub kd: f64,
    pub inertia: f64,
    pub lower: f64,
    pub upper: f64,
    pub max_vel: f64,
}

/// Kinematic and control description of the robot; fixed per task template.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobotSpec {
    pub base: Pose2,
    pub link_lengths: [f64; ARM_DOF],
    pub link_radius: f64,
    /// Finger proximal link lengths: index, middle, thumb proximal, thumb distal.
    pub finger_lengths: [f64; 4],
    pub finger_radius: f64,
    pub tip_radius: f64,
    /// Finger mount points in the hand frame (x forward along the hand axis).
    pub index_mount: Vec2,
    pub middle_mount: Vec2,
    pub thumb_mount: Vec2,
    pub joints: [JointParams; ROBOT_DOF],
    pub friction: f64,
}

impl Default for RobotSpec {
    fn default() -> Self {
        let arm = JointParams {
            kp: 60.0,
            kd: 12.0,
            inertia: 0.6,
            lower: -3.0,
            upper: 3.0,
            max_vel: 2.5,
        };
        let finger = JointParams {
            kp: 18.0,
            kd: 2.2,
            inertia: 0.02,
            lower: -0.4,
            upper: 1.6,
            max_vel: 6.0,
        };
        RobotSpec {
            base: pose2(0.0, 0.45, 0.0),
            link_lengths: [0.30, 0.25, 0.16],
            link_radius: 0.018,
            finger_lengths: [0.065, 0.065, 0.045, 0.045],
            finger_radius: 0.009,
            tip_radius: 0.011,
            index_mount: vec2(0.015, 0.040),
            middle_mount: vec2(-0.020, 0.040),
            thumb_mount: vec2(-0.002, -0.040),
            joints: [arm, arm, arm, finger, finger, finger, finger],
            friction: 1.0,
        }
    }
}

/// Joint-space state plus derived fingertip poses.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobotState {
    pub arm_q: [f64; ARM_DOF],
    pub arm_qd: [f64; ARM_DOF],
    pub finger_q: [f64; FINGER_DOF],
    pub finger_qd: [f64; FINGER_DOF],
    /// Derived: index, middle, thumb tip poses (world frame).
    pub fingertip_poses: [Pose2; 3],
}

impl RobotState {
    pub fn from_joints(spec: &RobotSpec, arm_q: [f64; ARM_DOF], finger_q: [f64; FINGER_DOF]) -> RobotState {
        let mut st = RobotState {
            arm_q,
            arm_qd: [0.0; ARM_DOF],
            finger_q,
            finger_qd: [0.0; FINGER_DOF],
            fingertip_poses: [Pose2::IDENTITY; 3],
        };
        st.fingertip_poses = Kinematics::new(spec, &st).fingertips;
        st
    }

    pub fn q(&self) -> [f64; ROBOT_DOF] {
        let mut out = [0.0; ROBOT_DOF];
        out[..ARM_DOF].copy_from_slice(&self.arm_q);
        out[ARM_DOF..].copy_from_slice(&self.finger_q);
        out
    }

    pub fn qd(&self) -> [f64; ROBOT_DOF] {
        let mut out = [0.0; ROBOT_DOF];
        out[..ARM_DOF].copy_from_slice(&self.arm_qd);
        out[ARM_DOF..].copy_from_slice(&self.finger_qd);
        out
    }

    pub fn set_q(&mut self, q: [f64; ROBOT_DOF]) {
        self.arm_q.copy_from_slice(&q[..ARM_DOF]);
        self.finger_q.copy_from_slice(&q[ARM_DOF..]);
    }

    pub fn set_qd(&mut self, qd: [f64; ROBOT_DOF]) {
        self.arm_qd.copy_from_slice(&qd[..ARM_DOF]);
        self.finger_qd.copy_from_slice(&qd[ARM_DOF..]);
    }

    pub fn is_finite(&self) -> bool {
        self.q().iter().chain(self.qd().iter()).all(|v| v.is_finite())
    }
}

/// Joint position targets; the only control interface the robot exposes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ControlCommand {
    pub targets: [f64; ROBOT_DOF],
}

impl ControlCommand {
    pub fn hold(state: &RobotState) -> ControlCommand {
        ControlCommand { targets: state.q() }
    }
}

/// Forward kinematics snapshot: world poses of every link frame.
#[derive(Clone, Debug)]
pub struct Kinematics {
    pub hand: Pose2,
    pub link_poses: [(LinkId, Pose2); 10],
    /// Tip poses: index, middle, thumb.
    pub fingertips: [Pose2; 3],
}

impl Kinematics {
    pub fn new(spec: &RobotSpec, st: &RobotState) -> Kinematics {
        let [l1, l2, l3] = spec.link_lengths;
        let j1 = spec.base.compose(pose2(0.0, 0.0, st.arm_q[0]));
        let e1 = j1.compose(pose2(l1, 0.0, 0.0));
        let j2 = e1.compose(pose2(0.0, 0.0, st.arm_q[1]));
        let e2 = j2.compose(pose2(l2, 0.0, 0.0));
        let j3 = e2.compose(pose2(0.0, 0.0, st.arm_q[2]));
        let hand = j3.compose(pose2(l3, 0.0, 0.0));

        // Arm capsules span joint -> link end; capsule local x is its axis,
        // so the collision pose sits at the segment midpoint.
        let arm1 = j1.compose(pose2(l1 / 2.0, 0.0, 0.0));
        let arm2 = j2.compose(pose2(l2 / 2.0, 0.0, 0.0));
        let arm3 = j3.compose(pose2(l3 / 2.0, 0.0, 0.0));

        let [fl_index, fl_middle, fl_tprox, fl_tdist] = spec.finger_lengths;

        // Fingers point forward (+x in hand frame) and curl toward the axis.
        // Index and middle rotate by -q (closing toward -y); the thumb by +q.
        let index_base = hand
            .compose(pose2(spec.index_mount.x, spec.index_mount.y, 0.0))
            .compose(pose2(0.0, 0.0, -st.finger_q[0]));
        let index_tip = index_base.compose(pose2(fl_index, 0.0, 0.0));
        let index_prox = index_base.compose(pose2(fl_index / 2.0, 0.0, 0.0));

        let middle_base = hand
            .compose(pose2(spec.middle_mount.x, spec.middle_mount.y, 0.0))
            .compose(pose2(0.0, 0.0, -st.finger_q[1]));
        let middle_tip = middle_base.compose(pose2(fl_middle, 0.0, 0.0));
        let middle_prox = middle_base.compose(pose2(fl_middle / 2.0, 0.0, 0.0));

        let thumb_base = hand
            .compose(pose2(spec.thumb_mount.x, spec.thumb_mount.y, 0.0))
            .compose(pose2(0.0, 0.0, st.finger_q[2]));
        let thumb_elbow = thumb_base.compose(pose2(fl_tprox, 0.0, 0.0));
        let thumb_prox = thumb_base.compose(pose2(fl_tprox / 2.0, 0.0, 0.0));
        let thumb_dist_base = thumb_elbow.compose(pose2(0.0, 0.0, st.finger_q[3]));
        let thumb_tip = thumb_dist_base.compose(pose2(fl_tdist, 0.0, 0.0));
        let thumb_dist = thumb_dist_base.compose(pose2(fl_tdist / 2.0, 0.0, 0.0));

        Kinematics {
            hand,
            link_poses: [
                (LinkId::Arm1, arm1),
                (LinkId::Arm2, arm2),
                (LinkId::Arm3, arm3),
                (LinkId::IndexProx, index_prox),
                (LinkId::IndexTip, index_tip),
                (LinkId::MiddleProx, middle_prox),
                (LinkId::MiddleTip, middle_tip),
                (LinkId::ThumbProx, thumb_prox),
                (LinkId::ThumbDist, thumb_dist),
                (LinkId::ThumbTip, thumb_tip),
            ],
            fingertips: [index_tip, middle_tip, thumb_tip],
        }
    }

    pub fn link_pose(&self, id: LinkId) -> Pose2 {
        self.link_poses
            .iter()
            .find(|(l, _)| *l == id)
            .map(|(_, p)| *p)
            .expect("link id present")
    }

    /// Collision shape for a link, in the link frame returned by `link_pose`.
    pub fn link_shape(spec: &RobotSpec, id: LinkId) -> Shape {
        let cap = |len: f64, r: f64| Shape::capsule(len / 2.0, r);
        match id {
            LinkId::Arm1 => cap(spec.link_lengths[0], spec.link_radius),
            LinkId::Arm2 => cap(spec.link_lengths[1], spec.link_radius),
            LinkId::Arm3 => cap(spec.link_lengths[2], spec.link_radius),
            LinkId::IndexProx => cap(spec.finger_lengths[0], spec.finger_radius),
            LinkId::MiddleProx => cap(spec.finger_lengths[1], spec.finger_radius),
            LinkId::ThumbProx => cap(spec.finger_lengths[2], spec.finger_radius),
            LinkId::ThumbDist => cap(spec.finger_lengths[3], spec.finger_radius),
            LinkId::IndexTip | LinkId::MiddleTip | LinkId::ThumbTip => {
                Shape::circle(spec.tip_radius)
            }
        }
    }

    /// Grip frame: midpoint between index and thumb tips, oriented like the hand.
    pub fn grip_center(&self) -> Vec2 {
        (self.fingertips[0].pos + self.fingertips[2].pos) * 0.5
    }
}

/// Advance joint dynamics one step under PD control toward `cmd` targets.
///
/// `kp_scale`/`kd_scale` come from domain randomization; `limit_offsets`
/// perturb the joint range ends.
pub fn step_joints(
    spec: &RobotSpec,
    st: &mut RobotState,
    cmd: &ControlCommand,
    dt: f64,
    kp_scale: f64,
    kd_scale: f64,
    limit_offsets: (f64, f64),
) {
    let mut q = st.q();
    let mut qd = st.qd();
    for i in 0..ROBOT_DOF {
        let jp = &spec.joints[i];
        let lower = jp.lower + limit_offsets.0;
        let upper = jp.upper + limit_offsets.1;
        let target = cmd.targets[i].clamp(lower, upper);
        let tau = jp.kp * kp_scale * (target - q[i]) - jp.kd * kd_scale * qd[i];
        qd[i] += dt * tau / jp.inertia;
        qd[i] = qd[i].clamp(-jp.max_vel, jp.max_vel);
        q[i] += dt * qd[i];
        if q[i] < lower {
            q[i] = lower;
            qd[i] = qd[i].max(0.0);
        } else if q[i] > upper {
            q[i] = upper;
            qd[i] = qd[i].min(0.0);
        }
    }
    st.set_q(q);
    st.set_qd(qd);
    st.fingertip_poses = Kinematics::new(spec, st).fingertips;
}

/// Analytic 3-link inverse kinematics for a desired hand pose.
///
/// Returns arm joint angles placing the hand frame origin at `target.pos`
/// with orientation `target.theta`, or `None` when out of reach.
pub fn arm_ik(spec: &RobotSpec, target: Pose2, elbow_up: bool) -> Option<[f64; ARM_DOF]> {
    let [l1, l2, l3] = spec.link_lengths;
    // Wrist (joint 3) position backs off along the hand axis.
    let wrist = target.pos - target.rotate(vec2(l3, 0.0));
    let local = spec.base.inv_transform(wrist);
    let d2 = local.norm_sq();
    let d = d2.sqrt();
    if d > l1 + l2 - 1e-9 || d < (l1 - l2).abs() + 1e-9 {
        return None;
    }
    let cos_q2 = ((d2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)).clamp(-1.0, 1.0);
    let q2_mag = cos_q2.acos();
    let q2 = if elbow_up { q2_mag } else { -q2_mag };
    let k1 = l1 + l2 * q2.cos();
    let k2 = l2 * q2.sin();
    let q1 = local.y.atan2(local.x) - k2.atan2(k1);
    let q3 = (target.theta - spec.base.theta) - q1 - q2;
    Some([q1, q2, crate::geom::wrap_angle(q3)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ik_round_trips_through_fk() {
        let spec = RobotSpec::default();
        let target = pose2(0.35, 0.10, -1.2);
        let q = arm_ik(&spec, target, false).expect("reachable");
        let st = RobotState::from_joints(&spec, q, [0.0; 4]);
        let kin = Kinematics::new(&spec, &st);
        assert!((kin.hand.pos - target.pos).norm() < 1e-9);
        assert!(crate::geom::wrap_angle(kin.hand.theta - target.theta).abs() < 1e-9);
    }

    #[test]
    fn ik_rejects_unreachable() {
        let spec = RobotSpec::default();
        assert!(arm_ik(&spec, pose2(5.0, 0.0, 0.0), false).is_none());
    }

    #[test]
    fn fingertips_track_joint_motion() {
        let spec = RobotSpec::default();
        let open = RobotState::from_joints(&spec, [0.0, 0.5, -0.5], [0.0; 4]);
        let closed = RobotState::from_joints(&spec, [0.0, 0.5, -0.5], [1.0, 1.0, 1.0, 0.5]);
        let gap_open = (open.fingertip_poses[0].pos - open.fingertip_poses[2].pos).norm();
        let gap_closed = (closed.fingertip_poses[0].pos - closed.fingertip_poses[2].pos).norm();
        assert!(gap_closed < gap_open);
    }

    #[test]
    fn joint_limits_clamp_position() {
        let spec = RobotSpec::default();
        let mut st = RobotState::from_joints(&spec, [0.0; 3], [0.0; 4]);
        let cmd = ControlCommand { targets: [10.0; ROBOT_DOF] };
        for _ in 0..2000 {
            step_joints(&spec, &mut st, &cmd, 0.01, 1.0, 1.0, (0.0, 0.0));
        }
        for i in 0..ARM_DOF {
            assert!(st.arm_q[i] <= spec.joints[i].upper + 1e-9);
        }
    }
}
