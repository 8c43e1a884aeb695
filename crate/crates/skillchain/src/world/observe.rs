//! Observation extraction in the three policy-facing modes.
//!
//! Layouts are fixed and documented per mode; dimensions are a pure function
//! of `(mode, template)`.

use super::contact::BodyRef;
use super::robot::Kinematics;
use super::template::WorldTemplate;
use super::{WorldError, WorldState};
use crate::geom::{vec2, Shape, Vec2};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObsMode {
    /// Joints, fingertip poses, and the object poses captured at episode
    /// reset (pose estimation happens once, before manipulation starts).
    Pose,
    /// Joints plus a noisy point set sampled from object contours.
    Pointset,
    /// Noiseless joints, live object states, fingertip states, and net
    /// contact forces. Simulation-only.
    Privileged,
}

impl ObsMode {
    pub fn name(self) -> &'static str {
        match self {
            ObsMode::Pose => "pose",
            ObsMode::Pointset => "pointset",
            ObsMode::Privileged => "privileged",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Observation {
    pub mode: ObsMode,
    pub vec: Vec<f64>,
}

/// Observation dimension for a mode on this template.
pub fn obs_dim(tpl: &WorldTemplate, mode: ObsMode) -> usize {
    let n_obj = tpl.observed_indices().len();
    match mode {
        ObsMode::Pose => 7 + 7 + 9 + 3 * n_obj,
        ObsMode::Pointset => 7 + 7 + 2 * tpl.observe.n_points,
        ObsMode::Privileged => 7 + 7 + 18 + 6 * n_obj + 3 * n_obj,
    }
}

/// Extract an observation. Additive state-observation noise comes from the
/// state's randomization sample (identity sample = noiseless) and applies in
/// pose and privileged modes; point-set noise is governed by the template's
/// observe parameters.
pub fn observe<R: Rng>(
    tpl: &WorldTemplate,
    state: &WorldState,
    mode: ObsMode,
    rng: &mut R,
) -> Result<Observation, WorldError> {
    let observed = tpl.observed_indices();
    if matches!(mode, ObsMode::Pointset) && (observed.is_empty() || tpl.observe.n_points == 0) {
        return Err(WorldError::UnsupportedMode(mode.name()));
    }

    let bias = state.rand.offset("state_observation");
    let mut v = Vec::with_capacity(obs_dim(tpl, mode));
    v.extend_from_slice(&state.robot.q());
    v.extend_from_slice(&state.robot.qd());

    match mode {
        ObsMode::Pose => {
            for tip in &state.robot.fingertip_poses {
                v.extend_from_slice(&[tip.pos.x, tip.pos.y, tip.theta]);
            }
            for &i in &observed {
                let p = state.initial_object_poses[i];
                v.extend_from_slice(&[p.pos.x, p.pos.y, p.theta]);
            }
            for x in v.iter_mut() {
                *x += bias;
            }
        }
        ObsMode::Privileged => {
            let tip_vels = fingertip_velocities(tpl, state);
            for (tip, vel) in state.robot.fingertip_poses.iter().zip(tip_vels) {
                v.extend_from_slice(&[tip.pos.x, tip.pos.y, tip.theta, vel.0.x, vel.0.y, vel.1]);
            }
            for &i in &observed {
                let b = &state.bodies[i];
                v.extend_from_slice(&[
                    b.pose.pos.x,
                    b.pose.pos.y,
                    b.pose.theta,
                    b.vel.linear.x,
                    b.vel.linear.y,
                    b.vel.angular,
                ]);
            }
            for &i in &observed {
                let (f, tau) = net_contact_wrench(state, i);
                v.extend_from_slice(&[f.x, f.y, tau]);
            }
            for x in v.iter_mut() {
                *x += bias;
            }
        }
        ObsMode::Pointset => {
            let pts = sample_contour_points(tpl, state, &observed, rng);
            for p in pts {
                v.push(p.x);
                v.push(p.y);
            }
        }
    }

    debug_assert_eq!(v.len(), obs_dim(tpl, mode));
    Ok(Observation { mode, vec: v })
}

/// Net contact force and torque (about the center of mass) on one object.
fn net_contact_wrench(state: &WorldState, obj: usize) -> (Vec2, f64) {
    let r = BodyRef::Object(obj as u32);
    let com = state.bodies[obj].pose.pos;
    let mut f = Vec2::ZERO;
    let mut tau = 0.0;
    for c in &state.contacts {
        if !c.involves(r) {
            continue;
        }
        // Normals point a -> b; force on `obj` opposes its side.
        let dir = if c.a == r { -c.normal } else { c.normal };
        let force = dir * c.force_magnitude;
        f += force;
        tau += (c.point - com).cross(force);
    }
    (f, tau)
}

/// Fingertip (linear, angular) velocities via kinematic differencing.
fn fingertip_velocities(tpl: &WorldTemplate, state: &WorldState) -> [(Vec2, f64); 3] {
    let eps = 1e-6;
    let kin0 = Kinematics::new(&tpl.robot, &state.robot);
    let mut advanced = state.robot.clone();
    let mut q = advanced.q();
    let qd = advanced.qd();
    for i in 0..q.len() {
        q[i] += qd[i] * eps;
    }
    advanced.set_q(q);
    let kin1 = Kinematics::new(&tpl.robot, &advanced);
    let mut out = [(Vec2::ZERO, 0.0); 3];
    for i in 0..3 {
        out[i] = (
            (kin1.fingertips[i].pos - kin0.fingertips[i].pos) / eps,
            crate::geom::wrap_angle(kin1.fingertips[i].theta - kin0.fingertips[i].theta) / eps,
        );
    }
    out
}

/// Evenly sample `n_points` from the observed objects' contours (allocation
/// proportional to perimeter), then apply per-point Gaussian noise and the
/// flying-point corruption.
fn sample_contour_points<R: Rng>(
    tpl: &WorldTemplate,
    state: &WorldState,
    observed: &[usize],
    rng: &mut R,
) -> Vec<Vec2> {
    let op = &tpl.observe;
    let perims: Vec<f64> = observed
        .iter()
        .map(|&i| perimeter(&state.bodies[i].shape))
        .collect();
    let total: f64 = perims.iter().sum();
    let n = op.n_points;
    let mut pts = Vec::with_capacity(n);

    let mut counts: Vec<usize> = perims
        .iter()
        .map(|p| ((p / total) * n as f64).floor() as usize)
        .collect();
    let mut assigned: usize = counts.iter().sum();
    let n_groups = counts.len();
    let mut k = 0;
    while assigned < n {
        counts[k % n_groups] += 1;
        assigned += 1;
        k += 1;
    }

    let noise = Normal::new(0.0, op.point_noise.max(0.0)).expect("sigma >= 0");
    let fly = Normal::new(0.0, op.fly_sigma).expect("sigma >= 0");
    let center = (op.workspace_min + op.workspace_max) * 0.5;
    for (&i, &count) in observed.iter().zip(counts.iter()) {
        let b = &state.bodies[i];
        for s in 0..count {
            let t = (s as f64 + 0.5) / count.max(1) as f64;
            let local = contour_point(&b.shape, t);
            let mut p = b.pose.transform(local);
            if op.point_noise > 0.0 {
                p += vec2(noise.sample(rng), noise.sample(rng));
            }
            if op.p_fly > 0.0 && rng.gen::<f64>() < op.p_fly {
                p = center + vec2(fly.sample(rng), fly.sample(rng));
            }
            pts.push(p);
        }
    }
    pts
}

fn perimeter(shape: &Shape) -> f64 {
    match shape {
        Shape::Circle { radius } => crate::geom::TAU * radius,
        Shape::Polygon { verts } => {
            let n = verts.len();
            (0..n).map(|i| (verts[(i + 1) % n] - verts[i]).norm()).sum()
        }
        Shape::Capsule { half_len, radius } => 4.0 * half_len + crate::geom::TAU * radius,
    }
}

/// Point on the shape contour at arc-length fraction `t` in [0, 1).
fn contour_point(shape: &Shape, t: f64) -> Vec2 {
    match shape {
        Shape::Circle { radius } => {
            let a = t * crate::geom::TAU;
            vec2(radius * a.cos(), radius * a.sin())
        }
        Shape::Polygon { verts } => {
            let n = verts.len();
            let total = perimeter(shape);
            let mut remaining = t * total;
            for i in 0..n {
                let a = verts[i];
                let b = verts[(i + 1) % n];
                let len = (b - a).norm();
                if remaining <= len || i == n - 1 {
                    return a + (b - a) * (remaining / len).clamp(0.0, 1.0);
                }
                remaining -= len;
            }
            verts[0]
        }
        Shape::Capsule { half_len, radius } => {
            // Perimeter split: top edge, right cap, bottom edge, left cap.
            let (h, r) = (*half_len, *radius);
            let edge = 2.0 * h;
            let cap = std::f64::consts::PI * r;
            let total = 2.0 * edge + 2.0 * cap;
            let mut s = t * total;
            if s < edge {
                return vec2(-h + s, r);
            }
            s -= edge;
            if s < cap {
                let a = std::f64::consts::FRAC_PI_2 - (s / cap) * std::f64::consts::PI;
                return vec2(h + r * a.cos(), r * a.sin());
            }
            s -= cap;
            if s < edge {
                return vec2(h - s, -r);
            }
            s -= edge;
            let a = -std::f64::consts::FRAC_PI_2 - (s / cap) * std::f64::consts::PI;
            vec2(-h + r * a.cos(), r * a.sin())
        }
    }
}
