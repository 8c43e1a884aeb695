//! The simulation step: joint PD dynamics, forces, impulse contacts,
//! integration, and task mechanisms, in a fixed deterministic order.

use super::body::Velocity2;
use super::contact::{
    self, BodyRef, ContactConstraint, ContactRecord, SolverBody, SolverParams,
};
use super::robot::{step_joints, ControlCommand, Kinematics, LinkId};
use super::template::{GraspParams, MechState, Mechanism, WorldTemplate};
use super::{GraspState, WorldError, WorldState};
use crate::geom::{self, wrap_angle, Pose2, Vec2};

/// Advance one state by `dt` under the given joint-target command.
///
/// Deterministic: identical `(state, control, dt)` produce bitwise-identical
/// results.
pub fn step(
    tpl: &WorldTemplate,
    state: &WorldState,
    control: &ControlCommand,
    dt: f64,
) -> Result<WorldState, WorldError> {
    if !(dt > 0.0) {
        return Err(WorldError::BadInput("dt must be > 0".into()));
    }
    let mut st = state.clone();

    // Per-episode action bias from domain randomization.
    let mut cmd = *control;
    let action_bias = st.rand.offset("action");
    if action_bias != 0.0 {
        for t in cmd.targets.iter_mut() {
            *t += action_bias;
        }
    }

    // Robot joints under PD control; link velocities from pose differencing.
    let kin_before = Kinematics::new(&tpl.robot, &st.robot);
    step_joints(
        &tpl.robot,
        &mut st.robot,
        &cmd,
        dt,
        st.rand.scale("joint_stiffness"),
        st.rand.scale("joint_damping"),
        (
            st.rand.offset("joint_lower_range"),
            st.rand.offset("joint_upper_range"),
        ),
    );
    let kin = Kinematics::new(&tpl.robot, &st.robot);
    let link_vel: Vec<(LinkId, Vec2, f64)> = kin
        .link_poses
        .iter()
        .zip(kin_before.link_poses.iter())
        .map(|((id, after), (_, before))| {
            (
                *id,
                (after.pos - before.pos) / dt,
                wrap_angle(after.theta - before.theta) / dt,
            )
        })
        .collect();
    let hand_vel = (
        (kin.hand.pos - kin_before.hand.pos) / dt,
        wrap_angle(kin.hand.theta - kin_before.hand.theta) / dt,
    );

    // Attached children ride on their parents.
    let attached = attached_children(tpl, &st);
    slave_attachments(tpl, &mut st);

    // External forces: gravity plus the grasp coupling.
    let gravity = tpl.sim.gravity * st.rand.scale("gravity");
    for (i, b) in st.bodies.iter_mut().enumerate() {
        if b.is_static || attached[i] {
            continue;
        }
        b.vel.linear += gravity * dt;
    }
    if let Some(g) = st.grasp {
        apply_grasp_wrench(&tpl.grasp, &mut st, g, kin.hand, hand_vel, dt);
    }

    // Contact detection and impulse resolution.
    let parent_of = attachment_parents(tpl, &st);
    let root_of = |mut k: usize| {
        while let Some(p) = parent_of[k] {
            if p == k {
                break;
            }
            k = p;
        }
        k
    };
    let mut solver_bodies: Vec<SolverBody> = Vec::with_capacity(st.bodies.len() + 10);
    for (i, b) in st.bodies.iter().enumerate() {
        // Attached children route their constraints to the chain root, so
        // their own entries stay untouched by the solver.
        let sb = SolverBody::from_object(i, b);
        solver_bodies.push(sb);
    }
    let link_base = solver_bodies.len();
    for (idx, (id, lv, av)) in link_vel.iter().enumerate() {
        let pose = kin.link_poses[idx].1;
        solver_bodies.push(SolverBody::kinematic_link(
            *id,
            pose,
            *lv,
            *av,
            tpl.robot.friction * st.rand.scale("robot_static_friction"),
        ));
    }

    let params = SolverParams {
        dt,
        iterations: tpl.sim.solver_iterations,
        slop: tpl.sim.penetration_tolerance * 0.5,
        baumgarte: tpl.sim.baumgarte * st.rand.scale("compliance"),
        restitution_threshold: tpl.sim.restitution_threshold,
    };

    let mut constraints: Vec<ContactConstraint> = Vec::new();
    let n = st.bodies.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let (bi, bj) = (&st.bodies[i], &st.bodies[j]);
            // Attached children still collide (their records drive breakage);
            // only static-static pairs are inert.
            if bi.is_static && bj.is_static {
                continue;
            }
            if same_attachment_chain(tpl, &st, i, j) {
                continue;
            }
            if !within_reach(bi.pose.pos, bi.shape.bounding_radius(), bj.pose.pos, bj.shape.bounding_radius()) {
                continue;
            }
            if let Some(m) = geom::contact(&bi.shape, bi.pose, &bj.shape, bj.pose, 0.0) {
                constraints.push(contact::prepare_constraint_mapped(
                    &solver_bodies,
                    root_of(i),
                    root_of(j),
                    BodyRef::Object(i as u32),
                    BodyRef::Object(j as u32),
                    &m,
                    &params,
                ));
            }
        }
    }
    let held = st.grasp.map(|g| g.object as usize);
    for i in 0..n {
        if st.bodies[i].is_static {
            continue;
        }
        let bi = &st.bodies[i];
        for (k, (id, _, _)) in link_vel.iter().enumerate() {
            // A held object is coupled through the grasp spring; digit
            // collisions would only fight it.
            if held == Some(i) && is_digit(*id) {
                continue;
            }
            let pose = kin.link_poses[k].1;
            let shape = Kinematics::link_shape(&tpl.robot, *id);
            if !within_reach(bi.pose.pos, bi.shape.bounding_radius(), pose.pos, shape.bounding_radius()) {
                continue;
            }
            if let Some(m) = geom::contact(&bi.shape, bi.pose, &shape, pose, 0.0) {
                constraints.push(contact::prepare_constraint_mapped(
                    &solver_bodies,
                    root_of(i),
                    link_base + k,
                    BodyRef::Object(i as u32),
                    BodyRef::Link(*id),
                    &m,
                    &params,
                ));
            }
        }
    }

    contact::solve(&mut solver_bodies, &mut constraints, params.iterations);

    for (i, b) in st.bodies.iter_mut().enumerate() {
        if b.is_static || attached[i] {
            continue;
        }
        b.vel = Velocity2 {
            linear: solver_bodies[i].linear,
            angular: solver_bodies[i].angular,
        };
    }

    for (i, b) in st.bodies.iter_mut().enumerate() {
        if attached[i] {
            continue;
        }
        b.integrate(dt);
    }
    slave_attachments(tpl, &mut st);

    let mut records = contact::records(&solver_bodies, &constraints, dt);
    if let Some(g) = st.grasp {
        pinch_records(tpl, &st, g, &kin, &mut records);
    }
    update_screws(tpl, &mut st, dt, &mut records);
    st.contacts = records;

    update_attachments(tpl, &mut st);
    update_grasp(tpl, &mut st, kin.hand);

    st.time += dt;

    if !st.robot.is_finite() || st.bodies.iter().any(|b| !b.is_finite()) {
        return Err(WorldError::NonFiniteState { time: st.time });
    }
    Ok(st)
}

fn is_digit(id: LinkId) -> bool {
    !matches!(id, LinkId::Arm1 | LinkId::Arm2 | LinkId::Arm3)
}

/// Synthetic fingertip records for a spring-held object: the pinch transmits
/// at least the grasp wrench, reported on the thumb and the nearer finger.
fn pinch_records(
    tpl: &WorldTemplate,
    st: &WorldState,
    g: GraspState,
    kin: &Kinematics,
    records: &mut Vec<ContactRecord>,
) {
    let obj = g.object as usize;
    let b = &st.bodies[obj];
    let tips = [LinkId::IndexTip, LinkId::MiddleTip, LinkId::ThumbTip];
    let force = (b.mass * tpl.grasp.max_accel * 0.25).max(tpl.sim.contact_force_threshold * 4.0);
    let index_d = (kin.fingertips[0].pos - b.pose.pos).norm();
    let middle_d = (kin.fingertips[1].pos - b.pose.pos).norm();
    let finger = if index_d <= middle_d { 0 } else { 1 };
    for &side in &[finger, 2usize] {
        let tip_pose = kin.fingertips[side];
        let normal = (b.pose.pos - tip_pose.pos).normalized();
        records.push(ContactRecord {
            a: BodyRef::Object(obj as u32),
            b: BodyRef::Link(tips[side]),
            point: tip_pose.pos,
            normal: -normal,
            force_magnitude: force,
        });
    }
}

fn within_reach(pa: Vec2, ra: f64, pb: Vec2, rb: f64) -> bool {
    (pa - pb).norm_sq() <= (ra + rb + 1e-3).powi(2)
}

fn attached_children(tpl: &WorldTemplate, st: &WorldState) -> Vec<bool> {
    let mut out = vec![false; st.bodies.len()];
    for (m, ms) in tpl.mechanisms.iter().zip(st.mech.iter()) {
        if let (Mechanism::Attachment { child, .. }, MechState::Attach { attached: true, .. }) =
            (m, ms)
        {
            if let Some(ci) = tpl.object_index(child) {
                out[ci] = true;
            }
        }
    }
    out
}

fn same_attachment_chain(tpl: &WorldTemplate, st: &WorldState, i: usize, j: usize) -> bool {
    let parents = attachment_parents(tpl, st);
    let root = |mut k: usize| {
        while let Some(p) = parents[k] {
            if p == k {
                break;
            }
            k = p;
        }
        k
    };
    root(i) == root(j)
}

fn slave_attachments(tpl: &WorldTemplate, st: &mut WorldState) {
    for (mi, m) in tpl.mechanisms.iter().enumerate() {
        if let (
            Mechanism::Attachment { parent, child, .. },
            MechState::Attach { attached: true, rel, .. },
        ) = (m, &st.mech[mi])
        {
            let rel = *rel;
            let (Some(pi), Some(ci)) = (tpl.object_index(parent), tpl.object_index(child)) else {
                continue;
            };
            let parent_body = st.bodies[pi].clone();
            let cb = &mut st.bodies[ci];
            cb.pose = parent_body.pose.compose(rel).wrapped();
            let r = cb.pose.pos - parent_body.pose.pos;
            cb.vel = Velocity2 {
                linear: parent_body.vel.linear + r.perp() * parent_body.vel.angular,
                angular: parent_body.vel.angular,
            };
        }
    }
}

fn apply_grasp_wrench(
    gp: &GraspParams,
    st: &mut WorldState,
    g: GraspState,
    hand: Pose2,
    hand_vel: (Vec2, f64),
    dt: f64,
) {
    let b = &mut st.bodies[g.object as usize];
    if b.is_static {
        return;
    }
    let target = hand.compose(g.rel);
    let pos_err = target.pos - b.pose.pos;
    let rot_err = wrap_angle(target.theta - b.pose.theta);
    let target_vel = hand_vel.0 + (b.pose.pos - hand.pos).perp() * hand_vel.1;
    let mut acc = pos_err * gp.kp + (target_vel - b.vel.linear) * gp.kd;
    let norm = acc.norm();
    if norm > gp.max_accel {
        acc = acc * (gp.max_accel / norm);
    }
    let mut rot_acc = rot_err * gp.kp_rot + (hand_vel.1 - b.vel.angular) * gp.kd_rot;
    rot_acc = rot_acc.clamp(-gp.max_rot_accel, gp.max_rot_accel);
    b.vel.linear += acc * dt;
    b.vel.angular += rot_acc * dt;
}

fn update_screws(tpl: &WorldTemplate, st: &mut WorldState, dt: f64, records: &mut Vec<ContactRecord>) {
    for (mi, m) in tpl.mechanisms.iter().enumerate() {
        let Mechanism::ScrewChannel {
            object,
            tip_keypoint,
            base,
            mouth_local,
            axis_local,
            pitch,
            max_depth,
            capture_radius,
            capture_depth,
            align_tol,
            screw_sign,
        } = m
        else {
            continue;
        };
        let (Some(oi), Some(bi)) = (tpl.object_index(object), tpl.object_index(base)) else {
            continue;
        };
        let base_pose = st.bodies[bi].pose;
        let base_rot = st.bodies[bi].accum_rotation;
        let mouth = base_pose.transform(*mouth_local);
        let axis = base_pose.rotate(*axis_local).normalized();

        let Some(tip_local) = st.bodies[oi]
            .keypoint_anchors
            .iter()
            .find(|k| &k.name == tip_keypoint)
            .map(|k| k.local)
        else {
            continue;
        };

        let obj = &st.bodies[oi];
        let tip = obj.pose.transform(tip_local);
        let rel = tip - mouth;
        let along = rel.dot(axis);
        let lateral = rel - axis * along;
        let rel_rot = obj.accum_rotation - base_rot;

        let MechState::Screw { engaged, theta_ref, depth } = &mut st.mech[mi] else {
            continue;
        };

        if !*engaged {
            let obj_axis = obj.pose.rotate(tip_local.normalized());
            let align = obj_axis.dot(axis).clamp(-1.0, 1.0).acos();
            if lateral.norm() < *capture_radius
                && (-0.004..=*capture_depth).contains(&along)
                && align < *align_tol
            {
                *engaged = true;
                *theta_ref = rel_rot;
                *depth = along.max(0.0);
            } else {
                continue;
            }
        } else if *pitch == 0.0 {
            // Push latch: axial push ratchets the depth directly.
            if along > *depth {
                *depth = along.min(*max_depth);
            }
        } else {
            // Deadband filters solver micro-oscillation so only deliberate
            // rotation advances the thread.
            let delta = screw_sign * (rel_rot - *theta_ref);
            if delta > 2e-3 {
                *depth = (*depth + pitch * delta).min(*max_depth);
                *theta_ref = rel_rot;
            } else if delta < -2e-3 {
                *theta_ref = rel_rot;
            }
        }

        // Hold the tip on the channel axis at the ratcheted depth.
        let target_tip = mouth + axis * *depth;
        let correction = target_tip - tip;
        let obj = &mut st.bodies[oi];
        obj.pose.pos += correction;
        // Kill lateral tip velocity and damp spin (thread friction).
        let lat_dir = axis.perp();
        let v_tip = obj.vel.at_point(obj.pose.transform(tip_local) - obj.pose.pos);
        let v_lat = v_tip.dot(lat_dir);
        let v_along = v_tip.dot(axis);
        obj.vel.linear -= lat_dir * v_lat + axis * v_along;
        obj.vel.angular *= 0.5;

        let force = obj.mass * (correction.norm() / dt + v_lat.abs()) / dt;
        records.push(ContactRecord {
            a: BodyRef::Object(oi as u32),
            b: BodyRef::Object(bi as u32),
            point: target_tip,
            normal: axis,
            force_magnitude: force.max(tpl.sim.contact_force_threshold * 2.0),
        });
    }
}

fn update_attachments(tpl: &WorldTemplate, st: &mut WorldState) {
    for (mi, m) in tpl.mechanisms.iter().enumerate() {
        let Mechanism::Attachment {
            parent,
            child,
            break_force,
            attach_radius,
            parent_anchor,
            ..
        } = m
        else {
            continue;
        };
        let (Some(pi), Some(ci)) = (tpl.object_index(parent), tpl.object_index(child)) else {
            continue;
        };
        let MechState::Attach { attached, spent, rel } = &st.mech[mi] else {
            continue;
        };
        let (attached, spent, rel) = (*attached, *spent, *rel);
        let _ = rel;

        if attached {
            let felt: f64 = st
                .contacts
                .iter()
                .filter(|r| r.involves(BodyRef::Object(ci as u32)))
                .map(|r| r.force_magnitude)
                .sum();
            if felt > *break_force {
                if std::env::var_os("SKC_DEBUG_BREAK").is_some() {
                    eprintln!(
                        "[break] t={:.2} child='{child}' felt={felt:.2} limit={break_force}",
                        st.time
                    );
                    for r in st.contacts.iter().filter(|r| r.involves(BodyRef::Object(ci as u32))) {
                        eprintln!("   from {:?}/{:?} f={:.2} at ({:.3},{:.3})", r.a, r.b, r.force_magnitude, r.point.x, r.point.y);
                    }
                }
                st.mech[mi] = MechState::Attach {
                    attached: false,
                    spent: true,
                    rel,
                };
                // The child inherits the parent's rigid velocity (already
                // slaved) and falls free from here.
            }
            continue;
        }

        // Proximity re-attach for never-broken attachments.
        let (Some(radius), Some(anchor), false) = (attach_radius, parent_anchor, spent) else {
            continue;
        };
        let Some(anchor_world) = st.bodies[pi].keypoint(anchor) else {
            continue;
        };
        let child_pos = st.bodies[ci].pose.pos;
        if (anchor_world - child_pos).norm() < *radius {
            // Snap the child onto the anchor and capture the new rel pose.
            let mut child_pose = st.bodies[ci].pose;
            child_pose.pos = anchor_world;
            st.bodies[ci].pose = child_pose;
            let new_rel = st.bodies[pi].pose.relative_to(child_pose);
            st.mech[mi] = MechState::Attach {
                attached: true,
                spent: false,
                rel: new_rel,
            };
        }
    }
}

/// Snap attached children onto their parents without advancing dynamics.
/// Used when constructing initial states.
pub fn settle_attachments(tpl: &WorldTemplate, st: &mut WorldState) {
    slave_attachments(tpl, st);
}

fn screw_engaged(tpl: &WorldTemplate, st: &WorldState, obj: usize) -> bool {
    tpl.mechanisms.iter().zip(st.mech.iter()).any(|(m, ms)| {
        matches!(
            (m, ms),
            (
                Mechanism::ScrewChannel { object, .. },
                MechState::Screw { engaged: true, .. }
            ) if tpl.object_index(object) == Some(obj)
        )
    })
}

fn attachment_parents(tpl: &WorldTemplate, st: &WorldState) -> Vec<Option<usize>> {
    let mut out = vec![None; st.bodies.len()];
    for (m, ms) in tpl.mechanisms.iter().zip(st.mech.iter()) {
        if let (
            Mechanism::Attachment { parent, child, .. },
            MechState::Attach { attached: true, .. },
        ) = (m, ms)
        {
            if let (Some(pi), Some(ci)) = (tpl.object_index(parent), tpl.object_index(child)) {
                out[ci] = Some(pi);
            }
        }
    }
    out
}

fn update_grasp(tpl: &WorldTemplate, st: &mut WorldState, hand: Pose2) {
    let tips = st.robot.fingertip_poses;
    let index_thumb = (tips[0].pos - tips[2].pos).norm();
    let middle_thumb = (tips[1].pos - tips[2].pos).norm();
    let gap = index_thumb.min(middle_thumb);

    if let Some(g) = st.grasp {
        if gap > tpl.grasp.release_gap {
            st.grasp = None;
        } else if screw_engaged(tpl, st, g.object as usize) {
            // A screw channel moves the object axially in-hand; follow its
            // position but keep pulling toward the held orientation.
            let b = &st.bodies[g.object as usize];
            let mut rel = hand.relative_to(b.pose);
            rel.theta = g.rel.theta;
            st.grasp = Some(GraspState {
                object: g.object,
                rel,
                since: g.since,
            });
        }
        return;
    }

    // Engage when the thumb and at least one finger both press the same
    // dynamic body hard enough.
    let thr = tpl.grasp.engage_force;
    let mut best: Option<u32> = None;
    for (i, b) in st.bodies.iter().enumerate() {
        if b.is_static {
            continue;
        }
        let obj = BodyRef::Object(i as u32);
        let tip_force = |link: LinkId| -> f64 {
            st.contacts
                .iter()
                .filter(|r| r.involves(obj) && r.involves(BodyRef::Link(link)))
                .map(|r| r.force_magnitude)
                .sum()
        };
        let thumb = tip_force(LinkId::ThumbTip);
        let finger = tip_force(LinkId::IndexTip).max(tip_force(LinkId::MiddleTip));
        if thumb >= thr && finger >= thr {
            best = Some(i as u32);
            break;
        }
    }
    if let Some(object) = best {
        let b = &st.bodies[object as usize];
        st.grasp = Some(GraspState {
            object,
            rel: hand.relative_to(b.pose),
            since: st.time,
        });
    }
}
