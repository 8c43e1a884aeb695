//! Dynamics-level contracts: integrator closed forms, resting contacts
//! against a reference single-contact solver, batching, determinism,
//! energy behavior, and randomization application.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skillchain::geom::{pose2, vec2, Shape, Vec2};
use skillchain::world::{
    self, apply_randomization, observe, step, step_batch, ControlCommand, Kinematics, ObsMode,
    ObjectDef, RandomizationSample, RandomizationSpec, SimParams, WorldState, WorldTemplate,
};

fn base_template() -> WorldTemplate {
    WorldTemplate {
        robot: Default::default(),
        objects: vec![
            ObjectDef {
                name: "floor".into(),
                shape: Shape::rect(2.0, 0.05),
                density: 1000.0,
                material: skillchain::world::Material { friction: 0.8, restitution: 0.0 },
                pose: pose2(0.5, -0.05, 0.0),
                is_static: true,
                observed: false,
                keypoints: vec![],
            },
            ObjectDef {
                name: "disc".into(),
                shape: Shape::circle(0.03),
                density: 300.0,
                material: skillchain::world::Material { friction: 0.6, restitution: 0.0 },
                pose: pose2(0.9, 0.4, 0.0),
                is_static: false,
                observed: true,
                keypoints: vec![],
            },
        ],
        sim: SimParams::default(),
        grasp: Default::default(),
        mechanisms: vec![],
        home_arm_q: [-0.9, 1.6, -0.9],
        home_finger_q: [0.2; 4],
        randomization: RandomizationSpec::standard(),
        observe: Default::default(),
    }
}

fn physical_json(state: &WorldState) -> String {
    // Everything except the clock.
    let mut v = serde_json::to_value(state).unwrap();
    v.as_object_mut().unwrap().remove("time");
    v.to_string()
}

#[test]
fn rest_state_is_a_fixed_point() {
    let mut tpl = base_template();
    tpl.sim.gravity = Vec2::ZERO;
    let st = tpl.nominal_state();
    let cmd = ControlCommand::hold(&st.robot);
    let next = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
    assert_eq!(physical_json(&st), physical_json(&next));
    assert!(next.bodies.iter().all(|b| b.vel.linear.norm() == 0.0));
}

#[test]
fn free_fall_matches_semi_implicit_closed_form() {
    let mut tpl = base_template();
    tpl.objects.remove(0); // no floor: pure free flight
    for &scale in &[1.0f64, 0.7] {
        let mut st = tpl.nominal_state();
        st.rand = RandomizationSample {
            values: vec![("gravity".into(), scale)],
        };
        let y0 = st.bodies[0].pose.pos.y;
        let cmd = ControlCommand::hold(&st.robot);
        let k = 50;
        for _ in 0..k {
            st = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
        }
        let g = tpl.sim.gravity.y * scale;
        let dt = tpl.sim.dt;
        let expect = g * dt * dt * (k * (k + 1)) as f64 / 2.0;
        let got = st.bodies[0].pose.pos.y - y0;
        assert!(
            (got - expect).abs() < 1e-12,
            "scale {scale}: displacement {got} vs closed form {expect}"
        );
    }
}

#[test]
fn gravity_scale_scales_first_step_displacement() {
    let mut tpl = base_template();
    tpl.objects.remove(0);
    let run = |scale: f64| {
        let mut st = tpl.nominal_state();
        st.rand = RandomizationSample {
            values: vec![("gravity".into(), scale)],
        };
        let y0 = st.bodies[0].pose.pos.y;
        let cmd = ControlCommand::hold(&st.robot);
        st = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
        st.bodies[0].pose.pos.y - y0
    };
    let nominal = run(1.0);
    let scaled = run(0.9);
    assert!((scaled - 0.9 * nominal).abs() < 1e-15);
}

/// Reference 1-D solver for a disc resting on a plane, mirroring the solver's
/// update order: gravity, single-contact impulse with Baumgarte bias, then
/// position integration.
fn reference_resting_disc(y0: f64, radius: f64, floor_top: f64, sim: &SimParams, steps: usize) -> (f64, f64) {
    let mut y = y0;
    let mut v = 0.0_f64;
    let slop = sim.penetration_tolerance * 0.5;
    for _ in 0..steps {
        v += sim.gravity.y * sim.dt;
        let pen = (floor_top + radius) - y;
        // Contact is active at zero depth, matching the narrow phase.
        if pen >= 0.0 {
            let bias = sim.baumgarte / sim.dt * (pen - slop).max(0.0);
            // Normal points from floor into the disc (+y); enforce v >= bias.
            if v < bias {
                v = bias;
            }
        }
        y += v * sim.dt;
    }
    (y, v)
}

#[test]
fn resting_disc_stays_within_penetration_tolerance() {
    let mut tpl = base_template();
    let radius = 0.03;
    let floor_top = 0.0;
    // Drop from a millimeter above so impact and stabilization both happen.
    tpl.objects[1].pose = pose2(0.9, floor_top + radius + 0.001, 0.0);
    let mut st = tpl.nominal_state();
    let cmd = ControlCommand::hold(&st.robot);
    for _ in 0..100 {
        st = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
    }
    let pen = (floor_top + radius) - st.bodies[1].pose.pos.y;
    assert!(
        pen <= tpl.sim.penetration_tolerance,
        "penetration {pen} exceeds tolerance"
    );
    assert!(st.bodies[1].vel.linear.y.abs() <= 1e-3);

    let (y_ref, v_ref) =
        reference_resting_disc(floor_top + radius + 0.001, radius, floor_top, &tpl.sim, 100);
    assert!(
        (st.bodies[1].pose.pos.y - y_ref).abs() < 1e-9,
        "sim {} vs reference {}",
        st.bodies[1].pose.pos.y,
        y_ref
    );
    assert!((st.bodies[1].vel.linear.y - v_ref).abs() < 1e-9);
}

#[test]
fn batch_of_one_equals_single_step() {
    let tpl = base_template();
    let st = tpl.nominal_state();
    let cmd = ControlCommand::hold(&st.robot);
    let single = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
    let batch = step_batch(&tpl, &[st], &[cmd], tpl.sim.dt);
    let b = batch.into_iter().next().unwrap().unwrap();
    assert_eq!(
        serde_json::to_string(&single).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn identical_batch_elements_stay_identical() {
    let tpl = base_template();
    let st = tpl.nominal_state();
    let cmd = ControlCommand::hold(&st.robot);
    let states = vec![st; 64];
    let cmds = vec![cmd; 64];
    let out = step_batch(&tpl, &states, &cmds, tpl.sim.dt);
    let first = serde_json::to_string(out[0].as_ref().unwrap()).unwrap();
    for r in &out {
        assert_eq!(serde_json::to_string(r.as_ref().unwrap()).unwrap(), first);
    }
}

#[test]
fn shuffled_batch_equals_unshuffled_under_inverse_permutation() {
    let tpl = base_template();
    let mut states = Vec::new();
    let mut cmds = Vec::new();
    for i in 0..32 {
        let mut st = tpl.nominal_state();
        st.bodies[1].pose.pos.x += i as f64 * 0.01;
        st.bodies[1].vel.linear = vec2(0.1 * (i % 5) as f64, 0.0);
        cmds.push(ControlCommand::hold(&st.robot));
        states.push(st);
    }
    let plain = step_batch(&tpl, &states, &cmds, tpl.sim.dt);

    // Reverse permutation.
    let perm: Vec<usize> = (0..states.len()).rev().collect();
    let shuffled_states: Vec<_> = perm.iter().map(|&i| states[i].clone()).collect();
    let shuffled_cmds: Vec<_> = perm.iter().map(|&i| cmds[i]).collect();
    let shuffled = step_batch(&tpl, &shuffled_states, &shuffled_cmds, tpl.sim.dt);

    for (k, &i) in perm.iter().enumerate() {
        assert_eq!(
            serde_json::to_string(shuffled[k].as_ref().unwrap()).unwrap(),
            serde_json::to_string(plain[i].as_ref().unwrap()).unwrap()
        );
    }
}

#[test]
fn deterministic_across_runs() {
    let tpl = base_template();
    let run = || {
        let mut st = tpl.nominal_state();
        st.bodies[1].vel.linear = vec2(0.3, 0.2);
        let cmd = ControlCommand {
            targets: [-0.8, 1.5, -1.0, 0.5, 0.5, 0.5, 0.3],
        };
        for _ in 0..200 {
            st = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
        }
        serde_json::to_string(&st).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn energy_conserved_without_gravity() {
    let mut tpl = base_template();
    tpl.objects.remove(0);
    tpl.sim.gravity = Vec2::ZERO;
    let mut st = tpl.nominal_state();
    st.bodies[0].vel.linear = vec2(0.4, 0.1);
    st.bodies[0].vel.angular = 3.0;
    let e0 = st.bodies[0].kinetic_energy();
    let cmd = ControlCommand::hold(&st.robot);
    for _ in 0..1000 {
        st = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
    }
    let e1 = st.bodies[0].kinetic_energy();
    assert!((e1 - e0).abs() / e0 < 1e-12);
}

#[test]
fn energy_drift_under_gravity_below_one_percent() {
    let mut tpl = base_template();
    tpl.objects.remove(0);
    let mut st = tpl.nominal_state();
    st.bodies[0].vel.linear = vec2(35.0, 0.0);
    let m = st.bodies[0].mass;
    let energy = |s: &WorldState| {
        s.bodies[0].kinetic_energy() + m * 9.81 * s.bodies[0].pose.pos.y
    };
    let e0 = energy(&st);
    let cmd = ControlCommand::hold(&st.robot);
    for _ in 0..1000 {
        st = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
    }
    let drift = (energy(&st) - e0).abs() / e0.abs();
    assert!(drift < 0.01, "energy drift {drift}");
}

#[test]
fn two_disc_collision_conserves_momentum() {
    let mut tpl = base_template();
    tpl.sim.gravity = Vec2::ZERO;
    tpl.objects.remove(0);
    tpl.objects.push(ObjectDef {
        name: "disc2".into(),
        shape: Shape::circle(0.03),
        density: 500.0,
        material: skillchain::world::Material { friction: 0.5, restitution: 0.3 },
        pose: pose2(0.98, 0.4, 0.0),
        is_static: false,
        observed: false,
        keypoints: vec![],
    });
    let mut st = tpl.nominal_state();
    st.bodies[0].vel.linear = vec2(0.5, 0.02);
    let momentum = |s: &WorldState| {
        s.bodies
            .iter()
            .map(|b| b.vel.linear * b.mass)
            .fold(Vec2::ZERO, |a, p| a + p)
    };
    let p0 = momentum(&st);
    let cmd = ControlCommand::hold(&st.robot);
    for _ in 0..100 {
        st = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
    }
    let p1 = momentum(&st);
    assert!((p1 - p0).norm() < 1e-9, "momentum changed by {}", (p1 - p0).norm());
    // The collision actually happened.
    assert!(st.bodies[1].vel.linear.x > 0.05);
}

#[test]
fn fingertip_poses_match_forward_kinematics() {
    let tpl = base_template();
    let mut st = tpl.nominal_state();
    let cmd = ControlCommand {
        targets: [-0.5, 1.2, -0.7, 0.9, 0.8, 0.7, 0.4],
    };
    for _ in 0..50 {
        st = step(&tpl, &st, &cmd, tpl.sim.dt).unwrap();
    }
    let kin = Kinematics::new(&tpl.robot, &st.robot);
    for (stored, computed) in st.robot.fingertip_poses.iter().zip(kin.fingertips.iter()) {
        assert!((stored.pos - computed.pos).norm() < 1e-9);
        assert!((stored.theta - computed.theta).abs() < 1e-9);
    }
}

#[test]
fn identity_randomization_leaves_template_unchanged() {
    let tpl = base_template();
    let st = tpl.nominal_state();
    let out = apply_randomization(&st, &RandomizationSample::identity());
    assert_eq!(
        serde_json::to_string(&st).unwrap(),
        serde_json::to_string(&out).unwrap()
    );
}

#[test]
fn mass_scaling_is_exact() {
    let tpl = base_template();
    let st = tpl.nominal_state();
    let sample = RandomizationSample {
        values: vec![("object_mass".into(), 1.5)],
    };
    let out = apply_randomization(&st, &sample);
    assert_eq!(out.bodies[1].mass, st.bodies[1].mass * 1.5);
    // Statics are untouched.
    assert_eq!(out.bodies[0].mass, st.bodies[0].mass);
}

#[test]
fn privileged_observation_reads_back_state_exactly() {
    let tpl = base_template();
    let mut st = tpl.nominal_state();
    st.bodies[1].vel.linear = vec2(0.1, -0.2);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let obs = observe(&tpl, &st, ObsMode::Privileged, &mut rng).unwrap();
    assert_eq!(obs.vec.len(), world::obs_dim(&tpl, ObsMode::Privileged));
    let q = st.robot.q();
    for i in 0..7 {
        assert_eq!(obs.vec[i], q[i]);
    }
    // Observed object block: pose then velocity (single observed object).
    let base = 7 + 7 + 18;
    assert_eq!(obs.vec[base], st.bodies[1].pose.pos.x);
    assert_eq!(obs.vec[base + 3], 0.1);
    assert_eq!(obs.vec[base + 4], -0.2);
}

#[test]
fn pose_observation_reports_initial_not_live_poses() {
    let tpl = base_template();
    let mut st = tpl.nominal_state();
    st.capture_initial_poses();
    st.bodies[1].pose.pos.x += 0.05; // object moved after reset
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let obs = observe(&tpl, &st, ObsMode::Pose, &mut rng).unwrap();
    let base = 7 + 7 + 9;
    assert_eq!(obs.vec[base], st.initial_object_poses[1].pos.x);
    assert!(obs.vec[base] != st.bodies[1].pose.pos.x);
}

#[test]
fn pointset_observation_has_exact_count_within_bounds() {
    let tpl = base_template();
    let st = tpl.nominal_state();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n_rounds = 40; // 40 * 256 > 10^4 points
    let mut outside = 0usize;
    let mut total = 0usize;
    let margin = 6.0 * tpl.observe.point_noise;
    for _ in 0..n_rounds {
        let obs = observe(&tpl, &st, ObsMode::Pointset, &mut rng).unwrap();
        let pts = &obs.vec[14..];
        assert_eq!(pts.len(), 2 * tpl.observe.n_points);
        for xy in pts.chunks(2) {
            total += 1;
            let inside = xy[0] >= tpl.observe.workspace_min.x - margin
                && xy[0] <= tpl.observe.workspace_max.x + margin
                && xy[1] >= tpl.observe.workspace_min.y - margin
                && xy[1] <= tpl.observe.workspace_max.y + margin;
            if !inside {
                outside += 1;
            }
        }
    }
    // Only flying points may leave the workspace; p_fly = 0.005.
    assert!(total > 10_000);
    let frac = outside as f64 / total as f64;
    assert!(frac < 0.01, "fraction outside workspace: {frac}");
}
