//! Bundled long-horizon tasks: planar desk-scale analogs of a light-bulb
//! assembly, a pipette liquid-handling routine, and a spray-bottle watering
//! routine. Configs are constructed here and serialize through the same
//! schema `load_task` consumes.

use super::oracle::{Anchor, OraclePrimitive};
use super::spec::{resolve_task, InitRange, SubtaskConfig, TaskConfig, TaskError, TaskSpec};
use crate::geom::{pose2, vec2, Shape, Vec2};
use crate::world::{
    GraspParams, KeypointAnchor, Material, Mechanism, ObjectDef, ObserveParams, RandomizationSpec,
    RobotSpec, SimParams,
};

pub const BUNDLED_TASKS: [&str; 3] = ["bulb-analog", "pipette-analog", "spray-analog"];

/// Build the raw config for a bundled task by name.
pub fn task_config(name: &str) -> Option<TaskConfig> {
    match name {
        "bulb-analog" => Some(bulb_analog()),
        "pipette-analog" => Some(pipette_analog()),
        "spray-analog" => Some(spray_analog()),
        _ => None,
    }
}

/// Resolve a bundled task (parse + typecheck discriminators and predicates).
pub fn bundled_task(name: &str) -> Result<TaskSpec, TaskError> {
    let cfg = task_config(name).ok_or_else(|| TaskError::Schema {
        field: "name".into(),
        reason: format!("unknown bundled task '{name}'"),
    })?;
    resolve_task(cfg)
}

/// JSON form of a bundled task config (the on-disk schema).
pub fn task_json(name: &str) -> Option<String> {
    task_config(name).map(|c| serde_json::to_string_pretty(&c).expect("config serializes"))
}

fn desk() -> ObjectDef {
    ObjectDef {
        name: "desk".into(),
        shape: Shape::rect(1.2, 0.05),
        density: 1000.0,
        material: Material { friction: 0.9, restitution: 0.05 },
        pose: pose2(0.45, -0.05, 0.0),
        is_static: true,
        observed: false,
        keypoints: vec![],
    }
}

fn static_block(name: &str, half: Vec2, center: Vec2) -> ObjectDef {
    ObjectDef {
        name: name.into(),
        shape: Shape::rect(half.x, half.y),
        density: 1000.0,
        material: Material { friction: 0.8, restitution: 0.05 },
        pose: pose2(center.x, center.y, 0.0),
        is_static: true,
        observed: false,
        keypoints: vec![],
    }
}

fn kp(name: &str, x: f64, y: f64) -> KeypointAnchor {
    KeypointAnchor {
        name: name.into(),
        local: vec2(x, y),
    }
}

/// Hexagonal bulb: wide glass section tapering into a narrow stem along +x.
fn bulb_shape() -> Shape {
    Shape::polygon(vec![
        vec2(-0.028, -0.018),
        vec2(0.002, -0.018),
        vec2(0.034, -0.008),
        vec2(0.034, 0.008),
        vec2(0.002, 0.018),
        vec2(-0.028, 0.018),
    ])
}

const PI: f64 = std::f64::consts::PI;
const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

/// Light-bulb assembly analog, K=4: grasp the standing bulb, reorient it to
/// horizontal in-hand, insert the stem into a wall-mounted socket channel,
/// and screw it in (ratchet thread: rotation advances the seat).
fn bulb_analog() -> TaskConfig {
    // Socket channel: mouth at x=0.235, axis -x. One 0.65 rad turn seats the
    // bulb (planar thread: rotation about the pinned tip advances the seat).
    let mouth = vec2(0.235, 0.13);
    let pitch = 0.0055;

    let bulb = ObjectDef {
        name: "bulb".into(),
        shape: bulb_shape(),
        density: 250.0,
        material: Material { friction: 0.7, restitution: 0.05 },
        pose: pose2(0.43, 0.0281, HALF_PI),
        is_static: false,
        observed: true,
        keypoints: vec![
            kp("bulb_tip", 0.034, 0.0),
            kp("bulb_grip", -0.012, 0.0),
            kp("bulb_base", -0.028, 0.0),
        ],
    };

    let back_plate = ObjectDef {
        keypoints: vec![kp("socket_seat", 0.004, 0.0)],
        ..static_block("socket_plate", vec2(0.005, 0.030), vec2(0.216, 0.13))
    };

    let objects = vec![
        desk(),
        bulb,
        back_plate,
        static_block("socket_lip_top", vec2(0.005, 0.006), vec2(0.230, 0.146)),
        static_block("socket_lip_bottom", vec2(0.005, 0.006), vec2(0.230, 0.114)),
        static_block("socket_pillar", vec2(0.012, 0.0475), vec2(0.216, 0.0475)),
    ];

    let mechanisms = vec![Mechanism::ScrewChannel {
        object: "bulb".into(),
        tip_keypoint: "bulb_tip".into(),
        base: "socket_plate".into(),
        mouth_local: vec2(mouth.x - 0.216, 0.0),
        axis_local: vec2(-1.0, 0.0),
        pitch,
        max_depth: 0.009,
        capture_radius: 0.009,
        capture_depth: 0.003,
        align_tol: 0.35,
        screw_sign: 1.0,
    }];

    let grasp_fingers = [0.18, 0.18, 0.12, 0.14];

    let subtasks = vec![
        SubtaskConfig {
            name: "grasp".into(),
            point_constraint: "coord(bulb_grip, y) <= 0.055".into(),
            contact_constraint:
                "contact(thumb, bulb) && (contact(index, bulb) || contact(middle, bulb))".into(),
            success: "coord(bulb_grip, y) >= 0.065".into(),
            timeout: 300,
            oracle: vec![
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "bulb_grip".into() },
                    offset: [0.0, 0.10],
                    orient: -HALF_PI,
                    tol: 0.008,
                    max_frames: 400,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "bulb_grip".into() },
                    offset: [0.0, 0.004],
                    orient: -HALF_PI,
                    tol: 0.005,
                    max_frames: 300,
                },
                OraclePrimitive::CloseUntilGrasp { targets: grasp_fingers, max_frames: 250 },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.42, 0.21] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    tol: 0.010,
                    max_frames: 500,
                },
            ],
        },
        SubtaskConfig {
            name: "reorient".into(),
            point_constraint:
                "coord(bulb_grip, y) >= 0.12 && coord(bulb_grip, x) - coord(bulb_tip, x) <= 0.032"
                    .into(),
            contact_constraint:
                "contact(thumb, bulb) && (contact(index, bulb) || contact(middle, bulb))".into(),
            success:
                "coord(bulb_tip, y) - coord(bulb_grip, y) <= 0.030 && coord(bulb_grip, x) - coord(bulb_tip, x) >= -0.010"
                    .into(),
            timeout: 300,
            oracle: vec![OraclePrimitive::MoveGrip {
                anchor: Anchor::Absolute { point: [0.42, 0.21] },
                offset: [0.0, 0.0],
                orient: 0.0,
                tol: 0.010,
                max_frames: 400,
            }],
        },
        SubtaskConfig {
            name: "insert".into(),
            point_constraint:
                "dist(bulb_tip, socket_seat) <= 0.036 && dist(bulb_tip, socket_seat) >= 0.018"
                    .into(),
            contact_constraint:
                "contact(thumb, bulb) && (contact(index, bulb) || contact(middle, bulb))".into(),
            success:
                "dist(bulb_tip, socket_seat) <= 0.0168 && dist_axis(bulb_tip, socket_seat, y) <= 0.008"
                    .into(),
            timeout: 400,
            oracle: vec![
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.315, 0.13] },
                    offset: [0.0, 0.0],
                    orient: 0.0,
                    tol: 0.008,
                    max_frames: 500,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.2855, 0.13] },
                    offset: [0.0, 0.0],
                    orient: 0.0,
                    tol: 0.004,
                    max_frames: 400,
                },
                OraclePrimitive::Push {
                    anchor: Anchor::Absolute { point: [0.2775, 0.13] },
                    offset: [0.0, 0.0],
                    orient: 0.0,
                    frames: 90,
                },
            ],
        },
        SubtaskConfig {
            name: "screw".into(),
            point_constraint: "dist(bulb_tip, socket_seat) <= 0.0145".into(),
            contact_constraint: "any_contact(bulb)".into(),
            success: "dist(bulb_tip, socket_seat) <= 0.0115".into(),
            timeout: 400,
            oracle: vec![
                OraclePrimitive::Push {
                    anchor: Anchor::Absolute { point: [0.2750, 0.13] },
                    offset: [0.0, 0.0],
                    orient: 0.0,
                    frames: 40,
                },
                OraclePrimitive::ScrewCycles {
                    turn: 0.85,
                    grasp_targets: grasp_fingers,
                    max_cycles: 3,
                },
                OraclePrimitive::Wait { frames: 20 },
            ],
        },
    ];

    TaskConfig {
        name: "bulb-analog".into(),
        horizon: 2000,
        obs_mode: crate::world::ObsMode::Pose,
        world: crate::world::WorldTemplate {
            robot: RobotSpec::default(),
            objects,
            sim: SimParams::default(),
            grasp: GraspParams::default(),
            mechanisms,
            home_arm_q: [-0.83, 1.49, -2.23],
            home_finger_q: super::oracle::OPEN_FINGERS,
            randomization: RandomizationSpec::standard(),
            observe: ObserveParams::default(),
        },
        rho0: vec![InitRange {
            object: "bulb".into(),
            x: [0.40, 0.46],
            y: [0.0281, 0.0281],
            theta: [HALF_PI - 0.03, HALF_PI + 0.03],
            couple_to: None,
        }],
        subtasks,
    }
}

/// Liquid-handling analog, K=5: pick a pipette rod from an elevated rack cup,
/// dip it into a reagent cup (a droplet snaps onto the disposable tip),
/// deposit the droplet into a test tube, return the rod to the rack, and
/// eject the used tip by pressing it off against the rack floor.
fn pipette_analog() -> TaskConfig {
    let rod = ObjectDef {
        name: "rod".into(),
        shape: Shape::rect(0.055, 0.005),
        density: 260.0,
        material: Material { friction: 0.7, restitution: 0.05 },
        pose: pose2(0.30, 0.163, -HALF_PI),
        is_static: false,
        observed: true,
        keypoints: vec![
            kp("rod_tip", 0.055, 0.0),
            kp("rod_grip", -0.030, 0.0),
        ],
    };
    let cap = ObjectDef {
        name: "cap".into(),
        shape: Shape::circle(0.009),
        density: 200.0,
        material: Material { friction: 0.6, restitution: 0.05 },
        pose: pose2(0.30, 0.099, 0.0),
        is_static: false,
        observed: true,
        keypoints: vec![kp("cap_center", 0.0, 0.0), kp("cap_mouth", 0.0085, 0.0)],
    };
    let droplet = ObjectDef {
        name: "droplet".into(),
        shape: Shape::circle(0.005),
        density: 150.0,
        material: Material { friction: 0.4, restitution: 0.05 },
        pose: pose2(0.42, 0.035, 0.0),
        is_static: false,
        observed: true,
        keypoints: vec![kp("droplet_center", 0.0, 0.0)],
    };

    let rack_floor = ObjectDef {
        keypoints: vec![kp("rack_bin", 0.0, 0.004)],
        ..static_block("rack_floor", vec2(0.018, 0.005), vec2(0.30, 0.085))
    };
    let rack_wall_l = ObjectDef {
        keypoints: vec![kp("rack_top", 0.0, 0.025)],
        ..static_block("rack_wall_l", vec2(0.004, 0.030), vec2(0.283, 0.12))
    };
    let bottle_floor = ObjectDef {
        keypoints: vec![kp("bottle_bin", 0.0, 0.01)],
        ..ObjectDef {
            observed: true,
            ..static_block("bottle_floor", vec2(0.020, 0.015), vec2(0.42, 0.015))
        }
    };
    let tube_floor = ObjectDef {
        keypoints: vec![kp("tube_bin", 0.0, 0.01)],
        ..ObjectDef {
            observed: true,
            ..static_block("tube_floor", vec2(0.016, 0.015), vec2(0.52, 0.015))
        }
    };

    let objects = vec![
        desk(),
        rod,
        cap,
        droplet,
        rack_floor,
        rack_wall_l,
        static_block("rack_wall_r", vec2(0.004, 0.030), vec2(0.317, 0.12)),
        static_block("rack_pillar", vec2(0.012, 0.0425), vec2(0.30, 0.0425)),
        bottle_floor,
        static_block("bottle_wall_l", vec2(0.004, 0.035), vec2(0.403, 0.065)),
        static_block("bottle_wall_r", vec2(0.004, 0.035), vec2(0.437, 0.065)),
        tube_floor,
        static_block("tube_wall_l", vec2(0.0045, 0.030), vec2(0.5045, 0.06)),
        static_block("tube_wall_r", vec2(0.0045, 0.030), vec2(0.5355, 0.06)),
    ];

    let mechanisms = vec![
        Mechanism::Attachment {
            parent: "rod".into(),
            child: "cap".into(),
            rel: pose2(0.064, 0.0, 0.0),
            break_force: 6.0,
            initially_attached: true,
            attach_radius: None,
            parent_anchor: None,
        },
        Mechanism::Attachment {
            parent: "cap".into(),
            child: "droplet".into(),
            rel: pose2(0.0, 0.0, 0.0),
            break_force: 1.2,
            initially_attached: false,
            attach_radius: Some(0.013),
            parent_anchor: Some("cap_mouth".into()),
        },
    ];

    let rod_fingers = [0.40, 0.40, 0.25, 0.22];
    let grasp_contact =
        "contact(thumb, rod) && (contact(index, rod) || contact(middle, rod))".to_string();

    let subtasks = vec![
        SubtaskConfig {
            name: "pick".into(),
            point_constraint:
                "dist(rod_grip, rack_top) <= 0.06 && dist(droplet_center, bottle_bin) <= 0.02"
                    .into(),
            contact_constraint: grasp_contact.clone(),
            success: grasp_contact.clone(),
            timeout: 300,
            oracle: vec![
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "rod_grip".into() },
                    offset: [0.0, 0.07],
                    orient: -HALF_PI,
                    tol: 0.008,
                    max_frames: 400,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "rod_grip".into() },
                    offset: [0.0, 0.004],
                    orient: -HALF_PI,
                    tol: 0.005,
                    max_frames: 300,
                },
                OraclePrimitive::CloseUntilGrasp { targets: rod_fingers, max_frames: 250 },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.30, 0.27] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    tol: 0.010,
                    max_frames: 500,
                },
            ],
        },
        SubtaskConfig {
            name: "dip".into(),
            point_constraint: "dist(rod_tip, bottle_bin) <= 0.055".into(),
            contact_constraint: grasp_contact.clone(),
            success: "dist(droplet_center, bottle_bin) >= 0.025".into(),
            timeout: 400,
            oracle: vec![
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "bottle_bin".into() },
                    offset: [0.0, 0.22],
                    orient: -HALF_PI,
                    tol: 0.008,
                    max_frames: 500,
                },
                OraclePrimitive::AlignedPush {
                    follow: "cap_mouth".into(),
                    anchor: Anchor::Keypoint { name: "bottle_bin".into() },
                    offset: [0.0, 0.012],
                    orient: -HALF_PI,
                    frames: 180,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "bottle_bin".into() },
                    offset: [0.0, 0.24],
                    orient: -HALF_PI,
                    tol: 0.010,
                    max_frames: 400,
                },
            ],
        },
        SubtaskConfig {
            name: "deposit".into(),
            point_constraint: "dist(rod_tip, tube_bin) <= 0.055".into(),
            contact_constraint: grasp_contact.clone(),
            success:
                "dist(droplet_center, tube_bin) <= 0.015 && dist(droplet_center, cap_mouth) >= 0.012"
                    .into(),
            timeout: 400,
            oracle: vec![
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "tube_bin".into() },
                    offset: [0.0, 0.24],
                    orient: -HALF_PI,
                    tol: 0.008,
                    max_frames: 500,
                },
                OraclePrimitive::AlignedPush {
                    follow: "cap_mouth".into(),
                    anchor: Anchor::Keypoint { name: "tube_bin".into() },
                    offset: [0.0, 0.004],
                    orient: -HALF_PI,
                    frames: 160,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "tube_bin".into() },
                    offset: [0.0, 0.24],
                    orient: -HALF_PI,
                    tol: 0.010,
                    max_frames: 400,
                },
            ],
        },
        SubtaskConfig {
            name: "return".into(),
            point_constraint:
                "dist(rod_grip, rack_top) <= 0.06 && dist(droplet_center, bottle_bin) >= 0.025 && dist(rod_tip, rack_bin) >= 0.024 && dist(cap_center, rod_tip) <= 0.011"
                    .into(),
            contact_constraint: grasp_contact.clone(),
            success:
                "dist_axis(rod_tip, rack_bin, x) <= 0.008 && coord(rod_tip, y) - coord(rack_bin, y) <= 0.045"
                    .into(),
            timeout: 400,
            oracle: vec![
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.30, 0.27] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    tol: 0.008,
                    max_frames: 500,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.30, 0.196] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    tol: 0.004,
                    max_frames: 400,
                },
            ],
        },
        SubtaskConfig {
            name: "eject".into(),
            point_constraint:
                "dist(rod_tip, rack_bin) <= 0.021 && dist(droplet_center, bottle_bin) >= 0.025"
                    .into(),
            contact_constraint: grasp_contact.clone(),
            success:
                "dist(cap_center, rod_tip) >= 0.012 && dist(cap_center, rack_bin) <= 0.015".into(),
            timeout: 300,
            oracle: vec![
                OraclePrimitive::Push {
                    anchor: Anchor::Absolute { point: [0.30, 0.181] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    frames: 70,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.30, 0.206] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    tol: 0.005,
                    max_frames: 300,
                },
                OraclePrimitive::Wait { frames: 20 },
            ],
        },
    ];

    TaskConfig {
        name: "pipette-analog".into(),
        horizon: 2400,
        obs_mode: crate::world::ObsMode::Pose,
        world: crate::world::WorldTemplate {
            robot: RobotSpec::default(),
            objects,
            sim: SimParams::default(),
            grasp: GraspParams::default(),
            mechanisms,
            home_arm_q: [-0.83, 1.49, -2.23],
            home_finger_q: super::oracle::OPEN_FINGERS,
            randomization: RandomizationSpec::standard(),
            observe: ObserveParams::default(),
        },
        rho0: vec![
            InitRange {
                object: "bottle_floor".into(),
                x: [0.40, 0.44],
                y: [0.015, 0.015],
                theta: [0.0, 0.0],
                couple_to: None,
            },
            InitRange {
                object: "bottle_wall_l".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("bottle_floor".into()),
            },
            InitRange {
                object: "bottle_wall_r".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("bottle_floor".into()),
            },
            InitRange {
                object: "droplet".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("bottle_floor".into()),
            },
            InitRange {
                object: "tube_floor".into(),
                x: [0.50, 0.54],
                y: [0.015, 0.015],
                theta: [0.0, 0.0],
                couple_to: None,
            },
            InitRange {
                object: "tube_wall_l".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("tube_floor".into()),
            },
            InitRange {
                object: "tube_wall_r".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("tube_floor".into()),
            },
        ],
        subtasks,
    }
}

/// Nozzle shape: body section tapering into an insert tip along +x.
fn nozzle_shape() -> Shape {
    Shape::polygon(vec![
        vec2(-0.020, -0.012),
        vec2(0.002, -0.012),
        vec2(0.020, -0.006),
        vec2(0.020, 0.006),
        vec2(0.002, 0.012),
        vec2(-0.020, 0.012),
    ])
}

/// Plant-watering analog, K=6: pick the spray nozzle from its stand, insert
/// it into the bottle's threaded mouth, lock it with a twist, carry the
/// assembled bottle toward the plant, press the trigger against the plant
/// stem (push latch), and place the bottle into the box.
fn spray_analog() -> TaskConfig {
    let nozzle = ObjectDef {
        name: "nozzle".into(),
        shape: nozzle_shape(),
        density: 220.0,
        material: Material { friction: 0.7, restitution: 0.05 },
        pose: pose2(0.40, 0.100, -HALF_PI),
        is_static: false,
        observed: true,
        keypoints: vec![
            kp("nozzle_tip", 0.020, 0.0),
            kp("nozzle_grip", -0.010, 0.0),
            kp("nozzle_latch", 0.0, 0.010),
        ],
    };
    let trigger = ObjectDef {
        name: "trigger".into(),
        shape: Shape::circle(0.005),
        density: 150.0,
        material: Material { friction: 0.5, restitution: 0.05 },
        pose: pose2(0.418, 0.100, 0.0),
        is_static: false,
        observed: true,
        keypoints: vec![kp("trigger_center", 0.0, 0.0)],
    };
    let bottle = ObjectDef {
        name: "bottle".into(),
        shape: Shape::rect(0.045, 0.016),
        density: 300.0,
        material: Material { friction: 0.8, restitution: 0.05 },
        pose: pose2(0.50, 0.065, HALF_PI),
        is_static: false,
        observed: true,
        keypoints: vec![
            kp("bottle_thread", 0.030, 0.0),
            kp("bottle_grip", 0.020, 0.0),
            kp("bottle_base", -0.040, 0.0),
        ],
    };

    let stand_floor = ObjectDef {
        keypoints: vec![kp("stand_ref", 0.0, 0.004)],
        ..static_block("stand_floor", vec2(0.014, 0.005), vec2(0.40, 0.075))
    };
    let holder_floor = ObjectDef {
        keypoints: vec![kp("holder_ref", 0.0, 0.008)],
        ..static_block("holder_floor", vec2(0.024, 0.01), vec2(0.50, 0.01))
    };
    let box_floor = ObjectDef {
        keypoints: vec![kp("box_bin", 0.0, 0.008)],
        ..ObjectDef {
            observed: true,
            ..static_block("box_floor", vec2(0.030, 0.01), vec2(0.30, 0.01))
        }
    };
    let plant = ObjectDef {
        keypoints: vec![kp("plant_top", 0.0, 0.11)],
        ..static_block("plant_stem", vec2(0.006, 0.115), vec2(0.20, 0.115))
    };

    let objects = vec![
        desk(),
        nozzle,
        trigger,
        bottle,
        stand_floor,
        static_block("stand_wall_l", vec2(0.004, 0.00875), vec2(0.3875, 0.08875)),
        static_block("stand_wall_r", vec2(0.004, 0.00875), vec2(0.4125, 0.08875)),
        static_block("stand_pillar", vec2(0.010, 0.035), vec2(0.40, 0.035)),
        holder_floor,
        static_block("holder_wall_l", vec2(0.004, 0.0225), vec2(0.477, 0.0425)),
        static_block("holder_wall_r", vec2(0.004, 0.0225), vec2(0.523, 0.0425)),
        box_floor,
        static_block("box_wall_l", vec2(0.004, 0.025), vec2(0.270, 0.045)),
        static_block("box_wall_r", vec2(0.004, 0.025), vec2(0.330, 0.045)),
        plant,
    ];

    let mechanisms = vec![
        Mechanism::ScrewChannel {
            object: "nozzle".into(),
            tip_keypoint: "nozzle_tip".into(),
            base: "bottle".into(),
            mouth_local: vec2(0.046, 0.0),
            axis_local: vec2(-1.0, 0.0),
            pitch: 0.008,
            max_depth: 0.005,
            capture_radius: 0.008,
            capture_depth: 0.003,
            align_tol: 0.35,
            screw_sign: 1.0,
        },
        Mechanism::ScrewChannel {
            object: "trigger".into(),
            tip_keypoint: "trigger_center".into(),
            base: "nozzle".into(),
            mouth_local: vec2(0.0, 0.018),
            axis_local: vec2(0.0, -1.0),
            pitch: 0.0,
            max_depth: 0.006,
            capture_radius: 0.004,
            capture_depth: 0.004,
            align_tol: 10.0,
            screw_sign: 1.0,
        },
    ];

    let nozzle_fingers = [0.27, 0.27, 0.17, 0.17];
    let bottle_fingers = [0.20, 0.20, 0.13, 0.15];
    let nozzle_contact =
        "contact(thumb, nozzle) && (contact(index, nozzle) || contact(middle, nozzle))"
            .to_string();
    let bottle_contact =
        "contact(thumb, bottle) && (contact(index, bottle) || contact(middle, bottle))"
            .to_string();

    let subtasks = vec![
        SubtaskConfig {
            name: "pick".into(),
            point_constraint:
                "dist_axis(nozzle_grip, stand_ref, x) <= 0.05 && coord(nozzle_grip, y) <= 0.16"
                    .into(),
            contact_constraint: nozzle_contact.clone(),
            success:
                "dist_axis(nozzle_grip, stand_ref, x) >= 0.05 || coord(nozzle_grip, y) >= 0.17"
                    .into(),
            timeout: 300,
            oracle: vec![
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "nozzle_grip".into() },
                    offset: [0.0, 0.08],
                    orient: -HALF_PI,
                    tol: 0.008,
                    max_frames: 400,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "nozzle_grip".into() },
                    offset: [0.0, 0.004],
                    orient: -HALF_PI,
                    tol: 0.005,
                    max_frames: 300,
                },
                OraclePrimitive::CloseUntilGrasp { targets: nozzle_fingers, max_frames: 250 },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.42, 0.25] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    tol: 0.010,
                    max_frames: 500,
                },
            ],
        },
        SubtaskConfig {
            name: "insert".into(),
            point_constraint:
                "dist(nozzle_tip, bottle_thread) <= 0.038 && dist(nozzle_tip, bottle_thread) >= 0.019"
                    .into(),
            contact_constraint: nozzle_contact.clone(),
            success:
                "dist(nozzle_tip, bottle_thread) <= 0.0172 && dist_axis(nozzle_tip, bottle_thread, x) <= 0.008"
                    .into(),
            timeout: 400,
            oracle: vec![
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "bottle_thread".into() },
                    offset: [0.0, 0.15],
                    orient: -HALF_PI,
                    tol: 0.006,
                    max_frames: 500,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "bottle_thread".into() },
                    offset: [0.0, 0.048],
                    orient: -HALF_PI,
                    tol: 0.004,
                    max_frames: 400,
                },
                OraclePrimitive::Push {
                    anchor: Anchor::Keypoint { name: "bottle_thread".into() },
                    offset: [0.0, 0.044],
                    orient: -HALF_PI,
                    frames: 60,
                },
            ],
        },
        SubtaskConfig {
            name: "lock".into(),
            point_constraint:
                "dist(nozzle_tip, bottle_thread) <= 0.0152 && dist(nozzle_tip, bottle_thread) >= 0.0132"
                    .into(),
            contact_constraint: "any_contact(nozzle)".into(),
            success: "dist(nozzle_tip, bottle_thread) <= 0.0128".into(),
            timeout: 400,
            oracle: vec![
                OraclePrimitive::Push {
                    anchor: Anchor::Keypoint { name: "bottle_thread".into() },
                    offset: [0.0, 0.042],
                    orient: -HALF_PI,
                    frames: 40,
                },
                OraclePrimitive::ScrewCycles {
                    turn: 0.55,
                    grasp_targets: nozzle_fingers,
                    max_cycles: 3,
                },
                OraclePrimitive::Wait { frames: 15 },
            ],
        },
        SubtaskConfig {
            name: "carry".into(),
            point_constraint:
                "dist_axis(bottle_grip, holder_ref, x) <= 0.055".into(),
            contact_constraint: bottle_contact.clone(),
            success: "dist_axis(bottle_grip, holder_ref, x) >= 0.06".into(),
            timeout: 400,
            oracle: vec![
                OraclePrimitive::Open { frames: 20 },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "bottle_grip".into() },
                    offset: [0.0, 0.10],
                    orient: -HALF_PI,
                    tol: 0.008,
                    max_frames: 400,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "bottle_grip".into() },
                    offset: [0.0, 0.004],
                    orient: -HALF_PI,
                    tol: 0.005,
                    max_frames: 300,
                },
                OraclePrimitive::CloseUntilGrasp { targets: bottle_fingers, max_frames: 250 },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.50, 0.20] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    tol: 0.010,
                    max_frames: 400,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.27, 0.19] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    tol: 0.008,
                    max_frames: 500,
                },
            ],
        },
        SubtaskConfig {
            name: "press".into(),
            point_constraint:
                "dist(trigger_center, plant_top) <= 0.035".into(),
            contact_constraint: bottle_contact.clone(),
            success: "dist(trigger_center, nozzle_latch) <= 0.0035".into(),
            timeout: 300,
            oracle: vec![
                OraclePrimitive::Push {
                    anchor: Anchor::Keypoint { name: "plant_top".into() },
                    offset: [-0.012, -0.035],
                    orient: -HALF_PI,
                    frames: 90,
                },
                OraclePrimitive::Wait { frames: 10 },
            ],
        },
        SubtaskConfig {
            name: "place".into(),
            point_constraint:
                "dist(bottle_base, box_bin) <= 0.08".into(),
            contact_constraint: bottle_contact.clone(),
            success:
                "dist_axis(bottle_base, box_bin, x) <= 0.02 && coord(bottle_base, y) - coord(box_bin, y) <= 0.06"
                    .into(),
            timeout: 400,
            oracle: vec![
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Absolute { point: [0.26, 0.24] },
                    offset: [0.0, 0.0],
                    orient: -HALF_PI,
                    tol: 0.010,
                    max_frames: 400,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "box_bin".into() },
                    offset: [0.0, 0.215],
                    orient: -HALF_PI,
                    tol: 0.008,
                    max_frames: 400,
                },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "box_bin".into() },
                    offset: [0.0, 0.07],
                    orient: -HALF_PI,
                    tol: 0.006,
                    max_frames: 400,
                },
                OraclePrimitive::Open { frames: 20 },
                OraclePrimitive::MoveGrip {
                    anchor: Anchor::Keypoint { name: "box_bin".into() },
                    offset: [0.0, 0.22],
                    orient: -HALF_PI,
                    tol: 0.010,
                    max_frames: 400,
                },
                OraclePrimitive::Wait { frames: 20 },
            ],
        },
    ];

    TaskConfig {
        name: "spray-analog".into(),
        horizon: 2600,
        obs_mode: crate::world::ObsMode::Pose,
        world: crate::world::WorldTemplate {
            robot: RobotSpec::default(),
            objects,
            sim: SimParams::default(),
            grasp: GraspParams::default(),
            mechanisms,
            home_arm_q: [-0.83, 1.49, -2.23],
            home_finger_q: super::oracle::OPEN_FINGERS,
            randomization: RandomizationSpec::standard(),
            observe: ObserveParams::default(),
        },
        rho0: vec![
            InitRange {
                object: "nozzle".into(),
                x: [0.39, 0.41],
                y: [0.100, 0.100],
                theta: [-HALF_PI - 0.02, -HALF_PI + 0.02],
                couple_to: None,
            },
            InitRange {
                object: "trigger".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("nozzle".into()),
            },
            InitRange {
                object: "bottle".into(),
                x: [0.49, 0.51],
                y: [0.065, 0.065],
                theta: [HALF_PI, HALF_PI],
                couple_to: None,
            },
            InitRange {
                object: "holder_floor".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("bottle".into()),
            },
            InitRange {
                object: "holder_wall_l".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("bottle".into()),
            },
            InitRange {
                object: "holder_wall_r".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("bottle".into()),
            },
            InitRange {
                object: "box_floor".into(),
                x: [0.29, 0.31],
                y: [0.01, 0.01],
                theta: [0.0, 0.0],
                couple_to: None,
            },
            InitRange {
                object: "box_wall_l".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("box_floor".into()),
            },
            InitRange {
                object: "box_wall_r".into(),
                x: [0.0, 0.0],
                y: [0.0, 0.0],
                theta: [0.0, 0.0],
                couple_to: Some("box_floor".into()),
            },
        ],
        subtasks,
    }
}
