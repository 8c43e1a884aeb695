// Dev harness: run a bundled task oracle and print diagnostics per stage.
// Temporary calibration tool.

use skillchain::tasks::{bundled::bundled_task, subtask_success, DemoConfig};
use skillchain::world::Kinematics;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "bulb-analog".into());
    let n: usize = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let task = bundled_task(&name).expect("task resolves");
    println!("task {} K={} horizon={}", task.name, task.k(), task.horizon);

    // Print scene geometry facts.
    let st = task.world.nominal_state();
    let kin = Kinematics::new(&task.world.robot, &st.robot);
    println!("home hand pose: {:?}", kin.hand);
    println!(
        "home tips: index {:?} thumb {:?} gap {:.4}",
        kin.fingertips[0].pos,
        kin.fingertips[2].pos,
        (kin.fingertips[0].pos - kin.fingertips[2].pos).norm()
    );
    let closed = skillchain::world::RobotState::from_joints(
        &task.world.robot,
        st.robot.arm_q,
        [0.95, 0.95, 0.55, 0.40],
    );
    let kc = Kinematics::new(&task.world.robot, &closed);
    println!(
        "closed tips: index {:?} thumb {:?} gap {:.4}",
        kc.fingertips[0].pos,
        kc.fingertips[2].pos,
        (kc.fingertips[0].pos - kc.fingertips[2].pos).norm()
    );
    println!(
        "grip offset {:?} grip center (hand frame) {:?}",
        skillchain::tasks::oracle::grip_offset(&task.world.robot),
        kc.hand.inv_transform(kc.grip_center())
    );

    let mut cfg = DemoConfig::default();
    if std::env::var("NOISE").is_err() {
        cfg.action_jitter = 0.0;
        cfg.waypoint_jitter = 0.0;
        cfg.retry_cap = 1;
    }

    let trace_mode = std::env::var("TRACE").is_ok();
    let mut ok = 0;
    for seed in 0..n as u64 {
        if trace_mode {
            let (res, trace) = skillchain::tasks::oracle::debug_demo(&task, &cfg, seed);
            for line in &trace {
                println!("{line}");
            }
            match res {
                Ok(traj) => {
                    ok += 1;
                    println!("seed {seed}: OK frames={}", traj.len());
                }
                Err(e) => println!("seed {seed}: FAIL {e}"),
            }
        } else {
            match skillchain::tasks::oracle::scripted_demo(&task, &cfg, seed) {
                Ok(traj) => {
                    ok += 1;
                    let last = traj.frames.last().unwrap();
                    let done: Vec<bool> = (1..=task.k())
                        .map(|i| subtask_success(&task, i, &last.state))
                        .collect();
                    println!(
                        "seed {seed}: OK frames={} final-success={:?}",
                        traj.len(),
                        done
                    );
                }
                Err(e) => println!("seed {seed}: FAIL {e}"),
            }
        }
    }
    println!("success {ok}/{n}");
}
