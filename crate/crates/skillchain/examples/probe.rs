// Dev probe: step a grasped, screw-engaged state and watch orientation.

use skillchain::tasks::bundled::bundled_task;
use skillchain::tasks::DemoConfig;
use skillchain::world::{step, ControlCommand};

fn main() {
    let task = bundled_task("bulb-analog").unwrap();
    let mut cfg = DemoConfig::default();
    cfg.action_jitter = 0.0;
    cfg.waypoint_jitter = 0.0;
    cfg.retry_cap = 1;
    let (res, _trace) = skillchain::tasks::oracle::debug_demo(&task, &cfg, 0);
    let traj = res.expect("demo succeeds");
    let mut st = traj.frames.last().unwrap().state.clone();
    println!(
        "start: bulb th={:.3} om={:.3} grasp={:?} rel_th={:.3}",
        st.bodies[1].pose.theta,
        st.bodies[1].vel.angular,
        st.grasp.map(|g| g.object),
        st.grasp.map(|g| g.rel.theta).unwrap_or(0.0)
    );
    let cmd = ControlCommand::hold(&st.robot);
    for k in 0..120 {
        st = step(&task.world, &st, &cmd, task.world.sim.dt).unwrap();
        if k % 20 == 0 {
            for c in &st.contacts {
                if c.force_magnitude > 0.2 {
                    println!("   contact {:?} <-> {:?} f={:.2} at ({:.3},{:.3})", c.a, c.b, c.force_magnitude, c.point.x, c.point.y);
                }
            }
            let hand = st.hand_pose(&task.world);
            println!(
                "k={k:3} bulb th={:.3} om={:+.3} hand th={:+.3} rel_th={:.3} target_th={:.3}",
                st.bodies[1].pose.theta,
                st.bodies[1].vel.angular,
                hand.theta,
                st.grasp.map(|g| g.rel.theta).unwrap_or(f64::NAN),
                st.grasp
                    .map(|g| hand.compose(g.rel).theta)
                    .unwrap_or(f64::NAN),
            );
        }
    }
}
