fn main() {
    let spec = skillchain::world::RobotSpec::default();
    for (name, f) in [
        ("open", skillchain::tasks::oracle::OPEN_FINGERS),
        ("grasp", [0.18, 0.18, 0.12, 0.14]),
        ("pre_d", [0.10, 0.10, 0.08, 0.10]),
        ("pre_e", [0.18, 0.18, 0.12, 0.14]),
        ("pre_f", [0.25, 0.25, 0.15, 0.18]),
        ("pre_g", [0.32, 0.32, 0.20, 0.20]),
    ] {
        let st = skillchain::world::RobotState::from_joints(&spec, [0.0, 0.0, 0.0], f);
        let kin = skillchain::world::Kinematics::new(&spec, &st);
        let mid = (kin.fingertips[0].pos + kin.fingertips[2].pos) * 0.5;
        let gap = (kin.fingertips[0].pos - kin.fingertips[2].pos).norm();
        println!(
            "{name}: index=({:.4},{:.4}) middle=({:.4},{:.4}) thumb=({:.4},{:.4}) mid=({:.4},{:.4}) gap={:.4}",
            kin.fingertips[0].pos.x, kin.fingertips[0].pos.y,
            kin.fingertips[1].pos.x, kin.fingertips[1].pos.y,
            kin.fingertips[2].pos.x, kin.fingertips[2].pos.y,
            mid.x, mid.y, gap
        );
    }
}
