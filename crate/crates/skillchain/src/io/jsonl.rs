//! Line-delimited JSON trajectory logs: a meta line, then one frame per line.

use super::IoError;
use crate::trajectory::{Frame, Trajectory, TrajectoryMeta};
use crate::world::WorldTemplate;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// Flat frame record as written to disk. Body poses are resolved to names so
/// logs stand alone without the template.
#[derive(Serialize, Deserialize)]
struct FrameLine {
    t: f64,
    robot_q: Vec<f64>,
    robot_qd: Vec<f64>,
    bodies: Vec<BodyLine>,
    action: Vec<f64>,
    contacts: Vec<ContactLine>,
    keypoints: Vec<(String, [f64; 2])>,
}

#[derive(Serialize, Deserialize)]
struct BodyLine {
    name: String,
    pose: [f64; 3],
    vel: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct ContactLine {
    a: String,
    b: String,
    point: [f64; 2],
    normal: [f64; 2],
    force: f64,
}

fn body_ref_name(tpl: &WorldTemplate, r: crate::world::BodyRef) -> String {
    match r {
        crate::world::BodyRef::Object(i) => tpl.object_name(i as usize).to_string(),
        crate::world::BodyRef::Link(l) => l.name().to_string(),
    }
}

/// Write a trajectory as JSONL: first line is the meta record, each further
/// line one frame.
pub fn write_trajectory(path: &Path, tpl: &WorldTemplate, traj: &Trajectory) -> Result<(), IoError> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, &traj.meta)?;
    w.write_all(b"\n")?;
    for f in &traj.frames {
        let line = FrameLine {
            t: f.state.time,
            robot_q: f.state.robot.q().to_vec(),
            robot_qd: f.state.robot.qd().to_vec(),
            bodies: f
                .state
                .bodies
                .iter()
                .enumerate()
                .map(|(i, b)| BodyLine {
                    name: tpl.object_name(i).to_string(),
                    pose: [b.pose.pos.x, b.pose.pos.y, b.pose.theta],
                    vel: [b.vel.linear.x, b.vel.linear.y, b.vel.angular],
                })
                .collect(),
            action: f.action.to_vec(),
            contacts: f
                .state
                .contacts
                .iter()
                .map(|c| ContactLine {
                    a: body_ref_name(tpl, c.a),
                    b: body_ref_name(tpl, c.b),
                    point: [c.point.x, c.point.y],
                    normal: [c.normal.x, c.normal.y],
                    force: c.force_magnitude,
                })
                .collect(),
            keypoints: f
                .keypoints
                .iter()
                .map(|(n, p)| (n.clone(), [p.x, p.y]))
                .collect(),
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Full-fidelity serialization (complete `WorldState` per line) used when a
/// trajectory must be reloaded for further simulation rather than training.
pub fn write_trajectory_full(path: &Path, traj: &Trajectory) -> Result<(), IoError> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, &traj.meta)?;
    w.write_all(b"\n")?;
    for f in &traj.frames {
        serde_json::to_writer(&mut w, f)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_full(path: &Path) -> Result<Trajectory, IoError> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let meta_line = lines
        .next()
        .ok_or_else(|| IoError::Format("empty trajectory file".into()))??;
    let meta: TrajectoryMeta = serde_json::from_str(&meta_line)?;
    let mut frames = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let frame: Frame = serde_json::from_str(&line)?;
        frames.push(frame);
    }
    Ok(Trajectory { meta, frames })
}
