//! Binary columnar trajectory container.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic     [4]  b"SKC1"
//! n_frames  u32
//! n_fields  u32
//! repeated n_fields times:
//!   name_len u16, name bytes (utf-8), dim u32
//! repeated n_fields times, in header order:
//!   n_frames * dim  f32 little-endian (frame-major)
//! ```

use super::IoError;
use crate::trajectory::{Stage, Trajectory};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"SKC1";

/// In-memory columnar table: named fields with fixed per-frame dims.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnarTable {
    pub n_frames: usize,
    /// (name, dim) in block order.
    pub fields: Vec<(String, usize)>,
    /// One block per field, len = n_frames * dim.
    pub blocks: Vec<Vec<f32>>,
}

impl ColumnarTable {
    pub fn field(&self, name: &str) -> Option<(&[f32], usize)> {
        self.fields
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| (self.blocks[i].as_slice(), self.fields[i].1))
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_all(&(self.n_frames as u32).to_le_bytes())?;
        w.write_all(&(self.fields.len() as u32).to_le_bytes())?;
        for (name, dim) in &self.fields {
            let bytes = name.as_bytes();
            w.write_all(&(bytes.len() as u16).to_le_bytes())?;
            w.write_all(bytes)?;
            w.write_all(&(*dim as u32).to_le_bytes())?;
        }
        for (block, (_, dim)) in self.blocks.iter().zip(&self.fields) {
            if block.len() != self.n_frames * dim {
                return Err(IoError::Format(format!(
                    "block size {} does not match {} frames x dim {dim}",
                    block.len(),
                    self.n_frames
                )));
            }
            for v in block {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<ColumnarTable, IoError> {
        let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(IoError::Format("bad magic".into()));
        }
        let n_frames = read_u32(&mut r)? as usize;
        let n_fields = read_u32(&mut r)? as usize;
        let mut fields = Vec::with_capacity(n_fields);
        for _ in 0..n_fields {
            let mut len_bytes = [0u8; 2];
            r.read_exact(&mut len_bytes)?;
            let len = u16::from_le_bytes(len_bytes) as usize;
            let mut name = vec![0u8; len];
            r.read_exact(&mut name)?;
            let name = String::from_utf8(name)
                .map_err(|_| IoError::Format("field name not utf-8".into()))?;
            let dim = read_u32(&mut r)? as usize;
            fields.push((name, dim));
        }
        let mut blocks = Vec::with_capacity(n_fields);
        for (_, dim) in &fields {
            let mut block = vec![0f32; n_frames * dim];
            let mut bytes = vec![0u8; block.len() * 4];
            r.read_exact(&mut bytes)?;
            for (v, chunk) in block.iter_mut().zip(bytes.chunks_exact(4)) {
                *v = f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
            }
            blocks.push(block);
        }
        Ok(ColumnarTable {
            n_frames,
            fields,
            blocks,
        })
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, IoError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

/// Flatten a trajectory (optionally with per-frame stage labels) into the
/// columnar layout used for training.
pub fn trajectory_to_table(
    tpl: &crate::world::WorldTemplate,
    traj: &Trajectory,
    stages: Option<&[Stage]>,
) -> ColumnarTable {
    let n = traj.len();
    let mut fields: Vec<(String, usize)> = vec![
        ("time".into(), 1),
        ("robot_q".into(), 7),
        ("robot_qd".into(), 7),
        ("action".into(), 7),
    ];
    for o in &tpl.objects {
        fields.push((format!("body/{}/pose", o.name), 3));
        fields.push((format!("body/{}/vel", o.name), 3));
    }
    let kp_names: Vec<String> = tpl.keypoint_names();
    for k in &kp_names {
        fields.push((format!("kp/{k}"), 2));
    }
    if stages.is_some() {
        fields.push(("stage".into(), 1));
    }

    let mut blocks: Vec<Vec<f32>> = fields
        .iter()
        .map(|(_, dim)| Vec::with_capacity(n * dim))
        .collect();

    for (fi, frame) in traj.frames.iter().enumerate() {
        let mut bi = 0;
        blocks[bi].push(frame.state.time as f32);
        bi += 1;
        for v in frame.state.robot.q() {
            blocks[bi].push(v as f32);
        }
        bi += 1;
        for v in frame.state.robot.qd() {
            blocks[bi].push(v as f32);
        }
        bi += 1;
        for v in frame.action {
            blocks[bi].push(v as f32);
        }
        bi += 1;
        for b in &frame.state.bodies {
            blocks[bi].push(b.pose.pos.x as f32);
            blocks[bi].push(b.pose.pos.y as f32);
            blocks[bi].push(b.pose.theta as f32);
            bi += 1;
            blocks[bi].push(b.vel.linear.x as f32);
            blocks[bi].push(b.vel.linear.y as f32);
            blocks[bi].push(b.vel.angular as f32);
            bi += 1;
        }
        for k in &kp_names {
            let p = frame
                .keypoints
                .iter()
                .find(|(n, _)| n == k)
                .map(|(_, p)| *p)
                .unwrap_or(crate::geom::Vec2::ZERO);
            blocks[bi].push(p.x as f32);
            blocks[bi].push(p.y as f32);
            bi += 1;
        }
        if let Some(st) = stages {
            blocks[bi].push(st[fi].index() as f32);
        }
    }

    ColumnarTable {
        n_frames: n,
        fields,
        blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn round_trips_bytes() {
        let table = ColumnarTable {
            n_frames: 3,
            fields: vec![("a".into(), 2), ("b".into(), 1)],
            blocks: vec![vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0], vec![-1.0, 0.5, 9.25]],
        };
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.skc");
        table.save(&path).unwrap();
        let back = ColumnarTable::load(&path).unwrap();
        assert_eq!(table, back);
    }

    #[test]
    fn rejects_bad_magic() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("junk.skc");
        std::fs::write(&path, b"NOPE....").unwrap();
        assert!(ColumnarTable::load(&path).is_err());
    }
}
