//! Long-horizon task definitions, scripted oracle demonstrators, and
//! per-subtask success predicates.
//!
//! A task couples a world template with an ordered list of subtasks. Each
//! subtask carries its skill discriminator (point + contact constraint
//! sources), a success predicate, a timeout, and an oracle program — the
//! waypoint script standing in for a human demonstrator.

pub mod bundled;
pub mod oracle;
pub mod spec;

pub use oracle::{scripted_demo, DemoBatch, OracleFailure, OraclePrimitive};
pub use spec::{
    load_task, load_task_from_str, DemoConfig, InitRange, SubtaskSpec, TaskError, TaskSpec,
};

use crate::seglang::{eval_bool, FrameContext};
use crate::trajectory::ground_truth_keypoints;
use crate::world::WorldState;

/// Evaluate subtask `i`'s success predicate (1-based) on a state.
///
/// Predicates are closed (>=, <=) geometric tests over exact keypoints and
/// the current contact set, so threshold-boundary states count as success.
pub fn subtask_success(task: &TaskSpec, i: usize, state: &WorldState) -> bool {
    assert!(
        (1..=task.subtasks.len()).contains(&i),
        "subtask index {i} out of range 1..={}",
        task.subtasks.len()
    );
    let sub = &task.subtasks[i - 1];
    let frame = FrameContext {
        keypoints: ground_truth_keypoints(state),
        contacts: state.contacts.clone(),
        objects: task
            .world
            .objects
            .iter()
            .enumerate()
            .map(|(idx, o)| (o.name.clone(), idx as u32))
            .collect(),
        contact_force_threshold: task.world.sim.contact_force_threshold,
    };
    eval_bool(&sub.success, &frame).unwrap_or(false)
}

/// Highest subtask index (1-based) whose success predicate holds, scanning in
/// order and stopping at the first failure. 0 when none hold.
pub fn completed_prefix(task: &TaskSpec, state: &WorldState) -> usize {
    let mut done = 0;
    for i in 1..=task.subtasks.len() {
        if subtask_success(task, i, state) {
            done = i;
        } else {
            break;
        }
    }
    done
}
