//! Desk-scale planar manipulation: a deterministic simulator plus the full
//! learning pipeline for segmenting demonstrations into skills, robustifying
//! each skill with residual reinforcement learning under domain
//! randomization, synthesizing transition trajectories with a motion
//! planner, and chaining everything with a routing transformer.
//!
//! Module map:
//! - [`geom`] / [`world`] — planar rigid-body simulation and observations
//! - [`seglang`] — the discriminator expression language
//! - [`tasks`] — bundled long-horizon tasks and scripted demonstrators
//! - [`segmentation`] — frame labeling, segments, boundary sets, augmentation
//! - [`nn`] — minimal neural-network kit (MLP, causal transformer,
//!   diffusion head, Adam/AdamW, GAE)
//! - [`learn`] — behavior cloning, residual PPO, rollout harvesting,
//!   co-training
//! - [`transition`] — transition-trajectory synthesis via motion planning
//! - [`srt`] — the skill-routing transformer and long-horizon executor
//! - [`pipeline`] — orchestration, evaluation, ablations, reports
//! - [`io`] — trajectory log formats and manifests

pub mod geom;
pub mod io;
pub mod seglang;
pub mod tasks;
pub mod trajectory;
pub mod world;
