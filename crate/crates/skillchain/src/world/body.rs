//! Rigid bodies and their physical state.

use crate::geom::{wrap_angle, Pose2, Shape, Vec2};
use serde::{Deserialize, Serialize};

/// Linear and angular velocity of a planar body.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Velocity2 {
    pub linear: Vec2,
    pub angular: f64,
}

impl Velocity2 {
    pub const ZERO: Velocity2 = Velocity2 {
        linear: Vec2::ZERO,
        angular: 0.0,
    };

    /// Velocity of a world point rigidly attached to the body.
    pub fn at_point(&self, r: Vec2) -> Vec2 {
        self.linear + r.perp() * self.angular
    }
}

/// Surface material used by the contact solver.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub friction: f64,
    pub restitution: f64,
}

impl Default for Material {
    fn default() -> Self {
        Material {
            friction: 0.8,
            restitution: 0.1,
        }
    }
}

/// A named body-frame point tracked as a task keypoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeypointAnchor {
    pub name: String,
    pub local: Vec2,
}

/// Full dynamic state of one body.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BodyState {
    pub pose: Pose2,
    pub vel: Velocity2,
    pub shape: Shape,
    pub keypoint_anchors: Vec<KeypointAnchor>,
    pub mass: f64,
    pub inertia: f64,
    pub material: Material,
    pub is_static: bool,
    /// Unwrapped rotation integrated since episode reset; `pose.theta`
    /// stays normalized while this accumulates.
    pub accum_rotation: f64,
}

impl BodyState {
    pub fn new_dynamic(shape: Shape, density: f64, pose: Pose2) -> BodyState {
        let mass = shape.area() * density;
        let inertia = mass * shape.unit_inertia();
        BodyState {
            pose,
            vel: Velocity2::ZERO,
            shape,
            keypoint_anchors: Vec::new(),
            mass,
            inertia,
            material: Material::default(),
            is_static: false,
            accum_rotation: 0.0,
        }
    }

    pub fn new_static(shape: Shape, pose: Pose2) -> BodyState {
        // Mass properties are stored finite for serialization but never used:
        // inv_mass/inv_inertia are zero for static bodies.
        let mass = shape.area() * 1000.0;
        let inertia = mass * shape.unit_inertia();
        BodyState {
            pose,
            vel: Velocity2::ZERO,
            shape,
            keypoint_anchors: Vec::new(),
            mass,
            inertia,
            material: Material::default(),
            is_static: true,
            accum_rotation: 0.0,
        }
    }

    pub fn inv_mass(&self) -> f64 {
        if self.is_static {
            0.0
        } else {
            1.0 / self.mass
        }
    }

    pub fn inv_inertia(&self) -> f64 {
        if self.is_static {
            0.0
        } else {
            1.0 / self.inertia
        }
    }

    /// World position of a keypoint anchor.
    pub fn keypoint_world(&self, anchor: &KeypointAnchor) -> Vec2 {
        self.pose.transform(anchor.local)
    }

    pub fn keypoint(&self, name: &str) -> Option<Vec2> {
        self.keypoint_anchors
            .iter()
            .find(|k| k.name == name)
            .map(|k| self.keypoint_world(k))
    }

    /// Advance the pose by the current velocity. Keeps `theta` wrapped and
    /// accumulates the unwrapped rotation.
    pub fn integrate(&mut self, dt: f64) {
        if self.is_static {
            return;
        }
        self.pose.pos += self.vel.linear * dt;
        let dtheta = self.vel.angular * dt;
        self.pose.theta = wrap_angle(self.pose.theta + dtheta);
        self.accum_rotation += dtheta;
    }

    pub fn is_finite(&self) -> bool {
        self.pose.pos.is_finite()
            && self.pose.theta.is_finite()
            && self.vel.linear.is_finite()
            && self.vel.angular.is_finite()
    }

    pub fn kinetic_energy(&self) -> f64 {
        if self.is_static {
            return 0.0;
        }
        0.5 * self.mass * self.vel.linear.norm_sq() + 0.5 * self.inertia * self.vel.angular.powi(2)
    }
}
