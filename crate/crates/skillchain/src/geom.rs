//! Planar geometry: vectors, SE(2) poses, convex shapes, and contact queries.
//!
//! All narrow-phase queries return contacts with normals pointing from the
//! first shape toward the second, and positive depth meaning overlap.

use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

pub const TAU: f64 = std::f64::consts::TAU;

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a % TAU;
    if r <= -std::f64::consts::PI {
        r += TAU;
    } else if r > std::f64::consts::PI {
        r -= TAU;
    }
    r
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub const fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2 { x, y }
}

impl Vec2 {
    pub const ZERO: Vec2 = vec2(0.0, 0.0);

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// Planar cross product (z component of the 3-D cross).
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        vec2(-self.y, self.x)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        if n > 0.0 {
            self / n
        } else {
            vec2(1.0, 0.0)
        }
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        vec2(self.x + o.x, self.y + o.y)
    }
}
impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        *self = *self + o;
    }
}
impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        vec2(self.x - o.x, self.y - o.y)
    }
}
impl SubAssign for Vec2 {
    fn sub_assign(&mut self, o: Vec2) {
        *self = *self - o;
    }
}
impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        vec2(self.x * s, self.y * s)
    }
}
impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        vec2(self.x / s, self.y / s)
    }
}
impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        vec2(-self.x, -self.y)
    }
}

/// Rigid planar pose: translation plus rotation angle.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Pose2 {
    pub pos: Vec2,
    pub theta: f64,
}

pub const fn pose2(x: f64, y: f64, theta: f64) -> Pose2 {
    Pose2 { pos: vec2(x, y), theta }
}

impl Pose2 {
    pub const IDENTITY: Pose2 = pose2(0.0, 0.0, 0.0);

    pub fn rotate(self, v: Vec2) -> Vec2 {
        let (s, c) = self.theta.sin_cos();
        vec2(c * v.x - s * v.y, s * v.x + c * v.y)
    }

    pub fn transform(self, p: Vec2) -> Vec2 {
        self.rotate(p) + self.pos
    }

    pub fn inv_transform(self, p: Vec2) -> Vec2 {
        let d = p - self.pos;
        let (s, c) = self.theta.sin_cos();
        vec2(c * d.x + s * d.y, -s * d.x + c * d.y)
    }

    /// self ∘ other: apply `other` in this pose's frame.
    pub fn compose(self, other: Pose2) -> Pose2 {
        Pose2 {
            pos: self.transform(other.pos),
            theta: self.theta + other.theta,
        }
    }

    /// Relative pose such that self ∘ rel == other.
    pub fn relative_to(self, other: Pose2) -> Pose2 {
        Pose2 {
            pos: self.inv_transform(other.pos),
            theta: other.theta - self.theta,
        }
    }

    pub fn wrapped(self) -> Pose2 {
        Pose2 {
            pos: self.pos,
            theta: wrap_angle(self.theta),
        }
    }
}

/// Convex collision shape in body frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Circle { radius: f64 },
    /// Counter-clockwise convex polygon.
    Polygon { verts: Vec<Vec2> },
    /// Segment from (-half_len, 0) to (half_len, 0) inflated by radius.
    Capsule { half_len: f64, radius: f64 },
}

impl Shape {
    pub fn circle(radius: f64) -> Shape {
        Shape::Circle { radius }
    }

    pub fn polygon(verts: Vec<Vec2>) -> Shape {
        Shape::Polygon { verts }
    }

    pub fn capsule(half_len: f64, radius: f64) -> Shape {
        Shape::Capsule { half_len, radius }
    }

    pub fn rect(half_w: f64, half_h: f64) -> Shape {
        Shape::Polygon {
            verts: vec![
                vec2(-half_w, -half_h),
                vec2(half_w, -half_h),
                vec2(half_w, half_h),
                vec2(-half_w, half_h),
            ],
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            Shape::Circle { radius } => {
                if *radius <= 0.0 {
                    return Err(format!("circle radius must be > 0, got {radius}"));
                }
            }
            Shape::Polygon { verts } => {
                if verts.len() < 3 {
                    return Err(format!("polygon needs >= 3 vertices, got {}", verts.len()));
                }
                // Convexity and CCW winding.
                let n = verts.len();
                for i in 0..n {
                    let a = verts[i];
                    let b = verts[(i + 1) % n];
                    let c = verts[(i + 2) % n];
                    if (b - a).cross(c - b) <= 0.0 {
                        return Err("polygon must be convex and counter-clockwise".into());
                    }
                }
            }
            Shape::Capsule { half_len, radius } => {
                if *half_len < 0.0 || *radius <= 0.0 {
                    return Err("capsule needs half_len >= 0 and radius > 0".into());
                }
            }
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        match self {
            Shape::Circle { radius } => std::f64::consts::PI * radius * radius,
            Shape::Polygon { verts } => polygon_area(verts),
            Shape::Capsule { half_len, radius } => {
                4.0 * half_len * radius + std::f64::consts::PI * radius * radius
            }
        }
    }

    /// Second moment of area about the centroid divided by area
    /// (multiply by mass to get moment of inertia).
    pub fn unit_inertia(&self) -> f64 {
        match self {
            Shape::Circle { radius } => 0.5 * radius * radius,
            Shape::Polygon { verts } => polygon_unit_inertia(verts),
            Shape::Capsule { half_len, radius } => {
                // Composite of a rectangle and two half discs.
                let (h, r) = (*half_len, *radius);
                let a_rect = 4.0 * h * r;
                let a_caps = std::f64::consts::PI * r * r;
                let i_rect = a_rect * (4.0 * h * h + 4.0 * r * r) / 12.0;
                let d = h; // half-disc centroid offset approximated at the segment end
                let i_caps = a_caps * (0.5 * r * r + d * d);
                (i_rect + i_caps) / (a_rect + a_caps)
            }
        }
    }

    /// Radius of the smallest origin-centered circle containing the shape.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Shape::Circle { radius } => *radius,
            Shape::Polygon { verts } => verts.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Shape::Capsule { half_len, radius } => half_len + radius,
        }
    }

    /// Does the body-frame point lie on or inside the shape?
    pub fn contains_local(&self, p: Vec2, tol: f64) -> bool {
        match self {
            Shape::Circle { radius } => p.norm() <= radius + tol,
            Shape::Polygon { verts } => {
                let n = verts.len();
                (0..n).all(|i| {
                    let a = verts[i];
                    let b = verts[(i + 1) % n];
                    (b - a).cross(p - a) >= -tol
                })
            }
            Shape::Capsule { half_len, radius } => {
                let cx = p.x.clamp(-half_len, *half_len);
                vec2(p.x - cx, p.y).norm() <= radius + tol
            }
        }
    }
}

pub fn polygon_area(verts: &[Vec2]) -> f64 {
    let n = verts.len();
    let mut a = 0.0;
    for i in 0..n {
        a += verts[i].cross(verts[(i + 1) % n]);
    }
    0.5 * a
}

fn polygon_unit_inertia(verts: &[Vec2]) -> f64 {
    // Second polar moment about the origin, normalized by area; verts are
    // assumed centered near their centroid (we shift to centroid below).
    let area = polygon_area(verts);
    let mut cx = 0.0;
    let mut cy = 0.0;
    let n = verts.len();
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let w = a.cross(b);
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    let c = vec2(cx / (6.0 * area), cy / (6.0 * area));
    let mut num = 0.0;
    for i in 0..n {
        let a = verts[i] - c;
        let b = verts[(i + 1) % n] - c;
        let w = a.cross(b);
        num += w * (a.dot(a) + a.dot(b) + b.dot(b));
    }
    num / (12.0 * area)
}

pub fn closest_point_on_segment(a: Vec2, b: Vec2, p: Vec2) -> Vec2 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    a + ab * t
}

/// Closest pair of points between two segments.
pub fn closest_points_segments(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> (Vec2, Vec2) {
    // Sample candidate pairs from endpoint projections; exact enough for
    // contact generation between thin capsules.
    let candidates = [
        (closest_point_on_segment(a0, a1, b0), b0),
        (closest_point_on_segment(a0, a1, b1), b1),
        (a0, closest_point_on_segment(b0, b1, a0)),
        (a1, closest_point_on_segment(b0, b1, a1)),
    ];
    let mut best = candidates[0];
    let mut best_d = (best.0 - best.1).norm_sq();
    for &(p, q) in &candidates[1..] {
        let d = (p - q).norm_sq();
        if d < best_d {
            best_d = d;
            best = (p, q);
        }
    }
    best
}

/// A single contact point with penetration depth (> 0 means overlap).
#[derive(Copy, Clone, Debug)]
pub struct ContactPoint {
    pub point: Vec2,
    pub depth: f64,
}

/// Contact manifold between two convex shapes.
#[derive(Clone, Debug)]
pub struct Manifold {
    /// Unit normal pointing from shape A toward shape B.
    pub normal: Vec2,
    pub points: Vec<ContactPoint>,
}

/// Narrow-phase contact between two posed shapes. Returns `None` when the
/// shapes are separated by more than `margin`.
pub fn contact(sa: &Shape, pa: Pose2, sb: &Shape, pb: Pose2, margin: f64) -> Option<Manifold> {
    use Shape::*;
    match (sa, sb) {
        (Circle { radius: ra }, Circle { radius: rb }) => {
            circle_circle(pa.pos, *ra, pb.pos, *rb, margin)
        }
        (Circle { radius }, Polygon { verts }) => {
            circle_polygon(pa.pos, *radius, verts, pb, margin)
        }
        (Polygon { verts }, Circle { radius }) => {
            circle_polygon(pb.pos, *radius, verts, pa, margin).map(flip)
        }
        (Circle { radius: ra }, Capsule { half_len, radius: rb }) => {
            let (b0, b1) = capsule_segment(pb, *half_len);
            let q = closest_point_on_segment(b0, b1, pa.pos);
            circle_circle(pa.pos, *ra, q, *rb, margin)
        }
        (Capsule { half_len, radius: ra }, Circle { radius: rb }) => {
            let (a0, a1) = capsule_segment(pa, *half_len);
            let q = closest_point_on_segment(a0, a1, pb.pos);
            circle_circle(q, *ra, pb.pos, *rb, margin)
        }
        (Capsule { half_len: ha, radius: ra }, Capsule { half_len: hb, radius: rb }) => {
            let (a0, a1) = capsule_segment(pa, *ha);
            let (b0, b1) = capsule_segment(pb, *hb);
            let (p, q) = closest_points_segments(a0, a1, b0, b1);
            circle_circle(p, *ra, q, *rb, margin)
        }
        (Capsule { half_len, radius }, Polygon { verts }) => {
            capsule_polygon(pa, *half_len, *radius, verts, pb, margin)
        }
        (Polygon { verts }, Capsule { half_len, radius }) => {
            capsule_polygon(pb, *half_len, *radius, verts, pa, margin).map(flip)
        }
        (Polygon { verts: va }, Polygon { verts: vb }) => {
            polygon_polygon(va, pa, vb, pb, margin)
        }
    }
}

fn flip(mut m: Manifold) -> Manifold {
    m.normal = -m.normal;
    m
}

fn capsule_segment(pose: Pose2, half_len: f64) -> (Vec2, Vec2) {
    (
        pose.transform(vec2(-half_len, 0.0)),
        pose.transform(vec2(half_len, 0.0)),
    )
}

fn circle_circle(ca: Vec2, ra: f64, cb: Vec2, rb: f64, margin: f64) -> Option<Manifold> {
    let d = cb - ca;
    let dist = d.norm();
    let depth = ra + rb - dist;
    if depth < -margin {
        return None;
    }
    let normal = if dist > 1e-12 { d / dist } else { vec2(0.0, 1.0) };
    let point = ca + normal * (ra - 0.5 * depth);
    Some(Manifold {
        normal,
        points: vec![ContactPoint { point, depth }],
    })
}

fn circle_polygon(
    center: Vec2,
    radius: f64,
    verts: &[Vec2],
    poly_pose: Pose2,
    margin: f64,
) -> Option<Manifold> {
    let local = poly_pose.inv_transform(center);
    let n = verts.len();

    // Deepest separating edge, or closest feature when outside.
    let mut sep = f64::NEG_INFINITY;
    let mut sep_i = 0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let edge_n = (b - a).perp().normalized() * -1.0; // outward for CCW
        let s = edge_n.dot(local - a);
        if s > sep {
            sep = s;
            sep_i = i;
        }
    }

    let (normal_local, depth, point_local) = if sep < 0.0 {
        // Center inside the polygon: push out along the least-penetrating face.
        let a = verts[sep_i];
        let b = verts[(sep_i + 1) % n];
        let edge_n = (b - a).perp().normalized() * -1.0;
        (-edge_n, radius - sep, local - edge_n * (radius * 0.5))
    } else {
        let a = verts[sep_i];
        let b = verts[(sep_i + 1) % n];
        let q = closest_point_on_segment(a, b, local);
        let d = local - q;
        let dist = d.norm();
        let depth = radius - dist;
        if depth < -margin {
            return None;
        }
        let nrm = if dist > 1e-12 { d / dist } else { (b - a).perp().normalized() * -1.0 };
        (-nrm, depth, q)
    };

    // Normal points circle -> polygon.
    Some(Manifold {
        normal: poly_pose.rotate(normal_local),
        points: vec![ContactPoint {
            point: poly_pose.transform(point_local),
            depth,
        }],
    })
}

fn capsule_polygon(
    cap_pose: Pose2,
    half_len: f64,
    radius: f64,
    verts: &[Vec2],
    poly_pose: Pose2,
    margin: f64,
) -> Option<Manifold> {
    // Contact at both capsule endpoints plus the segment point closest to the
    // polygon, keeping up to two deepest points for a stable manifold.
    let (e0, e1) = capsule_segment(cap_pose, half_len);
    let mut candidates: Vec<Manifold> = Vec::new();
    for &p in &[e0, e1, e0.lerp(e1, 0.5)] {
        if let Some(m) = circle_polygon(p, radius, verts, poly_pose, margin) {
            candidates.push(m);
        }
    }
    // Also the polygon vertex closest to the segment.
    let mut best_v: Option<(f64, Vec2)> = None;
    for &v in verts {
        let w = poly_pose.transform(v);
        let q = closest_point_on_segment(e0, e1, w);
        let d = (w - q).norm_sq();
        if best_v.map_or(true, |(bd, _)| d < bd) {
            best_v = Some((d, w));
        }
    }
    if let Some((_, w)) = best_v {
        let q = closest_point_on_segment(e0, e1, w);
        if let Some(m) = circle_circle(q, radius, w, 0.0, margin) {
            candidates.push(m);
        }
    }
    if candidates.is_empty() {
        return None;
    }
    candidates.sort_by(|a, b| {
        b.points[0]
            .depth
            .partial_cmp(&a.points[0].depth)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let primary = candidates[0].clone();
    let mut points = primary.points.clone();
    for c in candidates.iter().skip(1) {
        if c.normal.dot(primary.normal) > 0.98
            && c.points[0].depth > -margin
            && points
                .iter()
                .all(|p| (p.point - c.points[0].point).norm() > 1e-4)
        {
            points.push(c.points[0]);
            break;
        }
    }
    Some(Manifold {
        normal: primary.normal,
        points,
    })
}

fn polygon_polygon(
    va: &[Vec2],
    pa: Pose2,
    vb: &[Vec2],
    pb: Pose2,
    margin: f64,
) -> Option<Manifold> {
    let wa: Vec<Vec2> = va.iter().map(|&v| pa.transform(v)).collect();
    let wb: Vec<Vec2> = vb.iter().map(|&v| pb.transform(v)).collect();

    let (sep_a, face_a) = max_separation(&wa, &wb);
    if sep_a > margin {
        return None;
    }
    let (sep_b, face_b) = max_separation(&wb, &wa);
    if sep_b > margin {
        return None;
    }

    // Reference face on the polygon with the larger separation.
    let (refv, incv, ref_face, flip_normal) = if sep_b > sep_a + 1e-10 {
        (&wb, &wa, face_b, true)
    } else {
        (&wa, &wb, face_a, false)
    };

    let n = refv.len();
    let r0 = refv[ref_face];
    let r1 = refv[(ref_face + 1) % n];
    let ref_normal = (r1 - r0).perp().normalized() * -1.0;

    // Most anti-parallel incident face.
    let m = incv.len();
    let mut inc_face = 0;
    let mut min_dot = f64::INFINITY;
    for i in 0..m {
        let a = incv[i];
        let b = incv[(i + 1) % m];
        let nrm = (b - a).perp().normalized() * -1.0;
        let d = nrm.dot(ref_normal);
        if d < min_dot {
            min_dot = d;
            inc_face = i;
        }
    }
    let mut i0 = incv[inc_face];
    let mut i1 = incv[(inc_face + 1) % m];

    // Clip incident face to the reference face side planes.
    let tangent = (r1 - r0).normalized();
    for &(axis, offset) in &[(-tangent, -tangent.dot(r0)), (tangent, tangent.dot(r1))] {
        let d0 = axis.dot(i0) - offset;
        let d1 = axis.dot(i1) - offset;
        if d0 > 0.0 && d1 > 0.0 {
            return None;
        }
        if d0 > 0.0 {
            i0 = i0.lerp(i1, d0 / (d0 - d1));
        } else if d1 > 0.0 {
            i1 = i1.lerp(i0, d1 / (d1 - d0));
        }
    }

    let mut points = Vec::with_capacity(2);
    for &p in &[i0, i1] {
        let depth = ref_normal.dot(r0 - p);
        if depth > -margin {
            points.push(ContactPoint { point: p, depth });
        }
    }
    if points.is_empty() {
        return None;
    }
    let normal = if flip_normal { -ref_normal } else { ref_normal };
    Some(Manifold { normal, points })
}

/// Largest separation of `other`'s vertices over `poly`'s face normals
/// (world-space vertices). Returns (separation, face index).
fn max_separation(poly: &[Vec2], other: &[Vec2]) -> (f64, usize) {
    let n = poly.len();
    let mut best = f64::NEG_INFINITY;
    let mut best_i = 0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let nrm = (b - a).perp().normalized() * -1.0;
        let mut min_d = f64::INFINITY;
        for &v in other {
            min_d = min_d.min(nrm.dot(v - a));
        }
        if min_d > best {
            best = min_d;
            best_i = i;
        }
    }
    (best, best_i)
}

/// Signed distance between two posed shapes (negative when overlapping).
pub fn distance(sa: &Shape, pa: Pose2, sb: &Shape, pb: Pose2) -> f64 {
    // Run contact with a huge margin and read the deepest point.
    let big = 1e6;
    match contact(sa, pa, sb, pb, big) {
        Some(m) => -m.points.iter().map(|p| p.depth).fold(f64::NEG_INFINITY, f64::max),
        None => big,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_wrap_range() {
        assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(wrap_angle(0.0), 0.0);
        let a = wrap_angle(-std::f64::consts::PI);
        assert!(a > 0.0 && (a - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn pose_roundtrip() {
        let p = pose2(1.0, -2.0, 0.7);
        let v = vec2(0.3, 0.4);
        let w = p.transform(v);
        let back = p.inv_transform(w);
        assert!((back - v).norm() < 1e-12);
    }

    #[test]
    fn circle_circle_overlap() {
        let a = Shape::circle(1.0);
        let b = Shape::circle(1.0);
        let m = contact(&a, pose2(0.0, 0.0, 0.0), &b, pose2(1.5, 0.0, 0.0), 0.0).unwrap();
        assert!((m.normal - vec2(1.0, 0.0)).norm() < 1e-12);
        assert!((m.points[0].depth - 0.5).abs() < 1e-12);
    }

    #[test]
    fn circle_polygon_face_contact() {
        let floor = Shape::rect(10.0, 0.5);
        let ball = Shape::circle(0.2);
        // Ball resting slightly into the top face (floor top at y=0.5).
        let m = contact(
            &ball,
            pose2(0.0, 0.69, 0.0),
            &floor,
            pose2(0.0, 0.0, 0.0),
            0.0,
        )
        .unwrap();
        assert!((m.normal - vec2(0.0, -1.0)).norm() < 1e-9);
        assert!((m.points[0].depth - 0.01).abs() < 1e-9);
    }

    #[test]
    fn polygon_polygon_resting_manifold() {
        let floor = Shape::rect(10.0, 0.5);
        let boxy = Shape::rect(0.3, 0.3);
        let m = contact(
            &floor,
            pose2(0.0, 0.0, 0.0),
            &boxy,
            pose2(0.0, 0.79, 0.0),
            0.0,
        )
        .unwrap();
        assert_eq!(m.points.len(), 2);
        assert!((m.normal - vec2(0.0, 1.0)).norm() < 1e-9);
        for p in &m.points {
            assert!((p.depth - 0.01).abs() < 1e-9);
        }
    }

    #[test]
    fn separated_returns_none() {
        let a = Shape::circle(0.1);
        let b = Shape::rect(0.1, 0.1);
        assert!(contact(&a, pose2(0.0, 5.0, 0.0), &b, Pose2::IDENTITY, 0.0).is_none());
    }

    #[test]
    fn polygon_inertia_matches_rect_formula() {
        let s = Shape::rect(0.5, 0.25);
        // Rectangle: (w^2 + h^2) / 12 with w=1.0, h=0.5.
        let expect = (1.0f64.powi(2) + 0.5f64.powi(2)) / 12.0;
        assert!((s.unit_inertia() - expect).abs() < 1e-12);
    }

    #[test]
    fn capsule_polygon_side_contact() {
        let cap = Shape::capsule(0.2, 0.05);
        let wall = Shape::rect(0.1, 1.0);
        let m = contact(&cap, pose2(-0.32, 0.0, 0.0), &wall, Pose2::IDENTITY, 0.0).unwrap();
        assert!(m.normal.x > 0.9);
    }
}
