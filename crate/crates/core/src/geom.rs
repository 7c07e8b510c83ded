//! Planar primitives: points, circles, lines, tangents and intersections.
//!
//! Everything here works in normalized units (turning radius 1). Incidence
//! and tangency hold to [`INCIDENCE_TOL`]; degeneracy tests (collinearity,
//! point inside circle) use [`DEGENERACY_TOL`].

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const INCIDENCE_TOL: f64 = 1e-10;
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at polar angle `theta`.
    pub fn unit(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Self {
        Self { x: -self.y, y: self.x }
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> Self {
        self / self.norm()
    }

    pub fn rotated(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c * self.x - s * self.y, y: s * self.x + c * self.y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, p: Point2) -> Point2 {
        p * self
    }
}

impl Div<f64> for Point2 {
    type Output = Point2;
    fn div(self, k: f64) -> Point2 {
        Point2::new(self.x / k, self.y / k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Sense of travel around a circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Ccw,
    Cw,
    None,
}

impl Orientation {
    /// +1 for counter-clockwise, -1 for clockwise, 0 for unoriented circles.
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
            Orientation::None => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub centre: Point2,
    pub radius: f64,
    pub orientation: Orientation,
}

impl Circle {
    pub fn new(centre: Point2, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Self { centre, radius, orientation: Orientation::None }
    }

    pub fn oriented(centre: Point2, radius: f64, orientation: Orientation) -> Self {
        debug_assert!(radius >= 0.0);
        Self { centre, radius, orientation }
    }

    pub fn point_at(&self, theta: f64) -> Point2 {
        self.centre + Point2::unit(theta) * self.radius
    }

    /// Signed distance from the circle: negative inside.
    pub fn power_distance(&self, p: Point2) -> f64 {
        p.distance(self.centre) - self.radius
    }
}

/// An infinite line through `base` with unit `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line2 {
    pub base: Point2,
    pub direction: Point2,
}

impl Line2 {
    pub fn new(base: Point2, direction: Point2) -> Self {
        Self { base, direction: direction.normalized() }
    }

    pub fn through(a: Point2, b: Point2) -> Self {
        Self::new(a, b - a)
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        self.base + self.direction * t
    }

    /// Coordinate of the orthogonal projection of `p` along the direction.
    pub fn parameter_of(&self, p: Point2) -> f64 {
        (p - self.base).dot(self.direction)
    }

    /// Signed distance of `p` from the line, positive on the left.
    pub fn left_offset(&self, p: Point2) -> f64 {
        (p - self.base).dot(self.direction.perp())
    }

    pub fn foot_of(&self, p: Point2) -> Point2 {
        self.point_at(self.parameter_of(p))
    }
}

/// Which pair of common tangents to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentKind {
    /// Both circles on the same side of the line.
    External,
    /// The line separates the circles.
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_pi(theta: f64) -> f64 {
    let t = normalize_angle(theta);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Circumcircle of three points.
pub fn circle_through_points(p: Point2, q: Point2, r: Point2) -> Result<Circle> {
    let b = q - p;
    let c = r - p;
    let twice_area = b.cross(c);
    if (0.5 * twice_area).abs() <= DEGENERACY_TOL {
        return Err(Error::CollinearPoints);
    }
    let d = 2.0 * twice_area;
    let bb = b.norm_sq();
    let cc = c.norm_sq();
    let offset = Point2::new(c.y * bb - b.y * cc, b.x * cc - c.x * bb) / d;
    Ok(Circle::new(p + offset, offset.norm()))
}

/// The two points where lines through `p` touch `circle`, counter-clockwise
/// one first (as seen from the centre, turning from the direction of `p`).
pub fn tangent_points_from_external(circle: &Circle, p: Point2) -> Result<(Point2, Point2)> {
    let v = p - circle.centre;
    let dist = v.norm();
    if dist < circle.radius - DEGENERACY_TOL {
        return Err(Error::PointInsideCircle);
    }
    if dist == 0.0 {
        // Zero-radius circle at p.
        return Ok((p, p));
    }
    let phi = v.angle();
    let gamma = clamp_unit(circle.radius / dist).acos();
    Ok((circle.point_at(phi + gamma), circle.point_at(phi - gamma)))
}

/// A common tangent of two circles, returned as its touching points on `a`
/// and `b`.
///
/// With normal `n` at angle `φ ± β` (φ the direction from `a` to `b`), the
/// external tangent touches at `a + r_a n`, `b + r_b n`, and the internal one
/// at `a + r_a n`, `b - r_b n`.
pub fn common_tangent(
    a: &Circle,
    b: &Circle,
    kind: TangentKind,
    branch: Branch,
) -> Result<(Point2, Point2)> {
    let v = b.centre - a.centre;
    let dist = v.norm();
    let (num, far_sign) = match kind {
        TangentKind::External => (a.radius - b.radius, 1.0),
        TangentKind::Internal => (a.radius + b.radius, -1.0),
    };
    if dist <= DEGENERACY_TOL || num.abs() > dist + DEGENERACY_TOL {
        return Err(Error::NoSuchTangent);
    }
    let beta = clamp_unit(num / dist).acos();
    let n = Point2::unit(v.angle() + branch.sign() * beta);
    Ok((a.centre + n * a.radius, b.centre + n * (far_sign * b.radius)))
}

/// A directed line whose signed left offsets from two reference points are
/// prescribed, oriented so that travel goes from the first foot toward the
/// second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedTangent {
    /// Foot of the perpendicular from the first point.
    pub from_foot: Point2,
    /// Foot of the perpendicular from the second point.
    pub to_foot: Point2,
    /// Unit travel direction.
    pub direction: Point2,
}

impl DirectedTangent {
    pub fn line(&self) -> Line2 {
        Line2 { base: self.from_foot, direction: self.direction }
    }
}

/// Solves for the directed line having `from` at left offset `from_offset`
/// and `to` at left offset `to_offset`, travelling from `from` toward `to`.
///
/// A circle of radius 1 oriented counter-clockwise has its centre at left
/// offset +1 from any line leaving it tangentially; clockwise gives -1. This
/// is the oriented form of the common-tangent problem.
pub fn directed_tangent(
    from: Point2,
    from_offset: f64,
    to: Point2,
    to_offset: f64,
) -> Result<DirectedTangent> {
    let v = to - from;
    let dist = v.norm();
    let diff = to_offset - from_offset;
    if dist <= DEGENERACY_TOL || diff.abs() > dist + DEGENERACY_TOL {
        return Err(Error::NoSuchTangent);
    }
    let beta = clamp_unit(diff / dist).acos();
    let normal = Point2::unit(v.angle() + beta);
    // normal is the left normal of the travel direction
    let direction = -normal.perp();
    Ok(DirectedTangent {
        from_foot: from - normal * from_offset,
        to_foot: to - normal * to_offset,
        direction,
    })
}

/// Intersections of a line with a circle, ordered along the line direction.
pub fn line_circle_intersection(line: &Line2, circle: &Circle) -> Vec<Point2> {
    let t0 = line.parameter_of(circle.centre);
    let foot = line.point_at(t0);
    let h = foot.distance(circle.centre);
    if h > circle.radius + DEGENERACY_TOL {
        Vec::new()
    } else if (h - circle.radius).abs() <= DEGENERACY_TOL {
        vec![foot]
    } else {
        let half = (circle.radius * circle.radius - h * h).max(0.0).sqrt();
        vec![line.point_at(t0 - half), line.point_at(t0 + half)]
    }
}

/// Intersections of two circles. For two points, the one to the left of the
/// centre line `a -> b` comes first.
pub fn circle_circle_intersection(a: &Circle, b: &Circle) -> Vec<Point2> {
    let v = b.centre - a.centre;
    let d = v.norm();
    if d <= DEGENERACY_TOL {
        return Vec::new();
    }
    if d > a.radius + b.radius + DEGENERACY_TOL || d < (a.radius - b.radius).abs() - DEGENERACY_TOL {
        return Vec::new();
    }
    let along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    let h2 = a.radius * a.radius - along * along;
    let ahat = v / d;
    let mid = a.centre + ahat * along;
    if h2 <= 0.0 {
        return vec![mid];
    }
    let h = h2.sqrt();
    vec![mid + ahat.perp() * h, mid - ahat.perp() * h]
}
