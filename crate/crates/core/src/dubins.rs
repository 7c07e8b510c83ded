//! Directed points, Dubins circles, CS edges and shortest CSC paths.
//!
//! Paths and networks follow the symmetric convention: a path joining
//! directed points `a` and `b` leaves `a` along its heading and arrives at `b`
//! travelling against `b`'s heading.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    common_tangent, normalize_angle, tangent_points_from_external, Branch, Circle, Orientation,
    Point2, TangentKind, DEGENERACY_TOL,
};

/// A terminal position with its required tangent direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedPoint {
    pub position: Point2,
    /// Heading in `[0, 2π)`.
    pub heading: f64,
}

impl DirectedPoint {
    pub fn new(position: Point2, heading: f64) -> Self {
        Self { position, heading: normalize_angle(heading) }
    }

    pub fn direction(&self) -> Point2 {
        Point2::unit(self.heading)
    }

    /// Same position, opposite heading.
    pub fn reversed(&self) -> Self {
        Self::new(self.position, self.heading + PI)
    }

    pub fn dubins_circle(&self, side: CircleChoice) -> Circle {
        let (left, right) = dubins_circles(self);
        match side {
            CircleChoice::Left => left,
            CircleChoice::Right => right,
        }
    }
}

/// Which Dubins circle an edge turns on. Left is counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CircleChoice {
    Left,
    Right,
}

impl CircleChoice {
    pub const BOTH: [CircleChoice; 2] = [CircleChoice::Left, CircleChoice::Right];

    pub fn orientation(self) -> Orientation {
        match self {
            CircleChoice::Left => Orientation::Ccw,
            CircleChoice::Right => Orientation::Cw,
        }
    }

    pub fn sign(self) -> f64 {
        self.orientation().sign()
    }

    pub fn letter(self) -> char {
        match self {
            CircleChoice::Left => 'L',
            CircleChoice::Right => 'R',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'L' => Some(CircleChoice::Left),
            'R' => Some(CircleChoice::Right),
            _ => None,
        }
    }
}

/// The two unit circles tangent to the heading at the terminal.
pub fn dubins_circles(dp: &DirectedPoint) -> (Circle, Circle) {
    let normal = dp.direction().perp();
    (
        Circle::oriented(dp.position + normal, 1.0, Orientation::Ccw),
        Circle::oriented(dp.position - normal, 1.0, Orientation::Cw),
    )
}

/// Sweep in `[0, 2π)` travelling around `centre` from `from` to `to` in the
/// sense given by `sign` (+1 counter-clockwise).
pub(crate) fn arc_sweep(centre: Point2, from: Point2, to: Point2, sign: f64) -> f64 {
    let a0 = (from - centre).angle();
    let a1 = (to - centre).angle();
    let sweep = normalize_angle(sign * (a1 - a0));
    if TAU - sweep < 1e-10 {
        0.0
    } else {
        sweep
    }
}

/// An arc on a Dubins circle followed by a straight segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsEdge {
    pub start: DirectedPoint,
    pub circle: Circle,
    /// Polar angle of the start point about the circle centre.
    pub arc_start: f64,
    /// Signed sweep; positive counter-clockwise.
    pub arc_sweep: f64,
    pub tangent_point: Point2,
    pub segment_end: Point2,
    pub arc_length: f64,
    pub segment_length: f64,
}

impl CsEdge {
    pub fn length(&self) -> f64 {
        self.arc_length + self.segment_length
    }

    /// Unit direction of travel along the straight segment. For a zero-length
    /// segment this is the arc's tangent at its end.
    pub fn segment_direction(&self) -> Point2 {
        if self.segment_length > 1e-12 {
            (self.segment_end - self.tangent_point) / self.segment_length
        } else {
            let r = self.tangent_point - self.circle.centre;
            r.perp().normalized() * self.circle.orientation.sign()
        }
    }

    /// Point at arc length `s` from the terminal.
    pub fn point_at(&self, s: f64) -> Point2 {
        let s = s.clamp(0.0, self.length());
        if s <= self.arc_length {
            let sign = self.arc_sweep.signum();
            self.circle.point_at(self.arc_start + sign * s / self.circle.radius)
        } else {
            self.tangent_point + self.segment_direction() * (s - self.arc_length)
        }
    }

    pub fn scaled(&self, k: f64) -> CsEdge {
        CsEdge {
            start: DirectedPoint::new(self.start.position * k, self.start.heading),
            circle: Circle::oriented(self.circle.centre * k, self.circle.radius * k, self.circle.orientation),
            arc_start: self.arc_start,
            arc_sweep: self.arc_sweep,
            tangent_point: self.tangent_point * k,
            segment_end: self.segment_end * k,
            arc_length: self.arc_length * k,
            segment_length: self.segment_length * k,
        }
    }
}

/// Tangent point on a unit Dubins circle from which a segment toward
/// `target` continues the circle's sense of travel.
pub(crate) fn departure_point(circle: &Circle, target: Point2) -> Result<Point2> {
    let v = target - circle.centre;
    let dist = v.norm();
    if dist < circle.radius - DEGENERACY_TOL {
        return Err(Error::TargetInsideCircle);
    }
    let (ccw_first, cw_first) = tangent_points_from_external(circle, target)?;
    // Counter-clockwise travel leaves from the clockwise-side tangent point.
    Ok(match circle.orientation {
        Orientation::Cw => ccw_first,
        _ => cw_first,
    })
}

/// The CS edge from terminal `dp` turning on its `side` circle and ending at
/// `target`.
pub fn cs_edge(dp: &DirectedPoint, side: CircleChoice, target: Point2) -> Result<CsEdge> {
    let circle = dp.dubins_circle(side);
    let tangent_point = departure_point(&circle, target)?;
    let sign = side.sign();
    let sweep = arc_sweep(circle.centre, dp.position, tangent_point, sign);
    let segment_length = target.distance(tangent_point);
    Ok(CsEdge {
        start: *dp,
        circle,
        arc_start: (dp.position - circle.centre).angle(),
        arc_sweep: sign * sweep,
        tangent_point,
        segment_end: target,
        arc_length: sweep,
        segment_length,
    })
}

/// Length of [`cs_edge`] without materializing it; `None` when the target is
/// inside the circle.
pub fn cs_length(dp: &DirectedPoint, side: CircleChoice, target: Point2) -> Option<f64> {
    let sign = side.sign();
    let centre = dp.position + dp.direction().perp() * sign;
    let v = target - centre;
    let d2 = v.norm_sq();
    if d2 < 1.0 - 2.0 * DEGENERACY_TOL {
        return None;
    }
    let dist = d2.sqrt();
    let gamma = (1.0 / dist).min(1.0).acos();
    let tangent_angle = v.angle() - sign * gamma;
    let start_angle = (dp.position - centre).angle();
    let mut sweep = normalize_angle(sign * (tangent_angle - start_angle));
    if TAU - sweep < 1e-10 {
        sweep = 0.0;
    }
    Some(sweep + (d2 - 1.0).max(0.0).sqrt())
}

/// The four CSC word types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CscType {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
}

impl CscType {
    pub const ALL: [CscType; 4] = [CscType::Lsl, CscType::Rsr, CscType::Lsr, CscType::Rsl];

    pub fn sides(self) -> (CircleChoice, CircleChoice) {
        use CircleChoice::*;
        match self {
            CscType::Lsl => (Left, Left),
            CscType::Rsr => (Right, Right),
            CscType::Lsr => (Left, Right),
            CscType::Rsl => (Right, Left),
        }
    }
}

impl fmt::Display for CscType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CscType::Lsl => "LSL",
            CscType::Rsr => "RSR",
            CscType::Lsr => "LSR",
            CscType::Rsl => "RSL",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CscPath {
    pub kind: CscType,
    /// Departure and arrival circles.
    pub circles: [Circle; 2],
    /// Where the straight segment leaves the first circle and meets the second.
    pub tangent_points: [Point2; 2],
    /// Unsigned sweeps of the two arcs.
    pub sweeps: [f64; 2],
    pub segment_length: f64,
    pub length: f64,
}

fn csc_candidate(a: &DirectedPoint, b: &DirectedPoint, kind: CscType) -> Result<CscPath> {
    let (side_a, side_b) = kind.sides();
    // Arrival at b runs against b's heading.
    let arrive = b.reversed();
    let ca = a.dubins_circle(side_a);
    let cb = arrive.dubins_circle(side_b);
    let (ta, tb) = if ca.centre.distance(cb.centre) <= DEGENERACY_TOL {
        if side_a != side_b {
            return Err(Error::NoSuchTangent);
        }
        (a.position, a.position)
    } else {
        let (tk, br) = match kind {
            CscType::Lsl => (TangentKind::External, Branch::Minus),
            CscType::Rsr => (TangentKind::External, Branch::Plus),
            CscType::Lsr => (TangentKind::Internal, Branch::Minus),
            CscType::Rsl => (TangentKind::Internal, Branch::Plus),
        };
        common_tangent(&ca, &cb, tk, br)?
    };
    let s1 = arc_sweep(ca.centre, a.position, ta, side_a.sign());
    let s2 = arc_sweep(cb.centre, tb, arrive.position, side_b.sign());
    let seg = ta.distance(tb);
    Ok(CscPath {
        kind,
        circles: [ca, cb],
        tangent_points: [ta, tb],
        sweeps: [s1, s2],
        segment_length: seg,
        length: s1 + seg + s2,
    })
}

/// All feasible CSC candidates between `a` and `b`.
pub fn csc_candidates(a: &DirectedPoint, b: &DirectedPoint) -> Vec<CscPath> {
    CscType::ALL.iter().filter_map(|&k| csc_candidate(a, b, k).ok()).collect()
}

/// Shortest CSC path from `a` to `b` (arriving against `b`'s heading).
pub fn dubins_csc(a: &DirectedPoint, b: &DirectedPoint) -> Result<CscPath> {
    csc_candidates(a, b)
        .into_iter()
        .min_by(|x, y| x.length.total_cmp(&y.length))
        .ok_or(Error::NoCscPath)
}
