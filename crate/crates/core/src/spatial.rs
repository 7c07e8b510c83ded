//! Minimum curvature-constrained Steiner point in 3D.
//!
//! Alternates between the weighted planar construction on the projected
//! terminals and a lift step: arcs are unrolled onto the segment lines, a
//! plane is fitted through the unrolled points at terminal heights, the
//! junction height is read off that plane, and edge gradients give the next
//! weights `w_i = 1/√(1+g_i²)`. Edges are modelled as constant-gradient lifts
//! of their planar curves, so a 3D edge is `√(1+g²)` times its planar length.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::config::{all_choices, SolveConfig};
use crate::dubins::{CircleChoice, CsEdge, DirectedPoint};
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::planar::{solve_choices, DubinsNetwork, PlanarReport, Weights};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn xy(self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

impl Sub for Point3 {
    type Output = Point3;

    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Add for Point3 {
    type Output = Point3;

    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;

    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

/// A terminal in space; the heading is horizontal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Terminal3 {
    pub position: Point3,
    pub heading: f64,
}

impl Terminal3 {
    pub fn new(position: Point3, heading: f64) -> Self {
        Self { position, heading: crate::geom::normalize_angle(heading) }
    }

    pub fn projected(&self) -> DirectedPoint {
        DirectedPoint::new(self.position.xy(), self.heading)
    }
}

/// A terminal's arc unrolled onto the line of its straight segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftedPoint {
    pub planar: Point2,
    pub height: f64,
    pub arc_angle: f64,
    /// The arc turns through more than a half-turn; the unrolled length is
    /// the arc sweep rather than the arccos angle.
    pub arc_exceeds_half_turn: bool,
}

/// Unrolls the edge's arc: the lifted point lies on the line from the
/// junction through the tangent point, beyond the tangent point by the arc
/// angle.
pub fn lift_point(edge: &CsEdge, terminal: &Terminal3, junction: Point2) -> Result<LiftedPoint> {
    let t = edge.tangent_point;
    let to_t = t - junction;
    let run = to_t.norm();
    if run <= 1e-12 {
        return Err(Error::ZeroSegment);
    }
    let r = t - edge.circle.centre;
    let r_start = terminal.position.xy() - edge.circle.centre;
    let cos = r_start.dot(r) / (r_start.norm() * r.norm());
    let mut beta = cos.clamp(-1.0, 1.0).acos();
    let exceeds = edge.arc_length > std::f64::consts::PI + 1e-9;
    if exceeds {
        beta = edge.arc_length / edge.circle.radius;
    }
    Ok(LiftedPoint {
        planar: t + to_t / run * (beta * edge.circle.radius),
        height: terminal.position.z,
        arc_angle: beta,
        arc_exceeds_half_turn: exceeds,
    })
}

/// Plane `n · (p - point) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane3 {
    pub normal: Point3,
    pub point: Point3,
}

impl Plane3 {
    pub fn residual(&self, p: Point3) -> f64 {
        self.normal.dot(p - self.point)
    }
}

pub fn fit_plane(q1: Point3, q2: Point3, q3: Point3) -> Result<Plane3> {
    let normal = (q2 - q1).cross(q3 - q1);
    if normal.norm() <= 1e-12 {
        return Err(Error::CollinearPoints);
    }
    Ok(Plane3 { normal, point: q1 })
}

/// Height of the plane above `(x, y)`.
pub fn junction_height(plane: &Plane3, at: Point2) -> Result<f64> {
    let Point3 { x: a, y: b, z: c } = plane.normal;
    if c.abs() <= 1e-12 {
        return Err(Error::VerticalPlane);
    }
    let p0 = plane.point;
    Ok(p0.z - (a * (at.x - p0.x) + b * (at.y - p0.y)) / c)
}

/// Rise over horizontal run from each lifted point to the junction.
pub fn edge_gradients(lifted: &[LiftedPoint; 3], junction: Point2, height: f64) -> Result<[f64; 3]> {
    let mut g = [0.0; 3];
    for (gi, lp) in g.iter_mut().zip(lifted) {
        let run = junction.distance(lp.planar);
        if run <= 1e-12 {
            return Err(Error::VerticalEdge);
        }
        *gi = (height - lp.height).abs() / run;
    }
    Ok(g)
}

pub fn weights_from_gradients(g: &[f64; 3]) -> Weights {
    Weights(g.map(|gi| 1.0 / (1.0 + gi * gi).sqrt()))
}

/// Converged (or best) iterate of the spatial solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialNetwork {
    /// Planar network solved with the weights of the previous iterate.
    pub planar_network: DubinsNetwork,
    pub junction_height: f64,
    pub lifted: [LiftedPoint; 3],
    pub plane: Plane3,
    pub gradients: [f64; 3],
    /// Weights implied by `gradients`.
    pub weights: Weights,
    pub total_3d_length: f64,
    pub iterations: usize,
    /// `total_3d_length` after each iteration.
    pub history: Vec<f64>,
}

impl SpatialNetwork {
    pub fn junction(&self) -> Point3 {
        let j = self.planar_network.junction;
        Point3::new(j.x, j.y, self.junction_height)
    }

    pub fn arc_exceeds_half_turn(&self) -> bool {
        self.lifted.iter().any(|l| l.arc_exceeds_half_turn)
    }

    fn scaled(mut self, k: f64) -> Self {
        self.planar_network = self.planar_network.scaled(k);
        self.junction_height *= k;
        for l in &mut self.lifted {
            l.planar = l.planar * k;
            l.height *= k;
        }
        let n = self.plane.normal;
        self.plane = Plane3 {
            normal: Point3::new(n.x * k * k, n.y * k * k, n.z * k * k),
            point: Point3::new(self.plane.point.x * k, self.plane.point.y * k, self.plane.point.z * k),
        };
        self.total_3d_length *= k;
        for h in &mut self.history {
            *h *= k;
        }
        self
    }
}

struct Step {
    network: DubinsNetwork,
    lifted: [LiftedPoint; 3],
    plane: Plane3,
    height: f64,
    gradients: [f64; 3],
    length: f64,
}

fn lift_step(terminals: &[Terminal3; 3], network: DubinsNetwork) -> Result<Step> {
    let j = network.junction;
    let lifted = [
        lift_point(&network.edges[0], &terminals[0], j)?,
        lift_point(&network.edges[1], &terminals[1], j)?,
        lift_point(&network.edges[2], &terminals[2], j)?,
    ];
    let q = lifted.map(|l| Point3::new(l.planar.x, l.planar.y, l.height));
    let plane = fit_plane(q[0], q[1], q[2])?;
    let height = junction_height(&plane, j)?;
    let gradients = edge_gradients(&lifted, j, height)?;
    let length = (0..3).map(|i| network.edges[i].length() * (1.0 + gradients[i].powi(2)).sqrt()).sum();
    Ok(Step { network, lifted, plane, height, gradients, length })
}

fn planar_step(
    terminals: &[Terminal3; 3],
    projected: &[DirectedPoint; 3],
    weights: Weights,
    order: &[[CircleChoice; 3]],
) -> Result<(Step, PlanarReport)> {
    let report = solve_choices(projected, weights, order)?;
    let (network, _) = report.winner()?;
    Ok((lift_step(terminals, *network)?, report))
}

fn choice_order(cfg: &SolveConfig, previous: Option<[CircleChoice; 3]>) -> Vec<[CircleChoice; 3]> {
    if let Some(t) = cfg.topology {
        return vec![t];
    }
    let mut order = all_choices().to_vec();
    if let Some(p) = previous {
        order.retain(|c| *c != p);
        order.insert(0, p);
    }
    order
}

fn average(a: Weights, b: Weights) -> Weights {
    Weights([0, 1, 2].map(|i| 0.5 * (a.0[i] + b.0[i])))
}

/// Runs the alternating planar/lift iteration until successive lengths agree
/// within `cfg.epsilon`.
pub fn solve_spatial(terminals: &[Terminal3; 3], cfg: &SolveConfig) -> Result<SpatialNetwork> {
    let rho = cfg.rho;
    let normalized = terminals.map(|t| {
        let p = t.position;
        Terminal3::new(Point3::new(p.x / rho, p.y / rho, p.z / rho), t.heading)
    });
    let result = iterate(&normalized, cfg);
    let rescale = |n: SpatialNetwork| if rho == 1.0 { n } else { n.scaled(rho) };
    match result {
        Ok(n) => Ok(rescale(n)),
        Err(Error::MaxIterationsExceeded(n)) => Err(Error::MaxIterationsExceeded(Box::new(rescale(*n)))),
        Err(e) => Err(e),
    }
}

fn iterate(terminals: &[Terminal3; 3], cfg: &SolveConfig) -> Result<SpatialNetwork> {
    let projected = terminals.map(|t| t.projected());
    let mut weights = Weights::EQUAL;
    let mut previous_weights = Weights::EQUAL;
    let mut previous_choice = None;
    let mut previous_length: Option<f64> = None;
    let mut history = Vec::new();
    let mut best: Option<SpatialNetwork> = None;

    for iteration in 1..=cfg.max_iter.max(1) {
        let order = choice_order(cfg, previous_choice);
        let (mut step, _) = planar_step(terminals, &projected, weights, &order)?;
        if let Some(prev) = previous_length {
            let mut trial = weights;
            for _ in 0..8 {
                if step.length <= prev + cfg.epsilon {
                    break;
                }
                trial = average(previous_weights, trial);
                match planar_step(terminals, &projected, trial, &order) {
                    Ok((s, _)) => step = s,
                    Err(_) => break,
                }
            }
        }
        history.push(step.length);
        previous_choice = Some(step.network.choices);

        let next_weights = weights_from_gradients(&step.gradients);
        let network = SpatialNetwork {
            planar_network: step.network,
            junction_height: step.height,
            lifted: step.lifted,
            plane: step.plane,
            gradients: step.gradients,
            weights: next_weights,
            total_3d_length: step.length,
            iterations: iteration,
            history: history.clone(),
        };
        let converged = previous_length.is_some_and(|p| (step.length - p).abs() < cfg.epsilon);
        if converged {
            return Ok(network);
        }
        if best.as_ref().is_none_or(|b| network.total_3d_length < b.total_3d_length) {
            best = Some(network);
        }
        previous_length = Some(step.length);
        previous_weights = weights;
        weights = next_weights;
    }
    let mut best = best.expect("at least one iteration");
    best.history = history;
    Err(Error::MaxIterationsExceeded(Box::new(best)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Circle, Orientation};
    use std::f64::consts::PI;

    #[test]
    fn lift_zero_arc() {
        let dp = DirectedPoint::new(Point2::new(0.0, 0.0), 0.0);
        let edge = crate::dubins::cs_edge(&dp, CircleChoice::Left, Point2::new(6.0, 0.0)).unwrap();
        let t = Terminal3::new(Point3::new(0.0, 0.0, 1.0), 0.0);
        let lp = lift_point(&edge, &t, Point2::new(6.0, 0.0)).unwrap();
        assert!(lp.arc_angle.abs() < 1e-12);
        assert!(lp.planar.distance(edge.tangent_point) < 1e-12);
    }

    #[test]
    fn lift_quarter_arc_unrolls_away_from_junction() {
        // Quarter turn from (0,-1) counter-clockwise to (1,0).
        let edge = CsEdge {
            start: DirectedPoint::new(Point2::new(0.0, -1.0), 0.0),
            circle: Circle::oriented(Point2::ORIGIN, 1.0, Orientation::Ccw),
            arc_start: -PI / 2.0,
            arc_sweep: PI / 2.0,
            tangent_point: Point2::new(1.0, 0.0),
            segment_end: Point2::new(3.0, 0.0),
            arc_length: PI / 2.0,
            segment_length: 2.0,
        };
        let t = Terminal3::new(Point3::new(0.0, -1.0, 0.0), 0.0);
        let lp = lift_point(&edge, &t, Point2::new(3.0, 0.0)).unwrap();
        assert!(lp.planar.distance(Point2::new(1.0 - PI / 2.0, 0.0)) < 1e-12);
        assert!(matches!(lift_point(&edge, &t, Point2::new(1.0, 0.0)), Err(Error::ZeroSegment)));
    }

    #[test]
    fn plane_examples() {
        let p = fit_plane(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0))
            .unwrap();
        assert_eq!(p.normal, Point3::new(0.0, 0.0, 1.0));
        let p = fit_plane(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 1.0), Point3::new(0.0, 1.0, 1.0))
            .unwrap();
        assert_eq!(p.normal, Point3::new(-1.0, -1.0, 1.0));
        let flat = fit_plane(Point3::new(3.0, 1.0, 5.0), Point3::new(-2.0, 4.0, 5.0), Point3::new(7.0, 7.0, 5.0))
            .unwrap();
        assert!((junction_height(&flat, Point2::new(123.0, -45.0)).unwrap() - 5.0).abs() < 1e-12);
        assert!(matches!(
            fit_plane(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 1.0, 1.0), Point3::new(2.0, 2.0, 2.0)),
            Err(Error::CollinearPoints)
        ));
    }

    #[test]
    fn height_examples() {
        let tilted = Plane3 { normal: Point3::new(0.0, -1.0, 1.0), point: Point3::default() };
        assert!((junction_height(&tilted, Point2::new(7.0, 3.0)).unwrap() - 3.0).abs() < 1e-12);
        let vertical = Plane3 { normal: Point3::new(1.0, 0.0, 0.0), point: Point3::default() };
        assert!(matches!(junction_height(&vertical, Point2::new(1.0, 1.0)), Err(Error::VerticalPlane)));
    }

    #[test]
    fn gradient_examples() {
        let lp = |x: f64, z: f64| LiftedPoint { planar: Point2::new(x, 0.0), height: z, arc_angle: 0.0, arc_exceeds_half_turn: false };
        let g = edge_gradients(&[lp(4.0, 0.0), lp(-4.0, 3.0), lp(0.0, 6.0)].map(|mut l| {
            if l.planar.x == 0.0 {
                l.planar.y = 4.0;
            }
            l
        }), Point2::ORIGIN, 3.0)
        .unwrap();
        assert!((g[0] - 0.75).abs() < 1e-12);
        assert!(g[1].abs() < 1e-12);
        assert!((g[2] - 0.75).abs() < 1e-12);
        assert!(matches!(
            edge_gradients(&[lp(0.0, 0.0), lp(1.0, 0.0), lp(2.0, 0.0)], Point2::ORIGIN, 1.0),
            Err(Error::VerticalEdge)
        ));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weights_from_gradients(&[0.0; 3]), Weights::EQUAL);
        let w = weights_from_gradients(&[0.75, 1e3, 0.0]);
        assert!((w.0[0] - 0.8).abs() < 1e-12);
        assert!((w.0[1] - 1e-3).abs() < 1e-9);
        let mut last = 1.0;
        for g in [0.1, 1.0, 10.0, 100.0, 1000.0] {
            let w = weights_from_gradients(&[g; 3]).0[0];
            assert!(w < last);
            last = w;
        }
    }
}
