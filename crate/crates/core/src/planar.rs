//! Exact construction of the full three-terminal weighted Dubins network in
//! the plane.
//!
//! For a fixed choice of Dubins circle at every terminal the optimal junction
//! is built with a Melzak-style construction: terminals 1 and 2 are replaced
//! by the Melzak point `m`, the Simpson line (edge 3's line) is the tangent
//! common to the Melzak circle about `m` and the third Dubins circle, the
//! point `s` sits where the parallel through `m` meets the auxiliary circle
//! through `c1, c2, m`, and the junction is `s` shifted onto the Simpson line
//! by the offset radius. The solver runs this for all eight circle choices
//! and keeps the lightest network.
//!
//! Everything works with the junction frame: unit vectors `e_i` pointing from
//! the junction toward edge `i`'s tangent point. Force balance
//! `Σ w_i e_i = 0` fixes the angles between them; `e_1` and `e_2` sit at
//! `±α_2` and `∓α_1` from `e_3`, the sign depending on which side of
//! `c1 c2` the Melzak point lies.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::{all_choices, SolveConfig};
use crate::dubins::{cs_edge, departure_point, CircleChoice, CsEdge, DirectedPoint};
use crate::error::{Error, Result};
use crate::geom::{
    circle_circle_intersection, circle_through_points, directed_tangent, line_circle_intersection,
    Circle, Line2, Point2, DEGENERACY_TOL,
};

/// Residual bound for accepting a constructed junction as stationary.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;

/// Per-unit-length edge costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights(pub [f64; 3]);

impl Weights {
    pub const EQUAL: Weights = Weights([1.0, 1.0, 1.0]);

    /// Checks positivity and the strict triangle condition.
    pub fn new(w: [f64; 3]) -> Result<Self> {
        let ok = w.iter().all(|x| x.is_finite() && *x > 0.0)
            && (0..3).all(|i| w[i] < w[(i + 1) % 3] + w[(i + 2) % 3] - DEGENERACY_TOL);
        if ok {
            Ok(Self(w))
        } else {
            Err(Error::DegenerateWeights)
        }
    }
}

/// Angles at the junction; `angles[i]` is the angle between the two edges
/// other than edge `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionAngles(pub [f64; 3]);

impl JunctionAngles {
    pub const EQUAL: JunctionAngles = JunctionAngles([2.0 * PI / 3.0; 3]);

    pub fn new(a: [f64; 3]) -> Result<Self> {
        if a.iter().any(|x| !(*x > 0.0 && *x < PI)) {
            return Err(Error::InvalidAngles(format!("{a:?} outside (0, π)")));
        }
        let sum: f64 = a.iter().sum();
        if (sum - 2.0 * PI).abs() > 1e-10 {
            return Err(Error::InvalidAngles(format!("sum {sum} is not 2π")));
        }
        Ok(Self(a))
    }

    /// Relabels terminals 1 and 2.
    pub fn swapped12(self) -> Self {
        let [a, b, c] = self.0;
        Self([b, a, c])
    }
}

/// Parity of a pair of chosen Dubins circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyParity {
    Odd,
    Even,
}

impl TopologyParity {
    /// Even when the arcs turn the same way.
    pub fn of(a: CircleChoice, b: CircleChoice) -> Self {
        if a == b {
            TopologyParity::Even
        } else {
            TopologyParity::Odd
        }
    }

    /// Parities of the pairs (1,2), (1,3), (2,3).
    pub fn pairs(choices: &[CircleChoice; 3]) -> [TopologyParity; 3] {
        [
            Self::of(choices[0], choices[1]),
            Self::of(choices[0], choices[2]),
            Self::of(choices[1], choices[2]),
        ]
    }
}

/// Junction angles from the weights by the law of cosines on the force
/// triangle.
pub fn angles_from_weights(w: &Weights) -> Result<JunctionAngles> {
    let w = Weights::new(w.0)?.0;
    let mut out = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let cos = (w[i] * w[i] - w[j] * w[j] - w[k] * w[k]) / (2.0 * w[j] * w[k]);
        out[i] = cos.clamp(-1.0, 1.0).acos();
    }
    Ok(JunctionAngles(out))
}

/// Both apexes of the triangle on `c1 c2` with exterior angles `α_1, α_2, α_3`
/// at `c1, c2, m`; the one farther from `p3` first.
pub fn melzak_points(c1: Point2, c2: Point2, p3: Point2, ang: &JunctionAngles) -> Result<[Point2; 2]> {
    let d3 = c1.distance(c2);
    if d3 <= DEGENERACY_TOL {
        return Err(Error::CoincidentCentres);
    }
    let [a1, a2, a3] = ang.0;
    let from_c1 = d3 * a2.sin() / a3.sin();
    let from_c2 = d3 * a1.sin() / a3.sin();
    let pts = circle_circle_intersection(&Circle::new(c1, from_c1), &Circle::new(c2, from_c2));
    match pts.as_slice() {
        [a, b] => {
            if a.distance(p3) >= b.distance(p3) {
                Ok([*a, *b])
            } else {
                Ok([*b, *a])
            }
        }
        _ => Err(Error::CoincidentCentres),
    }
}

/// The Melzak point on the far side of `c1 c2` from `p3`.
pub fn melzak_point(c1: Point2, c2: Point2, p3: Point2, ang: &JunctionAngles) -> Result<Point2> {
    melzak_points(c1, c2, p3, ang).map(|[far, _]| far)
}

/// Radius of the Melzak circle.
///
/// Odd: `sin α1 cot(α3/2) + cos α1`; even: `sin α1 tan(α3/2) - cos α1`.
/// With `α1 + α2 + α3 = 2π` these equal `sin((α2-α1)/2) / sin(α3/2)` and
/// `cos((α1-α2)/2) / cos(α3/2)`, which is how they are evaluated so that
/// equal angles give an exact zero in the odd case.
pub fn melzak_circle_radius(ang: &JunctionAngles, parity: TopologyParity) -> Result<f64> {
    let [a1, a2, a3] = ang.0;
    let r = match parity {
        TopologyParity::Odd => (0.5 * (a2 - a1)).sin() / (0.5 * a3).sin(),
        TopologyParity::Even => (0.5 * (a1 - a2)).cos() / (0.5 * a3).cos(),
    };
    if r < -1e-10 {
        Err(Error::NegativeRadius(r))
    } else {
        Ok(r.max(0.0))
    }
}

/// Distance between `s` and the junction: `csc(α3/2)` odd, `sec(α3/2)` even.
pub fn junction_offset_radius(ang: &JunctionAngles, parity: TopologyParity) -> f64 {
    let half = 0.5 * ang.0[2];
    match parity {
        TopologyParity::Odd => 1.0 / half.sin(),
        TopologyParity::Even => 1.0 / half.cos(),
    }
}

/// Edge directions and the junction offset `s' - s`, expressed in the frame
/// whose x-axis is `e_3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionFrame {
    pub e1: Point2,
    pub e2: Point2,
    /// `s' - s`.
    pub offset: Point2,
}

impl JunctionFrame {
    /// `clockwise` is true when `(c1, c2, m)` winds clockwise.
    pub fn new(ang: &JunctionAngles, clockwise: bool, sides: [f64; 2]) -> Self {
        let [a1, a2, _] = ang.0;
        let k = if clockwise { 1.0 } else { -1.0 };
        let e1 = Point2::new(a2.cos(), k * a2.sin());
        let e2 = Point2::new(a1.cos(), -k * a1.sin());
        // offset . perp(e_i) = sigma_i
        let det = e1.cross(e2);
        let offset = Point2::new(
            (sides[0] * e2.x - e1.x * sides[1]) / det,
            (e2.y * sides[0] - e1.y * sides[1]) / det,
        );
        Self { e1, e2, offset }
    }

    /// Signed left offset of `m` from the Simpson line travelled toward the
    /// junction.
    pub fn melzak_offset(&self) -> f64 {
        self.offset.y
    }

    /// Maps a frame vector to the plane given the world direction of `e_3`.
    pub fn to_world(v: Point2, e3: Point2) -> Point2 {
        e3 * v.x + e3.perp() * v.y
    }
}

/// Which of the two oriented tangents to take for the Simpson line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimpsonBranch {
    /// Travelling from `t3` toward the junction heads toward `m'`.
    Forward,
    /// `m'` lies behind `t3`.
    Backward,
}

/// The Simpson line: tangent to the Melzak circle at `m_prime` and to `C3`
/// at `t3`, directed from `t3` toward the junction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpsonLine {
    pub m_prime: Point2,
    pub t3: Point2,
    pub direction: Point2,
}

impl SimpsonLine {
    pub fn line(&self) -> Line2 {
        Line2 { base: self.t3, direction: self.direction }
    }
}

/// Solves for the Simpson line given the Melzak point, its signed left
/// offset from the line (`|offset|` is the Melzak circle radius) and the
/// third Dubins circle. Travel along the line leaves `C3` in its own sense
/// of rotation, so `C3`'s centre sits at left offset `+1` (CCW) or `-1` (CW).
pub fn simpson_tangency(
    m: Point2,
    melzak_offset: f64,
    c3: &Circle,
    branch: SimpsonBranch,
) -> Result<SimpsonLine> {
    let side3 = c3.orientation.sign() * c3.radius;
    match branch {
        SimpsonBranch::Forward => {
            let dt = directed_tangent(c3.centre, side3, m, melzak_offset)?;
            Ok(SimpsonLine { m_prime: dt.to_foot, t3: dt.from_foot, direction: dt.direction })
        }
        SimpsonBranch::Backward => {
            let dt = directed_tangent(m, -melzak_offset, c3.centre, -side3)?;
            Ok(SimpsonLine { m_prime: dt.from_foot, t3: dt.to_foot, direction: -dt.direction })
        }
    }
}

/// Where the parallel to the Simpson line through `m` meets the auxiliary
/// circle again. The flag is set when that parallel is tangent at `m`.
pub fn locate_s(c1: Point2, c2: Point2, m: Point2, simpson: &Line2) -> Result<(Point2, bool)> {
    let aux = circle_through_points(c1, c2, m)?;
    let through_m = Line2 { base: m, direction: simpson.direction };
    let pts = line_circle_intersection(&through_m, &aux);
    let far = pts.into_iter().max_by(|a, b| a.distance(m).total_cmp(&b.distance(m)));
    match far {
        Some(p) if p.distance(m) > 1e-9 => Ok((p, false)),
        _ => Ok((m, true)),
    }
}

/// Intersects the circle of the offset radius about `s` with the Simpson
/// line, returning the intersection closest to `expected`.
pub fn locate_junction(
    s: Point2,
    simpson: &Line2,
    ang: &JunctionAngles,
    parity: TopologyParity,
    expected: Point2,
) -> Result<Point2> {
    let radius = junction_offset_radius(ang, parity);
    let circle = Circle::new(s, radius);
    let mut pts = line_circle_intersection(simpson, &circle);
    if pts.is_empty() {
        // Allow for rounding when the line is within tolerance of tangency.
        let foot = simpson.foot_of(s);
        if (foot.distance(s) - radius).abs() <= 1e-9 {
            pts.push(foot);
        }
    }
    pts.into_iter()
        .min_by(|a, b| a.distance(expected).total_cmp(&b.distance(expected)))
        .ok_or(Error::NoIntersection)
}

/// Orientation-consistent tangent points from the junction to `C1`, `C2`.
pub fn terminal_tangents(junction: Point2, c1: &Circle, c2: &Circle) -> Result<(Point2, Point2)> {
    let t = |c: &Circle| {
        departure_point(c, junction).map_err(|_| Error::JunctionInsideCircle)
    };
    Ok((t(c1)?, t(c2)?))
}

/// Three CS edges meeting at one junction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DubinsNetwork {
    pub edges: [CsEdge; 3],
    pub junction: Point2,
    pub choices: [CircleChoice; 3],
    pub weights: Weights,
    pub weighted_length: f64,
    pub unweighted_length: f64,
}

impl DubinsNetwork {
    /// Builds the network for a given junction position by re-tangenting the
    /// three edges.
    pub fn from_junction(
        terminals: &[DirectedPoint; 3],
        choices: [CircleChoice; 3],
        weights: Weights,
        junction: Point2,
    ) -> Result<Self> {
        let e0 = cs_edge(&terminals[0], choices[0], junction)?;
        let e1 = cs_edge(&terminals[1], choices[1], junction)?;
        let e2 = cs_edge(&terminals[2], choices[2], junction)?;
        Ok(Self::from_edges([e0, e1, e2], junction, choices, weights))
    }

    fn from_edges(edges: [CsEdge; 3], junction: Point2, choices: [CircleChoice; 3], weights: Weights) -> Self {
        let weighted_length = (0..3).map(|i| weights.0[i] * edges[i].length()).sum();
        let unweighted_length = edges.iter().map(CsEdge::length).sum();
        Self { edges, junction, choices, weights, weighted_length, unweighted_length }
    }

    /// Unit vectors from the junction toward each tangent point.
    pub fn outward_directions(&self) -> [Point2; 3] {
        self.edges.map(|e| -e.segment_direction())
    }

    /// `‖Σ w_i û_i‖`, zero at a stationary junction.
    pub fn equilibrium_residual(&self) -> f64 {
        let u = self.outward_directions();
        (0..3).fold(Point2::ORIGIN, |acc, i| acc + u[i] * self.weights.0[i]).norm()
    }

    /// Measured angle opposite each edge at the junction.
    pub fn junction_angles(&self) -> [f64; 3] {
        let u = self.outward_directions();
        let between = |a: Point2, b: Point2| a.dot(b).clamp(-1.0, 1.0).acos();
        [between(u[1], u[2]), between(u[0], u[2]), between(u[0], u[1])]
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            edges: self.edges.map(|e| e.scaled(k)),
            junction: self.junction * k,
            choices: self.choices,
            weights: self.weights,
            weighted_length: self.weighted_length * k,
            unweighted_length: self.unweighted_length * k,
        }
    }
}

/// Which of the up to four root combinations produced a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionVariant {
    /// Using the Melzak point nearer to `p3`.
    pub mirror: bool,
    pub branch: SimpsonBranch,
}

impl ConstructionVariant {
    pub const ALL: [ConstructionVariant; 4] = [
        ConstructionVariant { mirror: false, branch: SimpsonBranch::Forward },
        ConstructionVariant { mirror: false, branch: SimpsonBranch::Backward },
        ConstructionVariant { mirror: true, branch: SimpsonBranch::Forward },
        ConstructionVariant { mirror: true, branch: SimpsonBranch::Backward },
    ];
}

/// Intermediate points of one construction run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub variant: ConstructionVariant,
    pub melzak_point: Point2,
    pub melzak_radius: f64,
    /// Signed left offset of `m` from the directed Simpson line.
    pub melzak_offset: f64,
    pub simpson: SimpsonLine,
    pub auxiliary: Circle,
    pub s: Point2,
    pub s_tangential: bool,
    pub junction_radius: f64,
    pub parity: TopologyParity,
}

impl Construction {
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            melzak_point: self.melzak_point * k,
            melzak_radius: self.melzak_radius * k,
            melzak_offset: self.melzak_offset * k,
            simpson: SimpsonLine {
                m_prime: self.simpson.m_prime * k,
                t3: self.simpson.t3 * k,
                direction: self.simpson.direction,
            },
            auxiliary: Circle::new(self.auxiliary.centre * k, self.auxiliary.radius * k),
            s: self.s * k,
            junction_radius: self.junction_radius * k,
            ..*self
        }
    }
}

/// Melzak circle radius for the pair (1,2), relabelling the pair when the
/// formula's sign convention does not match the configuration.
fn melzak_radius_either_labelling(ang: &JunctionAngles, parity: TopologyParity) -> Result<f64> {
    melzak_circle_radius(ang, parity).or_else(|_| melzak_circle_radius(&ang.swapped12(), parity))
}

/// Runs the construction for one circle choice and one root combination.
pub fn construct(
    terminals: &[DirectedPoint; 3],
    choices: [CircleChoice; 3],
    weights: Weights,
    ang: &JunctionAngles,
    variant: ConstructionVariant,
) -> Result<(DubinsNetwork, Construction)> {
    let circles = [0, 1, 2].map(|i| terminals[i].dubins_circle(choices[i]));
    let [c1, c2, _] = circles.map(|c| c.centre);
    let parity = TopologyParity::of(choices[0], choices[1]);

    let [far, near] = melzak_points(c1, c2, terminals[2].position, ang)?;
    let m = if variant.mirror { near } else { far };
    let clockwise = (c2 - c1).cross(m - c1) < 0.0;
    let frame = JunctionFrame::new(ang, clockwise, [choices[0].sign(), choices[1].sign()]);
    let melzak_offset = frame.melzak_offset();
    let melzak_radius = melzak_radius_either_labelling(ang, parity)?;
    debug_assert!((melzak_radius - melzak_offset.abs()).abs() < 1e-8);

    let simpson = simpson_tangency(m, melzak_offset, &circles[2], variant.branch)?;
    let line = simpson.line();
    let auxiliary = circle_through_points(c1, c2, m)?;
    let (s, s_tangential) = locate_s(c1, c2, m, &line)?;

    let e3 = -simpson.direction;
    let expected = s + JunctionFrame::to_world(frame.offset, e3);
    let junction = locate_junction(s, &line, ang, parity, expected)?;
    terminal_tangents(junction, &circles[0], &circles[1])?;

    let network = DubinsNetwork::from_junction(terminals, choices, weights, junction)
        .map_err(|_| Error::JunctionInsideCircle)?;
    let residual = network.equilibrium_residual();
    let expected_dirs = [
        JunctionFrame::to_world(frame.e1, e3),
        JunctionFrame::to_world(frame.e2, e3),
        e3,
    ];
    let actual = network.outward_directions();
    let mismatch = (0..3).map(|i| actual[i].distance(expected_dirs[i])).fold(0.0, f64::max);
    if residual > EQUILIBRIUM_TOL || mismatch > 1e-6 || network.edges[2].tangent_point.distance(simpson.t3) > 1e-6 {
        return Err(Error::NotStationary(residual.max(mismatch)));
    }

    Ok((
        network,
        Construction {
            variant,
            melzak_point: m,
            melzak_radius,
            melzak_offset,
            simpson,
            auxiliary,
            s,
            s_tangential,
            junction_radius: junction_offset_radius(ang, parity),
            parity,
        },
    ))
}

/// Best stationary network for one circle choice over all root combinations.
pub fn construct_best(
    terminals: &[DirectedPoint; 3],
    choices: [CircleChoice; 3],
    weights: Weights,
    ang: &JunctionAngles,
) -> Result<(DubinsNetwork, Construction)> {
    let mut best: Option<(DubinsNetwork, Construction)> = None;
    let mut first_err = None;
    for variant in ConstructionVariant::ALL {
        match construct(terminals, choices, weights, ang, variant) {
            Ok(found) => {
                let better = best
                    .as_ref()
                    .is_none_or(|(b, _)| found.0.weighted_length < b.weighted_length - 1e-12);
                if better {
                    best = Some(found);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_err.unwrap_or(Error::AllTopologiesDegenerate))
}

/// Outcome of one circle choice.
#[derive(Debug, Clone)]
pub struct PlanarCandidate {
    pub choices: [CircleChoice; 3],
    /// Parities of the pairs (1,2), (1,3), (2,3).
    pub parities: [TopologyParity; 3],
    pub outcome: std::result::Result<(DubinsNetwork, Construction), Error>,
}

#[derive(Debug, Clone)]
pub struct PlanarReport {
    pub weights: Weights,
    pub angles: JunctionAngles,
    pub candidates: Vec<PlanarCandidate>,
    pub winner: Option<usize>,
}

impl PlanarReport {
    pub fn winner(&self) -> Result<(&DubinsNetwork, &Construction)> {
        let i = self.winner.ok_or(Error::AllTopologiesDegenerate)?;
        match &self.candidates[i].outcome {
            Ok((n, c)) => Ok((n, c)),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn scaled(mut self, k: f64) -> Self {
        for c in &mut self.candidates {
            if let Ok((n, con)) = &mut c.outcome {
                *n = n.scaled(k);
                *con = con.scaled(k);
            }
        }
        self
    }
}

/// Runs every choice in `order` (normalized units) and picks the minimum
/// weighted length; ties keep the earlier entry.
pub fn solve_choices(
    terminals: &[DirectedPoint; 3],
    w: Weights,
    order: &[[CircleChoice; 3]],
) -> Result<PlanarReport> {
    let w = Weights::new(w.0)?;
    let angles = angles_from_weights(&w)?;
    let candidates: Vec<PlanarCandidate> = order
        .iter()
        .map(|&choices| PlanarCandidate {
            choices,
            parities: TopologyParity::pairs(&choices),
            outcome: construct_best(terminals, choices, w, &angles),
        })
        .collect();
    let mut winner: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        if let Ok((n, _)) = &c.outcome {
            let better = match winner {
                None => true,
                Some(j) => {
                    let best = &candidates[j].outcome.as_ref().unwrap().0;
                    n.weighted_length < best.weighted_length * (1.0 - 1e-12)
                }
            };
            if better {
                winner = Some(i);
            }
        }
    }
    Ok(PlanarReport { weights: w, angles, candidates, winner })
}

fn normalized_terminals(terminals: &[DirectedPoint; 3], rho: f64) -> [DirectedPoint; 3] {
    terminals.map(|t| DirectedPoint::new(t.position / rho, t.heading))
}

/// Full report over the configured circle choices, in the caller's units.
pub fn solve_planar_report(
    terminals: &[DirectedPoint; 3],
    w: Weights,
    cfg: &SolveConfig,
) -> Result<PlanarReport> {
    let order: Vec<[CircleChoice; 3]> = match cfg.topology {
        Some(t) => vec![t],
        None => all_choices().to_vec(),
    };
    let normalized = normalized_terminals(terminals, cfg.rho);
    let report = solve_choices(&normalized, w, &order)?;
    Ok(if cfg.rho == 1.0 { report } else { report.scaled(cfg.rho) })
}

/// The minimum weighted full Dubins network on three terminals.
pub fn solve_planar(terminals: &[DirectedPoint; 3], w: Weights, cfg: &SolveConfig) -> Result<DubinsNetwork> {
    let report = solve_planar_report(terminals, w, cfg)?;
    report.winner().map(|(n, _)| *n)
}
