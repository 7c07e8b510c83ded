//! Result files. Every length and point is in the instance's units; angles
//! are in degrees.

use dubnet_core::planar::{ConstructionVariant, TopologyParity};
use dubnet_core::spatial::LiftedPoint;
use dubnet_core::{
    all_choices, choices_label, solve_planar_report, solve_spatial, CircleChoice, Construction, CsEdge, DubinsNetwork,
    Error, OracleResult, PlanarReport, Point2, SolveConfig, SpatialNetwork,
};
use serde::{Deserialize, Serialize};

use crate::instance::{InstanceFile, Mode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub mode: Mode,
    pub rho: f64,
    pub terminals: Vec<TerminalRecord>,
    /// Planar weights; absent in spatial mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_angles_degrees: Option<[f64; 3]>,
    pub candidates: Vec<CandidateRecord>,
    pub winner: Option<usize>,
    /// Free spatial iteration, re-enumerating circle choices every step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spatial: Option<CandidateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleRecord>,
}

impl ResultFile {
    pub fn winner(&self) -> Option<&CandidateRecord> {
        self.winner.map(|i| &self.candidates[i])
    }
}

/// A terminal with its effective heading, after any convention flip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerminalRecord {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    pub theta_degrees: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub choices: String,
    /// Parities of the pairs (1,2), (1,3), (2,3).
    pub parities: [TopologyParity; 3],
    /// `"ok"` or the name of the degeneracy.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftRecord>,
}

impl CandidateRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// Weighted planar length, or the 3D length when lifted.
    pub fn length(&self) -> Option<f64> {
        if !self.is_ok() {
            return None;
        }
        match (&self.lift, &self.network) {
            (Some(l), _) => Some(l.total_3d_length),
            (None, Some(n)) => Some(n.weighted_length),
            _ => None,
        }
    }

    fn failed(choices: [CircleChoice; 3], e: &Error) -> Self {
        Self {
            choices: choices_label(&choices),
            parities: TopologyParity::pairs(&choices),
            status: e.code().into(),
            message: Some(e.to_string()),
            network: None,
            construction: None,
            lift: None,
        }
    }
}

fn xy(p: Point2) -> [f64; 2] {
    [p.x, p.y]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRecord {
    pub weighted_length: f64,
    pub unweighted_length: f64,
    pub junction: [f64; 2],
    /// Measured angle at the junction opposite each edge.
    pub junction_angles_degrees: [f64; 3],
    pub edges: [EdgeRecord; 3],
}

impl NetworkRecord {
    pub fn new(n: &DubinsNetwork) -> Self {
        Self {
            weighted_length: n.weighted_length,
            unweighted_length: n.unweighted_length,
            junction: xy(n.junction),
            junction_angles_degrees: n.junction_angles().map(f64::to_degrees),
            edges: [0, 1, 2].map(|i| EdgeRecord::new(&n.edges[i], n.choices[i])),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub side: char,
    pub start: [f64; 2],
    pub circle_centre: [f64; 2],
    pub circle_radius: f64,
    pub arc_start_degrees: f64,
    /// Signed, positive counter-clockwise.
    pub arc_sweep_degrees: f64,
    pub tangent_point: [f64; 2],
    pub arc_length: f64,
    pub segment_length: f64,
}

impl EdgeRecord {
    fn new(e: &CsEdge, side: CircleChoice) -> Self {
        Self {
            side: side.letter(),
            start: xy(e.start.position),
            circle_centre: xy(e.circle.centre),
            circle_radius: e.circle.radius,
            arc_start_degrees: e.arc_start.to_degrees(),
            arc_sweep_degrees: e.arc_sweep.to_degrees(),
            tangent_point: xy(e.tangent_point),
            arc_length: e.arc_length,
            segment_length: e.segment_length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstructionRecord {
    pub variant: ConstructionVariant,
    /// Parity of the pair merged into the Melzak point.
    pub parity: TopologyParity,
    pub melzak_point: [f64; 2],
    pub melzak_radius: f64,
    pub melzak_offset: f64,
    pub simpson_point: [f64; 2],
    pub simpson_tangent_point: [f64; 2],
    pub simpson_direction: [f64; 2],
    pub auxiliary_centre: [f64; 2],
    pub auxiliary_radius: f64,
    pub s: [f64; 2],
    pub s_tangential: bool,
    pub junction_radius: f64,
}

impl ConstructionRecord {
    pub fn new(c: &Construction) -> Self {
        Self {
            variant: c.variant,
            parity: c.parity,
            melzak_point: xy(c.melzak_point),
            melzak_radius: c.melzak_radius,
            melzak_offset: c.melzak_offset,
            simpson_point: xy(c.simpson.m_prime),
            simpson_tangent_point: xy(c.simpson.t3),
            simpson_direction: xy(c.simpson.direction),
            auxiliary_centre: xy(c.auxiliary.centre),
            auxiliary_radius: c.auxiliary.radius,
            s: xy(c.s),
            s_tangential: c.s_tangential,
            junction_radius: c.junction_radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftedRecord {
    pub point: [f64; 2],
    pub height: f64,
    pub arc_angle_degrees: f64,
    pub arc_exceeds_half_turn: bool,
}

impl LiftedRecord {
    fn new(l: &LiftedPoint) -> Self {
        Self {
            point: xy(l.planar),
            height: l.height,
            arc_angle_degrees: l.arc_angle.to_degrees(),
            arc_exceeds_half_turn: l.arc_exceeds_half_turn,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftRecord {
    pub total_3d_length: f64,
    pub junction: [f64; 3],
    pub iterations: usize,
    pub history: Vec<f64>,
    pub gradients: [f64; 3],
    pub weights: [f64; 3],
    pub lifted: [LiftedRecord; 3],
    pub plane_normal: [f64; 3],
    pub plane_point: [f64; 3],
}

impl LiftRecord {
    fn new(s: &SpatialNetwork) -> Self {
        let j = s.junction();
        let (n, p) = (s.plane.normal, s.plane.point);
        Self {
            total_3d_length: s.total_3d_length,
            junction: [j.x, j.y, j.z],
            iterations: s.iterations,
            history: s.history.clone(),
            gradients: s.gradients,
            weights: s.weights.0,
            lifted: s.lifted.map(|l| LiftedRecord::new(&l)),
            plane_normal: [n.x, n.y, n.z],
            plane_point: [p.x, p.y, p.z],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub choices: String,
    pub junction: [f64; 3],
    pub length: f64,
    pub converged: bool,
    pub evaluations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient_norm: Option<f64>,
    /// `|solver - oracle|` against the winner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
}

impl OracleRecord {
    /// `o` is in normalized units.
    pub fn new(o: &OracleResult, rho: f64, solver: Option<f64>) -> Self {
        let length = o.length * rho;
        Self {
            choices: choices_label(&o.choices),
            junction: [o.junction.x * rho, o.junction.y * rho, o.junction.z * rho],
            length,
            converged: o.converged,
            evaluations: o.evaluations,
            gradient_norm: o.gradient_norm,
            gap: solver.map(|s| (s - length).abs()),
        }
    }
}

/// Settings taken from the command line.
#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub mode: Option<Mode>,
    pub topology: Option<[CircleChoice; 3]>,
    pub epsilon: Option<f64>,
    pub max_iter: Option<usize>,
    pub negate_headings: bool,
    pub oracle: bool,
}

fn terminal_records(inst: &InstanceFile, mode: Mode, negate: bool) -> Vec<TerminalRecord> {
    let t = inst.spatial(negate);
    t.iter()
        .map(|t| TerminalRecord {
            x: t.position.x,
            y: t.position.y,
            z: (mode == Mode::Spatial).then_some(t.position.z),
            theta_degrees: t.heading.to_degrees(),
        })
        .collect()
}

fn planar_candidates(report: &PlanarReport) -> Vec<CandidateRecord> {
    report
        .candidates
        .iter()
        .map(|c| match &c.outcome {
            Ok((n, cons)) => CandidateRecord {
                choices: choices_label(&c.choices),
                parities: c.parities,
                status: "ok".into(),
                message: None,
                network: Some(NetworkRecord::new(n)),
                construction: Some(ConstructionRecord::new(cons)),
                lift: None,
            },
            Err(e) => CandidateRecord::failed(c.choices, e),
        })
        .collect()
}

fn spatial_candidate(choices: [CircleChoice; 3], outcome: Result<SpatialNetwork, Error>) -> CandidateRecord {
    match outcome {
        Ok(s) => {
            let c = s.planar_network.choices;
            CandidateRecord {
                choices: choices_label(&c),
                parities: TopologyParity::pairs(&c),
                status: "ok".into(),
                message: None,
                network: Some(NetworkRecord::new(&s.planar_network)),
                construction: None,
                lift: Some(LiftRecord::new(&s)),
            }
        }
        Err(e) => {
            let mut record = CandidateRecord::failed(choices, &e);
            // Keep the best iterate so the failure can be inspected.
            if let Error::MaxIterationsExceeded(best) = e {
                record.network = Some(NetworkRecord::new(&best.planar_network));
                record.lift = Some(LiftRecord::new(&best));
            }
            record
        }
    }
}

/// Minimum length among usable candidates; ties keep the earlier one.
fn pick_winner(candidates: &[CandidateRecord]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in candidates.iter().enumerate() {
        if let Some(l) = c.length() {
            if best.is_none_or(|(_, b)| l < b) {
                best = Some((i, l));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Solves an instance. Errors only on invalid weights; per-candidate
/// degeneracies are recorded in the result.
pub fn solve(inst: &InstanceFile, opts: &SolveOptions) -> Result<ResultFile, Error> {
    let mode = opts.mode.unwrap_or_else(|| inst.mode());
    let cfg = SolveConfig {
        rho: inst.rho,
        epsilon: opts.epsilon.or(inst.epsilon).unwrap_or(SolveConfig::default().epsilon),
        max_iter: opts.max_iter.unwrap_or(SolveConfig::default().max_iter),
        topology: opts.topology,
    };
    let negate = opts.negate_headings;
    let rho = inst.rho;
    let mut result = ResultFile {
        mode,
        rho,
        terminals: terminal_records(inst, mode, negate),
        weights: None,
        target_angles_degrees: None,
        candidates: Vec::new(),
        winner: None,
        spatial: None,
        oracle: None,
    };
    match mode {
        Mode::Planar => {
            let terminals = inst.directed(negate);
            let report = solve_planar_report(&terminals, inst.weights(), &cfg)?;
            result.weights = Some(report.weights.0);
            result.target_angles_degrees = Some(report.angles.0.map(f64::to_degrees));
            result.candidates = planar_candidates(&report);
            result.winner = pick_winner(&result.candidates);
            if opts.oracle {
                let normalized = terminals.map(|t| dubnet_core::DirectedPoint::new(t.position / rho, t.heading));
                let oracle = match opts.topology {
                    Some(c) => dubnet_core::planar_oracle(&normalized, report.weights, c),
                    None => dubnet_core::planar_oracle_best(&normalized, report.weights),
                };
                let solver = result.winner().and_then(CandidateRecord::length);
                result.oracle = oracle.ok().map(|o| OracleRecord::new(&o, rho, solver));
            }
        }
        Mode::Spatial => {
            let terminals = inst.spatial(negate);
            let order: Vec<[CircleChoice; 3]> = match opts.topology {
                Some(t) => vec![t],
                None => all_choices().to_vec(),
            };
            result.candidates = order
                .iter()
                .map(|&c| spatial_candidate(c, solve_spatial(&terminals, &SolveConfig { topology: Some(c), ..cfg })))
                .collect();
            result.winner = pick_winner(&result.candidates);
            let free = solve_spatial(&terminals, &cfg);
            result.spatial = Some(spatial_candidate(opts.topology.unwrap_or(order[0]), free));
            if opts.oracle {
                let normalized = terminals.map(|t| {
                    let p = t.position;
                    dubnet_core::Terminal3::new(dubnet_core::Point3::new(p.x / rho, p.y / rho, p.z / rho), t.heading)
                });
                let oracle = match opts.topology {
                    Some(c) => dubnet_core::spatial_oracle(&normalized, c),
                    None => dubnet_core::spatial_oracle_best(&normalized),
                };
                let solver = result.winner().and_then(CandidateRecord::length);
                result.oracle = oracle.ok().map(|o| OracleRecord::new(&o, rho, solver));
            }
        }
    }
    Ok(result)
}
