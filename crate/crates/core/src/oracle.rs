//! Numerical ground truth: direct minimization of network length over the
//! junction position, with no use of the construction.
//!
//! The planar objective `Σ w_i L_i(x)` has gradient `Σ w_i n̂_i` (each `n̂_i`
//! the unit direction of segment `i` at the junction) and Hessian
//! `Σ w_i n̂_i⊥ n̂_i⊥ᵀ / ℓ_i`. Descent uses the Hessian as a preconditioner
//! and backtracks on infeasible or non-decreasing steps.

use serde::{Deserialize, Serialize};

use crate::config::all_choices;
use crate::dubins::{cs_edge, cs_length, CircleChoice, DirectedPoint};
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::planar::Weights;
use crate::spatial::{Point3, Terminal3};

/// Gradient norm below which a planar result counts as converged.
pub const CONVERGED_GRADIENT: f64 = 1e-7;

const GRID_STEP: f64 = 0.25;
const GRID_MARGIN: f64 = 4.0;
const SEEDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub choices: [CircleChoice; 3],
    /// Junction; `z` is zero for planar runs.
    pub junction: Point3,
    pub length: f64,
    /// Analytic gradient norm; planar runs only.
    pub gradient_norm: Option<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

impl OracleResult {
    pub fn junction_xy(&self) -> Point2 {
        self.junction.xy()
    }
}

struct Planar<'a> {
    terminals: &'a [DirectedPoint; 3],
    w: [f64; 3],
    choices: [CircleChoice; 3],
    evaluations: usize,
}

impl Planar<'_> {
    fn value(&mut self, x: Point2) -> Option<f64> {
        self.evaluations += 1;
        let mut total = 0.0;
        for i in 0..3 {
            total += self.w[i] * cs_length(&self.terminals[i], self.choices[i], x)?;
        }
        Some(total)
    }

    /// Value, gradient and Hessian.
    fn local(&mut self, x: Point2) -> Option<(f64, Point2, [f64; 3])> {
        self.evaluations += 1;
        let mut f = 0.0;
        let mut g = Point2::ORIGIN;
        let mut h = [0.0; 3];
        for i in 0..3 {
            let e = cs_edge(&self.terminals[i], self.choices[i], x).ok()?;
            let n = e.segment_direction();
            let p = n.perp();
            let k = self.w[i] / e.segment_length.max(1e-9);
            f += self.w[i] * e.length();
            g += n * self.w[i];
            h[0] += k * p.x * p.x;
            h[1] += k * p.x * p.y;
            h[2] += k * p.y * p.y;
        }
        Some((f, g, h))
    }

    fn descend(&mut self, mut x: Point2) -> (Point2, f64, f64) {
        let Some((mut f, mut g, mut h)) = self.local(x) else {
            return (x, f64::INFINITY, f64::INFINITY);
        };
        let mut stalled = 0;
        for _ in 0..500 {
            if g.norm() <= 1e-12 || stalled >= 10 {
                break;
            }
            let det = h[0] * h[2] - h[1] * h[1];
            let newton = if det > 1e-300 {
                Point2::new(-(h[2] * g.x - h[1] * g.y) / det, -(h[0] * g.y - h[1] * g.x) / det)
            } else {
                -g
            };
            let dir = if newton.dot(g) < 0.0 { newton } else { -g };
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-16 {
                let y = x + dir * t;
                if let Some((fy, gy, hy)) = self.local(y) {
                    let armijo = fy <= f + 1e-4 * t * dir.dot(g);
                    // Once f stops resolving the decrease, accept steps that
                    // shrink the gradient without raising f beyond rounding.
                    let flat = (fy - f).abs() <= 1e-13 * f.abs().max(1.0) && gy.norm() < g.norm();
                    if armijo || flat {
                        // Pressed against a feasibility boundary or a
                        // discontinuity, steps stay tiny while the
                        // gradient stays large.
                        if f - fy <= 1e-14 * f.abs() && g.norm() > CONVERGED_GRADIENT {
                            stalled += 1;
                        } else {
                            stalled = 0;
                        }
                        x = y;
                        f = fy;
                        g = gy;
                        h = hy;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        (x, f, g.norm())
    }

    /// No probe at distance `step` in 16 directions improves on `x`.
    fn probe(&mut self, x: Point2, f: f64, step: f64) -> bool {
        (0..16).all(|k| {
            let u = Point2::unit(std::f64::consts::TAU * k as f64 / 16.0);
            self.value(x + u * step).is_none_or(|v| v >= f - 1e-9)
        })
    }
}

/// Edge lengths from each terminal and circle on the seeding grid. The eight
/// circle choices share these six tables.
struct SeedGrid {
    lo: Point2,
    nx: usize,
    ny: usize,
    lengths: [[Option<Vec<Option<f64>>>; 2]; 3],
}

impl SeedGrid {
    fn new(terminals: &[DirectedPoint; 3]) -> Self {
        let ps = terminals.map(|t| t.position);
        let fold = |f: fn(f64, f64) -> f64, init: f64, g: fn(&Point2) -> f64| ps.iter().map(g).fold(init, f);
        let lo = Point2::new(fold(f64::min, f64::INFINITY, |p| p.x), fold(f64::min, f64::INFINITY, |p| p.y))
            - Point2::new(GRID_MARGIN, GRID_MARGIN);
        let hi = Point2::new(fold(f64::max, f64::NEG_INFINITY, |p| p.x), fold(f64::max, f64::NEG_INFINITY, |p| p.y))
            + Point2::new(GRID_MARGIN, GRID_MARGIN);
        let nx = ((hi.x - lo.x) / GRID_STEP).ceil() as usize + 1;
        let ny = ((hi.y - lo.y) / GRID_STEP).ceil() as usize + 1;
        Self { lo, nx, ny, lengths: Default::default() }
    }

    fn point(&self, i: usize, j: usize) -> Point2 {
        self.lo + Point2::new(i as f64 * GRID_STEP, j as f64 * GRID_STEP)
    }

    fn fill(&mut self, terminals: &[DirectedPoint; 3], choices: [CircleChoice; 3]) -> usize {
        let mut evaluations = 0;
        for (k, c) in choices.into_iter().enumerate() {
            let slot = c as usize;
            if self.lengths[k][slot].is_none() {
                let mut table = Vec::with_capacity(self.nx * self.ny);
                for j in 0..self.ny {
                    for i in 0..self.nx {
                        table.push(cs_length(&terminals[k], c, self.point(i, j)));
                    }
                }
                evaluations += table.len();
                self.lengths[k][slot] = Some(table);
            }
        }
        evaluations
    }

    /// Feasible grid points no worse than their feasible neighbours, best
    /// first.
    fn seeds(&self, w: [f64; 3], choices: [CircleChoice; 3]) -> Vec<(Point2, f64)> {
        let tables = [0, 1, 2].map(|k| self.lengths[k][choices[k] as usize].as_ref().expect("filled"));
        let values: Vec<Option<f64>> = (0..self.nx * self.ny)
            .map(|n| Some(w[0] * tables[0][n]? + w[1] * tables[1][n]? + w[2] * tables[2][n]?))
            .collect();
        let (nx, ny) = (self.nx as i64, self.ny as i64);
        let mut out = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let Some(v) = values[(j * nx + i) as usize] else { continue };
                let minimal = (-1..=1).all(|dj| {
                    (-1..=1).all(|di| {
                        let (a, b) = (i + di, j + dj);
                        if a < 0 || b < 0 || a >= nx || b >= ny {
                            return true;
                        }
                        values[(b * nx + a) as usize].is_none_or(|u| u >= v)
                    })
                });
                if minimal {
                    out.push((self.point(i as usize, j as usize), v));
                }
            }
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        out
    }
}

fn oracle_with_grid(
    terminals: &[DirectedPoint; 3],
    w: Weights,
    choices: [CircleChoice; 3],
    grid: &mut SeedGrid,
) -> Result<OracleResult> {
    let mut p = Planar { terminals, w: w.0, choices, evaluations: grid.fill(terminals, choices) };
    let seeds = grid.seeds(w.0, choices);
    if seeds.is_empty() {
        return Err(Error::NoFeasibleJunction);
    }
    let mut best: Option<(Point2, f64, f64)> = None;
    for (x0, _) in seeds.into_iter().take(SEEDS) {
        let (x, f, g) = p.descend(x0);
        if best.is_none_or(|b| f < b.1) {
            best = Some((x, f, g));
        }
    }
    let (x, f, g) = best.expect("seeded");
    if !f.is_finite() {
        return Err(Error::NoFeasibleJunction);
    }
    let converged = g <= CONVERGED_GRADIENT && p.probe(x, f, 1e-4);
    Ok(OracleResult {
        choices,
        junction: Point3::new(x.x, x.y, 0.0),
        length: f,
        gradient_norm: Some(g),
        evaluations: p.evaluations,
        converged,
    })
}

/// Analytic gradient of the weighted length at junction `x`.
pub fn planar_gradient(
    terminals: &[DirectedPoint; 3],
    w: Weights,
    choices: [CircleChoice; 3],
    x: Point2,
) -> Option<Point2> {
    let mut p = Planar { terminals, w: w.0, choices, evaluations: 0 };
    p.local(x).map(|(_, g, _)| g)
}

/// Weighted length at junction `x`, or `None` inside a chosen circle.
pub fn planar_length(terminals: &[DirectedPoint; 3], w: Weights, choices: [CircleChoice; 3], x: Point2) -> Option<f64> {
    let mut p = Planar { terminals, w: w.0, choices, evaluations: 0 };
    p.value(x)
}

/// Minimizes the weighted network length for fixed circle choices.
pub fn planar_oracle(terminals: &[DirectedPoint; 3], w: Weights, choices: [CircleChoice; 3]) -> Result<OracleResult> {
    oracle_with_grid(terminals, w, choices, &mut SeedGrid::new(terminals))
}

/// Best planar oracle result over all eight circle choices. Ties keep the
/// lexicographically first choice.
pub fn planar_oracle_best(terminals: &[DirectedPoint; 3], w: Weights) -> Result<OracleResult> {
    let mut grid = SeedGrid::new(terminals);
    best_of(all_choices().map(|c| oracle_with_grid(terminals, w, c, &mut grid)))
}

fn best_of(results: [Result<OracleResult>; 8]) -> Result<OracleResult> {
    let mut best: Option<OracleResult> = None;
    for r in results.into_iter().flatten() {
        if best.is_none_or(|b| r.length < b.length * (1.0 - 1e-12)) {
            best = Some(r);
        }
    }
    best.ok_or(Error::NoFeasibleJunction)
}

/// True 3D length of the network with junction `x`: each edge is its planar
/// CS curve lifted at constant gradient.
pub fn spatial_length(terminals: &[Terminal3; 3], choices: [CircleChoice; 3], x: Point3) -> Option<f64> {
    let mut total = 0.0;
    for i in 0..3 {
        let planar = cs_length(&terminals[i].projected(), choices[i], x.xy())?;
        let rise = x.z - terminals[i].position.z;
        total += planar.hypot(rise);
    }
    Some(total)
}

/// Minimizes true 3D length over the junction by coordinate pattern search,
/// seeded from the planar oracle at the mean terminal height. `converged`
/// reports whether the planar seed was a stationary point.
pub fn spatial_oracle(terminals: &[Terminal3; 3], choices: [CircleChoice; 3]) -> Result<OracleResult> {
    let projected = terminals.map(|t| t.projected());
    spatial_with_grid(terminals, choices, &mut SeedGrid::new(&projected))
}

fn spatial_with_grid(terminals: &[Terminal3; 3], choices: [CircleChoice; 3], grid: &mut SeedGrid) -> Result<OracleResult> {
    let projected = terminals.map(|t| t.projected());
    let seed = oracle_with_grid(&projected, Weights::EQUAL, choices, grid)?;
    let mut evaluations = seed.evaluations;
    let mean_z = terminals.iter().map(|t| t.position.z).sum::<f64>() / 3.0;
    let mut x = Point3::new(seed.junction.x, seed.junction.y, mean_z);
    let mut f = spatial_length(terminals, choices, x).ok_or(Error::NoFeasibleJunction)?;
    let dirs = [
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(-1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, -1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(0.0, 0.0, -1.0),
    ];
    // Successful polls double the step (up to the initial one) so that long
    // shallow valleys are not walked at the smallest step.
    let mut step = 0.5;
    let budget = evaluations + 1_000_000;
    while step >= 1e-9 && evaluations < budget {
        let mut improved = false;
        for d in dirs {
            let y = Point3::new(x.x + d.x * step, x.y + d.y * step, x.z + d.z * step);
            evaluations += 1;
            if let Some(fy) = spatial_length(terminals, choices, y) {
                if fy < f {
                    x = y;
                    f = fy;
                    improved = true;
                }
            }
        }
        step = if improved { (2.0 * step).min(0.5) } else { 0.5 * step };
    }
    Ok(OracleResult { choices, junction: x, length: f, gradient_norm: None, evaluations, converged: seed.converged })
}

pub fn spatial_oracle_best(terminals: &[Terminal3; 3]) -> Result<OracleResult> {
    let mut grid = SeedGrid::new(&terminals.map(|t| t.projected()));
    best_of(all_choices().map(|c| spatial_with_grid(terminals, c, &mut grid)))
}
