//! The locus of the junction when two terminals are fixed and the third
//! varies: a limaçon about one end of the auxiliary circle's diameter through
//! the Melzak point.
//!
//! With `R = ½ d csc α` the auxiliary radius, `s` runs over the auxiliary
//! circle and the junction sits a constant distance from `s` on the line
//! through the pole `p` and `s`. Odd pairs push the junction away from the
//! pole, even pairs pull it toward (and past) the pole, which is why the even
//! curve is written in signed polar form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::planar::TopologyParity;

/// `r(θ) = csc(α/2) + d csc α cos θ` (odd) or `sec(α/2) - d csc α cos θ` (even).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limacon {
    pub alpha: f64,
    pub d: f64,
    pub parity: TopologyParity,
}

impl Limacon {
    pub fn new(alpha: f64, d: f64, parity: TopologyParity) -> Result<Self> {
        if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
            return Err(Error::InvalidAngles(format!("α = {alpha} outside (0, π)")));
        }
        if d.is_nan() || d <= 0.0 || !d.is_finite() {
            return Err(Error::CoincidentCentres);
        }
        Ok(Self { alpha, d, parity })
    }

    /// Auxiliary circle radius.
    pub fn auxiliary_radius(&self) -> f64 {
        0.5 * self.d / self.alpha.sin()
    }

    /// Distance from `s` to the junction.
    pub fn offset(&self) -> f64 {
        match self.parity {
            TopologyParity::Odd => 1.0 / (0.5 * self.alpha).sin(),
            TopologyParity::Even => 1.0 / (0.5 * self.alpha).cos(),
        }
    }

    pub fn radius(&self, theta: f64) -> f64 {
        let lobe = self.d / self.alpha.sin() * theta.cos();
        match self.parity {
            TopologyParity::Odd => self.offset() + lobe,
            TopologyParity::Even => self.offset() - lobe,
        }
    }

    /// The vectors `p→q`, `q→s` and `s→s'`, summing to `r(θ) (cos θ, sin θ)`.
    ///
    /// For even pairs the textbook phasors are parametrized by `θ - π/2`.
    pub fn phasors(&self, theta: f64) -> [Point2; 3] {
        let big_r = self.auxiliary_radius();
        match self.parity {
            TopologyParity::Odd => [
                Point2::new(big_r, 0.0),
                Point2::unit(2.0 * theta) * big_r,
                Point2::unit(theta) * self.offset(),
            ],
            TopologyParity::Even => {
                let t = theta - 0.5 * std::f64::consts::PI;
                [
                    Point2::new(-big_r, 0.0),
                    Point2::unit(2.0 * t) * big_r,
                    Point2::new(-t.sin(), t.cos()) * self.offset(),
                ]
            }
        }
    }

    /// `n` equally spaced samples `(θ, r(θ))` over `[0, 2π)`.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / n as f64;
                (theta, self.radius(theta))
            })
            .collect()
    }

    /// Distance in `r` from a point given in polar form to the curve. A
    /// signed-polar curve passes through `(ρ, θ)` either with `r(θ) = ρ` or
    /// with `r(θ + π) = -ρ`.
    pub fn radial_residual(&self, rho: f64, theta: f64) -> f64 {
        let direct = (rho - self.radius(theta)).abs();
        let opposite = (rho + self.radius(theta + std::f64::consts::PI)).abs();
        direct.min(opposite)
    }
}

/// Pole and polar axis of the limaçon in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimaconFrame {
    pub pole: Point2,
    pub axis: Point2,
}

impl LimaconFrame {
    /// Frame for the pair of Dubins circle centres `c1, c2` merged at the
    /// Melzak point `m`. The pole is the end of the auxiliary diameter normal
    /// to `c1 c2`: on `m`'s side for odd pairs, opposite it for even pairs.
    /// The axis is normal to `c1 c2` pointing away from `m`'s side: toward
    /// the auxiliary centre for odd pairs, away from it for even pairs.
    pub fn new(c1: Point2, c2: Point2, m: Point2, parity: TopologyParity) -> Result<Self> {
        let chord = c2 - c1;
        let d = chord.norm();
        if d <= crate::geom::DEGENERACY_TOL {
            return Err(Error::CoincidentCentres);
        }
        let mut normal = chord.perp() / d;
        if normal.dot(m - c1) < 0.0 {
            normal = -normal;
        }
        let aux = crate::geom::circle_through_points(c1, c2, m)?;
        let (q, big_r) = (aux.centre, aux.radius);
        Ok(match parity {
            TopologyParity::Odd => Self { pole: q + normal * big_r, axis: -normal },
            TopologyParity::Even => Self { pole: q - normal * big_r, axis: -normal },
        })
    }

    /// `(ρ, θ)` of a point.
    pub fn to_polar(&self, p: Point2) -> (f64, f64) {
        let v = p - self.pole;
        let x = v.dot(self.axis);
        let y = self.axis.cross(v);
        (v.norm(), y.atan2(x))
    }

    pub fn from_polar(&self, r: f64, theta: f64) -> Point2 {
        let u = Point2::unit(theta);
        self.pole + (self.axis * u.x + self.axis.perp() * u.y) * r
    }
}

/// Samples the limaçon for the circle pair `(c1, c2)` as polar `(θ, r)`.
pub fn limacon_locus(c1: Point2, c2: Point2, alpha: f64, parity: TopologyParity, n: usize) -> Result<Vec<(f64, f64)>> {
    Ok(Limacon::new(alpha, c1.distance(c2), parity)?.samples(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn odd_example() {
        let l = Limacon::new(2.0 * PI / 3.0, 2.0, TopologyParity::Odd).unwrap();
        assert!((l.radius(0.0) - 2.0 * 3f64.sqrt()).abs() < 1e-12);
        for alpha in [0.3, 1.0, 2.0, 3.0] {
            let l = Limacon::new(alpha, 1.7, TopologyParity::Odd).unwrap();
            assert!((l.radius(PI / 2.0) - 1.0 / (alpha / 2.0).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn even_example() {
        let l = Limacon::new(2.0 * PI / 3.0, 2.0, TopologyParity::Even).unwrap();
        assert!((l.radius(0.0) - (2.0 - 4.0 / 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn phasors_sum_to_curve() {
        for parity in [TopologyParity::Odd, TopologyParity::Even] {
            for (alpha, d) in [(0.7, 3.0), (2.0 * PI / 3.0, 2.0), (2.9, 0.4)] {
                let l = Limacon::new(alpha, d, parity).unwrap();
                for k in 0..64 {
                    let theta = k as f64 * 0.1;
                    let [a, b, c] = l.phasors(theta);
                    let sum = a + b + c;
                    assert!(sum.distance(Point2::unit(theta) * l.radius(theta)) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(Limacon::new(PI, 1.0, TopologyParity::Odd).is_err());
        assert!(Limacon::new(1.0, 0.0, TopologyParity::Odd).is_err());
    }

    #[test]
    fn signed_residual_accepts_antipodal_form() {
        let l = Limacon::new(2.0 * PI / 3.0, 2.0, TopologyParity::Even).unwrap();
        let r = l.radius(0.0);
        assert!(r < 0.0);
        assert!(l.radial_residual(-r, PI) < 1e-12);
    }

    #[test]
    fn frame_round_trip() {
        let f = LimaconFrame::new(Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(1.0, -2.0), TopologyParity::Odd)
            .unwrap();
        let p = Point2::new(0.3, 4.0);
        let (r, t) = f.to_polar(p);
        assert!(f.from_polar(r, t).distance(p) < 1e-12);
    }
}
