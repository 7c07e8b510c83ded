use thiserror::Error;

use crate::spatial::SpatialNetwork;

/// Failure modes of the geometric constructions and solvers.
///
/// Most variants flag a degenerate configuration rather than a bug: the
/// planar solver discards a circle-choice candidate that raises one of them
/// and keeps going.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("points are collinear")]
    CollinearPoints,
    #[error("point lies inside the circle")]
    PointInsideCircle,
    #[error("no common tangent exists for this configuration")]
    NoSuchTangent,
    #[error("target lies inside the chosen Dubins circle")]
    TargetInsideCircle,
    #[error("no CSC path exists between the directed points")]
    NoCscPath,
    #[error("weights violate the strict triangle condition")]
    DegenerateWeights,
    #[error("invalid junction angles: {0}")]
    InvalidAngles(String),
    #[error("circle centres coincide")]
    CoincidentCentres,
    #[error("Melzak circle radius is negative ({0:.3e})")]
    NegativeRadius(f64),
    #[error("the junction cannot be placed on the Simpson line")]
    NoIntersection,
    #[error("junction lies inside a Dubins circle")]
    JunctionInsideCircle,
    #[error("constructed junction is not in equilibrium (residual {0:.3e})")]
    NotStationary(f64),
    #[error("every circle choice is degenerate")]
    AllTopologiesDegenerate,
    #[error("tangent point coincides with the junction")]
    ZeroSegment,
    #[error("fitted plane is vertical")]
    VerticalPlane,
    #[error("edge is vertical")]
    VerticalEdge,
    #[error("no convergence after {} iterations", .0.iterations)]
    MaxIterationsExceeded(Box<SpatialNetwork>),
    #[error("no feasible junction position")]
    NoFeasibleJunction,
}

impl Error {
    /// Stable identifier used in result files and CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CollinearPoints => "CollinearPoints",
            Error::PointInsideCircle => "PointInsideCircle",
            Error::NoSuchTangent => "NoSuchTangent",
            Error::TargetInsideCircle => "TargetInsideCircle",
            Error::NoCscPath => "NoCscPath",
            Error::DegenerateWeights => "DegenerateWeights",
            Error::InvalidAngles(_) => "InvalidAngles",
            Error::CoincidentCentres => "CoincidentCentres",
            Error::NegativeRadius(_) => "NegativeRadius",
            Error::NoIntersection => "NoIntersection",
            Error::JunctionInsideCircle => "JunctionInsideCircle",
            Error::NotStationary(_) => "NotStationary",
            Error::AllTopologiesDegenerate => "AllTopologiesDegenerate",
            Error::ZeroSegment => "ZeroSegment",
            Error::VerticalPlane => "VerticalPlane",
            Error::VerticalEdge => "VerticalEdge",
            Error::MaxIterationsExceeded(_) => "MaxIterationsExceeded",
            Error::NoFeasibleJunction => "NoFeasibleJunction",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
