//! Minimum Dubins networks: shortest curvature-constrained networks joining
//! three directed terminals.
//!
//! * [`planar`] builds the weighted network exactly in the plane, for every
//!   choice of Dubins circle at the terminals.
//! * [`spatial`] iterates planar solves and 3D lifts for terminals at
//!   different heights.
//! * [`oracle`] minimizes network length numerically over the junction
//!   position, independently of the construction.
//!
//! Lengths are in units of the turning radius unless a [`SolveConfig`] with a
//! different `rho` is passed.

pub mod config;
pub mod dubins;
pub mod error;
pub mod geom;
pub mod limacon;
pub mod oracle;
pub mod planar;
pub mod spatial;

pub use config::{all_choices, choices_label, parse_choices, SolveConfig};
pub use dubins::{cs_edge, cs_length, dubins_circles, dubins_csc, CircleChoice, CsEdge, CscPath, CscType, DirectedPoint};
pub use error::{Error, Result};
pub use geom::{Circle, Line2, Orientation, Point2};
pub use limacon::{Limacon, LimaconFrame};
pub use oracle::{planar_oracle, planar_oracle_best, spatial_oracle, spatial_oracle_best, OracleResult};
pub use planar::{
    angles_from_weights, solve_planar, solve_planar_report, Construction, DubinsNetwork, JunctionAngles,
    PlanarCandidate, PlanarReport, TopologyParity, Weights,
};
pub use spatial::{solve_spatial, Point3, SpatialNetwork, Terminal3};
