//! Instance files: schema, structural validation and conversion to solver
//! inputs.

use std::f64::consts::PI;
use std::fmt;

use dubnet_core::{DirectedPoint, Point2, Point3, Terminal3, Weights};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Planar,
    Spatial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalSpec {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    /// Heading in degrees, counter-clockwise from the x axis.
    pub theta_degrees: f64,
}

fn default_rho() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub terminals: Vec<TerminalSpec>,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Defaults to spatial when the terminals carry heights.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

impl InstanceFile {
    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or(if self.terminals.iter().all(|t| t.z.is_some()) {
            Mode::Spatial
        } else {
            Mode::Planar
        })
    }

    fn heading(t: &TerminalSpec, negate: bool) -> f64 {
        let h = t.theta_degrees.to_radians();
        if negate {
            h + PI
        } else {
            h
        }
    }

    /// Planar terminals. `negate` flips every heading, converting from the
    /// classic initial/final path convention.
    pub fn directed(&self, negate: bool) -> [DirectedPoint; 3] {
        [0, 1, 2].map(|i| {
            let t = &self.terminals[i];
            DirectedPoint::new(Point2::new(t.x, t.y), Self::heading(t, negate))
        })
    }

    pub fn spatial(&self, negate: bool) -> [Terminal3; 3] {
        [0, 1, 2].map(|i| {
            let t = &self.terminals[i];
            Terminal3::new(Point3::new(t.x, t.y, t.z.unwrap_or(0.0)), Self::heading(t, negate))
        })
    }

    pub fn weights(&self) -> Weights {
        self.weights.map_or(Weights::EQUAL, Weights)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
}

impl Diagnostic {
    fn error(code: &str, message: impl Into<String>) -> Self {
        Self { severity: Severity::Error, code: code.into(), message: message.into() }
    }

    fn warning(code: &str, message: impl Into<String>) -> Self {
        Self { severity: Severity::Warning, code: code.into(), message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{s} {}: {}", self.code, self.message)
    }
}

fn number(obj: &Map<String, Value>, key: &str, path: &str, out: &mut Vec<Diagnostic>, required: bool) -> Option<f64> {
    match obj.get(key) {
        None if required => {
            out.push(Diagnostic::error("MissingField", format!("{path}.{key} is required")));
            None
        }
        None => None,
        Some(v) => {
            let n = v.as_f64();
            if n.is_none() {
                out.push(Diagnostic::error("BadRange", format!("{path}.{key} must be a number")));
            }
            n
        }
    }
}

/// Checks a parsed JSON document against the instance schema. Errors make
/// the instance unusable; warnings flag configurations outside the regime
/// where every edge is of CSC type.
pub fn validate(doc: &Value) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let Some(root) = doc.as_object() else {
        out.push(Diagnostic::error("BadRange", "instance must be a JSON object"));
        return out;
    };

    let rho = match number(root, "rho", "instance", &mut out, false) {
        Some(r) if r <= 0.0 => {
            out.push(Diagnostic::error("NonpositiveRho", format!("rho must be positive, got {r}")));
            None
        }
        Some(r) => Some(r),
        None if root.contains_key("rho") => None,
        None => Some(1.0),
    };

    let mut positions = Vec::new();
    let mut with_height = 0;
    let mut count = 0;
    match root.get("terminals") {
        None => out.push(Diagnostic::error("MissingField", "instance.terminals is required")),
        Some(Value::Array(list)) => {
            count = list.len();
            if count != 3 {
                out.push(Diagnostic::error("WrongTerminalCount", format!("expected 3 terminals, found {count}")));
            }
            for (i, t) in list.iter().enumerate() {
                let path = format!("terminals[{i}]");
                let Some(obj) = t.as_object() else {
                    out.push(Diagnostic::error("BadRange", format!("{path} must be an object")));
                    continue;
                };
                let x = number(obj, "x", &path, &mut out, true);
                let y = number(obj, "y", &path, &mut out, true);
                number(obj, "theta_degrees", &path, &mut out, true);
                if number(obj, "z", &path, &mut out, false).is_some() {
                    with_height += 1;
                }
                if let (Some(x), Some(y)) = (x, y) {
                    positions.push(Point2::new(x, y));
                }
            }
        }
        Some(_) => out.push(Diagnostic::error("BadRange", "instance.terminals must be an array")),
    }
    if with_height > 0 && with_height < count {
        out.push(Diagnostic::error("MixedHeights", "either every terminal has z or none does"));
    }

    if let Some(w) = root.get("weights") {
        let parsed: Option<Vec<f64>> = w.as_array().and_then(|a| a.iter().map(Value::as_f64).collect());
        match parsed {
            Some(w) if w.len() == 3 && w.iter().all(|x| *x > 0.0) => {
                if Weights::new([w[0], w[1], w[2]]).is_err() {
                    out.push(Diagnostic::error(
                        "DegenerateWeights",
                        "each weight must be less than the sum of the other two",
                    ));
                }
            }
            _ => out.push(Diagnostic::error("BadRange", "instance.weights must be three positive numbers")),
        }
    }

    if let Some(e) = number(root, "epsilon", "instance", &mut out, false) {
        if e <= 0.0 {
            out.push(Diagnostic::error("BadRange", format!("epsilon must be positive, got {e}")));
        }
    }

    let mode = match root.get("mode") {
        None => None,
        Some(v) => match v.as_str() {
            Some("planar") => Some(Mode::Planar),
            Some("spatial") => Some(Mode::Spatial),
            _ => {
                out.push(Diagnostic::error("BadRange", "instance.mode must be \"planar\" or \"spatial\""));
                None
            }
        },
    };
    if mode == Some(Mode::Spatial) && count > 0 && with_height < count {
        out.push(Diagnostic::error("MissingField", "spatial mode needs z on every terminal"));
    }
    if mode == Some(Mode::Planar) && with_height > 0 {
        out.push(Diagnostic::warning("HeightsIgnored", "planar mode ignores terminal heights"));
    }
    let spatial = mode == Some(Mode::Spatial) || (mode.is_none() && count > 0 && with_height == count);
    if spatial && root.contains_key("weights") {
        out.push(Diagnostic::warning("WeightsIgnored", "spatial mode derives weights from edge gradients"));
    }

    if let (Some(rho), 3) = (rho, positions.len()) {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let d = positions[i].distance(positions[j]) / rho;
            if d < 4.0 {
                out.push(Diagnostic::warning(
                    "SeparationBelow4Rho",
                    format!("terminals {i} and {j} are {d:.2}ρ apart; paths need not be of CSC type below 4ρ"),
                ));
            }
        }
    }
    out
}
