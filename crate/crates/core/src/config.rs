use serde::{Deserialize, Serialize};

use crate::dubins::CircleChoice;

/// Solver settings shared by the planar and spatial solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Minimum turning radius. Inputs are divided by it on entry.
    pub rho: f64,
    /// Stopping tolerance on successive 3D lengths (normalized units).
    pub epsilon: f64,
    pub max_iter: usize,
    /// Restrict the planar enumeration to a single circle choice.
    pub topology: Option<[CircleChoice; 3]>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { rho: 1.0, epsilon: 1e-8, max_iter: 200, topology: None }
    }
}

/// The eight circle-choice triples in lexicographic order, `Left < Right`.
pub fn all_choices() -> [[CircleChoice; 3]; 8] {
    use CircleChoice::*;
    let mut out = [[Left; 3]; 8];
    for (i, slot) in out.iter_mut().enumerate() {
        for (k, c) in slot.iter_mut().enumerate() {
            if i >> (2 - k) & 1 == 1 {
                *c = Right;
            }
        }
    }
    out
}

pub fn choices_label(choices: &[CircleChoice; 3]) -> String {
    choices.iter().map(|c| c.letter()).collect()
}

pub fn parse_choices(label: &str) -> Option<[CircleChoice; 3]> {
    let v: Vec<CircleChoice> = label.chars().map(CircleChoice::from_letter).collect::<Option<_>>()?;
    v.try_into().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choices_are_lexicographic() {
        let all = all_choices();
        let labels: Vec<String> = all.iter().map(choices_label).collect();
        assert_eq!(labels, ["LLL", "LLR", "LRL", "LRR", "RLL", "RLR", "RRL", "RRR"]);
        let mut sorted = all;
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn parse_labels() {
        use CircleChoice::*;
        assert_eq!(parse_choices("llr"), Some([Left, Left, Right]));
        assert_eq!(parse_choices("LL"), None);
        assert_eq!(parse_choices("LXR"), None);
    }
}
