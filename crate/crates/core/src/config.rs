use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The delta-interaction configurations the crate knows how to solve.
///
/// Serializes as `{"kind": "double_unequal", "alpha": 2.0, "beta": 4.0,
/// "a": 7.0}` with snake-case kind tags. All numbers are in hbar = 1,
/// 2m = 1 units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfigKind {
    /// One delta of strength `mu` plus a step of height `g` at the origin.
    DeltaStep { mu: f64, g: f64 },
    /// Two deltas of equal strength `alpha` at x = -a and x = +a.
    DoubleEqual { alpha: f64, a: f64 },
    /// Two deltas of strengths `alpha` (at -a) and `beta` (at +a).
    DoubleUnequal { alpha: f64, beta: f64, a: f64 },
    /// Three deltas `alpha` (at -a), `mu` (at 0), `beta` (at +a).
    TripleUnequal { alpha: f64, mu: f64, beta: f64, a: f64 },
    /// Three equally spaced deltas of alternating sign and common
    /// magnitude `alpha`.
    TripleAlternating { alpha: f64, a: f64 },
    /// Finite array of N = 2J + 1 alternating deltas at n·a, |n| <= J.
    AlternatingArray { alpha: f64, a: f64, j: u32 },
    /// Infinite alternating comb of period 2a.
    AlternatingComb { alpha: f64, a: f64 },
}

impl ConfigKind {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfiguration(msg.to_string()));
        match *self {
            ConfigKind::DeltaStep { mu, g } => {
                if mu == 0.0 {
                    return bad("delta_step requires mu != 0");
                }
                if !mu.is_finite() || !g.is_finite() {
                    return bad("delta_step parameters must be finite");
                }
            }
            ConfigKind::DoubleEqual { alpha, a } => {
                if !(a > 0.0) {
                    return bad("double_equal requires a > 0");
                }
                if alpha == 0.0 || !alpha.is_finite() {
                    return bad("double_equal requires finite alpha != 0");
                }
            }
            ConfigKind::DoubleUnequal { alpha, beta, a } => {
                if !(a > 0.0) {
                    return bad("double_unequal requires a > 0");
                }
                if alpha == 0.0 || beta == 0.0 || !alpha.is_finite() || !beta.is_finite() {
                    return bad("double_unequal requires finite alpha, beta != 0");
                }
            }
            ConfigKind::TripleUnequal { alpha, mu, beta, a } => {
                if !(a > 0.0) {
                    return bad("triple_unequal requires a > 0");
                }
                if [alpha, mu, beta].iter().any(|v| *v == 0.0 || !v.is_finite()) {
                    return bad("triple_unequal requires finite alpha, mu, beta != 0");
                }
            }
            ConfigKind::TripleAlternating { alpha, a } => {
                if !(a > 0.0) || alpha == 0.0 || !alpha.is_finite() {
                    return bad("triple_alternating requires a > 0 and alpha != 0");
                }
            }
            ConfigKind::AlternatingArray { alpha, a, j } => {
                if !(a > 0.0) || alpha == 0.0 || !alpha.is_finite() {
                    return bad("alternating_array requires a > 0 and alpha != 0");
                }
                if j == 0 {
                    return bad("alternating_array requires j >= 1");
                }
            }
            ConfigKind::AlternatingComb { alpha, a } => {
                if !(a > 0.0) || alpha == 0.0 || !alpha.is_finite() {
                    return bad("alternating_comb requires a > 0 and alpha != 0");
                }
            }
        }
        Ok(())
    }

    /// Short tag matching the serialized kind name.
    pub fn tag(&self) -> &'static str {
        match self {
            ConfigKind::DeltaStep { .. } => "delta_step",
            ConfigKind::DoubleEqual { .. } => "double_equal",
            ConfigKind::DoubleUnequal { .. } => "double_unequal",
            ConfigKind::TripleUnequal { .. } => "triple_unequal",
            ConfigKind::TripleAlternating { .. } => "triple_alternating",
            ConfigKind::AlternatingArray { .. } => "alternating_array",
            ConfigKind::AlternatingComb { .. } => "alternating_comb",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let kind = ConfigKind::DoubleUnequal {
            alpha: 2.0,
            beta: 4.0,
            a: 7.0,
        };
        let text = serde_json::to_string(&kind).unwrap();
        assert!(text.contains("\"kind\":\"double_unequal\""));
        let back: ConfigKind = serde_json::from_str(&text).unwrap();
        assert_eq!(kind, back);
    }

    #[test]
    fn parses_spec_shape() {
        let kind: ConfigKind =
            serde_json::from_str(r#"{"kind": "double_unequal", "alpha": 2.0, "beta": 4.0, "a": 7.0}"#)
                .unwrap();
        assert_eq!(
            kind,
            ConfigKind::DoubleUnequal {
                alpha: 2.0,
                beta: 4.0,
                a: 7.0
            }
        );
    }

    #[test]
    fn rejects_zero_mu() {
        assert!(ConfigKind::DeltaStep { mu: 0.0, g: 1.0 }.validate().is_err());
    }

    #[test]
    fn rejects_nonpositive_spacing() {
        assert!(ConfigKind::DoubleEqual { alpha: 2.0, a: 0.0 }.validate().is_err());
        assert!(ConfigKind::DoubleEqual { alpha: 2.0, a: -1.0 }.validate().is_err());
    }
}
