//! Finite/divergent classification of a seminorm profile on the dyadic
//! schedule `r_j = 1 − 2^{−j}`.
//!
//! Works on `w_j = value_j^p`. Along the dyadic schedule a bounded profile
//! approaching its limit like `(1−r)^γ` has increment ratios `2^{−γ} < 1`,
//! a profile growing like `(1−r)^{−γ}` has ratios `2^{γ} > 1`, and a
//! logarithmic blow-up has ratios tending to 1.

use serde::{Deserialize, Serialize};

/// Increment ratios at or below this mean the profile settles.
pub const FINITE_RATIO: f64 = 0.96;

/// Increment ratios at or above this mean the profile grows without bound.
pub const DIVERGENT_RATIO: f64 = 0.98;

/// Number of trailing resolved points the classifier looks at.
pub const WINDOW: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Finite,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthDiagnostics {
    /// Radii of the window.
    pub radii: Vec<f64>,
    /// `value^p` at those radii.
    pub powers: Vec<f64>,
    pub increments: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Geometric mean of `ratios`.
    pub mean_ratio: Option<f64>,
    /// Largest spread `|log(ratio / mean_ratio)|`; a fit residual.
    pub ratio_spread: Option<f64>,
    /// All increments of the value within tolerance.
    pub cauchy: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub classification: Classification,
    /// `sup_r [u_r]`, meaningful when finite.
    pub sup_estimate: Option<f64>,
    /// `γ` in `[u_r] ~ (1−r)^{−γ}`, meaningful when divergent; 0 for
    /// logarithmic growth.
    pub growth_exponent: Option<f64>,
    pub diagnostics: GrowthDiagnostics,
}

impl MembershipVerdict {
    pub fn is_finite(&self) -> bool {
        self.classification == Classification::Finite
    }
}

/// Classifies a non-decreasing profile given at consecutive dyadic radii.
///
/// `tol` is relative: increments of the value below `tol · value` count as
/// settled.
pub fn classify(radii: &[f64], values: &[f64], p: f64, tol: f64) -> MembershipVerdict {
    assert_eq!(radii.len(), values.len(), "radii and values must pair up");
    let start = values.len().saturating_sub(WINDOW);
    let radii = radii[start..].to_vec();
    let vals = &values[start..];
    let powers: Vec<f64> = vals.iter().map(|v| v.powf(p)).collect();
    let increments: Vec<f64> = powers.windows(2).map(|w| w[1] - w[0]).collect();
    let last = vals.last().copied().unwrap_or(0.0);
    let cauchy = vals.len() >= 2 && vals.windows(2).all(|w| (w[1] - w[0]).abs() <= tol * last.abs());

    let ratios: Vec<f64> = increments.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::NAN }).collect();
    let usable = ratios.len() == WINDOW - 2 && ratios.iter().all(|r| r.is_finite() && *r > 0.0);
    let mean_ratio = usable.then(|| (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp());
    let ratio_spread = mean_ratio.map(|m| ratios.iter().map(|r| (r / m).ln().abs()).fold(0.0, f64::max));
    let diagnostics =
        GrowthDiagnostics { radii, powers: powers.clone(), increments: increments.clone(), ratios, mean_ratio, ratio_spread, cauchy };

    let finite = |sup_p: f64| MembershipVerdict {
        classification: Classification::Finite,
        sup_estimate: Some(sup_p.max(0.0).powf(1.0 / p)),
        growth_exponent: None,
        diagnostics: diagnostics.clone(),
    };
    let w_last = powers.last().copied().unwrap_or(0.0);
    if cauchy {
        return finite(w_last);
    }
    match mean_ratio {
        Some(rho) if rho <= FINITE_RATIO => {
            // the most recent ratio is the most accurate local model of the tail
            let delta = *increments.last().expect("window has increments");
            let local = *diagnostics.ratios.last().expect("window has ratios");
            let local = if local < 1.0 { local } else { rho };
            finite(w_last + delta * local / (1.0 - local))
        }
        Some(rho) if rho >= DIVERGENT_RATIO => MembershipVerdict {
            classification: Classification::Divergent,
            sup_estimate: None,
            growth_exponent: Some(rho.log2().max(0.0) / p),
            diagnostics,
        },
        _ => MembershipVerdict {
            classification: Classification::Inconclusive,
            sup_estimate: None,
            growth_exponent: None,
            diagnostics,
        },
    }
}
