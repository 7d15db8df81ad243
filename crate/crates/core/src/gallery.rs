//! Built-in Taylor functions with known membership regimes.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::analytic::{TailPolicy, TaylorFunction};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_K_MAX: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum GallerySpec {
    /// `z^n`.
    Monomial { n: usize },
    /// `a_k = k^{−s0−1/2−ε}`, `k ≥ 1`.
    PowerSeries { s0: f64, eps: f64 },
    /// `a_k = 1/k`, i.e. `log(1/(1−z))`.
    LogSingularity,
    /// Binomial series of `(1−z)^α`.
    HolderAlpha { alpha: f64 },
    /// `a_k = k^{−s0−1/2} (log k)^{−β}`, `k ≥ 2`.
    LogBeta { s0: f64, beta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSchema {
    pub name: &'static str,
    pub kind: &'static str,
    pub range: &'static str,
    pub default: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalleryInfo {
    pub id: &'static str,
    pub description: &'static str,
    pub params: Vec<ParamSchema>,
}

/// Every gallery entry with its parameter schema.
pub fn list() -> Vec<GalleryInfo> {
    let p = |name, kind, range, default| ParamSchema { name, kind, range, default };
    vec![
        GalleryInfo {
            id: "monomial",
            description: "u(z) = z^n",
            params: vec![p("n", "integer", "n >= 1", 1.0)],
        },
        GalleryInfo {
            id: "power_series",
            description: "a_k = k^(-s0-1/2-eps), k >= 1",
            params: vec![p("s0", "real", "0 < s0 < 1", 0.5), p("eps", "real", "eps > 0", 0.1)],
        },
        GalleryInfo { id: "log_singularity", description: "a_k = 1/k, u(z) = log(1/(1-z))", params: vec![] },
        GalleryInfo {
            id: "holder_alpha",
            description: "binomial series of (1-z)^alpha",
            params: vec![p("alpha", "real", "0 < alpha < 1", 0.5)],
        },
        GalleryInfo {
            id: "log_beta",
            description: "a_k = k^(-s0-1/2) (log k)^(-beta), k >= 2",
            params: vec![p("s0", "real", "0 < s0 < 1/2", 0.25), p("beta", "real", "1/2 < beta < 1", 0.75)],
        },
    ]
}

impl GallerySpec {
    pub fn id(&self) -> &'static str {
        match self {
            GallerySpec::Monomial { .. } => "monomial",
            GallerySpec::PowerSeries { .. } => "power_series",
            GallerySpec::LogSingularity => "log_singularity",
            GallerySpec::HolderAlpha { .. } => "holder_alpha",
            GallerySpec::LogBeta { .. } => "log_beta",
        }
    }

    /// Builds an entry from its id and named parameters; missing ones take
    /// their defaults.
    pub fn from_params(id: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let info = list().into_iter().find(|g| g.id == id).ok_or_else(|| Error::UnknownGallery(id.to_string()))?;
        if let Some(extra) = params.keys().find(|k| !info.params.iter().any(|p| p.name == k.as_str())) {
            return Err(Error::InvalidParameter(format!("`{id}` takes no parameter `{extra}`")));
        }
        let get = |name: &str| {
            params
                .get(name)
                .copied()
                .unwrap_or_else(|| info.params.iter().find(|p| p.name == name).expect("schema lists it").default)
        };
        let spec = match id {
            "monomial" => {
                let n = get("n");
                if n.fract() != 0.0 || n < 1.0 {
                    return Err(Error::InvalidParameter(format!("monomial degree n = {n} must be an integer >= 1")));
                }
                GallerySpec::Monomial { n: n as usize }
            }
            "power_series" => GallerySpec::PowerSeries { s0: get("s0"), eps: get("eps") },
            "log_singularity" => GallerySpec::LogSingularity,
            "holder_alpha" => GallerySpec::HolderAlpha { alpha: get("alpha") },
            "log_beta" => GallerySpec::LogBeta { s0: get("s0"), beta: get("beta") },
            _ => unreachable!("listed ids are handled"),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            GallerySpec::Monomial { n } if n < 1 => bad(format!("monomial degree n = {n} must be >= 1")),
            GallerySpec::PowerSeries { s0, .. } if !(s0 > 0.0 && s0 < 1.0) => bad(format!("s0 = {s0} must lie in (0, 1)")),
            GallerySpec::PowerSeries { eps, .. } if !(eps > 0.0 && eps.is_finite()) => bad(format!("eps = {eps} must be > 0")),
            GallerySpec::HolderAlpha { alpha } if !(alpha > 0.0 && alpha < 1.0) => {
                bad(format!("alpha = {alpha} must lie in (0, 1)"))
            }
            GallerySpec::LogBeta { s0, .. } if !(s0 > 0.0 && s0 < 0.5) => bad(format!("s0 = {s0} must lie in (0, 1/2)")),
            GallerySpec::LogBeta { beta, .. } if !(beta > 0.5 && beta < 1.0) => {
                bad(format!("beta = {beta} must lie in (1/2, 1)"))
            }
            _ => Ok(()),
        }
    }

    /// Named parameters, for reports.
    pub fn params(&self) -> BTreeMap<&'static str, f64> {
        match *self {
            GallerySpec::Monomial { n } => [("n", n as f64)].into(),
            GallerySpec::PowerSeries { s0, eps } => [("s0", s0), ("eps", eps)].into(),
            GallerySpec::LogSingularity => BTreeMap::new(),
            GallerySpec::HolderAlpha { alpha } => [("alpha", alpha)].into(),
            GallerySpec::LogBeta { s0, beta } => [("s0", s0), ("beta", beta)].into(),
        }
    }
}

/// `a_0..=a_{K_max}` of an entry, with its tail policy.
pub fn make<T: Real>(spec: &GallerySpec, k_max: usize) -> Result<TaylorFunction<T>> {
    spec.validate()?;
    let real = |x: f64| Complex::new(T::lit(x), T::zero());
    let (coeffs, tail): (Vec<f64>, TailPolicy) = match *spec {
        GallerySpec::Monomial { n } => {
            let mut a = vec![0.0; n + 1];
            a[n] = 1.0;
            (a, TailPolicy::Exact)
        }
        GallerySpec::PowerSeries { s0, eps } => {
            let q = s0 + 0.5 + eps;
            (power_law(k_max, q), TailPolicy::PowerLaw { c: 1.0, q })
        }
        GallerySpec::LogSingularity => (power_law(k_max, 1.0), TailPolicy::PowerLaw { c: 1.0, q: 1.0 }),
        GallerySpec::HolderAlpha { alpha } => {
            let mut a = Vec::with_capacity(k_max + 1);
            a.push(1.0);
            for k in 1..=k_max {
                let prev = a[k - 1];
                a.push(prev * (k as f64 - 1.0 - alpha) / k as f64);
            }
            // k^{1+α}|a_k| decreases to 1/|Γ(−α)|, so its value at K_max bounds the rest
            let c = (k_max.max(1) as f64).powf(1.0 + alpha) * a[k_max.max(1).min(a.len() - 1)].abs();
            (a, TailPolicy::Bound { c, q: 1.0 + alpha })
        }
        GallerySpec::LogBeta { s0, beta } => {
            let q = s0 + 0.5;
            let a = (0..=k_max)
                .map(|k| if k < 2 { 0.0 } else { (k as f64).powf(-q) * (k as f64).ln().powf(-beta) })
                .collect();
            let c = ((k_max + 1).max(2) as f64).ln().powf(-beta);
            (a, TailPolicy::Bound { c, q })
        }
    };
    TaylorFunction::new(coeffs.into_iter().map(real).collect(), tail)
}

fn power_law(k_max: usize, q: f64) -> Vec<f64> {
    (0..=k_max).map(|k| if k == 0 { 0.0 } else { (k as f64).powf(-q) }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedClass {
    Finite,
    Divergent,
    /// Finite is guaranteed, but nothing is claimed beyond the threshold.
    SufficientOnly,
    Unknown,
}

impl ExpectedClass {
    /// Whether a numerical verdict can be compared against this.
    pub fn is_decisive(self) -> bool {
        !matches!(self, ExpectedClass::Unknown)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpectedRegime {
    pub class: ExpectedClass,
    pub anchor: &'static str,
}

/// What is known in closed form about `sup_r [u_r]_{W^{s,p}}`.
pub fn expected_regime(spec: &GallerySpec, s: f64, p: f64) -> ExpectedRegime {
    use ExpectedClass::*;
    let reg = |class, anchor| ExpectedRegime { class, anchor };
    let p2 = p == 2.0;
    match *spec {
        GallerySpec::Monomial { .. } => reg(Finite, "z^n has [u_r] = r^n [e^{in.}], bounded for all 0 < s < 1"),
        GallerySpec::PowerSeries { s0, eps } if p2 => {
            let anchor = "sum of k^{2s}|a_k|^2 = k^{2(s-s0-eps)-1} converges iff s < s0 + eps";
            if s < s0 + eps {
                reg(Finite, anchor)
            } else {
                reg(Divergent, anchor)
            }
        }
        GallerySpec::LogSingularity if p2 => {
            let anchor = "sum of k^{2s-2} converges iff s < 1/2; at s = 1/2 it is the harmonic series";
            if s < 0.5 {
                reg(Finite, anchor)
            } else {
                reg(Divergent, anchor)
            }
        }
        GallerySpec::HolderAlpha { alpha } => {
            if s < alpha {
                reg(SufficientOnly, "alpha-Hoelder boundary values lie in W^{s,p} for every s < alpha")
            } else {
                reg(Unknown, "only s < alpha is guaranteed")
            }
        }
        GallerySpec::LogBeta { s0, .. } if p2 => {
            let anchor = "k^{2(s-s0)-1}(log k)^{-2 beta} is summable iff s <= s0, since 2 beta > 1";
            if s <= s0 {
                reg(Finite, anchor)
            } else {
                reg(Divergent, anchor)
            }
        }
        _ => reg(Unknown, "no closed-form criterion away from p = 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn five_entries_with_schemas() {
        let entries = list();
        assert_eq!(entries.len(), 5);
        for e in &entries {
            let defaults: BTreeMap<String, f64> = e.params.iter().map(|p| (p.name.to_string(), p.default)).collect();
            GallerySpec::from_params(e.id, &defaults).unwrap();
        }
    }

    #[test]
    fn monomial_coefficients() {
        let u = make::<f64>(&GallerySpec::Monomial { n: 3 }, DEFAULT_K_MAX).unwrap();
        assert_eq!(u.k_max(), 3);
        for k in 0..=10 {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert_eq!(u.coefficient(k).unwrap().re, want);
        }
    }

    #[test]
    fn log_singularity_coefficients() {
        let u = make::<f64>(&GallerySpec::LogSingularity, 64).unwrap();
        assert_eq!(u.coeffs()[0].re, 0.0);
        assert_eq!(u.coeffs()[7].re, 1.0 / 7.0);
        assert_eq!(u.tail(), TailPolicy::PowerLaw { c: 1.0, q: 1.0 });
        assert!((u.coefficient(1000).unwrap().re - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn holder_binomial_coefficients() {
        let u = make::<f64>(&GallerySpec::HolderAlpha { alpha: 0.5 }, 16).unwrap();
        assert_eq!(u.coeffs()[0].re, 1.0);
        assert_eq!(u.coeffs()[1].re, -0.5);
        assert_eq!(u.coeffs()[2].re, -0.125);
        assert!((u.coeffs()[3].re + 0.0625).abs() < 1e-17);
        // (1−z)^{1/2} squared is 1 − z
        let a: Vec<f64> = u.coeffs().iter().map(|c| c.re).collect();
        for n in 0..=16 {
            let conv: f64 = (0..=n).map(|i| a[i] * a[n - i]).sum();
            let want = match n {
                0 => 1.0,
                1 => -1.0,
                _ => 0.0,
            };
            assert!((conv - want).abs() < 1e-15, "n={n}");
        }
    }

    #[test]
    fn log_beta_starts_at_two() {
        let u = make::<f64>(&GallerySpec::LogBeta { s0: 0.25, beta: 0.75 }, 32).unwrap();
        assert_eq!(u.coeffs()[0].re, 0.0);
        assert_eq!(u.coeffs()[1].re, 0.0);
        let want = 2f64.powf(-0.75) * 2f64.ln().powf(-0.75);
        assert!((u.coeffs()[2].re - want).abs() < 1e-16);
    }

    #[test]
    fn declared_tails_bound_the_decay() {
        let k_max = 4096;
        for spec in [
            GallerySpec::PowerSeries { s0: 0.3, eps: 0.2 },
            GallerySpec::LogSingularity,
            GallerySpec::HolderAlpha { alpha: 0.3 },
            GallerySpec::HolderAlpha { alpha: 0.8 },
            GallerySpec::LogBeta { s0: 0.25, beta: 0.6 },
        ] {
            let u = make::<f64>(&spec, k_max).unwrap();
            let (c, q) = u.tail().power().unwrap();
            for k in k_max / 2 + 1..=k_max {
                let a = u.coeffs()[k].norm();
                if matches!(u.tail(), TailPolicy::PowerLaw { .. }) {
                    assert!((a - c * (k as f64).powf(-q)).abs() <= 1e-15 * a);
                }
                // decay exponent matches on (K/2, K]
                let slope = (u.coeffs()[k].norm() / u.coeffs()[k_max / 2].norm()).ln() / (k as f64 / (k_max / 2) as f64).ln();
                let tol = if matches!(spec, GallerySpec::LogBeta { .. }) { 0.15 } else { 1e-3 };
                if k > k_max / 2 + 100 {
                    assert!((slope + q).abs() < tol, "{spec:?} slope {slope} vs -{q}");
                }
            }
            // beyond K_max the bound has to hold for the true continuation
            if let GallerySpec::HolderAlpha { alpha } = spec {
                let mut a = u.coeffs()[k_max].re;
                for k in k_max + 1..8 * k_max {
                    a *= (k as f64 - 1.0 - alpha) / k as f64;
                    assert!(a.abs() <= c * (k as f64).powf(-q));
                }
            }
            if let GallerySpec::LogBeta { s0, beta } = spec {
                for k in [k_max + 1, 10 * k_max, 1000 * k_max] {
                    let a = (k as f64).powf(-s0 - 0.5) * (k as f64).ln().powf(-beta);
                    assert!(a <= c * (k as f64).powf(-q));
                }
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(GallerySpec::from_params("monomial", &params(&[("n", 0.0)])).is_err());
        assert!(GallerySpec::from_params("monomial", &params(&[("n", 2.5)])).is_err());
        assert!(GallerySpec::from_params("power_series", &params(&[("eps", 0.0)])).is_err());
        assert!(GallerySpec::from_params("holder_alpha", &params(&[("alpha", 1.0)])).is_err());
        assert!(GallerySpec::from_params("log_beta", &params(&[("beta", 0.5)])).is_err());
        assert!(GallerySpec::from_params("log_singularity", &params(&[("n", 1.0)])).is_err());
        assert!(matches!(GallerySpec::from_params("cardioid", &params(&[])), Err(Error::UnknownGallery(_))));
        assert_eq!(
            GallerySpec::from_params("power_series", &params(&[("eps", 0.2)])).unwrap(),
            GallerySpec::PowerSeries { s0: 0.5, eps: 0.2 }
        );
    }

    #[test]
    fn regimes() {
        use ExpectedClass::*;
        let log = GallerySpec::LogSingularity;
        assert_eq!(expected_regime(&log, 0.4, 2.0).class, Finite);
        assert_eq!(expected_regime(&log, 0.5, 2.0).class, Divergent);
        assert_eq!(expected_regime(&log, 0.4, 3.0).class, Unknown);
        let holder = GallerySpec::HolderAlpha { alpha: 0.5 };
        assert_eq!(expected_regime(&holder, 0.3, 3.0).class, SufficientOnly);
        assert_eq!(expected_regime(&holder, 0.7, 2.0).class, Unknown);
        assert_eq!(expected_regime(&GallerySpec::Monomial { n: 4 }, 0.99, 7.0).class, Finite);
        let ps = GallerySpec::PowerSeries { s0: 0.5, eps: 0.1 };
        assert_eq!(expected_regime(&ps, 0.55, 2.0).class, Finite);
        assert_eq!(expected_regime(&ps, 0.6, 2.0).class, Divergent);
        let lb = GallerySpec::LogBeta { s0: 0.25, beta: 0.75 };
        assert_eq!(expected_regime(&lb, 0.25, 2.0).class, Finite);
        assert_eq!(expected_regime(&lb, 0.3, 2.0).class, Divergent);
        // total on the parameter square
        for &s in &[0.01, 0.5, 0.99] {
            for &p in &[1.01, 2.0, 50.0] {
                for spec in [log, holder, ps, lb, GallerySpec::Monomial { n: 1 }] {
                    let _ = expected_regime(&spec, s, p);
                }
            }
        }
    }
}
