//! L^p norms, Gagliardo seminorms (spectral `p = 2` path and singular
//! quadrature for general `p`), `W^{s,p}` norms and the spectral multipliers
//! that act on circle functions.
//!
//! The double integral is taken over `(−π, π)²` with the measure `dξ dσ`.
//! The default kernel is the periodized flat kernel
//! `Σ_n |ξ − σ + 2πn|^{−(1+sp)}`, for which
//! `[u]² = η_s Σ_k |k|^{2s} |c_k|²` holds exactly; the chord and sine forms
//! are available through [`KernelForm`].

mod eta;
mod kernel;

pub use eta::{eta_cache_snapshot, eta_constant, EtaConstant, ETA_MAX_DRIFT, ETA_RESOLUTION};
pub use kernel::KernelForm;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::circle::{grid_spectrum, FourierCoeffs, GridFunction};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{next_pow2, pairwise_sum};

/// The pair `(s, p)` with `0 < s < 1`, `1 < p < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormParams<T> {
    s: T,
    p: T,
}

impl<T: Real> SeminormParams<T> {
    pub fn new(s: T, p: T) -> Result<Self> {
        if !(s > T::zero() && s < T::one()) {
            return Err(Error::InvalidParameter(format!("s = {s} must lie in (0, 1)")));
        }
        if !(p > T::one() && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("p = {p} must lie in (1, ∞)")));
        }
        Ok(Self { s, p })
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn is_p2(&self) -> bool {
        self.p == T::lit(2.0)
    }
}

/// Nodes, kernel and diagonal treatment of the tensor midpoint rule.
///
/// `nodes_per_axis` is a floor: the rule refines further when the input's
/// bandwidth needs it. With `extrapolate`, the rule is evaluated at `M` and
/// `M/2` nodes and the leading `h^{p(1−s)}` diagonal error is cancelled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub nodes_per_axis: usize,
    pub kernel: KernelForm,
    pub offset: bool,
    pub extrapolate: bool,
}

impl QuadratureConfig {
    pub const DEFAULT_NODES: usize = 1024;

    pub fn new(nodes_per_axis: usize) -> Result<Self> {
        Self { nodes_per_axis, ..Self::default() }.validated()
    }

    pub fn with_kernel(mut self, kernel: KernelForm) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn validated(self) -> Result<Self> {
        if self.nodes_per_axis < 16 || !self.nodes_per_axis.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs a power-of-two node count >= 16, got {}",
                self.nodes_per_axis
            )));
        }
        Ok(self)
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { nodes_per_axis: Self::DEFAULT_NODES, kernel: KernelForm::Wrapped, offset: true, extrapolate: true }
    }
}

/// Which measure the L^p norm integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// `dθ` on `(−π, π)`; constant 1 has norm `(2π)^{1/p}`.
    Unnormalized,
    /// `dθ/2π`; constant 1 has norm 1.
    Normalized,
}

/// Riemann-sum L^p norm of grid samples; `p >= 1`.
pub fn lp_norm<T: Real>(grid: &GridFunction<T>, p: T, measure: Measure) -> T {
    assert!(p >= T::one(), "lp_norm needs p >= 1");
    let n = T::from_usize_lossy(grid.len());
    let weight = match measure {
        Measure::Unnormalized => T::lit(2.0) * T::PI() / n,
        Measure::Normalized => T::one() / n,
    };
    let terms: Vec<T> = grid.values().iter().map(|v| v.norm().powf(p)).collect();
    (pairwise_sum(&terms) * weight).powf(T::one() / p)
}

/// `Σ_{k≠0} |k|^{2s} |c_k|²`.
pub fn spectral_energy<T: Real>(coeffs: &FourierCoeffs<T>, s: T) -> T {
    let terms: Vec<T> = coeffs
        .modes()
        .filter(|(k, _)| *k != 0)
        .map(|(k, c)| T::from_i64(k.abs()).expect("mode fits").powf(T::lit(2.0) * s) * c.norm_sqr())
        .collect();
    pairwise_sum(&terms)
}

/// `sqrt(η_s Σ_{k≠0} |k|^{2s} |c_k|²)`.
pub fn gagliardo_spectral<T: Real>(coeffs: &FourierCoeffs<T>, s: T) -> Result<T> {
    let eta = eta_constant(s.as_f64())?.eta;
    Ok(gagliardo_spectral_with_eta(coeffs, s, T::lit(eta)))
}

/// Spectral seminorm with a caller-supplied normalization.
pub fn gagliardo_spectral_with_eta<T: Real>(coeffs: &FourierCoeffs<T>, s: T, eta: T) -> T {
    (eta * spectral_energy(coeffs, s)).sqrt()
}

/// Offset tensor midpoint rule for the Gagliardo seminorm of a grid function
/// (through its trigonometric interpolant).
pub fn gagliardo_quadrature<T: Real>(grid: &GridFunction<T>, params: &SeminormParams<T>, quad: &QuadratureConfig) -> T {
    gagliardo_quadrature_coeffs(&grid_spectrum(grid), params, quad)
}

/// Quadrature seminorm of a trigonometric polynomial, sampled exactly on the nodes.
pub fn gagliardo_quadrature_coeffs<T: Real>(
    coeffs: &FourierCoeffs<T>,
    params: &SeminormParams<T>,
    quad: &QuadratureConfig,
) -> T {
    quadrature_pth_power(coeffs, params.s(), params.p(), quad).powf(T::one() / params.p())
}

/// Seminorm by the engine that fits the data: spectral when `p = 2` with the
/// wrapped kernel, quadrature otherwise.
pub fn gagliardo_seminorm<T: Real>(
    coeffs: &FourierCoeffs<T>,
    params: &SeminormParams<T>,
    quad: &QuadratureConfig,
) -> Result<T> {
    if params.is_p2() && quad.kernel == KernelForm::Wrapped {
        gagliardo_spectral(coeffs, params.s())
    } else {
        Ok(gagliardo_quadrature_coeffs(coeffs, params, quad))
    }
}

/// Nodes per axis the rule actually uses for `coeffs`.
pub fn quadrature_nodes<T: Real>(coeffs: &FourierCoeffs<T>, quad: &QuadratureConfig) -> usize {
    let band = coeffs.effective_bandwidth(T::epsilon() * T::lit(64.0));
    let resolve = next_pow2(2 * band + 2);
    let floor = if quad.extrapolate { 2 * resolve } else { resolve };
    quad.nodes_per_axis.max(floor).max(16)
}

/// `[u]^p` by the (optionally extrapolated) tensor rule.
pub(crate) fn quadrature_pth_power<T: Real>(coeffs: &FourierCoeffs<T>, s: T, p: T, quad: &QuadratureConfig) -> T {
    if coeffs.modes().all(|(k, c)| k == 0 || c.norm() == T::zero()) {
        return T::zero();
    }
    let m = quadrature_nodes(coeffs, quad);
    let fine = kernel::tensor_rule(coeffs, m, s, p, quad.kernel, quad.offset);
    if !quad.extrapolate {
        return fine.max(T::zero());
    }
    let coarse = kernel::tensor_rule(coeffs, m / 2, s, p, quad.kernel, quad.offset);
    let gain = T::lit(2.0).powf(p * (T::one() - s));
    ((gain * fine - coarse) / (gain - T::one())).max(T::zero())
}

/// `‖u‖_{L^p} + [u]_{W^{s,p}}`, unnormalized L^p, quadrature seminorm.
pub fn wsp_norm<T: Real>(grid: &GridFunction<T>, params: &SeminormParams<T>, quad: &QuadratureConfig) -> T {
    lp_norm(grid, params.p(), Measure::Unnormalized) + gagliardo_quadrature(grid, params, quad)
}

/// `W^{s,2}` norm from coefficients: `sqrt(2π Σ|c_k|²) + sqrt(η_s Σ|k|^{2s}|c_k|²)`.
pub fn wsp_norm_spectral<T: Real>(coeffs: &FourierCoeffs<T>, s: T) -> Result<T> {
    Ok(l2_norm_coeffs(coeffs) + gagliardo_spectral(coeffs, s)?)
}

/// Unnormalized L² norm of a trigonometric polynomial, by Parseval.
pub fn l2_norm_coeffs<T: Real>(coeffs: &FourierCoeffs<T>) -> T {
    let terms: Vec<T> = coeffs.as_slice().iter().map(|c| c.norm_sqr()).collect();
    (T::lit(2.0) * T::PI() * pairwise_sum(&terms)).sqrt()
}

/// `(−Δ)^s`: `c_k ↦ |k|^{2s} c_k`, with `(−Δ)^0` the identity.
pub fn fractional_laplacian<T: Real>(coeffs: &FourierCoeffs<T>, s: T) -> Result<FourierCoeffs<T>> {
    if !(s >= T::zero()) {
        return Err(Error::InvalidParameter(format!("fractional order s = {s} must be >= 0")));
    }
    if s == T::zero() {
        return Ok(coeffs.clone());
    }
    Ok(coeffs.map_modes(|k, c| c * T::from_i64(k.abs()).expect("mode fits").powf(T::lit(2.0) * s)))
}

/// Conjugate-function multiplier `c_k ↦ −i·sgn(k)·c_k`.
pub fn hilbert_conjugate<T: Real>(coeffs: &FourierCoeffs<T>) -> FourierCoeffs<T> {
    coeffs.map_modes(|k, c| match k.signum() {
        0 => Complex::new(T::zero(), T::zero()),
        1 => c * Complex::new(T::zero(), -T::one()),
        _ => c * Complex::new(T::zero(), T::one()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::synthesize;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    // Independent closed form for the wrapped kernel:
    // η_s = 2π ∫_R |e^{it} − 1|² |t|^{−1−2s} dt = 4π² / (Γ(1+2s) sin(πs)).
    fn eta_closed_form(s: f64) -> f64 {
        4.0 * PI * PI / (statrs::function::gamma::gamma(1.0 + 2.0 * s) * (PI * s).sin())
    }

    #[test]
    fn params_reject_endpoints() {
        assert!(SeminormParams::new(0.0, 2.0).is_err());
        assert!(SeminormParams::new(1.0, 2.0).is_err());
        assert!(SeminormParams::new(0.5, 1.0).is_err());
        assert!(SeminormParams::new(0.5, f64::INFINITY).is_err());
        assert!(SeminormParams::new(0.5, 1.5).is_ok());
    }

    #[test]
    fn quadrature_config_validation() {
        assert!(QuadratureConfig::new(8).is_err());
        assert!(QuadratureConfig::new(48).is_err());
        assert!(QuadratureConfig::new(64).is_ok());
    }

    #[test]
    fn lp_norm_conventions() {
        let one = GridFunction::from_fn(64, |_| c(1.0, 0.0)).unwrap();
        for &p in &[1.0, 1.5, 2.0, 3.0] {
            let un = lp_norm(&one, p, Measure::Unnormalized);
            assert!((un - (2.0 * PI).powf(1.0 / p)).abs() < 1e-14);
            assert!((lp_norm(&one, p, Measure::Normalized) - 1.0).abs() < 1e-14);
        }
        let zero = GridFunction::from_fn(64, |_| c(0.0, 0.0)).unwrap();
        assert_eq!(lp_norm(&zero, 2.0, Measure::Unnormalized), 0.0);
    }

    #[test]
    fn eta_half_matches_frozen_oracle() {
        // Frozen from the closed form: 4π² at s = 1/2.
        let eta = eta_constant(0.5).unwrap();
        assert!((eta.eta - 39.478_417_604_357_43).abs() < 1e-6 * 39.48, "{eta:?}");
        assert!(eta.drift < ETA_MAX_DRIFT);
        assert_eq!(eta.resolution, ETA_RESOLUTION);
    }

    #[test]
    fn eta_tracks_closed_form() {
        for &s in &[0.1, 0.25, 0.75, 0.9] {
            let eta = eta_constant(s).unwrap().eta;
            let exact = eta_closed_form(s);
            assert!((eta - exact).abs() < 1e-4 * exact, "s={s}: {eta} vs {exact}");
        }
    }

    #[test]
    fn eta_rejects_bad_s_and_is_cached() {
        assert!(eta_constant(0.0).is_err());
        assert!(eta_constant(1.2).is_err());
        let a = eta_constant(0.3).unwrap();
        let b = eta_constant(0.3).unwrap();
        assert_eq!(a, b);
        assert!(eta_cache_snapshot().iter().any(|e| e.s == 0.3));
    }

    #[test]
    fn mode_scaling_matches_power_law() {
        let quad = QuadratureConfig::new(2048).unwrap();
        for &s in &[0.25, 0.5, 0.75] {
            let params = SeminormParams::new(s, 2.0).unwrap();
            let q = |k: i64| {
                let mode = FourierCoeffs::from_modes(&[(k, c(1.0, 0.0))]).unwrap();
                gagliardo_quadrature_coeffs(&mode, &params, &quad).powi(2)
            };
            let base = q(1);
            for k in [2i64, 3] {
                let ratio = q(k) / base;
                let expected = (k as f64).powf(2.0 * s);
                assert!((ratio / expected - 1.0).abs() < 5e-3, "s={s} k={k}: {ratio} vs {expected}");
            }
        }
    }

    #[test]
    fn chord_kernel_departs_from_power_law() {
        // The chord kernel is comparable to, not proportional to, the |k|^{2s} multiplier.
        let quad = QuadratureConfig::new(1024).unwrap().with_kernel(KernelForm::Chord);
        let params = SeminormParams::new(0.25, 2.0).unwrap();
        let q = |k: i64| {
            let mode = FourierCoeffs::from_modes(&[(k, c(1.0, 0.0))]).unwrap();
            gagliardo_quadrature_coeffs(&mode, &params, &quad).powi(2)
        };
        let ratio = q(8) / q(1) / 8f64.powf(0.5);
        assert!((ratio - 1.0).abs() > 0.1);
    }

    #[test]
    fn spectral_single_mode_constant_and_additivity() {
        let s = 0.4;
        let eta = eta_constant(s).unwrap().eta;
        let constant = FourierCoeffs::constant(c(3.0, 1.0));
        assert_eq!(gagliardo_spectral(&constant, s).unwrap(), 0.0);

        let mode = FourierCoeffs::from_modes(&[(-3, c(0.0, 2.0))]).unwrap();
        let expected = eta.sqrt() * 3f64.powf(s) * 2.0;
        assert!((gagliardo_spectral(&mode, s).unwrap() - expected).abs() < 1e-12 * expected);

        let a = FourierCoeffs::from_modes(&[(1, c(1.0, 0.0))]).unwrap();
        let b = FourierCoeffs::from_modes(&[(4, c(0.5, -0.5))]).unwrap();
        let sum = gagliardo_spectral(&a.add(&b), s).unwrap().powi(2);
        let parts = gagliardo_spectral(&a, s).unwrap().powi(2) + gagliardo_spectral(&b, s).unwrap().powi(2);
        assert!((sum - parts).abs() < 1e-12 * sum);
    }

    #[test]
    fn quadrature_agrees_with_spectral_on_smooth_polynomial() {
        let coeffs = FourierCoeffs::from_modes(&[
            (-2, c(0.3, 0.1)),
            (0, c(2.0, 0.0)),
            (1, c(-0.4, 0.8)),
            (5, c(0.1, 0.05)),
        ])
        .unwrap();
        let quad = QuadratureConfig::new(2048).unwrap();
        for &s in &[0.25, 0.5, 0.75] {
            let params = SeminormParams::new(s, 2.0).unwrap();
            let spectral = gagliardo_spectral(&coeffs, s).unwrap();
            let grid = synthesize(&coeffs, 64).unwrap();
            let quadrature = gagliardo_quadrature(&grid, &params, &quad);
            assert!((quadrature / spectral - 1.0).abs() < 5e-3, "s={s}");
        }
    }

    #[test]
    fn chord_and_sin_quadratures_identical() {
        let coeffs = FourierCoeffs::from_modes(&[(1, c(1.0, 0.0)), (3, c(0.2, -0.1))]).unwrap();
        let params = SeminormParams::new(0.6, 3.0).unwrap();
        let chord = QuadratureConfig::new(256).unwrap().with_kernel(KernelForm::Chord);
        let sin = chord.with_kernel(KernelForm::PeriodizedSin);
        let a = gagliardo_quadrature_coeffs(&coeffs, &params, &chord);
        let b = gagliardo_quadrature_coeffs(&coeffs, &params, &sin);
        assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn lipschitz_bound_holds() {
        // u = e^{iθ} has Lipschitz constant 1 in the angle, so
        // [u]^p <= 2π ∫ |t|^p W(t) dt over (−π, π).
        let params = SeminormParams::new(0.5, 3.0).unwrap();
        let quad = QuadratureConfig::new(1024).unwrap();
        let mode = FourierCoeffs::from_modes(&[(1, c(1.0, 0.0))]).unwrap();
        let value = gagliardo_quadrature_coeffs(&mode, &params, &quad);
        let a = 1.0 + 0.5 * 3.0;
        let n = 200_000;
        let h = 2.0 * PI / n as f64;
        let integral: f64 = (0..n)
            .map(|i| {
                let t = -PI + (i as f64 + 0.5) * h;
                t.abs().powf(3.0) * KernelForm::Wrapped.value(t, a) * h
            })
            .sum();
        let bound = (2.0 * PI * integral).powf(1.0 / 3.0);
        assert!(value <= bound, "{value} > {bound}");
    }

    #[test]
    fn offset_and_aligned_rules_agree() {
        let coeffs = FourierCoeffs::from_modes(&[(1, c(1.0, 0.0)), (2, c(0.0, 0.5))]).unwrap();
        let params = SeminormParams::new(0.3, 2.5).unwrap();
        let offset = QuadratureConfig::new(1024).unwrap();
        let aligned = QuadratureConfig { offset: false, ..offset };
        let a = gagliardo_quadrature_coeffs(&coeffs, &params, &offset);
        let b = gagliardo_quadrature_coeffs(&coeffs, &params, &aligned);
        assert!((a / b - 1.0).abs() < 1e-4, "{a} vs {b}");
    }

    #[test]
    fn wsp_norm_cases() {
        let params = SeminormParams::new(0.5, 2.0).unwrap();
        let quad = QuadratureConfig::new(512).unwrap();
        let one = GridFunction::from_fn(32, |_| c(1.0, 0.0)).unwrap();
        assert!((wsp_norm(&one, &params, &quad) - (2.0 * PI).sqrt()).abs() < 1e-12);
        let zero = GridFunction::from_fn(32, |_| c(0.0, 0.0)).unwrap();
        assert_eq!(wsp_norm(&zero, &params, &quad), 0.0);

        let mode = FourierCoeffs::from_modes(&[(1, c(1.0, 0.0))]).unwrap();
        let expected = (2.0 * PI).sqrt() + eta_constant(0.5).unwrap().eta.sqrt();
        assert!((wsp_norm_spectral(&mode, 0.5).unwrap() - expected).abs() < 1e-12);
        let grid = synthesize(&mode, 32).unwrap();
        assert!((wsp_norm(&grid, &params, &quad) / expected - 1.0).abs() < 1e-5);
    }

    #[test]
    fn fractional_laplacian_cases() {
        let coeffs = FourierCoeffs::from_modes(&[(-2, c(1.0, 1.0)), (0, c(5.0, 0.0)), (3, c(0.5, 0.0))]).unwrap();
        assert_eq!(fractional_laplacian(&coeffs, 0.0).unwrap(), coeffs);
        let constant = FourierCoeffs::constant(c(2.0, 0.0));
        assert_eq!(fractional_laplacian(&constant, 0.3).unwrap().get(0), c(0.0, 0.0));
        assert!(fractional_laplacian(&coeffs, -0.1).is_err());

        // ‖(−Δ)^{s/2} u‖² in mode normalization equals Σ |k|^{2s}|c_k|²
        let s = 0.7;
        let half = fractional_laplacian(&coeffs, s / 2.0).unwrap();
        let energy: f64 = half.as_slice().iter().map(|c| c.norm_sqr()).sum();
        assert!((energy - spectral_energy(&coeffs, s)).abs() < 1e-12);
    }

    #[test]
    fn hilbert_conjugate_cases() {
        // cos θ ↦ sin θ
        let cos = FourierCoeffs::from_modes(&[(-1, c(0.5, 0.0)), (1, c(0.5, 0.0))]).unwrap();
        let conj = hilbert_conjugate(&cos);
        assert!((conj.get(1) - c(0.0, -0.5)).norm() < 1e-15);
        assert!((conj.get(-1) - c(0.0, 0.5)).norm() < 1e-15);
        assert_eq!(hilbert_conjugate(&FourierCoeffs::constant(c(4.0, 0.0))).get(0), c(0.0, 0.0));

        // v + i·ṽ is analytic-type for real v
        let v = FourierCoeffs::from_modes(&[(-2, c(0.3, -0.2)), (0, c(1.0, 0.0)), (2, c(0.3, 0.2))]).unwrap();
        let w = v.add(&hilbert_conjugate(&v).scale(c(0.0, 1.0)));
        assert!(w.is_analytic_type());

        let s = 0.35;
        let a = gagliardo_spectral(&v, s).unwrap();
        let b = gagliardo_spectral(&hilbert_conjugate(&v), s).unwrap();
        assert!((a - b).abs() < 1e-13 * a);
    }
}
