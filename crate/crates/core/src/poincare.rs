//! Fractional Poincaré constants `κ(s,p)` in `‖ξ − ξ̄‖_{L^p} ≤ κ [ξ]_{W^{s,p}}`.
//!
//! For `p = 2` the constant is exact. For other `p` a derivative-free search
//! over real trigonometric polynomials gives certified lower bounds.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::{circle_mean, grid_spectrum, synthesize, FourierCoeffs, GridFunction};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::seminorm::{eta_constant, gagliardo_seminorm, l2_norm_coeffs, lp_norm, Measure, QuadratureConfig, SeminormParams};
use crate::special::next_pow2;
use crate::stochastic::RngStream;

/// `κ(s,2) = sqrt(2π/η_s)`, attained by `e^{±iθ}`.
pub fn kappa_exact_p2(s: f64) -> Result<f64> {
    Ok((2.0 * std::f64::consts::PI / eta_constant(s)?.eta).sqrt())
}

/// `‖ξ − ξ̄‖_{L^p} / [ξ]_{W^{s,p}}`, unnormalized L^p.
pub fn ratio<T: Real>(coeffs: &FourierCoeffs<T>, params: &SeminormParams<T>, quad: &QuadratureConfig) -> Result<T> {
    let mut centred = coeffs.clone();
    centred.set(0, Complex::new(T::zero(), T::zero()));
    let oscillation = if params.is_p2() {
        l2_norm_coeffs(&centred)
    } else {
        let n = (4 * next_pow2(2 * centred.bandwidth() + 2)).max(64);
        lp_norm(&synthesize(&centred, n)?, params.p(), Measure::Unnormalized)
    };
    if oscillation == T::zero() {
        return Err(Error::InvalidParameter("the Poincaré ratio is undefined for constants".into()));
    }
    let seminorm = gagliardo_seminorm(&centred, params, quad)?;
    if !(seminorm > T::zero()) {
        return Err(Error::Inconsistent(format!("zero seminorm with oscillation {oscillation}")));
    }
    Ok(oscillation / seminorm)
}

/// `κ[ξ] − ‖ξ − ξ̄‖_p`; nonnegative up to roundoff when `κ` is valid.
pub fn poincare_residual<T: Real>(
    grid: &GridFunction<T>,
    params: &SeminormParams<T>,
    kappa: T,
    quad: &QuadratureConfig,
) -> Result<T> {
    let mean = circle_mean(grid);
    let centred = grid.map(|v| v - mean)?;
    let seminorm = gagliardo_seminorm(&grid_spectrum(grid), params, quad)?;
    Ok(kappa * seminorm - lp_norm(&centred, params.p(), Measure::Unnormalized))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest mode in the search space.
    pub bandwidth: usize,
    /// Random starts, on top of the pure-mode seeds.
    pub restarts: usize,
    /// Ratio evaluations allowed per start.
    pub max_evals: usize,
    pub seed: u64,
    pub quad: QuadratureConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            bandwidth: 16,
            restarts: 20,
            max_evals: 3000,
            seed: 0,
            quad: QuadratureConfig { nodes_per_axis: 256, ..QuadratureConfig::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareEstimate<T> {
    pub params: SeminormParams<T>,
    /// Largest ratio found; a lower bound on `κ(s,p)`.
    pub kappa_lower: T,
    /// Real trigonometric polynomial attaining `kappa_lower`.
    pub certificate: FourierCoeffs<T>,
    /// Best ratio among the starting points alone.
    pub seed_ratio: T,
    pub starts: usize,
    pub evaluations: usize,
    /// Best ratio so far after each start, in start order.
    pub history: Vec<T>,
}

/// Real coefficient vector `(Re c_1, Im c_1, …, Re c_B, Im c_B)` to the
/// real polynomial with `c_{−k} = conj(c_k)`.
fn to_coeffs<T: Real>(x: &[f64]) -> FourierCoeffs<T> {
    let b = x.len() / 2;
    let mut out = FourierCoeffs::zeros(b);
    for k in 1..=b {
        let c = Complex::new(T::lit(x[2 * k - 2]), T::lit(x[2 * k - 1]));
        out.set(k as i64, c);
        out.set(-(k as i64), c.conj());
    }
    out
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

struct LocalResult {
    best: Vec<f64>,
    value: f64,
    seed_value: f64,
    evals: usize,
}

/// Nelder–Mead maximization of a scale-invariant objective, renormalizing
/// every vertex to the unit sphere after each step.
fn nelder_mead(start: Vec<f64>, max_evals: usize, f: &dyn Fn(&[f64]) -> f64) -> LocalResult {
    let dim = start.len();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    };
    let mut x0 = start;
    normalize(&mut x0);
    let seed_value = eval(&x0);
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.clone(), seed_value)];
    for i in 0..dim {
        let mut x = x0.clone();
        x[i] += 0.25;
        normalize(&mut x);
        let v = eval(&x);
        simplex.push((x, v));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| b.1.total_cmp(&a.1));
    order(&mut simplex);
    while evals.get() < max_evals {
        let spread = simplex[0].1 - simplex[dim].1;
        if spread.abs() <= 1e-13 * simplex[0].1.abs().max(1e-300) {
            break;
        }
        let centroid: Vec<f64> =
            (0..dim).map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64).collect();
        let towards = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = (0..dim).map(|j| centroid[j] + t * (simplex[dim].0[j] - centroid[j])).collect();
            normalize(&mut p);
            p
        };
        let reflected = towards(-1.0);
        let fr = eval(&reflected);
        if fr > simplex[0].1 {
            let expanded = towards(-2.0);
            let fe = eval(&expanded);
            simplex[dim] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr > simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let t = if fr > simplex[dim].1 { -0.5 } else { 0.5 };
            let contracted = towards(t);
            let fc = eval(&contracted);
            if fc > simplex[dim].1.max(fr) {
                simplex[dim] = (contracted, fc);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let mut p: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
                    normalize(&mut p);
                    let v = eval(&p);
                    *vertex = (p, v);
                }
            }
        }
        order(&mut simplex);
    }
    let (best, value) = simplex.swap_remove(0);
    LocalResult { best, value, seed_value, evals: evals.get() }
}

/// Multi-start search for the largest Poincaré ratio over real polynomials
/// of bandwidth `≤ B`. Starts are the pure modes `cos kθ`, `k = 1..=B`,
/// then `restarts` uniform random vectors, then `warm_start` if given.
pub fn kappa_search<T: Real>(
    params: &SeminormParams<T>,
    cfg: &SearchConfig,
    warm_start: Option<&PoincareEstimate<T>>,
) -> Result<PoincareEstimate<T>> {
    let b = cfg.bandwidth;
    if b == 0 {
        return Err(Error::InvalidParameter("search bandwidth must be >= 1".into()));
    }
    let dim = 2 * b;
    let mut starts: Vec<Vec<f64>> = (1..=b)
        .map(|k| {
            let mut x = vec![0.0; dim];
            x[2 * k - 2] = 1.0;
            x
        })
        .collect();
    for i in 0..cfg.restarts {
        let mut rng = RngStream::new(cfg.seed, i as u64).rng();
        starts.push((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }
    if let Some(prev) = warm_start {
        let mut x = vec![0.0; dim];
        for k in 1..=prev.certificate.bandwidth().min(b) {
            let c = prev.certificate.get(k as i64);
            x[2 * k - 2] = c.re.as_f64();
            x[2 * k - 1] = c.im.as_f64();
        }
        starts.push(x);
    }

    let objective = |x: &[f64]| -> f64 {
        ratio(&to_coeffs::<T>(x), params, &cfg.quad).map(|r| r.as_f64()).unwrap_or(f64::NEG_INFINITY)
    };
    let results: Vec<LocalResult> = starts.into_par_iter().map(|x| nelder_mead(x, cfg.max_evals, &objective)).collect();

    let mut best_index = 0;
    let mut history = Vec::with_capacity(results.len());
    let mut running = f64::NEG_INFINITY;
    for (i, r) in results.iter().enumerate() {
        if r.value > running {
            running = r.value;
            best_index = i;
        }
        history.push(T::lit(running));
    }
    let best = &results[best_index];
    let certificate = to_coeffs::<T>(&best.best);
    // recompute on the stored certificate so the two agree exactly
    let kappa_lower = ratio(&certificate, params, &cfg.quad)?;
    let seed_ratio = results.iter().map(|r| r.seed_value).fold(f64::NEG_INFINITY, f64::max);
    Ok(PoincareEstimate {
        params: *params,
        kappa_lower,
        certificate,
        seed_ratio: T::lit(seed_ratio),
        starts: results.len(),
        evaluations: results.iter().map(|r| r.evals).sum(),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::RngStream;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn random_real_poly(rng: &mut impl Rng, b: usize) -> FourierCoeffs<f64> {
        let x: Vec<f64> = (0..2 * b).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut f = to_coeffs::<f64>(&x);
        f.set(0, c(rng.gen_range(-3.0..3.0), 0.0));
        f
    }

    #[test]
    fn pure_modes() {
        let quad = QuadratureConfig::default();
        for &s in &[0.25, 0.5, 0.75] {
            let params = SeminormParams::new(s, 2.0).unwrap();
            let kappa = kappa_exact_p2(s).unwrap();
            let one = FourierCoeffs::from_modes(&[(1, c(1.0, 0.0))]).unwrap();
            assert!((ratio(&one, &params, &quad).unwrap() - kappa).abs() < 1e-8);
            let two = FourierCoeffs::from_modes(&[(2, c(1.0, 0.0))]).unwrap();
            assert!((ratio(&two, &params, &quad).unwrap() - kappa * 2f64.powf(-s)).abs() < 1e-8);
        }
    }

    #[test]
    fn exact_constant_agrees_with_quadrature() {
        // the (2π) factors must cancel the same way on the quadrature side
        let params = SeminormParams::new(0.5, 2.0).unwrap();
        let mode = FourierCoeffs::from_modes(&[(-1, c(0.5, 0.0)), (1, c(0.5, 0.0))]).unwrap();
        let quad = QuadratureConfig::new(2048).unwrap().with_kernel(crate::seminorm::KernelForm::Wrapped);
        let via_quadrature = l2_norm_coeffs(&mode) / crate::seminorm::gagliardo_quadrature_coeffs(&mode, &params, &quad);
        assert!((via_quadrature - kappa_exact_p2(0.5).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn ratio_invariances() {
        let quad = QuadratureConfig::new(256).unwrap();
        let mut rng = RngStream::new(4, 0).rng();
        for &p in &[2.0, 3.0] {
            let params = SeminormParams::new(0.4, p).unwrap();
            let f = random_real_poly(&mut rng, 4);
            let base = ratio(&f, &params, &quad).unwrap();
            let scaled = ratio(&f.scale(c(-3.5, 0.0)), &params, &quad).unwrap();
            let mut shifted = f.clone();
            shifted.set(0, c(17.0, 0.0));
            let shifted = ratio(&shifted, &params, &quad).unwrap();
            assert!((scaled - base).abs() < 1e-12 * base);
            assert!((shifted - base).abs() < 1e-12 * base);
        }
        let params = SeminormParams::new(0.4, 2.0).unwrap();
        assert!(ratio(&FourierCoeffs::constant(c(1.0, 0.0)), &params, &quad).is_err());
    }

    #[test]
    fn brute_force_never_beats_exact() {
        let quad = QuadratureConfig::default();
        let mut rng = RngStream::new(99, 0).rng();
        let params = SeminormParams::new(0.5, 2.0).unwrap();
        let kappa = kappa_exact_p2(0.5).unwrap();
        for _ in 0..300 {
            let b = rng.gen_range(1..=8);
            let f = random_real_poly(&mut rng, b);
            assert!(ratio(&f, &params, &quad).unwrap() <= kappa + 1e-9);
        }
    }

    #[test]
    fn search_recovers_exact_p2() {
        let params = SeminormParams::new(0.5, 2.0).unwrap();
        let cfg = SearchConfig { bandwidth: 4, restarts: 4, ..SearchConfig::default() };
        let est = kappa_search(&params, &cfg, None).unwrap();
        let kappa = kappa_exact_p2(0.5).unwrap();
        assert!((est.kappa_lower - kappa).abs() < 1e-2 * kappa);
        let mass_one = est.certificate.get(1).norm_sqr();
        let total: f64 = (1..=4).map(|k| est.certificate.get(k).norm_sqr()).sum();
        assert!(mass_one / total > 0.99);
        assert_eq!(ratio(&est.certificate, &params, &cfg.quad).unwrap(), est.kappa_lower);
        assert!(est.history.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn single_mode_space_is_exact() {
        let params = SeminormParams::new(0.3, 2.0).unwrap();
        let cfg = SearchConfig { bandwidth: 1, restarts: 3, ..SearchConfig::default() };
        let est = kappa_search(&params, &cfg, None).unwrap();
        assert!((est.kappa_lower - kappa_exact_p2(0.3).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn p3_search_never_regresses() {
        let params = SeminormParams::new(0.5, 3.0).unwrap();
        let quad = QuadratureConfig::new(128).unwrap();
        let cfg = SearchConfig { bandwidth: 3, restarts: 2, max_evals: 400, seed: 1, quad };
        let small = kappa_search(&params, &cfg, None).unwrap();
        assert!(small.kappa_lower >= small.seed_ratio);
        let bigger = kappa_search(&params, &SearchConfig { bandwidth: 4, restarts: 3, ..cfg }, Some(&small)).unwrap();
        assert!(bigger.kappa_lower >= small.kappa_lower);
    }

    #[test]
    fn residuals() {
        let params = SeminormParams::new(0.5, 2.0).unwrap();
        let quad = QuadratureConfig::default();
        let kappa = kappa_exact_p2(0.5).unwrap();
        let flat = GridFunction::new(vec![c(2.0, 0.0); 16]).unwrap();
        assert_eq!(poincare_residual(&flat, &params, kappa, &quad).unwrap(), 0.0);
        let mut rng = RngStream::new(5, 0).rng();
        for _ in 0..50 {
            let f = random_real_poly(&mut rng, 6);
            let grid = synthesize(&f, 32).unwrap();
            assert!(poincare_residual(&grid, &params, kappa, &quad).unwrap() >= -1e-9);
        }
    }
}
