//! Monte Carlo view of the Poisson extension: exact sampling of Brownian
//! exit positions from the disc, value-function estimates, and seminorm
//! profiles of estimated slices with propagated noise bounds.
//!
//! Exit positions are drawn without path simulation. For `W` uniform on the
//! circle, `(W + z)/(1 + z̄W)` has the harmonic-measure law of `z`.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::circle::{grid_angle, grid_spectrum, FourierCoeffs, GridFunction};
use crate::error::{Error, Result};
use crate::poisson::{poisson_extend, poisson_measure, Radius};
use crate::scalar::Real;
use crate::seminorm::{eta_constant, gagliardo_seminorm, KernelForm, QuadratureConfig, SeminormParams};
use crate::special::pairwise_sum;

/// Multiplier turning per-point standard errors into a worst-case bound.
pub const NOISE_Z: f64 = 3.0;

/// A reproducible random stream: ChaCha8 keyed by the master seed, with the
/// stream index selecting one of its `2^64` independent streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl RngStream {
    pub fn new(master_seed: u64, stream: u64) -> Self {
        Self { master_seed, stream }
    }

    /// Stream for sub-task `index`, derived by mixing the index into this
    /// stream's id.
    pub fn child(&self, index: u64) -> Self {
        Self { master_seed: self.master_seed, stream: splitmix64(self.stream ^ splitmix64(index)) }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn check_point<T: Real>(z: Complex<T>) -> Result<()> {
    let r = z.norm();
    if !(r < T::one()) {
        return Err(Error::OutsideDisc(r.as_f64()));
    }
    Ok(())
}

/// One exit angle in `(−π, π]` of Brownian motion started at `z`.
pub fn exit_angle_sample<T: Real, R: Rng + ?Sized>(z: Complex<T>, rng: &mut R) -> Result<T> {
    check_point(z)?;
    Ok(transport(z, T::lit(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))))
}

fn transport<T: Real>(z: Complex<T>, u: T) -> T {
    let w = Complex::from_polar(T::one(), u);
    let one = Complex::new(T::one(), T::zero());
    ((w + z) / (one + z.conj() * w)).arg()
}

/// `n` exit angles from one stream.
pub fn exit_angles<T: Real>(z: Complex<T>, n: usize, stream: &RngStream) -> Result<Vec<T>> {
    check_point(z)?;
    let mut rng = stream.rng();
    (0..n).map(|_| exit_angle_sample(z, &mut rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate<T> {
    pub mean: Complex<T>,
    /// Sample standard deviation over `sqrt(n)`.
    pub stderr: T,
    pub n: usize,
}

/// `E^z[φ(B_τ)]` from `n` exact exit samples.
pub fn value_mc<T: Real>(phi: &FourierCoeffs<T>, z: Complex<T>, n: usize, stream: &RngStream) -> Result<McEstimate<T>> {
    if n < 100 {
        return Err(Error::InvalidParameter(format!("value_mc needs at least 100 samples, got {n}")));
    }
    let samples: Vec<Complex<T>> = exit_angles(z, n, stream)?.into_iter().map(|t| phi.eval(t)).collect();
    let nf = T::from_usize_lossy(n);
    let re: Vec<T> = samples.iter().map(|v| v.re).collect();
    let im: Vec<T> = samples.iter().map(|v| v.im).collect();
    let mean = Complex::new(pairwise_sum(&re) / nf, pairwise_sum(&im) / nf);
    let dev: Vec<T> = samples.iter().map(|v| (v - mean).norm_sqr()).collect();
    let var = pairwise_sum(&dev) / (nf - T::one());
    Ok(McEstimate { mean, stderr: (var / nf).sqrt(), n })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McProfileEntry<T> {
    pub r: T,
    /// Seminorm of the estimated slice.
    pub value: T,
    /// Bound on the seminorm of the sampling error.
    pub noise_bound: T,
    /// Seminorm of the exact slice `𝒫_r φ`, by the same engine.
    pub exact: T,
    pub consistent: bool,
    /// The noise bound exceeds the estimated signal.
    pub inconclusive: bool,
    pub max_stderr: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McProfile<T> {
    pub params: SeminormParams<T>,
    pub grid_size: usize,
    pub samples_per_point: usize,
    pub stream: RngStream,
    pub entries: Vec<McProfileEntry<T>>,
    /// Worst-case formula used for `noise_bound`.
    pub noise_model: &'static str,
}

/// Seminorm profile of `V_r` estimated on an `N`-point circle of each radius.
pub fn criterion_profile_mc<T: Real>(
    phi: &FourierCoeffs<T>,
    params: &SeminormParams<T>,
    schedule: &[T],
    grid_size: usize,
    samples_per_point: usize,
    stream: &RngStream,
    quad: &QuadratureConfig,
) -> Result<McProfile<T>> {
    if grid_size < 2 * phi.bandwidth() + 2 || !grid_size.is_power_of_two() {
        return Err(Error::Aliasing { bandwidth: phi.bandwidth(), n: grid_size });
    }
    let entries = schedule
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let radius = Radius::new(r)?;
            let row = stream.child(i as u64);
            let estimates = (0..grid_size)
                .into_par_iter()
                .map(|j| {
                    let z = Complex::from_polar(r, grid_angle::<T>(j, grid_size));
                    value_mc(phi, z, samples_per_point, &row.child(j as u64))
                })
                .collect::<Result<Vec<_>>>()?;
            let grid = GridFunction::new(estimates.iter().map(|e| e.mean).collect())?;
            let sigmas: Vec<T> = estimates.iter().map(|e| e.stderr).collect();
            let value = gagliardo_seminorm(&grid_spectrum(&grid), params, quad)?;
            let exact = gagliardo_seminorm(&poisson_extend(phi, radius), params, quad)?;
            let noise_bound = T::lit(noise_bound(&sigmas, params, quad.kernel)?);
            let max_stderr = sigmas.iter().copied().fold(T::zero(), T::max);
            Ok(McProfileEntry {
                r,
                value,
                noise_bound,
                exact,
                consistent: (value - exact).abs() <= noise_bound,
                inconclusive: noise_bound > value,
                max_stderr,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let noise_model = if params.is_p2() {
        "3 * sqrt(eta_s (N/2)^(2s) mean(stderr_j^2))"
    } else {
        "(2 pi int min(2B, (N/2) B |t|)^p K(t) dt)^(1/p), B = (1 + (2/pi)(ln N + 1)) * 3 * max stderr_j"
    };
    Ok(McProfile {
        params: *params,
        grid_size,
        samples_per_point,
        stream: *stream,
        entries,
        noise_model,
    })
}

/// Seminorm of an error grid whose points have standard errors `sigmas`.
///
/// For `p = 2` this bounds the expected spectral energy of the interpolant,
/// `η_s Σ|k|^{2s}|ê_k|² ≤ η_s (N/2)^{2s} mean(σ_j²)`. Otherwise the
/// interpolant is bounded by the Lebesgue constant times the largest
/// error, its Lipschitz constant by Bernstein's inequality, and the double
/// integral is taken over `min(2B, L|t|)`.
pub fn noise_bound<T: Real>(sigmas: &[T], params: &SeminormParams<T>, kernel: KernelForm) -> Result<f64> {
    let n = sigmas.len() as f64;
    let s = params.s().as_f64();
    if params.is_p2() && kernel == KernelForm::Wrapped {
        let mean_sq = sigmas.iter().map(|v| v.as_f64().powi(2)).sum::<f64>() / n;
        return Ok(NOISE_Z * (eta_constant(s)?.eta * (n / 2.0).powf(2.0 * s) * mean_sq).sqrt());
    }
    let p = params.p().as_f64();
    let lebesgue = 1.0 + 2.0 / std::f64::consts::PI * (n.ln() + 1.0);
    let b = lebesgue * NOISE_Z * sigmas.iter().map(|v| v.as_f64()).fold(0.0, f64::max);
    let lip = n / 2.0 * b;
    let a = 1.0 + s * p;
    let m = 20_000;
    let h = std::f64::consts::PI / m as f64;
    let terms: Vec<f64> = (0..m)
        .map(|i| {
            let t = (i as f64 + 0.5) * h;
            (2.0 * b).min(lip * t).powf(p) * kernel.value(t, a)
        })
        .collect();
    // the integrand is even in t
    Ok((2.0 * std::f64::consts::PI * 2.0 * pairwise_sum(&terms) * h).powf(1.0 / p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareReport {
    pub z: (f64, f64),
    pub n: usize,
    pub bins: usize,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Largest `|observed − expected| / binomial stderr` over the bins.
    pub max_bin_z: f64,
}

/// Histogram of `n` exit angles against the Poisson measure of each bin.
pub fn exit_law_chi_square(z: Complex<f64>, n: usize, bins: usize, stream: &RngStream) -> Result<ChiSquareReport> {
    if bins < 2 {
        return Err(Error::InvalidParameter("chi-square needs at least two bins".into()));
    }
    let angles = exit_angles(z, n, stream)?;
    let width = 2.0 * std::f64::consts::PI / bins as f64;
    let mut counts = vec![0usize; bins];
    for t in angles {
        let b = (((t + std::f64::consts::PI) / width).floor() as usize).min(bins - 1);
        counts[b] += 1;
    }
    let radius = Radius::new(z.norm())?;
    let shift = z.arg();
    let mut statistic = 0.0;
    let mut max_bin_z: f64 = 0.0;
    for (b, &count) in counts.iter().enumerate() {
        let lo = -std::f64::consts::PI + b as f64 * width;
        let prob = poisson_measure(radius, shift, lo, lo + width);
        let expected = n as f64 * prob;
        let diff = count as f64 - expected;
        statistic += diff * diff / expected;
        max_bin_z = max_bin_z.max(diff.abs() / (n as f64 * prob * (1.0 - prob)).sqrt());
    }
    let dof = bins - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(ChiSquareReport { z: (z.re, z.im), n, bins, statistic, dof, p_value: dist.sf(statistic), max_bin_z })
}
