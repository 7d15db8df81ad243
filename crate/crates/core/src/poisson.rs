//! Poisson kernel, the Poisson mean as the Fourier multiplier `r^{|k|}`, and
//! checks of the contraction, semigroup and strong-continuity properties.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::circle::{synthesize, FourierCoeffs};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::seminorm::{gagliardo_seminorm, l2_norm_coeffs, lp_norm, Measure, QuadratureConfig, SeminormParams};
use crate::special::next_pow2;

/// Radii are capped here wherever the kernel itself is evaluated.
pub const MAX_KERNEL_RADIUS: f64 = 1.0 - 1e-9;

/// A radius in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Radius<T>(T);

impl<T: Real> Radius<T> {
    pub fn new(r: T) -> Result<Self> {
        if r >= T::zero() && r < T::one() {
            Ok(Self(r))
        } else {
            Err(Error::InvalidRadius(r.as_f64()))
        }
    }

    pub fn get(self) -> T {
        self.0
    }

    /// Same radius, capped at [`MAX_KERNEL_RADIUS`].
    pub fn guarded(self) -> Self {
        Self(self.0.min(T::lit(MAX_KERNEL_RADIUS)))
    }
}

/// `r_j = 1 − 2^{−j}`, `j = 1..=j_max`.
pub fn dyadic_schedule<T: Real>(j_max: usize) -> Vec<T> {
    (1..=j_max).map(|j| T::one() - T::lit(2f64.powi(-(j as i32)))).collect()
}

pub const DEFAULT_SCHEDULE_LEN: usize = 12;

/// `P_r(θ) = (1 − r²) / (1 − 2r cos θ + r²)`.
pub fn poisson_kernel<T: Real>(r: Radius<T>, theta: T) -> T {
    let r = r.guarded().get();
    (T::one() - r * r) / (T::one() - T::lit(2.0) * r * theta.cos() + r * r)
}

/// `𝒫_r u`: `c_k ↦ r^{|k|} c_k`.
pub fn poisson_extend<T: Real>(coeffs: &FourierCoeffs<T>, r: Radius<T>) -> FourierCoeffs<T> {
    let r = r.get();
    coeffs.map_modes(|k, c| if k == 0 { c } else { c * r.powi(k.unsigned_abs() as i32) })
}

/// Largest coefficient gap between `𝒫_{r2}𝒫_{r1} f` and `𝒫_{r1 r2} f`.
pub fn semigroup_residual<T: Real>(coeffs: &FourierCoeffs<T>, r1: Radius<T>, r2: Radius<T>) -> Result<T> {
    let twice = poisson_extend(&poisson_extend(coeffs, r1), r2);
    let once = poisson_extend(coeffs, Radius::new(r1.get() * r2.get())?);
    Ok(twice.max_abs_diff(&once))
}

/// `[f] − [𝒫_r f]`; nonnegative up to roundoff.
pub fn contraction_gap<T: Real>(
    coeffs: &FourierCoeffs<T>,
    r: Radius<T>,
    params: &SeminormParams<T>,
    quad: &QuadratureConfig,
) -> Result<T> {
    let before = gagliardo_seminorm(coeffs, params, quad)?;
    let after = gagliardo_seminorm(&poisson_extend(coeffs, r), params, quad)?;
    Ok(before - after)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityEntry<T> {
    pub r: T,
    /// `‖𝒫_r f − f‖_{W^{s,p}}`.
    pub distance: T,
}

/// `‖𝒫_r f − f‖_{W^{s,p}}` along the schedule.
pub fn continuity_profile<T: Real>(
    coeffs: &FourierCoeffs<T>,
    params: &SeminormParams<T>,
    schedule: &[T],
    quad: &QuadratureConfig,
) -> Result<Vec<ContinuityEntry<T>>> {
    schedule
        .iter()
        .map(|&r| {
            let diff = poisson_extend(coeffs, Radius::new(r)?).sub(coeffs);
            let lp = if params.is_p2() {
                l2_norm_coeffs(&diff)
            } else {
                let n = (4 * next_pow2(2 * diff.bandwidth() + 2)).max(64);
                lp_norm(&synthesize(&diff, n)?, params.p(), Measure::Unnormalized)
            };
            Ok(ContinuityEntry { r, distance: lp + gagliardo_seminorm(&diff, params, quad)? })
        })
        .collect()
}

/// Mass of `P_r(· − shift)` on `(a, b)` under `dθ/2π`, from the closed-form
/// antiderivative `½ + (1/π) arctan(((1+r)/(1−r)) tan(θ/2))`.
pub fn poisson_measure<T: Real>(r: Radius<T>, shift: T, a: T, b: T) -> T {
    let r = r.guarded().get();
    let two_pi = T::lit(2.0) * T::PI();
    let ratio = (T::one() + r) / (T::one() - r);
    let cumulative = |x: T| {
        // cumulative mass from −π, extended so that it gains 1 per period
        let y = x - shift + T::PI();
        let turns = (y / two_pi).floor();
        let local = y - turns * two_pi - T::PI();
        let within = T::lit(0.5) + (ratio * (local / T::lit(2.0)).tan()).atan() / T::PI();
        turns + within
    };
    cumulative(b) - cumulative(a)
}

/// Grid convolution of `f` with sampled `P_r`; a reference for the multiplier.
pub fn poisson_convolve_grid<T: Real>(
    values: &[Complex<T>],
    r: Radius<T>,
) -> Vec<Complex<T>> {
    let n = values.len();
    let h = T::lit(2.0) * T::PI() / T::from_usize_lossy(n);
    let kernel: Vec<T> = (0..n).map(|m| poisson_kernel(r, T::from_usize_lossy(m) * h)).collect();
    (0..n)
        .map(|j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (m, &w) in kernel.iter().enumerate() {
                acc = acc + values[(j + n - m) % n] * w;
            }
            acc / T::from_usize_lossy(n)
        })
        .collect()
}
