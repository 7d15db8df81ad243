//! Functions on the unit circle: uniform angular grids and truncated Fourier
//! series, with FFT-backed conversions between them.
//!
//! Angles follow one convention everywhere: sample `j` of an `N`-point grid
//! sits at `θ_j = −π + 2πj/N`.

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `N` complex samples on the uniform grid `θ_j = −π + 2πj/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction<T> {
    values: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        let n = values.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGridSize(n));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("grid values"));
        }
        Ok(Self { values })
    }

    /// Samples `f` at the grid angles.
    pub fn from_fn(n: usize, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let values = (0..n).map(|j| f(grid_angle(j, n))).collect();
        Self::new(values)
    }

    pub fn from_real(values: Vec<T>) -> Result<Self> {
        Self::new(values.into_iter().map(|v| Complex::new(v, T::zero())).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn angle(&self, j: usize) -> T {
        grid_angle(j, self.len())
    }

    /// Pointwise map; the result is revalidated.
    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

/// `θ_j = −π + 2πj/N`.
pub fn grid_angle<T: Real>(j: usize, n: usize) -> T {
    -T::PI() + T::lit(2.0) * T::PI() * T::from_usize_lossy(j) / T::from_usize_lossy(n)
}

/// Coefficients `c_k`, `k = −K..=K`, of a trigonometric polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs<T> {
    bandwidth: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FourierCoeffs<T> {
    /// `coeffs[k + K]` holds `c_k`.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "Fourier coefficient vector must have odd length 2K+1, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("Fourier coefficients"));
        }
        Ok(Self { bandwidth: coeffs.len() / 2, coeffs })
    }

    pub fn zeros(bandwidth: usize) -> Self {
        Self { bandwidth, coeffs: vec![Complex::new(T::zero(), T::zero()); 2 * bandwidth + 1] }
    }

    /// Builds the smallest coefficient set containing the given `(k, c_k)` modes.
    pub fn from_modes(modes: &[(i64, Complex<T>)]) -> Result<Self> {
        let bandwidth = modes.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut out = Self::zeros(bandwidth);
        for &(k, c) in modes {
            out.set(k, out.get(k) + c);
        }
        Self::new(out.coeffs)
    }

    pub fn constant(c: Complex<T>) -> Self {
        let mut out = Self::zeros(0);
        out.coeffs[0] = c;
        out
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `c_k`, zero outside the stored band.
    pub fn get(&self, k: i64) -> Complex<T> {
        if k.unsigned_abs() as usize > self.bandwidth {
            Complex::new(T::zero(), T::zero())
        } else {
            self.coeffs[(k + self.bandwidth as i64) as usize]
        }
    }

    /// Panics when `|k| > K`.
    pub fn set(&mut self, k: i64, value: Complex<T>) {
        assert!(k.unsigned_abs() as usize <= self.bandwidth, "mode {k} outside bandwidth");
        let idx = (k + self.bandwidth as i64) as usize;
        self.coeffs[idx] = value;
    }

    /// `(k, c_k)` pairs in increasing `k`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        let kk = self.bandwidth as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - kk, c))
    }

    /// True when every negative-frequency coefficient vanishes.
    pub fn is_analytic_type(&self) -> bool {
        self.coeffs[..self.bandwidth].iter().all(|c| c.re == T::zero() && c.im == T::zero())
    }

    /// Applies a diagonal multiplier `c_k ↦ m(k, c_k)`.
    pub fn map_modes(&self, m: impl Fn(i64, Complex<T>) -> Complex<T>) -> Self {
        let kk = self.bandwidth as i64;
        let coeffs = self.coeffs.iter().enumerate().map(|(i, &c)| m(i as i64 - kk, c)).collect();
        Self { bandwidth: self.bandwidth, coeffs }
    }

    /// Same polynomial, stored with bandwidth `k` (truncating when smaller).
    pub fn with_bandwidth(&self, k: usize) -> Self {
        let mut out = Self::zeros(k);
        for kk in -(k.min(self.bandwidth) as i64)..=(k.min(self.bandwidth) as i64) {
            out.set(kk, self.get(kk));
        }
        out
    }

    /// Largest `|k|` whose coefficient exceeds `rel_tol · max|c|`.
    pub fn effective_bandwidth(&self, rel_tol: T) -> usize {
        let peak = self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max);
        if peak == T::zero() {
            return 0;
        }
        self.modes()
            .filter(|(_, c)| c.norm() > rel_tol * peak)
            .map(|(k, _)| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, lambda: Complex<T>) -> Self {
        self.map_modes(|_, c| c * lambda)
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.bandwidth.max(other.bandwidth);
        let mut out = Self::zeros(k);
        for kk in -(k as i64)..=(k as i64) {
            out.set(kk, self.get(kk) + other.get(kk));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    /// Evaluates `Σ c_k e^{ikθ}` at one angle.
    pub fn eval(&self, theta: T) -> Complex<T> {
        let step = Complex::from_polar(T::one(), theta);
        let mut acc = Complex::new(T::zero(), T::zero());
        // Horner in e^{iθ}, starting from the highest mode, then undo the e^{iKθ} shift.
        for c in self.coeffs.iter().rev() {
            acc = acc * step + c;
        }
        acc * Complex::from_polar(T::one(), -T::from_usize_lossy(self.bandwidth) * theta)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let k = self.bandwidth.max(other.bandwidth) as i64;
        (-k..=k).map(|kk| (self.get(kk) - other.get(kk)).norm()).fold(T::zero(), T::max)
    }
}

/// Evaluates the trigonometric polynomial on the `N`-point grid.
pub fn synthesize<T: Real>(coeffs: &FourierCoeffs<T>, n: usize) -> Result<GridFunction<T>> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidGridSize(n));
    }
    if n < 2 * coeffs.bandwidth() + 2 {
        return Err(Error::Aliasing { bandwidth: coeffs.bandwidth(), n });
    }
    GridFunction::new(sample_shifted(coeffs, n, T::zero()))
}

/// Discrete Fourier analysis `c_k = (1/N) Σ_j v_j e^{−ikθ_j}`, `|k| ≤ K`.
pub fn analyze<T: Real>(grid: &GridFunction<T>, bandwidth: usize) -> Result<FourierCoeffs<T>> {
    let n = grid.len();
    if 2 * bandwidth + 1 > n {
        return Err(Error::Aliasing { bandwidth, n });
    }
    let spectrum = forward_dft(grid);
    let mut out = FourierCoeffs::zeros(bandwidth);
    for k in -(bandwidth as i64)..=(bandwidth as i64) {
        out.set(k, spectrum[k.rem_euclid(n as i64) as usize] * alternating::<T>(k));
    }
    Ok(out)
}

/// `(1/N) Σ_j v_j`.
pub fn circle_mean<T: Real>(grid: &GridFunction<T>) -> Complex<T> {
    let re: Vec<T> = grid.values().iter().map(|v| v.re).collect();
    let im: Vec<T> = grid.values().iter().map(|v| v.im).collect();
    let n = T::from_usize_lossy(grid.len());
    Complex::new(crate::special::pairwise_sum(&re) / n, crate::special::pairwise_sum(&im) / n)
}

/// Trigonometric interpolant of a grid: bandwidth `N/2`, with the Nyquist
/// coefficient split evenly between `±N/2`.
pub fn grid_spectrum<T: Real>(grid: &GridFunction<T>) -> FourierCoeffs<T> {
    let n = grid.len();
    let half = n / 2;
    let spectrum = forward_dft(grid);
    let mut out = FourierCoeffs::zeros(half);
    for k in -(half as i64 - 1)..=(half as i64 - 1) {
        out.set(k, spectrum[k.rem_euclid(n as i64) as usize] * alternating::<T>(k));
    }
    let nyquist = spectrum[half] * alternating::<T>(half as i64) * T::lit(0.5);
    out.set(half as i64, nyquist);
    out.set(-(half as i64), nyquist);
    out
}

/// Values of the polynomial at `θ = −π + (j + shift)·2π/M`, `j = 0..M`.
///
/// Modes are folded modulo `M`; callers guarantee `M` resolves the band
/// (exact folding at `±M/2` reproduces the interpolant).
pub(crate) fn sample_shifted<T: Real>(coeffs: &FourierCoeffs<T>, m: usize, shift: T) -> Vec<Complex<T>> {
    let h = T::lit(2.0) * T::PI() / T::from_usize_lossy(m);
    let mut bins = vec![Complex::new(T::zero(), T::zero()); m];
    for (k, c) in coeffs.modes() {
        if c.re == T::zero() && c.im == T::zero() {
            continue;
        }
        let kf = T::from_i64(k).expect("mode index fits");
        let phase = Complex::from_polar(T::one(), kf * shift * h) * alternating::<T>(k);
        bins[k.rem_euclid(m as i64) as usize] = bins[k.rem_euclid(m as i64) as usize] + c * phase;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(m).process(&mut bins);
    bins
}

fn forward_dft<T: Real>(grid: &GridFunction<T>) -> Vec<Complex<T>> {
    let n = grid.len();
    let mut buf = grid.values().to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let scale = T::one() / T::from_usize_lossy(n);
    buf.iter_mut().for_each(|v| *v = *v * scale);
    buf
}

// e^{−ikπ} = (−1)^k: the grid starts at −π.
fn alternating<T: Real>(k: i64) -> T {
    if k.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}
