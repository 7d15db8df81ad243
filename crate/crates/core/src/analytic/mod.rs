//! Analytic functions on the disc through their Taylor coefficients: radial
//! slices, boundary trace, Hardy means, seminorm profiles and the membership
//! criterion built on them.

mod growth;
mod profile;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::circle::{synthesize, FourierCoeffs};
use crate::error::{Error, Result};
use crate::poisson::{dyadic_schedule, Radius, DEFAULT_SCHEDULE_LEN};
use crate::scalar::Real;
use crate::seminorm::{lp_norm, Measure};
use crate::special::{hurwitz_zeta, next_pow2, pairwise_sum};

pub use growth::{classify, Classification, GrowthDiagnostics, MembershipVerdict, DIVERGENT_RATIO, FINITE_RATIO};
pub use profile::{
    disc_norm, membership_scan, norm_equivalence_check, seminorm_profile, sup_seminorm, trace_convergence,
    MembershipScan, NormEquivalence, ProfileEntry, ProfileMethod, ProfileOptions, SeminormProfile,
};

/// What is known about `a_k` for `k > K_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailPolicy {
    /// `a_k = 0` beyond the stored coefficients.
    Exact,
    /// `a_k = c·k^{−q}` exactly beyond the stored coefficients.
    PowerLaw { c: f64, q: f64 },
    /// Only `|a_k| ≤ c·k^{−q}` is known; used to bound truncation error.
    Bound { c: f64, q: f64 },
}

impl TailPolicy {
    /// `(c, q)` of the dominating power law, if any.
    pub fn power(&self) -> Option<(f64, f64)> {
        match *self {
            TailPolicy::Exact => None,
            TailPolicy::PowerLaw { c, q } | TailPolicy::Bound { c, q } => Some((c, q)),
        }
    }
}

/// `u(z) = Σ_{k≥0} a_k z^k` with `a_0..=a_{K_max}` stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorFunction<T> {
    coeffs: Vec<Complex<T>>,
    tail: TailPolicy,
}

impl<T: Real> TaylorFunction<T> {
    pub fn new(coeffs: Vec<Complex<T>>, tail: TailPolicy) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("a Taylor function needs at least a_0".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("Taylor coefficients"));
        }
        if let Some((c, q)) = tail.power() {
            if !(c >= 0.0 && c.is_finite() && q > 0.0 && q.is_finite()) {
                return Err(Error::InvalidParameter(format!("tail law c = {c}, q = {q} needs c >= 0, q > 0")));
            }
        }
        Ok(Self { coeffs, tail })
    }

    /// A polynomial: exact, nothing beyond the stored coefficients.
    pub fn polynomial(coeffs: Vec<Complex<T>>) -> Result<Self> {
        Self::new(coeffs, TailPolicy::Exact)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn tail(&self) -> TailPolicy {
        self.tail
    }

    pub fn k_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn a0(&self) -> Complex<T> {
        self.coeffs[0]
    }

    /// `a_k`, when it is known.
    pub fn coefficient(&self, k: usize) -> Option<Complex<T>> {
        if let Some(&c) = self.coeffs.get(k) {
            return Some(c);
        }
        match self.tail {
            TailPolicy::Exact => Some(Complex::new(T::zero(), T::zero())),
            TailPolicy::PowerLaw { c, q } => Some(Complex::new(T::lit(c * (k as f64).powf(-q)), T::zero())),
            TailPolicy::Bound { .. } => None,
        }
    }

    fn modulus_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm().as_f64()).collect()
    }
}

/// `Σ_{k≥from} k^{−e} ρ^k` for `0 ≤ ρ ≤ 1`, `from ≥ 1`; `None` when it diverges.
pub(crate) fn power_geometric_tail(e: f64, rho: f64, from: usize) -> Option<f64> {
    let from = from.max(1);
    if rho >= 1.0 {
        return (e > 1.0).then(|| hurwitz_zeta(e, from as f64));
    }
    if rho <= 0.0 {
        return Some(0.0);
    }
    let log_rho = rho.ln();
    let mut terms = Vec::new();
    let mut acc = 0.0;
    let mut k = from;
    loop {
        let kf = k as f64;
        let term = (-e * kf.ln() + kf * log_rho).exp();
        terms.push(term);
        acc += term;
        // once consecutive terms shrink by a fixed ratio, the rest is a geometric tail
        let ratio = rho * (kf / (kf + 1.0)).powf(e);
        if ratio < 1.0 && term * ratio / (1.0 - ratio) <= 1e-18 * acc {
            break;
        }
        if acc == 0.0 && kf * -log_rho > 800.0 {
            break;
        }
        k += 1;
    }
    Some(pairwise_sum(&terms))
}

/// `Σ_{k>K} |a_k| r^k`: exact for exact tails, an upper bound otherwise.
pub fn slice_tail_bound<T: Real>(u: &TaylorFunction<T>, r: f64, bandwidth: usize) -> f64 {
    let stored: Vec<f64> = u
        .modulus_f64()
        .iter()
        .enumerate()
        .skip(bandwidth + 1)
        .map(|(k, a)| a * r.powi(k as i32))
        .collect();
    let beyond = match u.tail.power() {
        None => 0.0,
        Some((c, q)) => c * power_geometric_tail(q, r, bandwidth.max(u.k_max()) + 1).unwrap_or(f64::INFINITY),
    };
    pairwise_sum(&stored) + beyond
}

/// Smallest bandwidth whose dropped tail at radius `r` is at most `tol`.
///
/// Fails with [`Error::Coverage`] when that bandwidth lies beyond the stored
/// coefficients and the tail is only bounded.
pub fn slice_bandwidth<T: Real>(u: &TaylorFunction<T>, r: Radius<T>, tol: f64) -> Result<usize> {
    let r = r.get().as_f64();
    let moduli = u.modulus_f64();
    let k_max = u.k_max();
    let beyond = |k: usize| -> f64 {
        match u.tail.power() {
            None => 0.0,
            Some((c, q)) => c * ((k + 1) as f64).powf(-q) * r.powi((k + 1) as i32) / (1.0 - r),
        }
    };
    if beyond(k_max) <= tol {
        // suffix sums over the stored block, walked down from the top
        let mut suffix = beyond(k_max);
        let mut k = k_max;
        while k > 0 {
            let next = suffix + moduli[k] * r.powi(k as i32);
            if next > tol {
                break;
            }
            suffix = next;
            k -= 1;
        }
        return Ok(k);
    }
    let mut k = k_max.max(1);
    while beyond(k) > tol {
        k = k.checked_mul(2).ok_or_else(|| Error::Resolution("slice bandwidth overflow".into()))?;
    }
    // bisect back down to the smallest admissible bandwidth
    let (mut lo, mut hi) = (k / 2, k);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if beyond(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    match u.tail {
        TailPolicy::Bound { .. } => Err(Error::Coverage { requested: hi, available: k_max }),
        _ => Ok(hi),
    }
}

/// `u_r`: Fourier coefficients `c_k = a_k r^k`, `0 ≤ k ≤ K`.
pub fn radial_slice<T: Real>(u: &TaylorFunction<T>, r: Radius<T>, bandwidth: usize) -> Result<FourierCoeffs<T>> {
    let r = r.get();
    let mut out = FourierCoeffs::zeros(bandwidth);
    let mut power = T::one();
    for k in 0..=bandwidth {
        let a = u.coefficient(k).ok_or(Error::Coverage { requested: bandwidth, available: u.k_max() })?;
        out.set(k as i64, a * power);
        power = power * r;
    }
    Ok(out)
}

/// Boundary trace `u*`: `c_k = a_k`, `0 ≤ k ≤ K`.
///
/// Requires `Σ|a_k|² < ∞`, which is decided from the tail law.
pub fn trace<T: Real>(u: &TaylorFunction<T>, bandwidth: usize) -> Result<FourierCoeffs<T>> {
    if let Some((c, q)) = u.tail.power() {
        if c > 0.0 && 2.0 * q <= 1.0 {
            return Err(Error::Divergent(format!("Hardy means grow: |a_k| ~ k^-{q} is not square summable")));
        }
    }
    let mut out = FourierCoeffs::zeros(bandwidth);
    for k in 0..=bandwidth {
        let a = u.coefficient(k).ok_or(Error::Coverage { requested: bandwidth, available: u.k_max() })?;
        out.set(k as i64, a);
    }
    Ok(out)
}

/// `Σ_k w_k |a_k|² ρ^k` over all `k ≥ 1`, with `w_k = k^{2s}`.
///
/// Returns `(value, uncertainty)`: exact tails are summed, bounded tails are
/// reported as uncertainty. `None` when the tail sum diverges.
pub(crate) fn weighted_energy<T: Real>(u: &TaylorFunction<T>, two_s: f64, rho: f64) -> Option<(f64, f64)> {
    let terms: Vec<f64> = u
        .modulus_f64()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| (k as f64).powf(two_s) * a * a * rho.powi(k as i32))
        .collect();
    let head = pairwise_sum(&terms);
    match u.tail {
        TailPolicy::Exact => Some((head, 0.0)),
        TailPolicy::PowerLaw { c, q } => {
            Some((head + c * c * power_geometric_tail(2.0 * q - two_s, rho, u.k_max() + 1)?, 0.0))
        }
        TailPolicy::Bound { c, q } => {
            Some((head, c * c * power_geometric_tail(2.0 * q - two_s, rho, u.k_max() + 1).unwrap_or(f64::INFINITY)))
        }
    }
}

/// Normalized L^p means `((1/2π)∫|u(re^{iθ})|^p dθ)^{1/p}` along a schedule.
pub fn hardy_means<T: Real>(u: &TaylorFunction<T>, p: T, schedule: &[T], tol: f64) -> Result<Vec<ProfileEntry<T>>> {
    let pf = p.as_f64();
    schedule
        .iter()
        .map(|&r| {
            let radius = Radius::new(r)?;
            if pf == 2.0 {
                let (energy, unc) =
                    weighted_energy(u, 0.0, (r * r).as_f64()).ok_or_else(|| Error::Inconsistent("tail sum".into()))?;
                let total = energy + u.a0().norm_sqr().as_f64();
                let value = total.sqrt();
                let resolved = (total + unc).sqrt() - value <= tol;
                return Ok(ProfileEntry::new(r, resolved.then(|| T::lit(value)), 0, 0, unc));
            }
            let k = match slice_bandwidth(u, radius, tol) {
                Ok(k) => k,
                Err(Error::Coverage { .. }) => return Ok(ProfileEntry::new(r, None, 0, 0, f64::INFINITY)),
                Err(e) => return Err(e),
            };
            let n = (4 * next_pow2(2 * k + 2)).max(64);
            let slice = radial_slice(u, radius, k)?;
            let mean = lp_norm(&synthesize(&slice, n)?, p, Measure::Normalized);
            Ok(ProfileEntry::new(r, Some(mean), k, n, slice_tail_bound(u, r.as_f64(), k)))
        })
        .collect()
}

/// `‖u‖_{H^p} = sup_r` of the normalized L^p means.
///
/// Means must be non-decreasing in `r`; a violation is a resolution error.
pub fn hardy_norm<T: Real>(u: &TaylorFunction<T>, p: T, tol: f64) -> Result<T> {
    if !(p >= T::one()) {
        return Err(Error::InvalidParameter(format!("Hardy exponent p = {p} must be >= 1")));
    }
    let pf = p.as_f64();
    if pf == 2.0 && !matches!(u.tail, TailPolicy::Bound { .. }) {
        // closed form at r = 1 by Parseval
        return match weighted_energy(u, 0.0, 1.0) {
            Some((energy, _)) => Ok(T::lit((energy + u.a0().norm_sqr().as_f64()).sqrt())),
            None => Err(Error::Divergent("Hardy means grow without bound".into())),
        };
    }
    let schedule = dyadic_schedule::<T>(DEFAULT_SCHEDULE_LEN);
    let means = hardy_means(u, p, &schedule, tol)?;
    let resolved: Vec<(f64, f64)> =
        means.iter().filter_map(|e| e.value.map(|v| (e.r.as_f64(), v.as_f64()))).collect();
    for w in resolved.windows(2) {
        if w[1].1 < w[0].1 * (1.0 - 1e-9) - 1e-12 {
            return Err(Error::Resolution(format!("Hardy means decrease between r = {} and r = {}", w[0].0, w[1].0)));
        }
    }
    let (radii, values): (Vec<f64>, Vec<f64>) = resolved.into_iter().unzip();
    let verdict = classify(&radii, &values, pf, tol);
    match verdict.classification {
        Classification::Finite => Ok(T::lit(verdict.sup_estimate.expect("finite verdict has an estimate"))),
        Classification::Divergent => Err(Error::Divergent("Hardy means grow without bound".into())),
        Classification::Inconclusive => Err(Error::Resolution("Hardy means neither settle nor grow".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::poisson_extend;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn monomial(n: usize) -> TaylorFunction<f64> {
        let mut a = vec![c(0.0); n + 1];
        a[n] = c(1.0);
        TaylorFunction::polynomial(a).unwrap()
    }

    fn harmonic(k_max: usize) -> TaylorFunction<f64> {
        let mut a = vec![c(0.0)];
        a.extend((1..=k_max).map(|k| c(1.0 / k as f64)));
        TaylorFunction::new(a, TailPolicy::PowerLaw { c: 1.0, q: 1.0 }).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(TaylorFunction::<f64>::polynomial(vec![]).is_err());
        assert!(TaylorFunction::polynomial(vec![c(f64::NAN)]).is_err());
        assert!(TaylorFunction::new(vec![c(1.0)], TailPolicy::Bound { c: 1.0, q: -1.0 }).is_err());
    }

    #[test]
    fn monomial_slice() {
        let u = monomial(3);
        let slice = radial_slice(&u, Radius::new(0.5).unwrap(), 3).unwrap();
        assert_eq!(slice.get(3), c(0.125));
        assert!(slice.is_analytic_type());
        assert_eq!(slice.modes().filter(|(_, v)| v.norm() > 0.0).count(), 1);
    }

    #[test]
    fn zero_radius_keeps_a0() {
        let u = TaylorFunction::polynomial(vec![c(2.0), c(1.0), c(3.0)]).unwrap();
        let slice = radial_slice(&u, Radius::new(0.0).unwrap(), 2).unwrap();
        assert_eq!(slice.get(0), c(2.0));
        assert_eq!(slice.get(1), c(0.0));
        assert_eq!(slice.get(2), c(0.0));
    }

    #[test]
    fn geometric_slice() {
        let u = TaylorFunction::polynomial(vec![c(1.0); 40]).unwrap();
        let slice = radial_slice(&u, Radius::new(0.5).unwrap(), 39).unwrap();
        for k in 0..40 {
            assert!((slice.get(k).re - 0.5f64.powi(k as i32)).abs() < 1e-16);
        }
    }

    #[test]
    fn coverage_rules() {
        let bounded = TaylorFunction::new(vec![c(1.0); 8], TailPolicy::Bound { c: 1.0, q: 2.0 }).unwrap();
        assert!(matches!(
            radial_slice(&bounded, Radius::new(0.5).unwrap(), 20),
            Err(Error::Coverage { requested: 20, available: 7 })
        ));
        let exact = TaylorFunction::polynomial(vec![c(1.0); 8]).unwrap();
        assert_eq!(radial_slice(&exact, Radius::new(0.5).unwrap(), 20).unwrap().get(15), c(0.0));
        let h = harmonic(8);
        let slice = radial_slice(&h, Radius::new(0.5).unwrap(), 20).unwrap();
        assert!((slice.get(20).re - 0.5f64.powi(20) / 20.0).abs() < 1e-18);
    }

    #[test]
    fn slice_of_product_radius_is_poisson_extension() {
        let h = harmonic(64);
        let (r1, r2) = (Radius::new(0.6).unwrap(), Radius::new(0.7).unwrap());
        let direct = radial_slice(&h, Radius::new(0.6 * 0.7).unwrap(), 64).unwrap();
        let composed = poisson_extend(&radial_slice(&h, r2, 64).unwrap(), r1);
        assert!(direct.max_abs_diff(&composed) < 1e-16);
    }

    #[test]
    fn bandwidth_meets_tolerance() {
        let h = harmonic(4096);
        for &r in &[0.5, 0.9, 0.99, 0.999] {
            let radius = Radius::new(r).unwrap();
            let k = slice_bandwidth(&h, radius, 1e-10).unwrap();
            assert!(slice_tail_bound(&h, r, k) <= 1e-10 * (1.0 + 1e-9), "r={r}");
            assert!(slice_tail_bound(&h, r, k / 2) > 1e-10, "r={r} K={k} far from minimal");
        }
        // beyond the stored block the power law continues
        let k = slice_bandwidth(&harmonic(16), Radius::new(0.999).unwrap(), 1e-10).unwrap();
        assert!(k > 16);
        assert_eq!(slice_bandwidth(&monomial(5), Radius::new(0.999).unwrap(), 1e-10).unwrap(), 5);
    }

    #[test]
    fn power_geometric_tail_against_direct_sums() {
        let direct: f64 = (10..200_000).map(|k| (k as f64).powf(-1.3) * 0.999f64.powi(k)).sum();
        assert!((power_geometric_tail(1.3, 0.999, 10).unwrap() - direct).abs() < 1e-12 * direct);
        let grow: f64 = (3..100_000).map(|k| (k as f64).powf(0.5) * 0.99f64.powi(k)).sum();
        assert!((power_geometric_tail(-0.5, 0.99, 3).unwrap() - grow).abs() < 1e-11 * grow);
        assert!(power_geometric_tail(1.0, 1.0, 1).is_none());
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((power_geometric_tail(2.0, 1.0, 1).unwrap() - zeta2).abs() < 1e-13);
    }

    #[test]
    fn trace_examples() {
        let t = trace(&monomial(4), 4).unwrap();
        assert_eq!(t.get(4), c(1.0));
        let constant = TaylorFunction::polynomial(vec![c(2.5)]).unwrap();
        assert_eq!(trace(&constant, 0).unwrap().get(0), c(2.5));
        let slow = TaylorFunction::new(vec![c(1.0)], TailPolicy::PowerLaw { c: 1.0, q: 0.4 }).unwrap();
        assert!(matches!(trace(&slow, 3), Err(Error::Divergent(_))));

        // slices converge to the trace mode by mode
        let h = harmonic(32);
        let full = trace(&h, 32).unwrap();
        let mut last = f64::INFINITY;
        for r in dyadic_schedule::<f64>(12) {
            let gap = radial_slice(&h, Radius::new(r).unwrap(), 32).unwrap().max_abs_diff(&full);
            assert!(gap <= last);
            last = gap;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn hardy_norm_examples() {
        let constant = TaylorFunction::polynomial(vec![Complex::new(3.0, 4.0)]).unwrap();
        assert!((hardy_norm::<f64>(&constant, 2.0, 1e-9).unwrap() - 5.0).abs() < 1e-14);
        assert!((hardy_norm::<f64>(&constant, 3.0, 1e-9).unwrap() - 5.0).abs() < 1e-9);
        assert!((hardy_norm(&monomial(1), 2.0, 1e-9).unwrap() - 1.0).abs() < 1e-14);
        // |z| ≡ r on the circle for every p
        assert!((hardy_norm(&monomial(1), 3.0, 1e-9).unwrap() - 1.0).abs() < 1e-6);

        // a_k = k^{-1.2}: the sum of k^{-2.4} by partial sums plus integral tail
        let mut a = vec![c(0.0)];
        a.extend((1..=512).map(|k| c((k as f64).powf(-1.2))));
        let u = TaylorFunction::new(a, TailPolicy::PowerLaw { c: 1.0, q: 1.2 }).unwrap();
        let n = 1_000_000u64;
        let partial: f64 = (1..=n).map(|k| (k as f64).powf(-2.4)).sum();
        let oracle = (partial + (n as f64 + 0.5).powf(-1.4) / 1.4).sqrt();
        assert!((hardy_norm(&u, 2.0, 1e-9).unwrap() - oracle).abs() < 1e-10);

        assert!(matches!(hardy_norm(&harmonic(64).clone_with_tail(0.5), 2.0, 1e-9), Err(Error::Divergent(_))));
    }

    #[test]
    fn hardy_means_are_monotone() {
        let u = TaylorFunction::polynomial(vec![c(1.0), c(-2.0), c(0.5), c(0.25)]).unwrap();
        let means = hardy_means(&u, 3.0, &dyadic_schedule::<f64>(8), 1e-10).unwrap();
        for w in means.windows(2) {
            assert!(w[1].value.unwrap() >= w[0].value.unwrap() - 1e-12);
        }
    }

    impl TaylorFunction<f64> {
        fn clone_with_tail(&self, q: f64) -> Self {
            let a = (0..=self.k_max()).map(|k| if k == 0 { c(0.0) } else { c((k as f64).powf(-q)) }).collect();
            TaylorFunction::new(a, TailPolicy::PowerLaw { c: 1.0, q }).unwrap()
        }
    }
}
