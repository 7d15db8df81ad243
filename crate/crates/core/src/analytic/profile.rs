use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::growth::{classify, Classification, MembershipVerdict};
use super::{power_geometric_tail, radial_slice, slice_bandwidth, slice_tail_bound, trace, weighted_energy, TailPolicy, TaylorFunction};
use crate::circle::synthesize;
use crate::error::{Error, Result};
use crate::poisson::{dyadic_schedule, Radius, DEFAULT_SCHEDULE_LEN};
use crate::scalar::Real;
use crate::seminorm::{
    eta_constant, gagliardo_quadrature_coeffs, lp_norm, KernelForm, Measure, QuadratureConfig, SeminormParams,
};
use crate::special::{next_pow2, pairwise_sum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMethod {
    /// `sqrt(η_s Σ k^{2s}|a_k|² r^{2k})`; `p = 2` only.
    Spectral,
    /// Tensor rule on the truncated slice.
    Quadrature,
}

impl ProfileMethod {
    pub fn default_for<T: Real>(params: &SeminormParams<T>) -> Self {
        if params.is_p2() {
            ProfileMethod::Spectral
        } else {
            ProfileMethod::Quadrature
        }
    }
}

impl std::str::FromStr for ProfileMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spectral" => Ok(ProfileMethod::Spectral),
            "quadrature" => Ok(ProfileMethod::Quadrature),
            other => Err(format!("unknown method `{other}` (spectral, quadrature)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileOptions {
    /// Largest admissible dropped tail of a slice, in absolute terms.
    pub truncation_tol: f64,
    pub min_nodes: usize,
    /// Slices needing more nodes per axis are flagged instead of computed.
    pub max_nodes: usize,
    pub kernel: KernelForm,
    pub extrapolate: bool,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self { truncation_tol: 1e-10, min_nodes: 1024, max_nodes: 16384, kernel: KernelForm::Wrapped, extrapolate: true }
    }
}

/// One radius of a profile. `value` is `None` when the slice could not be
/// resolved within the options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry<T> {
    pub r: T,
    pub value: Option<T>,
    /// Slice bandwidth used (0 on closed-form paths).
    pub bandwidth: usize,
    /// Nodes per axis or grid size used (0 on closed-form paths).
    pub nodes: usize,
    /// Bound on what truncation left out.
    pub truncation: f64,
}

impl<T> ProfileEntry<T> {
    pub(crate) fn new(r: T, value: Option<T>, bandwidth: usize, nodes: usize, truncation: f64) -> Self {
        Self { r, value, bandwidth, nodes, truncation }
    }

    pub fn is_resolved(&self) -> bool {
        self.value.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormProfile<T> {
    pub params: SeminormParams<T>,
    pub method: ProfileMethod,
    pub entries: Vec<ProfileEntry<T>>,
}

impl<T: Real> SeminormProfile<T> {
    /// `(r, value)` of the resolved entries.
    pub fn resolved(&self) -> Vec<(T, T)> {
        self.entries.iter().filter_map(|e| e.value.map(|v| (e.r, v))).collect()
    }

    /// Whether resolved values never drop by more than `rel_tol` relative.
    pub fn is_non_decreasing(&self, rel_tol: T) -> bool {
        self.resolved().windows(2).all(|w| w[1].1 >= w[0].1 - rel_tol * w[0].1.abs())
    }
}

fn check_schedule<T: Real>(schedule: &[T]) -> Result<()> {
    for &r in schedule {
        Radius::new(r)?;
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("radius schedule must be strictly increasing".into()));
    }
    Ok(())
}

/// `r ↦ [u_r]_{W^{s,p}}` along a schedule.
pub fn seminorm_profile<T: Real>(
    u: &TaylorFunction<T>,
    params: &SeminormParams<T>,
    schedule: &[T],
    method: ProfileMethod,
    opts: &ProfileOptions,
) -> Result<SeminormProfile<T>> {
    check_schedule(schedule)?;
    let entries = match method {
        ProfileMethod::Spectral => {
            if !params.is_p2() {
                return Err(Error::InvalidParameter("the spectral profile needs p = 2".into()));
            }
            let s = params.s().as_f64();
            let eta = eta_constant(s)?.eta;
            schedule
                .iter()
                .map(|&r| {
                    let rho = (r * r).as_f64();
                    let (energy, unc) =
                        weighted_energy(u, 2.0 * s, rho).ok_or_else(|| Error::Inconsistent("tail sum".into()))?;
                    let value = (eta * energy).sqrt();
                    let gap = (eta * (energy + unc)).sqrt() - value;
                    let resolved = gap <= opts.truncation_tol;
                    Ok(ProfileEntry::new(r, resolved.then(|| T::lit(value)), 0, 0, gap))
                })
                .collect::<Result<Vec<_>>>()?
        }
        ProfileMethod::Quadrature => schedule
            .iter()
            .map(|&r| quadrature_entry(u, params, r, opts))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(SeminormProfile { params: *params, method, entries })
}

fn nodes_for(bandwidth: usize, opts: &ProfileOptions) -> usize {
    let resolve = next_pow2(2 * bandwidth + 2);
    let needed = if opts.extrapolate { 2 * resolve } else { resolve };
    needed.max(opts.min_nodes).max(16)
}

fn quadrature_entry<T: Real>(
    u: &TaylorFunction<T>,
    params: &SeminormParams<T>,
    r: T,
    opts: &ProfileOptions,
) -> Result<ProfileEntry<T>> {
    let radius = Radius::new(r)?;
    let k = match slice_bandwidth(u, radius, opts.truncation_tol) {
        Ok(k) => k,
        Err(Error::Coverage { requested, .. }) => {
            return Ok(ProfileEntry::new(r, None, requested, nodes_for(requested, opts), f64::INFINITY))
        }
        Err(e) => return Err(e),
    };
    let m = nodes_for(k, opts);
    let truncation = slice_tail_bound(u, r.as_f64(), k);
    if m > opts.max_nodes {
        return Ok(ProfileEntry::new(r, None, k, m, truncation));
    }
    let slice = radial_slice(u, radius, k)?;
    let quad = QuadratureConfig { nodes_per_axis: m, kernel: opts.kernel, offset: true, extrapolate: opts.extrapolate };
    Ok(ProfileEntry::new(r, Some(gagliardo_quadrature_coeffs(&slice, params, &quad)), k, m, truncation))
}

/// Classifies `sup_{0<r<1} [u_r]` from the profile on `r_j = 1 − 2^{−j}`,
/// `j = 1..=12`.
pub fn sup_seminorm<T: Real>(
    u: &TaylorFunction<T>,
    params: &SeminormParams<T>,
    tol: f64,
    opts: &ProfileOptions,
) -> Result<MembershipVerdict> {
    let schedule = dyadic_schedule::<T>(DEFAULT_SCHEDULE_LEN);
    let profile = seminorm_profile(u, params, &schedule, ProfileMethod::default_for(params), opts)?;
    Ok(verdict_from_profile(&profile, tol))
}

pub(crate) fn verdict_from_profile<T: Real>(profile: &SeminormProfile<T>, tol: f64) -> MembershipVerdict {
    // only the unbroken run of resolved radii from the start is dyadic-consecutive
    let run: Vec<(f64, f64)> = profile
        .entries
        .iter()
        .map_while(|e| e.value.map(|v| (e.r.as_f64(), v.as_f64())))
        .collect();
    let (radii, values): (Vec<f64>, Vec<f64>) = run.into_iter().unzip();
    classify(&radii, &values, profile.params.p().as_f64(), tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipScan {
    pub p: f64,
    pub verdicts: Vec<(f64, MembershipVerdict)>,
    /// Midpoint between the last finite and the first divergent `s`.
    pub threshold: Option<f64>,
}

/// Membership verdict for every `s` of a grid.
pub fn membership_scan<T: Real>(
    u: &TaylorFunction<T>,
    s_grid: &[f64],
    p: f64,
    tol: f64,
    opts: &ProfileOptions,
) -> Result<MembershipScan> {
    let mut grid = s_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let verdicts = grid
        .par_iter()
        .map(|&s| {
            let params = SeminormParams::new(T::lit(s), T::lit(p))?;
            Ok((s, sup_seminorm(u, &params, tol, opts)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let last_finite = verdicts.iter().filter(|(_, v)| v.classification == Classification::Finite).map(|(s, _)| *s).next_back();
    let first_divergent = verdicts
        .iter()
        .find(|(s, v)| v.classification == Classification::Divergent && last_finite.is_none_or(|f| *s > f))
        .map(|(s, _)| *s);
    let threshold = match (last_finite, first_divergent) {
        (Some(a), Some(b)) => Some(0.5 * (a + b)),
        _ => None,
    };
    Ok(MembershipScan { p, verdicts, threshold })
}

/// `‖u‖_{𝒲^{s,p}} = |u(0)| + sup_r [u_r]`; refuses non-members.
pub fn disc_norm<T: Real>(
    u: &TaylorFunction<T>,
    params: &SeminormParams<T>,
    tol: f64,
    opts: &ProfileOptions,
) -> Result<T> {
    let verdict = sup_seminorm(u, params, tol, opts)?;
    match verdict.classification {
        Classification::Finite => Ok(u.a0().norm() + T::lit(verdict.sup_estimate.expect("finite has estimate"))),
        Classification::Divergent => Err(Error::Divergent(format!(
            "sup of the slice seminorms diverges; not in the disc space for s = {}, p = {}",
            params.s(),
            params.p()
        ))),
        Classification::Inconclusive => Err(Error::Resolution("membership inconclusive on the schedule".into())),
    }
}

/// `r ↦ [u_r − u*]` along a schedule.
pub fn trace_convergence<T: Real>(
    u: &TaylorFunction<T>,
    params: &SeminormParams<T>,
    schedule: &[T],
    opts: &ProfileOptions,
) -> Result<Vec<ProfileEntry<T>>> {
    check_schedule(schedule)?;
    let k_max = u.k_max();
    if params.is_p2() {
        let s = params.s().as_f64();
        let eta = eta_constant(s)?.eta;
        let moduli: Vec<f64> = u.coeffs().iter().map(|c| c.norm().as_f64()).collect();
        return schedule
            .iter()
            .map(|&r| {
                let rf = r.as_f64();
                let terms: Vec<f64> = moduli
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, a)| {
                        let gap = 1.0 - rf.powi(k as i32);
                        (k as f64).powf(2.0 * s) * a * a * gap * gap
                    })
                    .collect();
                let head = pairwise_sum(&terms);
                // Σ_{k>K} C² k^{2s−2q} (1 − r^k)², expanded
                let tail = |c: f64, q: f64| -> Result<f64> {
                    let e = 2.0 * q - 2.0 * s;
                    let at = |rho: f64| power_geometric_tail(e, rho, k_max + 1);
                    let full = at(1.0).ok_or_else(|| Error::Divergent("trace seminorm diverges".into()))?;
                    Ok(c * c * (full - 2.0 * at(rf).unwrap_or(0.0) + at(rf * rf).unwrap_or(0.0)).max(0.0))
                };
                let (energy, unc) = match u.tail() {
                    TailPolicy::Exact => (head, 0.0),
                    TailPolicy::PowerLaw { c, q } => (head + tail(c, q)?, 0.0),
                    TailPolicy::Bound { c, q } => (head, tail(c, q)?),
                };
                let value = (eta * energy).sqrt();
                let gap = (eta * (energy + unc)).sqrt() - value;
                Ok(ProfileEntry::new(r, (gap <= opts.truncation_tol).then(|| T::lit(value)), k_max, 0, gap))
            })
            .collect();
    }
    let boundary = trace(u, k_max)?;
    let m = nodes_for(k_max, opts);
    let truncation = slice_tail_bound(u, 1.0, k_max);
    schedule
        .iter()
        .map(|&r| {
            if m > opts.max_nodes {
                return Ok(ProfileEntry::new(r, None, k_max, m, truncation));
            }
            let diff = radial_slice(u, Radius::new(r)?, k_max)?.sub(&boundary);
            let quad =
                QuadratureConfig { nodes_per_axis: m, kernel: opts.kernel, offset: true, extrapolate: opts.extrapolate };
            Ok(ProfileEntry::new(r, Some(gagliardo_quadrature_coeffs(&diff, params, &quad)), k_max, m, truncation))
        })
        .collect()
}

/// The three sides of `‖u‖ ≤ ‖u*‖_{W^{s,p}} ≤ (1 + C)‖u‖`, `C = κ + (2π)^{1/p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEquivalence {
    pub kappa: f64,
    pub constant: f64,
    pub disc_norm: f64,
    pub trace_lp: f64,
    pub trace_seminorm: f64,
    pub trace_norm: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl NormEquivalence {
    pub const REL_TOL: f64 = 1e-6;

    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

pub fn norm_equivalence_check<T: Real>(
    u: &TaylorFunction<T>,
    params: &SeminormParams<T>,
    kappa: f64,
    tol: f64,
    opts: &ProfileOptions,
) -> Result<NormEquivalence> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!("Poincaré constant {kappa} must be positive")));
    }
    let p = params.p().as_f64();
    let disc = disc_norm(u, params, tol, opts)?.as_f64();
    let (trace_lp, trace_seminorm) = if params.is_p2() {
        let s = params.s().as_f64();
        let (l2, _) = weighted_energy(u, 0.0, 1.0).ok_or_else(|| Error::Divergent("trace not in L²".into()))?;
        let (energy, _) =
            weighted_energy(u, 2.0 * s, 1.0).ok_or_else(|| Error::Divergent("trace seminorm diverges".into()))?;
        let l2 = 2.0 * std::f64::consts::PI * (l2 + u.a0().norm_sqr().as_f64());
        (l2.sqrt(), (eta_constant(s)?.eta * energy).sqrt())
    } else {
        if !matches!(u.tail(), TailPolicy::Exact) {
            return Err(Error::Resolution("for p != 2 the trace norm needs a polynomial".into()));
        }
        let k = u.k_max();
        let m = nodes_for(k, opts);
        if m > opts.max_nodes {
            return Err(Error::Resolution(format!("trace needs {m} nodes per axis, above the limit {}", opts.max_nodes)));
        }
        let boundary = trace(u, k)?;
        let lp = lp_norm(&synthesize(&boundary, (4 * next_pow2(2 * k + 2)).max(64))?, params.p(), Measure::Unnormalized);
        let quad = QuadratureConfig { nodes_per_axis: m, kernel: opts.kernel, offset: true, extrapolate: opts.extrapolate };
        (lp.as_f64(), gagliardo_quadrature_coeffs(&boundary, params, &quad).as_f64())
    };
    let constant = kappa + (2.0 * std::f64::consts::PI).powf(1.0 / p);
    let trace_norm = trace_lp + trace_seminorm;
    let slack = 1.0 + NormEquivalence::REL_TOL;
    Ok(NormEquivalence {
        kappa,
        constant,
        disc_norm: disc,
        trace_lp,
        trace_seminorm,
        trace_norm,
        lower_holds: disc <= trace_norm * slack,
        upper_holds: trace_norm <= (1.0 + constant) * disc * slack,
    })
}
