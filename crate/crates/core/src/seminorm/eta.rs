//! The spectral normalization `η_s`, calibrated once per `s` on the `k = 1`
//! mode and cached process-wide.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::kernel::KernelForm;
use super::{quadrature_pth_power, QuadratureConfig};
use crate::circle::FourierCoeffs;
use crate::error::{Error, Result};

/// Node count of the calibration quadrature.
pub const ETA_RESOLUTION: usize = 4096;

/// Largest relative change of `η_s` allowed when the resolution is halved.
pub const ETA_MAX_DRIFT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaConstant {
    pub s: f64,
    pub eta: f64,
    /// Nodes per axis used for `eta`.
    pub resolution: usize,
    /// `|η(M) − η(M/2)| / η(M)`.
    pub drift: f64,
}

type Slot = Arc<OnceLock<Result<EtaConstant>>>;

fn cache() -> &'static Mutex<HashMap<u64, Slot>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Slot>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `η_s` such that `[u]² = η_s Σ |k|^{2s} |c_k|²` for the wrapped kernel.
pub fn eta_constant(s: f64) -> Result<EtaConstant> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!("s = {s} must lie in (0, 1)")));
    }
    let slot = {
        let mut map = cache().lock().expect("eta cache poisoned");
        map.entry(s.to_bits()).or_default().clone()
    };
    // Concurrent callers for the same key block here until the value is published.
    slot.get_or_init(|| calibrate(s)).clone()
}

/// Every `η_s` computed so far, sorted by `s`.
pub fn eta_cache_snapshot() -> Vec<EtaConstant> {
    let map = cache().lock().expect("eta cache poisoned");
    let mut out: Vec<EtaConstant> =
        map.values().filter_map(|slot| slot.get().and_then(|r| r.as_ref().ok()).copied()).collect();
    out.sort_by(|a, b| a.s.total_cmp(&b.s));
    out
}

fn calibrate(s: f64) -> Result<EtaConstant> {
    let mode = FourierCoeffs::from_modes(&[(1, Complex::new(1.0, 0.0))])?;
    let at = |m: usize| -> f64 {
        let quad = QuadratureConfig {
            nodes_per_axis: m,
            kernel: KernelForm::Wrapped,
            offset: true,
            extrapolate: true,
        };
        quadrature_pth_power(&mode, s, 2.0, &quad)
    };
    let fine = at(ETA_RESOLUTION);
    let coarse = at(ETA_RESOLUTION / 2);
    let drift = (fine - coarse).abs() / fine;
    if !(fine > 0.0) || drift > ETA_MAX_DRIFT {
        return Err(Error::EtaUnstable { s, drift });
    }
    Ok(EtaConstant { s, eta: fine, resolution: ETA_RESOLUTION, drift })
}
