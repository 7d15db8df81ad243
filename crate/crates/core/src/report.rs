//! Deterministic JSON reports: `{config, results, diagnostics, version}`
//! with every float printed to 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::seminorm::{eta_cache_snapshot, eta_constant, EtaConstant};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Compact JSON with floats as `d.dddddddddddddddde±x`.
#[derive(Debug, Default, Clone, Copy)]
pub struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<S: Serialize + ?Sized>(value: &S) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    /// Normalizations the run depended on.
    pub eta: Vec<EtaConstant>,
    pub notes: Vec<String>,
}

impl Diagnostics {
    /// `η_s` for the given `s` values, sorted and deduplicated.
    pub fn for_s_values(s_values: &[f64], notes: Vec<String>) -> Self {
        let mut s: Vec<f64> = s_values.to_vec();
        s.sort_by(f64::total_cmp);
        s.dedup();
        Self { eta: s.into_iter().filter_map(|s| eta_constant(s).ok()).collect(), notes }
    }

    /// Every `η_s` this process has calibrated.
    pub fn from_cache(notes: Vec<String>) -> Self {
        Self { eta: eta_cache_snapshot(), notes }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<C, R> {
    pub config: C,
    pub results: R,
    pub diagnostics: Diagnostics,
    pub version: &'static str,
}

impl<C: Serialize, R: Serialize> Report<C, R> {
    pub fn new(config: C, results: R, diagnostics: Diagnostics) -> Self {
        Self { config, results, diagnostics, version: VERSION }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        to_json(self)
    }
}
