//! Functions from the gallery or from coefficient files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use gagliardo::analytic::{trace, TaylorFunction};
use gagliardo::circle::FourierCoeffs;
use gagliardo::gallery::{make, GallerySpec, DEFAULT_K_MAX};
use num_complex::Complex;
use serde::Serialize;

use crate::CliError;

pub const FILE_FORMAT: &str = "\
Coefficient files are JSON arrays of [re, im] pairs.
  Taylor files (--taylor): entry k is a_k, k = 0, 1, ..., K. The series is
    taken to end at K.
  Fourier files (--coeffs, --phi): odd length 2K+1, entry k+K is c_k for
    k = -K..K, so the middle entry is the mean.
Example (the Fourier series of cos t): [[0.5, 0], [0, 0], [0.5, 0]]";

/// Parameters of a gallery entry; unset ones take the entry's defaults.
#[derive(Args, Debug, Clone, Serialize)]
pub struct GalleryParams {
    /// Monomial degree
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long)]
    pub s0: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Number of stored Taylor coefficients
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    pub k_max: usize,
}

impl GalleryParams {
    pub fn spec(&self, id: &str) -> Result<GallerySpec, CliError> {
        let named = [("n", self.n), ("s0", self.s0), ("eps", self.eps), ("alpha", self.alpha), ("beta", self.beta)];
        let params: BTreeMap<String, f64> =
            named.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect();
        Ok(GallerySpec::from_params(id, &params)?)
    }
}

/// An analytic function on the disc.
#[derive(Args, Debug, Clone, Serialize)]
pub struct FunctionArgs {
    /// Gallery entry id (see `gallery --list`)
    #[arg(long, conflicts_with = "taylor")]
    pub gallery: Option<String>,
    /// Taylor coefficient file
    #[arg(long)]
    pub taylor: Option<PathBuf>,
    #[command(flatten)]
    pub params: GalleryParams,
}

impl FunctionArgs {
    pub fn load(&self) -> Result<(TaylorFunction<f64>, Option<GallerySpec>), CliError> {
        match (&self.gallery, &self.taylor) {
            (Some(id), _) => {
                let spec = self.params.spec(id)?;
                Ok((make(&spec, self.params.k_max)?, Some(spec)))
            }
            (None, Some(path)) => Ok((TaylorFunction::polynomial(read_pairs(path)?)?, None)),
            (None, None) => Err(CliError::Usage("give --gallery or --taylor".into())),
        }
    }
}

/// Boundary trace of a gallery entry, cut at `bandwidth`.
pub fn gallery_trace(spec: &GallerySpec, params: &GalleryParams, bandwidth: usize) -> Result<FourierCoeffs<f64>, CliError> {
    let u: TaylorFunction<f64> = make(spec, params.k_max.max(bandwidth))?;
    Ok(trace(&u, bandwidth)?)
}

pub fn read_pairs(path: &Path) -> Result<Vec<Complex<f64>>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: expected a JSON array of [re, im] pairs: {e}", path.display())))?;
    if pairs.is_empty() {
        return Err(CliError::Input(format!("{}: no coefficients", path.display())));
    }
    Ok(pairs.into_iter().map(|[re, im]| Complex::new(re, im)).collect())
}

pub fn read_fourier(path: &Path) -> Result<FourierCoeffs<f64>, CliError> {
    let pairs = read_pairs(path)?;
    if pairs.len() % 2 == 0 {
        return Err(CliError::Input(format!(
            "{}: a Fourier file needs odd length 2K+1, got {}",
            path.display(),
            pairs.len()
        )));
    }
    Ok(FourierCoeffs::new(pairs)?)
}

/// Parses a point given as `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex<f64>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex::new(num(re)?, num(im)?)),
        _ => Err(format!("`{s}` is not `re` or `re,im`")),
    }
}

/// A list of reals given on the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Grid(pub Vec<f64>);

/// `a:b:step` (inclusive) or a comma list.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    parse_values(s).map(Grid)
}

fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, h] = parts.as_slice() else {
            return Err(format!("`{s}` is not `start:stop:step`"));
        };
        let (a, b, h) = (num(a)?, num(b)?, num(h)?);
        if !(h > 0.0) || b < a {
            return Err(format!("`{s}` needs step > 0 and stop >= start"));
        }
        let count = ((b - a) / h + 1e-9).floor() as usize;
        // round away accumulated binary noise so that 0.3 + 4*0.05 prints as 0.5
        Ok((0..=count).map(|i| ((a + i as f64 * h) * 1e12).round() / 1e12).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.3:0.6:0.05").unwrap().0, vec![0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6]);
        assert_eq!(parse_grid("0.2, 0.4").unwrap().0, vec![0.2, 0.4]);
        assert!(parse_grid("0.6:0.3:0.1").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex::new(0.5, 0.0));
        assert_eq!(parse_complex("-0.5, 0.2").unwrap(), Complex::new(-0.5, 0.2));
        assert!(parse_complex("a").is_err());
    }
}
