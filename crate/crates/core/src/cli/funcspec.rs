//! The function mini-language used by `--function`:
//!
//! * `harmonic:ℓ,m` — the basis function `Y_{ℓ,m}` (m is 1-based);
//! * `coeffs:PATH` — coefficients from a file, one per line or the last
//!   column of a CSV with header (as written by `fit`);
//! * `sobolev:s,R,seed[,L_max]` — random-profile Sobolev function
//!   (`L_max` defaults to 32);
//! * `extremal:L,s,R` — all mass on degree `L + 1`, direction from `--seed`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::harmonics::{dim_poly_space, CoefficientVector};
use crate::spaces::{make_sobolev_function, Profile};

pub const DEFAULT_SOBOLEV_MAX_DEGREE: usize = 32;

fn numbers(text: &str, count: Option<usize>, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if let Some(c) = count {
        if parts.len() != c {
            return Err(Error::InvalidArgument(format!("{what} expects {c} comma-separated values")));
        }
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("{what}: not a number: {p:?}")))
        })
        .collect()
}

fn as_index(v: f64, what: &str) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v < 1e9 {
        Ok(v as usize)
    } else {
        Err(Error::InvalidArgument(format!("{what} must be a nonnegative integer, got {v}")))
    }
}

/// Parses a function spec into a coefficient vector on S^d.
pub fn parse_function(spec: &str, d: usize, seed: u64) -> Result<CoefficientVector> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("function spec {spec:?} lacks a `kind:` prefix")))?;
    match kind.trim() {
        "harmonic" => {
            let v = numbers(rest, Some(2), "harmonic:ℓ,m")?;
            CoefficientVector::harmonic(d, as_index(v[0], "ℓ")?, as_index(v[1], "m")?)
        }
        "coeffs" => read_coefficients(Path::new(rest.trim()), d),
        "sobolev" => {
            let v = numbers(rest, None, "sobolev:s,R,seed[,L_max]")?;
            if v.len() != 3 && v.len() != 4 {
                return Err(Error::InvalidArgument("sobolev:s,R,seed[,L_max] expects 3 or 4 values".into()));
            }
            let l_max = match v.get(3) {
                Some(l) => as_index(*l, "L_max")?,
                None => DEFAULT_SOBOLEV_MAX_DEGREE,
            };
            let draw_seed = as_index(v[2], "seed")? as u64;
            make_sobolev_function(d, v[0], v[1], l_max, draw_seed, Profile::Random)
        }
        "extremal" => {
            let v = numbers(rest, Some(3), "extremal:L,s,R")?;
            let l = as_index(v[0], "L")?;
            make_sobolev_function(d, v[1], v[2], l + 1, seed, Profile::Extremal(l))
        }
        other => Err(Error::InvalidArgument(format!("unknown function kind {other:?}"))),
    }
}

/// Reads one real per row; a non-numeric first row is taken as a header and
/// the last comma-separated field of every row is used.
pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if i == 0 => continue,
            Err(_) => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("not a number: {field:?}"),
                })
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 0, message: "no values".into() });
    }
    Ok(out)
}

fn read_coefficients(path: &Path, d: usize) -> Result<CoefficientVector> {
    let values = read_values(path)?;
    let degree = (0..=100_000)
        .find(|&l| dim_poly_space(d, l) >= values.len())
        .filter(|&l| dim_poly_space(d, l) == values.len())
        .ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("{} coefficients do not fill P_L on S^{d} for any L", values.len()),
        })?;
    CoefficientVector::from_vec(d, degree, values)
}
