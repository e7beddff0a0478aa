//! The regression experiment, the Gaussian sequence (white-noise) model, the
//! two Markov-kernel transfers between them, and the Gaussian total-variation
//! formula.
//!
//! Regression: `Z_i = f(x_i) + σ ε_i` on a design of size n. White noise, in
//! an orthonormal basis: `y_j = θ_j + (σ/√n) η_j`. The transfer regression →
//! sequence keeps `⟨Z, Y_j⟩_n` for `j ≤ m` and pads with fresh noise; the
//! reverse transfer rebuilds node values and adds noise on the orthogonal
//! complement of the column space of `X`.

use std::io::Write;
use std::path::Path;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{hyperinterpolate, DiscreteFrame};
use crate::designs::SphericalDesign;
use crate::error::{Error, Result};
use crate::harmonics::CoefficientVector;
use crate::rng::{standard_normal_vec, substream};
use crate::special::std_normal_cdf;
use crate::sphere::SphereFunction;

/// Observations `Z_i` at the nodes of a design.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSample {
    pub z: Vec<f64>,
    pub sigma: f64,
}

impl RegressionSample {
    pub fn n(&self) -> usize {
        self.z.len()
    }
}

/// Truncated sequence `y_1, …, y_T` with noise level `σ̃ = σ/√n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceObservation {
    pub y: Vec<f64>,
    pub noise: f64,
    pub d: usize,
}

impl SequenceObservation {
    /// Truncation `T`.
    pub fn truncation(&self) -> usize {
        self.y.len()
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidArgument(format!("noise level must be a finite σ ≥ 0, got {sigma}")));
    }
    Ok(())
}

/// Node values plus noise, with the noise drawn from replication stream 0.
pub fn simulate_regression<F>(f: &F, design: &SphericalDesign, sigma: f64, seed: u64) -> Result<RegressionSample>
where
    F: SphereFunction + ?Sized,
{
    let mean = design.points().values(f);
    regression_from_mean(&mean, sigma, seed, 0)
}

/// `Z = mean + σ ε` with `ε` from substream `(seed, "regression", replication)`.
pub fn regression_from_mean(mean: &[f64], sigma: f64, seed: u64, replication: u64) -> Result<RegressionSample> {
    check_sigma(sigma)?;
    let mut rng = substream(seed, "regression", replication);
    let eps = standard_normal_vec(&mut rng, mean.len());
    Ok(RegressionSample {
        z: mean.iter().zip(&eps).map(|(m, e)| m + sigma * e).collect(),
        sigma,
    })
}

/// `y_j = θ_j + (σ/√n) η_j` for `j ≤ T`, `θ` zero-padded.
pub fn simulate_white_noise(
    theta: &CoefficientVector,
    sigma: f64,
    n: usize,
    truncation: usize,
    seed: u64,
) -> Result<SequenceObservation> {
    white_noise_replication(theta, sigma, n, truncation, seed, 0)
}

/// Replication `replication` of [`simulate_white_noise`].
pub fn white_noise_replication(
    theta: &CoefficientVector,
    sigma: f64,
    n: usize,
    truncation: usize,
    seed: u64,
    replication: u64,
) -> Result<SequenceObservation> {
    check_sigma(sigma)?;
    if truncation < 1 {
        return Err(Error::InvalidArgument("truncation T must be at least 1".into()));
    }
    if truncation < theta.len() {
        return Err(Error::InvalidArgument(format!(
            "truncation T = {truncation} is shorter than θ ({} coefficients)",
            theta.len()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("sample size n must be positive".into()));
    }
    let noise = sigma / (n as f64).sqrt();
    let mut rng = substream(seed, "white_noise", replication);
    let eta = standard_normal_vec(&mut rng, truncation);
    Ok(SequenceObservation {
        y: (1..=truncation).zip(&eta).map(|(j, e)| theta.get(j) + noise * e).collect(),
        noise,
        d: theta.dim(),
    })
}

/// Regression → sequence: `y_j = ⟨Z, Y_j⟩_n` for `j ≤ m`, fresh
/// `(σ/√n)`-Gaussians for `m < j ≤ T`.
pub fn to_white_noise(
    zs: &RegressionSample,
    frame: &DiscreteFrame,
    truncation: usize,
    seed: u64,
) -> Result<SequenceObservation> {
    to_white_noise_replication(zs, frame, truncation, seed, 0)
}

/// Replication `replication` of [`to_white_noise`]; the padding noise uses
/// its own stream, disjoint from the regression noise.
pub fn to_white_noise_replication(
    zs: &RegressionSample,
    frame: &DiscreteFrame,
    truncation: usize,
    seed: u64,
    replication: u64,
) -> Result<SequenceObservation> {
    let m = frame.m();
    if truncation < m {
        return Err(Error::InvalidArgument(format!("truncation T = {truncation} is below m = {m}")));
    }
    let beta = hyperinterpolate(frame, &zs.z)?;
    let noise = zs.sigma / (frame.n() as f64).sqrt();
    let mut rng = substream(seed, "to_white_noise/fresh", replication);
    let fresh = standard_normal_vec(&mut rng, truncation - m);
    let mut y = beta.into_vec();
    y.extend(fresh.iter().map(|e| noise * e));
    Ok(SequenceObservation { y, noise, d: frame.dim() })
}

/// Sequence → regression: `Z′ = X θ̂ + σ (I − n⁻¹XXᵀ) g` with `θ̂ = y_{1..m}`
/// and `σ = σ̃ √n`.
pub fn to_regression(obs: &SequenceObservation, frame: &DiscreteFrame, seed: u64) -> Result<RegressionSample> {
    to_regression_replication(obs, frame, seed, 0)
}

/// Replication `replication` of [`to_regression`].
pub fn to_regression_replication(
    obs: &SequenceObservation,
    frame: &DiscreteFrame,
    seed: u64,
    replication: u64,
) -> Result<RegressionSample> {
    let (n, m) = (frame.n(), frame.m());
    if obs.d != frame.dim() {
        return Err(Error::DimensionMismatch { expected: frame.dim(), found: obs.d });
    }
    if obs.truncation() < m {
        return Err(Error::InvalidArgument(format!(
            "observation covers {} coefficients, the frame needs {m}",
            obs.truncation()
        )));
    }
    if !(obs.noise >= 0.0) || !obs.noise.is_finite() {
        return Err(Error::InvalidArgument(format!("inconsistent noise level {}", obs.noise)));
    }
    let sigma = obs.noise * (n as f64).sqrt();
    let x = frame.design_matrix();
    let theta = DVector::from_column_slice(&obs.y[..m]);
    let mean = x * theta;
    let mut rng = substream(seed, "to_regression/complement", replication);
    let g = DVector::from_vec(standard_normal_vec(&mut rng, n));
    let proj = x * (x.tr_mul(&g) / n as f64);
    let xi = (g - proj) * sigma;
    Ok(RegressionSample {
        z: (mean + xi).as_slice().to_vec(),
        sigma,
    })
}

/// `1 − 2Φ(−dist/(2σ̃))`, the total-variation distance between two Gaussians
/// with common covariance `σ̃² I` and means `dist` apart.
pub fn gaussian_tv_bound(dist: f64, noise: f64) -> Result<f64> {
    if !(noise > 0.0) {
        return Err(Error::InvalidArgument(format!("noise level must be positive, got {noise}")));
    }
    if !(dist >= 0.0) {
        return Err(Error::InvalidArgument(format!("distance must be nonnegative, got {dist}")));
    }
    Ok(1.0 - 2.0 * std_normal_cdf(-dist / (2.0 * noise)))
}

/// Runs `reps` replications in parallel; replication `r` gets index `r`.
pub fn replicate<T, F>(reps: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    (0..reps as u64).into_par_iter().map(&f).collect()
}

/// Per-coordinate sample means and the sample covariance of the first
/// `probe` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Moments {
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

pub fn sample_moments(rows: &[Vec<f64>], probe: usize) -> Result<Moments> {
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("need at least two replications".into()));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) || probe > width {
        return Err(Error::InvalidArgument("ragged replication rows".into()));
    }
    let r = rows.len() as f64;
    let mean: Vec<f64> = (0..width)
        .map(|j| crate::sum::pairwise_sum(&rows.iter().map(|row| row[j]).collect::<Vec<_>>()) / r)
        .collect();
    let covariance = (0..probe)
        .map(|a| {
            (0..probe)
                .map(|b| {
                    let prods: Vec<f64> = rows.iter().map(|row| (row[a] - mean[a]) * (row[b] - mean[b])).collect();
                    crate::sum::pairwise_sum(&prods) / (r - 1.0)
                })
                .collect()
        })
        .collect();
    Ok(Moments { mean, covariance })
}

/// Writes one row per replication with columns `prefix1..prefixK`, values
/// with 17 significant digits.
pub fn write_replications_csv<W: Write>(out: W, prefix: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let width = rows.first().map_or(0, Vec::len);
    let mut header = vec!["replication".to_string()];
    header.extend((1..=width).map(|j| format!("{prefix}{j}")));
    w.write_record(&header)?;
    for (r, row) in rows.iter().enumerate() {
        let mut rec = vec![r.to_string()];
        rec.extend(row.iter().map(|v| format_real(*v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Same as [`write_replications_csv`], to a file.
pub fn write_replications_csv_file(path: &Path, prefix: &str, rows: &[Vec<f64>]) -> Result<()> {
    write_replications_csv(std::fs::File::create(path)?, prefix, rows)
}

/// Real formatted with 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{builtin_design, resolve_design};

    #[test]
    fn noiseless_regression_is_exact() {
        let design = builtin_design("octahedron").unwrap();
        let f = |x: &crate::sphere::SpherePoint| x.coords()[2];
        let z = simulate_regression(&f, &design, 0.0, 1).unwrap();
        assert_eq!(z.z, design.points().values(&f));
        assert!(simulate_regression(&f, &design, -1.0, 1).is_err());
    }

    #[test]
    fn tv_formula() {
        assert_eq!(gaussian_tv_bound(0.0, 1.0).unwrap(), 0.0);
        let v = gaussian_tv_bound(2.0 * 1.959963985, 1.0).unwrap();
        assert!((v - 0.95).abs() < 1e-8);
        assert!(gaussian_tv_bound(1.0, 0.0).is_err());
        let mut last = 0.0;
        for k in 1..50 {
            let v = gaussian_tv_bound(k as f64 * 0.2, 0.7).unwrap();
            assert!(v > last && v < 1.0);
            last = v;
        }
    }

    #[test]
    fn white_noise_shape_and_errors() {
        let theta = CoefficientVector::harmonic(2, 1, 1).unwrap();
        let obs = simulate_white_noise(&theta, 2.0, 16, 10, 3).unwrap();
        assert_eq!(obs.truncation(), 10);
        assert_eq!(obs.noise, 0.5);
        assert!(simulate_white_noise(&theta, 2.0, 16, 3, 3).is_err());
        assert!(simulate_white_noise(&theta, 2.0, 0, 10, 3).is_err());
        assert_eq!(obs, simulate_white_noise(&theta, 2.0, 16, 10, 3).unwrap());
    }

    #[test]
    fn transfers_are_exact_without_noise() {
        let design = resolve_design("sf020.00222", 2, None).unwrap();
        let frame = DiscreteFrame::new(design.clone(), 10).unwrap();
        let mut rng = substream(2, "t", 0);
        let c = CoefficientVector::from_vec(2, 10, standard_normal_vec(&mut rng, 121)).unwrap();
        let z = simulate_regression(&c, &design, 0.0, 0).unwrap();
        let y = to_white_noise(&z, &frame, 200, 9).unwrap();
        assert_eq!(y.truncation(), 200);
        for j in 0..121 {
            assert!((y.y[j] - c.as_slice()[j]).abs() < 1e-10);
        }
        assert!(y.y[121..].iter().all(|v| *v == 0.0));
        let back = to_regression(&y, &frame, 4).unwrap();
        for (a, b) in back.z.iter().zip(&z.z) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn complement_noise_vanishes_for_square_frames() {
        let design = builtin_design("polygon(9)").unwrap();
        let frame = DiscreteFrame::new(design, 4).unwrap();
        let obs = SequenceObservation { y: vec![0.3; 9], noise: 1.0, d: 1 };
        let z = to_regression(&obs, &frame, 5).unwrap();
        let interp = frame.fitted_values(&CoefficientVector::from_vec(1, 4, vec![0.3; 9]).unwrap()).unwrap();
        for (a, b) in z.z.iter().zip(&interp) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn shifting_by_a_basis_function_shifts_one_coordinate() {
        let design = builtin_design("icosahedron").unwrap();
        let frame = DiscreteFrame::new(design.clone(), 2).unwrap();
        let z = regression_from_mean(&[0.0; 12], 1.0, 3, 0).unwrap();
        let y5 = CoefficientVector::harmonic(2, 2, 1).unwrap();
        let shifted = RegressionSample {
            z: z.z.iter().zip(design.points().values(&y5)).map(|(a, b)| a + 2.0 * b).collect(),
            sigma: 1.0,
        };
        let a = to_white_noise(&z, &frame, 9, 1).unwrap();
        let b = to_white_noise(&shifted, &frame, 9, 1).unwrap();
        for j in 0..9 {
            let expect = if j == 4 { 2.0 } else { 0.0 };
            assert!((b.y[j] - a.y[j] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_output() {
        let mut buf = Vec::new();
        write_replications_csv(&mut buf, "z", &[vec![1.0, 0.1], vec![-2.5, 1e-300]]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "replication,z1,z2\n0,1.0000000000000000e0,1.0000000000000001e-1\n1,-2.5000000000000000e0,1.0000000000000000e-300\n"
        );
    }
}
