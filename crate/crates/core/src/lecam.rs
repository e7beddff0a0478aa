//! Evaluation of the two Le Cam distance bound terms over function
//! families, and rate studies across designs of growing size.
//!
//! For a family Θ and the hyperinterpolant `f̃_m`,
//!
//! ```text
//! Δ₁ ≤ 1 − 2Φ(−(2σ)⁻¹ sup_Θ √(Σ_i (f̃_m(x_i) − f(x_i))²)),
//! Δ₂ = 1 − 2Φ(−(√n/2σ) sup_Θ ‖f − f̃_m‖_{L²}).
//! ```
//!
//! The supremum over an infinite ball is not computable; families here are
//! finite (random draws plus extremal witnesses), so every reported value is
//! an empirical supremum, i.e. a lower approximation.

use rand::RngCore;
use serde::Serialize;

use crate::approx::{hyperinterpolate, l2_error, residual_at_nodes, DiscreteFrame};
use crate::designs::{CubatureRule, SphericalDesign};
use crate::error::{Error, Result};
use crate::experiments::gaussian_tv_bound;
use crate::harmonics::{eval_basis, CoefficientVector};
use crate::needlets::{
    empirical_needlet_harmonics, needlet_coeffs_from_harmonics, NeedletFilter, NeedletSystem, BUNDLED_MAX_LEVEL,
};
use crate::rng::{standard_normal_vec, substream};
use crate::spaces::{besov_norm, make_sobolev_function, Profile, SmoothnessSpec};
use crate::sphere::SphereFunction;

fn check_family<T>(family: &[T]) -> Result<()> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("the function family is empty".into()));
    }
    Ok(())
}

/// `sup_Θ √(Σ_i (f̃_m(x_i) − f(x_i))²)` over the family.
pub fn sup_residual<F: SphereFunction + Sync>(family: &[F], frame: &DiscreteFrame) -> Result<f64> {
    check_family(family)?;
    family
        .iter()
        .map(|f| residual_at_nodes(frame, &frame.points().values(f)))
        .try_fold(0.0_f64, |m, r| r.map(|r| m.max(r)))
}

/// `sup_Θ ‖f − f̃_m‖_{L²}` with the integral taken by `reference`.
pub fn sup_l2_error<F: SphereFunction + Sync>(family: &[F], frame: &DiscreteFrame, reference: &CubatureRule) -> Result<f64> {
    check_family(family)?;
    family
        .iter()
        .map(|f| l2_error(frame, f, reference))
        .try_fold(0.0_f64, |m, r| r.map(|r| m.max(r)))
}

/// The Δ₁ bound `1 − 2Φ(−sup residual / (2σ))`.
pub fn delta1_bound<F: SphereFunction + Sync>(family: &[F], frame: &DiscreteFrame, sigma: f64) -> Result<f64> {
    gaussian_tv_bound(sup_residual(family, frame)?, sigma)
}

/// The Δ₂ bound `1 − 2Φ(−√n sup ‖f − f̃_m‖ / (2σ))`.
pub fn delta2_bound<F: SphereFunction + Sync>(
    family: &[F],
    frame: &DiscreteFrame,
    sigma: f64,
    reference: &CubatureRule,
) -> Result<f64> {
    let n = frame.n() as f64;
    gaussian_tv_bound(n.sqrt() * sup_l2_error(family, frame, reference)?, sigma)
}

/// One design's row of a rate study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    /// Design size `n`.
    pub n: usize,
    /// Design strength `t`.
    pub t: usize,
    /// Fit degree `L` (Sobolev) or maximal level `J` (Besov).
    pub resolution: usize,
    /// Empirical `sup √Σ_i (f̃(x_i) − f(x_i))²`.
    pub sup_residual: f64,
    /// Empirical `sup ‖f − f̃‖_{L²}`.
    pub sup_l2: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// `Δ₁ + Δ₂`.
    pub total: f64,
    /// `σ⁻¹ (sup residual + √n sup ‖f − f̃‖)`, the argument scale before Φ.
    pub pre_phi: f64,
    /// Analytic envelope `K σ⁻¹ √n · rate · R` with the constant `K`
    /// fitted so the envelope touches the largest row.
    pub envelope: f64,
}

/// Table plus least-squares slope of `ln pre_phi` against `ln n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateStudy {
    pub rows: Vec<RateRow>,
    pub slope: f64,
    pub intercept: f64,
    pub expected_slope: f64,
    pub envelope_constant: f64,
}

/// Ordinary least squares `y ≈ a + b x`; returns `(b, a)`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points of equal length".into()));
    }
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all abscissae coincide".into()));
    }
    let b = sxy / sxx;
    Ok((b, my - b * mx))
}

fn member_seed(seed: u64, label: &str, index: u64) -> u64 {
    substream(seed, label, index).next_u64()
}

fn finish(rows: Vec<RowParts>, sigma: f64, radius: f64, expected_slope: f64) -> Result<RateStudy> {
    if rows.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a rate study needs at least 3 designs, got {}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(rows.len());
    for p in &rows {
        let n = p.n as f64;
        out.push(RateRow {
            n: p.n,
            t: p.t,
            resolution: p.resolution,
            sup_residual: p.sup_residual,
            sup_l2: p.sup_l2,
            delta1: gaussian_tv_bound(p.sup_residual, sigma)?,
            delta2: gaussian_tv_bound(n.sqrt() * p.sup_l2, sigma)?,
            total: 0.0,
            pre_phi: (p.sup_residual + n.sqrt() * p.sup_l2) / sigma,
            envelope: 0.0,
        });
    }
    // K such that K σ⁻¹ √n rate R touches the worst row from above
    let shape: Vec<f64> = rows.iter().map(|p| (p.n as f64).sqrt() * p.rate * radius / sigma).collect();
    let k = out
        .iter()
        .zip(&shape)
        .map(|(r, s)| r.pre_phi / s)
        .fold(0.0, f64::max);
    for (r, s) in out.iter_mut().zip(&shape) {
        r.total = r.delta1 + r.delta2;
        r.envelope = k * s;
    }
    let xs: Vec<f64> = out.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = out.iter().map(|r| r.pre_phi.ln()).collect();
    let (slope, intercept) = ols_slope(&xs, &ys)?;
    Ok(RateStudy {
        rows: out,
        slope,
        intercept,
        expected_slope,
        envelope_constant: k,
    })
}

struct RowParts {
    n: usize,
    t: usize,
    resolution: usize,
    sup_residual: f64,
    sup_l2: f64,
    /// Theoretical decay factor (`L^{−s}` or `2^{−J(s−d/r+d/2)}`).
    rate: f64,
}

/// Sobolev-ball rate study on designs with `L_k = ⌊t_k / 2⌋`.
///
/// The family on each design is `family_size` random-profile draws
/// (truncated at degree `4L`) plus the extremal witness at degree `L + 1`,
/// all on the sphere of radius `R`. Errors are exact: node residuals from
/// the fit, `L²` errors by Parseval. The fitted slope should be close to
/// `−(s/d − 1/2)`.
pub fn sobolev_rate_study(
    designs: &[SphericalDesign],
    s: f64,
    radius: f64,
    sigma: f64,
    family_size: usize,
    seed: u64,
) -> Result<RateStudy> {
    let d = designs.first().map_or(2, SphericalDesign::dim);
    SmoothnessSpec::sobolev(s, radius, d)?;
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("σ must be positive, got {sigma}")));
    }
    if designs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a rate study needs at least 3 designs, got {}",
            designs.len()
        )));
    }
    let rows = designs
        .iter()
        .map(|design| sobolev_parts(design, s, radius, family_size, seed))
        .collect::<Result<Vec<_>>>()?;
    finish(rows, sigma, radius, -(s / d as f64 - 0.5))
}

fn sobolev_parts(design: &SphericalDesign, s: f64, radius: f64, family_size: usize, seed: u64) -> Result<RowParts> {
    let d = design.dim();
    let l = design.strength() / 2;
    let frame = DiscreteFrame::new(design.clone(), l)?;
    let l_max = 4 * l.max(1);
    let mut family = Vec::with_capacity(family_size + 1);
    for i in 0..family_size {
        let sd = member_seed(seed, "sobolev_rate/random", i as u64);
        family.push(make_sobolev_function(d, s, radius, l_max, sd, Profile::Random)?);
    }
    family.push(make_sobolev_function(d, s, radius, l_max, seed, Profile::Extremal(l))?);
    let (res, l2) = coefficient_family_errors(&family, &frame)?;
    Ok(RowParts {
        n: design.len(),
        t: design.strength(),
        resolution: l,
        sup_residual: res,
        sup_l2: l2,
        rate: (l.max(1) as f64).powf(-s),
    })
}

/// Δ₁/Δ₂ evaluation on one design over the Sobolev family used by
/// [`sobolev_rate_study`] (`L = ⌊t/2⌋`).
pub fn sobolev_bound(design: &SphericalDesign, s: f64, radius: f64, sigma: f64, family_size: usize, seed: u64) -> Result<RateRow> {
    SmoothnessSpec::sobolev(s, radius, design.dim())?;
    single_row(sobolev_parts(design, s, radius, family_size, seed)?, sigma)
}

/// Δ₁/Δ₂ evaluation on one design at level `J` over the Besov family used
/// by [`besov_rate_study`].
pub fn besov_bound(
    design: &SphericalDesign,
    j_max: usize,
    spec: &SmoothnessSpec,
    system: &NeedletSystem,
    sigma: f64,
    family_size: usize,
    seed: u64,
) -> Result<RateRow> {
    spec.require_besov()?;
    let random = besov_random_family(spec, system, family_size, seed)?;
    single_row(besov_parts(design, j_max, spec, system, &random, seed)?, sigma)
}

fn single_row(parts: RowParts, sigma: f64) -> Result<RateRow> {
    let n = parts.n as f64;
    let pre_phi = (parts.sup_residual + n.sqrt() * parts.sup_l2) / sigma;
    let delta1 = gaussian_tv_bound(parts.sup_residual, sigma)?;
    let delta2 = gaussian_tv_bound(n.sqrt() * parts.sup_l2, sigma)?;
    Ok(RateRow {
        n: parts.n,
        t: parts.t,
        resolution: parts.resolution,
        sup_residual: parts.sup_residual,
        sup_l2: parts.sup_l2,
        delta1,
        delta2,
        total: delta1 + delta2,
        pre_phi,
        envelope: pre_phi,
    })
}

/// Exact `(sup residual, sup L² error)` of the hyperinterpolant over a
/// family of coefficient vectors.
pub fn coefficient_family_errors(family: &[CoefficientVector], frame: &DiscreteFrame) -> Result<(f64, f64)> {
    check_family(family)?;
    let mut res = 0.0_f64;
    let mut l2 = 0.0_f64;
    for f in family {
        let vals = node_values(f, frame)?;
        let fit = hyperinterpolate(frame, &vals)?;
        let fitted = frame.fitted_values(&fit)?;
        res = res.max(euclid(&fitted, &vals));
        l2 = l2.max(f.l2_distance(&fit));
    }
    Ok((res, l2))
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    let sq: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).collect();
    crate::sum::pairwise_sum(&sq).sqrt()
}

fn node_values(f: &CoefficientVector, frame: &DiscreteFrame) -> Result<Vec<f64>> {
    frame
        .points()
        .iter()
        .map(|x| {
            let b = eval_basis(f.dim(), f.max_degree(), x)?;
            Ok(b.iter().zip(f.as_slice()).map(|(y, c)| y * c).sum())
        })
        .collect()
}

/// Largest degree fully resolved by needlet levels `0..=j_max`: `2^{j_max−1}`.
fn resolved_degree(j_max: usize) -> usize {
    1usize << j_max.saturating_sub(1)
}

/// Besov-ball rate study using the empirical needlet approximation `f̃_J`.
///
/// Each entry pairs a design with its level `J` (requires `t ≥ 3·2^J`). The
/// family holds `family_size` random draws (Sobolev-type decay, truncated at
/// the largest degree the needlet `system` resolves) and single-degree
/// witnesses at every `ℓ ∈ [2^{J−1}, 2^{J+1}]`, each rescaled to Besov norm
/// `R`. Expected slope: `−s/d + 1/r`.
pub fn besov_rate_study(
    designs: &[(SphericalDesign, usize)],
    spec: &SmoothnessSpec,
    system: &NeedletSystem,
    sigma: f64,
    family_size: usize,
    seed: u64,
) -> Result<RateStudy> {
    spec.require_besov()?;
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("σ must be positive, got {sigma}")));
    }
    if designs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a rate study needs at least 3 designs, got {}",
            designs.len()
        )));
    }
    let d = spec.d;
    if system.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: system.dim() });
    }
    let random = besov_random_family(spec, system, family_size, seed)?;
    let rows = designs
        .iter()
        .map(|(design, j)| besov_parts(design, *j, spec, system, &random, seed))
        .collect::<Result<Vec<_>>>()?;
    finish(rows, sigma, spec.radius, -spec.s / d as f64 + 1.0 / spec.r)
}

/// The standard needlet system used to normalize Besov families whose
/// finest level is `j_max`: two levels deeper, so that the witnesses up to
/// degree `2^{J+1}` are fully resolved, capped at what is bundled.
pub fn besov_system(d: usize, j_max: usize) -> Result<NeedletSystem> {
    let depth = if d == 2 { (j_max + 2).min(BUNDLED_MAX_LEVEL).max(j_max) } else { j_max + 2 };
    NeedletSystem::standard(d, depth)
}

fn besov_normalizer<'a>(
    spec: &'a SmoothnessSpec,
    system: &'a NeedletSystem,
) -> impl Fn(CoefficientVector) -> Result<CoefficientVector> + 'a {
    move |c| {
        let beta = needlet_coeffs_from_harmonics(&c, system, &NeedletFilter, system.max_level())?;
        let norm = besov_norm(&beta, spec);
        if norm == 0.0 {
            return Err(Error::InvalidArgument("degenerate family member".into()));
        }
        Ok(c.scaled(spec.radius / norm))
    }
}

fn besov_random_family(
    spec: &SmoothnessSpec,
    system: &NeedletSystem,
    family_size: usize,
    seed: u64,
) -> Result<Vec<CoefficientVector>> {
    let d = spec.d;
    if system.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: system.dim() });
    }
    let top = resolved_degree(system.max_level());
    let normalize = besov_normalizer(spec, system);
    // Sobolev-type decay just above the critical smoothness for the draw;
    // the Besov normalization fixes the radius
    let s_draw = spec.s.max(d as f64 / 2.0 + 0.01);
    (0..family_size)
        .map(|i| {
            let sd = member_seed(seed, "besov_rate/random", i as u64);
            normalize(make_sobolev_function(d, s_draw, 1.0, top, sd, Profile::Random)?)
        })
        .collect()
}

fn besov_parts(
    design: &SphericalDesign,
    j: usize,
    spec: &SmoothnessSpec,
    system: &NeedletSystem,
    random: &[CoefficientVector],
    seed: u64,
) -> Result<RowParts> {
    let d = spec.d;
    let required = 3 * (1usize << j);
    if design.strength() < required {
        return Err(Error::InsufficientStrength { required, available: design.strength() });
    }
    if design.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: design.dim() });
    }
    let top = resolved_degree(system.max_level());
    let lo = resolved_degree(j);
    let hi = (1usize << (j + 1)).min(top);
    let normalize = besov_normalizer(spec, system);
    let mut family = random.to_vec();
    for l in lo..=hi {
        let mut c = CoefficientVector::zeros(d, hi);
        let mut rng = substream(seed, "besov_rate/witness", l as u64);
        let block = c.degree_block_mut(l);
        let g = standard_normal_vec(&mut rng, block.len());
        block.copy_from_slice(&g);
        family.push(normalize(c)?);
    }
    let (res, l2) = needlet_family_errors(&family, design, &NeedletFilter, j)?;
    Ok(RowParts {
        n: design.len(),
        t: design.strength(),
        resolution: j,
        sup_residual: res,
        sup_l2: l2,
        rate: 2f64.powf(-(j as f64) * spec.level_exponent()),
    })
}

/// Exact `(sup residual, sup L² error)` of `f̃_J` over a coefficient family.
pub fn needlet_family_errors(
    family: &[CoefficientVector],
    design: &SphericalDesign,
    h: &NeedletFilter,
    j_max: usize,
) -> Result<(f64, f64)> {
    check_family(family)?;
    let mut res = 0.0_f64;
    let mut l2 = 0.0_f64;
    let frame_points = design.points();
    for f in family {
        let vals = frame_points.values(f);
        let approx = empirical_needlet_harmonics(&vals, design, h, j_max)?;
        let fitted = frame_points.values(&approx);
        res = res.max(euclid(&fitted, &vals));
        l2 = l2.max(f.l2_distance(&approx));
    }
    Ok((res, l2))
}
