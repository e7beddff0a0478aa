//! Spherical designs and cubature rules.
//!
//! A set `X = {x_1, …, x_n}` is a spherical t-design when the equal-weight
//! average over `X` integrates every polynomial of degree ≤ t exactly. The
//! strength is checked through the zonal defects
//!
//! ```text
//! A_ℓ(X) = n⁻² Σ_{i,i'} N_ℓ^d P_ℓ^{(d+1)}(⟨x_i, x_i'⟩) = Σ_m (n⁻¹ Σ_i Y_{ℓ,m}(x_i))²
//! ```
//!
//! which vanish exactly when the equal-weight rule integrates `H_ℓ^d`.

mod catalog;
#[cfg(feature = "fetch")]
pub mod fetch;
mod mz;
mod parse;
mod reference;

pub use catalog::{builtin_design, bundled_design_names, bundled_file, resolve_design, BUILTIN_NAMES};
pub use mz::mz_ratio;
pub use parse::{parse_design_file, read_design_file};
pub use reference::{gauss_legendre, reference_rule};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::dim_eigenspace;
use crate::sphere::{dot_unchecked, PointSet, SphereFunction, SpherePoint};
use crate::sum;

/// Default tolerance on the zonal defects.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Points with positive weights summing to one.
#[derive(Debug, Clone)]
pub struct CubatureRule {
    points: PointSet,
    weights: Vec<f64>,
}

impl CubatureRule {
    pub fn new(points: PointSet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != points.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0)) {
            return Err(Error::InvalidArgument(format!("cubature weight {w} is not positive")));
        }
        let total = sum::pairwise_sum(&weights);
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "cubature weights sum to {total}, not 1"
            )));
        }
        Ok(Self { points, weights })
    }

    /// The equal-weight rule `w_i = 1/n`.
    pub fn equal_weight(points: PointSet) -> Self {
        let n = points.len();
        Self {
            points,
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    /// `Σ_i w_i f(x_i)` for `f` evaluated at the rule points.
    pub fn integrate_values(&self, values: &[f64]) -> Result<f64> {
        cubature_integrate(self, values)
    }

    /// `Σ_i w_i f(x_i)`.
    pub fn integrate<F: SphereFunction + ?Sized + Sync>(&self, f: &F) -> f64 {
        let pts = self.points.points();
        sum::par_sum(pts.len(), |i| self.weights[i] * f.eval(&pts[i]))
    }
}

/// `Σ_i w_i f(x_i)`.
pub fn cubature_integrate(rule: &CubatureRule, values: &[f64]) -> Result<f64> {
    if values.len() != rule.len() {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            found: values.len(),
        });
    }
    let terms: Vec<f64> = rule.weights.iter().zip(values).map(|(w, v)| w * v).collect();
    Ok(sum::pairwise_sum(&terms))
}

/// Outcome of a strength check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignCheck {
    pub verified: bool,
    pub max_defect: f64,
    /// Degree attaining `max_defect`, if `t ≥ 1`.
    pub worst_degree: Option<usize>,
    /// `A_ℓ` for `ℓ = 1..=t`.
    pub per_degree: Vec<f64>,
}

/// A point set claimed to be a spherical t-design.
#[derive(Debug, Clone)]
pub struct SphericalDesign {
    points: PointSet,
    strength: usize,
    check: Option<DesignCheck>,
}

impl SphericalDesign {
    /// Wraps a point set with a claimed strength, without checking it.
    pub fn new(points: PointSet, strength: usize) -> Self {
        Self {
            points,
            strength,
            check: None,
        }
    }

    /// Runs [`verify_design`] at the claimed strength and records the result.
    pub fn verified(mut self, tol: f64) -> Self {
        self.check = Some(verify_design(&self.points, self.strength, tol));
        self
    }

    /// Like [`SphericalDesign::verified`] but fails when the check does.
    pub fn require_verified(self, tol: f64) -> Result<Self> {
        let design = self.verified(tol);
        let check = design.check.as_ref().expect("just checked");
        if !check.verified {
            return Err(Error::NotADesign {
                strength: design.strength,
                degree: check.worst_degree.unwrap_or(design.strength),
                defect: check.max_defect,
            });
        }
        Ok(design)
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn check(&self) -> Option<&DesignCheck> {
        self.check.as_ref()
    }

    pub fn is_verified(&self) -> bool {
        self.check.as_ref().is_some_and(|c| c.verified)
    }

    /// The associated equal-weight cubature rule.
    pub fn rule(&self) -> CubatureRule {
        CubatureRule::equal_weight(self.points.clone())
    }
}

/// Zonal defect `A_ℓ` of the equal-weight rule on `points`.
pub fn strength_defect(points: &PointSet, degree: usize) -> f64 {
    if degree == 0 {
        return 0.0;
    }
    strength_defects(points, degree)[degree - 1]
}

/// `A_ℓ` for `ℓ = 1..=max_degree` in a single pass over all pairs.
pub fn strength_defects(points: &PointSet, max_degree: usize) -> Vec<f64> {
    if max_degree == 0 {
        return Vec::new();
    }
    let d = points.dim();
    let pts = points.points();
    let n = pts.len();
    let (a, b) = gegenbauer_coefficients(d, max_degree);
    let off = sum::par_sum_vec(n, max_degree + 1, |i, acc| {
        accumulate_row(&pts[i], &pts[i + 1..], &a, &b, acc);
    });
    let n2 = (n as f64) * (n as f64);
    (1..=max_degree)
        .map(|l| dim_eigenspace(d, l) as f64 * (n as f64 + 2.0 * off[l]) / n2)
        .collect()
}

/// Defects of a weighted rule, `A_ℓ = Σ_{i,i'} w_i w_i' N_ℓ P_ℓ(⟨x_i, x_i'⟩)`
/// for `ℓ = 1..=max_degree`; all vanish iff the rule is exact on `P_t`.
pub fn weighted_defects(rule: &CubatureRule, max_degree: usize) -> Vec<f64> {
    if max_degree == 0 {
        return Vec::new();
    }
    let d = rule.dim();
    let pts = rule.points().points();
    let w = rule.weights();
    let (a, b) = gegenbauer_coefficients(d, max_degree);
    let sums = sum::par_sum_vec(pts.len(), max_degree + 1, |i, acc| {
        let mut p = vec![0.0; max_degree + 1];
        for j in i..pts.len() {
            let t = dot_unchecked(&pts[i], &pts[j]);
            let f = if i == j { w[i] * w[j] } else { 2.0 * w[i] * w[j] };
            p[0] = 1.0;
            p[1] = t;
            for l in 2..=max_degree {
                p[l] = a[l] * t * p[l - 1] - b[l] * p[l - 2];
            }
            acc.iter_mut().zip(&p).for_each(|(a, p)| *a += f * p);
        }
    });
    (1..=max_degree)
        .map(|l| dim_eigenspace(d, l) as f64 * sums[l])
        .collect()
}

/// Recurrence coefficients `p_ℓ = a_ℓ t p_{ℓ-1} - b_ℓ p_{ℓ-2}` of the
/// normalized Gegenbauer polynomials on S^d.
fn gegenbauer_coefficients(d: usize, max_degree: usize) -> (Vec<f64>, Vec<f64>) {
    let dm = d as f64;
    let mut a = vec![0.0; max_degree + 1];
    let mut b = vec![0.0; max_degree + 1];
    for l in 2..=max_degree {
        let lf = l as f64;
        a[l] = (2.0 * lf + dm - 3.0) / (lf + dm - 2.0);
        b[l] = (lf - 1.0) / (lf + dm - 2.0);
    }
    (a, b)
}

const LANES: usize = 8;

/// Adds `Σ_{y ∈ others} P_ℓ(⟨x, y⟩)` into `acc[ℓ]`, eight pairs at a time.
fn accumulate_row(x: &SpherePoint, others: &[SpherePoint], a: &[f64], b: &[f64], acc: &mut [f64]) {
    let max_degree = acc.len() - 1;
    for chunk in others.chunks(LANES) {
        let mut t = [0.0; LANES];
        let mut live = [0.0; LANES];
        for (k, y) in chunk.iter().enumerate() {
            t[k] = dot_unchecked(x, y);
            live[k] = 1.0;
        }
        let mut p0 = live;
        let mut p1 = t;
        acc[0] += p0.iter().sum::<f64>();
        acc[1] += p1.iter().sum::<f64>();
        for l in 2..=max_degree {
            let (al, bl) = (a[l], b[l]);
            let mut s = 0.0;
            for k in 0..LANES {
                let p = al * t[k] * p1[k] - bl * p0[k];
                p0[k] = p1[k];
                p1[k] = p;
                s += p;
            }
            acc[l] += s;
        }
    }
}

/// Checks exactness of the equal-weight rule on `P_t^d` via `max_ℓ A_ℓ ≤ tol`.
pub fn verify_design(points: &PointSet, strength: usize, tol: f64) -> DesignCheck {
    let per_degree = strength_defects(points, strength);
    let (worst_degree, max_defect) = per_degree
        .iter()
        .enumerate()
        .fold((None, 0.0_f64), |(wd, m), (i, &a)| {
            if wd.is_none() || a > m {
                (Some(i + 1), a)
            } else {
                (wd, m)
            }
        });
    DesignCheck {
        verified: max_defect <= tol,
        max_defect,
        worst_degree,
        per_degree,
    }
}
