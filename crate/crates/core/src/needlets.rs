//! Needlets: the smooth filter `h`, the truncation filter `H`, filtered
//! zonal kernels, needlet systems over per-level cubature rules, and the
//! truncated and empirical needlet approximations.
//!
//! With `τ_j = 2^{j−1}` and a level rule `(ξ_{j,k}, w_{j,k})` exact on
//! `P_{2^{j+1}−1}`,
//!
//! ```text
//! ψ_{j,k}(x) = √w_{j,k} κ_{τ_j,h}(x, ξ_{j,k}),
//! κ_{τ,g}(x, y) = Σ_ℓ g(ℓ/τ) N_ℓ P_ℓ(⟨x, y⟩)   (κ ≡ 1 for τ < 1),
//! f_J = Σ_{j ≤ J} Σ_k β_{j,k} ψ_{j,k} = ∫ f(y) κ_{2^{J−1},H}(·, y) dμ(y).
//! ```

use rayon::prelude::*;

use crate::designs::{builtin_design, resolve_design, weighted_defects, CubatureRule, SphericalDesign};
use crate::error::{Error, Result};
use crate::harmonics::{dim_eigenspace, eval_basis, CoefficientVector};
use crate::sphere::{dot, dot_unchecked, SphereFunction, SpherePoint};
use crate::sum;

/// Largest level available from the bundled S² rules.
pub const BUNDLED_MAX_LEVEL: usize = 6;

/// Exactness tolerance for user-supplied level rules.
pub const LEVEL_TOL: f64 = 1e-9;

/// The C^∞ filter `h` with `supp h = [1/2, 2]` and `h²(t) + h²(2t) = 1` on
/// `[1/2, 1]`, built from the smooth step `s(u) = φ(u)/(φ(u)+φ(1−u))`,
/// `φ(u) = e^{−1/u}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NeedletFilter;

fn bump(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Smooth step from 0 (u ≤ 0) to 1 (u ≥ 1).
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = bump(u);
        a / (a + bump(1.0 - u))
    }
}

impl NeedletFilter {
    /// `h(t)`.
    pub fn h(&self, t: f64) -> f64 {
        use std::f64::consts::FRAC_PI_2;
        if !(t > 0.5 && t < 2.0) {
            0.0
        } else if t <= 1.0 {
            (FRAC_PI_2 * smooth_step(2.0 * t - 1.0)).sin()
        } else {
            (FRAC_PI_2 * smooth_step(t - 1.0)).cos()
        }
    }

    /// `H(t)`: 1 on `[0, 1)`, `h²(t)` beyond.
    pub fn big_h(&self, t: f64) -> f64 {
        if t < 1.0 {
            1.0
        } else {
            let v = self.h(t);
            v * v
        }
    }
}

pub fn build_filter() -> NeedletFilter {
    NeedletFilter
}

/// `H(t)` for `t ≥ 0`.
pub fn filter_big_h(h: &NeedletFilter, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("H is defined on [0, ∞), got {t}")));
    }
    Ok(h.big_h(t))
}

/// A finite zonal series `Σ_ℓ c_ℓ P_ℓ^{(d+1)}(t)`.
#[derive(Debug, Clone)]
pub struct ZonalSeries {
    coeffs: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl ZonalSeries {
    pub fn new(d: usize, coeffs: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("sphere dimension must be at least 1".into()));
        }
        let top = coeffs.len().max(2);
        let dm = d as f64;
        let mut a = vec![0.0; top];
        let mut b = vec![0.0; top];
        for l in 2..top {
            let lf = l as f64;
            a[l] = (2.0 * lf + dm - 3.0) / (lf + dm - 2.0);
            b[l] = (lf - 1.0) / (lf + dm - 2.0);
        }
        Ok(Self { coeffs, a, b })
    }

    /// The kernel `κ_{τ,g}` with `g` supported in `[0, 2]`: coefficients
    /// `g(ℓ/τ) N_ℓ` for `ℓ ≤ ⌈2τ⌉`, or the constant 1 when `τ < 1`.
    pub fn filtered<G: Fn(f64) -> f64>(d: usize, tau: f64, g: G) -> Result<Self> {
        if !(tau >= 0.0) {
            return Err(Error::InvalidArgument(format!("τ must be nonnegative, got {tau}")));
        }
        if tau < 1.0 {
            return Self::new(d, vec![1.0]);
        }
        let top = (2.0 * tau).ceil() as usize;
        let mut coeffs: Vec<f64> = (0..=top)
            .map(|l| g(l as f64 / tau) * dim_eigenspace(d, l) as f64)
            .collect();
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self::new(d, coeffs)
    }

    /// Highest degree with a stored coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        let c = &self.coeffs;
        if c.is_empty() {
            return 0.0;
        }
        let mut acc = c[0];
        if c.len() == 1 {
            return acc;
        }
        let (mut p0, mut p1) = (1.0, t);
        acc += c[1] * t;
        for l in 2..c.len() {
            let p = self.a[l] * t * p1 - self.b[l] * p0;
            p0 = p1;
            p1 = p;
            acc += c[l] * p;
        }
        acc
    }
}

/// `κ_{τ,g}(x, y)` for a filter `g` supported in `[0, 2]`.
pub fn filtered_kernel<G: Fn(f64) -> f64>(
    d: usize,
    tau: f64,
    filter: G,
    x: &SpherePoint,
    y: &SpherePoint,
) -> Result<f64> {
    if x.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.dim() });
    }
    let t = dot(x, y)?;
    Ok(ZonalSeries::filtered(d, tau, filter)?.eval(t))
}

/// `τ_j = 2^{j−1}`.
pub fn level_tau(j: usize) -> f64 {
    0.5 * (1u64 << j) as f64
}

/// Per-level cubature rules `(ξ_{j,k}, w_{j,k})`, level `j` exact on
/// `P_{2^{j+1}−1}`.
#[derive(Debug, Clone)]
pub struct NeedletSystem {
    d: usize,
    levels: Vec<CubatureRule>,
    kernels: Vec<ZonalSeries>,
}

impl NeedletSystem {
    /// Wraps user-supplied rules, checking each level's exactness on
    /// `P_{2^{j+1}−1}` through its weighted zonal defects.
    pub fn from_rules(d: usize, levels: Vec<CubatureRule>) -> Result<Self> {
        for (j, rule) in levels.iter().enumerate() {
            if rule.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: rule.dim() });
            }
            let t = (1usize << (j + 1)) - 1;
            let defects = weighted_defects(rule, t);
            if let Some((l, a)) = defects
                .iter()
                .enumerate()
                .find(|(_, a)| **a > LEVEL_TOL)
            {
                return Err(Error::InvalidArgument(format!(
                    "level {j} rule is not exact at degree {} (defect {a:e})",
                    l + 1
                )));
            }
        }
        Ok(Self::assemble(d, levels))
    }

    fn assemble(d: usize, levels: Vec<CubatureRule>) -> Self {
        let h = NeedletFilter;
        let kernels = (0..levels.len())
            .map(|j| ZonalSeries::filtered(d, level_tau(j), |u| h.h(u)).expect("valid τ"))
            .collect();
        Self { d, levels, kernels }
    }

    /// The standard system for levels `0..=j_max`: regular `2^{j+1}`-gons on
    /// S¹, the bundled antipodal designs `ss(2^{j+1}−1)` on S² (`j ≤ 6`).
    ///
    /// The bundled files are verified by the test suite, not at every
    /// construction.
    pub fn standard(d: usize, j_max: usize) -> Result<Self> {
        let levels = (0..=j_max)
            .map(|j| -> Result<CubatureRule> {
                let t = (1usize << (j + 1)) - 1;
                match d {
                    1 => Ok(builtin_design(&format!("polygon({})", t + 1))?.rule()),
                    2 => Ok(standard_level_design(j)?.rule()),
                    _ => Err(Error::NoExplicitBasis(d)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(d, levels))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, j: usize) -> Result<&CubatureRule> {
        self.levels
            .get(j)
            .ok_or_else(|| Error::OutOfRange(format!("level {j} > {}", self.max_level())))
    }

    /// `N_j`.
    pub fn level_size(&self, j: usize) -> Result<usize> {
        Ok(self.level(j)?.len())
    }

    /// The zonal profile of `κ_{2^{j−1},h}`.
    pub fn kernel(&self, j: usize) -> Result<&ZonalSeries> {
        self.kernels
            .get(j)
            .ok_or_else(|| Error::OutOfRange(format!("level {j} > {}", self.max_level())))
    }

    fn check_level(&self, j: usize) -> Result<()> {
        self.level(j).map(|_| ())
    }
}

/// Bundled S² design used for needlet level `j` (strength `2^{j+1} − 1`).
pub fn standard_level_design(j: usize) -> Result<SphericalDesign> {
    let name = match j {
        0 => "ss001.00002",
        1 => "ss003.00006",
        2 => "ss007.00032",
        3 => "ss015.00122",
        4 => "ss031.00498",
        5 => "ss063.02018",
        6 => "ss127.08192",
        _ => {
            return Err(Error::OutOfRange(format!(
                "no bundled level-{j} rule (levels 0..={BUNDLED_MAX_LEVEL})"
            )))
        }
    };
    resolve_design(name, 2, None)
}

/// Needlet coefficients `β[j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeedletCoefficients {
    beta: Vec<Vec<f64>>,
}

impl NeedletCoefficients {
    pub fn new(beta: Vec<Vec<f64>>) -> Self {
        Self { beta }
    }

    pub fn zeros(sys: &NeedletSystem, j_max: usize) -> Result<Self> {
        Ok(Self {
            beta: (0..=j_max)
                .map(|j| sys.level_size(j).map(|n| vec![0.0; n]))
                .collect::<Result<_>>()?,
        })
    }

    pub fn max_level(&self) -> Option<usize> {
        self.beta.len().checked_sub(1)
    }

    pub fn level(&self, j: usize) -> &[f64] {
        &self.beta[j]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.beta
    }

    pub fn level_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.beta[j]
    }

    /// `ℓ^r` norm of level `j` (`r = ∞` gives the maximum).
    pub fn level_norm(&self, j: usize, r: f64) -> f64 {
        lp_norm(&self.beta[j], r)
    }

    fn check_shape(&self, sys: &NeedletSystem, j_max: usize) -> Result<()> {
        if self.beta.len() != j_max + 1 {
            return Err(Error::LengthMismatch { expected: j_max + 1, found: self.beta.len() });
        }
        for (j, b) in self.beta.iter().enumerate() {
            let n = sys.level_size(j)?;
            if b.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: b.len() });
            }
        }
        Ok(())
    }
}

pub(crate) fn lp_norm(v: &[f64], r: f64) -> f64 {
    if r.is_infinite() {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    } else {
        v.iter().map(|x| x.abs().powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// `ψ_{j,k}(x)`; `k` is 0-based.
pub fn needlet_eval(sys: &NeedletSystem, _h: &NeedletFilter, j: usize, k: usize, x: &SpherePoint) -> Result<f64> {
    let rule = sys.level(j)?;
    let xi = rule
        .points()
        .points()
        .get(k)
        .ok_or_else(|| Error::OutOfRange(format!("needlet index {k} ≥ N_{j} = {}", rule.len())))?;
    let t = dot(x, xi)?;
    Ok(rule.weights()[k].sqrt() * sys.kernels[j].eval(t))
}

/// `β_{j,k} = ∫ f ψ_{j,k} dμ` for `j ≤ J`, the integral taken by `reference`.
///
/// Exact for band-limited `f` when `reference` has degree `≥ deg f + 2^J`.
pub fn needlet_coeffs<F>(
    f: &F,
    sys: &NeedletSystem,
    h: &NeedletFilter,
    j_max: usize,
    reference: &CubatureRule,
) -> Result<NeedletCoefficients>
where
    F: SphereFunction + ?Sized + Sync,
{
    let _ = h;
    sys.check_level(j_max)?;
    if reference.dim() != sys.d {
        return Err(Error::DimensionMismatch { expected: sys.d, found: reference.dim() });
    }
    let ys = reference.points().points();
    let fw: Vec<f64> = ys
        .par_iter()
        .zip(reference.weights())
        .map(|(y, w)| w * f.eval(y))
        .collect();
    let mut beta = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let rule = &sys.levels[j];
        let kernel = &sys.kernels[j];
        let level: Vec<f64> = rule
            .points()
            .points()
            .par_iter()
            .zip(rule.weights())
            .map(|(xi, w)| {
                let s = sum::par_sum(ys.len(), |r| fw[r] * kernel.eval(dot_unchecked(xi, &ys[r])));
                w.sqrt() * s
            })
            .collect();
        beta.push(level);
    }
    Ok(NeedletCoefficients { beta })
}

/// Needlet coefficients of a band-limited `f` from its harmonic
/// coefficients, via `β_{j,k} = √w_{j,k} Σ_ℓ h(ℓ/τ_j) (Π_ℓ f)(ξ_{j,k})`.
pub fn needlet_coeffs_from_harmonics(
    c: &CoefficientVector,
    sys: &NeedletSystem,
    h: &NeedletFilter,
    j_max: usize,
) -> Result<NeedletCoefficients> {
    sys.check_level(j_max)?;
    if c.dim() != sys.d {
        return Err(Error::DimensionMismatch { expected: sys.d, found: c.dim() });
    }
    let mut beta = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let rule = &sys.levels[j];
        let tau = level_tau(j);
        let top = c.max_degree().min(sys.kernels[j].degree());
        // filtered coefficients h(ℓ/τ) θ_{ℓ,m}, or θ_0 alone at level 0
        let mut filtered = c.resized(top);
        for l in 0..=top {
            let g = if tau < 1.0 {
                if l == 0 { 1.0 } else { 0.0 }
            } else {
                h.h(l as f64 / tau)
            };
            filtered.degree_block_mut(l).iter_mut().for_each(|v| *v *= g);
        }
        let level = rule
            .points()
            .points()
            .par_iter()
            .zip(rule.weights())
            .map(|(xi, w)| {
                let b = eval_basis(sys.d, top, xi)?;
                Ok(w.sqrt() * b.iter().zip(filtered.as_slice()).map(|(y, t)| y * t).sum::<f64>())
            })
            .collect::<Result<Vec<f64>>>()?;
        beta.push(level);
    }
    Ok(NeedletCoefficients { beta })
}

/// `f_J(x) = Σ_{j ≤ J} Σ_k β_{j,k} ψ_{j,k}(x)`.
pub fn needlet_reconstruct(
    beta: &NeedletCoefficients,
    sys: &NeedletSystem,
    _h: &NeedletFilter,
    j_max: usize,
    x: &SpherePoint,
) -> Result<f64> {
    sys.check_level(j_max)?;
    beta.check_shape(sys, j_max)?;
    if x.dim() != sys.d {
        return Err(Error::DimensionMismatch { expected: sys.d, found: x.dim() });
    }
    let mut total = 0.0;
    for j in 0..=j_max {
        let rule = &sys.levels[j];
        let pts = rule.points().points();
        let w = rule.weights();
        let kernel = &sys.kernels[j];
        let b = &beta.beta[j];
        total += sum::par_sum(pts.len(), |k| b[k] * w[k].sqrt() * kernel.eval(dot_unchecked(x, &pts[k])));
    }
    Ok(total)
}

/// Kernel form `∫ f(y) κ_{2^{J−1},H}(x, y) dμ(y)` of `f_J`, the integral
/// taken by `reference`.
pub fn kernel_reconstruct<F>(f: &F, h: &NeedletFilter, j_max: usize, reference: &CubatureRule, x: &SpherePoint) -> Result<f64>
where
    F: SphereFunction + ?Sized + Sync,
{
    let d = reference.dim();
    if x.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.dim() });
    }
    let kernel = ZonalSeries::filtered(d, level_tau(j_max), |u| h.big_h(u))?;
    let ys = reference.points().points();
    let w = reference.weights();
    Ok(sum::par_sum(ys.len(), |r| w[r] * f.eval(&ys[r]) * kernel.eval(dot_unchecked(x, &ys[r]))))
}

fn check_empirical(design: &SphericalDesign, f_vals: &[f64], j_max: usize) -> Result<()> {
    let required = 3 * (1usize << j_max);
    if design.strength() < required {
        return Err(Error::InsufficientStrength { required, available: design.strength() });
    }
    if let Some(check) = design.check() {
        if !check.verified {
            return Err(Error::NotADesign {
                strength: design.strength(),
                degree: check.worst_degree.unwrap_or(design.strength()),
                defect: check.max_defect,
            });
        }
    }
    if f_vals.len() != design.len() {
        return Err(Error::LengthMismatch { expected: design.len(), found: f_vals.len() });
    }
    Ok(())
}

/// Empirical needlet approximation `f̃_J(x) = n⁻¹ Σ_i f(x_i) κ_{2^{J−1},H}(x_i, x)`
/// on a design of strength `t ≥ 3·2^J`, evaluated at each point of `xs`.
pub fn empirical_needlet_approx(
    f_vals: &[f64],
    design: &SphericalDesign,
    h: &NeedletFilter,
    j_max: usize,
    xs: &[SpherePoint],
) -> Result<Vec<f64>> {
    check_empirical(design, f_vals, j_max)?;
    let d = design.dim();
    let kernel = ZonalSeries::filtered(d, level_tau(j_max), |u| h.big_h(u))?;
    let nodes = design.points().points();
    let n = nodes.len() as f64;
    xs.par_iter()
        .map(|x| {
            if x.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: x.dim() });
            }
            Ok(sum::par_sum(nodes.len(), |i| f_vals[i] * kernel.eval(dot_unchecked(&nodes[i], x))) / n)
        })
        .collect()
}

/// Harmonic coefficients of `f̃_J`: by the addition theorem
/// `f̃_J = Σ_{ℓ < 2^J} H(ℓ/2^{J−1}) Σ_m ⟨f, Y_{ℓ,m}⟩_n Y_{ℓ,m}` (d ∈ {1, 2}).
pub fn empirical_needlet_harmonics(
    f_vals: &[f64],
    design: &SphericalDesign,
    h: &NeedletFilter,
    j_max: usize,
) -> Result<CoefficientVector> {
    check_empirical(design, f_vals, j_max)?;
    let degree = (1usize << j_max) - 1;
    let frame = crate::approx::DiscreteFrame::new(design.clone(), degree)?;
    let mut c = crate::approx::hyperinterpolate(&frame, f_vals)?;
    let tau = level_tau(j_max);
    for l in 0..=degree {
        let g = if tau < 1.0 { 1.0 } else { h.big_h(l as f64 / tau) };
        c.degree_block_mut(l).iter_mut().for_each(|v| *v *= g);
    }
    Ok(c)
}

/// Empirical needlet coefficients `β̃_{j,k} = ⟨f, ψ_{j,k}⟩_n` on a design
/// of strength `t ≥ 3·2^J`.
pub fn empirical_needlet_coeffs(
    f_vals: &[f64],
    design: &SphericalDesign,
    sys: &NeedletSystem,
    _h: &NeedletFilter,
    j_max: usize,
) -> Result<NeedletCoefficients> {
    check_empirical(design, f_vals, j_max)?;
    sys.check_level(j_max)?;
    if design.dim() != sys.d {
        return Err(Error::DimensionMismatch { expected: sys.d, found: design.dim() });
    }
    let nodes = design.points().points();
    let n = nodes.len() as f64;
    let beta = (0..=j_max)
        .map(|j| {
            let rule = &sys.levels[j];
            let kernel = &sys.kernels[j];
            rule.points()
                .points()
                .par_iter()
                .zip(rule.weights())
                .map(|(xi, w)| {
                    w.sqrt() * sum::par_sum(nodes.len(), |i| f_vals[i] * kernel.eval(dot_unchecked(xi, &nodes[i]))) / n
                })
                .collect()
        })
        .collect();
    Ok(NeedletCoefficients { beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::reference_rule;

    #[test]
    fn filter_support_and_values() {
        let h = build_filter();
        assert_eq!(h.h(0.4), 0.0);
        assert_eq!(h.h(0.5), 0.0);
        assert_eq!(h.h(2.0), 0.0);
        assert_eq!(h.h(2.5), 0.0);
        assert!((h.h(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(filter_big_h(&h, 0.7).unwrap(), 1.0);
        assert_eq!(filter_big_h(&h, 2.0).unwrap(), 0.0);
        assert!((filter_big_h(&h, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(filter_big_h(&h, -0.1).is_err());
    }

    #[test]
    fn filter_identities() {
        let h = build_filter();
        for i in 0..=1000 {
            let t = 0.5 + 0.5 * i as f64 / 1000.0;
            assert!((h.h(t).powi(2) + h.h(2.0 * t).powi(2) - 1.0).abs() < 1e-12);
        }
        let s: f64 = (0..=20).map(|j| h.h(3.3 / 2f64.powi(j)).powi(2)).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_below_one_is_constant() {
        let x = SpherePoint::from_polar(0.3, 1.0);
        let y = SpherePoint::from_polar(2.0, -1.0);
        let h = build_filter();
        assert_eq!(filtered_kernel(2, 0.5, |u| h.h(u), &x, &y).unwrap(), 1.0);
        let a = filtered_kernel(2, 4.0, |u| h.h(u), &x, &y).unwrap();
        let b = filtered_kernel(2, 4.0, |u| h.h(u), &y, &x).unwrap();
        assert!((a - b).abs() < 1e-14);
        assert!(filtered_kernel(1, 4.0, |u| h.h(u), &x, &y).is_err());
    }

    #[test]
    fn truncation_kernel_reproduces_low_degrees() {
        let h = build_filter();
        let reference = reference_rule(2, 20).unwrap();
        let c = {
            let mut rng = crate::rng::substream(3, "t", 0);
            CoefficientVector::from_vec(2, 3, crate::rng::standard_normal_vec(&mut rng, 16)).unwrap()
        };
        // H(ℓ/4) = 1 for ℓ ≤ 3
        let x = SpherePoint::from_polar(1.1, 0.4);
        let v = kernel_reconstruct(&c, &h, 3, &reference, &x).unwrap();
        assert!((v - c.eval(&x)).abs() < 1e-9);
    }

    #[test]
    fn level_zero_needlets_are_constant() {
        let sys = NeedletSystem::standard(2, 2).unwrap();
        let h = build_filter();
        let x = SpherePoint::from_polar(0.7, 0.2);
        let w0 = sys.level(0).unwrap().weights()[0];
        assert!((needlet_eval(&sys, &h, 0, 1, &x).unwrap() - w0.sqrt()).abs() < 1e-15);
        assert!(needlet_eval(&sys, &h, 0, 2, &x).is_err());
        assert!(needlet_eval(&sys, &h, 3, 0, &x).is_err());
    }

    #[test]
    fn from_rules_checks_exactness() {
        let good = vec![
            builtin_design("polygon(2)").unwrap().rule(),
            builtin_design("polygon(4)").unwrap().rule(),
        ];
        assert!(NeedletSystem::from_rules(1, good).is_ok());
        let bad = vec![
            builtin_design("polygon(2)").unwrap().rule(),
            builtin_design("polygon(3)").unwrap().rule(),
        ];
        assert!(NeedletSystem::from_rules(1, bad).is_err());
    }

    #[test]
    fn coefficient_paths_agree() {
        let sys = NeedletSystem::standard(2, 3).unwrap();
        let h = build_filter();
        let mut rng = crate::rng::substream(11, "t", 0);
        let c = CoefficientVector::from_vec(2, 9, crate::rng::standard_normal_vec(&mut rng, 100)).unwrap();
        let reference = reference_rule(2, 9 + 8).unwrap();
        let a = needlet_coeffs(&c, &sys, &h, 3, &reference).unwrap();
        let b = needlet_coeffs_from_harmonics(&c, &sys, &h, 3).unwrap();
        for j in 0..=3 {
            for (x, y) in a.level(j).iter().zip(b.level(j)) {
                assert!((x - y).abs() < 1e-10, "level {j}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn empirical_harmonic_form_matches_kernel_form() {
        let design = resolve_design("sf024.00314", 2, None).unwrap();
        let h = build_filter();
        let f = |x: &SpherePoint| (x.coords()[0] * 2.0 + x.coords()[2]).sin();
        let vals = design.points().values(&f);
        let xs: Vec<SpherePoint> = crate::sphere::sample_uniform(2, 20, 1).unwrap().points().to_vec();
        let kernel = empirical_needlet_approx(&vals, &design, &h, 3, &xs).unwrap();
        let c = empirical_needlet_harmonics(&vals, &design, &h, 3).unwrap();
        for (x, k) in xs.iter().zip(&kernel) {
            assert!((c.eval(x) - k).abs() < 1e-10);
        }
    }

    #[test]
    fn empirical_rejects_weak_designs() {
        let design = resolve_design("sf020.00222", 2, None).unwrap();
        let vals = vec![1.0; design.len()];
        let x = [SpherePoint::from_polar(0.1, 0.1)];
        assert!(matches!(
            empirical_needlet_approx(&vals, &design, &NeedletFilter, 3, &x),
            Err(Error::InsufficientStrength { required: 24, available: 20 })
        ));
        let v = empirical_needlet_approx(&vals, &design, &NeedletFilter, 2, &x).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12);
    }
}
