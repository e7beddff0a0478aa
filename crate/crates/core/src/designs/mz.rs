use super::{reference_rule, CubatureRule};
use crate::error::{Error, Result};
use crate::harmonics::{dim_poly_space, eval_basis};
use crate::rng::{standard_normal_vec, substream};
use crate::sum;

/// Empirical constant in the Marcinkiewicz–Zygmund-type inequality
/// `Σ w_i |f(x_i)|^p ≤ C (L/L₀)^d ∫ |f|^p dμ` for `f ∈ P_L`.
///
/// Returns the largest ratio `Σ w_i |f(x_i)|^p / ((L/L₀)^d ∫|f|^p)` over
/// `trials` random polynomials with i.i.d. standard normal coefficients. The
/// integral uses a reference product rule exact on degree `⌈p⌉·2L` or more
/// (exact whenever `p` is an even integer). Supported on S¹ and S².
pub fn mz_ratio(rule: &CubatureRule, l0: usize, l: usize, p: f64, trials: usize, seed: u64) -> Result<f64> {
    if l < l0 {
        return Err(Error::InvalidArgument(format!("L = {l} is below L0 = {l0}")));
    }
    if l0 == 0 {
        return Err(Error::InvalidArgument("L0 must be at least 1".into()));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent p = {p} must be positive")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let d = rule.dim();
    let even_int = p.fract() == 0.0 && (p as u64).is_multiple_of(2);
    let ref_degree = if even_int {
        (p as usize) * l
    } else {
        2 * (p.ceil() as usize).max(1) * l
    };
    let reference = reference_rule(d, ref_degree)?;
    let m = dim_poly_space(d, l);
    let basis_at = |r: &CubatureRule| -> Result<Vec<Vec<f64>>> {
        r.points().iter().map(|x| eval_basis(d, l, x)).collect()
    };
    let on_rule = basis_at(rule)?;
    let on_ref = basis_at(&reference)?;
    let scale = (l as f64 / l0 as f64).powi(d as i32);
    let power_sum = |basis: &[Vec<f64>], weights: &[f64], c: &[f64]| -> f64 {
        sum::par_sum(basis.len(), |i| {
            let v: f64 = basis[i].iter().zip(c).map(|(b, c)| b * c).sum();
            weights[i] * v.abs().powf(p)
        })
    };
    let mut worst = 0.0_f64;
    for k in 0..trials {
        let mut rng = substream(seed, "mz_ratio", k as u64);
        let c = standard_normal_vec(&mut rng, m);
        let lhs = power_sum(&on_rule, rule.weights(), &c);
        let rhs = power_sum(&on_ref, reference.weights(), &c);
        worst = worst.max(lhs / (scale * rhs));
    }
    Ok(worst)
}
