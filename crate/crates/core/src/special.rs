//! Jacobi and normalized Gegenbauer polynomials, and the standard normal CDF.

use crate::error::{Error, Result};

/// Jacobi polynomial `P_ℓ^{(α,β)}(t)` by the forward three-term recurrence.
pub fn jacobi(degree: usize, alpha: f64, beta: f64, t: f64) -> Result<f64> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::InvalidArgument(format!(
            "Jacobi parameters must exceed -1, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let mut prev = 1.0;
    if degree == 0 {
        return Ok(prev);
    }
    let ab = alpha + beta;
    let mut cur = (alpha + 1.0) + (ab + 2.0) * (t - 1.0) / 2.0;
    for n in 2..=degree {
        let n = n as f64;
        let c = 2.0 * n + ab;
        let lead = 2.0 * n * (n + ab) * (c - 2.0);
        let a = (c - 1.0) * (c * (c - 2.0) * t + alpha * alpha - beta * beta);
        let b = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * c;
        let next = (a * cur - b * prev) / lead;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Normalized Gegenbauer polynomial on S^d:
/// `P_ℓ^{(α,α)}(t) / P_ℓ^{(α,α)}(1)` with `α = (d-2)/2`, so the value at
/// `t = 1` is exactly 1.
pub fn gegenbauer_normalized(degree: usize, d: usize, t: f64) -> Result<f64> {
    check_dim(d)?;
    let mut out = vec![0.0; degree + 1];
    fill_gegenbauer(d, t, &mut out);
    Ok(out[degree])
}

/// All normalized Gegenbauer values for degrees `0..=max_degree`.
pub fn gegenbauer_normalized_seq(max_degree: usize, d: usize, t: f64) -> Result<Vec<f64>> {
    check_dim(d)?;
    let mut out = vec![0.0; max_degree + 1];
    fill_gegenbauer(d, t, &mut out);
    Ok(out)
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("sphere dimension must be at least 1".into()));
    }
    Ok(())
}

/// Writes `P_ℓ^{(d+1)}(t)` for `ℓ < out.len()`.
///
/// Dividing the Jacobi recurrence by `P_ℓ^{(α,α)}(1) = binom(ℓ+α, ℓ)` gives
/// `(ℓ + d - 2) p_ℓ = (2ℓ + d - 3) t p_{ℓ-1} - (ℓ - 1) p_{ℓ-2}`, which never
/// forms the (polynomially growing) value at 1.
#[inline]
pub(crate) fn fill_gegenbauer(d: usize, t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = t;
    let dm = d as f64;
    for l in 2..out.len() {
        let lf = l as f64;
        out[l] = ((2.0 * lf + dm - 3.0) * t * out[l - 1] - (lf - 1.0) * out[l - 2]) / (lf + dm - 2.0);
    }
}

/// Standard normal distribution function Φ.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}
