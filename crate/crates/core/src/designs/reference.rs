use std::f64::consts::PI;

use super::CubatureRule;
use crate::error::{Error, Result};
use crate::sphere::{PointSet, SpherePoint};

/// Gauss–Legendre nodes and weights on `[-1, 1]` (weights sum to 2).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// A positive-weight rule exact on polynomials of degree ≤ `degree`.
///
/// On S¹ this is the equal-weight `(degree + 1)`-gon; on S² a Gauss–Legendre
/// rule in `cos θ` times an equispaced rule in the azimuth. Higher dimensions
/// have no built-in product rule and must use a supplied design.
pub fn reference_rule(d: usize, degree: usize) -> Result<CubatureRule> {
    match d {
        1 => {
            let k = degree + 1;
            let pts = (0..k)
                .map(|i| SpherePoint::on_circle(2.0 * PI * i as f64 / k as f64))
                .collect();
            Ok(CubatureRule::equal_weight(PointSet::new(pts)?))
        }
        2 => {
            let nz = degree / 2 + 1;
            let nphi = degree + 1;
            let (z, wz) = gauss_legendre(nz);
            let mut pts = Vec::with_capacity(nz * nphi);
            let mut w = Vec::with_capacity(nz * nphi);
            for (zi, wi) in z.iter().zip(&wz) {
                let s = (1.0 - zi * zi).max(0.0).sqrt();
                for k in 0..nphi {
                    let phi = 2.0 * PI * k as f64 / nphi as f64;
                    pts.push(SpherePoint::normalized(vec![s * phi.cos(), s * phi.sin(), *zi])?);
                    w.push(wi / (2.0 * nphi as f64));
                }
            }
            let total: f64 = crate::sum::pairwise_sum(&w);
            w.iter_mut().for_each(|v| *v /= total);
            CubatureRule::new(PointSet::new(pts)?, w)
        }
        _ => Err(Error::InvalidArgument(format!(
            "no built-in reference rule on S^{d}; supply a design"
        ))),
    }
}
