//! Real spherical harmonics on S²: eigenspace dimensions, the addition
//! theorem, and Gegenbauer values.

use sphere_lecam::harmonics::{dim_eigenspace, dim_poly_space, eval_basis, zonal_kernel};
use sphere_lecam::special::gegenbauer_normalized;
use sphere_lecam::sphere::{dot, SpherePoint};

fn main() -> sphere_lecam::Result<()> {
    let x = SpherePoint::from_polar(0.7, 1.9);
    let y = SpherePoint::from_polar(2.1, -0.4);
    let t = dot(&x, &y)?;
    let (bx, by) = (eval_basis(2, 8, &x)?, eval_basis(2, 8, &y)?);
    for l in 0..=8 {
        let (lo, hi) = (dim_poly_space(2, l) - dim_eigenspace(2, l), dim_poly_space(2, l));
        let sum: f64 = (lo..hi).map(|j| bx[j] * by[j]).sum();
        let kernel = zonal_kernel(2, l, &x, &y)?;
        let legendre = dim_eigenspace(2, l) as f64 * gegenbauer_normalized(l, 2, t)?;
        println!("l = {l}: N = {:>2}  Σ_m Y(x)Y(y) = {sum:+.12}  kernel = {kernel:+.12}  N·P(t) = {legendre:+.12}", dim_eigenspace(2, l));
    }
    Ok(())
}
