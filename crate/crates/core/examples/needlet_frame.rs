//! Needlet filter, decomposition of a band-limited function, and
//! reconstruction from the coefficients.

use sphere_lecam::cli::filter_residuals;
use sphere_lecam::harmonics::CoefficientVector;
use sphere_lecam::needlets::{build_filter, needlet_coeffs_from_harmonics, needlet_reconstruct, NeedletSystem};
use sphere_lecam::sphere::SpherePoint;

fn main() -> sphere_lecam::Result<()> {
    let h = build_filter();
    for t in [0.4, 0.75, 1.0, 1.5, 2.5] {
        println!("h({t}) = {:.6}  H({t}) = {:.6}", h.h(t), h.big_h(t));
    }
    let (support, quadratic, partition) = filter_residuals(10_000)?;
    println!("filter identities: support {support:.1e}, quadratic {quadratic:.1e}, partition {partition:.1e}");

    let j_max = 4;
    let sys = NeedletSystem::standard(2, j_max)?;
    let mut f = CoefficientVector::zeros(2, 5);
    f.as_mut_slice().iter_mut().enumerate().for_each(|(i, v)| *v = 1.0 / (1.0 + i as f64));
    let beta = needlet_coeffs_from_harmonics(&f, &sys, &h, j_max)?;
    for j in 0..=j_max {
        println!("level {j}: {:>4} needlets, ‖β_j‖₂ = {:.6}", sys.level_size(j)?, beta.level_norm(j, 2.0));
    }
    let x = SpherePoint::from_polar(1.1, 0.3);
    println!("f(x) = {:.12}, f_J(x) = {:.12}", f.evaluate(&x)?, needlet_reconstruct(&beta, &sys, &h, j_max, &x)?);
    Ok(())
}
