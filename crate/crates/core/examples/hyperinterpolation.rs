//! Hyperinterpolation on a 20-design: the Gram identity, exact recovery of
//! P_10, and the error on a smooth function outside P_10.

use sphere_lecam::approx::{hyperinterpolate, l2_error_coeffs, residual_at_nodes, DiscreteFrame};
use sphere_lecam::designs::resolve_design;
use sphere_lecam::spaces::{make_sobolev_function, Profile};

fn main() -> sphere_lecam::Result<()> {
    let design = resolve_design("sf020.00222", 2, None)?.require_verified(1e-10)?;
    let frame = DiscreteFrame::new(design, 10)?;
    println!("n = {}, m = {}, ‖XᵀX − nI‖_max = {:.2e}", frame.n(), frame.m(), frame.gram_deviation());

    for (label, l_max) in [("inside P_10", 10), ("degree 40", 40)] {
        let f = make_sobolev_function(2, 2.0, 1.0, l_max, 3, Profile::Random)?;
        let values = frame.points().values(&f);
        let fit = hyperinterpolate(&frame, &values)?;
        println!(
            "{label:<12} residual at nodes {:.3e}, L² error {:.3e}, first coefficients {:+.6} {:+.6}",
            residual_at_nodes(&frame, &values)?,
            l2_error_coeffs(&frame, &f)?,
            fit.get(1),
            fit.get(2)
        );
    }
    Ok(())
}
