//! Equal-weight cubature on a design against a Gauss–Legendre product rule.

use sphere_lecam::designs::{reference_rule, resolve_design};
use sphere_lecam::harmonics::{dim_poly_space, CoefficientVector};
use sphere_lecam::rng::{standard_normal_vec, substream};
use sphere_lecam::sphere::SpherePoint;

fn main() -> sphere_lecam::Result<()> {
    let design = resolve_design("sf020.00222", 2, None)?.require_verified(1e-10)?;
    let rule = design.rule();
    let reference = reference_rule(2, 40)?;
    let mut rng = substream(1, "example/cubature", 0);
    for degree in [4, 10, 20, 24, 30] {
        let f = CoefficientVector::from_vec(2, degree, standard_normal_vec(&mut rng, dim_poly_space(2, degree)))?;
        // shift so the integral is far from zero
        let g = |x: &SpherePoint| 1.0 + f.evaluate(x).unwrap();
        let on_design = rule.integrate(&g);
        let exact = reference.integrate(&g);
        println!("degree {degree:>2}: design {on_design:.12}  reference {exact:.12}  |diff| {:.1e}", (on_design - exact).abs());
    }
    println!("exact through degree {}, not beyond", design.strength());
    Ok(())
}
