//! Empirical needlet approximation from noisy design values.

use sphere_lecam::designs::resolve_design;
use sphere_lecam::experiments::simulate_regression;
use sphere_lecam::needlets::{build_filter, empirical_needlet_approx};
use sphere_lecam::spaces::{make_sobolev_function, Profile};
use sphere_lecam::sphere::{sample_uniform, SphereFunction};

fn main() -> sphere_lecam::Result<()> {
    let design = resolve_design("sf048.01202", 2, None)?.require_verified(1e-10)?;
    let f = make_sobolev_function(2, 2.0, 1.0, 24, 5, Profile::Random)?;
    let probe = sample_uniform(2, 200, 9)?;
    let h = build_filter();
    for sigma in [0.0, 0.1, 0.5] {
        let sample = simulate_regression(&f, &design, sigma, 17)?;
        for j in 1..=4 {
            let approx = empirical_needlet_approx(&sample.z, &design, &h, j, probe.points())?;
            let err = probe.iter().zip(&approx).map(|(x, v)| (f.eval(x) - v).powi(2)).sum::<f64>() / probe.len() as f64;
            println!("σ = {sigma:.1}, J = {j}: mean squared error on the probe {err:.3e}");
        }
    }
    Ok(())
}
