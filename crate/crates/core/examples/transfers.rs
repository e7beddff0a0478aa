//! The two randomizations between regression and white noise, with their
//! first two moments checked by Monte Carlo.

use sphere_lecam::approx::{hyperinterpolate, DiscreteFrame};
use sphere_lecam::designs::resolve_design;
use sphere_lecam::experiments::{
    regression_from_mean, replicate, sample_moments, to_regression_replication, to_white_noise_replication,
    white_noise_replication,
};
use sphere_lecam::spaces::{make_sobolev_function, Profile};

fn main() -> sphere_lecam::Result<()> {
    let design = resolve_design("sf016.00146", 2, None)?.require_verified(1e-10)?;
    let frame = DiscreteFrame::new(design, 8)?;
    let (n, sigma, reps) = (frame.n(), 1.0, 4000);
    let noise = sigma / (n as f64).sqrt();
    let f = make_sobolev_function(2, 2.0, 1.0, 12, 4, Profile::Random)?;
    let mean = frame.points().values(&f);

    let y = replicate(reps, |r| {
        let zs = regression_from_mean(&mean, sigma, 3, r)?;
        Ok(to_white_noise_replication(&zs, &frame, frame.m() + 10, 3, r)?.y)
    })?;
    let target = hyperinterpolate(&frame, &mean)?;
    let m = sample_moments(&y, 3)?;
    println!("to white noise (σ̃ = {noise:.4}):");
    for j in 0..3 {
        println!("  y{}: mean {:+.5} (target {:+.5}), var {:.3e} (target {:.3e})", j + 1, m.mean[j], target.get(j + 1), m.covariance[j][j], noise * noise);
    }

    let z = replicate(reps, |r| {
        let obs = white_noise_replication(&f, sigma, n, f.len(), 5, r)?;
        Ok(to_regression_replication(&obs, &frame, 5, r)?.z)
    })?;
    let target = frame.fitted_values(&f.resized(8))?;
    let m = sample_moments(&z, 3)?;
    println!("to regression (σ = {sigma}):");
    for i in 0..3 {
        println!("  z{}: mean {:+.4} (target {:+.4}), var {:.3} (target 1)", i + 1, m.mean[i], target[i], m.covariance[i][i]);
    }
    Ok(())
}
