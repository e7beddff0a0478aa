use proptest::prelude::*;
use sphere_lecam::approx::{hyperinterpolate, residual_at_nodes, DiscreteFrame};
use sphere_lecam::designs::{builtin_design, resolve_design};
use sphere_lecam::experiments::{
    gaussian_tv_bound, regression_from_mean, replicate, sample_moments, simulate_regression, simulate_white_noise,
    to_regression, to_regression_replication, to_white_noise, RegressionSample,
};
use sphere_lecam::harmonics::{dim_poly_space, eval_basis, CoefficientVector};
use sphere_lecam::rng::{standard_normal_vec, substream};
use sphere_lecam::spaces::{make_sobolev_function, Profile};

fn sf020_frame(l: usize) -> DiscreteFrame {
    DiscreteFrame::new(resolve_design("sf020.00222", 2, Some(20)).unwrap(), l).unwrap()
}

fn random_poly(degree: usize, seed: u64) -> CoefficientVector {
    let mut rng = substream(seed, "experiment-tests", degree as u64);
    CoefficientVector::from_vec(2, degree, standard_normal_vec(&mut rng, dim_poly_space(2, degree))).unwrap()
}

/// `1 − 2Φ(−a) = erf(a/√2)`.
fn tv_oracle(dist: f64, noise: f64) -> f64 {
    libm::erf(dist / (2.0 * noise) / std::f64::consts::SQRT_2)
}

#[test]
fn tv_bound_reference_values() {
    assert_eq!(gaussian_tv_bound(0.0, 1.0).unwrap(), 0.0);
    let v = gaussian_tv_bound(2.0 * 1.959963985, 1.0).unwrap();
    assert!((v - 0.95).abs() <= 1e-8, "{v}");
    assert!(gaussian_tv_bound(1.0, 0.0).is_err());
    assert!(gaussian_tv_bound(1.0, -1.0).is_err());
}

proptest! {
    #[test]
    fn tv_bound_is_monotone_and_in_range(a in 0.0f64..50.0, b in 0.0f64..50.0, noise in 0.01f64..10.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let tv_lo = gaussian_tv_bound(lo, noise).unwrap();
        let tv_hi = gaussian_tv_bound(hi, noise).unwrap();
        prop_assert!(tv_lo <= tv_hi);
        prop_assert!((0.0..=1.0).contains(&tv_lo));
        prop_assert!((tv_lo - tv_oracle(lo, noise)).abs() <= 1e-14);
    }
}

#[test]
fn projection_is_idempotent() {
    let frame = sf020_frame(10);
    let x = frame.design_matrix();
    let n = frame.n() as f64;
    let p = x * x.transpose() / n;
    let dev = (&p * &p - &p).amax();
    assert!(dev <= 1e-8, "‖P² − P‖_max = {dev:e}");
}

#[test]
fn noiseless_regression_returns_node_values() {
    let design = resolve_design("sf016.00146", 2, Some(16)).unwrap();
    let f = random_poly(8, 1);
    let z = simulate_regression(&f, &design, 0.0, 3).unwrap();
    assert_eq!(z.z, design.points().values(&f));
    // small σ: the noise shrinks linearly
    let z = simulate_regression(&f, &design, 1e-9, 3).unwrap();
    for (a, b) in z.z.iter().zip(design.points().values(&f)) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn white_noise_has_the_advertised_variance() {
    let theta = CoefficientVector::zeros(2, 0);
    let (sigma, n, t) = (2.0, 400, 10_000);
    let obs = simulate_white_noise(&theta, sigma, n, t, 5).unwrap();
    let var = obs.y.iter().map(|y| y * y).sum::<f64>() / t as f64;
    let expected = sigma * sigma / n as f64;
    assert!((var / expected - 1.0).abs() <= 0.05, "variance {var} vs {expected}");
    assert_eq!(obs.noise, sigma / (n as f64).sqrt());
}

#[test]
fn band_limited_transfer_recovers_coefficients_exactly() {
    let frame = sf020_frame(10);
    let f = random_poly(10, 2);
    let zs = simulate_regression(&f, frame.design(), 0.0, 1).unwrap();
    let obs = to_white_noise(&zs, &frame, dim_poly_space(2, 20), 1).unwrap();
    for (j, y) in obs.y.iter().enumerate().take(frame.m()) {
        assert!((y - f.get(j + 1)).abs() <= 1e-12, "coefficient {}", j + 1);
    }
    assert!(obs.y[frame.m()..].iter().all(|v| *v == 0.0));
}

#[test]
fn shifting_observations_shifts_one_coefficient() {
    let frame = sf020_frame(6);
    let design = frame.design().clone();
    let zs = simulate_regression(&random_poly(12, 4), &design, 0.5, 9).unwrap();
    let (j, c) = (7usize, 0.3);
    let shifted: Vec<f64> = zs
        .z
        .iter()
        .zip(design.points().iter())
        .map(|(z, x)| z + c * eval_basis(2, 6, x).unwrap()[j - 1])
        .collect();
    let shifted = RegressionSample { z: shifted, sigma: zs.sigma };
    let a = to_white_noise(&zs, &frame, frame.m(), 0).unwrap();
    let b = to_white_noise(&shifted, &frame, frame.m(), 0).unwrap();
    for k in 0..frame.m() {
        let expected = if k + 1 == j { c } else { 0.0 };
        assert!((b.y[k] - a.y[k] - expected).abs() <= 1e-12);
    }
}

#[test]
fn square_polygon_frame_interpolates_without_noise_injection() {
    let l = 4;
    let design = builtin_design(&format!("polygon({})", 2 * l + 1)).unwrap();
    let frame = DiscreteFrame::new(design, l).unwrap();
    assert_eq!(frame.m(), frame.n());
    let mut rng = substream(3, "polygon", 0);
    let theta = CoefficientVector::from_vec(1, l, standard_normal_vec(&mut rng, frame.m())).unwrap();
    let obs = simulate_white_noise(&theta, 1.0, frame.n(), frame.m(), 4).unwrap();
    let a = to_regression(&obs, &frame, 1).unwrap();
    let b = to_regression(&obs, &frame, 2).unwrap();
    let fitted = frame
        .fitted_values(&CoefficientVector::from_vec(1, l, obs.y.clone()).unwrap())
        .unwrap();
    for ((za, zb), v) in a.z.iter().zip(&b.z).zip(&fitted) {
        assert!((za - zb).abs() <= 1e-12 && (za - v).abs() <= 1e-12);
    }
}

#[test]
fn round_trip_mean_is_the_hyperinterpolant() {
    let frame = sf020_frame(10);
    let f = make_sobolev_function(2, 2.0, 1.0, 20, 8, Profile::Random).unwrap();
    let vals = frame.points().values(&f);
    let fit = hyperinterpolate(&frame, &vals).unwrap();
    let fitted = frame.fitted_values(&fit).unwrap();
    let sigma = 0.5;

    // noiseless pass: the round trip lands exactly on f̃_m(x_i)
    let zs = RegressionSample { z: vals.clone(), sigma: 0.0 };
    let back = to_regression(&to_white_noise(&zs, &frame, frame.m(), 0).unwrap(), &frame, 0).unwrap();
    for (a, b) in back.z.iter().zip(&fitted) {
        assert!((a - b).abs() <= 1e-12);
    }
    let dist = back.z.iter().zip(&vals).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let residual = residual_at_nodes(&frame, &vals).unwrap();
    let tv = gaussian_tv_bound(residual, sigma).unwrap();
    assert!((dist - residual).abs() <= 1e-12);
    assert!((tv - tv_oracle(dist, sigma)).abs() <= 1e-10);
    assert!(tv > 0.0, "f is not band-limited, the laws differ");

    // noisy passes: mean f̃_m(x_i), covariance σ² I
    let reps = 4000;
    let rows = replicate(reps, |r| {
        let z = regression_from_mean(&vals, sigma, 21, r)?;
        let obs = sphere_lecam::experiments::to_white_noise_replication(&z, &frame, frame.m(), 21, r)?;
        Ok(to_regression_replication(&obs, &frame, 21, r)?.z)
    })
    .unwrap();
    let m = sample_moments(&rows, 4).unwrap();
    let tol_mean = 4.0 * sigma / (reps as f64).sqrt();
    let tol_cov = 5.0 * sigma * sigma / (reps as f64).sqrt();
    for (a, b) in m.mean.iter().zip(&fitted) {
        assert!((a - b).abs() <= tol_mean, "mean {a} vs {b}");
    }
    for (i, row) in m.covariance.iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            let expected = if i == k { sigma * sigma } else { 0.0 };
            assert!((c - expected).abs() <= tol_cov, "cov[{i}][{k}] = {c}");
        }
    }
}
