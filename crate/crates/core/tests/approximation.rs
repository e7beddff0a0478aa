use approx::assert_abs_diff_eq;
use sphere_lecam::approx::{discrete_norm, hyperinterpolate, l2_error, l2_error_coeffs, residual_at_nodes, DiscreteFrame};
use sphere_lecam::designs::{builtin_design, reference_rule, resolve_design, SphericalDesign};
use sphere_lecam::harmonics::{dim_poly_space, project, CoefficientVector};
use sphere_lecam::rng::{standard_normal_vec, substream};
use sphere_lecam::spaces::{make_sobolev_function, Profile};

fn sf(name: &str) -> SphericalDesign {
    let t = name[2..5].parse().unwrap();
    resolve_design(name, 2, Some(t)).unwrap()
}

fn random_poly(d: usize, degree: usize, seed: u64) -> CoefficientVector {
    let mut rng = substream(seed, "approx-tests", degree as u64);
    CoefficientVector::from_vec(d, degree, standard_normal_vec(&mut rng, dim_poly_space(d, degree))).unwrap()
}

fn difference_at_nodes(frame: &DiscreteFrame, a: &CoefficientVector, b: &CoefficientVector) -> Vec<f64> {
    let va = frame.points().values(a);
    let vb = frame.points().values(b);
    va.iter().zip(&vb).map(|(x, y)| x - y).collect()
}

#[test]
fn hyperinterpolation_is_idempotent() {
    let frame = DiscreteFrame::new(sf("sf020.00222"), 10).unwrap();
    for seed in 0..10 {
        let f = random_poly(2, 18, seed);
        let fit = hyperinterpolate(&frame, &frame.points().values(&f)).unwrap();
        let refit = hyperinterpolate(&frame, &frame.fitted_values(&fit).unwrap()).unwrap();
        assert!(fit.l2_distance(&refit) <= 1e-10, "seed {seed}");
    }
}

#[test]
fn least_squares_residual_is_below_the_projection_residual() {
    let frame = DiscreteFrame::new(sf("sf020.00222"), 10).unwrap();
    let n = frame.n() as f64;
    for seed in 0..20 {
        let f = make_sobolev_function(2, 2.0, 1.0, 30, seed, Profile::Random).unwrap();
        let res = residual_at_nodes(&frame, &frame.points().values(&f)).unwrap();
        let proj = project(&f, 10).unwrap();
        let bound = n.sqrt() * discrete_norm(&difference_at_nodes(&frame, &f, &proj)).unwrap();
        assert!(res <= bound + 1e-9, "seed {seed}: {res} > {bound}");
    }
}

#[test]
fn off_band_harmonic_is_invisible_to_the_fit() {
    // L < ℓ′ ≤ t − L: the fit is 0 and the L² error is the unit norm
    let design = sf("sf020.00222");
    let frame = DiscreteFrame::new(design, 8).unwrap();
    let reference = reference_rule(2, 24).unwrap();
    for (l, m) in [(9, 1), (10, 7), (12, 25)] {
        let y = CoefficientVector::harmonic(2, l, m).unwrap();
        assert_abs_diff_eq!(l2_error(&frame, &y, &reference).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(l2_error_coeffs(&frame, &y).unwrap(), 1.0, epsilon = 1e-9);
    }
    let inside = random_poly(2, 8, 3);
    assert_abs_diff_eq!(l2_error(&frame, &inside, &reference).unwrap(), 0.0, epsilon = 1e-9);
}

#[test]
fn l2_error_satisfies_the_triangle_inequality() {
    let frame = DiscreteFrame::new(sf("sf016.00146"), 8).unwrap();
    for seed in 0..10 {
        let f = make_sobolev_function(2, 1.5, 1.0, 24, seed, Profile::Random).unwrap();
        let fit = hyperinterpolate(&frame, &frame.points().values(&f)).unwrap();
        let proj = project(&f, 8).unwrap();
        let lhs = l2_error_coeffs(&frame, &f).unwrap();
        let rhs = f.l2_distance(&proj) + proj.l2_distance(&fit);
        assert!(lhs <= rhs + 1e-12);
    }
}

/// `A_j f = Π_{2^j L} f − Π_{2^{j−1} L} f` for Sobolev-`s` draws: the
/// normalized block sizes `‖A_j f‖_n / (2^{j(d/2−s)} L^{−s})` never exceed
/// the constant fitted at `j = 1`.
#[test]
fn dyadic_blocks_decay() {
    let (d, s, l) = (2usize, 2.0, 2usize);
    let design = sf("sf048.01202");
    let frame = DiscreteFrame::new(design, 1).unwrap();
    let mut ratios = [0.0_f64; 4];
    for seed in 0..10 {
        let f = make_sobolev_function(d, s, 1.0, 16 * l, seed, Profile::Random).unwrap();
        for j in 1..=4 {
            let hi = project(&f, (1 << j) * l).unwrap();
            let lo = project(&f, (1 << (j - 1)) * l).unwrap().resized(hi.max_degree());
            let block = discrete_norm(&difference_at_nodes(&frame, &hi, &lo)).unwrap();
            let scale = 2f64.powf(j as f64 * (d as f64 / 2.0 - s)) * (l as f64).powf(-s);
            ratios[j - 1] = ratios[j - 1].max(block / scale);
        }
    }
    let k = ratios[0];
    assert!(k > 0.0);
    for (j, r) in ratios.iter().enumerate().skip(1) {
        assert!(*r <= k, "j = {}: ratio {r} exceeds K = {k}", j + 1);
    }
}

#[test]
fn polygon_frames_interpolate() {
    for l in 1..6 {
        let design = builtin_design(&format!("polygon({})", 2 * l + 1)).unwrap();
        let frame = DiscreteFrame::new(design, l).unwrap();
        let vals: Vec<f64> = (0..frame.n()).map(|i| (i as f64 * 0.7).sin() + 0.1 * i as f64).collect();
        assert!(residual_at_nodes(&frame, &vals).unwrap() <= 1e-12);
    }
}
