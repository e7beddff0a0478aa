use sphere_lecam::designs::{
    builtin_design, bundled_design_names, mz_ratio, reference_rule, resolve_design, strength_defects, verify_design,
    SphericalDesign, BUILTIN_NAMES, DEFAULT_TOL,
};
use sphere_lecam::harmonics::{dim_poly_space, eval_basis};
use sphere_lecam::rng::{standard_normal_vec, substream};

fn strength_from_name(name: &str) -> usize {
    name[2..5].parse().unwrap()
}

fn catalog() -> Vec<(String, SphericalDesign)> {
    let mut out: Vec<(String, SphericalDesign)> = BUILTIN_NAMES
        .iter()
        .map(|n| (n.to_string(), builtin_design(n).unwrap()))
        .collect();
    for name in bundled_design_names() {
        let t = strength_from_name(name);
        out.push((name.to_string(), resolve_design(name, 2, Some(t)).unwrap()));
    }
    out
}

#[test]
fn zonal_defects_are_nonnegative_up_to_twice_the_strength() {
    for (name, design) in catalog() {
        let t = design.strength();
        let defects = strength_defects(design.points(), 2 * t);
        for (i, a) in defects.iter().enumerate() {
            assert!(*a >= -1e-12, "{name}: A_{} = {a:e}", i + 1);
        }
        // exactness on P_t, and the certificate agrees
        assert!(defects[..t].iter().all(|a| a.abs() <= DEFAULT_TOL), "{name}");
        assert!(verify_design(design.points(), t, DEFAULT_TOL).verified, "{name}");
    }
}

#[test]
fn catalog_designs_are_not_designs_of_the_next_strength() {
    // the claimed strength is sharp, except for antipodal sets where t+1 is even
    for (name, design) in catalog() {
        let t = design.strength();
        let a = strength_defects(design.points(), t + 2);
        assert!(a[t..].iter().any(|v| v.abs() > 1e-8), "{name} is exact beyond {t}");
    }
}

/// Exact mean of `Σ θ_j Y_j` is `θ_1`; the reference rule gives the same.
#[test]
fn random_polynomials_integrate_exactly() {
    for (name, design) in catalog() {
        let t = design.strength();
        let d = design.dim();
        let m = dim_poly_space(d, t);
        let mut rng = substream(11, "designs/poly", t as u64);
        let polys: Vec<Vec<f64>> = (0..50).map(|_| standard_normal_vec(&mut rng, m)).collect();
        let eval_all = |pts: &[sphere_lecam::sphere::SpherePoint], w: &[f64]| -> Vec<f64> {
            let mut acc = vec![0.0; polys.len()];
            for (x, wi) in pts.iter().zip(w) {
                let b = eval_basis(d, t, x).unwrap();
                for (a, p) in acc.iter_mut().zip(&polys) {
                    *a += wi * b.iter().zip(p).map(|(y, c)| y * c).sum::<f64>();
                }
            }
            acc
        };
        let rule = design.rule();
        let on_design = eval_all(rule.points().points(), rule.weights());
        let reference = if t <= 63 {
            let r = reference_rule(d, t).unwrap();
            Some(eval_all(r.points().points(), r.weights()))
        } else {
            None
        };
        for (k, p) in polys.iter().enumerate() {
            let scale = p.iter().map(|c| c.abs()).fold(0.0, f64::max);
            let exact = p[0];
            assert!((on_design[k] - exact).abs() <= 1e-9 * scale, "{name} poly {k}");
            if let Some(r) = &reference {
                assert!((r[k] - exact).abs() <= 1e-9 * scale, "{name} reference poly {k}");
            }
        }
    }
}

#[test]
fn marcinkiewicz_zygmund_ratio() {
    let design = resolve_design("sf020.00222", 2, Some(20)).unwrap();
    let rule = design.rule();
    // at L = L₀ and p = 2 the design is exact, so the ratio is 1
    let r = mz_ratio(&rule, 10, 10, 2.0, 50, 3).unwrap();
    assert!(r <= 1.0 + 1e-9 && r > 1.0 - 1e-9, "ratio {r}");
    for p in [1.0, 2.0, 4.0] {
        let r = mz_ratio(&rule, 10, 20, p, 200, 3).unwrap();
        assert!(r.is_finite() && r > 0.0 && r < 50.0, "p = {p}: {r}");
    }
}

#[test]
fn polygons_are_exact_on_trigonometric_polynomials() {
    for n in [3, 5, 8, 13] {
        let design = builtin_design(&format!("polygon({n})")).unwrap();
        let t = design.strength();
        assert_eq!(t, n - 1);
        let a = strength_defects(design.points(), n + 1);
        assert!(a[..t].iter().all(|v| v.abs() < 1e-12));
        assert!(a[t] > 0.5, "degree n is aliased: A_n = {}", a[t]);
    }
}
