//! Hyperinterpolation on spherical designs.
//!
//! On a t-design with `t ≥ 2L` the design matrix `X = (Y_j(x_i))` satisfies
//! `XᵀX = n I`, so the least-squares fit in `P_L` reduces to the discrete
//! inner products `β̃_j = ⟨f, Y_j⟩_n = n⁻¹ Σ_i f(x_i) Y_j(x_i)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::designs::{CubatureRule, SphericalDesign};
use crate::error::{Error, Result};
use crate::harmonics::{dim_poly_space, eval_basis_into, CoefficientVector};
use crate::sphere::{PointSet, SphereFunction};
use crate::sum;

/// Allowed `‖XᵀX − nI‖_max / n`.
pub const GRAM_TOL: f64 = 1e-8;

/// How coefficients are computed from node values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    /// `β̃ = n⁻¹ Xᵀ f`; requires the Gram identity.
    DiscreteInner,
    /// Least squares through an SVD of `X`, for point sets without the Gram
    /// identity. Only used when explicitly requested.
    LeastSquares,
}

/// A design together with a fit degree `L` and the cached design matrix.
#[derive(Debug, Clone)]
pub struct DiscreteFrame {
    design: SphericalDesign,
    degree: usize,
    x: DMatrix<f64>,
    gram: DMatrix<f64>,
    gram_deviation: f64,
    solver: Solver,
}

impl DiscreteFrame {
    /// Builds the frame, requiring `t ≥ 2L` and checking `XᵀX = nI`.
    pub fn new(design: SphericalDesign, degree: usize) -> Result<Self> {
        if design.strength() < 2 * degree {
            return Err(Error::InsufficientStrength {
                required: 2 * degree,
                available: design.strength(),
            });
        }
        let frame = Self::build(design, degree, Solver::DiscreteInner)?;
        let n = frame.n() as f64;
        if !(frame.gram_deviation <= GRAM_TOL * n) {
            return Err(Error::GramInvariant {
                deviation: frame.gram_deviation,
                allowed: GRAM_TOL * n,
            });
        }
        Ok(frame)
    }

    /// Builds a least-squares frame for any point set with at least
    /// `dim P_L` points; no strength or Gram requirement.
    pub fn least_squares(design: SphericalDesign, degree: usize) -> Result<Self> {
        let m = dim_poly_space(design.dim(), degree);
        if design.len() < m {
            return Err(Error::InvalidArgument(format!(
                "{} points cannot determine {m} coefficients",
                design.len()
            )));
        }
        Self::build(design, degree, Solver::LeastSquares)
    }

    fn build(design: SphericalDesign, degree: usize, solver: Solver) -> Result<Self> {
        let d = design.dim();
        if d != 1 && d != 2 {
            return Err(Error::NoExplicitBasis(d));
        }
        let m = dim_poly_space(d, degree);
        let n = design.len();
        let rows: Vec<Vec<f64>> = design
            .points()
            .points()
            .par_iter()
            .map(|p| {
                let mut row = vec![0.0; m];
                eval_basis_into(degree, p, &mut row);
                row
            })
            .collect();
        let x = DMatrix::from_fn(n, m, |i, j| rows[i][j]);
        let gram = x.tr_mul(&x);
        let gram_deviation = (0..m)
            .flat_map(|j| (0..m).map(move |k| (j, k)))
            .map(|(j, k)| {
                let target = if j == k { n as f64 } else { 0.0 };
                (gram[(j, k)] - target).abs()
            })
            .fold(0.0, f64::max);
        Ok(Self {
            design,
            degree,
            x,
            gram,
            gram_deviation,
            solver,
        })
    }

    pub fn design(&self) -> &SphericalDesign {
        &self.design
    }

    pub fn points(&self) -> &PointSet {
        self.design.points()
    }

    pub fn dim(&self) -> usize {
        self.design.dim()
    }

    /// Fit degree `L`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nodes `n`.
    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Basis dimension `m = dim P_L`.
    pub fn m(&self) -> usize {
        self.x.ncols()
    }

    pub fn solver(&self) -> Solver {
        self.solver
    }

    /// The design matrix `X` (n × m).
    pub fn design_matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// `‖XᵀX − nI‖_max`.
    pub fn gram_deviation(&self) -> f64 {
        self.gram_deviation
    }

    /// Values of the expansion `c` (degree ≤ L) at the nodes: `X c`.
    pub fn fitted_values(&self, c: &CoefficientVector) -> Result<Vec<f64>> {
        self.check_coeffs(c)?;
        let v = DVector::from_column_slice(c.as_slice());
        Ok((&self.x * v).as_slice().to_vec())
    }

    fn check_coeffs(&self, c: &CoefficientVector) -> Result<()> {
        if c.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: c.dim(),
            });
        }
        if c.len() != self.m() {
            return Err(Error::LengthMismatch {
                expected: self.m(),
                found: c.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_values(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: values.len(),
            });
        }
        Ok(())
    }
}

/// `⟨f, g⟩_n = n⁻¹ Σ_i f(x_i) g(x_i)`.
pub fn discrete_inner(f: &[f64], g: &[f64]) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    if f.is_empty() {
        return Err(Error::InvalidArgument("empty value vectors".into()));
    }
    let prods: Vec<f64> = f.iter().zip(g).map(|(a, b)| a * b).collect();
    Ok(sum::pairwise_sum(&prods) / f.len() as f64)
}

/// `‖f‖_n`.
pub fn discrete_norm(f: &[f64]) -> Result<f64> {
    Ok(discrete_inner(f, f)?.sqrt())
}

/// Hyperinterpolant `f̃_m` of node values `f_vals`, as degree-L coefficients.
pub fn hyperinterpolate(frame: &DiscreteFrame, f_vals: &[f64]) -> Result<CoefficientVector> {
    frame.check_values(f_vals)?;
    let n = frame.n() as f64;
    let coeffs: Vec<f64> = match frame.solver {
        Solver::DiscreteInner => (0..frame.m())
            .into_par_iter()
            .map(|j| {
                let col = frame.x.column(j);
                let prods: Vec<f64> = col.iter().zip(f_vals).map(|(y, f)| y * f).collect();
                sum::pairwise_sum(&prods) / n
            })
            .collect(),
        Solver::LeastSquares => {
            let svd = frame.x.clone().svd(true, true);
            let b = DVector::from_column_slice(f_vals);
            svd.solve(&b, 1e-12)
                .map_err(|e| Error::InvalidArgument(format!("least-squares solve failed: {e}")))?
                .as_slice()
                .to_vec()
        }
    };
    CoefficientVector::from_vec(frame.dim(), frame.degree, coeffs)
}

/// `XᵀX`.
pub fn gram(frame: &DiscreteFrame) -> DMatrix<f64> {
    frame.gram.clone()
}

/// `√(Σ_i (f̃_m(x_i) − f(x_i))²)`.
pub fn residual_at_nodes(frame: &DiscreteFrame, f_vals: &[f64]) -> Result<f64> {
    let fit = hyperinterpolate(frame, f_vals)?;
    let fitted = frame.fitted_values(&fit)?;
    let sq: Vec<f64> = fitted.iter().zip(f_vals).map(|(a, b)| (a - b) * (a - b)).collect();
    Ok(sum::pairwise_sum(&sq).sqrt())
}

/// `‖f − f̃_m‖_{L²}` with the integral taken by `reference`.
///
/// The fit uses `f` at the frame nodes. Exact when `reference` integrates
/// `(f − f̃_m)²` exactly, e.g. band-limited `f` with a rule of degree
/// `≥ 2·max(deg f, L)`.
pub fn l2_error<F>(frame: &DiscreteFrame, f: &F, reference: &CubatureRule) -> Result<f64>
where
    F: SphereFunction + ?Sized + Sync,
{
    if reference.dim() != frame.dim() {
        return Err(Error::DimensionMismatch {
            expected: frame.dim(),
            found: reference.dim(),
        });
    }
    let fit = hyperinterpolate(frame, &frame.points().values(f))?;
    let pts = reference.points().points();
    let w = reference.weights();
    let sq = sum::par_sum(pts.len(), |i| {
        let e = f.eval(&pts[i]) - fit.eval(&pts[i]);
        w[i] * e * e
    });
    Ok(sq.max(0.0).sqrt())
}

/// `‖f − f̃_m‖_{L²}` for `f` given by coefficients, exactly by Parseval.
pub fn l2_error_coeffs(frame: &DiscreteFrame, f: &CoefficientVector) -> Result<f64> {
    let fit = hyperinterpolate(frame, &frame.points().values(f))?;
    Ok(f.l2_distance(&fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{builtin_design, reference_rule, resolve_design};

    fn random_coeffs(d: usize, l: usize, seed: u64) -> CoefficientVector {
        let mut rng = crate::rng::substream(seed, "test", 0);
        let m = dim_poly_space(d, l);
        CoefficientVector::from_vec(d, l, crate::rng::standard_normal_vec(&mut rng, m)).unwrap()
    }

    #[test]
    fn polygon_gram_is_exact() {
        for l in 0..6 {
            let design = builtin_design(&format!("polygon({})", 2 * l + 1)).unwrap();
            let frame = DiscreteFrame::new(design, l).unwrap();
            assert!(frame.gram_deviation() < 1e-12);
            assert_eq!(frame.m(), frame.n());
        }
    }

    #[test]
    fn degree_zero_gram() {
        let frame = DiscreteFrame::new(builtin_design("tetrahedron").unwrap(), 0).unwrap();
        let g = gram(&frame);
        assert_eq!(g.shape(), (1, 1));
        assert!((g[(0, 0)] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn frame_rejects_weak_designs() {
        let tet = builtin_design("tetrahedron").unwrap();
        assert!(matches!(
            DiscreteFrame::new(tet.clone(), 2),
            Err(Error::InsufficientStrength { required: 4, available: 2 })
        ));
        // a wrongly claimed strength is caught by the Gram check
        let fake = crate::designs::SphericalDesign::new(tet.points().clone(), 4);
        assert!(matches!(DiscreteFrame::new(fake, 2), Err(Error::GramInvariant { .. })));
    }

    #[test]
    fn recovers_band_limited_coefficients() {
        let design = resolve_design("sf020.00222", 2, None).unwrap();
        let frame = DiscreteFrame::new(design, 10).unwrap();
        let c = random_coeffs(2, 10, 5);
        let vals = frame.points().values(&c);
        let fit = hyperinterpolate(&frame, &vals).unwrap();
        assert!(fit.l2_distance(&c) < 1e-10 * c.l2_norm());
        assert!(residual_at_nodes(&frame, &vals).unwrap() < 1e-9);
        assert!(l2_error_coeffs(&frame, &c).unwrap() < 1e-9);
    }

    #[test]
    fn high_harmonic_is_invisible() {
        let design = resolve_design("sf020.00222", 2, None).unwrap();
        let frame = DiscreteFrame::new(design, 8).unwrap();
        let n = frame.n() as f64;
        let reference = reference_rule(2, 24).unwrap();
        for degree in [9, 10, 11, 12] {
            let y = CoefficientVector::harmonic(2, degree, 4).unwrap();
            let vals = frame.points().values(&y);
            let fit = hyperinterpolate(&frame, &vals).unwrap();
            assert!(fit.l2_norm() < 1e-10);
            assert!((l2_error(&frame, &y, &reference).unwrap() - 1.0).abs() < 1e-9);
            // ‖Y‖_n = 1 needs the square (degree 2ℓ′) integrated exactly
            if 2 * degree <= 20 {
                assert!((residual_at_nodes(&frame, &vals).unwrap() - n.sqrt()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn constants_and_scaling() {
        let design = builtin_design("icosahedron").unwrap();
        let frame = DiscreteFrame::new(design, 2).unwrap();
        let fit = hyperinterpolate(&frame, &[2.5; 12]).unwrap();
        assert!((fit.get(1) - 2.5).abs() < 1e-12);
        assert!(fit.as_slice()[1..].iter().all(|v| v.abs() < 1e-12));
        let f: Vec<f64> = frame.points().iter().map(|p| p.coords()[0].powi(3)).collect();
        let r = residual_at_nodes(&frame, &f).unwrap();
        let scaled: Vec<f64> = f.iter().map(|v| -3.0 * v).collect();
        assert!((residual_at_nodes(&frame, &scaled).unwrap() - 3.0 * r).abs() < 1e-12);
    }

    #[test]
    fn least_squares_fallback_matches_on_designs() {
        let design = resolve_design("sf020.00222", 2, None).unwrap();
        let direct = DiscreteFrame::new(design.clone(), 6).unwrap();
        let ls = DiscreteFrame::least_squares(design, 6).unwrap();
        assert_eq!(ls.solver(), Solver::LeastSquares);
        let f: Vec<f64> = direct.points().iter().map(|p| (3.0 * p.coords()[2]).exp()).collect();
        let a = hyperinterpolate(&direct, &f).unwrap();
        let b = hyperinterpolate(&ls, &f).unwrap();
        assert!(a.l2_distance(&b) < 1e-9);
    }

    #[test]
    fn least_squares_on_random_points() {
        let pts = crate::sphere::sample_uniform(2, 60, 9).unwrap();
        let frame = DiscreteFrame::least_squares(crate::designs::SphericalDesign::new(pts, 0), 3).unwrap();
        let c = random_coeffs(2, 3, 2);
        let fit = hyperinterpolate(&frame, &frame.points().values(&c)).unwrap();
        assert!(fit.l2_distance(&c) < 1e-9);
    }

    #[test]
    fn discrete_inner_checks() {
        assert_eq!(discrete_inner(&[1.0, 1.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert!(discrete_inner(&[1.0], &[1.0, 2.0]).is_err());
        assert!(discrete_inner(&[], &[]).is_err());
    }
}
