//! Points on the unit sphere S^d in R^{d+1}.
//!
//! All integrals in the crate are taken against the normalized surface
//! measure, so `∫ 1 dμ = 1`.

use crate::error::{Error, Result};
use crate::rng::{self, Rng};

/// Tolerance on `|‖x‖ - 1|` accepted by [`SpherePoint::new`], and the
/// coordinate-wise tolerance used by `==`.
pub const UNIT_TOL: f64 = 1e-12;

/// A unit vector in R^{d+1}.
#[derive(Debug, Clone)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Wraps `coords`, which must already have unit norm within [`UNIT_TOL`].
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a sphere point needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        let norm = euclidean_norm(&coords);
        if (norm - 1.0).abs() > UNIT_TOL || !norm.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "coordinates have norm {norm}, not 1"
            )));
        }
        Ok(Self { coords })
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self> {
        let norm = euclidean_norm(&coords);
        if coords.len() < 2 || !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument(
                "cannot normalize a zero, non-finite or one-dimensional vector".into(),
            ));
        }
        coords.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { coords })
    }

    /// Point `(cos φ, sin φ)` on S^1.
    pub fn on_circle(angle: f64) -> Self {
        Self {
            coords: vec![angle.cos(), angle.sin()],
        }
    }

    /// Point on S^2 with polar angle `theta` (from the z-axis) and azimuth `phi`.
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            coords: vec![st * cp, st * sp, ct],
        }
    }

    /// Sphere dimension d (the point lives in R^{d+1}).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn antipode(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl PartialEq for SpherePoint {
    fn eq(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| (a - b).abs() <= UNIT_TOL)
    }
}

fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Inner product `⟨x, y⟩`, clamped to `[-1, 1]`.
pub fn dot(x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(dot_unchecked(x, y))
}

#[inline]
pub(crate) fn dot_unchecked(x: &SpherePoint, y: &SpherePoint) -> f64 {
    let s: f64 = x.coords.iter().zip(&y.coords).map(|(a, b)| a * b).sum();
    s.clamp(-1.0, 1.0)
}

/// A non-empty ordered set of points of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<SpherePoint>,
}

impl PointSet {
    pub fn new(points: Vec<SpherePoint>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidArgument("a point set needs at least one point".into()))?;
        let d = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        Ok(Self { points })
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SpherePoint> {
        self.points.iter()
    }

    /// Evaluates `f` at every point.
    pub fn values<F: SphereFunction + ?Sized>(&self, f: &F) -> Vec<f64> {
        self.points.iter().map(|x| f.eval(x)).collect()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a SpherePoint;
    type IntoIter = std::slice::Iter<'a, SpherePoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// I.i.d. uniform points on S^d: normalized standard Gaussian vectors.
pub fn sample_uniform(d: usize, n: usize, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be at least 1".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("sphere dimension must be at least 1".into()));
    }
    let mut rng = rng::substream(seed, "sample_uniform", 0);
    PointSet::new((0..n).map(|_| uniform_point(d, &mut rng)).collect())
}

pub(crate) fn uniform_point(d: usize, rng: &mut Rng) -> SpherePoint {
    loop {
        let v = rng::standard_normal_vec(rng, d + 1);
        // a draw this close to the origin is redrawn
        if euclidean_norm(&v) >= 1e-300 {
            return SpherePoint::normalized(v).expect("nonzero draw");
        }
    }
}

/// Anything that can be evaluated pointwise on the sphere.
pub trait SphereFunction {
    fn eval(&self, x: &SpherePoint) -> f64;
}

impl<F> SphereFunction for F
where
    F: Fn(&SpherePoint) -> f64,
{
    fn eval(&self, x: &SpherePoint) -> f64 {
        self(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> SpherePoint {
        SpherePoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn dot_products_of_axes() {
        let e1 = p(&[1.0, 0.0, 0.0]);
        let e2 = p(&[0.0, 1.0, 0.0]);
        assert_eq!(dot(&e1, &e1).unwrap(), 1.0);
        assert_eq!(dot(&e1, &e1.antipode()).unwrap(), -1.0);
        assert_eq!(dot(&e1, &e2).unwrap(), 0.0);
    }

    #[test]
    fn dot_rejects_mixed_dimensions() {
        let a = p(&[1.0, 0.0]);
        let b = p(&[1.0, 0.0, 0.0]);
        assert!(matches!(dot(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dot_is_clamped() {
        let a = SpherePoint::normalized(vec![1.0, 1e-9, 0.0]).unwrap();
        assert!(dot(&a, &a).unwrap() <= 1.0);
    }

    #[test]
    fn constructor_enforces_unit_norm() {
        assert!(SpherePoint::new(vec![0.6, 0.8, 0.6]).is_err());
        assert!(SpherePoint::new(vec![0.6, 0.8]).is_ok());
        assert!(SpherePoint::normalized(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn equality_is_tolerant() {
        let a = p(&[0.6, 0.8]);
        let b = SpherePoint::normalized(vec![0.6 + 1e-14, 0.8]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, p(&[0.8, 0.6]));
    }

    #[test]
    fn uniform_sampling_is_deterministic_and_unit() {
        let a = sample_uniform(2, 50, 11).unwrap();
        let b = sample_uniform(2, 50, 11).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.coords(), y.coords());
            assert!((euclidean_norm(x.coords()) - 1.0).abs() <= UNIT_TOL);
        }
        assert!(sample_uniform(2, 0, 1).is_err());
    }

    #[test]
    fn uniform_sample_mean_is_near_zero() {
        let n = 100_000;
        let pts = sample_uniform(2, n, 3).unwrap();
        for c in 0..3 {
            let mean = pts.iter().map(|x| x.coords()[c]).sum::<f64>() / n as f64;
            assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "coordinate {c}: {mean}");
        }
    }

    #[test]
    fn point_set_requires_homogeneous_dimension() {
        assert!(PointSet::new(vec![]).is_err());
        assert!(PointSet::new(vec![p(&[1.0, 0.0]), p(&[1.0, 0.0, 0.0])]).is_err());
    }
}
