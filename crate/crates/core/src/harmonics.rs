//! Spherical harmonics: eigenspace dimensions, the degree-major enumeration,
//! explicit real orthonormal bases on S^1 and S^2, zonal reproducing kernels
//! on every S^d, and coefficient vectors.
//!
//! Bases are orthonormal for the normalized measure, so `Y_1 ≡ 1`.
//!
//! Within a degree the order index `m` (1-based) runs, on S^2, through the
//! `sin(kφ)` terms for `k = ℓ, …, 1`, then the zonal term, then the
//! `cos(kφ)` terms for `k = 1, …, ℓ`. On S^1 it is `cos(ℓφ)` then `sin(ℓφ)`.

use crate::error::{Error, Result};
use crate::special;
use crate::sphere::{dot, SphereFunction, SpherePoint};

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=u128::from(k) {
        acc = acc * (u128::from(n - k) + i) / i;
    }
    acc
}

/// `N_ℓ^d = dim H_ℓ^d = C(ℓ+d, d) - C(ℓ+d-2, d)`.
pub fn dim_eigenspace(d: usize, degree: usize) -> usize {
    let (d, l) = (d as u64, degree as u64);
    let lower = if l + d >= 2 { binomial(l + d - 2, d) } else { 0 };
    (binomial(l + d, d) - lower) as usize
}

/// `dim P_L^d = Σ_{ℓ ≤ L} N_ℓ^d`.
pub fn dim_poly_space(d: usize, max_degree: usize) -> usize {
    (0..=max_degree).map(|l| dim_eigenspace(d, l)).sum()
}

/// Laplace–Beltrami eigenvalue `λ_ℓ = ℓ(ℓ + d - 1)`.
pub fn eigenvalue(d: usize, degree: usize) -> u64 {
    let l = degree as u64;
    l * (l + d as u64 - 1)
}

/// Degree/order pair `(ℓ, m)` with `1 ≤ m ≤ N_ℓ^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    pub degree: usize,
    pub order: usize,
    pub dim: usize,
}

impl HarmonicIndex {
    pub fn new(dim: usize, degree: usize, order: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("sphere dimension must be at least 1".into()));
        }
        let n = dim_eigenspace(dim, degree);
        if order == 0 || order > n {
            return Err(Error::OutOfRange(format!(
                "order {order} outside 1..={n} for degree {degree} on S^{dim}"
            )));
        }
        Ok(Self { degree, order, dim })
    }

    /// Flat index `j = ι(ℓ, m)`, starting at 1.
    pub fn flat(&self) -> usize {
        let before = if self.degree == 0 {
            0
        } else {
            dim_poly_space(self.dim, self.degree - 1)
        };
        before + self.order
    }
}

/// Inverse of [`HarmonicIndex::flat`].
pub fn enumerate(d: usize, flat: usize) -> Result<HarmonicIndex> {
    if flat == 0 {
        return Err(Error::OutOfRange("flat harmonic indices start at 1".into()));
    }
    let mut remaining = flat;
    let mut degree = 0;
    loop {
        let n = dim_eigenspace(d, degree);
        if remaining <= n {
            return HarmonicIndex::new(d, degree, remaining);
        }
        remaining -= n;
        degree += 1;
    }
}

fn require_explicit(d: usize) -> Result<()> {
    if d == 1 || d == 2 {
        Ok(())
    } else {
        Err(Error::NoExplicitBasis(d))
    }
}

/// Values `Y_j(x)` for `j = 1..=dim P_L^d`, `d ∈ {1, 2}`.
pub fn eval_basis(d: usize, max_degree: usize, x: &SpherePoint) -> Result<Vec<f64>> {
    require_explicit(d)?;
    if x.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.dim(),
        });
    }
    let mut out = vec![0.0; dim_poly_space(d, max_degree)];
    eval_basis_into(max_degree, x, &mut out);
    Ok(out)
}

/// Fills `out` (length `dim P_L^d`) with basis values. `x` must be on S^1 or S^2.
pub(crate) fn eval_basis_into(max_degree: usize, x: &SpherePoint, out: &mut [f64]) {
    match x.dim() {
        1 => circle_basis(max_degree, x.coords(), out),
        2 => sphere2_basis(max_degree, x.coords(), out),
        d => panic!("no explicit basis on S^{d}"),
    }
}

fn circle_basis(max_degree: usize, c: &[f64], out: &mut [f64]) {
    let sqrt2 = std::f64::consts::SQRT_2;
    out[0] = 1.0;
    let (c1, s1) = (c[0], c[1]);
    let (mut cos_l, mut sin_l) = (1.0, 0.0);
    for l in 1..=max_degree {
        let next = cos_l * c1 - sin_l * s1;
        sin_l = sin_l * c1 + cos_l * s1;
        cos_l = next;
        out[2 * l - 1] = sqrt2 * cos_l;
        out[2 * l] = sqrt2 * sin_l;
    }
}

fn sphere2_basis(max_degree: usize, c: &[f64], out: &mut [f64]) {
    let (x, y, z) = (c[0], c[1], c[2]);
    let s = (x * x + y * y).sqrt();
    let (cos_phi, sin_phi) = if s > 0.0 { (x / s, y / s) } else { (1.0, 0.0) };
    let sqrt2 = std::f64::consts::SQRT_2;

    // Fully normalized associated Legendre functions P̄_ℓ^m(z), scaled so
    // that Σ_m Y_{ℓ,m}² = 2ℓ + 1.
    let mut pmm = 1.0;
    let (mut cos_m, mut sin_m) = (1.0, 0.0);
    for m in 0..=max_degree {
        if m > 0 {
            let mf = m as f64;
            pmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
            let next = cos_m * cos_phi - sin_m * sin_phi;
            sin_m = sin_m * cos_phi + cos_m * sin_phi;
            cos_m = next;
        }
        let mut put = |l: usize, p: f64| {
            let base = l * l + l;
            if m == 0 {
                out[base] = p;
            } else {
                out[base + m] = sqrt2 * p * cos_m;
                out[base - m] = sqrt2 * p * sin_m;
            }
        };
        put(m, pmm);
        if m == max_degree {
            break;
        }
        let mf = m as f64;
        let mut p_prev = pmm;
        let mut p_cur = (2.0 * mf + 3.0).sqrt() * z * pmm;
        put(m + 1, p_cur);
        for l in m + 2..=max_degree {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let p_next = a * (z * p_cur - b * p_prev);
            p_prev = p_cur;
            p_cur = p_next;
            put(l, p_cur);
        }
    }
}

/// Reproducing kernel of `H_ℓ^d`: `N_ℓ^d · P_ℓ^{(d+1)}(⟨x, y⟩)`.
pub fn zonal_kernel(d: usize, degree: usize, x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    if x.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.dim(),
        });
    }
    let t = dot(x, y)?;
    Ok(dim_eigenspace(d, degree) as f64 * special::gegenbauer_normalized(degree, d, t)?)
}

/// Coefficients `θ_j` of a band-limited function in the basis `Y_j`,
/// `j = 1..=dim P_L^d` (stored 0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    dim: usize,
    max_degree: usize,
    coeffs: Vec<f64>,
}

impl CoefficientVector {
    pub fn zeros(dim: usize, max_degree: usize) -> Self {
        Self {
            dim,
            max_degree,
            coeffs: vec![0.0; dim_poly_space(dim, max_degree)],
        }
    }

    pub fn from_vec(dim: usize, max_degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        let expected = dim_poly_space(dim, max_degree);
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self {
            dim,
            max_degree,
            coeffs,
        })
    }

    /// A single harmonic `Y_{ℓ,m}` with unit coefficient.
    pub fn harmonic(dim: usize, degree: usize, order: usize) -> Result<Self> {
        let idx = HarmonicIndex::new(dim, degree, order)?;
        let mut c = Self::zeros(dim, degree);
        c.coeffs[idx.flat() - 1] = 1.0;
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at flat index `j ≥ 1`, zero beyond the stored range.
    pub fn get(&self, flat: usize) -> f64 {
        flat.checked_sub(1)
            .and_then(|i| self.coeffs.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    /// Coefficients of degree `ℓ` (empty beyond `max_degree`).
    pub fn degree_block(&self, degree: usize) -> &[f64] {
        if degree > self.max_degree {
            return &[];
        }
        let start = if degree == 0 {
            0
        } else {
            dim_poly_space(self.dim, degree - 1)
        };
        &self.coeffs[start..start + dim_eigenspace(self.dim, degree)]
    }

    pub fn degree_block_mut(&mut self, degree: usize) -> &mut [f64] {
        let start = if degree == 0 {
            0
        } else {
            dim_poly_space(self.dim, degree - 1)
        };
        let len = dim_eigenspace(self.dim, degree);
        &mut self.coeffs[start..start + len]
    }

    /// `‖f‖_{L²}` by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Zero-padded or truncated copy with the given maximal degree.
    pub fn resized(&self, max_degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(dim_poly_space(self.dim, max_degree), 0.0);
        Self {
            dim: self.dim,
            max_degree,
            coeffs,
        }
    }

    /// `‖self - other‖_{L²}`; the shorter vector is zero-padded.
    pub fn l2_distance(&self, other: &Self) -> f64 {
        let n = self.len().max(other.len());
        (1..=n)
            .map(|j| (self.get(j) - other.get(j)).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            max_degree: self.max_degree,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Evaluates the expansion at `x` (d ∈ {1, 2}).
    pub fn evaluate(&self, x: &SpherePoint) -> Result<f64> {
        let basis = eval_basis(self.dim, self.max_degree, x)?;
        Ok(basis.iter().zip(&self.coeffs).map(|(b, c)| b * c).sum())
    }
}

impl SphereFunction for CoefficientVector {
    fn eval(&self, x: &SpherePoint) -> f64 {
        self.evaluate(x).expect("coefficient vector evaluated on a matching sphere")
    }
}

/// Orthogonal projection `Π_L` onto `P_L^d`.
pub fn project(c: &CoefficientVector, max_degree: usize) -> Result<CoefficientVector> {
    if max_degree > c.max_degree {
        return Err(Error::InvalidArgument(format!(
            "projection degree {max_degree} exceeds the stored degree {}",
            c.max_degree
        )));
    }
    Ok(c.resized(max_degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::reference_rule;
    use crate::sphere::sample_uniform;

    #[test]
    fn eigenspace_dimensions() {
        assert_eq!(dim_eigenspace(2, 0), 1);
        assert_eq!(dim_eigenspace(2, 3), 7);
        assert_eq!(dim_eigenspace(3, 2), 9);
        assert_eq!(dim_eigenspace(1, 0), 1);
        assert_eq!(dim_eigenspace(1, 5), 2);
        for l in 0..200 {
            assert_eq!(dim_eigenspace(2, l), 2 * l + 1);
            assert_eq!(dim_eigenspace(3, l), (l + 1) * (l + 1));
        }
    }

    #[test]
    fn poly_space_dimensions() {
        assert_eq!(dim_poly_space(2, 10), 121);
        assert_eq!(dim_poly_space(1, 3), 7);
        for d in 1..6 {
            assert_eq!(dim_poly_space(d, 0), 1);
        }
        for l in 0..=1000 {
            assert_eq!(dim_poly_space(2, l), (l + 1) * (l + 1));
        }
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(eigenvalue(2, 0), 0);
        assert_eq!(eigenvalue(2, 1), 2);
        assert_eq!(eigenvalue(3, 4), 24);
    }

    #[test]
    fn enumeration_roundtrip() {
        let first = enumerate(2, 1).unwrap();
        assert_eq!((first.degree, first.order), (0, 1));
        let second = enumerate(2, 2).unwrap();
        assert_eq!((second.degree, second.order), (1, 1));
        for d in 1..=3 {
            for j in 1..=10_000 {
                assert_eq!(enumerate(d, j).unwrap().flat(), j);
            }
        }
        assert!(enumerate(2, 0).is_err());
    }

    #[test]
    fn enumeration_is_degree_major() {
        let mut last = (0, 0);
        for j in 1..500 {
            let h = enumerate(2, j).unwrap();
            assert!((h.degree, h.order) > last);
            last = (h.degree, h.order);
        }
    }

    #[test]
    fn basis_constant_term_is_one() {
        for x in sample_uniform(2, 20, 1).unwrap().iter() {
            assert!((eval_basis(2, 5, x).unwrap()[0] - 1.0).abs() < 1e-15);
        }
        assert!(eval_basis(3, 2, &SpherePoint::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn addition_theorem_on_s2() {
        let pts = sample_uniform(2, 200, 5).unwrap();
        let mut worst: f64 = 0.0;
        for pair in pts.points().chunks(2) {
            let (x, y) = (&pair[0], &pair[1]);
            let bx = eval_basis(2, 10, x).unwrap();
            let by = eval_basis(2, 10, y).unwrap();
            for l in 0..=10 {
                let start = l * l;
                let sum: f64 = (start..start + 2 * l + 1).map(|j| bx[j] * by[j]).sum();
                worst = worst.max((sum - zonal_kernel(2, l, x, y).unwrap()).abs());
                let diag: f64 = (start..start + 2 * l + 1).map(|j| bx[j] * bx[j]).sum();
                assert!((diag - (2 * l + 1) as f64).abs() < 1e-10);
            }
        }
        assert!(worst <= 1e-9, "{worst}");
    }

    #[test]
    fn addition_theorem_on_s1() {
        let pts = sample_uniform(1, 40, 9).unwrap();
        for pair in pts.points().chunks(2) {
            let bx = eval_basis(1, 12, &pair[0]).unwrap();
            let by = eval_basis(1, 12, &pair[1]).unwrap();
            for l in 1..=12 {
                let sum = bx[2 * l - 1] * by[2 * l - 1] + bx[2 * l] * by[2 * l];
                let k = zonal_kernel(1, l, &pair[0], &pair[1]).unwrap();
                assert!((sum - k).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn orthonormal_under_reference_quadrature() {
        let l = 8;
        let rule = reference_rule(2, 2 * l).unwrap();
        let m = dim_poly_space(2, l);
        let mut gram = vec![0.0; m * m];
        for (x, w) in rule.points().iter().zip(rule.weights()) {
            let b = eval_basis(2, l, x).unwrap();
            for j in 0..m {
                for k in 0..m {
                    gram[j * m + k] += w * b[j] * b[k];
                }
            }
        }
        for j in 0..m {
            for k in 0..m {
                let target = if j == k { 1.0 } else { 0.0 };
                assert!((gram[j * m + k] - target).abs() <= 1e-10, "({j},{k})");
            }
        }
    }

    #[test]
    fn zonal_kernel_basics() {
        let pts = sample_uniform(3, 6, 2).unwrap();
        let (x, y) = (&pts.points()[0], &pts.points()[1]);
        assert!((zonal_kernel(3, 0, x, y).unwrap() - 1.0).abs() < 1e-15);
        for l in 0..10 {
            let k = zonal_kernel(3, l, x, x).unwrap();
            assert!((k - dim_eigenspace(3, l) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn projection() {
        let c = CoefficientVector::from_vec(2, 3, (1..=16).map(f64::from).collect()).unwrap();
        assert_eq!(project(&c, 3).unwrap(), c);
        let p1 = project(&project(&c, 2).unwrap(), 1).unwrap();
        assert_eq!(p1, project(&c, 1).unwrap());
        let tail: f64 = (10..=16).map(|v| f64::from(v).powi(2)).sum();
        let p2 = project(&c, 2).unwrap();
        assert!((c.l2_distance(&p2).powi(2) - tail).abs() < 1e-9);
        assert!(project(&c, 4).is_err());
    }

    #[test]
    fn coefficient_evaluation_matches_basis() {
        let c = CoefficientVector::harmonic(2, 3, 2).unwrap();
        let x = SpherePoint::from_polar(0.7, 1.3);
        let b = eval_basis(2, 3, &x).unwrap();
        assert!((c.eval(&x) - b[HarmonicIndex::new(2, 3, 2).unwrap().flat() - 1]).abs() < 1e-15);
    }
}
