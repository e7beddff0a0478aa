//! Sobolev and Besov norms on coefficient representations, and synthetic
//! functions of prescribed smoothness.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::{dim_poly_space, eigenvalue, CoefficientVector};
use crate::needlets::{lp_norm, NeedletCoefficients};
use crate::rng::{standard_normal, standard_normal_vec, substream};

/// Smoothness `s`, integrability `r`, summability `q`, radius `R` on S^d.
/// `r` and `q` may be `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothnessSpec {
    pub s: f64,
    pub r: f64,
    pub q: f64,
    pub radius: f64,
    pub d: usize,
}

impl SmoothnessSpec {
    pub fn new(s: f64, r: f64, q: f64, radius: f64, d: usize) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!("smoothness must be positive, got {s}")));
        }
        for (name, v) in [("r", r), ("q", q)] {
            if !(v >= 1.0) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [1, ∞], got {v}")));
            }
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("sphere dimension must be at least 1".into()));
        }
        Ok(Self { s, r, q, radius, d })
    }

    /// Sobolev ball `H^s(R)`; requires `s > d/2`.
    pub fn sobolev(s: f64, radius: f64, d: usize) -> Result<Self> {
        let spec = Self::new(s, 2.0, 2.0, radius, d)?;
        spec.require_sobolev()?;
        Ok(spec)
    }

    pub fn require_sobolev(&self) -> Result<()> {
        if self.s <= self.d as f64 / 2.0 {
            return Err(Error::InvalidArgument(format!(
                "Sobolev smoothness must exceed d/2 = {}, got {}",
                self.d as f64 / 2.0,
                self.s
            )));
        }
        Ok(())
    }

    pub fn require_besov(&self) -> Result<()> {
        if self.s <= self.d as f64 / self.r {
            return Err(Error::InvalidArgument(format!(
                "Besov smoothness must exceed d/r = {}, got {}",
                self.d as f64 / self.r,
                self.s
            )));
        }
        Ok(())
    }

    /// Level weight exponent `s − d/r + d/2`.
    pub fn level_exponent(&self) -> f64 {
        self.s - self.d as f64 / self.r + self.d as f64 / 2.0
    }
}

/// `(Σ_ℓ (1 + λ_ℓ)^s Σ_m θ_{ℓ,m}²)^{1/2}`.
pub fn sobolev_norm(c: &CoefficientVector, s: f64) -> f64 {
    let d = c.dim();
    (0..=c.max_degree())
        .map(|l| {
            let w = (1.0 + eigenvalue(d, l) as f64).powf(s);
            w * c.degree_block(l).iter().map(|v| v * v).sum::<f64>()
        })
        .sum::<f64>()
        .sqrt()
}

/// `‖(2^{j(s−d/r+d/2)} ‖β_j‖_{ℓ^r})_j‖_{ℓ^q}`.
pub fn besov_norm(beta: &NeedletCoefficients, spec: &SmoothnessSpec) -> f64 {
    let e = spec.level_exponent();
    let terms: Vec<f64> = (0..beta.levels().len())
        .map(|j| 2f64.powf(j as f64 * e) * beta.level_norm(j, spec.r))
        .collect();
    lp_norm(&terms, spec.q)
}

/// Coefficient profile for [`make_sobolev_function`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Gaussian coefficients with standard deviation `∝ (1+λ_ℓ)^{−(s+d/2+0.05)/2}`.
    Random,
    /// All mass on degree `L + 1` in a seeded random direction — the ball
    /// element maximizing `‖f − Π_L f‖`.
    Extremal(usize),
}

/// A function in the Sobolev ball with `sobolev_norm = R`, truncated at
/// degree `L_max`.
pub fn make_sobolev_function(
    d: usize,
    s: f64,
    radius: f64,
    max_degree: usize,
    seed: u64,
    profile: Profile,
) -> Result<CoefficientVector> {
    SmoothnessSpec::sobolev(s, radius, d)?;
    if d != 1 && d != 2 {
        return Err(Error::NoExplicitBasis(d));
    }
    let mut c = CoefficientVector::zeros(d, max_degree);
    match profile {
        Profile::Random => {
            let mut rng = substream(seed, "sobolev/random", 0);
            let decay = (s + d as f64 / 2.0 + 0.05) / 2.0;
            for l in 0..=max_degree {
                let sd = (1.0 + eigenvalue(d, l) as f64).powf(-decay);
                for v in c.degree_block_mut(l) {
                    *v = sd * standard_normal(&mut rng);
                }
            }
        }
        Profile::Extremal(l) => {
            if l + 1 > max_degree {
                return Err(Error::InvalidArgument(format!(
                    "extremal profile at degree {} exceeds L_max = {max_degree}",
                    l + 1
                )));
            }
            let mut rng = substream(seed, "sobolev/extremal", l as u64);
            let block = c.degree_block_mut(l + 1);
            let g = standard_normal_vec(&mut rng, block.len());
            block.copy_from_slice(&g);
        }
    }
    let norm = sobolev_norm(&c, s);
    if norm == 0.0 {
        return Err(Error::InvalidArgument("degenerate draw with zero norm".into()));
    }
    Ok(c.scaled(radius / norm))
}

/// Outcome of the embedding check `‖β‖_{B^s_{2,q}} ≤ C ‖β‖_{B^s_{r,q}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub holds: bool,
}

/// Checks `B^s_{r,q} ⊆ B^s_{2,q}` on a coefficient array (`r ≥ 2`).
///
/// Hölder on level `j` gives `‖β_j‖_2 ≤ N_j^{1/2−1/r} ‖β_j‖_r`; after the
/// level weights this is `C = max_j (N_j / 2^{jd})^{1/2−1/r}`, attained by
/// flat coefficients on the maximizing level.
pub fn besov_embedding_check(beta: &NeedletCoefficients, s: f64, r: f64, q: f64, d: usize) -> Result<EmbeddingCheck> {
    if !(r >= 2.0) {
        return Err(Error::InvalidArgument(format!("embedding needs r ≥ 2, got {r}")));
    }
    let spec_r = SmoothnessSpec::new(s, r, q, 1.0, d)?;
    let spec_2 = SmoothnessSpec::new(s, 2.0, q, 1.0, d)?;
    let expo = 0.5 - 1.0 / r;
    let constant = if r == 2.0 {
        1.0
    } else {
        beta.levels()
            .iter()
            .enumerate()
            .map(|(j, b)| (b.len() as f64 / 2f64.powi((j * d) as i32)).powf(expo))
            .fold(0.0, f64::max)
    };
    let lhs = besov_norm(beta, &spec_2);
    let rhs = besov_norm(beta, &spec_r);
    Ok(EmbeddingCheck {
        lhs,
        rhs,
        constant,
        holds: lhs <= constant * rhs * (1.0 + 1e-12),
    })
}

/// Tail energy `Σ_{ℓ > L} Σ_m θ²`.
pub fn tail_energy(c: &CoefficientVector, degree: usize) -> f64 {
    let start = dim_poly_space(c.dim(), degree).min(c.len());
    c.as_slice()[start..].iter().map(|v| v * v).sum()
}
