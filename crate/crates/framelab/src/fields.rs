//! Random fields over a finite vertex set.
//!
//! A family of L² random variables (φ_x) indexed by vertices has the
//! covariance E(φ_x φ_y) as its Gramian, so the whole spectral apparatus
//! applies verbatim: the covariance acts as the generalized frame operator
//! in synthesis coordinates, and its spectral bands carry the estimate
//!
//! ```text
//! a E(|f|²) ≤ Σ_x |E(φ_x f)|² ≤ b E(|f|²)      for f = Σ c_x φ_x in H(a,b)
//! ```
//!
//! which in coordinates is the exact inequality a·(cᵀCc) ≤ ||Cc||² ≤ b·(cᵀCc).
//! Gaussian sampling through the spectral square root C^{1/2} makes the
//! second moments empirically testable; all draws are seeded and
//! bit-reproducible.

use serde::Serialize;
use thiserror::Error;

use crate::rng::SplitMix64;
use crate::spectral::{
    apply_spectral_function, eig_sym, SpectralDecomposition, SpectralError, SymMatrix,
    DEFAULT_ORTHO_TOL,
};
use crate::util::dot;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("covariance is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("shape mismatch: {message}")]
    ShapeError { message: String },
    #[error("vector {index} lies outside the band span: residual {residual:e}")]
    BandMembershipError { index: usize, residual: f64 },
}

/// Relative floor below which a covariance eigenvalue counts as roundoff.
const PSD_TOL: f64 = 1e-10;

/// Gaussian field model: a PSD covariance and its spectral square root.
#[derive(Debug, Clone)]
pub struct RandomFieldModel {
    pub covariance: SymMatrix,
    /// C^{1/2} by spectral calculus; factor·factor = C within roundoff.
    pub factor: SymMatrix,
    pub seed: u64,
    decomposition: SpectralDecomposition,
}

impl RandomFieldModel {
    /// Build a model from a covariance matrix. Roundoff-negative eigenvalues
    /// are clamped to zero; a genuinely indefinite matrix is rejected.
    pub fn new(covariance: SymMatrix, seed: u64) -> Result<Self, FieldError> {
        let d = eig_sym(&covariance, DEFAULT_ORTHO_TOL)?;
        let floor = -PSD_TOL * d.lambda_max_abs();
        if d.lambda_min() < floor {
            return Err(FieldError::NotPositiveSemidefinite {
                min_eigenvalue: d.lambda_min(),
            });
        }
        let factor = apply_spectral_function(&d, |l| l.max(0.0).sqrt(), PSD_TOL)?;
        Ok(Self {
            covariance,
            factor,
            seed,
            decomposition: d,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.covariance.dim()
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// Draw `m` field realizations: row k is factor · z_k with z_k i.i.d.
    /// standard normal from a stream derived per row, so the output is
    /// bit-reproducible for a fixed seed regardless of batching.
    pub fn sample(&self, m: usize) -> Vec<Vec<f64>> {
        (0..m)
            .map(|k| {
                let mut rng = SplitMix64::derive(self.seed, k as u64);
                let z = rng.normal_vec(self.vertex_count());
                self.factor.apply(&z)
            })
            .collect()
    }
}

/// Draw `m` realizations from the model (free-function form of
/// `RandomFieldModel::sample`).
pub fn sample_field(model: &RandomFieldModel, m: usize) -> Vec<Vec<f64>> {
    model.sample(m)
}

#[derive(Debug, Clone, Serialize)]
pub struct RandomFrameDiagnostic {
    /// ℓ² norm of each covariance row (finite trivially at truncation).
    pub row_l2: Vec<f64>,
    pub min_eigenvalue: f64,
    pub lambda_max: f64,
    pub is_psd: bool,
    /// PSD at this truncation means no eigenvector with eigenvalue −1 can
    /// exist, so the defining implication of a random frame holds vacuously.
    pub no_negative_one_eigenvector: bool,
}

/// Audit the random-frame conditions on a covariance truncation.
pub fn check_random_frame(c: &SymMatrix) -> Result<RandomFrameDiagnostic, FieldError> {
    let n = c.dim();
    let row_l2 = (0..n)
        .map(|i| c.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    let d = eig_sym(c, DEFAULT_ORTHO_TOL)?;
    let is_psd = d.lambda_min() >= -PSD_TOL * d.lambda_max_abs();
    Ok(RandomFrameDiagnostic {
        row_l2,
        min_eigenvalue: d.lambda_min(),
        lambda_max: d.lambda_max_abs(),
        is_psd,
        no_negative_one_eigenvector: is_psd,
    })
}

/// Empirical covariance `C_hat[x][y] = (1/M) Σ_k samples[k][x]·samples[k][y]`.
pub fn empirical_gramian(samples: &[Vec<f64>]) -> SymMatrix {
    assert!(samples.len() >= 2, "need at least two samples");
    let m = samples.len() as f64;
    let d = samples[0].len();
    SymMatrix::from_fn(d, |i, j| {
        samples.iter().map(|row| row[i] * row[j]).sum::<f64>() / m
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BandEstimateItem {
    pub index: usize,
    /// E(|f|²) = cᵀ C c.
    pub second_moment: f64,
    /// Σ_x |E(φ_x f)|² = ||C c||².
    pub frame_sum: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BandEstimateReport {
    pub items: Vec<BandEstimateItem>,
    pub a: f64,
    pub b: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Deterministic band estimate: for each coefficient vector c in the span of
/// covariance eigenvectors with eigenvalues in [a, b], check
/// a·(cᵀCc) ≤ ||Cc||² ≤ b·(cᵀCc) within `tol`. Band membership is verified
/// first; a vector outside the span is an error, not a failed verdict.
pub fn band_estimate_check(
    c: &SymMatrix,
    a: f64,
    b: f64,
    c_vectors: &[Vec<f64>],
    tol: f64,
) -> Result<BandEstimateReport, FieldError> {
    assert!(a > 0.0 && b >= a, "need 0 < a <= b");
    let d = eig_sym(c, DEFAULT_ORTHO_TOL)?;
    let eps = 1e-12 * d.lambda_max_abs();
    let band_vectors: Vec<&[f64]> = d
        .eigenpairs()
        .filter(|(lam, _)| *lam >= a - eps && *lam <= b + eps)
        .map(|(_, v)| v)
        .collect();
    let mut items = Vec::with_capacity(c_vectors.len());
    let mut all_pass = true;
    for (index, cv) in c_vectors.iter().enumerate() {
        if cv.len() != c.dim() {
            return Err(FieldError::ShapeError {
                message: format!(
                    "vector {index} has length {}, expected {}",
                    cv.len(),
                    c.dim()
                ),
            });
        }
        let norm: f64 = dot(cv, cv).sqrt();
        let mut residual = cv.clone();
        for v in &band_vectors {
            let proj = dot(v, cv);
            for (r, vi) in residual.iter_mut().zip(v.iter()) {
                *r -= proj * vi;
            }
        }
        let res_norm = dot(&residual, &residual).sqrt();
        if res_norm > tol.max(1e-10) * norm.max(f64::MIN_POSITIVE) {
            return Err(FieldError::BandMembershipError {
                index,
                residual: res_norm,
            });
        }
        let second_moment = c.quad_form(cv);
        let cc = c.apply(cv);
        let frame_sum = dot(&cc, &cc);
        let lower = a * second_moment;
        let upper = b * second_moment;
        let pass = frame_sum >= lower - tol && frame_sum <= upper + tol;
        all_pass &= pass;
        items.push(BandEstimateItem {
            index,
            second_moment,
            frame_sum,
            lower,
            upper,
            pass,
        });
    }
    Ok(BandEstimateReport {
        items,
        a,
        b,
        tol,
        pass: all_pass,
    })
}

/// The generalized frame operator in synthesis coordinates: c ↦ C·c.
/// Its self-adjointness is witnessed by the symmetry of C itself.
pub fn generalized_frame_operator_apply(
    c: &SymMatrix,
    coeffs: &[f64],
) -> Result<Vec<f64>, FieldError> {
    if coeffs.len() != c.dim() {
        return Err(FieldError::ShapeError {
            message: format!(
                "coefficient length {} vs dimension {}",
                coeffs.len(),
                c.dim()
            ),
        });
    }
    Ok(c.apply(coeffs))
}
