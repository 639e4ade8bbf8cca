//! Dense symmetric eigendecomposition and matrix functional calculus.
//!
//! Cyclic Jacobi rotations in a fixed sweep order give a deterministic
//! factorization `A = V diag(λ) Vᵀ` with high relative accuracy on small
//! symmetric matrices. Spectral projections, pseudo-inverses and operator
//! square roots are all evaluated through that factorization.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("matrix entry ({row},{col}) is not finite")]
    InvalidMatrix { row: usize, col: usize },
    #[error("Jacobi iteration did not converge; off-diagonal residual {residual:e}")]
    ConvergenceFailure { residual: f64 },
    #[error("spectral function is not finite at retained eigenvalue {eigenvalue:e}")]
    SingularFunctionValue { eigenvalue: f64 },
}

/// Dense real symmetric matrix, row-major storage.
///
/// Construction symmetrizes: entry (i,j) and (j,i) are replaced by their
/// mean, so `at(i, j) == at(j, i)` holds exactly afterwards.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    /// Build from a row-major slice of length `n * n`, symmetrizing.
    pub fn new(n: usize, entries: Vec<f64>) -> Self {
        assert!(n >= 1, "SymMatrix requires n >= 1");
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        let mut m = Self { n, entries };
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (m.entries[i * n + j] + m.entries[j * n + i]);
                m.entries[i * n + j] = v;
                m.entries[j * n + i] = v;
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "rows must form a square matrix"
        );
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    /// Entry-wise constructor; `f` is only consulted for i <= j.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "SymMatrix requires n >= 1");
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Self { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diag(d: &[f64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "vector length must match dimension");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Quadratic form xᵀ A x.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn first_non_finite(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.at(i, j).is_finite() {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.
///
/// The finite-dimensional stand-in for a projection valued measure: every
/// spectral projection and Borel-function image used elsewhere in the crate
/// is assembled from these eigenpairs.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Column-major: eigenvector k occupies vectors[k*n..(k+1)*n].
    vectors: Vec<f64>,
    source_dim: usize,
    ortho_tol: f64,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        let n = self.source_dim;
        &self.vectors[k * n..(k + 1) * n]
    }

    pub fn dim(&self) -> usize {
        self.source_dim
    }

    pub fn ortho_tol(&self) -> f64 {
        self.ortho_tol
    }

    pub fn eigenpairs(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.eigenvalues
            .iter()
            .copied()
            .zip((0..self.source_dim).map(|k| self.vector(k)))
    }

    /// Largest |λ|; zero only for the zero matrix.
    pub fn lambda_max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Smallest eigenvalue.
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Max-norm deviation of VᵀV from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.source_dim;
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in j..n {
                let d: f64 = self
                    .vector(j)
                    .iter()
                    .zip(self.vector(k))
                    .map(|(a, b)| a * b)
                    .sum();
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }
}

const MAX_SWEEPS: usize = 100;
const OFF_DIAG_REL_TOL: f64 = 1e-14;
pub const DEFAULT_ORTHO_TOL: f64 = 1e-12;

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// The sweep order is fixed ((0,1), (0,2), ..., (n-2,n-1)), so the result is
/// deterministic for a fixed input. Convergence is declared when the
/// off-diagonal Frobenius norm falls below `1e-14 * ||A||_F`, or when a sweep
/// stalls at the roundoff floor. `tol` bounds the accepted orthonormality
/// defect of the eigenvector matrix.
pub fn eig_sym(a: &SymMatrix, tol: f64) -> Result<SpectralDecomposition, SpectralError> {
    if let Some((row, col)) = a.first_non_finite() {
        return Err(SpectralError::InvalidMatrix { row, col });
    }
    let n = a.dim();
    let mut work = a.entries.clone();
    let mut v = vec![0.0f64; n * n]; // row-major rotation accumulator
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let norm_f = a.frobenius();
    let target = OFF_DIAG_REL_TOL * norm_f;
    let floor = 64.0 * n as f64 * f64::EPSILON * norm_f;

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += m[p * n + q] * m[p * n + q];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut prev_off = f64::INFINITY;
    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        let off = off_norm(&work);
        if off <= target || (off >= 0.9 * prev_off && off <= floor) {
            converged = true;
            break;
        }
        prev_off = off;

        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = work[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = work[p * n + p];
                let aqq = work[q * n + q];
                // stable rotation angle (Golub & Van Loan 8.4)
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                } else {
                    0.5 / theta
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                work[p * n + p] = app - t * apq;
                work[q * n + q] = aqq + t * apq;
                work[p * n + q] = 0.0;
                work[q * n + p] = 0.0;
                for j in 0..n {
                    if j == p || j == q {
                        continue;
                    }
                    let ajp = work[j * n + p];
                    let ajq = work[j * n + q];
                    let np = ajp - s * (ajq + tau * ajp);
                    let nq = ajq + s * (ajp - tau * ajq);
                    work[j * n + p] = np;
                    work[p * n + j] = np;
                    work[j * n + q] = nq;
                    work[q * n + j] = nq;
                }
                for j in 0..n {
                    let vjp = v[j * n + p];
                    let vjq = v[j * n + q];
                    v[j * n + p] = vjp - s * (vjq + tau * vjp);
                    v[j * n + q] = vjq + s * (vjp - tau * vjq);
                }
            }
        }
    }
    if !converged {
        let off = off_norm(&work);
        if off > target && off > floor {
            return Err(SpectralError::ConvergenceFailure { residual: off });
        }
    }

    // sort ascending; stable order for equal values keeps the result deterministic
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        work[i * n + i]
            .partial_cmp(&work[j * n + j])
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&k| work[k * n + k]).collect();
    let mut vectors = vec![0.0f64; n * n]; // column-major
    for (slot, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[slot * n + i] = v[i * n + k];
        }
    }

    let mut d = SpectralDecomposition {
        eigenvalues,
        vectors,
        source_dim: n,
        ortho_tol: tol,
    };
    regularize_clusters(&mut d);
    fix_signs(&mut d);

    let defect = d.orthonormality_defect();
    if defect > tol {
        return Err(SpectralError::ConvergenceFailure { residual: defect });
    }
    Ok(d)
}

/// Re-orthonormalize eigenvectors inside numerically degenerate clusters,
/// in index order. Downstream code may only rely on a cluster's span.
fn regularize_clusters(d: &mut SpectralDecomposition) {
    let n = d.source_dim;
    let scale = d.lambda_max_abs().max(1.0);
    let cluster_tol = 1e-12 * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (d.eigenvalues[end] - d.eigenvalues[end - 1]).abs() <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            // modified Gram-Schmidt over columns start..end
            for k in start..end {
                for j in start..k {
                    let proj: f64 = {
                        let (vk, vj) = (d.vector(k), d.vector(j));
                        vk.iter().zip(vj).map(|(a, b)| a * b).sum()
                    };
                    for i in 0..n {
                        let vji = d.vectors[j * n + i];
                        d.vectors[k * n + i] -= proj * vji;
                    }
                }
                let nrm: f64 = d.vector(k).iter().map(|x| x * x).sum::<f64>().sqrt();
                if nrm > 0.0 {
                    for i in 0..n {
                        d.vectors[k * n + i] /= nrm;
                    }
                }
            }
        }
        start = end;
    }
}

/// Deterministic sign convention: the largest-magnitude component of each
/// eigenvector (first such index on ties) is made non-negative.
fn fix_signs(d: &mut SpectralDecomposition) {
    let n = d.source_dim;
    for k in 0..n {
        let col = d.vector(k);
        let mut best = 0usize;
        for i in 1..n {
            if col[i].abs() > col[best].abs() {
                best = i;
            }
        }
        if col[best] < 0.0 {
            for i in 0..n {
                d.vectors[k * n + i] = -d.vectors[k * n + i];
            }
        }
    }
}

/// Assemble V diag(φ(λ)) Vᵀ.
///
/// Roundoff-negative eigenvalues in [-eigen_cutoff·λ_max, 0) are clamped to
/// zero before `phi` is applied; a genuinely retained eigenvalue on which
/// `phi` is non-finite is an error.
pub fn apply_spectral_function(
    d: &SpectralDecomposition,
    phi: impl Fn(f64) -> f64,
    eigen_cutoff: f64,
) -> Result<SymMatrix, SpectralError> {
    let n = d.dim();
    let clamp_band = eigen_cutoff * d.lambda_max_abs();
    let mut images = Vec::with_capacity(n);
    for &lam in d.eigenvalues() {
        let lam = if lam < 0.0 && lam >= -clamp_band {
            0.0
        } else {
            lam
        };
        let img = phi(lam);
        if !img.is_finite() {
            return Err(SpectralError::SingularFunctionValue { eigenvalue: lam });
        }
        images.push(img);
    }
    Ok(assemble(d, &images))
}

/// Spectral pseudo-inverse: eigenvalues at or below `rank_tol * λ_max` map to
/// zero, the rest to their reciprocals. All eigenvalues below the cutoff
/// yields the zero operator (an explicit value, not a failure).
pub fn pseudo_inverse(d: &SpectralDecomposition, rank_tol: f64) -> SymMatrix {
    assert!(rank_tol > 0.0, "rank_tol must be positive");
    let cutoff = rank_tol * d.lambda_max_abs();
    let images: Vec<f64> = d
        .eigenvalues()
        .iter()
        .map(|&lam| if lam <= cutoff { 0.0 } else { 1.0 / lam })
        .collect();
    assemble(d, &images)
}

/// Operator norm: max |λ|.
pub fn operator_norm(d: &SpectralDecomposition) -> f64 {
    d.lambda_max_abs()
}

fn assemble(d: &SpectralDecomposition, images: &[f64]) -> SymMatrix {
    let n = d.dim();
    SymMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| images[k] * d.vector(k)[i] * d.vector(k)[j])
            .sum()
    })
}
