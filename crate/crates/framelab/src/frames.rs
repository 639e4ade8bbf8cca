//! Analysis/synthesis operators, spectral band subspaces, and canonical
//! Parseval frames.
//!
//! The central construction: eigenpairs of the Gramian with eigenvalues in a
//! compact interval [a, b] ⊂ (0, ∞) span the maximal subspace H(a,b) on
//! which the system obeys the frame estimate
//!
//! ```text
//! a ||f||² ≤ Σₙ |⟨φₙ, f⟩|² ≤ b ||f||²
//! ```
//!
//! with the interval endpoints as frame bounds. Everything here is expressed
//! through synthesis coordinates: a coefficient vector ξ stands for the span
//! element f = Σ ξₙ φₙ, so ⟨f, g⟩ = ξᵀ G η and the analysis coefficients of
//! f are G ξ. That keeps every check a finite, exactly testable identity on
//! the Gramian.

use serde::Serialize;
use thiserror::Error;

use crate::gramian::Gramian;
use crate::rng::SplitMix64;
use crate::spectral::{
    apply_spectral_function, eig_sym, SpectralDecomposition, SpectralError, SymMatrix,
    DEFAULT_ORTHO_TOL,
};
use crate::systems::{SystemError, VectorSystem};
use crate::util::{dot, norm2};

#[derive(Debug, Error)]
pub enum FrameError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("representation mismatch: {message}")]
    RepresentationError { message: String },
    #[error("shape mismatch: {message}")]
    ShapeError { message: String },
    #[error("invalid band interval [{a}, {b}]: need 0 < a <= b < inf")]
    InvalidInterval { a: f64, b: f64 },
    #[error("no usable lower frame bound: smallest retained eigenvalue {eigenvalue:e} sits at the rank cutoff {cutoff:e}")]
    IllConditioned { eigenvalue: f64, cutoff: f64 },
}

/// An element of span{φₙ}, in one of two coordinate systems.
#[derive(Debug, Clone, PartialEq)]
pub enum SpanVector {
    /// Synthesis coordinates: the vector Σₙ ξₙ φₙ.
    Coefficients(Vec<f64>),
    /// Ambient coordinates (explicit systems only).
    Ambient(Vec<f64>),
}

/// Endpoint slack relative to λ_max when selecting band eigenvalues.
pub const BAND_EPS_REL: f64 = 1e-12;

/// Factor separating "retained" from "numerically zero" eigenvalues in the
/// Parseval/polar constructions: retained eigenvalues closer than this to
/// the rank cutoff are refused as ill-conditioned.
const ILL_SEPARATION: f64 = 10.0;

/// Maximal spectral band subspace H(a,b) in synthesis coordinates.
#[derive(Debug, Clone)]
pub struct FrameBand {
    pub a: f64,
    pub b: f64,
    /// Gramian eigenpairs (λ_k, ξ_k) with λ_k ∈ [a, b] and λ_k above the
    /// rank cutoff.
    pub selected: Vec<(f64, Vec<f64>)>,
    /// Orthonormal basis of H(a,b): ξ_k / √λ_k (unit vectors in the ℋ norm).
    pub onb: Vec<Vec<f64>>,
    /// Sharp attained bounds (min λ, max λ) over the selected eigenvalues.
    pub attained: Option<(f64, f64)>,
    /// Eigenvalues within the endpoint slack of a or b, as (index, λ).
    pub endpoint_sensitive: Vec<(usize, f64)>,
    /// True when the endpoint slack actually admitted an eigenvalue that
    /// lies outside the exact closed interval.
    pub endpoint_tolerance_applied: bool,
    pub rank_tol: f64,
    /// Endpoint slack relative to λ_max that was applied on extraction.
    pub band_eps: f64,
    /// Full decomposition of the Gramian; kept for maximality checks.
    pub decomposition: SpectralDecomposition,
}

impl FrameBand {
    pub fn dim(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }
}

/// Analysis coefficients (⟨φₙ, f⟩)ₙ of a span vector.
///
/// In synthesis coordinates this is G·ξ; in ambient coordinates it is the
/// vector of dot products against each φₙ.
pub fn analysis(g: &Gramian, sys: &VectorSystem, f: &SpanVector) -> Result<Vec<f64>, FrameError> {
    match f {
        SpanVector::Coefficients(xi) => {
            let xi = pad_to(xi, g.n)?;
            Ok(g.matrix.apply(&xi))
        }
        SpanVector::Ambient(x) => {
            let VectorSystem::ExplicitFinite { coordinates } = sys else {
                return Err(FrameError::RepresentationError {
                    message: format!(
                        "ambient coordinates are only defined for explicit systems, not {}",
                        sys.kind_name()
                    ),
                });
            };
            if x.len() != coordinates[0].len() {
                return Err(FrameError::ShapeError {
                    message: format!(
                        "ambient vector has length {}, ambient dimension is {}",
                        x.len(),
                        coordinates[0].len()
                    ),
                });
            }
            Ok(coordinates
                .iter()
                .take(g.n)
                .map(|row| dot(row, x))
                .collect())
        }
    }
}

/// Synthesis Σₙ ξₙ φₙ.
///
/// Explicit systems return the ambient vector; all other kinds return the
/// coefficient representation (padded to the system size when finite).
pub fn synthesis(sys: &VectorSystem, xi: &[f64]) -> Result<SpanVector, FrameError> {
    if let Some(n) = sys.len() {
        if xi.len() > n {
            return Err(FrameError::ShapeError {
                message: format!("{} coefficients for a system of {} vectors", xi.len(), n),
            });
        }
    }
    match sys {
        VectorSystem::ExplicitFinite { coordinates } => {
            let d = coordinates[0].len();
            let mut out = vec![0.0; d];
            for (c, row) in xi.iter().zip(coordinates) {
                for (o, v) in out.iter_mut().zip(row) {
                    *o += c * v;
                }
            }
            Ok(SpanVector::Ambient(out))
        }
        _ => Ok(SpanVector::Coefficients(xi.to_vec())),
    }
}

/// The frame operator.
///
/// For explicit systems this is S = Σₙ φₙ φₙᵀ on the ambient space; for all
/// other kinds the Gramian itself acts as the ℓ² realization, and the two
/// share their nonzero spectrum.
pub fn frame_operator(sys: &VectorSystem, g: &Gramian) -> SymMatrix {
    match sys {
        VectorSystem::ExplicitFinite { coordinates } => {
            let d = coordinates[0].len();
            SymMatrix::from_fn(d, |i, j| {
                coordinates
                    .iter()
                    .take(g.n)
                    .map(|row| row[i] * row[j])
                    .sum()
            })
        }
        _ => g.matrix.clone(),
    }
}

/// Extract the maximal band subspace H(a,b) from a Gramian, with the
/// default endpoint slack.
pub fn band_extract(g: &Gramian, a: f64, b: f64, rank_tol: f64) -> Result<FrameBand, FrameError> {
    band_extract_with_eps(g, a, b, rank_tol, BAND_EPS_REL)
}

/// As `band_extract`, with an explicit endpoint slack relative to λ_max.
pub fn band_extract_with_eps(
    g: &Gramian,
    a: f64,
    b: f64,
    rank_tol: f64,
    band_eps: f64,
) -> Result<FrameBand, FrameError> {
    let valid = a.is_finite() && b.is_finite() && a > 0.0 && b >= a;
    if !valid {
        return Err(FrameError::InvalidInterval { a, b });
    }
    let d = eig_sym(&g.matrix, DEFAULT_ORTHO_TOL)?;
    let lam_max = d.lambda_max_abs();
    let eps = band_eps * lam_max;
    let cutoff = rank_tol * lam_max;

    let mut selected = Vec::new();
    let mut onb = Vec::new();
    let mut endpoint_sensitive = Vec::new();
    let mut tolerance_applied = false;
    for (idx, (lam, xi)) in d.eigenpairs().enumerate() {
        if (lam - a).abs() <= eps || (lam - b).abs() <= eps {
            endpoint_sensitive.push((idx, lam));
        }
        if lam <= cutoff {
            continue;
        }
        if lam >= a - eps && lam <= b + eps {
            if lam < a || lam > b {
                tolerance_applied = true;
            }
            let scale = 1.0 / lam.sqrt();
            selected.push((lam, xi.to_vec()));
            onb.push(xi.iter().map(|v| v * scale).collect());
        }
    }
    let attained = if selected.is_empty() {
        None
    } else {
        Some((selected[0].0, selected[selected.len() - 1].0))
    };
    Ok(FrameBand {
        a,
        b,
        selected,
        onb,
        attained,
        endpoint_sensitive,
        endpoint_tolerance_applied: tolerance_applied,
        rank_tol,
        band_eps,
        decomposition: d,
    })
}

/// Frame-bound verification over seeded random unit vectors in H(a,b).
#[derive(Debug, Clone, Serialize)]
pub struct FrameBoundsReport {
    pub trials: usize,
    pub executed: usize,
    pub min_quotient: Option<f64>,
    pub max_quotient: Option<f64>,
    /// Sharp constants: the extreme selected eigenvalues.
    pub attained: Option<(f64, f64)>,
    pub violations: usize,
    pub tol: f64,
    pub seed: u64,
    pub pass: bool,
}

/// Check a−tol ≤ Σₙ|⟨φₙ,f⟩|² ≤ b+tol on `trials` pseudorandom unit vectors
/// f ∈ H(a,b). Violations are reported, not thrown. An empty band passes
/// vacuously with zero executed trials.
pub fn verify_frame_bounds(
    g: &Gramian,
    band: &FrameBand,
    trials: usize,
    seed: u64,
    tol: f64,
) -> FrameBoundsReport {
    if band.is_empty() {
        return FrameBoundsReport {
            trials,
            executed: 0,
            min_quotient: None,
            max_quotient: None,
            attained: None,
            violations: 0,
            tol,
            seed,
            pass: true,
        };
    }
    let k = band.onb.len();
    let n = g.n;
    let mut min_q = f64::INFINITY;
    let mut max_q = f64::NEG_INFINITY;
    let mut violations = 0usize;
    let mut executed = 0usize;
    for trial in 0..trials {
        let mut rng = SplitMix64::derive(seed, trial as u64);
        let coeffs = rng.normal_vec(k);
        let mut xi = vec![0.0f64; n];
        for (c, u) in coeffs.iter().zip(&band.onb) {
            for (x, v) in xi.iter_mut().zip(u) {
                *x += c * v;
            }
        }
        // normalize in the ℋ norm: ||Mξ||² = ξᵀGξ
        let h = g.matrix.quad_form(&xi).sqrt();
        if h == 0.0 {
            continue;
        }
        for x in xi.iter_mut() {
            *x /= h;
        }
        let frame_sum = {
            let gxi = g.matrix.apply(&xi);
            dot(&gxi, &gxi)
        };
        min_q = min_q.min(frame_sum);
        max_q = max_q.max(frame_sum);
        if frame_sum < band.a - tol || frame_sum > band.b + tol {
            violations += 1;
        }
        executed += 1;
    }
    FrameBoundsReport {
        trials,
        executed,
        min_quotient: (executed > 0).then_some(min_q),
        max_quotient: (executed > 0).then_some(max_q),
        attained: band.attained,
        violations,
        tol,
        seed,
        pass: violations == 0,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcludedEigenpair {
    pub index: usize,
    pub eigenvalue: f64,
    /// Frame quotient Σ|⟨φₙ,f⟩|²/||f||² of the eigenvector, which equals λ.
    pub quotient: f64,
    pub outside_band: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalityReport {
    pub excluded: Vec<ExcludedEigenpair>,
    /// True when every excluded eigenvector's quotient falls outside
    /// [a−tol, b+tol]: adjoining any of them would break the frame estimate.
    pub confirmed: bool,
    pub tol: f64,
}

/// Finite-dimensional maximality witness: every eigenvector left out of
/// H(a,b) (above the rank cutoff) must violate the frame estimate.
pub fn maximality_check(g: &Gramian, band: &FrameBand, tol: f64) -> MaximalityReport {
    let d = &band.decomposition;
    let cutoff = band.rank_tol * d.lambda_max_abs();
    let eps = band.band_eps * d.lambda_max_abs();
    let mut excluded = Vec::new();
    let mut confirmed = true;
    for (idx, (lam, xi)) in d.eigenpairs().enumerate() {
        if lam <= cutoff || (lam >= band.a - eps && lam <= band.b + eps) {
            continue;
        }
        // quotient computed the long way as a cross-check of the eigen identity
        let gxi = g.matrix.apply(xi);
        let quotient = dot(&gxi, &gxi) / g.matrix.quad_form(xi);
        let outside = quotient < band.a - tol || quotient > band.b + tol;
        if !outside {
            confirmed = false;
        }
        excluded.push(ExcludedEigenpair {
            index: idx,
            eigenvalue: lam,
            quotient,
            outside_band: outside,
        });
    }
    MaximalityReport {
        excluded,
        confirmed,
        tol,
    }
}

/// The canonical Parseval frame ψₙ = S^{-1/2} φₙ.
///
/// For explicit systems the ψₙ are materialized in ambient coordinates. For
/// every kind, `coeff` holds the pseudo square-root inverse W = G^{-1/2},
/// which represents ψₙ in synthesis coordinates (ψₙ = Σ_m `W[m][n]` φ_m), so
/// that ⟨ψₙ, Mξ⟩ = (W G ξ)ₙ is computable from the Gramian alone.
#[derive(Debug, Clone)]
pub struct ParsevalFrame {
    pub ambient: Option<Vec<Vec<f64>>>,
    pub coeff: SymMatrix,
    /// Eigenvalues treated as zero by the rank cutoff.
    pub dropped: usize,
    pub lambda_min_retained: f64,
    pub rank_tol: f64,
}

impl ParsevalFrame {
    /// ⟨ψₙ, f⟩ for f = Σ ξₙ φₙ, computed through the Gramian.
    pub fn frame_coefficients(&self, g: &Gramian, xi: &[f64]) -> Vec<f64> {
        self.coeff.apply(&g.matrix.apply(xi))
    }

    /// Σₙ |⟨ψₙ, f⟩|² / ||f||² for f = Σ ξₙ φₙ.
    pub fn parseval_quotient(&self, g: &Gramian, xi: &[f64]) -> f64 {
        let c = self.frame_coefficients(g, xi);
        dot(&c, &c) / g.matrix.quad_form(xi)
    }
}

/// Construct the canonical Parseval frame of a system with a positive lower
/// frame bound on its span.
pub fn parseval_frame(
    sys: &VectorSystem,
    g: &Gramian,
    rank_tol: f64,
) -> Result<ParsevalFrame, FrameError> {
    let d = eig_sym(&g.matrix, DEFAULT_ORTHO_TOL)?;
    let lam_max = d.lambda_max_abs();
    let cutoff = rank_tol * lam_max;
    let retained: Vec<f64> = d
        .eigenvalues()
        .iter()
        .copied()
        .filter(|&l| l > cutoff)
        .collect();
    let dropped = g.n - retained.len();
    let Some(&lambda_min_retained) = retained.first() else {
        return Err(FrameError::IllConditioned {
            eigenvalue: lam_max,
            cutoff,
        });
    };
    if lambda_min_retained < ILL_SEPARATION * cutoff {
        return Err(FrameError::IllConditioned {
            eigenvalue: lambda_min_retained,
            cutoff,
        });
    }
    let inv_sqrt = |l: f64| if l <= cutoff { 0.0 } else { 1.0 / l.sqrt() };
    let coeff = apply_spectral_function(&d, inv_sqrt, rank_tol)?;

    let ambient = match sys {
        VectorSystem::ExplicitFinite { coordinates } => {
            let s = frame_operator(sys, g);
            let ds = eig_sym(&s, DEFAULT_ORTHO_TOL)?;
            let s_cut = rank_tol * ds.lambda_max_abs();
            let s_inv_sqrt = apply_spectral_function(
                &ds,
                |l| if l <= s_cut { 0.0 } else { 1.0 / l.sqrt() },
                rank_tol,
            )?;
            Some(
                coordinates
                    .iter()
                    .take(g.n)
                    .map(|row| s_inv_sqrt.apply(row))
                    .collect(),
            )
        }
        _ => None,
    };
    Ok(ParsevalFrame {
        ambient,
        coeff,
        dropped,
        lambda_min_retained,
        rank_tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IsometryReport {
    pub samples: usize,
    pub max_deviation: f64,
    /// Largest eigenvalue among those treated as zero; each such eigenvector
    /// synthesizes to an element of ℋ-norm² equal to its eigenvalue, so a
    /// small value certifies that ker L ∩ span = {0} numerically.
    pub max_dropped_eigenvalue: f64,
    pub kernel_trivial: bool,
    pub tol: f64,
    pub seed: u64,
    pub pass: bool,
}

/// Check that U = T_G^{-1/2} L is an isometry on the span: for seeded random
/// f with ||f||_ℋ = 1, the ℓ² norm of W·(Gξ) must be 1 within `tol`.
pub fn polar_isometry_check(
    g: &Gramian,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<IsometryReport, FrameError> {
    let d = eig_sym(&g.matrix, DEFAULT_ORTHO_TOL)?;
    let lam_max = d.lambda_max_abs();
    let cutoff = DEFAULT_RANK_TOL * lam_max;
    let w = apply_spectral_function(
        &d,
        |l| if l <= cutoff { 0.0 } else { 1.0 / l.sqrt() },
        DEFAULT_RANK_TOL,
    )?;
    let max_dropped_eigenvalue = d
        .eigenvalues()
        .iter()
        .copied()
        .filter(|&l| l <= cutoff)
        .fold(0.0f64, |m, l| m.max(l.max(0.0)));

    let mut max_deviation = 0.0f64;
    let mut executed = 0usize;
    for trial in 0..samples {
        let mut rng = SplitMix64::derive(seed, trial as u64);
        let mut xi = rng.normal_vec(g.n);
        let h = g.matrix.quad_form(&xi).sqrt();
        if h == 0.0 {
            continue;
        }
        for x in xi.iter_mut() {
            *x /= h;
        }
        let u = w.apply(&g.matrix.apply(&xi));
        max_deviation = max_deviation.max((norm2(&u) - 1.0).abs());
        executed += 1;
    }
    Ok(IsometryReport {
        samples: executed,
        max_deviation,
        max_dropped_eigenvalue,
        kernel_trivial: max_dropped_eigenvalue <= cutoff.max(f64::EPSILON * lam_max),
        tol,
        seed,
        pass: max_deviation <= tol,
    })
}

pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// ||Σ ξₙ φₙ||_ℋ through the Gramian.
pub fn span_norm(g: &Gramian, xi: &[f64]) -> f64 {
    g.matrix.quad_form(xi).max(0.0).sqrt()
}

fn pad_to(xi: &[f64], n: usize) -> Result<Vec<f64>, FrameError> {
    if xi.len() > n {
        return Err(FrameError::ShapeError {
            message: format!("{} coefficients for truncation {}", xi.len(), n),
        });
    }
    let mut out = xi.to_vec();
    out.resize(n, 0.0);
    Ok(out)
}
