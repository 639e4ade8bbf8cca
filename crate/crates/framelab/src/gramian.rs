//! Gramian truncations and their operator diagnostics.
//!
//! A truncated Gramian `G[i][j]` = ⟨φᵢ, φⱼ⟩ is the finite window through which
//! every operator question about the system is answered. The diagnostics
//! here probe the hypotheses needed before spectral machinery applies:
//! row ℓ²-summability, positive semidefiniteness, and a Carleman-type
//! row-sum test for essential self-adjointness. At finite truncation all of
//! them are evidence, not proofs, and the reports say so.

use serde::Serialize;
use thiserror::Error;

use crate::spectral::{eig_sym, SpectralError, SymMatrix, DEFAULT_ORTHO_TOL};
use crate::systems::{inner_product, SystemError, VectorSystem};

#[derive(Debug, Error)]
pub enum GramianError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("inner product ({i},{j}) is not finite")]
    InvalidEntry { i: usize, j: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// N×N truncation of the Gramian with provenance.
#[derive(Debug, Clone)]
pub struct Gramian {
    pub n: usize,
    pub matrix: SymMatrix,
    pub system_id: String,
    /// ℓ² norm of each built row.
    pub built_rows_l2: Vec<f64>,
}

/// Build the N×N Gramian truncation of a system.
pub fn build_gramian(sys: &VectorSystem, n: usize) -> Result<Gramian, GramianError> {
    assert!(n >= 1, "truncation must be at least 1");
    let mut entries = vec![0.0f64; n * n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product(sys, i, j)?;
            if !v.is_finite() {
                return Err(GramianError::InvalidEntry { i, j });
            }
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    let matrix = SymMatrix::new(n, entries);
    let built_rows_l2 = (0..n)
        .map(|i| matrix.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    Ok(Gramian {
        n,
        matrix,
        system_id: sys.id_tag(),
        built_rows_l2,
    })
}

/// Partial sums of Σⱼ |⟨φⱼ, φ_row⟩|² at increasing truncations.
#[derive(Debug, Clone, Serialize)]
pub struct RowL2Diagnostic {
    pub row: usize,
    pub truncations: Vec<usize>,
    pub partial_sums: Vec<f64>,
    /// True when the last two partial sums differ by less than `rel_tol`
    /// relatively; a heuristic Cauchy verdict, not a convergence proof.
    pub cauchy_flag: bool,
    pub rel_tol: f64,
}

pub const DEFAULT_CAUCHY_REL_TOL: f64 = 1e-6;

/// Probe the row ℓ²-summability hypothesis at the given truncations.
///
/// Out-of-range truncations are clipped for finite systems; the diagnostic
/// itself never fails.
pub fn check_row_l2(
    sys: &VectorSystem,
    row: usize,
    truncations: &[usize],
) -> Result<RowL2Diagnostic, GramianError> {
    debug_assert!(
        truncations.len() >= 2,
        "need at least two truncation levels"
    );
    debug_assert!(
        truncations.windows(2).all(|w| w[0] <= w[1]),
        "truncations must ascend"
    );
    let clipped: Vec<usize> = match sys.len() {
        Some(n) => truncations.iter().map(|&t| t.min(n)).collect(),
        None => truncations.to_vec(),
    };
    let max_t = *clipped.last().unwrap_or(&0);
    let mut partial_sums = Vec::with_capacity(clipped.len());
    let mut acc = 0.0f64;
    let mut next = 0usize;
    for j in 0..max_t {
        let v = inner_product(sys, j, row)?;
        acc += v * v;
        while next < clipped.len() && clipped[next] == j + 1 {
            partial_sums.push(acc);
            next += 1;
        }
    }
    while next < clipped.len() {
        partial_sums.push(acc);
        next += 1;
    }
    let cauchy_flag = match partial_sums.as_slice() {
        [.., a, b] => (b - a).abs() <= DEFAULT_CAUCHY_REL_TOL * b.abs().max(f64::MIN_POSITIVE),
        _ => false,
    };
    Ok(RowL2Diagnostic {
        row,
        truncations: clipped,
        partial_sums,
        cauchy_flag,
        rel_tol: DEFAULT_CAUCHY_REL_TOL,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub lambda_max: f64,
    pub is_psd: bool,
    pub tol: f64,
    /// At this truncation the matrix is PSD, so no ξ with T_G ξ = -ξ can
    /// exist: the defect-vector implication holds vacuously here.
    pub no_negative_one_eigenvector: bool,
}

/// Positive-semidefiniteness audit: min eigenvalue against a relative floor.
pub fn check_psd(g: &Gramian, tol: f64) -> Result<PsdReport, GramianError> {
    let d = eig_sym(&g.matrix, DEFAULT_ORTHO_TOL)?;
    let min_eigenvalue = d.lambda_min();
    let lambda_max = d.lambda_max_abs();
    let is_psd = min_eigenvalue >= -tol * lambda_max;
    Ok(PsdReport {
        min_eigenvalue,
        lambda_max,
        is_psd,
        tol,
        no_negative_one_eigenvector: is_psd,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarlemanVerdict {
    SufficientConditionMet,
    Inconclusive,
}

/// Carleman-type row-sum diagnostic for essential self-adjointness.
#[derive(Debug, Clone, Serialize)]
pub struct SelfAdjointnessReport {
    /// bₙ = Σ_{j≠n} `|G[n][j]|`, the off-diagonal absolute row sums.
    pub b_values: Vec<f64>,
    /// Cumulative sums of 1/√bₙ (rows with bₙ = 0 are skipped).
    pub partial_sums: Vec<f64>,
    pub verdict: CarlemanVerdict,
    pub psd_min_eigenvalue: f64,
    /// Indices of rows excluded because bₙ = 0 (decoupled rows).
    pub excluded_rows: Vec<usize>,
    /// The verdict is a finite-truncation diagnostic, never a proof.
    pub heuristic: bool,
    /// Growth of Σ 1/√bₙ over the last half of the index range, and the
    /// threshold 0.1·log(N) it was compared against.
    pub tail_growth: f64,
    pub divergence_threshold: f64,
}

/// Row-sum test: bₙ = Σ_{j≠n} `|G[n][j]|` with the O-constant taken as 1.
/// The divergence of Σ 1/√bₙ is judged from the growth of the partial sums
/// over the last half of the index range against 0.1·log(N).
pub fn check_carleman(g: &Gramian) -> Result<SelfAdjointnessReport, GramianError> {
    let n = g.n;
    debug_assert!(n >= 3, "the diagnostic is meaningful for N >= 3");
    let mut b_values = Vec::with_capacity(n);
    for i in 0..n {
        let b: f64 = g
            .matrix
            .row(i)
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.abs())
            .sum();
        b_values.push(b);
    }
    let mut partial_sums = Vec::with_capacity(n);
    let mut excluded_rows = Vec::new();
    let mut acc = 0.0f64;
    for (i, &b) in b_values.iter().enumerate() {
        if b > 0.0 {
            acc += 1.0 / b.sqrt();
        } else {
            excluded_rows.push(i);
        }
        partial_sums.push(acc);
    }
    let half = n / 2;
    let tail_growth = partial_sums[n - 1]
        - if half > 0 {
            partial_sums[half - 1]
        } else {
            0.0
        };
    let divergence_threshold = 0.1 * (n as f64).ln();
    let coupled_in_tail = b_values[half..].iter().any(|&b| b > 0.0);
    // a fully decoupled tail is the diagonal case: trivially self-adjoint
    let verdict = if !coupled_in_tail || tail_growth >= divergence_threshold {
        CarlemanVerdict::SufficientConditionMet
    } else {
        CarlemanVerdict::Inconclusive
    };
    let psd = check_psd(g, 1e-10)?;
    Ok(SelfAdjointnessReport {
        b_values,
        partial_sums,
        verdict,
        psd_min_eigenvalue: psd.min_eigenvalue,
        excluded_rows,
        heuristic: true,
        tail_growth,
        divergence_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::VectorSystem;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    /// Three unit vectors in the plane at 0°, 120°, 240°.
    pub(crate) fn mercedes() -> VectorSystem {
        let s3 = 3.0f64.sqrt() / 2.0;
        VectorSystem::explicit(vec![vec![1.0, 0.0], vec![-0.5, s3], vec![-0.5, -s3]]).unwrap()
    }

    #[test]
    fn mercedes_gramian_closed_form() {
        let g = build_gramian(&mercedes(), 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { -0.5 };
                assert_close(g.matrix.at(i, j), expect, 1e-15);
            }
        }
    }

    #[test]
    fn hilbert_truncation_entries() {
        let g = build_gramian(&VectorSystem::hilbert_monomial(), 2).unwrap();
        assert_eq!(g.matrix.at(0, 0), 1.0);
        assert_eq!(g.matrix.at(0, 1), 0.5);
        assert_eq!(g.matrix.at(1, 1), 1.0 / 3.0);
    }

    #[test]
    fn orthonormal_system_gives_identity() {
        let sys = VectorSystem::explicit(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let g = build_gramian(&sys, 2).unwrap();
        assert_eq!(g.matrix.at(0, 0), 1.0);
        assert_eq!(g.matrix.at(0, 1), 0.0);
        assert_eq!(g.matrix.at(1, 1), 1.0);
        assert_close(g.built_rows_l2[0], 1.0, 1e-15);
    }

    #[test]
    fn explicit_gramian_matches_row_products_exactly() {
        let coords = vec![vec![1.0, 2.0, 3.0], vec![-0.5, 0.25, 4.0]];
        let sys = VectorSystem::explicit(coords.clone()).unwrap();
        let g = build_gramian(&sys, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let direct: f64 = coords[i].iter().zip(&coords[j]).map(|(a, b)| a * b).sum();
                assert_eq!(g.matrix.at(i, j), direct);
            }
        }
    }

    #[test]
    fn non_finite_inner_product_is_invalid_entry() {
        let sys = VectorSystem::kernel_defined(
            |i, j| if i == 1 && j == 1 { f64::NAN } else { 0.0 },
            Some(3),
        );
        match build_gramian(&sys, 3) {
            Err(GramianError::InvalidEntry { i: 1, j: 1 }) => {}
            other => panic!("expected InvalidEntry, got {other:?}"),
        }
    }

    #[test]
    fn zero_diagonal_entry_implies_zero_row() {
        // Cauchy-Schwarz: a zero vector is orthogonal to everything
        let sys =
            VectorSystem::explicit(vec![vec![1.0, 2.0], vec![0.0, 0.0], vec![-1.0, 0.5]]).unwrap();
        let g = build_gramian(&sys, 3).unwrap();
        assert_eq!(g.matrix.at(1, 1), 0.0);
        assert!(g.matrix.row(1).iter().all(|&v| v == 0.0));
        assert_eq!(g.built_rows_l2[1], 0.0);
    }

    #[test]
    fn truncation_beyond_finite_system_errors() {
        let sys = VectorSystem::explicit(vec![vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            build_gramian(&sys, 2),
            Err(GramianError::System(_))
        ));
    }

    #[test]
    fn row_l2_orthonormal_is_flat() {
        let sys = VectorSystem::explicit(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let d = check_row_l2(&sys, 0, &[2, 3]).unwrap();
        assert_eq!(d.partial_sums, vec![1.0, 1.0]);
        assert!(d.cauchy_flag);
    }

    #[test]
    fn row_l2_hilbert_row0_approaches_basel() {
        let sys = VectorSystem::hilbert_monomial();
        let d = check_row_l2(&sys, 0, &[100, 1000, 10000]).unwrap();
        // independent direct sums of 1/(j+1)^2
        let direct = |t: usize| (0..t).map(|j| 1.0 / ((j + 1) as f64).powi(2)).sum::<f64>();
        for (s, t) in d.partial_sums.iter().zip([100usize, 1000, 10000]) {
            assert_close(*s, direct(t), 1e-13);
        }
        let basel = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((d.partial_sums[2] - basel).abs() < 1.1e-4);
        assert!(d.partial_sums.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn row_l2_repeated_vector_not_cauchy() {
        // the same unit vector over and over: partial sums grow like N
        let sys = VectorSystem::kernel_defined(|_, _| 1.0, Some(64));
        let d = check_row_l2(&sys, 0, &[16, 32, 64]).unwrap();
        assert_eq!(d.partial_sums, vec![16.0, 32.0, 64.0]);
        assert!(!d.cauchy_flag);
    }

    #[test]
    fn row_l2_clips_to_finite_size() {
        let sys = VectorSystem::explicit(vec![vec![1.0], vec![1.0]]).unwrap();
        let d = check_row_l2(&sys, 0, &[1, 100]).unwrap();
        assert_eq!(d.truncations, vec![1, 2]);
    }

    #[test]
    fn psd_identity() {
        let sys = VectorSystem::explicit(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let g = build_gramian(&sys, 2).unwrap();
        let r = check_psd(&g, 1e-10).unwrap();
        assert!(r.is_psd);
        assert_close(r.min_eigenvalue, 1.0, 1e-14);
    }

    #[test]
    fn psd_mercedes_zero_eigenvalue() {
        let g = build_gramian(&mercedes(), 3).unwrap();
        let r = check_psd(&g, 1e-10).unwrap();
        assert!(r.is_psd);
        assert!(r.min_eigenvalue.abs() <= 1e-12);
        assert_close(r.lambda_max, 1.5, 1e-12);
    }

    #[test]
    fn psd_hilbert_10() {
        let g = build_gramian(&VectorSystem::hilbert_monomial(), 10).unwrap();
        let r = check_psd(&g, 1e-10).unwrap();
        assert!(r.is_psd);
        assert!(r.min_eigenvalue < 1e-12);
        assert!(r.min_eigenvalue > -1e-14);
    }

    #[test]
    fn psd_detects_indefinite() {
        let g = Gramian {
            n: 2,
            matrix: SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]),
            system_id: "synthetic".into(),
            built_rows_l2: vec![5f64.sqrt(), 5f64.sqrt()],
        };
        let r = check_psd(&g, 1e-10).unwrap();
        assert!(!r.is_psd);
        assert_close(r.min_eigenvalue, -1.0, 1e-12);
    }

    #[test]
    fn carleman_tridiagonal_diverges() {
        let n = 32;
        let sys = VectorSystem::kernel_defined(
            move |i, j| {
                if i == j {
                    2.0
                } else if i.abs_diff(j) == 1 {
                    1.0
                } else {
                    0.0
                }
            },
            Some(n),
        );
        let g = build_gramian(&sys, n).unwrap();
        let r = check_carleman(&g).unwrap();
        assert_eq!(r.verdict, CarlemanVerdict::SufficientConditionMet);
        assert!(r.excluded_rows.is_empty());
        assert!(r.partial_sums.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn carleman_fast_growth_inconclusive() {
        // bₙ ~ n⁴ makes Σ 1/√bₙ a convergent p-series
        let n = 64;
        let sys = VectorSystem::kernel_defined(
            move |i, j| {
                if i == j {
                    0.0
                } else {
                    let k = i.max(j) as f64;
                    k * k * k * k / (n as f64 - 1.0)
                }
            },
            Some(n),
        );
        let g = build_gramian(&sys, n).unwrap();
        let r = check_carleman(&g).unwrap();
        assert_eq!(r.verdict, CarlemanVerdict::Inconclusive);
    }

    #[test]
    fn carleman_diagonal_gramian_trivially_met() {
        let sys = VectorSystem::explicit(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ])
        .unwrap();
        let g = build_gramian(&sys, 3).unwrap();
        let r = check_carleman(&g).unwrap();
        assert_eq!(r.verdict, CarlemanVerdict::SufficientConditionMet);
        assert_eq!(r.excluded_rows, vec![0, 1, 2]);
        assert!(r.heuristic);
    }
}
