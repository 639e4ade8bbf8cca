//! Reproducing kernels built from a Gramian.
//!
//! For a system of functions on a set Ω with ℓ²-summable point evaluations,
//! the kernel K(s,t) = l(s)ᵀ G⁻¹ l(t) (with l(t) the column of point values
//! φₙ(t)) reproduces every span element: f(t) = ⟨K_t, f⟩. With a positive
//! lower frame bound the pseudo-inverse agrees with the true inverse on the
//! range and the property holds to roundoff. Without one (the Hilbert
//! matrix monomials being the canonical case) the construction degrades,
//! and `reproducing_check` is built to surface exactly that failure instead
//! of refusing to run.
//!
//! K_t is never materialized as an abstract Hilbert-space element; every
//! pairing reduces to finite matrix algebra on G, l(t) and ξ.

use serde::Serialize;
use thiserror::Error;

use crate::gramian::{build_gramian, Gramian, GramianError};
use crate::spectral::{eig_sym, pseudo_inverse, SpectralError, SymMatrix, DEFAULT_ORTHO_TOL};
use crate::systems::{evaluate, is_pointwise, SystemError, VectorSystem};
use crate::util::dot;

#[derive(Debug, Error)]
pub enum RkhsError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Gramian(#[from] GramianError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Point-evaluation column l(t) = (φ₀(t), ..., φ_{N-1}(t)).
pub fn eval_l(sys: &VectorSystem, t: f64, n: usize) -> Result<Vec<f64>, SystemError> {
    (0..n).map(|k| evaluate(sys, k, t)).collect()
}

/// Partial sums of Σₙ |φₙ(t)|² at increasing truncations.
#[derive(Debug, Clone, Serialize)]
pub struct PointwiseL2Diagnostic {
    pub t: f64,
    pub truncations: Vec<usize>,
    pub partial_sums: Vec<f64>,
    pub cauchy_flag: bool,
    pub rel_tol: f64,
}

/// Probe the ℓ² point-evaluation hypothesis at `t`.
pub fn check_pointwise_l2(
    sys: &VectorSystem,
    t: f64,
    truncations: &[usize],
) -> Result<PointwiseL2Diagnostic, SystemError> {
    let clipped: Vec<usize> = match sys.len() {
        Some(n) => truncations.iter().map(|&u| u.min(n)).collect(),
        None => truncations.to_vec(),
    };
    let max_t = *clipped.last().unwrap_or(&0);
    let mut acc = 0.0f64;
    let mut partial_sums = Vec::with_capacity(clipped.len());
    let mut next = 0usize;
    for k in 0..max_t {
        let v = evaluate(sys, k, t)?;
        acc += v * v;
        while next < clipped.len() && clipped[next] == k + 1 {
            partial_sums.push(acc);
            next += 1;
        }
    }
    while next < clipped.len() {
        partial_sums.push(acc);
        next += 1;
    }
    let rel_tol = crate::gramian::DEFAULT_CAUCHY_REL_TOL;
    let cauchy_flag = match partial_sums.as_slice() {
        [.., a, b] => (b - a).abs() <= rel_tol * b.abs().max(f64::MIN_POSITIVE),
        _ => false,
    };
    Ok(PointwiseL2Diagnostic {
        t,
        truncations: clipped,
        partial_sums,
        cauchy_flag,
        rel_tol,
    })
}

/// A system, its Gramian truncation, and the pseudo-inverted Gramian:
/// everything needed to evaluate K(s,t) and test the reproducing property.
#[derive(Debug, Clone)]
pub struct RkhsKernel {
    pub system: VectorSystem,
    pub n: usize,
    pub gramian: Gramian,
    pub pinv: SymMatrix,
    pub rank_tol: f64,
}

impl RkhsKernel {
    /// Build the kernel for the first `n` vectors of a pointwise system.
    pub fn build(sys: &VectorSystem, n: usize, rank_tol: f64) -> Result<Self, RkhsError> {
        if !is_pointwise(sys) {
            return Err(RkhsError::System(SystemError::NotPointwise {
                kind: sys.kind_name(),
            }));
        }
        let gramian = build_gramian(sys, n)?;
        let d = eig_sym(&gramian.matrix, DEFAULT_ORTHO_TOL)?;
        let pinv = pseudo_inverse(&d, rank_tol);
        Ok(Self {
            system: sys.clone(),
            n,
            gramian,
            pinv,
            rank_tol,
        })
    }

    /// K(s,t) = l(s)ᵀ · pinv(G) · l(t).
    pub fn eval(&self, s: f64, t: f64) -> Result<f64, RkhsError> {
        let ls = eval_l(&self.system, s, self.n)?;
        let lt = eval_l(&self.system, t, self.n)?;
        Ok(dot(&ls, &self.pinv.apply(&lt)))
    }

    /// Kernel matrix K(tᵢ, tⱼ) over a point set.
    pub fn matrix(&self, points: &[f64]) -> Result<SymMatrix, RkhsError> {
        let cols: Vec<Vec<f64>> = points
            .iter()
            .map(|&t| eval_l(&self.system, t, self.n))
            .collect::<Result<_, _>>()?;
        let images: Vec<Vec<f64>> = cols.iter().map(|c| self.pinv.apply(c)).collect();
        Ok(SymMatrix::from_fn(points.len(), |i, j| {
            dot(&cols[i], &images[j])
        }))
    }

    /// Residuals |f(t) − ⟨K_t, f⟩| for f = Σ ξₙ φₙ over a point set.
    ///
    /// The pairing ⟨K_t, f⟩ is evaluated as the Gramian functional
    /// l(t)ᵀ · pinv(G) · G · ξ, and f(t) directly as l(t)ᵀ ξ. The check
    /// passes when the worst residual is at most `tol · ||f||_ℋ`.
    pub fn reproducing_check(
        &self,
        xi: &[f64],
        points: &[f64],
        tol: f64,
    ) -> Result<ReproducingReport, RkhsError> {
        assert_eq!(
            xi.len(),
            self.n,
            "coefficient length must match the truncation"
        );
        let f_norm = self.gramian.matrix.quad_form(xi).max(0.0).sqrt();
        let reproduced_coeff = self.pinv.apply(&self.gramian.matrix.apply(xi));
        let mut residuals = Vec::with_capacity(points.len());
        let mut max_residual = 0.0f64;
        for &t in points {
            let lt = eval_l(&self.system, t, self.n)?;
            let direct = dot(&lt, xi);
            let via_kernel = dot(&lt, &reproduced_coeff);
            let r = (direct - via_kernel).abs();
            max_residual = max_residual.max(r);
            residuals.push(PointResidual { t, residual: r });
        }
        Ok(ReproducingReport {
            residuals,
            max_residual,
            f_norm,
            tol,
            pass: max_residual <= tol * f_norm,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointResidual {
    pub t: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproducingReport {
    pub residuals: Vec<PointResidual>,
    pub max_residual: f64,
    pub f_norm: f64,
    pub tol: f64,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::systems::{make_sampled, QuadratureKind, QuadratureRule};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn delta_system(m: usize) -> VectorSystem {
        let values: Vec<Vec<f64>> = (0..m)
            .map(|n| (0..m).map(|k| if k == n { 1.0 } else { 0.0 }).collect())
            .collect();
        let grid: Vec<f64> = (0..m).map(|k| k as f64).collect();
        VectorSystem::sampled(values, grid, vec![1.0; m]).unwrap()
    }

    #[test]
    fn eval_l_monomials() {
        let sys = VectorSystem::hilbert_monomial();
        assert_eq!(eval_l(&sys, 0.5, 3).unwrap(), vec![1.0, 0.5, 0.25]);
    }

    #[test]
    fn eval_l_delta_is_basis_vector() {
        let sys = delta_system(4);
        assert_eq!(eval_l(&sys, 2.0, 4).unwrap(), vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn eval_l_sampled_monomials_at_one() {
        let rule = QuadratureRule::new(QuadratureKind::Trapezoid, 5);
        let (grid, _) = rule.nodes_weights(0.0, 1.0).unwrap();
        let values: Vec<Vec<f64>> = (0..3)
            .map(|p| grid.iter().map(|t| t.powi(p)).collect())
            .collect();
        let sys = make_sampled(values, grid, rule).unwrap();
        assert_eq!(eval_l(&sys, 1.0, 3).unwrap(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn pointwise_l2_geometric_at_half() {
        let sys = VectorSystem::hilbert_monomial();
        let d = check_pointwise_l2(&sys, 0.5, &[8, 16, 32]).unwrap();
        // Σ 4^{-n} → 4/3
        assert_close(*d.partial_sums.last().unwrap(), 4.0 / 3.0, 1e-12);
        assert!(d.cauchy_flag);
    }

    #[test]
    fn pointwise_l2_slow_near_one() {
        let sys = VectorSystem::hilbert_monomial();
        let d = check_pointwise_l2(&sys, 0.999, &[100, 200]).unwrap();
        let limit = 1.0 / (1.0 - 0.999f64 * 0.999);
        assert_close(limit, 500.2501250625, 1e-6);
        assert!(*d.partial_sums.last().unwrap() < limit);
        assert!(
            !d.cauchy_flag,
            "growth this slow must not look Cauchy at small truncations"
        );
    }

    #[test]
    fn pointwise_l2_finite_system_flat_beyond_size() {
        let sys = delta_system(3);
        let d = check_pointwise_l2(&sys, 1.0, &[2, 3, 100]).unwrap();
        assert_eq!(d.truncations, vec![2, 3, 3]);
        assert_eq!(d.partial_sums[1], d.partial_sums[2]);
        assert!(d.cauchy_flag);
    }

    #[test]
    fn kernel_delta_counting_measure() {
        let sys = delta_system(4);
        let k = RkhsKernel::build(&sys, 4, 1e-12).unwrap();
        for s in 0..4 {
            for t in 0..4 {
                let expect = if s == t { 1.0 } else { 0.0 };
                assert_close(k.eval(s as f64, t as f64).unwrap(), expect, 1e-12);
            }
        }
    }

    #[test]
    fn kernel_constant_function_counting_measure() {
        // single constant function 1 on m nodes, unit weights: G = [m]
        let m = 5;
        let grid: Vec<f64> = (0..m).map(|k| k as f64).collect();
        let sys = VectorSystem::sampled(vec![vec![1.0; m]], grid, vec![1.0; m]).unwrap();
        let k = RkhsKernel::build(&sys, 1, 1e-12).unwrap();
        for s in 0..m {
            for t in 0..m {
                assert_close(k.eval(s as f64, t as f64).unwrap(), 1.0 / m as f64, 1e-12);
            }
        }
    }

    #[test]
    fn kernel_mercedes_coordinates_project_onto_span() {
        let s3 = 3.0f64.sqrt() / 2.0;
        let sys =
            VectorSystem::explicit(vec![vec![1.0, 0.0], vec![-0.5, s3], vec![-0.5, -s3]]).unwrap();
        let k = RkhsKernel::build(&sys, 3, 1e-12).unwrap();
        // functions on Ω = {0,1}: the kernel matrix is the span projector, here I₂
        let km = k.matrix(&[0.0, 1.0]).unwrap();
        assert_close(km.at(0, 0), 1.0, 1e-10);
        assert_close(km.at(1, 1), 1.0, 1e-10);
        assert_close(km.at(0, 1), 0.0, 1e-10);
    }

    #[test]
    fn kernel_symmetry() {
        let sys = VectorSystem::hilbert_monomial();
        let k = RkhsKernel::build(&sys, 6, 1e-12).unwrap();
        let a = k.eval(0.3, 0.7).unwrap();
        let b = k.eval(0.7, 0.3).unwrap();
        assert_close(a, b, 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn kernel_matrix_is_psd_on_point_sets() {
        let sys = VectorSystem::hilbert_monomial();
        let k = RkhsKernel::build(&sys, 5, 1e-12).unwrap();
        let pts: Vec<f64> = (1..=7).map(|i| i as f64 / 8.0).collect();
        let km = k.matrix(&pts).unwrap();
        let d = eig_sym(&km, DEFAULT_ORTHO_TOL).unwrap();
        assert!(d.lambda_min() >= -1e-10 * d.lambda_max_abs());
    }

    #[test]
    fn kernel_build_rejects_non_pointwise() {
        let sys = VectorSystem::kernel_defined(|i, j| if i == j { 1.0 } else { 0.0 }, Some(3));
        assert!(matches!(
            RkhsKernel::build(&sys, 3, 1e-12),
            Err(RkhsError::System(SystemError::NotPointwise { .. }))
        ));
    }

    #[test]
    fn reproducing_delta_exact() {
        let sys = delta_system(4);
        let k = RkhsKernel::build(&sys, 4, 1e-12).unwrap();
        let r = k
            .reproducing_check(&[0.2, -0.9, 3.0, 0.5], &[0.0, 1.0, 2.0, 3.0], 1e-12)
            .unwrap();
        assert!(r.pass);
        assert!(r.max_residual <= 1e-12);
    }

    #[test]
    fn reproducing_well_conditioned_sampled_trig() {
        // three orthogonal-ish functions on a 64-node grid: frame bounds well
        // away from zero, so pinv(G)·G is the identity on the range
        let rule = QuadratureRule::new(QuadratureKind::Trapezoid, 64);
        let (grid, _) = rule.nodes_weights(0.0, 1.0).unwrap();
        let tau = std::f64::consts::TAU;
        let values: Vec<Vec<f64>> = vec![
            grid.iter().map(|_| 1.0).collect(),
            grid.iter().map(|t| (tau * t).sin() * 2f64.sqrt()).collect(),
            grid.iter().map(|t| (tau * t).cos() * 2f64.sqrt()).collect(),
        ];
        let sys = make_sampled(values, grid.clone(), rule).unwrap();
        let k = RkhsKernel::build(&sys, 3, 1e-12).unwrap();
        let mut rng = SplitMix64::new(17);
        for _ in 0..10 {
            let xi = rng.normal_vec(3);
            let r = k.reproducing_check(&xi, &grid, 1e-9).unwrap();
            assert!(r.pass, "residual {} for xi {xi:?}", r.max_residual);
            assert!(r.max_residual < 1e-9 * r.f_norm);
        }
    }

    #[test]
    fn range_identity_for_full_rank_gramian() {
        // with a positive lower bound, pinv(G)·G is the identity
        let rule = QuadratureRule::new(QuadratureKind::Trapezoid, 32);
        let (grid, _) = rule.nodes_weights(0.0, 1.0).unwrap();
        let values: Vec<Vec<f64>> = vec![
            grid.iter().map(|_| 1.0).collect(),
            grid.iter().map(|t| 2.0 * t - 1.0).collect(),
        ];
        let sys = make_sampled(values, grid, rule).unwrap();
        let k = RkhsKernel::build(&sys, 2, 1e-12).unwrap();
        for i in 0..2 {
            let e: Vec<f64> = (0..2).map(|j| if j == i { 1.0 } else { 0.0 }).collect();
            let back = k.pinv.apply(&k.gramian.matrix.apply(&e));
            for (j, v) in back.iter().enumerate() {
                let target = if j == i { 1.0 } else { 0.0 };
                assert_close(*v, target, 1e-10);
            }
        }
    }

    #[test]
    fn kernel_agrees_with_parseval_form() {
        // K(s,t) = Σₙ ψₙ(s) ψₙ(t) with ψ the canonical Parseval frame,
        // i.e. (W l(s))·(W l(t)) for W = G^(-1/2)
        let sys = VectorSystem::hilbert_monomial();
        let n = 5;
        let k = RkhsKernel::build(&sys, n, 1e-12).unwrap();
        let g = crate::gramian::build_gramian(&sys, n).unwrap();
        let p = crate::frames::parseval_frame(&sys, &g, 1e-12).unwrap();
        for (s, t) in [(0.2, 0.8), (0.5, 0.5), (0.1, 0.9)] {
            let via_pinv = k.eval(s, t).unwrap();
            let ls = p.coeff.apply(&eval_l(&sys, s, n).unwrap());
            let lt = p.coeff.apply(&eval_l(&sys, t, n).unwrap());
            let via_parseval = dot(&ls, &lt);
            assert_close(via_pinv, via_parseval, 1e-10 * via_pinv.abs().max(1.0));
        }
    }

    #[test]
    fn reproducing_fails_for_hilbert_monomials_at_n12() {
        // the designed negative example: no positive lower frame bound, the
        // truncated Gramian's smallest eigenvalues sink below the rank
        // cutoff, and the reproducing identity breaks down numerically
        let sys = VectorSystem::hilbert_monomial();
        let n = 12;
        let k = RkhsKernel::build(&sys, n, 1e-12).unwrap();
        let points: Vec<f64> = (1..=19).map(|i| i as f64 / 20.0).collect();
        let mut rng = SplitMix64::new(24);
        let mut any_failure = false;
        for _ in 0..20 {
            let xi = rng.normal_vec(n);
            let r = k.reproducing_check(&xi, &points, 1e-8).unwrap();
            if !r.pass {
                any_failure = true;
            }
        }
        assert!(any_failure, "H12 should break the reproducing property");
        // the oracle for the broken hypothesis: λ_min(G_N) → 0
        let d = eig_sym(&k.gramian.matrix, DEFAULT_ORTHO_TOL).unwrap();
        assert!(d.lambda_min() < 1e-12 * d.lambda_max_abs());
    }
}
