//! Shared test support: an eigenvalue oracle independent of the library's
//! Jacobi path, and seeded generators for random test systems.
//!
//! The oracle computes characteristic-polynomial coefficients by
//! Faddeev-LeVerrier and finds all real roots by recursive derivative
//! subdivision plus bisection. It never touches the decomposition code it
//! is used to check.

// some helpers are unused by individual test binaries; the indexed loops
// mirror the matrix recurrences they implement
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use framelab::rng::SplitMix64;
use framelab::spectral::SymMatrix;
use framelab::systems::VectorSystem;

/// Coefficients c[0..=n] of det(xI − A) = Σ c[k] x^k, with c[n] = 1.
pub fn char_poly(a: &SymMatrix) -> Vec<f64> {
    let n = a.dim();
    let mat = |i: usize, j: usize| a.at(i, j);
    // Faddeev-LeVerrier: M₀ = 0, c_n = 1;
    // M_k = A·M_{k-1} + c_{n-k+1}·I, c_{n-k} = -tr(A·M_k)/k
    let mut coeffs = vec![0.0f64; n + 1];
    coeffs[n] = 1.0;
    let mut m = vec![vec![0.0f64; n]; n];
    for k in 1..=n {
        let mut next = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += mat(i, l) * m[l][j];
                }
                next[i][j] = s;
            }
        }
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += coeffs[n - k + 1];
        }
        m = next;
        let mut trace_am = 0.0;
        for i in 0..n {
            for l in 0..n {
                trace_am += mat(i, l) * m[l][i];
            }
        }
        coeffs[n - k] = -trace_am / k as f64;
    }
    coeffs
}

fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// All distinct real roots of a polynomial whose roots are all real
/// (characteristic polynomials of symmetric matrices), ascending.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    // Cauchy bound on root magnitude
    let lead = coeffs[n];
    let bound = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0f64, f64::max);
    let crit = real_roots(&derivative(coeffs));
    let mut edges = Vec::with_capacity(crit.len() + 2);
    edges.push(-bound);
    edges.extend(crit.iter().copied());
    edges.push(bound);

    let scale = coeffs.iter().map(|c| c.abs()).fold(0.0f64, f64::max) * bound.powi(n as i32);
    let zero_tol = 1e-11 * scale.max(f64::MIN_POSITIVE);
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        let merge_tol = 1e-10 * (1.0 + r.abs());
        if roots
            .last()
            .is_none_or(|&last| (r - last).abs() > merge_tol)
        {
            roots.push(r);
        }
    };
    for w in edges.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let (flo, fhi) = (eval_poly(coeffs, lo), eval_poly(coeffs, hi));
        // multiple root sitting exactly at a critical point
        if flo.abs() <= zero_tol {
            push(lo, &mut roots);
        }
        if flo * fhi < 0.0 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if eval_poly(coeffs, lo) * eval_poly(coeffs, mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            push(0.5 * (lo + hi), &mut roots);
        }
    }
    // the far right edge can itself be a root only if the matrix hits the
    // Cauchy bound, which our corpora never do; still, check it
    if eval_poly(coeffs, bound).abs() <= zero_tol {
        push(bound, &mut roots);
    }
    roots
}

/// Oracle eigenvalues of a symmetric matrix of dimension ≤ 4, as the
/// distinct real roots of its characteristic polynomial.
pub fn oracle_eigenvalues(a: &SymMatrix) -> Vec<f64> {
    assert!(a.dim() <= 4, "the characteristic oracle is for n <= 4");
    real_roots(&char_poly(a))
}

/// Set-match two eigenvalue collections: every left value within `tol` of
/// some right value and vice versa (multiplicities collapse).
pub fn sets_match(left: &[f64], right: &[f64], tol: f64) -> bool {
    let covered =
        |xs: &[f64], ys: &[f64]| xs.iter().all(|&x| ys.iter().any(|&y| (x - y).abs() <= tol));
    covered(left, right) && covered(right, left)
}

/// Seeded random explicit system with n_vectors ≤ 30 and dim ≤ 10.
pub fn random_explicit_system(rng: &mut SplitMix64) -> VectorSystem {
    let n_vectors = 2 + (rng.next_u64() % 29) as usize;
    let dim = 2 + (rng.next_u64() % 9) as usize;
    let coords: Vec<Vec<f64>> = (0..n_vectors).map(|_| rng.normal_vec(dim)).collect();
    VectorSystem::explicit(coords).expect("random coordinates are finite")
}

/// Seeded random PSD covariance with |V| ≤ 20 (a scaled Wishart).
pub fn random_psd_covariance(rng: &mut SplitMix64) -> SymMatrix {
    let v = 2 + (rng.next_u64() % 19) as usize;
    let k = v + 2;
    let a: Vec<Vec<f64>> = (0..v).map(|_| rng.normal_vec(k)).collect();
    SymMatrix::from_fn(v, |i, j| {
        a[i].iter().zip(&a[j]).map(|(x, y)| x * y).sum::<f64>() / k as f64
    })
}

/// A band [a, b] around the middle of a positive spectrum, with endpoints
/// at midpoints between eigenvalues so selection is unambiguous.
pub fn pick_band(positives: &[f64]) -> (f64, f64) {
    assert!(!positives.is_empty());
    let k = positives.len();
    if k == 1 {
        return (0.9 * positives[0], 1.1 * positives[0]);
    }
    let lo = k / 3;
    let hi = (2 * k / 3).min(k - 1).max(lo);
    let a = if lo == 0 {
        0.9 * positives[0]
    } else {
        0.5 * (positives[lo - 1] + positives[lo])
    };
    let b = if hi == k - 1 {
        1.1 * positives[k - 1]
    } else {
        0.5 * (positives[hi] + positives[hi + 1])
    };
    (a, b)
}
