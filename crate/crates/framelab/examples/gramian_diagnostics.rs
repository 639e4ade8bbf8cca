//! Operator diagnostics on Gramian truncations: row ℓ²-summability,
//! positive semidefiniteness, and the Carleman-type row-sum test.
//!
//! Run with: cargo run --example gramian_diagnostics

use framelab::gramian::{build_gramian, check_carleman, check_psd, check_row_l2};
use framelab::systems::VectorSystem;

fn main() {
    // 1. the monomials on (0,1): row 0 of the Gramian is 1/(j+1), whose
    //    squared sums crawl toward π²/6
    let hilbert = VectorSystem::hilbert_monomial();
    let d = check_row_l2(&hilbert, 0, &[100, 1000, 10000]).expect("diagnostic");
    println!("monomial system, row 0, partial sums of Σ|⟨φⱼ,φ₀⟩|²:");
    for (t, s) in d.truncations.iter().zip(&d.partial_sums) {
        println!("  N = {t:>6}: {s:.9}");
    }
    println!(
        "  limit π²/6 = {:.9}, cauchy flag: {}",
        std::f64::consts::PI.powi(2) / 6.0,
        d.cauchy_flag
    );

    // 2. PSD audit: every honest Gramian is PSD up to roundoff
    let g = build_gramian(&hilbert, 10).expect("gramian");
    let psd = check_psd(&g, 1e-10).expect("psd");
    println!(
        "\nHilbert N=10: min eigenvalue {:.3e}, λ_max {:.6}, PSD: {}",
        psd.min_eigenvalue, psd.lambda_max, psd.is_psd
    );

    // 3. Carleman row-sum test on a tridiagonal kernel: bₙ ∈ {1,2}, so
    //    Σ 1/√bₙ grows linearly and the sufficient condition is met
    let n = 64;
    let tridiag = VectorSystem::kernel_defined(
        |i, j| {
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
    let g = build_gramian(&tridiag, n).expect("gramian");
    let carleman = check_carleman(&g).expect("report");
    println!(
        "\ntridiagonal kernel N={n}: tail growth {:.3} vs threshold {:.3} -> {:?} (heuristic: {})",
        carleman.tail_growth, carleman.divergence_threshold, carleman.verdict, carleman.heuristic
    );

    // 4. same test where bₙ ~ n⁴ makes Σ 1/√bₙ convergent: inconclusive
    let fast = VectorSystem::kernel_defined(
        move |i, j| {
            if i == j {
                0.0
            } else {
                let k = i.max(j) as f64;
                k.powi(4) / (n as f64 - 1.0)
            }
        },
        Some(n),
    );
    let g = build_gramian(&fast, n).expect("gramian");
    let c2 = check_carleman(&g).expect("report");
    println!(
        "quartic-growth kernel N={n}: tail growth {:.3e} vs threshold {:.3} -> {:?}",
        c2.tail_growth, c2.divergence_threshold, c2.verdict
    );

    assert!(d.partial_sums.windows(2).all(|w| w[0] <= w[1]));
    assert!(psd.is_psd);
    println!("\ndiagnostics complete.");
}
