//! Reproducing kernels from Gramians: K(s,t) = l(s)ᵀ G⁻¹ l(t).
//!
//! A delta system under the counting measure reproduces exactly
//! (K(s,t) = δ_{s,t}); a well-conditioned trigonometric sampled system
//! reproduces to roundoff. The point-evaluation ℓ² diagnostic shows when
//! the kernel construction is even meaningful.
//!
//! Run with: cargo run --example rkhs_kernel

use framelab::rkhs::{check_pointwise_l2, RkhsKernel};
use framelab::rng::SplitMix64;
use framelab::systems::{make_sampled, QuadratureKind, QuadratureRule, VectorSystem};

fn main() {
    // delta columns with unit weights: G = I, so K is the discrete delta
    let m = 5;
    let values: Vec<Vec<f64>> = (0..m)
        .map(|n| (0..m).map(|k| if k == n { 1.0 } else { 0.0 }).collect())
        .collect();
    let grid: Vec<f64> = (0..m).map(|k| k as f64).collect();
    let delta = VectorSystem::sampled(values, grid, vec![1.0; m]).expect("delta system");
    let k = RkhsKernel::build(&delta, m, 1e-12).expect("kernel");
    println!(
        "delta system kernel K(1,1) = {:.3}, K(1,2) = {:.3}",
        k.eval(1.0, 1.0).unwrap(),
        k.eval(1.0, 2.0).unwrap()
    );
    let rep = k
        .reproducing_check(
            &[0.4, -1.0, 2.0, 0.0, 0.3],
            &[0.0, 1.0, 2.0, 3.0, 4.0],
            1e-12,
        )
        .unwrap();
    println!(
        "delta reproducing residual: {:.3e} (pass: {})",
        rep.max_residual, rep.pass
    );

    // constants + first trigonometric pair sampled on 64 nodes: a frame on
    // its span with bounds far from zero
    let rule = QuadratureRule::new(QuadratureKind::Trapezoid, 64);
    let (grid, _) = rule.nodes_weights(0.0, 1.0).expect("rule");
    let tau = std::f64::consts::TAU;
    let values = vec![
        grid.iter().map(|_| 1.0).collect::<Vec<f64>>(),
        grid.iter().map(|t| (tau * t).sin() * 2f64.sqrt()).collect(),
        grid.iter().map(|t| (tau * t).cos() * 2f64.sqrt()).collect(),
    ];
    let trig = make_sampled(values, grid.clone(), rule).expect("sampled system");
    let k = RkhsKernel::build(&trig, 3, 1e-12).expect("kernel");
    let mut rng = SplitMix64::new(8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let xi = rng.normal_vec(3);
        let rep = k.reproducing_check(&xi, &grid, 1e-9).expect("check");
        worst = worst.max(rep.max_residual / rep.f_norm);
    }
    println!("\ntrig system worst relative reproducing residual over 20 span vectors: {worst:.3e}");

    // the ℓ² hypothesis on point evaluations, where the kernel column l(t)
    // must live: fast geometric decay at t = 1/2, slow growth at t = 0.999
    let mono = VectorSystem::hilbert_monomial();
    let fast = check_pointwise_l2(&mono, 0.5, &[8, 16, 32]).expect("diag");
    let slow = check_pointwise_l2(&mono, 0.999, &[100, 200]).expect("diag");
    println!(
        "\nmonomials: Σ|φₙ(1/2)|² = {:.9} (→ 4/3, cauchy {}), Σ|φₙ(0.999)|² at N=200: {:.3} (→ 500.25, cauchy {})",
        fast.partial_sums.last().unwrap(),
        fast.cauchy_flag,
        slow.partial_sums.last().unwrap(),
        slow.cauchy_flag
    );

    assert!(rep.pass && worst < 1e-9 && fast.cauchy_flag && !slow.cauchy_flag);
    println!("\nreproducing-kernel identities verified.");
}
