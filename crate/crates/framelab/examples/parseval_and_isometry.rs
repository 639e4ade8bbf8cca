//! Canonical Parseval frames and the polar-decomposition isometry on a
//! redundant random system.
//!
//! ψₙ = S^(-1/2) φₙ turns any spanning system with a positive lower frame
//! bound into a Parseval frame, and U = T_G^(-1/2) L embeds the Hilbert
//! space isometrically into ℓ². Both facts reduce to Gramian algebra and
//! are checked here over seeded random span vectors.
//!
//! Run with: cargo run --example parseval_and_isometry

use framelab::frames::{parseval_frame, polar_isometry_check};
use framelab::gramian::build_gramian;
use framelab::rng::SplitMix64;
use framelab::systems::VectorSystem;

fn main() {
    // nine random vectors in R^4: redundant, spanning, well conditioned
    let mut rng = SplitMix64::new(314159);
    let coords: Vec<Vec<f64>> = (0..9).map(|_| rng.normal_vec(4)).collect();
    let sys = VectorSystem::explicit(coords).expect("valid coordinates");
    let g = build_gramian(&sys, 9).expect("gramian");

    let p = parseval_frame(&sys, &g, 1e-12).expect("positive lower bound");
    println!(
        "canonical Parseval frame built: {} eigenvalues dropped, smallest retained {:.3e}",
        p.dropped, p.lambda_min_retained
    );

    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let mut trial_rng = SplitMix64::derive(99, trial);
        let xi = trial_rng.normal_vec(9);
        let q = p.parseval_quotient(&g, &xi);
        worst = worst.max((q - 1.0).abs());
    }
    println!("worst Parseval quotient deviation over 100 span vectors: {worst:.3e}");

    let iso = polar_isometry_check(&g, 100, 77, 1e-9).expect("check");
    println!(
        "polar isometry: max |  ||Uf|| - ||f||  | = {:.3e} over {} samples (kernel trivial: {})",
        iso.max_deviation, iso.samples, iso.kernel_trivial
    );

    assert!(worst < 1e-9, "Parseval identity violated: {worst:.3e}");
    assert!(iso.pass, "isometry violated: {:.3e}", iso.max_deviation);
    println!("Parseval and isometry identities verified.");
}
