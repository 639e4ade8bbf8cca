//! Random fields driven by a covariance Gramian.
//!
//! A family of L² random variables indexed by vertices is encoded entirely
//! by its covariance C = (E(φ_x φ_y)). Here: the random-frame diagnostic,
//! Gaussian sampling through C^(1/2), convergence of the empirical Gramian,
//! and the deterministic band estimate
//! a·E(|f|²) ≤ Σ_x |E(φ_x f)|² ≤ b·E(|f|²) on band eigenvectors.
//!
//! Run with: cargo run --example random_fields

use framelab::fields::{
    band_estimate_check, check_random_frame, empirical_gramian, RandomFieldModel,
};
use framelab::spectral::SymMatrix;

fn main() {
    // a small path-graph-style covariance: diagonal 1, neighbors 0.4
    let v = 6;
    let c = SymMatrix::from_fn(v, |i, j| {
        if i == j {
            1.0
        } else if i.abs_diff(j) == 1 {
            0.4
        } else {
            0.0
        }
    });

    let diag = check_random_frame(&c).expect("diagnostic");
    println!(
        "random-frame diagnostic: PSD {} (min eigenvalue {:.4}), row l2 norms {:?}",
        diag.is_psd,
        diag.min_eigenvalue,
        diag.row_l2
            .iter()
            .map(|x| (x * 100.0).round() / 100.0)
            .collect::<Vec<_>>()
    );

    let model = RandomFieldModel::new(c.clone(), 4242).expect("PSD covariance");
    println!("\nempirical Gramian error ||C_hat - C||_F by sample count:");
    for m in [100usize, 1000, 10_000] {
        let c_hat = empirical_gramian(&model.sample(m));
        let mut err2 = 0.0;
        for i in 0..v {
            for j in 0..v {
                err2 += (c_hat.at(i, j) - c.at(i, j)).powi(2);
            }
        }
        println!("  M = {m:>6}: {:.5}", err2.sqrt());
    }

    // band estimate on the top half of the spectrum
    let d = model.decomposition();
    let lam_max = d.lambda_max_abs();
    let (a, b) = (0.5 * lam_max, lam_max);
    let c_vectors: Vec<Vec<f64>> = d
        .eigenpairs()
        .filter(|(lam, _)| *lam >= a && *lam <= b + 1e-12 * lam_max)
        .map(|(_, vec)| vec.to_vec())
        .collect();
    let band = band_estimate_check(&c, a, b, &c_vectors, 1e-10).expect("band estimate");
    println!(
        "\nband estimate on [{a:.4}, {b:.4}] ({} eigenvectors):",
        c_vectors.len()
    );
    for item in &band.items {
        println!(
            "  {:.4} <= {:.4} <= {:.4}  ({})",
            item.lower,
            item.frame_sum,
            item.upper,
            if item.pass { "pass" } else { "VIOLATED" }
        );
    }

    assert!(diag.is_psd && band.pass);
    println!("\nrandom-field checks verified.");
}
