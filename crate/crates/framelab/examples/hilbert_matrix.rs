//! The Hilbert matrix as the designed negative example.
//!
//! The monomials tⁿ on (0,1) have Gramian entries 1/(n+m+1): the Hilbert
//! matrix. Its truncations have operator norms that climb toward π from
//! below (but only logarithmically), while the smallest eigenvalue
//! collapses to zero: there is an upper frame bound π but no positive lower
//! bound, so L²(0,1) is not a reproducing kernel Hilbert space, and the
//! kernel construction visibly breaks down as N grows.
//!
//! Run with: cargo run --example hilbert_matrix

use framelab::gramian::build_gramian;
use framelab::rkhs::RkhsKernel;
use framelab::rng::SplitMix64;
use framelab::spectral::{eig_sym, operator_norm, DEFAULT_ORTHO_TOL};
use framelab::systems::VectorSystem;

fn main() {
    let sys = VectorSystem::hilbert_monomial();
    let points: Vec<f64> = (1..=19).map(|i| i as f64 / 20.0).collect();

    println!(
        "{:>5} {:>12} {:>14} {:>14}  reproducing@1e-8",
        "N", "||G_N||", "pi - ||G_N||", "lambda_min"
    );
    let mut prev_norm = 0.0;
    for n in [5usize, 10, 20, 50, 100] {
        let g = build_gramian(&sys, n).expect("gramian");
        let d = eig_sym(&g.matrix, DEFAULT_ORTHO_TOL).expect("eig");
        let norm = operator_norm(&d);
        assert!(norm > prev_norm && norm < std::f64::consts::PI);
        prev_norm = norm;

        let k = RkhsKernel::build(&sys, n, 1e-12).expect("kernel");
        let mut rng = SplitMix64::new(n as u64);
        let mut pass = true;
        for _ in 0..10 {
            let xi = rng.normal_vec(n);
            pass &= k.reproducing_check(&xi, &points, 1e-8).expect("check").pass;
        }
        println!(
            "{n:>5} {norm:>12.8} {:>14.3e} {:>14.3e}  {}",
            std::f64::consts::PI - norm,
            d.lambda_min(),
            if pass { "holds" } else { "BREAKS" }
        );
    }

    println!(
        "\nthe norms increase toward pi = {:.8} from below; the smallest eigenvalue\n\
         hits the rank cutoff around N = 10-12, and from there the reproducing\n\
         property fails: no positive lower frame bound, no RKHS.",
        std::f64::consts::PI
    );
}
