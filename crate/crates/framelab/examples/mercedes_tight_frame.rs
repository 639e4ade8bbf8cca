//! The Mercedes-Benz frame: three unit vectors in the plane at 120° spacing.
//!
//! The symmetry forces a tight frame: the frame operator is (3/2)·I, every
//! unit vector has frame quotient exactly 3/2, and rescaling by √(2/3)
//! yields a Parseval frame.
//!
//! Run with: cargo run --example mercedes_tight_frame

use framelab::frames::{
    analysis, band_extract, frame_operator, parseval_frame, verify_frame_bounds, SpanVector,
};
use framelab::gramian::build_gramian;
use framelab::systems::VectorSystem;

fn main() {
    let s3 = 3.0f64.sqrt() / 2.0;
    let sys = VectorSystem::explicit(vec![vec![1.0, 0.0], vec![-0.5, s3], vec![-0.5, -s3]])
        .expect("valid coordinates");

    let g = build_gramian(&sys, 3).expect("gramian");
    println!("Gramian (cosines of 120° angles):");
    for i in 0..3 {
        println!(
            "  {:7.4} {:7.4} {:7.4}",
            g.matrix.at(i, 0),
            g.matrix.at(i, 1),
            g.matrix.at(i, 2)
        );
    }

    let s = frame_operator(&sys, &g);
    println!("\nframe operator S = Σ φₙφₙᵀ:");
    println!("  {:7.4} {:7.4}", s.at(0, 0), s.at(0, 1));
    println!("  {:7.4} {:7.4}", s.at(1, 0), s.at(1, 1));

    let coeffs = analysis(&g, &sys, &SpanVector::Ambient(vec![1.0, 0.0])).expect("analysis");
    println!("\nanalysis of e₁: {coeffs:.3?}");

    // the nonzero Gramian spectrum is the doubled eigenvalue 3/2; the whole
    // plane is the band subspace for any interval containing it
    let band = band_extract(&g, 1.4, 1.6, 1e-12).expect("band");
    let check = verify_frame_bounds(&g, &band, 100, 2024, 1e-9);
    println!(
        "\nband [1.4, 1.6]: dim {} attained {:?}",
        band.dim(),
        band.attained.expect("nonempty band")
    );
    println!(
        "frame quotient over {} random unit vectors: [{:.12}, {:.12}]",
        check.executed,
        check.min_quotient.unwrap(),
        check.max_quotient.unwrap()
    );

    let p = parseval_frame(&sys, &g, 1e-12).expect("tight frames are well conditioned");
    let psi = p.ambient.as_ref().expect("explicit system");
    println!("\ncanonical Parseval frame ψₙ = S^(-1/2) φₙ (each = √(2/3)·φₙ):");
    for row in psi {
        println!("  ({:8.5}, {:8.5})", row[0], row[1]);
    }
    let q = p.parseval_quotient(&g, &[0.3, -1.1, 0.7]);
    println!("Parseval quotient of a test span vector: {q:.15}");

    assert!((check.min_quotient.unwrap() - 1.5).abs() < 1e-12);
    assert!((check.max_quotient.unwrap() - 1.5).abs() < 1e-12);
    assert!((q - 1.0).abs() < 1e-12);
    println!("\ntight-frame identities verified.");
}
