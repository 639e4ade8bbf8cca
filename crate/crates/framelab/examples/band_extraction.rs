//! Extracting the maximal band subspace H(a,b) and checking its frame
//! estimate and maximality.
//!
//! System B = {(1,0), (0,1), (1/√2, 1/√2)} has frame operator with spectrum
//! {1, 2}. The band [0.9, 1.1] captures exactly the λ=1 eigenspace; every
//! unit vector inside satisfies the frame estimate with bounds (a,b), and
//! adjoining the excluded λ=2 eigenvector breaks it.
//!
//! Run with: cargo run --example band_extraction

use framelab::frames::{
    band_extract, maximality_check, synthesis, verify_frame_bounds, SpanVector,
};
use framelab::gramian::build_gramian;
use framelab::systems::VectorSystem;

fn main() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let sys = VectorSystem::explicit(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![r, r]])
        .expect("valid coordinates");
    let g = build_gramian(&sys, 3).expect("gramian");

    let band = band_extract(&g, 0.9, 1.1, 1e-12).expect("band");
    println!("band [0.9, 1.1]: dimension {}", band.dim());
    println!(
        "attained sharp bounds: {:?}",
        band.attained.expect("nonempty")
    );

    for onb_vec in &band.onb {
        let SpanVector::Ambient(x) = synthesis(&sys, onb_vec).expect("synthesis") else {
            unreachable!("explicit system")
        };
        println!(
            "ambient realization of the band basis vector: ({:.6}, {:.6})",
            x[0], x[1]
        );
    }

    let bounds = verify_frame_bounds(&g, &band, 100, 7, 1e-9);
    println!(
        "\nframe estimate over {} random unit f in H(a,b): quotients in [{:.12}, {:.12}] -> {}",
        bounds.executed,
        bounds.min_quotient.unwrap(),
        bounds.max_quotient.unwrap(),
        if bounds.pass { "pass" } else { "VIOLATED" }
    );

    let maximality = maximality_check(&g, &band, 1e-9);
    println!("\nmaximality witness (every excluded eigenvector must violate the estimate):");
    for e in &maximality.excluded {
        println!(
            "  eigenvalue {:.6}: quotient {:.6} outside [0.9, 1.1] -> {}",
            e.eigenvalue, e.quotient, e.outside_band
        );
    }
    println!("maximality confirmed: {}", maximality.confirmed);

    // a wider band swallows the whole positive spectrum
    let wide = band_extract(&g, 1.0, 2.0, 1e-12).expect("band");
    println!(
        "\nband [1.0, 2.0] captures the whole plane: dimension {}",
        wide.dim()
    );

    assert!(bounds.pass && maximality.confirmed && wide.dim() == 2);
    println!("band extraction verified.");
}
