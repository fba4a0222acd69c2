//! Run with: cargo run --example freeness
//!
//! Logarithmic derivations: graded pieces, minimal generators and a Saito
//! basis for the arrangement of all planes, then a few freeness decisions.

use freearr::arrangement::{all_hyperplanes, Arrangement};
use freearr::derivations::{
    decide_freeness, graded_piece, minimal_generators, saito_check, Derivation,
};
use freearr::field::field_of_order;
use freearr::poly::PolyRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = field_of_order(3)?;
    let all = all_hyperplanes(f3.clone(), 3)?;
    let ring = PolyRing::new(f3.clone(), 3);

    let dims: Vec<usize> = (0..=4).map(|d| graded_piece(&all, d).dim()).collect();
    println!("dim D(A)_d for d = 0..4: {dims:?}");

    let gens = minimal_generators(&all, 9);
    for g in &gens {
        println!("generator of degree {}: {}", g.degree(), g.format(&ring));
    }

    let frobenius: Vec<Derivation> = (0..3).map(|k| Derivation::frobenius(&ring, k)).collect();
    let cert = saito_check(&all, &frobenius)?.expect("x^(q^k) fields form a basis");
    println!(
        "x_i^(3^k) d/dx_i for k = 0,1,2: det = {} * Q, exponents {:?}",
        cert.scalar, cert.exponents
    );

    let cases = [
        ("boolean", Arrangement::boolean(f3.clone(), 3)),
        (
            "four generic planes",
            Arrangement::from_ints(
                f3.clone(),
                3,
                &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]],
            )?,
        ),
        ("x = 0", Arrangement::from_ints(f3, 3, &[&[1, 0, 0]])?),
    ];
    for (name, arr) in &cases {
        let r = decide_freeness(arr)?;
        println!(
            "{name}: {} ({}), exponents {:?}",
            r.verdict,
            r.certificate.kind(),
            r.exponents
        );
    }
    Ok(())
}
