//! Run with: cargo run --example charpoly
//!
//! Characteristic polynomials from the intersection lattice, and the
//! deletion-restriction recursion for one hyperplane.

use freearr::arrangement::{all_hyperplanes, Arrangement};
use freearr::field::field_of_order;
use freearr::lattice::{build_lattice, char_poly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for q in [2, 3, 4] {
        let all = all_hyperplanes(field_of_order(q)?, 3)?;
        let cp = char_poly(&all)?;
        println!(
            "A_all(F_{q}^3): {} planes, chi = {cp} = {}",
            all.len(),
            cp.factored().unwrap_or_default()
        );
    }

    let f3 = field_of_order(3)?;
    let a = Arrangement::from_ints(f3, 3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])?;
    let lattice = build_lattice(&a)?;
    println!(
        "\nfour generic planes: flats by dimension {:?}",
        lattice.flat_counts_by_dim()
    );
    println!("chi = {}", lattice.char_poly());

    let h = a.hyperplanes()[3].clone();
    let deleted = a.delete(&h)?;
    let restricted = a.restrict(&h)?.restricted;
    println!(
        "delete {h}: chi = {}; restrict: {} lines, chi = {}",
        char_poly(&deleted)?,
        restricted.len(),
        char_poly(&restricted)?
    );
    println!(
        "chi(A) = chi(A') - chi(A''): {}",
        char_poly(&a)? == char_poly(&deleted)?.sub(&char_poly(&restricted)?)?
    );
    Ok(())
}
