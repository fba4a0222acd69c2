//! Run with: cargo run --example ziegler
//!
//! Nine planes in F_3^3 whose characteristic polynomial splits over the
//! integers although the arrangement is not free.

use freearr::arrangement::ziegler;
use freearr::counting::complement_points;
use freearr::derivations::{decide_freeness, minimal_nontrivial_degree, Certificate};
use freearr::field::field_of_order;
use freearr::lattice::char_poly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = ziegler(field_of_order(3)?)?;
    let cp = char_poly(&z)?;
    println!(
        "{} planes, chi = {}",
        z.len(),
        cp.factored().unwrap_or_default()
    );
    let pts = complement_points(&z)?;
    let shown: Vec<Vec<u32>> = pts
        .iter()
        .map(|p| p.iter().map(|c| c.0).collect())
        .collect();
    println!("complement: {shown:?}");

    let report = decide_freeness(&z)?;
    println!("verdict: {}", report.verdict);
    if let Certificate::GeneratorExcess { degrees } = &report.certificate {
        println!("minimal generators in degrees {degrees:?}, more than 3");
    }
    println!("hilbert function: {:?}", report.hilbert);
    println!(
        "least degree beyond multiples of the Euler field: {}",
        minimal_nontrivial_degree(&z)?
    );
    Ok(())
}
