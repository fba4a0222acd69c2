//! Run with: cargo run --example counting
//!
//! Complement points over F_{q^k}, counted by brute force and by k-tuples of
//! F_q-points, against the characteristic polynomial.

use freearr::arrangement::{all_hyperplanes, ziegler};
use freearr::counting::{count_complement_extension, crapo_rota_count};
use freearr::field::field_of_order;
use freearr::lattice::char_poly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = field_of_order(3)?;
    let cases = [
        ("A_all(F_2^3)", all_hyperplanes(field_of_order(2)?, 3)?),
        ("ziegler", ziegler(f3.clone())?),
        ("A_all(F_3^3)", all_hyperplanes(f3, 3)?),
    ];
    for (name, arr) in &cases {
        let cp = char_poly(arr)?;
        println!("{name}: chi = {cp}");
        for k in 1..=2 {
            let direct = count_complement_extension(arr, k)?;
            let tuples = crapo_rota_count(arr, k)?;
            let value = cp.eval((arr.q() as i64).pow(k))?;
            println!("  k={k}: direct {direct:>5}  tuples {tuples:>5}  chi(q^k) {value:>5}");
        }
    }
    Ok(())
}
