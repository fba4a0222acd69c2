//! Run with: cargo run --example fields
//!
//! Arithmetic in F_9, the Frobenius map, and the embedding of F_3 in F_27.

use freearr::field::{extend, make_field, Elem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f9 = make_field(3, 2)?;
    println!(
        "F_9 = F_3[x]/({:?}), elements written as digit vectors low degree first",
        f9.modulus().iter().map(|c| c.0).collect::<Vec<_>>()
    );
    let a = f9.from_prime_coefficients(&[1, 1]).unwrap();
    let b = f9.from_prime_coefficients(&[0, 2]).unwrap();
    let show = |x: Elem| format!("{:?}", f9.prime_coefficients(x));
    println!("a = {}, b = {}", show(a), show(b));
    println!("a + b = {}", show(f9.add(a, b)));
    println!("a * b = {}", show(f9.mul(a, b)));
    println!("a^-1 = {}", show(f9.inv(a).unwrap()));
    println!("a^9 == a: {}", f9.pow(a, 9) == a);

    let fixed: Vec<String> = f9
        .elements()
        .filter(|&x| f9.pow(x, 3) == x)
        .map(show)
        .collect();
    println!("fixed points of x -> x^3: {}", fixed.join(" "));

    let f3 = make_field(3, 1)?;
    let ext = extend(&f3, 3)?;
    let k = ext.field();
    let two = ext.embed(f3.elem(2));
    println!(
        "F_27 over F_3: 2 + 2 = {} in F_3 and {:?} in F_27",
        f3.add(f3.elem(2), f3.elem(2)),
        ext.coordinates(k.add(two, two))
            .iter()
            .map(|c| c.0)
            .collect::<Vec<_>>()
    );
    Ok(())
}
