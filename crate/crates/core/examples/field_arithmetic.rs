//! Arithmetic in GF(9) built from the default modulus, and in a prime field
//! too large for log tables.

use fqdyn::{make_field, FqElem};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f9 = make_field(3, 2, None)?;
    println!("GF(9) modulus (constant term first): {:?}", f9.modulus());

    let t = FqElem::from_handle(3); // the class of t
    let g = f9.primitive_element().expect("GF(9) has tables");
    println!("primitive element: {g}");
    println!("t^2 = {}", f9.mul(t, t));
    println!("t + 2 = {}", f9.add(t, FqElem::from_handle(2)));
    println!("1/t = {}", f9.inv(t)?);
    assert_eq!(f9.mul(t, f9.inv(t)?), FqElem::ONE);
    assert_eq!(f9.pow(g, 8), FqElem::ONE);

    let big = make_field(65_537, 1, None)?;
    let x = big.from_int(12_345);
    println!(
        "GF(65537) uses tables: {}; 12345^-1 = {}",
        big.has_tables(),
        big.inv(x)?
    );
    assert!(f9.inv(FqElem::ZERO).is_err());
    Ok(())
}
