//! Polynomials and rational maps: canonical forms, enumeration counts,
//! interpolation and conjugation by a Mobius transformation.

use fqdyn::fmaps::{conjugate, enumerate_polys, interpolate, DegreeMode, RationalSpace};
use fqdyn::{build_graph, cycle_census, make_field, FqElem, Mobius, Poly, RationalMap};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f5 = make_field(5, 1, None)?;
    let e = FqElem::from_handle;

    let quadratics = enumerate_polys(&f5, 2, DegreeMode::Exactly).count();
    println!("degree-2 polynomials over F_5: {quadratics}");

    let space = RationalSpace::new(&f5, 1, DegreeMode::Exactly);
    println!(
        "degree-1 rational maps over F_5: {} (raw slots {})",
        space.iter(&f5).count(),
        space.raw_len()
    );

    // (2x^2 + 2x) / (2x) reduces to x + 1
    let r = RationalMap::new(&f5, &Poly::from_handles(&[0, 2, 2]), &Poly::from_handles(&[0, 2]))?;
    println!("canonical form: {}", serde_json::to_string(&r)?);

    let f = interpolate(&f5, &[(e(0), e(1)), (e(1), e(3)), (e(2), e(2))])?;
    println!("interpolant through (0,1), (1,3), (2,2): {:?}", f.handles());

    let phi = Mobius::new(&f5, e(1), e(2), e(3), e(2))?;
    let g = RationalMap::from_poly(&Poly::from_handles(&[1, 0, 1]));
    let h = conjugate(&f5, &g, &phi);
    let before = cycle_census(&build_graph(&f5, &g))?;
    let after = cycle_census(&build_graph(&f5, &h))?;
    println!("x^2 + 1 cycles {:?}, conjugate cycles {:?}", before.cycle_lengths, after.cycle_lengths);
    assert_eq!(before.cycle_lengths, after.cycle_lengths);
    Ok(())
}
