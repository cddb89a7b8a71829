//! Brute-force oracles for the counting lemmas: cycle givers, the
//! constrained-multiple count, and the verification harnesses built on them.

use fqdyn::census::{count_cycle_givers, enumerate_S, prov_case, CensusConfig};
use fqdyn::verify;
use fqdyn::{make_field, FqElem, Poly};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = make_field(3, 1, None)?;
    let e = FqElem::from_handle;

    let n = count_cycle_givers(&f3, 2, &[e(0), e(1)])?;
    println!("quadratics over F_3 swapping 0 and 1: {n}");

    let g0 = Poly::monic_linear(&f3, e(2));
    let s = enumerate_S(&f3, &g0, &Poly::x(), &[e(2)], &[e(1)])?;
    println!("|S| = {s}, predicted {:?}", prov_case(&f3, &g0, &Poly::x(), &[e(2)]));

    let cfg = CensusConfig::default();
    let checks = [
        verify::lemma_polys(&f3, 3, &cfg)?,
        verify::rat_count(&make_field(5, 1, None)?, 2, &cfg)?,
        verify::prov(240, 0)?,
        verify::cycle_bounds(&make_field(5, 1, None)?, 2, &cfg)?,
    ];
    for v in &checks {
        println!("{:<13} {} cases: {}", v.check, v.cases.len(), v.status.as_str());
        assert!(v.passed(), "{:?}", v.failures());
    }
    Ok(())
}
