//! Rho lengths of random quadratic polynomials over a prime field, measured
//! with Brent's method without building the graph.

use fqdyn::census::{rho_experiment, CensusConfig, MapFamily};
use fqdyn::make_field;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fp = make_field(10_007, 1, None)?;
    let s = rho_experiment(&fp, 2, MapFamily::Poly, 1000, 0, false, &CensusConfig::default())?;
    println!(
        "mean tail {:.1}, mean cycle {:.1}, mean rho {:.1}; band [{:.1}, {:.1}] -> {}",
        s.mean_tail,
        s.mean_cycle,
        s.mean_rho,
        s.band[0],
        s.band[1],
        s.status.as_str()
    );
    for (start, count) in s.histogram.iter().take(8) {
        println!("{start:>5} {}", "#".repeat((*count as usize).div_ceil(4)));
    }
    Ok(())
}
