//! Exact averages over all polynomials of a fixed degree, with the attached
//! closed-form comparisons.

use fqdyn::census::{poly_census, CensusConfig};
use fqdyn::make_field;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = CensusConfig::default();
    for (p, d) in [(2, 2), (5, 2), (7, 3)] {
        let ctx = make_field(p, 1, None)?;
        let report = poly_census(&ctx, d, &cfg)?;
        println!(
            "q = {p}, d = {d}: {} maps, components {}, periodic {}",
            report.map_count, report.avg_components, report.avg_periodic
        );
        for c in &report.theory {
            println!("    {:<22} {:?} {:>8}", c.name, c.relation, c.status.as_str());
        }
        assert!(!report.has_failures());
    }
    let ctx = make_field(5, 1, None)?;
    print!("{}", poly_census(&ctx, 2, &cfg)?.to_csv());
    Ok(())
}
