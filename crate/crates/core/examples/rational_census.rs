//! Exact census of rational maps on the projective line, plus a sampled
//! estimate on a field too large to enumerate.

use fqdyn::census::{rat_census, sampled_census, CensusConfig, MapFamily, SampleScheme};
use fqdyn::make_field;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = CensusConfig::default();
    let f5 = make_field(5, 1, None)?;
    let report = rat_census(&f5, 2, &cfg)?;
    println!(
        "q = 5, d = 2: {} maps, components {}, periodic {}",
        report.map_count, report.avg_components, report.avg_periodic
    );
    for c in &report.theory {
        println!("    {:<26} {:?} {}", c.name, c.relation, c.status.as_str());
    }

    let f101 = make_field(101, 1, None)?;
    let sampled = sampled_census(&f101, MapFamily::Rational, 3, 2000, 0, SampleScheme::Uniform, &cfg)?;
    let info = sampled.sampling.as_ref().expect("sampled");
    println!(
        "q = 101, d = 3, {} samples: components {:.4} +- {:.4}",
        info.samples,
        fqdyn::theory::to_f64(&sampled.avg_components),
        info.stderr_components
    );
    Ok(())
}
