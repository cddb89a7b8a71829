//! Uniformly random functional graphs: exhaustive at n = 4, sampled at
//! n = 1000, against the exact averages.

use fqdyn::baseline::{baseline_census, exhaustive_random_stats, sample_random_map, BaselineKind};
use fqdyn::census::CensusConfig;
use fqdyn::report::Mode;
use fqdyn::theory::to_f64;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = CensusConfig::default();
    println!("one random map on 8 points: {:?}", sample_random_map(8, 1)?.succ());

    let exact = exhaustive_random_stats(4, &cfg)?;
    println!("n = 4 over {} maps: components {}", exact.map_count, exact.avg_components);

    let sampled = baseline_census(BaselineKind::Random { n: 1000 }, Mode::Sampled, 2000, 0, &cfg)?;
    for c in sampled.theory.iter().filter(|c| c.quantity != "k_cycles") {
        println!(
            "{:<18} observed {:.3} theory {:.3} z = {:+.2}",
            c.name,
            to_f64(&c.observed),
            to_f64(&c.theory),
            c.z_score.unwrap_or(0.0)
        );
    }
    Ok(())
}
