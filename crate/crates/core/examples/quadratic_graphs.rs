//! Graphs with every in-degree 0 or m: enumeration, sampling and the exact
//! average number of periodic points.

use fqdyn::baseline::{baseline_census, enumerate_quadratic_graphs, has_indegree_profile, sample_quadratic_graph, BaselineKind};
use fqdyn::census::CensusConfig;
use fqdyn::report::Mode;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let first: Vec<_> = enumerate_quadratic_graphs(2, 2)?.take(3).collect();
    for g in &first {
        println!("{:?}", g.succ());
    }
    let g = sample_quadratic_graph(2, 6, 4)?;
    println!("sampled (2, 6): {:?} valid = {}", g.succ(), has_indegree_profile(&g, 2));

    let cfg = CensusConfig::default();
    for (m, t) in [(2, 2), (2, 3), (3, 2), (1, 3)] {
        let r = baseline_census(BaselineKind::Quadratic { m, t }, Mode::Exhaustive, 0, 0, &cfg)?;
        println!("(m, t) = ({m}, {t}): {} graphs, periodic {}", r.map_count, r.avg_periodic);
        assert!(!r.has_failures());
    }
    Ok(())
}
