//! Closed forms and bounds evaluated exactly, and the full formula dump.

use fqdyn::report::FormulaDump;
use fqdyn::theory;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("total 2-cycles, q = 5, d = 3: {}", theory::poly_cycle_sum(5, 3, 2)?);
    println!("average 2-cycles, q = 5, d = 2: {}", theory::poly_avg_k(5, 2, 2)?);

    let b = theory::poly_component_bounds(2, 2);
    println!("poly components q = 2, d = 2: [{}, {}] tight = {}", b.lower, b.upper, b.lower_is_tight);

    let b = theory::rat_component_bounds(9, 3);
    println!("rational lower bound q = 9, d = 3: {} (vacuous = {})", b.lower, b.lower_vacuous);

    let rm = theory::random_map_stats(4);
    println!("random maps on 4 points: components {}, periodic {}", rm.components_exact, rm.periodic_exact);

    let quad = theory::quad_graph_stats(2, 3)?;
    println!("quadratic graphs (2, 3): {} graphs, periodic {}", quad.graph_count, quad.avg_periodic);

    print!("{}", FormulaDump::build(9, 3, Some(2)).to_csv());
    Ok(())
}
