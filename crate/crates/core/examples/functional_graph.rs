//! Functional graph of x^2 + 1 on F_7: cycle census and rho lengths.

use fqdyn::{build_graph, cycle_census, make_field, rho_length, Poly};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f7 = make_field(7, 1, None)?;
    let f = Poly::from_handles(&[1, 0, 1]);
    let g = build_graph(&f7, &f);
    println!("successors: {:?}", g.succ());

    let stats = cycle_census(&g)?;
    println!("{}", serde_json::to_string(&stats)?);

    for start in 0..g.size() {
        let r = rho_length(&g, start)?;
        println!("start {start}: tail {} cycle {}", r.tail, r.cycle);
    }
    Ok(())
}
