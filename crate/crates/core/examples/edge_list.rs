//! Read a hand-written citation list and walk it in dependency order.
//!
//!     cargo run --example edge_list

use ept_lab::graph::{degrees, from_edge_list, to_edge_list};

fn main() -> ept_lab::Result<()> {
    let dag = from_edge_list(include_str!("../data/euclid_book1.deps"))?;
    let table = degrees(&dag);

    println!("{:<6} {:>5} {:>10}", "prop", "cites", "cited by");
    for n in dag.topological_order() {
        println!("{:<6} {:>5} {:>10}", dag.id(n), table.in_degree[n.index()], table.out_degree[n.index()]);
    }

    let sinks: Vec<&str> = dag.sinks().into_iter().map(|n| dag.id(n)).collect();
    println!("\nnothing depends on: {}", sinks.join(", "));

    // pick one sink as the target and round-trip through the text format
    let target = dag.find("I.10").expect("present");
    let dag = dag.with_theorem(Some(target))?;
    print!("\n{}", to_edge_list(&dag)?);
    Ok(())
}
