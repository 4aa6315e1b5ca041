//! Split a graph into modules with Girvan-Newman and Louvain, then keep the
//! largest modules.
//!
//!     cargo run --release --example communities

use ept_lab::assembly::{generate, AssemblyParams};
use ept_lab::ast::{alpha_number, parse_sexpr, reify_dag};
use ept_lab::communities::{girvan_newman, louvain, top_clusters};

fn main() -> ept_lab::Result<()> {
    let ev4 = reify_dag(&alpha_number(&parse_sexpr(include_str!("../data/ev4.sexp"))?))?;
    let gn = girvan_newman(&ev4);
    println!("ev_4: {} modules, Q = {:.4}", gn.module_count(), gn.modularity);
    for (k, members) in gn.modules().iter().enumerate() {
        let labels: Vec<&str> = members.iter().map(|&n| ev4.label(n)).collect();
        println!("  module {k}: {}", labels.join(" "));
    }

    let big = generate(&AssemblyParams { n_nodes: 3000, ..AssemblyParams::default() })?;
    let fast = louvain(&big);
    let top = top_clusters(&big, &fast, 0.8);
    println!(
        "\nassembly n=3000: louvain finds {} modules (Q = {:.4}); {} cover 80% of nodes",
        fast.module_count(),
        fast.modularity,
        top.module_count()
    );
    Ok(())
}
