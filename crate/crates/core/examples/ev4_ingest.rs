//! Parse a small term dump, number its binders and reify it into a shared
//! dependency graph.
//!
//!     cargo run --example ev4_ingest

use ept_lab::ast::{alpha_number, parse_sexpr, reify_dag};
use ept_lab::graph::{classify_roles, degrees};

fn main() -> ept_lab::Result<()> {
    let forest = parse_sexpr(include_str!("../data/ev4.sexp"))?;
    println!("{} definitions", forest.len());
    for def in &forest.definitions {
        println!("  {} ({} tree nodes)", def.name, def.body.size());
    }

    let dag = reify_dag(&alpha_number(&forest))?;
    let roles = classify_roles(&dag)?;
    let table = degrees(&dag);
    println!("\n{} graph nodes, {} edges", dag.node_count(), dag.edge_count());
    println!("theorem: {}", dag.label(roles.theorem));
    println!("axioms:");
    for &a in &roles.axioms {
        println!("  {:<20} used by {}", dag.label(a), table.out_degree[a.index()]);
    }
    Ok(())
}
