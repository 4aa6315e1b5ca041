//! Write a module-coloured DOT file and a partition document.
//!
//!     cargo run --example export -- out_dir

use std::path::PathBuf;

use ept_lab::ast::{alpha_number, parse_sexpr, reify_dag};
use ept_lab::communities::girvan_newman;
use ept_lab::format::{export_graph, partition_to_json, GraphFormat};

fn main() -> ept_lab::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let dag = reify_dag(&alpha_number(&parse_sexpr(include_str!("../data/ev4.sexp"))?))?;
    let partition = girvan_newman(&dag);

    std::fs::write(dir.join("ev4.dot"), export_graph(&dag, GraphFormat::Dot, Some(&partition))?)?;
    std::fs::write(dir.join("ev4.json"), export_graph(&dag, GraphFormat::Json, None)?)?;
    std::fs::write(dir.join("ev4.partition.json"), partition_to_json(&dag, &partition)?)?;
    println!("wrote ev4.dot, ev4.json and ev4.partition.json to {}", dir.display());
    println!("render with: dot -Tsvg {}/ev4.dot -o ev4.svg", dir.display());
    Ok(())
}
