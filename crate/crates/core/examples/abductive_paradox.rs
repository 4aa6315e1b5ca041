//! Theorem and average belief over a grid of deductive and abductive error
//! rates.
//!
//!     cargo run --release --example abductive_paradox

use ept_lab::assembly::{generate, AssemblyParams};
use ept_lab::belief::{PriorMode, Schedule};
use ept_lab::experiments::abductive_grid;

fn main() -> ept_lab::Result<()> {
    let dag = generate(&AssemblyParams { n_nodes: 2000, ..AssemblyParams::default() })?;
    let dep = [0.2, 0.1, 0.05, 0.01];
    let imp = [0.2, 0.1, 0.05, 0.01, 0.001];
    let schedule = Schedule { n_replicas: 4, ..Schedule::default() };
    let g = abductive_grid(&dag, &dep, &imp, 0.75, PriorMode::InitOnly, &schedule)?;

    for (title, table) in [("theorem belief", &g.theorem), ("mean belief", &g.mean)] {
        println!("{title}: rows eps_dep, columns eps_imp");
        print!("{:>7}", "");
        for e in &g.eps_imp {
            print!("{e:>8}");
        }
        println!();
        for (i, d) in g.eps_dep.iter().enumerate() {
            print!("{d:>7}");
            for v in &table[i] {
                print!("{v:>8.4}");
            }
            println!();
        }
        println!();
    }
    Ok(())
}
