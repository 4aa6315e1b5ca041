//! Grow synthetic proof networks and compare how the copy probability
//! shapes the degree distributions.
//!
//!     cargo run --release --example assembly_network

use ept_lab::assembly::{generate, AssemblyParams};
use ept_lab::graph::degrees;
use ept_lab::netstats::{fit_exponential, fit_power_law};

fn main() -> ept_lab::Result<()> {
    println!("{:>5} {:>8} {:>8} {:>7} {:>10}", "copy", "edges", "max out", "alpha", "mean in");
    for copy_prob in [0.0, 0.4, 0.8, 0.95] {
        let dag = generate(&AssemblyParams { copy_prob, ..AssemblyParams::default() })?;
        let t = degrees(&dag);
        let alpha = fit_power_law(&t.out_degree).map(|f| format!("{:.3}", f.alpha)).unwrap_or_else(|_| "-".into());
        let mean_in = fit_exponential(&t.in_degree)?.mean;
        println!(
            "{copy_prob:>5} {:>8} {:>8} {alpha:>7} {mean_in:>10.3}",
            dag.edge_count(),
            t.out_degree.iter().max().unwrap()
        );
    }
    Ok(())
}
