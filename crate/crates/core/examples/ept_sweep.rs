//! Sweep the per-step error rate on a chain and on an assembly network.
//! The chain settles back to even odds at every error rate; the network
//! holds on to the theorem more firmly as the error rate drops.
//!
//!     cargo run --release --example ept_sweep

use ept_lab::assembly::{generate, AssemblyParams};
use ept_lab::belief::{PriorMode, Schedule};
use ept_lab::experiments::ept_sweep;
use ept_lab::graph::from_edge_list;

fn main() -> ept_lab::Result<()> {
    let mut text = String::from("v0:\n");
    for i in 1..500 {
        text.push_str(&format!("v{i}: v{}\n", i - 1));
    }
    let chain = from_edge_list(&text)?;
    let network = generate(&AssemblyParams { n_nodes: 2000, ..AssemblyParams::default() })?;

    let grid = [0.4, 0.3, 0.2, 0.15, 0.1, 0.05, 0.02, 0.01];
    // a long chain relaxes slowly at low error rates
    let slow = Schedule { burn_in_sweeps: 10_000, n_samples: 500, sample_stride_sweeps: 10, n_replicas: 16, seed: 0 };
    let fast = Schedule { n_replicas: 4, ..Schedule::default() };
    let chain_rows = ept_sweep(&chain, &grid, 0.75, PriorMode::InitOnly, &slow)?.rows;
    let net_rows = ept_sweep(&network, &grid, 0.75, PriorMode::InitOnly, &fast)?.rows;

    println!("{:>6} {:>6} {:>14} {:>14}", "eps", "beta", "chain theorem", "net theorem");
    for (c, n) in chain_rows.iter().zip(&net_rows).rev() {
        println!(
            "{:>6} {:>6.3} {:>14.3} {:>14.3}",
            c.epsilon,
            c.beta,
            c.theorem_belief.unwrap_or(f64::NAN),
            n.theorem_belief.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
