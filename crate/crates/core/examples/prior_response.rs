//! Posterior theorem belief against the prior at a low error rate.
//!
//!     cargo run --release --example prior_response

use ept_lab::assembly::{generate, AssemblyParams};
use ept_lab::belief::{PriorMode, Schedule};
use ept_lab::experiments::prior_response;

fn main() -> ept_lab::Result<()> {
    let dag = generate(&AssemblyParams { n_nodes: 3000, ..AssemblyParams::default() })?;
    let priors = [0.5, 0.55, 0.6, 0.7, 0.8, 0.9];
    let rows = prior_response(&dag, 0.01, &priors, PriorMode::InitOnly, &Schedule::default())?;
    println!("{:>6} {:>9} {:>9} {:>12}", "prior", "theorem", "stderr", "replica var");
    for r in rows {
        println!("{:>6} {:>9.4} {:>9.4} {:>12.4}", r.prior, r.theorem_belief, r.theorem_stderr, r.replica_variance);
    }
    Ok(())
}
