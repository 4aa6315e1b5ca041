//! Run the belief chain once on a generated network and look at where
//! belief ends up.
//!
//!     cargo run --release --example belief_chain -- [eps]

use ept_lab::assembly::{generate, AssemblyParams};
use ept_lab::belief::{run_chain, CouplingParams, Schedule};
use ept_lab::graph::classify_roles;

fn main() -> ept_lab::Result<()> {
    let eps: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let dag = generate(&AssemblyParams { n_nodes: 2000, ..AssemblyParams::default() })?;
    let params = CouplingParams::from_error_rates(eps, eps, 0.75)?;
    println!("eps = {eps}: beta_dep = {:.3}, prior field = {:.3}", params.beta_dep, params.prior_field());

    let s = run_chain(&dag, &params, &Schedule::default())?;
    println!("mean belief    {:.4} +/- {:.4}", s.mean_belief, s.diagnostics.mean_stderr);
    println!("theorem belief {:.4} +/- {:.4}", s.theorem_belief.unwrap_or(f64::NAN), s.diagnostics.theorem_stderr);
    println!("axiom belief   {:.4}", s.axiom_belief.unwrap_or(f64::NAN));
    println!("split-half drift (max) {:.4}", s.diagnostics.split_half_max);

    let roles = classify_roles(&dag)?;
    let mut weakest: Vec<_> = dag.nodes().collect();
    weakest.sort_by(|a, b| s.beliefs[a.index()].total_cmp(&s.beliefs[b.index()]));
    println!("\nleast believed:");
    for n in weakest.into_iter().take(5) {
        let role = if roles.axioms.binary_search(&n).is_ok() { "axiom" } else { "" };
        println!("  {:<6} {:.3} {role}", dag.id(n), s.beliefs[n.index()]);
    }
    Ok(())
}
