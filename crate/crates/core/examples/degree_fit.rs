//! Fit the out-degree tail of a generated network and print its
//! complementary CDF on a log scale.
//!
//!     cargo run --release --example degree_fit -- [seed]

use ept_lab::assembly::{generate, AssemblyParams};
use ept_lab::graph::degrees;
use ept_lab::netstats::{degree_histogram, fit_power_law};

fn main() -> ept_lab::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let dag = generate(&AssemblyParams { seed, ..AssemblyParams::default() })?;
    let out = degrees(&dag).out_degree;

    let fit = fit_power_law(&out)?;
    println!(
        "alpha = {:.3} +/- {:.3}, d_min = {}, tail = {} nodes, KS = {:.4}{}",
        fit.alpha,
        fit.alpha_stderr,
        fit.d_min,
        fit.n_tail,
        fit.ks_distance,
        if fit.is_low_confidence() { " (low confidence)" } else { "" }
    );

    for row in degree_histogram(&out).iter().filter(|r| r.degree > 0) {
        let bar = "#".repeat(((row.ccdf.log10() + 4.0).max(0.0) * 10.0) as usize);
        println!("{:>5} {:>6} {:.5} {bar}", row.degree, row.count, row.ccdf);
    }
    Ok(())
}
