//! Compare flip penalties inside modules with randomly placed flips.
//!
//!     cargo run --release --example firewall

use ept_lab::ast::{alpha_number, parse_sexpr, reify_dag};
use ept_lab::belief::Schedule;
use ept_lab::communities::girvan_newman;
use ept_lab::experiments::{f2_beta, firewall_delta};

fn main() -> ept_lab::Result<()> {
    let dag = reify_dag(&alpha_number(&parse_sexpr(include_str!("../data/ev4.sexp"))?))?;
    let partition = girvan_newman(&dag);
    let schedule = Schedule { n_samples: 400, ..Schedule::default() };

    for beta in [0.5, 1.0, f2_beta()] {
        let r = firewall_delta(&dag, &partition, beta, 3, &schedule)?;
        println!(
            "beta {beta:.3}: dL1 = {:+.3} +/- {:.3} per node (within {:.2}, random {:.2}, {} states)",
            r.delta_l1, r.delta_l1_stderr, r.within_mean, r.baseline_mean, r.n_states
        );
        for m in &r.modules {
            println!("    module {} ({} nodes): {:.2}", m.module, m.size, m.mean_penalty);
        }
    }
    Ok(())
}
