//! Parameter sweeps built on [`run_chain`](crate::belief::run_chain).
//!
//! Every grid point reuses the caller's schedule, seed included, so points
//! are evaluated independently (and in parallel) and any two experiments
//! that visit the same couplings report identical numbers.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::belief::{
    beta_from_epsilon, flip_penalty, run_chain, BeliefSummary, Chain, CouplingParams, PriorMode, Schedule,
};
use crate::communities::Partition;
use crate::error::{Error, Result};
use crate::graph::{NodeId, ProofDag};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub beta: f64,
    pub mean_belief: f64,
    pub theorem_belief: Option<f64>,
    pub axiom_belief: Option<f64>,
    pub theorem_stderr: f64,
    pub split_half_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    /// Rows in increasing error rate.
    pub rows: Vec<SweepRow>,
}

fn check_rates(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config(format!("{name} grid is empty")));
    }
    for &e in grid {
        if !(e > 0.0 && e <= 0.5) {
            return Err(Error::Domain(format!("{name} value {e} is outside (0, 0.5]")));
        }
    }
    Ok(())
}

fn strictly_monotone(grid: &[f64]) -> bool {
    grid.windows(2).all(|w| w[0] < w[1]) || grid.windows(2).all(|w| w[0] > w[1])
}

fn sweep_row(epsilon: f64, beta: f64, s: &BeliefSummary) -> SweepRow {
    SweepRow {
        epsilon,
        beta,
        mean_belief: s.mean_belief,
        theorem_belief: s.theorem_belief,
        axiom_belief: s.axiom_belief,
        theorem_stderr: s.diagnostics.theorem_stderr,
        split_half_max: s.diagnostics.split_half_max,
    }
}

/// Beliefs as a function of a shared error rate, `beta_dep = beta_imp`.
pub fn ept_sweep(
    dag: &ProofDag,
    eps_grid: &[f64],
    p_prior: f64,
    prior_mode: PriorMode,
    schedule: &Schedule,
) -> Result<SweepResult> {
    check_rates("error rate", eps_grid)?;
    let mut grid = eps_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    if grid.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Config("error-rate grid has repeated values".into()));
    }
    let rows = grid
        .par_iter()
        .map(|&eps| {
            let params = CouplingParams::from_error_rates(eps, eps, p_prior)?.with_mode(prior_mode);
            let summary = run_chain(dag, &params, schedule)?;
            Ok(sweep_row(eps, params.beta_dep, &summary))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PriorRow {
    pub prior: f64,
    pub theorem_belief: f64,
    pub theorem_stderr: f64,
    /// Variance of the theorem belief across replicas; large values near a
    /// prior of one half signal replicas frozen into opposite states.
    pub replica_variance: f64,
    pub mean_belief: f64,
}

/// Posterior theorem belief as a function of the prior at a fixed error
/// rate. Rows follow the order of `prior_grid`.
pub fn prior_response(
    dag: &ProofDag,
    eps: f64,
    prior_grid: &[f64],
    prior_mode: PriorMode,
    schedule: &Schedule,
) -> Result<Vec<PriorRow>> {
    check_rates("error rate", &[eps])?;
    if prior_grid.is_empty() {
        return Err(Error::Config("prior grid is empty".into()));
    }
    prior_grid
        .par_iter()
        .map(|&prior| {
            let params = CouplingParams::from_error_rates(eps, eps, prior)?.with_mode(prior_mode);
            let s = run_chain(dag, &params, schedule)?;
            let theorem_belief =
                s.theorem_belief.ok_or_else(|| Error::Config("the graph has no resolvable theorem".into()))?;
            let reps = &s.diagnostics.replica_theorem;
            let m = reps.iter().sum::<f64>() / reps.len() as f64;
            let replica_variance = if reps.len() > 1 {
                reps.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (reps.len() - 1) as f64
            } else {
                0.0
            };
            Ok(PriorRow {
                prior,
                theorem_belief,
                theorem_stderr: s.diagnostics.theorem_stderr,
                replica_variance,
                mean_belief: s.mean_belief,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridResult {
    pub eps_dep: Vec<f64>,
    pub eps_imp: Vec<f64>,
    /// `theorem[i][j]` is the theorem belief at `(eps_dep[i], eps_imp[j])`.
    pub theorem: Vec<Vec<f64>>,
    pub theorem_stderr: Vec<Vec<f64>>,
    pub mean: Vec<Vec<f64>>,
}

/// Beliefs over the product of deductive and abductive error rates.
pub fn abductive_grid(
    dag: &ProofDag,
    eps_dep_grid: &[f64],
    eps_imp_grid: &[f64],
    p_prior: f64,
    prior_mode: PriorMode,
    schedule: &Schedule,
) -> Result<GridResult> {
    check_rates("deductive error rate", eps_dep_grid)?;
    check_rates("abductive error rate", eps_imp_grid)?;
    if !strictly_monotone(eps_dep_grid) || !strictly_monotone(eps_imp_grid) {
        return Err(Error::Config("grid axes must be strictly monotone".into()));
    }
    let points: Vec<(usize, usize)> =
        (0..eps_dep_grid.len()).flat_map(|i| (0..eps_imp_grid.len()).map(move |j| (i, j))).collect();
    let cells = points
        .par_iter()
        .map(|&(i, j)| {
            let params =
                CouplingParams::from_error_rates(eps_dep_grid[i], eps_imp_grid[j], p_prior)?.with_mode(prior_mode);
            let s = run_chain(dag, &params, schedule)?;
            let t = s.theorem_belief.ok_or_else(|| Error::Config("the graph has no resolvable theorem".into()))?;
            Ok((t, s.diagnostics.theorem_stderr, s.mean_belief))
        })
        .collect::<Result<Vec<_>>>()?;
    let width = eps_imp_grid.len();
    let pick = |k: usize| -> Vec<Vec<f64>> {
        cells.chunks(width).map(|row| row.iter().map(|c| [c.0, c.1, c.2][k]).collect()).collect()
    };
    Ok(GridResult {
        eps_dep: eps_dep_grid.to_vec(),
        eps_imp: eps_imp_grid.to_vec(),
        theorem: pick(0),
        theorem_stderr: pick(1),
        mean: pick(2),
    })
}

/// Draws of `n_flip` nodes compared against each sampled state.
pub const BASELINE_DRAWS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulePenalty {
    pub module: usize,
    pub size: usize,
    /// Mean energy change of flipping `n_flip` nodes inside this module.
    pub mean_penalty: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FirewallReport {
    /// `(baseline_mean - within_mean) / n_flip`; positive when flips inside
    /// one module cost less than flips of randomly placed nodes.
    pub delta_l1: f64,
    /// Standard error of `delta_l1` from the per-state differences.
    pub delta_l1_stderr: f64,
    pub n_flip: usize,
    pub beta: f64,
    pub n_states: usize,
    /// Mean within-module penalty over states and eligible modules.
    pub within_mean: f64,
    pub baseline_mean: f64,
    /// Standard error of a single state's baseline mean, averaged over states.
    pub baseline_stderr: f64,
    pub modules: Vec<ModulePenalty>,
}

/// Firewall strength of a partition.
///
/// States are sampled from the symmetric chain at coupling `beta` with
/// prior one half. In every sampled state, each module with at least
/// `n_flip` members gets one flip of `n_flip` of its nodes, and
/// [`BASELINE_DRAWS`] flips of `n_flip` nodes drawn from all assigned nodes
/// serve as the baseline. `schedule.n_samples` states are taken from each
/// replica.
pub fn firewall_delta(
    dag: &ProofDag,
    partition: &Partition,
    beta: f64,
    n_flip: usize,
    schedule: &Schedule,
) -> Result<FirewallReport> {
    schedule.validate()?;
    if partition.assignment.len() != dag.node_count() {
        return Err(Error::Config("partition does not match the graph".into()));
    }
    if n_flip == 0 {
        return Err(Error::Config("n_flip must be at least 1".into()));
    }
    let members = partition.modules();
    let eligible: Vec<usize> = (0..members.len()).filter(|&m| members[m].len() >= n_flip).collect();
    if eligible.is_empty() {
        return Err(Error::Config(format!("no module has at least {n_flip} nodes")));
    }
    let pool = partition.assigned_nodes();
    let params = CouplingParams::symmetric(beta, 0.5);
    params.validate()?;

    struct StateStats {
        within: Vec<f64>,
        baseline_mean: f64,
        baseline_stderr: f64,
    }

    let per_replica: Vec<Vec<StateStats>> = (0..schedule.n_replicas as u64)
        .into_par_iter()
        .map(|replica| {
            let mut chain = Chain::new(dag, &params, schedule.seed, replica);
            let mut draws = ChaCha8Rng::seed_from_u64(schedule.seed ^ 0x6669_7265_7761_6c6c);
            draws.set_stream(replica);
            chain.sweeps(schedule.burn_in_sweeps);
            let mut out = Vec::with_capacity(schedule.n_samples);
            let mut picked: Vec<NodeId> = Vec::with_capacity(n_flip);
            for _ in 0..schedule.n_samples {
                chain.sweeps(schedule.sample_stride_sweeps);
                let state = chain.state();
                let within = eligible
                    .iter()
                    .map(|&m| {
                        picked.clear();
                        picked.extend(sample(&mut draws, members[m].len(), n_flip).iter().map(|k| members[m][k]));
                        flip_penalty(dag, state, beta, 0.0, &picked)
                    })
                    .collect();
                let base: Vec<f64> = (0..BASELINE_DRAWS)
                    .map(|_| {
                        picked.clear();
                        picked.extend(sample(&mut draws, pool.len(), n_flip).iter().map(|k| pool[k]));
                        flip_penalty(dag, state, beta, 0.0, &picked)
                    })
                    .collect();
                let (baseline_mean, baseline_stderr) = mean_and_stderr(&base);
                out.push(StateStats { within, baseline_mean, baseline_stderr });
            }
            out
        })
        .collect();

    let states: Vec<&StateStats> = per_replica.iter().flatten().collect();
    let diffs: Vec<f64> =
        states.iter().map(|s| s.baseline_mean - s.within.iter().sum::<f64>() / s.within.len() as f64).collect();
    let (mean_diff, diff_stderr) = mean_and_stderr(&diffs);
    let n_states = states.len() as f64;
    let modules = eligible
        .iter()
        .enumerate()
        .map(|(k, &m)| ModulePenalty {
            module: m,
            size: members[m].len(),
            mean_penalty: states.iter().map(|s| s.within[k]).sum::<f64>() / n_states,
        })
        .collect();
    let within_mean =
        states.iter().map(|s| s.within.iter().sum::<f64>() / s.within.len() as f64).sum::<f64>() / n_states;
    let baseline_mean = states.iter().map(|s| s.baseline_mean).sum::<f64>() / n_states;
    Ok(FirewallReport {
        delta_l1: mean_diff / n_flip as f64,
        delta_l1_stderr: diff_stderr / n_flip as f64,
        n_flip,
        beta,
        n_states: states.len(),
        within_mean,
        baseline_mean,
        baseline_stderr: states.iter().map(|s| s.baseline_stderr).sum::<f64>() / n_states,
        modules,
    })
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// The coupling at which `ept_sweep` reports f2, the theorem belief at a
/// one-step error rate of one percent.
pub fn f2_beta() -> f64 {
    beta_from_epsilon(0.01).expect("0.01 is a valid error rate")
}
