//! Asymmetric Ising dynamics for degrees of belief.
//!
//! Each claim carries a spin, `+1` for believed-true and `-1` for
//! believed-false. A claim feels its dependencies with strength `beta_dep`
//! and its dependents with strength `beta_imp`; the local field is
//!
//! ```text
//! f(i) = h + beta_dep * sum_{j in deps(i)} s_j + beta_imp * sum_{k in dependents(i)} s_k
//! ```
//!
//! and a Metropolis update flips `s_i` with probability `min(1, exp(-2 s_i f(i)))`.
//! When the two strengths are equal this samples the Gibbs distribution of
//! `E = -beta * sum_edges s_i s_j - h * sum_i s_i`; otherwise there is no
//! global energy and the update is simply a heuristic.
//!
//! A coupling `beta` corresponds to a per-link error rate
//! `eps = 1 / (1 + exp(2 beta))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{classify_roles, NodeId, ProofDag};

/// Error rate implied by a coupling.
pub fn epsilon_from_beta(beta: f64) -> Result<f64> {
    if !(beta >= 0.0) || beta.is_infinite() {
        return Err(Error::Domain(format!("coupling must be finite and non-negative, got {beta}")));
    }
    Ok(1.0 / (1.0 + (2.0 * beta).exp()))
}

/// Coupling implied by an error rate in `(0, 1/2]`.
pub fn beta_from_epsilon(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Domain(format!("error rate must lie in (0, 0.5], got {eps}")));
    }
    Ok(0.5 * ((-eps).ln_1p() - eps.ln()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorMode {
    /// The prior acts as a persistent field on every node and also biases
    /// the initial state.
    #[default]
    Field,
    /// The prior only biases the initial state.
    InitOnly,
}

impl std::str::FromStr for PriorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "field" => Ok(PriorMode::Field),
            "init-only" | "init" => Ok(PriorMode::InitOnly),
            other => Err(Error::Config(format!("unknown prior mode `{other}` (expected field or init-only)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub beta_dep: f64,
    pub beta_imp: f64,
    pub p_prior: f64,
    pub prior_mode: PriorMode,
}

impl CouplingParams {
    pub fn symmetric(beta: f64, p_prior: f64) -> Self {
        CouplingParams { beta_dep: beta, beta_imp: beta, p_prior, prior_mode: PriorMode::Field }
    }

    pub fn from_error_rates(eps_dep: f64, eps_imp: f64, p_prior: f64) -> Result<Self> {
        let params = CouplingParams {
            beta_dep: beta_from_epsilon(eps_dep)?,
            beta_imp: beta_from_epsilon(eps_imp)?,
            p_prior,
            prior_mode: PriorMode::Field,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_mode(self, prior_mode: PriorMode) -> Self {
        CouplingParams { prior_mode, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, b) in [("beta_dep", self.beta_dep), ("beta_imp", self.beta_imp)] {
            if !(b >= 0.0) || b.is_infinite() {
                return Err(Error::Domain(format!("{name} must be finite and non-negative, got {b}")));
            }
        }
        if !(self.p_prior > 0.0 && self.p_prior < 1.0) {
            return Err(Error::Domain(format!("prior must lie strictly between 0 and 1, got {}", self.p_prior)));
        }
        Ok(())
    }

    /// Per-node field `h`: half the prior log-odds in field mode, else 0.
    pub fn prior_field(&self) -> f64 {
        match self.prior_mode {
            PriorMode::Field => 0.5 * (self.p_prior / (1.0 - self.p_prior)).ln(),
            PriorMode::InitOnly => 0.0,
        }
    }

    pub fn epsilon_dep(&self) -> f64 {
        1.0 / (1.0 + (2.0 * self.beta_dep).exp())
    }

    pub fn epsilon_imp(&self) -> f64 {
        1.0 / (1.0 + (2.0 * self.beta_imp).exp())
    }
}

/// One spin per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeliefState {
    spins: Vec<i8>,
}

impl BeliefState {
    pub fn uniform(n: usize, believed: bool) -> Self {
        BeliefState { spins: vec![if believed { 1 } else { -1 }; n] }
    }

    /// Each node independently true with probability `p_true`.
    pub fn random<R: Rng + ?Sized>(n: usize, p_true: f64, rng: &mut R) -> Self {
        BeliefState { spins: (0..n).map(|_| if rng.random_bool(p_true) { 1 } else { -1 }).collect() }
    }

    pub fn from_spins(spins: Vec<i8>) -> Result<Self> {
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Domain(format!("spins must be +1 or -1, got {bad}")));
        }
        Ok(BeliefState { spins })
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spin(&self, node: NodeId) -> i8 {
        self.spins[node.index()]
    }

    pub fn is_true(&self, node: NodeId) -> bool {
        self.spins[node.index()] > 0
    }

    pub fn set(&mut self, node: NodeId, believed: bool) {
        self.spins[node.index()] = if believed { 1 } else { -1 };
    }

    pub fn flip(&mut self, node: NodeId) {
        self.spins[node.index()] = -self.spins[node.index()];
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }
}

pub fn local_field(dag: &ProofDag, state: &BeliefState, params: &CouplingParams, node: NodeId) -> f64 {
    let deps: i64 = dag.dependencies(node).iter().map(|&j| state.spin(j) as i64).sum();
    let imps: i64 = dag.dependents(node).iter().map(|&k| state.spin(k) as i64).sum();
    params.prior_field() + params.beta_dep * deps as f64 + params.beta_imp * imps as f64
}

/// Metropolis decision for a spin `s` in field `f`. Draws a uniform only
/// when the move is uphill.
#[inline]
fn accept<R: Rng + ?Sized>(s: i8, f: f64, rng: &mut R) -> bool {
    let delta = 2.0 * s as f64 * f;
    delta <= 0.0 || rng.random::<f64>() < (-delta).exp()
}

/// A single update at a uniformly chosen node. Returns the node visited.
pub fn heuristic_step<R: Rng + ?Sized>(
    dag: &ProofDag,
    state: &mut BeliefState,
    params: &CouplingParams,
    rng: &mut R,
) -> Option<NodeId> {
    if dag.is_empty() {
        return None;
    }
    let node = NodeId::new(rng.random_range(0..dag.node_count() as u32) as usize);
    let f = local_field(dag, state, params, node);
    if accept(state.spin(node), f, rng) {
        state.flip(node);
    }
    Some(node)
}

/// Flat adjacency used by the chain's inner loop. The neighbours of node
/// `i` are `neighbours[offsets[i]..offsets[i + 1]]`, dependencies first,
/// dependents from `split[i]` on.
struct Couplings {
    offsets: Vec<u32>,
    split: Vec<u32>,
    neighbours: Vec<u32>,
    beta_dep: f64,
    beta_imp: f64,
    field: f64,
}

impl Couplings {
    fn new(dag: &ProofDag, params: &CouplingParams) -> Self {
        let mut offsets = Vec::with_capacity(dag.node_count() + 1);
        let mut split = Vec::with_capacity(dag.node_count());
        let mut neighbours = Vec::with_capacity(2 * dag.edge_count());
        offsets.push(0);
        for n in dag.nodes() {
            neighbours.extend(dag.dependencies(n).iter().map(|j| j.index() as u32));
            split.push(neighbours.len() as u32);
            neighbours.extend(dag.dependents(n).iter().map(|k| k.index() as u32));
            offsets.push(neighbours.len() as u32);
        }
        Couplings {
            offsets,
            split,
            neighbours,
            beta_dep: params.beta_dep,
            beta_imp: params.beta_imp,
            field: params.prior_field(),
        }
    }

    fn len(&self) -> usize {
        self.split.len()
    }

    #[inline]
    fn field_at(&self, spins: &[i8], i: usize) -> f64 {
        let sum = |range: std::ops::Range<u32>| -> i32 {
            self.neighbours[range.start as usize..range.end as usize].iter().map(|&j| spins[j as usize] as i32).sum()
        };
        let deps = sum(self.offsets[i]..self.split[i]);
        let imps = sum(self.split[i]..self.offsets[i + 1]);
        self.field + self.beta_dep * deps as f64 + self.beta_imp * imps as f64
    }

    /// `n` random-site updates; same semantics and random stream as
    /// repeated [`heuristic_step`] calls.
    fn sweep(&self, spins: &mut [i8], rng: &mut ChaCha8Rng) {
        let n = self.len() as u32;
        for _ in 0..n {
            let i = rng.random_range(0..n) as usize;
            let f = self.field_at(spins, i);
            if accept(spins[i], f, rng) {
                spins[i] = -spins[i];
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub burn_in_sweeps: usize,
    pub n_samples: usize,
    pub sample_stride_sweeps: usize,
    pub n_replicas: usize,
    pub seed: u64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { burn_in_sweeps: 200, n_samples: 1000, sample_stride_sweeps: 2, n_replicas: 8, seed: 0 }
    }
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("burn_in_sweeps", self.burn_in_sweeps),
            ("n_samples", self.n_samples),
            ("sample_stride_sweeps", self.sample_stride_sweeps),
            ("n_replicas", self.n_replicas),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

/// Convergence diagnostics for one chain run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainDiagnostics {
    /// Largest per-node gap between first-half and second-half beliefs.
    pub split_half_max: f64,
    /// Mean per-node gap between the two halves.
    pub split_half_mean: f64,
    /// Theorem belief of each replica.
    pub replica_theorem: Vec<f64>,
    /// All-node mean belief of each replica.
    pub replica_mean: Vec<f64>,
    /// Standard error of the theorem belief across replicas.
    pub theorem_stderr: f64,
    /// Standard error of the all-node mean across replicas.
    pub mean_stderr: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BeliefSummary {
    /// Time-averaged fraction of samples in which each node was believed.
    pub beliefs: Vec<f64>,
    pub mean_belief: f64,
    pub theorem: Option<NodeId>,
    pub theorem_belief: Option<f64>,
    pub axiom_belief: Option<f64>,
    pub diagnostics: ChainDiagnostics,
}

struct ReplicaCounts {
    first: Vec<u32>,
    second: Vec<u32>,
}

/// A single Metropolis chain: replica `replica` of `seed`, started from an
/// independent draw at the prior.
pub struct Chain {
    couplings: Couplings,
    state: BeliefState,
    rng: ChaCha8Rng,
}

impl Chain {
    pub fn new(dag: &ProofDag, params: &CouplingParams, seed: u64, replica: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replica);
        let state = BeliefState::random(dag.node_count(), params.p_prior, &mut rng);
        Chain { couplings: Couplings::new(dag, params), state, rng }
    }

    /// Runs `count` sweeps of `N` updates each.
    pub fn sweeps(&mut self, count: usize) {
        for _ in 0..count {
            self.couplings.sweep(&mut self.state.spins, &mut self.rng);
        }
    }

    pub fn state(&self) -> &BeliefState {
        &self.state
    }
}

fn run_replica(dag: &ProofDag, params: &CouplingParams, schedule: &Schedule, replica: u64) -> ReplicaCounts {
    let mut chain = Chain::new(dag, params, schedule.seed, replica);
    chain.sweeps(schedule.burn_in_sweeps);
    let n = dag.node_count();
    let mut counts = ReplicaCounts { first: vec![0; n], second: vec![0; n] };
    let half = schedule.n_samples / 2;
    for k in 0..schedule.n_samples {
        chain.sweeps(schedule.sample_stride_sweeps);
        let bucket = if k < half { &mut counts.first } else { &mut counts.second };
        for (c, &s) in bucket.iter_mut().zip(chain.state.spins()) {
            *c += (s > 0) as u32;
        }
    }
    counts
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

/// Estimates equilibrium beliefs by averaging sampled spins over time and
/// over independent replicas. Replica `r` draws from the ChaCha8 stream `r`
/// of `schedule.seed`, so results do not depend on the thread count.
pub fn run_chain(dag: &ProofDag, params: &CouplingParams, schedule: &Schedule) -> Result<BeliefSummary> {
    params.validate()?;
    schedule.validate()?;
    if dag.is_empty() {
        return Err(Error::Config("cannot simulate an empty graph".into()));
    }
    let replicas: Vec<ReplicaCounts> =
        (0..schedule.n_replicas as u64).into_par_iter().map(|r| run_replica(dag, params, schedule, r)).collect();

    let n = dag.node_count();
    let half = schedule.n_samples / 2;
    let rest = schedule.n_samples - half;
    let total = (schedule.n_samples * schedule.n_replicas) as f64;
    let mut first = vec![0u64; n];
    let mut second = vec![0u64; n];
    for rc in &replicas {
        for i in 0..n {
            first[i] += rc.first[i] as u64;
            second[i] += rc.second[i] as u64;
        }
    }
    let beliefs: Vec<f64> = (0..n).map(|i| (first[i] + second[i]) as f64 / total).collect();

    let (mut split_max, mut split_sum) = (0.0f64, 0.0);
    if half > 0 {
        for i in 0..n {
            let a = first[i] as f64 / (half * schedule.n_replicas) as f64;
            let b = second[i] as f64 / (rest * schedule.n_replicas) as f64;
            split_max = split_max.max((a - b).abs());
            split_sum += (a - b).abs();
        }
    }

    let roles = classify_roles(dag).ok();
    let theorem = roles.as_ref().map(|r| r.theorem);
    let per_replica = |rc: &ReplicaCounts, i: usize| (rc.first[i] + rc.second[i]) as f64 / schedule.n_samples as f64;
    let replica_theorem: Vec<f64> = match theorem {
        Some(t) => replicas.iter().map(|rc| per_replica(rc, t.index())).collect(),
        None => Vec::new(),
    };
    let replica_mean: Vec<f64> =
        replicas.iter().map(|rc| (0..n).map(|i| per_replica(rc, i)).sum::<f64>() / n as f64).collect();
    let theorem_stderr = if replica_theorem.is_empty() { 0.0 } else { mean_and_stderr(&replica_theorem).1 };
    let mean_stderr = mean_and_stderr(&replica_mean).1;

    let axiom_belief = roles.as_ref().and_then(|r| {
        (!r.axioms.is_empty()).then(|| r.axioms.iter().map(|a| beliefs[a.index()]).sum::<f64>() / r.axioms.len() as f64)
    });

    Ok(BeliefSummary {
        mean_belief: beliefs.iter().sum::<f64>() / n as f64,
        theorem,
        theorem_belief: theorem.map(|t| beliefs[t.index()]),
        axiom_belief,
        beliefs,
        diagnostics: ChainDiagnostics {
            split_half_max: split_max,
            split_half_mean: if half > 0 { split_sum / n as f64 } else { 0.0 },
            replica_theorem,
            replica_mean,
            theorem_stderr,
            mean_stderr,
        },
    })
}

/// `E = -beta * sum_edges s_i s_j - field * sum_i s_i`.
pub fn energy(dag: &ProofDag, state: &BeliefState, beta: f64, field: f64) -> f64 {
    let bonds: i64 = dag.edges().map(|(a, b)| state.spin(a) as i64 * state.spin(b) as i64).sum();
    let magnet: i64 = state.spins().iter().map(|&s| s as i64).sum();
    -beta * bonds as f64 - field * magnet as f64
}

/// Energy change from negating every spin in `nodes` at once, from the
/// edges crossing the boundary of the set. Repeated nodes count once.
pub fn flip_penalty(dag: &ProofDag, state: &BeliefState, beta: f64, field: f64, nodes: &[NodeId]) -> f64 {
    let mut inside = vec![false; dag.node_count()];
    let mut members = Vec::with_capacity(nodes.len());
    for &v in nodes {
        if !inside[v.index()] {
            inside[v.index()] = true;
            members.push(v);
        }
    }
    let mut bonds = 0i64;
    let mut magnet = 0i64;
    for &v in &members {
        let s = state.spin(v) as i64;
        magnet += s;
        for &w in dag.dependencies(v).iter().chain(dag.dependents(v)) {
            if !inside[w.index()] {
                bonds += s * state.spin(w) as i64;
            }
        }
    }
    2.0 * beta * bonds as f64 + 2.0 * field * magnet as f64
}
