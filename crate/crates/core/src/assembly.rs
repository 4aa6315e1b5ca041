//! Synthetic proof networks grown by assembly and tinkering.
//!
//! Nodes arrive one at a time. Each draws how many claims it will depend
//! on, then fills every dependency slot by picking an existing node
//! uniformly at random; with probability `copy_prob` the slot is redirected
//! to one of that node's own dependencies instead. Reuse through copying
//! gives heavily-used claims a usage rate proportional to how often they are
//! already used, producing a power-law out-degree tail, while the in-degree
//! keeps the shape of the dependency-count distribution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DagBuilder, NodeId, ProofDag};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssemblyParams {
    pub n_nodes: usize,
    /// Mean number of dependencies per node (every node after the first has
    /// at least one).
    pub mean_deps: f64,
    /// Probability that a dependency slot is redirected to a dependency of
    /// the node first picked.
    pub copy_prob: f64,
    pub seed: u64,
}

impl Default for AssemblyParams {
    fn default() -> Self {
        AssemblyParams { n_nodes: 10_000, mean_deps: 3.0, copy_prob: 0.8, seed: 0 }
    }
}

impl AssemblyParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(Error::Config("n_nodes must be at least 1".into()));
        }
        if !(self.mean_deps.is_finite() && self.mean_deps >= 0.0) {
            return Err(Error::Config(format!("mean_deps must be a non-negative number, got {}", self.mean_deps)));
        }
        if !(0.0..=1.0).contains(&self.copy_prob) {
            return Err(Error::Config(format!("copy_prob must lie in [0, 1], got {}", self.copy_prob)));
        }
        Ok(())
    }
}

/// Grows a network. Node `k` only depends on nodes `< k`, so the result is
/// acyclic; node 0 is the only axiom and the last node is the theorem.
///
/// The dependency count is `1 + G` with `G` geometric on `{0, 1, ...}` of
/// mean `mean_deps - 1` (so `mean_deps <= 1` yields a random tree), capped
/// at the number of existing nodes.
pub fn generate(params: &AssemblyParams) -> Result<ProofDag> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let extra = (params.mean_deps - 1.0).max(0.0);
    let count_dist = Geometric::new(1.0 / (1.0 + extra)).expect("success probability in (0, 1]");

    let n = params.n_nodes;
    let mut deps: Vec<Vec<u32>> = Vec::with_capacity(n);
    deps.push(Vec::new());
    let mut chosen: Vec<u32> = Vec::new();
    for k in 1..n {
        let want = (1 + count_dist.sample(&mut rng) as usize).min(k);
        chosen.clear();
        // a bounded number of attempts: with heavy copying some small
        // prefixes cannot supply `want` distinct targets
        let mut attempts = 0;
        while chosen.len() < want && attempts < 64 * want {
            attempts += 1;
            let mut target = rng.random_range(0..k as u32);
            let upstream = &deps[target as usize];
            if !upstream.is_empty() && rng.random_bool(params.copy_prob) {
                target = upstream[rng.random_range(0..upstream.len())];
            }
            if !chosen.contains(&target) {
                chosen.push(target);
            }
        }
        let mut list = chosen.clone();
        list.sort_unstable();
        deps.push(list);
    }

    let mut b = DagBuilder::new();
    for k in 0..n {
        b.named(&format!("v{k}"));
    }
    for (k, list) in deps.iter().enumerate() {
        for &d in list {
            b.add_edge(NodeId::new(d as usize), NodeId::new(k));
        }
    }
    b.set_theorem(NodeId::new(n - 1));
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::to_json;
    use crate::graph::{classify_roles, degrees};
    use proptest::prelude::*;

    #[test]
    fn single_node() {
        let dag = generate(&AssemblyParams { n_nodes: 1, ..Default::default() }).unwrap();
        assert_eq!(dag.node_count(), 1);
        assert_eq!(dag.edge_count(), 0);
        assert_eq!(dag.theorem(), Some(NodeId::new(0)));
    }

    #[test]
    fn same_seed_same_bytes() {
        let p = AssemblyParams { n_nodes: 2000, seed: 42, ..Default::default() };
        let a = to_json(&generate(&p).unwrap()).unwrap();
        let b = to_json(&generate(&p).unwrap()).unwrap();
        assert_eq!(a, b);
        let c = to_json(&generate(&AssemblyParams { seed: 43, ..p }).unwrap()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn roles_are_well_defined() {
        let dag = generate(&AssemblyParams { n_nodes: 500, seed: 3, ..Default::default() }).unwrap();
        let roles = classify_roles(&dag).unwrap();
        assert_eq!(roles.axioms, vec![NodeId::new(0)]);
        assert_eq!(roles.theorem, NodeId::new(499));
        assert!(!dag.dependencies(roles.theorem).is_empty());
    }

    #[test]
    fn mean_in_degree_tracks_parameter() {
        let dag = generate(&AssemblyParams { n_nodes: 20_000, mean_deps: 3.0, copy_prob: 0.8, seed: 9 }).unwrap();
        let t = degrees(&dag);
        let mean = t.in_degree[1..].iter().sum::<usize>() as f64 / (t.in_degree.len() - 1) as f64;
        assert!((mean - 3.0).abs() < 0.1, "mean in-degree {mean}");
    }

    #[test]
    fn tree_when_mean_at_most_one() {
        let dag = generate(&AssemblyParams { n_nodes: 300, mean_deps: 0.5, copy_prob: 0.3, seed: 1 }).unwrap();
        assert_eq!(dag.edge_count(), 299);
    }

    #[test]
    fn invalid_params() {
        for p in [
            AssemblyParams { n_nodes: 0, ..Default::default() },
            AssemblyParams { mean_deps: -1.0, ..Default::default() },
            AssemblyParams { copy_prob: 1.5, ..Default::default() },
        ] {
            assert!(matches!(generate(&p), Err(Error::Config(_))));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn always_acyclic(n in 1usize..300, mean in 0.0f64..6.0, copy in 0.0f64..=1.0, seed: u64) {
            let dag = generate(&AssemblyParams { n_nodes: n, mean_deps: mean, copy_prob: copy, seed }).unwrap();
            prop_assert_eq!(dag.topological_order().len(), n);
            for v in dag.nodes() {
                prop_assert!(dag.dependencies(v).iter().all(|d| d.index() < v.index()));
            }
        }
    }
}
