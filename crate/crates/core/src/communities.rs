//! Module detection on the undirected projection of a proof network.
//!
//! [`girvan_newman`] repeatedly deletes the edge with the highest
//! shortest-path betweenness and keeps the component partition of highest
//! modularity seen along the way. It costs O(E^2 V); [`louvain`] is a
//! faster modularity heuristic for graphs where that is impractical.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;

use crate::graph::{NodeId, ProofDag};

/// Module membership per node (`None` = unassigned) and its modularity.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub assignment: Vec<Option<usize>>,
    pub modularity: f64,
}

impl Partition {
    pub fn from_assignment(dag: &ProofDag, assignment: Vec<Option<usize>>) -> Self {
        let modularity = modularity(dag, &assignment);
        Partition { assignment, modularity }
    }

    pub fn module_count(&self) -> usize {
        self.assignment.iter().flatten().max().map_or(0, |&m| m + 1)
    }

    /// Members of each module, in node order.
    pub fn modules(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.module_count()];
        for (i, m) in self.assignment.iter().enumerate() {
            if let Some(m) = m {
                out[*m].push(NodeId::new(i));
            }
        }
        out
    }

    pub fn assigned_nodes(&self) -> Vec<NodeId> {
        self.assignment.iter().enumerate().filter(|(_, m)| m.is_some()).map(|(i, _)| NodeId::new(i)).collect()
    }
}

/// Newman modularity of the undirected projection. Unassigned nodes count
/// as singleton modules.
pub fn modularity(dag: &ProofDag, assignment: &[Option<usize>]) -> f64 {
    let m = dag.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let mut internal: HashMap<ModuleKey, f64> = HashMap::new();
    let mut degree_sum: HashMap<ModuleKey, f64> = HashMap::new();
    let key = |i: usize| match assignment[i] {
        Some(c) => ModuleKey::Module(c),
        None => ModuleKey::Single(i),
    };
    for n in dag.nodes() {
        let d = (dag.dependencies(n).len() + dag.dependents(n).len()) as f64;
        *degree_sum.entry(key(n.index())).or_default() += d;
    }
    for (a, b) in dag.edges() {
        let (ka, kb) = (key(a.index()), key(b.index()));
        if ka == kb {
            *internal.entry(ka).or_default() += 1.0;
        }
    }
    // sum in a fixed order so equal inputs give equal bits
    let mut keys: Vec<_> = degree_sum.keys().copied().collect();
    keys.sort_unstable();
    keys.iter()
        .map(|k| {
            let l = internal.get(k).copied().unwrap_or(0.0);
            let d = degree_sum[k];
            l / m - (d / (2.0 * m)).powi(2)
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum ModuleKey {
    Module(usize),
    Single(usize),
}

/// Undirected simple graph with indexed edges, used by betweenness and
/// Girvan-Newman.
struct Projection {
    /// `(neighbour, edge index)`
    adj: Vec<Vec<(u32, u32)>>,
    /// endpoints as `(dependency, dependent)`
    ends: Vec<(u32, u32)>,
}

impl Projection {
    fn new(dag: &ProofDag) -> Self {
        let mut adj = vec![Vec::new(); dag.node_count()];
        let mut ends = Vec::with_capacity(dag.edge_count());
        for (e, (d, u)) in dag.edges().enumerate() {
            let (d, u, e) = (d.index() as u32, u.index() as u32, e as u32);
            adj[d as usize].push((u, e));
            adj[u as usize].push((d, e));
            ends.push((d, u));
        }
        Projection { adj, ends }
    }
}

const SOURCE_CHUNK: usize = 32;

/// Edge betweenness from the given sources, halved so that each unordered
/// pair of endpoints contributes once. Chunked so the summation order does
/// not depend on the thread count.
fn betweenness_from(proj: &Projection, alive: &[bool], sources: &[u32]) -> Vec<f64> {
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; proj.ends.len()];
            let mut scratch = BrandesScratch::new(proj.adj.len());
            for &s in chunk {
                scratch.accumulate(proj, alive, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; proj.ends.len()];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    for t in &mut total {
        *t *= 0.5;
    }
    total
}

struct BrandesScratch {
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    order: Vec<u32>,
    queue: VecDeque<u32>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    fn accumulate(&mut self, proj: &Projection, alive: &[bool], s: u32, acc: &mut [f64]) {
        for &v in &self.order {
            self.sigma[v as usize] = 0.0;
            self.dist[v as usize] = -1;
            self.delta[v as usize] = 0.0;
        }
        self.order.clear();
        self.sigma[s as usize] = 1.0;
        self.dist[s as usize] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let dv = self.dist[v as usize];
            for &(w, e) in &proj.adj[v as usize] {
                if !alive[e as usize] {
                    continue;
                }
                if self.dist[w as usize] < 0 {
                    self.dist[w as usize] = dv + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w as usize] == dv + 1 {
                    self.sigma[w as usize] += self.sigma[v as usize];
                }
            }
        }
        for &w in self.order.iter().rev() {
            let dw = self.dist[w as usize];
            for &(v, e) in &proj.adj[w as usize] {
                if !alive[e as usize] || self.dist[v as usize] != dw - 1 {
                    continue;
                }
                let c = self.sigma[v as usize] / self.sigma[w as usize] * (1.0 + self.delta[w as usize]);
                acc[e as usize] += c;
                self.delta[v as usize] += c;
            }
        }
    }
}

/// Shortest-path betweenness of every edge in the undirected projection,
/// keyed by `(dependency, dependent)`. Each unordered pair of nodes spreads
/// one unit across its shortest paths.
pub fn edge_betweenness(dag: &ProofDag) -> BTreeMap<(NodeId, NodeId), f64> {
    let proj = Projection::new(dag);
    let alive = vec![true; proj.ends.len()];
    let sources: Vec<u32> = (0..dag.node_count() as u32).collect();
    let eb = betweenness_from(&proj, &alive, &sources);
    proj.ends.iter().zip(eb).map(|(&(d, u), v)| ((NodeId::new(d as usize), NodeId::new(u as usize)), v)).collect()
}

/// Connected-component labels over alive edges, numbered by first node.
fn components(proj: &Projection, alive: &[bool]) -> (Vec<usize>, usize) {
    let n = proj.adj.len();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &(w, e) in &proj.adj[v] {
                if alive[e as usize] && label[w as usize] == usize::MAX {
                    label[w as usize] = count;
                    stack.push(w as usize);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

fn reachable(proj: &Projection, alive: &[bool], start: u32) -> Vec<u32> {
    let mut seen = vec![false; proj.adj.len()];
    seen[start as usize] = true;
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        let v = out[i];
        i += 1;
        for &(w, e) in &proj.adj[v as usize] {
            if alive[e as usize] && !seen[w as usize] {
                seen[w as usize] = true;
                out.push(w);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Renumbers modules by decreasing size, ties by smallest member.
fn canonical_assignment(labels: &[usize]) -> Vec<Option<usize>> {
    let mut groups: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        let g = groups.entry(l).or_insert((0, i));
        g.0 += 1;
    }
    let mut order: Vec<(usize, usize, usize)> = groups.into_iter().map(|(l, (size, first))| (l, size, first)).collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    let rank: HashMap<usize, usize> = order.iter().enumerate().map(|(r, g)| (g.0, r)).collect();
    labels.iter().map(|l| Some(rank[l])).collect()
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Girvan-Newman with the modularity-maximum stopping rule.
///
/// After every removal the betweenness of the affected component(s) is
/// recomputed. Ties go to the lexicographically smallest
/// `(dependency id, dependent id)`.
pub fn girvan_newman(dag: &ProofDag) -> Partition {
    let proj = Projection::new(dag);
    let n_edges = proj.ends.len();
    let mut alive = vec![true; n_edges];
    let all: Vec<u32> = (0..dag.node_count() as u32).collect();
    let mut eb = betweenness_from(&proj, &alive, &all);

    let (labels, mut n_comp) = components(&proj, &alive);
    let mut best = Partition::from_assignment(dag, canonical_assignment(&labels));

    let edge_key = |e: usize| {
        let (d, u) = proj.ends[e];
        (dag.id(NodeId::new(d as usize)), dag.id(NodeId::new(u as usize)))
    };

    for _ in 0..n_edges {
        let mut pick: Option<usize> = None;
        for e in (0..n_edges).filter(|&e| alive[e]) {
            pick = match pick {
                None => Some(e),
                Some(p) if nearly_equal(eb[e], eb[p]) => {
                    if edge_key(e) < edge_key(p) {
                        Some(e)
                    } else {
                        Some(p)
                    }
                }
                Some(p) if eb[e] > eb[p] => Some(e),
                keep => keep,
            };
        }
        let Some(e) = pick else { break };
        alive[e] = false;
        let (a, b) = proj.ends[e];

        let side_a = reachable(&proj, &alive, a);
        let split = side_a.binary_search(&b).is_err();
        let mut affected = side_a;
        if split {
            affected.extend(reachable(&proj, &alive, b));
            affected.sort_unstable();
        }
        for &v in &affected {
            for &(_, f) in &proj.adj[v as usize] {
                eb[f as usize] = 0.0;
            }
        }
        let local = betweenness_from(&proj, &alive, &affected);
        for &v in &affected {
            for &(_, f) in &proj.adj[v as usize] {
                if alive[f as usize] {
                    eb[f as usize] = local[f as usize];
                }
            }
        }

        if split {
            let (labels, count) = components(&proj, &alive);
            n_comp = count;
            let candidate = Partition::from_assignment(dag, canonical_assignment(&labels));
            if candidate.modularity > best.modularity + 1e-12 {
                best = candidate;
            }
        }
    }
    debug_assert!(n_comp <= dag.node_count());
    best
}

/// Keeps the largest modules until at least `coverage` of all nodes are
/// assigned; the rest become unassigned. Kept modules are renumbered by
/// decreasing size.
pub fn top_clusters(dag: &ProofDag, partition: &Partition, coverage: f64) -> Partition {
    let modules = partition.modules();
    let mut order: Vec<usize> = (0..modules.len()).filter(|&m| !modules[m].is_empty()).collect();
    order.sort_by(|&a, &b| modules[b].len().cmp(&modules[a].len()).then(modules[a][0].cmp(&modules[b][0])));
    let n = partition.assignment.len() as f64;
    let mut rename = HashMap::new();
    let mut covered = 0usize;
    for m in order {
        if covered as f64 >= coverage * n - 1e-9 {
            break;
        }
        rename.insert(m, rename.len());
        covered += modules[m].len();
    }
    let assignment = partition.assignment.iter().map(|m| m.and_then(|m| rename.get(&m).copied())).collect();
    Partition::from_assignment(dag, assignment)
}

/// Louvain modularity optimisation with a fixed node visiting order, so
/// results are deterministic. Used for graphs too large for Girvan-Newman.
pub fn louvain(dag: &ProofDag) -> Partition {
    let n = dag.node_count();
    let mut graph = WeightedGraph::from_dag(dag);
    // community of every original node
    let mut membership: Vec<usize> = (0..n).collect();
    loop {
        let (community, improved) = graph.local_moves();
        if !improved {
            break;
        }
        let (aggregated, relabel) = graph.aggregate(&community);
        for m in &mut membership {
            *m = relabel[community[*m]];
        }
        graph = aggregated;
    }
    Partition::from_assignment(dag, canonical_assignment(&membership))
}

struct WeightedGraph {
    /// neighbour lists without self loops, sorted by neighbour
    adj: Vec<Vec<(usize, f64)>>,
    /// weight of edges folded into the node, counted from both ends
    self_weight: Vec<f64>,
}

impl WeightedGraph {
    fn from_dag(dag: &ProofDag) -> Self {
        let mut adj = vec![Vec::new(); dag.node_count()];
        for (d, u) in dag.edges() {
            adj[d.index()].push((u.index(), 1.0));
            adj[u.index()].push((d.index(), 1.0));
        }
        for list in &mut adj {
            list.sort_by_key(|x| x.0);
        }
        WeightedGraph { self_weight: vec![0.0; adj.len()], adj }
    }

    fn strength(&self, v: usize) -> f64 {
        self.self_weight[v] + self.adj[v].iter().map(|x| x.1).sum::<f64>()
    }

    fn local_moves(&self) -> (Vec<usize>, bool) {
        let n = self.adj.len();
        let k: Vec<f64> = (0..n).map(|v| self.strength(v)).collect();
        let two_m: f64 = k.iter().sum();
        let mut community: Vec<usize> = (0..n).collect();
        if two_m == 0.0 {
            return (community, false);
        }
        let mut total = k.clone();
        let mut improved = false;
        let mut links: BTreeMap<usize, f64> = BTreeMap::new();
        loop {
            let mut moved = false;
            for v in 0..n {
                let own = community[v];
                links.clear();
                for &(w, wt) in &self.adj[v] {
                    *links.entry(community[w]).or_default() += wt;
                }
                total[own] -= k[v];
                let gain = |c: usize, l: f64| l - total[c] * k[v] / two_m;
                let mut best = (own, gain(own, links.get(&own).copied().unwrap_or(0.0)));
                for (&c, &l) in &links {
                    let g = gain(c, l);
                    if g > best.1 + 1e-12 {
                        best = (c, g);
                    }
                }
                total[best.0] += k[v];
                if best.0 != own {
                    community[v] = best.0;
                    moved = true;
                    improved = true;
                }
            }
            if !moved {
                break;
            }
        }
        (community, improved)
    }

    fn aggregate(&self, community: &[usize]) -> (WeightedGraph, Vec<usize>) {
        let mut relabel = vec![usize::MAX; community.len()];
        let mut next = 0;
        for &c in community {
            if relabel[c] == usize::MAX {
                relabel[c] = next;
                next += 1;
            }
        }
        let mut self_weight = vec![0.0; next];
        let mut maps: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); next];
        for v in 0..self.adj.len() {
            let cv = relabel[community[v]];
            self_weight[cv] += self.self_weight[v];
            for &(w, wt) in &self.adj[v] {
                let cw = relabel[community[w]];
                if cv == cw {
                    self_weight[cv] += wt;
                } else {
                    *maps[cv].entry(cw).or_default() += wt;
                }
            }
        }
        let adj = maps.into_iter().map(|m| m.into_iter().collect()).collect();
        (WeightedGraph { adj, self_weight }, relabel)
    }
}
