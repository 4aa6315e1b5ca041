//! The canonical proof network: a DAG whose edges run from a dependency to
//! the claim that uses it.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

/// Dense index of a node inside one [`ProofDag`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub(crate) fn new(index: usize) -> Self {
        NodeId(u32::try_from(index).expect("node index exceeds u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Directed acyclic graph of claims.
///
/// Nodes carry a unique string id and a (not necessarily unique) label.
/// Adjacency lists are sorted by node index, and edges form a set: no
/// self-loops, no duplicates. Every constructor checks acyclicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofDag {
    ids: Vec<String>,
    labels: Vec<String>,
    dependencies: Vec<Vec<NodeId>>,
    dependents: Vec<Vec<NodeId>>,
    theorem: Option<NodeId>,
    lookup: HashMap<String, NodeId>,
}

impl ProofDag {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.dependencies.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.ids.len()).map(NodeId::new)
    }

    pub fn id(&self, node: NodeId) -> &str {
        &self.ids[node.index()]
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node.index()]
    }

    pub fn find(&self, id: &str) -> Option<NodeId> {
        self.lookup.get(id).copied()
    }

    /// Claims this node relies on (its in-neighbours).
    pub fn dependencies(&self, node: NodeId) -> &[NodeId] {
        &self.dependencies[node.index()]
    }

    /// Claims that rely on this node (its out-neighbours).
    pub fn dependents(&self, node: NodeId) -> &[NodeId] {
        &self.dependents[node.index()]
    }

    pub fn theorem(&self) -> Option<NodeId> {
        self.theorem
    }

    /// Edges as `(dependency, dependent)`, grouped by dependent.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.dependencies.iter().enumerate().flat_map(|(i, deps)| deps.iter().map(move |&d| (d, NodeId::new(i))))
    }

    pub fn sinks(&self) -> Vec<NodeId> {
        self.nodes().filter(|&n| self.dependents(n).is_empty()).collect()
    }

    pub fn with_theorem(mut self, theorem: Option<NodeId>) -> Result<Self> {
        if let Some(t) = theorem {
            if t.index() >= self.node_count() {
                return Err(Error::UnknownNode(format!("#{}", t.index())));
            }
        }
        self.theorem = theorem;
        Ok(self)
    }

    /// Kahn order, lowest index first among ready nodes.
    pub fn topological_order(&self) -> Vec<NodeId> {
        topological_order(&self.dependencies, &self.dependents).expect("ProofDag is acyclic by construction")
    }

    /// Subgraph induced by `keep`, preserving relative node order and the
    /// theorem designation when the theorem survives.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> ProofDag {
        let mut mask = vec![false; self.node_count()];
        for n in keep {
            mask[n.index()] = true;
        }
        let mut b = DagBuilder::new();
        let mut remap = vec![None; self.node_count()];
        for n in self.nodes().filter(|n| mask[n.index()]) {
            remap[n.index()] = Some(b.add_node(self.id(n), self.label(n)));
        }
        for (dep, user) in self.edges() {
            if let (Some(d), Some(u)) = (remap[dep.index()], remap[user.index()]) {
                b.add_edge(d, u);
            }
        }
        if let Some(t) = self.theorem.and_then(|t| remap[t.index()]) {
            b.set_theorem(t);
        }
        b.build().expect("induced subgraph of a DAG is acyclic")
    }
}

/// Incremental constructor for [`ProofDag`].
#[derive(Debug, Default)]
pub struct DagBuilder {
    ids: Vec<String>,
    labels: Vec<String>,
    lookup: HashMap<String, NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    edge_set: HashSet<(NodeId, NodeId)>,
    theorem: Option<NodeId>,
}

impl DagBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Returns the node with this id, creating it with `label` if absent.
    pub fn add_node(&mut self, id: &str, label: &str) -> NodeId {
        if let Some(&n) = self.lookup.get(id) {
            return n;
        }
        let n = NodeId::new(self.ids.len());
        self.ids.push(id.to_owned());
        self.labels.push(label.to_owned());
        self.lookup.insert(id.to_owned(), n);
        n
    }

    /// Node whose label equals its id.
    pub fn named(&mut self, id: &str) -> NodeId {
        self.add_node(id, id)
    }

    pub fn get(&self, id: &str) -> Option<NodeId> {
        self.lookup.get(id).copied()
    }

    /// Adds `dependency -> dependent`; returns false for a repeated edge.
    /// Self-loops are kept so that `build` reports them as cycles.
    pub fn add_edge(&mut self, dependency: NodeId, dependent: NodeId) -> bool {
        if self.edge_set.insert((dependency, dependent)) {
            self.edges.push((dependency, dependent));
            true
        } else {
            false
        }
    }

    pub fn set_theorem(&mut self, theorem: NodeId) {
        self.theorem = Some(theorem);
    }

    pub fn build(self) -> Result<ProofDag> {
        let n = self.ids.len();
        let mut dependencies = vec![Vec::new(); n];
        let mut dependents = vec![Vec::new(); n];
        for &(d, u) in &self.edges {
            dependencies[u.index()].push(d);
            dependents[d.index()].push(u);
        }
        for list in dependencies.iter_mut().chain(dependents.iter_mut()) {
            list.sort_unstable();
        }
        if let Err(cycle) = topological_order(&dependencies, &dependents) {
            return Err(Error::Cycle(cycle.iter().map(|c| self.ids[c.index()].clone()).collect()));
        }
        Ok(ProofDag {
            ids: self.ids,
            labels: self.labels,
            dependencies,
            dependents,
            theorem: self.theorem,
            lookup: self.lookup,
        })
    }
}

/// Kahn's algorithm; on failure returns one cycle in dependency order,
/// closed (first node repeated at the end).
fn topological_order(
    dependencies: &[Vec<NodeId>],
    dependents: &[Vec<NodeId>],
) -> std::result::Result<Vec<NodeId>, Vec<NodeId>> {
    let n = dependencies.len();
    let mut pending: Vec<usize> = dependencies.iter().map(Vec::len).collect();
    let mut ready: VecDeque<NodeId> = (0..n).filter(|&i| pending[i] == 0).map(NodeId::new).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_front() {
        order.push(v);
        for &w in &dependents[v.index()] {
            pending[w.index()] -= 1;
            if pending[w.index()] == 0 {
                ready.push_back(w);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover node still has a leftover dependency; walk backwards
    // until a node repeats.
    let start = (0..n).find(|&i| pending[i] > 0).expect("leftover node");
    let mut seen = HashMap::new();
    let mut walk = Vec::new();
    let mut cur = NodeId::new(start);
    loop {
        if let Some(&pos) = seen.get(&cur) {
            let mut cycle: Vec<NodeId> = walk[pos..].to_vec();
            cycle.reverse();
            cycle.push(cycle[0]);
            return Err(cycle);
        }
        seen.insert(cur, walk.len());
        walk.push(cur);
        cur = *dependencies[cur.index()]
            .iter()
            .find(|d| pending[d.index()] > 0)
            .expect("leftover node has a leftover dependency");
    }
}

/// Parses the `.deps` edge-list format.
///
/// Each non-empty line is `dependent: dep1 dep2 ...`; lines whose first
/// non-blank character is `#` are comments. Repeated dependencies collapse
/// into one edge. The theorem is the unique sink when there is exactly one.
pub fn from_edge_list(text: &str) -> Result<ProofDag> {
    let mut b = DagBuilder::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |message: &str| Error::EdgeList { line: lineno + 1, message: message.to_owned() };
        let (head, tail) = line.split_once(':').ok_or_else(|| malformed("expected `dependent: dependencies...`"))?;
        let head = head.trim();
        if head.is_empty() {
            return Err(malformed("missing dependent name"));
        }
        if head.contains(char::is_whitespace) {
            return Err(malformed("dependent name contains whitespace"));
        }
        if tail.contains(':') {
            return Err(malformed("more than one `:` on the line"));
        }
        let user = b.named(head);
        for dep in tail.split_whitespace() {
            let d = b.named(dep);
            b.add_edge(d, user);
        }
    }
    let dag = b.build()?;
    let sinks = dag.sinks();
    if sinks.len() == 1 {
        return dag.with_theorem(Some(sinks[0]));
    }
    Ok(dag)
}

/// Writes the `.deps` form of a graph: one line per node, in node order.
/// Labels are not representable and are dropped.
pub fn to_edge_list(dag: &ProofDag) -> Result<String> {
    let mut out = String::new();
    for n in dag.nodes() {
        let id = dag.id(n);
        if id.is_empty() || id.contains(|c: char| c.is_whitespace() || c == ':') || id.starts_with('#') {
            return Err(Error::Format(format!("node id `{id}` cannot be written as an edge list")));
        }
        out.push_str(id);
        out.push(':');
        for &d in dag.dependencies(n) {
            out.push(' ');
            out.push_str(dag.id(d));
        }
        out.push('\n');
    }
    Ok(out)
}

/// In-degree (number of dependencies) and out-degree (number of dependents)
/// per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTable {
    pub in_degree: Vec<usize>,
    pub out_degree: Vec<usize>,
}

impl DegreeTable {
    pub fn edge_count(&self) -> usize {
        self.in_degree.iter().sum()
    }
}

pub fn degrees(dag: &ProofDag) -> DegreeTable {
    DegreeTable {
        in_degree: dag.nodes().map(|n| dag.dependencies(n).len()).collect(),
        out_degree: dag.nodes().map(|n| dag.dependents(n).len()).collect(),
    }
}

/// Partition of the node set into axioms, the theorem, and everything else.
///
/// Axioms are the nodes without dependencies, excluding the theorem itself
/// when the theorem happens to be isolated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeRoles {
    pub axioms: Vec<NodeId>,
    pub theorem: NodeId,
    pub interior: Vec<NodeId>,
}

pub fn classify_roles(dag: &ProofDag) -> Result<NodeRoles> {
    let theorem = resolve_theorem(dag)?;
    let mut axioms = Vec::new();
    let mut interior = Vec::new();
    for n in dag.nodes().filter(|&n| n != theorem) {
        if dag.dependencies(n).is_empty() {
            axioms.push(n);
        } else {
            interior.push(n);
        }
    }
    Ok(NodeRoles { axioms, theorem, interior })
}

/// The designated theorem, else the unique sink.
pub fn resolve_theorem(dag: &ProofDag) -> Result<NodeId> {
    if let Some(t) = dag.theorem() {
        return Ok(t);
    }
    let sinks = dag.sinks();
    match sinks.as_slice() {
        [only] => Ok(*only),
        _ => Err(Error::AmbiguousTheorem(sinks.iter().map(|&s| dag.id(s).to_owned()).collect())),
    }
}

/// Breadth-first expansion from the theorem through dependencies, one depth
/// layer at a time. Returns the subgraph induced by the first depth whose
/// cumulative node count exceeds `limit`, or the whole graph if no depth
/// does.
pub fn truncate_by_depth(dag: &ProofDag, limit: usize) -> Result<ProofDag> {
    let theorem = resolve_theorem(dag)?;
    let mut visited = vec![false; dag.node_count()];
    visited[theorem.index()] = true;
    let mut kept = vec![theorem];
    let mut frontier = vec![theorem];
    while !frontier.is_empty() {
        if kept.len() > limit {
            let dag = dag.clone().with_theorem(Some(theorem))?;
            return Ok(dag.induced_subgraph(&kept));
        }
        let mut next = Vec::new();
        for &v in &frontier {
            for &d in dag.dependencies(v) {
                if !visited[d.index()] {
                    visited[d.index()] = true;
                    next.push(d);
                }
            }
        }
        kept.extend_from_slice(&next);
        frontier = next;
    }
    dag.clone().with_theorem(Some(theorem))
}
