//! Rooted DAGs with leaf labelings or full labelings.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::multiset::{Label, Multiset};

/// One structural problem found by [`NetworkBuilder::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    DanglingArc { from: String, to: String },
    ParallelArc { from: String, to: String },
    /// Vertices that lie on some directed cycle.
    Cycle(Vec<String>),
    NoSource,
    MultipleSources(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "network has no vertices"),
            Violation::DanglingArc { from, to } => {
                write!(f, "arc {from} -> {to} references an undeclared vertex")
            }
            Violation::ParallelArc { from, to } => write!(f, "parallel arc {from} -> {to}"),
            Violation::Cycle(vs) => write!(f, "cycle through {}", vs.join(", ")),
            Violation::NoSource => write!(f, "no vertex of in-degree 0"),
            Violation::MultipleSources(vs) => {
                write!(f, "multiple vertices of in-degree 0: {}", vs.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("invalid network: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("leaf {0:?} has no label")]
    MissingLeafLabel(String),
    #[error("vertex {0:?} is not a leaf but carries a leaf label")]
    LabelOnInterior(String),
    #[error("vertex {0:?} has no label")]
    MissingLabel(String),
    #[error("vertex {0:?} has label 0; labels must be positive")]
    ZeroLabel(String),
    #[error("network is not a tree")]
    NotATree,
    #[error("vertex {0:?} is a leaf")]
    IsLeaf(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Orders vertex ids: decimal ids numerically, before all other ids, which
/// compare as strings.
pub fn id_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Collects vertices and arcs before validation.
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    vertices: BTreeSet<String>,
    arcs: Vec<(String, String)>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: impl Into<String>) -> &mut Self {
        self.vertices.insert(id.into());
        self
    }

    /// Adds an arc without declaring its endpoints.
    pub fn arc(&mut self, from: impl Into<String>, to: impl Into<String>) -> &mut Self {
        self.arcs.push((from.into(), to.into()));
        self
    }

    /// Adds an arc and declares both endpoints.
    pub fn link(&mut self, from: impl Into<String>, to: impl Into<String>) -> &mut Self {
        let (from, to) = (from.into(), to.into());
        self.vertices.insert(from.clone());
        self.vertices.insert(to.clone());
        self.arcs.push((from, to));
        self
    }

    /// Reports every structural violation; empty means the builder forms a
    /// valid rooted network.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push(Violation::Empty);
            return violations;
        }
        let mut seen = BTreeSet::new();
        let mut dangling = false;
        for (from, to) in &self.arcs {
            if !self.vertices.contains(from) || !self.vertices.contains(to) {
                violations.push(Violation::DanglingArc { from: from.clone(), to: to.clone() });
                dangling = true;
            } else if !seen.insert((from.clone(), to.clone())) {
                violations.push(Violation::ParallelArc { from: from.clone(), to: to.clone() });
            }
        }
        if dangling {
            return violations;
        }
        let ids = self.sorted_ids();
        let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let n = ids.len();
        let mut children = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (from, to) in &seen {
            let (u, v) = (index[from.as_str()], index[to.as_str()]);
            children[u].push(v);
            indeg[v] += 1;
        }
        let sources: Vec<String> = (0..n).filter(|&v| indeg[v] == 0).map(|v| ids[v].clone()).collect();
        // Kahn's algorithm; whatever is left over sits on or behind a cycle.
        let mut remaining = indeg.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut done = vec![false; n];
        while let Some(u) = queue.pop_front() {
            done[u] = true;
            for &c in &children[u] {
                remaining[c] -= 1;
                if remaining[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        if done.iter().any(|d| !d) {
            violations.push(Violation::Cycle(cycle_vertices(&children, &done, &ids)));
        }
        match sources.len() {
            0 => violations.push(Violation::NoSource),
            1 => {}
            _ => violations.push(Violation::MultipleSources(sources)),
        }
        violations
    }

    fn sorted_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.vertices.iter().cloned().collect();
        ids.sort_by(|a, b| id_cmp(a, b));
        ids
    }

    pub fn build(&self) -> Result<RootedNetwork, NetworkError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(NetworkError::Invalid(violations));
        }
        let ids = self.sorted_ids();
        let index: HashMap<String, usize> = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut children = vec![Vec::new(); ids.len()];
        let mut parents = vec![Vec::new(); ids.len()];
        for (from, to) in &self.arcs {
            let (u, v) = (index[from], index[to]);
            children[u].push(v);
            parents[v].push(u);
        }
        Ok(RootedNetwork::assemble(ids, index, children, parents))
    }
}

/// Vertices on cycles among those Kahn's algorithm could not remove.
fn cycle_vertices(children: &[Vec<usize>], done: &[bool], ids: &[String]) -> Vec<String> {
    // A leftover vertex is on a cycle iff it can reach itself through leftovers.
    let left: Vec<usize> = (0..ids.len()).filter(|&v| !done[v]).collect();
    let mut on_cycle = Vec::new();
    for &start in &left {
        let mut stack: Vec<usize> = children[start].iter().copied().filter(|&c| !done[c]).collect();
        let mut seen = vec![false; ids.len()];
        while let Some(v) = stack.pop() {
            if v == start {
                on_cycle.push(ids[start].clone());
                break;
            }
            if seen[v] {
                continue;
            }
            seen[v] = true;
            stack.extend(children[v].iter().copied().filter(|&c| !done[c]));
        }
    }
    on_cycle
}

/// A DAG with a unique vertex of in-degree 0 (the root).
///
/// Vertices are addressed by dense indices; index order follows [`id_cmp`]
/// on the string ids, and child/parent lists are sorted by index.
#[derive(Clone, PartialEq, Eq)]
pub struct RootedNetwork {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    root: usize,
}

impl fmt::Debug for RootedNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<String> = self.arcs().map(|(u, v)| format!("{}->{}", self.ids[u], self.ids[v])).collect();
        f.debug_struct("RootedNetwork")
            .field("root", &self.ids[self.root])
            .field("vertices", &self.ids)
            .field("arcs", &arcs)
            .finish()
    }
}

impl RootedNetwork {
    fn assemble(
        ids: Vec<String>,
        index: HashMap<String, usize>,
        mut children: Vec<Vec<usize>>,
        mut parents: Vec<Vec<usize>>,
    ) -> Self {
        for c in &mut children {
            c.sort_unstable();
        }
        for p in &mut parents {
            p.sort_unstable();
        }
        let root = (0..ids.len()).find(|&v| parents[v].is_empty()).expect("validated");
        RootedNetwork { ids, index, children, parents, root }
    }

    /// Convenience constructor declaring every arc endpoint.
    pub fn from_arcs<S: AsRef<str>>(arcs: &[(S, S)]) -> Result<Self, NetworkError> {
        let mut b = NetworkBuilder::new();
        for (u, v) in arcs {
            b.link(u.as_ref(), v.as_ref());
        }
        b.build()
    }

    pub fn single(id: impl Into<String>) -> Self {
        let mut b = NetworkBuilder::new();
        b.vertex(id);
        b.build().expect("single vertex is a valid network")
    }

    /// Builds from vertex count and index arcs; vertex `i` gets id `i + 1`.
    /// Index order then matches id order. Arcs must form a valid network.
    pub fn from_indexed(n: usize, arcs: &[(usize, usize)]) -> Result<Self, NetworkError> {
        let mut b = NetworkBuilder::new();
        for v in 0..n {
            b.vertex((v + 1).to_string());
        }
        for &(u, v) in arcs {
            b.arc((u + 1).to_string(), (v + 1).to_string());
        }
        b.build()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.parents[v].len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.children[v].len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.children[u].binary_search(&v).is_ok()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.is_leaf(v))
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| !self.is_leaf(v))
    }

    pub fn arc_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(u, cs)| cs.iter().map(move |&c| (u, c)))
    }

    /// Every vertex has in-degree at most 1.
    pub fn is_tree(&self) -> bool {
        self.parents.iter().all(|p| p.len() <= 1)
    }

    /// Parents before children; ties broken by index.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut remaining: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut queue = VecDeque::from([self.root]);
        let mut order = Vec::with_capacity(self.len());
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &c in &self.children[u] {
                remaining[c] -= 1;
                if remaining[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        order
    }

    /// Vertices reachable from `u`, including `u`, in index order.
    pub fn reachable_from(&self, u: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(v) = stack.pop() {
            for &c in &self.children[v] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        (0..self.len()).filter(|&v| seen[v]).collect()
    }

    /// The sub-network induced on the vertices reachable from `u`, rooted at `u`.
    /// Returns the new network and the old index of each new vertex.
    pub fn induced_below(&self, u: usize) -> (RootedNetwork, Vec<usize>) {
        let keep = self.reachable_from(u);
        let mut b = NetworkBuilder::new();
        for &v in &keep {
            b.vertex(self.ids[v].clone());
            for &c in &self.children[v] {
                b.arc(self.ids[v].clone(), self.ids[c].clone());
            }
        }
        let sub = b.build().expect("reachable set of a valid network is valid");
        let old = (0..sub.len()).map(|i| self.index[sub.id(i)]).collect();
        (sub, old)
    }
}

/// A rooted network together with a labeling of its leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafLabeledNetwork {
    network: RootedNetwork,
    /// Indexed by vertex; `Some` exactly on the leaves.
    labels: Vec<Option<Label>>,
}

impl LeafLabeledNetwork {
    /// Labels are keyed by vertex id; every leaf needs one and interior
    /// vertices must have none.
    pub fn new(network: RootedNetwork, labels: &BTreeMap<String, Label>) -> Result<Self, NetworkError> {
        for id in labels.keys() {
            let v = network.index_of(id).ok_or_else(|| NetworkError::UnknownVertex(id.clone()))?;
            if !network.is_leaf(v) {
                return Err(NetworkError::LabelOnInterior(id.clone()));
            }
        }
        let mut out = vec![None; network.len()];
        for v in network.leaves() {
            let id = network.id(v);
            match labels.get(id) {
                Some(0) => return Err(NetworkError::ZeroLabel(id.to_string())),
                Some(&l) => out[v] = Some(l),
                None => return Err(NetworkError::MissingLeafLabel(id.to_string())),
            }
        }
        Ok(LeafLabeledNetwork { network, labels: out })
    }

    /// Labels indexed by vertex; entries for interior vertices are ignored.
    pub fn from_index_labels(network: RootedNetwork, labels: &[Label]) -> Result<Self, NetworkError> {
        let mut out = vec![None; network.len()];
        for v in network.leaves() {
            match labels.get(v) {
                Some(0) => return Err(NetworkError::ZeroLabel(network.id(v).to_string())),
                Some(&l) => out[v] = Some(l),
                None => return Err(NetworkError::MissingLeafLabel(network.id(v).to_string())),
            }
        }
        Ok(LeafLabeledNetwork { network, labels: out })
    }

    pub fn network(&self) -> &RootedNetwork {
        &self.network
    }

    pub fn label(&self, v: usize) -> Option<Label> {
        self.labels[v]
    }

    /// Per-vertex labels, `None` on interior vertices.
    pub fn labels(&self) -> &[Option<Label>] {
        &self.labels
    }

    /// Leaf labels keyed by vertex id.
    pub fn label_map(&self) -> BTreeMap<String, Label> {
        self.network
            .leaves()
            .map(|v| (self.network.id(v).to_string(), self.labels[v].expect("leaf label")))
            .collect()
    }

    /// The multiset of leaf labels.
    pub fn leaf_multiset(&self) -> Multiset {
        self.labels.iter().flatten().copied().collect()
    }

    pub fn is_tree(&self) -> bool {
        self.network.is_tree()
    }

    /// The leaf-labeled network below `id`.
    pub fn subnetwork(&self, id: &str) -> Result<LeafLabeledNetwork, NetworkError> {
        let u = self.network.index_of(id).ok_or_else(|| NetworkError::UnknownVertex(id.to_string()))?;
        Ok(self.subnetwork_at(u))
    }

    pub fn subnetwork_at(&self, u: usize) -> LeafLabeledNetwork {
        let (sub, old) = self.network.induced_below(u);
        // Out-degree is preserved inside the reachable set, so leaves stay leaves.
        let labels = old.iter().map(|&v| self.labels[v]).collect();
        LeafLabeledNetwork { network: sub, labels }
    }
}

/// A rooted network with a label on every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullyLabeledNetwork {
    network: RootedNetwork,
    labels: Vec<Label>,
}

impl FullyLabeledNetwork {
    pub fn new(network: RootedNetwork, labels: &BTreeMap<String, Label>) -> Result<Self, NetworkError> {
        for id in labels.keys() {
            if network.index_of(id).is_none() {
                return Err(NetworkError::UnknownVertex(id.clone()));
            }
        }
        let mut out = Vec::with_capacity(network.len());
        for id in network.ids() {
            match labels.get(id) {
                Some(0) => return Err(NetworkError::ZeroLabel(id.clone())),
                Some(&l) => out.push(l),
                None => return Err(NetworkError::MissingLabel(id.clone())),
            }
        }
        Ok(FullyLabeledNetwork { network, labels: out })
    }

    /// Labels indexed by vertex. Panics if the length is wrong or a label is 0.
    pub fn from_index_labels(network: RootedNetwork, labels: Vec<Label>) -> Self {
        assert_eq!(network.len(), labels.len(), "one label per vertex");
        assert!(labels.iter().all(|&l| l > 0), "labels must be positive");
        FullyLabeledNetwork { network, labels }
    }

    pub fn network(&self) -> &RootedNetwork {
        &self.network
    }

    pub fn label(&self, v: usize) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label_of(&self, id: &str) -> Option<Label> {
        self.network.index_of(id).map(|v| self.labels[v])
    }

    pub fn label_map(&self) -> BTreeMap<String, Label> {
        self.network.ids().iter().cloned().zip(self.labels.iter().copied()).collect()
    }

    /// The multiset of the children's labels of an interior vertex.
    pub fn child_label_multiset(&self, id: &str) -> Result<Multiset, NetworkError> {
        let u = self.network.index_of(id).ok_or_else(|| NetworkError::UnknownVertex(id.to_string()))?;
        if self.network.is_leaf(u) {
            return Err(NetworkError::IsLeaf(id.to_string()));
        }
        Ok(self.child_labels_at(u))
    }

    pub fn child_labels_at(&self, u: usize) -> Multiset {
        self.network.children(u).iter().map(|&c| self.labels[c]).collect()
    }

    pub fn is_injective(&self) -> bool {
        let distinct: BTreeSet<Label> = self.labels.iter().copied().collect();
        distinct.len() == self.labels.len()
    }

    /// Drops interior labels.
    pub fn restrict_to_leaves(&self) -> LeafLabeledNetwork {
        let labels = (0..self.network.len())
            .map(|v| self.network.is_leaf(v).then_some(self.labels[v]))
            .collect();
        LeafLabeledNetwork { network: self.network.clone(), labels }
    }
}
