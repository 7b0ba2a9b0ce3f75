//! Bounded exhaustive generation of trees, networks and multiset partitions.
//!
//! Networks are generated as one representative per topological vertex
//! order: vertex 0 is the root and every later vertex picks a non-empty set
//! of parents among the earlier ones. Every rooted network arises this way.
//! Isomorphic duplicates are removed by bucketing on
//! [`invariant_key`](crate::iso::invariant_key) and running the exact test
//! inside each bucket. The number of raw structures on `v` vertices is
//! `(2^1 - 1)(2^2 - 1)...(2^(v-1) - 1)`, about 6 * 10^5 at 7 vertices and
//! 8 * 10^7 at 8, which is why the vertex bound is capped at 8.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::classes::{is_non_degenerate, is_phylogenetic, is_tree_child};
use crate::codec::MultisetPartition;
use crate::iso::{invariant_key, is_isomorphic};
use crate::labeling::is_labelable;
use crate::multiset::{Label, Multiset};
use crate::network::{LeafLabeledNetwork, NetworkBuilder, RootedNetwork};

pub const MAX_NETWORK_VERTICES: usize = 8;
pub const MAX_PARTITION_SIZE: usize = 10;
pub const MAX_BELL: usize = 20;
pub const MAX_SEMI_LABELED: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("max_vertices must be at least 1")]
    NoVertices,
    #[error("max_leaf_label must be at least 1")]
    NoLabels,
    #[error("network enumeration supports at most {limit} vertices, got {requested}")]
    TooManyVertices { requested: usize, limit: usize },
    #[error("partition enumeration supports multisets of size at most {limit}, got {requested}")]
    MultisetTooLarge { requested: usize, limit: usize },
    #[error("bell({0}) is outside the supported range 0..={MAX_BELL}")]
    BellOutOfRange(usize),
    #[error("semi-labeled tree count is supported for n in 1..={MAX_SEMI_LABELED}, got {0}")]
    SemiLabeledOutOfRange(usize),
    #[error("unknown class predicate {0:?}")]
    UnknownPredicate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_vertices: usize,
    pub max_leaf_label: Label,
    /// Keep only networks whose leaf multiset is `{1, ..., k}`-covering.
    pub require_gapless_leaves: bool,
    /// Keep only phylogenetic networks.
    pub phylogenetic_only: bool,
    /// Keep only trees.
    pub trees_only: bool,
}

impl EnumerationBounds {
    pub fn new(max_vertices: usize, max_leaf_label: Label) -> Self {
        EnumerationBounds {
            max_vertices,
            max_leaf_label,
            require_gapless_leaves: false,
            phylogenetic_only: false,
            trees_only: false,
        }
    }

    pub fn gapless(mut self) -> Self {
        self.require_gapless_leaves = true;
        self
    }

    pub fn phylogenetic(mut self) -> Self {
        self.phylogenetic_only = true;
        self
    }

    pub fn trees(mut self) -> Self {
        self.trees_only = true;
        self
    }

    fn validate(&self) -> Result<(), EnumerationError> {
        if self.max_vertices == 0 {
            return Err(EnumerationError::NoVertices);
        }
        if self.max_leaf_label == 0 {
            return Err(EnumerationError::NoLabels);
        }
        Ok(())
    }

    fn admits(&self, n: &LeafLabeledNetwork) -> bool {
        (!self.require_gapless_leaves || n.leaf_multiset().is_gapless())
            && (!self.phylogenetic_only || is_phylogenetic(n))
            && (!self.trees_only || n.is_tree())
    }
}

struct TreeNode {
    size: usize,
    code: String,
    leaves: Multiset,
    kind: TreeKind,
}

enum TreeKind {
    Leaf(Label),
    Interior(Vec<usize>),
}

/// All leaf-labeled trees within the bounds, one per isomorphism class,
/// sorted by vertex count and then canonical code.
///
/// A tree is a root over a multiset of smaller trees, so building each
/// child list as a non-decreasing sequence of indices into the pool of
/// smaller trees yields every class exactly once.
pub fn enumerate_trees(b: &EnumerationBounds) -> Result<Vec<LeafLabeledNetwork>, EnumerationError> {
    b.validate()?;
    let distinct_leaves = b.phylogenetic_only;
    let mut pool: Vec<TreeNode> = (1..=b.max_leaf_label)
        .map(|l| TreeNode { size: 1, code: l.to_string(), leaves: Multiset::of(&[l]), kind: TreeKind::Leaf(l) })
        .collect();
    for size in 2..=b.max_vertices {
        let smaller = pool.len();
        let mut fresh = Vec::new();
        let mut chosen = Vec::new();
        forests(&pool[..smaller], 0, size - 1, distinct_leaves, &mut chosen, &mut fresh);
        for children in fresh {
            let mut parts: Vec<&str> = children.iter().map(|&c| pool[c].code.as_str()).collect();
            parts.sort_unstable();
            let mut leaves = Multiset::new();
            for &c in &children {
                leaves.add(&pool[c].leaves);
            }
            let code = format!("({})", parts.join(" "));
            pool.push(TreeNode { size, code, leaves, kind: TreeKind::Interior(children) });
        }
    }
    let mut picked: Vec<usize> = (0..pool.len())
        .filter(|&i| {
            let leaves = &pool[i].leaves;
            (!b.require_gapless_leaves || leaves.is_gapless())
                && (!b.phylogenetic_only || (pool[i].size > 1 && leaves.is_set() && leaves.is_gapless()))
        })
        .collect();
    picked.sort_by(|&x, &y| (pool[x].size, &pool[x].code).cmp(&(pool[y].size, &pool[y].code)));
    Ok(picked.into_iter().map(|i| tree_network(&pool, i)).collect())
}

/// Non-decreasing index sequences into `pool` whose sizes sum to `remaining`.
fn forests(
    pool: &[TreeNode],
    start: usize,
    remaining: usize,
    distinct_leaves: bool,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        if distinct_leaves {
            let mut all = Multiset::new();
            for &c in chosen.iter() {
                all.add(&pool[c].leaves);
            }
            if !all.is_set() {
                return;
            }
        }
        out.push(chosen.clone());
        return;
    }
    for i in start..pool.len() {
        if pool[i].size > remaining {
            break;
        }
        if distinct_leaves && !pool[i].leaves.is_set() {
            continue;
        }
        chosen.push(i);
        forests(pool, i, remaining - pool[i].size, distinct_leaves, chosen, out);
        chosen.pop();
    }
}

/// Materializes a pooled tree with ids `1, 2, ...` in preorder.
fn tree_network(pool: &[TreeNode], top: usize) -> LeafLabeledNetwork {
    let mut b = NetworkBuilder::new();
    let mut labels = Vec::new();
    let mut next = 0usize;
    let mut stack = vec![(top, None::<String>)];
    while let Some((i, parent)) = stack.pop() {
        next += 1;
        let id = next.to_string();
        b.vertex(id.clone());
        if let Some(p) = parent {
            b.arc(p, id.clone());
        }
        match &pool[i].kind {
            TreeKind::Leaf(l) => labels.push((id, *l)),
            TreeKind::Interior(children) => {
                for &c in children.iter().rev() {
                    stack.push((c, Some(id.clone())));
                }
            }
        }
    }
    let net = b.build().expect("pooled trees are valid");
    LeafLabeledNetwork::new(net, &labels.into_iter().collect()).expect("every leaf labeled")
}

/// All leaf-labeled networks within the bounds, one per isomorphism class,
/// grouped by vertex count in a fixed generation order.
pub fn enumerate_networks(b: &EnumerationBounds) -> Result<Vec<LeafLabeledNetwork>, EnumerationError> {
    b.validate()?;
    if b.max_vertices > MAX_NETWORK_VERTICES {
        return Err(EnumerationError::TooManyVertices { requested: b.max_vertices, limit: MAX_NETWORK_VERTICES });
    }
    let mut out = Vec::new();
    for size in 1..=b.max_vertices {
        let mut buckets: HashMap<(usize, usize, Vec<u64>), Vec<usize>> = HashMap::new();
        let mut masks = vec![0u32; size];
        for_each_dag(&mut masks, 1, &mut |masks| {
            let Some(net) = structure(masks, b) else {
                return;
            };
            let leaves: Vec<usize> = net.leaves().collect();
            for_each_labeling(leaves.len(), b, &mut |leaf_labels| {
                let mut labels = vec![0; net.len()];
                for (&v, &l) in leaves.iter().zip(leaf_labels) {
                    labels[v] = l;
                }
                let candidate = LeafLabeledNetwork::from_index_labels(net.clone(), &labels).expect("labels positive");
                if !b.admits(&candidate) {
                    return;
                }
                let bucket = buckets.entry(invariant_key(&candidate)).or_default();
                if bucket.iter().any(|&i| is_isomorphic(&out[i], &candidate)) {
                    return;
                }
                bucket.push(out.len());
                out.push(candidate);
            });
        });
    }
    Ok(out)
}

/// `masks[j]` is the parent set of vertex `j`; vertex 0 is the root.
fn for_each_dag(masks: &mut [u32], j: usize, f: &mut dyn FnMut(&[u32])) {
    if j >= masks.len() {
        f(masks);
        return;
    }
    for mask in 1..(1u32 << j) {
        masks[j] = mask;
        for_each_dag(masks, j + 1, f);
    }
}

/// The network for a parent-mask vector, or `None` when a cheap structural
/// filter already rules it out.
fn structure(masks: &[u32], b: &EnumerationBounds) -> Option<RootedNetwork> {
    let n = masks.len();
    let mut has_child = vec![false; n];
    let mut arcs = Vec::new();
    for (v, &mask) in masks.iter().enumerate().skip(1) {
        for (p, parent_has_child) in has_child.iter_mut().enumerate().take(v) {
            if mask & (1 << p) != 0 {
                *parent_has_child = true;
                arcs.push((p, v));
            }
        }
    }
    if b.trees_only && masks.iter().skip(1).any(|m| m.count_ones() != 1) {
        return None;
    }
    if b.phylogenetic_only {
        let leaves: Vec<usize> = (0..n).filter(|&v| !has_child[v]).collect();
        if leaves.len() > b.max_leaf_label as usize || leaves.iter().any(|&v| v == 0 || masks[v].count_ones() != 1) {
            return None;
        }
    }
    Some(RootedNetwork::from_indexed(n, &arcs).expect("parent masks form a rooted network"))
}

/// Leaf label vectors: all maps into `1..=max_leaf_label`, or, for
/// phylogenetic bounds, all bijections onto `1..=leaves`.
fn for_each_labeling(leaves: usize, b: &EnumerationBounds, f: &mut dyn FnMut(&[Label])) {
    if b.phylogenetic_only {
        let mut perm: Vec<Label> = (1..=leaves as Label).collect();
        permutations(&mut perm, 0, f);
    } else {
        let mut current = vec![1; leaves];
        loop {
            f(&current);
            let mut i = 0;
            while i < leaves && current[i] == b.max_leaf_label {
                current[i] = 1;
                i += 1;
            }
            if i == leaves {
                return;
            }
            current[i] += 1;
        }
    }
}

fn permutations(items: &mut [Label], k: usize, f: &mut dyn FnMut(&[Label])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Every partition of `p` into non-empty blocks, each exactly once.
///
/// Blocks are produced in non-decreasing order, each containing the
/// smallest value not yet used; every partition has exactly one such
/// listing.
pub fn enumerate_partitions(p: &Multiset) -> Result<Vec<MultisetPartition>, EnumerationError> {
    if p.len() > MAX_PARTITION_SIZE {
        return Err(EnumerationError::MultisetTooLarge { requested: p.len(), limit: MAX_PARTITION_SIZE });
    }
    let mut out = Vec::new();
    if p.is_empty() {
        return Ok(out);
    }
    let mut blocks = Vec::new();
    split(p.clone(), &mut blocks, &mut out);
    Ok(out)
}

fn split(remaining: Multiset, blocks: &mut Vec<Multiset>, out: &mut Vec<MultisetPartition>) {
    let Some(low) = remaining.min_value() else {
        out.push(MultisetPartition::new(blocks.iter().cloned()).expect("blocks are non-empty"));
        return;
    };
    let counts: Vec<(Label, usize)> = remaining.counts().collect();
    let mut block = Multiset::new();
    block.insert(low);
    sub_blocks(&counts, 0, true, &mut block, &mut |block| {
        if blocks.last().is_some_and(|prev| block < prev) {
            return;
        }
        let mut rest = remaining.clone();
        for x in block.iter() {
            rest.remove(x);
        }
        blocks.push(block.clone());
        split(rest, blocks, out);
        blocks.pop();
    });
}

/// Every sub-multiset of `counts` that already holds one copy of the
/// smallest value (seeded by the caller).
fn sub_blocks(
    counts: &[(Label, usize)],
    i: usize,
    first: bool,
    block: &mut Multiset,
    f: &mut dyn FnMut(&Multiset),
) {
    if i == counts.len() {
        f(block);
        return;
    }
    let (value, available) = counts[i];
    let extra = if first { available - 1 } else { available };
    for take in 0..=extra {
        sub_blocks(counts, i + 1, false, block, f);
        if take < extra {
            block.insert(value);
        }
    }
    for _ in 0..extra {
        block.remove(value);
    }
}

/// Bell numbers via the Bell triangle.
pub fn bell(n: usize) -> Result<u64, EnumerationError> {
    if n > MAX_BELL {
        return Err(EnumerationError::BellOutOfRange(n));
    }
    if n == 0 {
        return Ok(1);
    }
    let mut row = vec![1u64];
    for _ in 1..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("rows are non-empty"));
        for &x in &row {
            let last = *next.last().expect("seeded");
            next.push(last + x);
        }
        row = next;
    }
    Ok(*row.last().expect("rows are non-empty"))
}

/// Isomorphism classes of rooted trees on `n + 1` vertices whose leaves are
/// labeled bijectively by `1..=l` for some `l`.
pub fn count_semi_labeled_trees(n: usize) -> Result<u64, EnumerationError> {
    if n == 0 || n > MAX_SEMI_LABELED {
        return Err(EnumerationError::SemiLabeledOutOfRange(n));
    }
    let mut b = EnumerationBounds::new(n + 1, n as Label).gapless().trees();
    // Distinct leaf labels; the single-vertex case never has n + 1 vertices.
    b.phylogenetic_only = true;
    let trees = enumerate_trees(&b)?;
    Ok(trees.iter().filter(|t| t.network().len() == n + 1).count() as u64)
}

/// Network classes that can be counted by `census`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassPredicate {
    All,
    Tree,
    Labelable,
    Stable,
    Phylogenetic,
    TreeChild,
    NonDegenerate,
}

impl ClassPredicate {
    pub const ALL: [ClassPredicate; 7] = [
        ClassPredicate::All,
        ClassPredicate::Tree,
        ClassPredicate::Labelable,
        ClassPredicate::Stable,
        ClassPredicate::Phylogenetic,
        ClassPredicate::TreeChild,
        ClassPredicate::NonDegenerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassPredicate::All => "all",
            ClassPredicate::Tree => "tree",
            ClassPredicate::Labelable => "labelable",
            ClassPredicate::Stable => "stable",
            ClassPredicate::Phylogenetic => "phylogenetic",
            ClassPredicate::TreeChild => "tree-child",
            ClassPredicate::NonDegenerate => "non-degenerate",
        }
    }

    /// Stability coincides with labelability and is evaluated that way.
    pub fn holds(self, n: &LeafLabeledNetwork) -> bool {
        match self {
            ClassPredicate::All => true,
            ClassPredicate::Tree => n.is_tree(),
            ClassPredicate::Labelable | ClassPredicate::Stable => is_labelable(n),
            ClassPredicate::Phylogenetic => is_phylogenetic(n),
            ClassPredicate::TreeChild => is_tree_child(n),
            ClassPredicate::NonDegenerate => is_non_degenerate(n),
        }
    }
}

impl fmt::Display for ClassPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassPredicate {
    type Err = EnumerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassPredicate::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| EnumerationError::UnknownPredicate(s.to_string()))
    }
}

/// One line of a census: the bounds, the predicate and the count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub bounds: EnumerationBounds,
    pub predicate: ClassPredicate,
    pub count: usize,
}

impl CensusRow {
    pub const HEADER: &'static str = "max_vertices,max_leaf_label,gapless,phylogenetic,trees_only,predicate,count";
}

impl fmt::Display for CensusRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.bounds;
        write!(
            f,
            "{},{},{},{},{},{},{}",
            b.max_vertices,
            b.max_leaf_label,
            b.require_gapless_leaves,
            b.phylogenetic_only,
            b.trees_only,
            self.predicate,
            self.count
        )
    }
}

/// Counts the enumerated networks satisfying each predicate.
pub fn census(b: &EnumerationBounds, predicates: &[ClassPredicate]) -> Result<Vec<CensusRow>, EnumerationError> {
    let population = if b.trees_only { enumerate_trees(b)? } else { enumerate_networks(b)? };
    Ok(predicates
        .iter()
        .map(|&predicate| CensusRow {
            bounds: *b,
            predicate,
            count: population.iter().filter(|n| predicate.holds(n)).count(),
        })
        .collect())
}
