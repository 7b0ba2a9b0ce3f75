//! Phylogenetic networks, expanding covers and expanding partitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::codec::{decode, encode, is_tree_generated, n_value, CodecError, MultisetPartition};
use crate::fold::{fold_unchecked, is_stable, unfold, FoldError};
use crate::labeling::compute_full_labeling;
use crate::multiset::{is_labeling_consistent, ConsistencyScan, Label, Multiset, MultisetOrder};
use crate::network::{LeafLabeledNetwork, NetworkBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("network is not a phylogenetic network")]
    NotPhylogenetic,
    #[error("network is not stable")]
    NotStable,
    #[error("partition is not an expanding partition")]
    NotExpanding,
    #[error("cover is not an expanding cover")]
    NotExpandingCover,
    #[error("block {0:?} is not a set")]
    NotASet(Multiset),
    #[error("cover contains the set {0:?} twice")]
    DuplicateSet(Vec<Label>),
    #[error("cover contains an empty set")]
    EmptySet,
    #[error("ordering is not labeling-consistent: {0:?} vs {1:?}")]
    NotLabelingConsistent(Multiset, Multiset),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Fold(#[from] FoldError),
}

/// Leaves all have in-degree 1 and carry the labels `1..=n` bijectively.
pub fn is_phylogenetic(n: &LeafLabeledNetwork) -> bool {
    let net = n.network();
    if !net.leaves().all(|v| net.in_degree(v) == 1) {
        return false;
    }
    let labels = n.leaf_multiset();
    labels.is_set() && labels.is_gapless()
}

/// No vertex with in- and out-degree both 1, and none with both above 1.
pub fn is_non_degenerate(n: &LeafLabeledNetwork) -> bool {
    let net = n.network();
    (0..net.len()).all(|v| {
        let (i, o) = (net.in_degree(v), net.out_degree(v));
        !(i == 1 && o == 1) && !(i > 1 && o > 1)
    })
}

/// Every interior vertex has a child of in-degree 1.
pub fn is_tree_child(n: &LeafLabeledNetwork) -> bool {
    let net = n.network();
    net.interior().all(|v| net.children(v).iter().any(|&c| net.in_degree(c) == 1))
}

/// A family of distinct non-empty subsets of `[m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandingCover {
    sets: Vec<BTreeSet<Label>>,
    m: Label,
}

/// Which cover axioms hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverReport {
    /// The union is `[m]`.
    pub union_is_range: bool,
    /// `n_C = m - |C| + 1 >= 1`.
    pub positive_n: bool,
    /// Each `x` in `[n_C]` lies in exactly one set.
    pub unique_low_elements: bool,
    /// For each `i`, at least `i` sets lie inside `[n_C + i - 1]`.
    pub nested_growth: bool,
}

impl CoverReport {
    pub fn holds(&self) -> bool {
        self.union_is_range && self.positive_n && self.unique_low_elements && self.nested_growth
    }
}

impl ExpandingCover {
    /// Sets are stored sorted; duplicates and empty sets are rejected.
    pub fn new<I: IntoIterator<Item = BTreeSet<Label>>>(sets: I, m: Label) -> Result<Self, ClassError> {
        let mut seen = BTreeSet::new();
        for s in sets {
            if s.is_empty() {
                return Err(ClassError::EmptySet);
            }
            if seen.contains(&s) {
                return Err(ClassError::DuplicateSet(s.into_iter().collect()));
            }
            seen.insert(s);
        }
        Ok(ExpandingCover { sets: seen.into_iter().collect(), m })
    }

    pub fn of(sets: &[&[Label]], m: Label) -> Result<Self, ClassError> {
        Self::new(sets.iter().map(|s| s.iter().copied().collect()), m)
    }

    pub fn sets(&self) -> &[BTreeSet<Label>] {
        &self.sets
    }

    pub fn m(&self) -> Label {
        self.m
    }

    /// `m - |C| + 1`, possibly non-positive.
    pub fn n(&self) -> i64 {
        i64::from(self.m) - self.sets.len() as i64 + 1
    }

    pub fn report(&self) -> CoverReport {
        let union: BTreeSet<Label> = self.sets.iter().flatten().copied().collect();
        let union_is_range = union.len() == self.m as usize && union.iter().all(|&x| x >= 1 && x <= self.m);
        let n = self.n();
        let positive_n = n >= 1;
        let unique_low_elements = positive_n
            && (1..=n as Label).all(|x| self.sets.iter().filter(|s| s.contains(&x)).count() == 1);
        let nested_growth = positive_n
            && (1..=self.sets.len()).all(|i| {
                let bound = n as Label + i as Label - 1;
                self.sets.iter().filter(|s| s.iter().all(|&x| x <= bound)).count() >= i
            });
        CoverReport { union_is_range, positive_n, unique_low_elements, nested_growth }
    }

    pub fn is_expanding(&self) -> bool {
        self.report().holds()
    }
}

/// `m=<value>` header, then one set per line.
impl fmt::Display for ExpandingCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m={}", self.m)?;
        for s in &self.sets {
            let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for ExpandingCover {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut m = None;
        let mut sets = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ClassError::Parse { line: i + 1, message };
            if let Some(v) = line.strip_prefix("m=") {
                if m.is_some() {
                    return Err(err("repeated m= header".into()));
                }
                m = Some(v.trim().parse::<Label>().map_err(|_| err(format!("invalid m value {v:?}")))?);
                continue;
            }
            let block: Multiset = line.parse().map_err(|e| err(format!("{e}")))?;
            if !block.is_set() {
                return Err(err(format!("{block:?} repeats a value")));
            }
            let set: BTreeSet<Label> = block.iter().collect();
            if sets.contains(&set) {
                return Err(err(format!("duplicate set {block:?}")));
            }
            sets.push(set);
        }
        let m = m.ok_or(ClassError::Parse { line: 0, message: "missing m= header".into() })?;
        ExpandingCover::new(sets, m)
    }
}

/// Whether `partition` is tree-generated under `ordering`, has only set
/// blocks, and distinct block values share no value up to `n_Π`.
pub fn is_expanding_partition<O: MultisetOrder + ?Sized>(partition: &MultisetPartition, ordering: &O) -> bool {
    if !partition.distinct().all(Multiset::is_set) || !leaf_disjoint(partition) {
        return false;
    }
    matches!(is_tree_generated(partition, ordering), Ok(t) if t.holds())
}

/// Distinct block values never share a value at or below `n_Π`.
fn leaf_disjoint(partition: &MultisetPartition) -> bool {
    let Ok(n) = n_value(&partition.ground(), partition) else {
        return false;
    };
    let mut owner: BTreeMap<Label, &Multiset> = BTreeMap::new();
    for block in partition.distinct() {
        for (x, _) in block.counts().take_while(|&(x, _)| x <= n) {
            if owner.insert(x, block).is_some() {
                return false;
            }
        }
    }
    true
}

/// The partition of a stable phylogenetic network: label it, unfold, keep
/// the leaf labels, and encode the resulting tree.
pub fn network_to_partition<O: MultisetOrder + ?Sized>(
    n: &LeafLabeledNetwork,
    ordering: &O,
) -> Result<MultisetPartition, ClassError> {
    if !is_phylogenetic(n) {
        return Err(ClassError::NotPhylogenetic);
    }
    if !is_stable(n, ordering) {
        return Err(ClassError::NotStable);
    }
    let labeled = compute_full_labeling(n, ordering).labeled;
    let tree = unfold(&labeled)?.restrict_to_leaves();
    Ok(encode(&tree, ordering)?.partition)
}

/// Inverse of [`network_to_partition`] on expanding partitions: decode,
/// label, fold, and keep the leaf labels. Vertex ids are the labels.
pub fn partition_to_network<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
) -> Result<LeafLabeledNetwork, ClassError> {
    if !is_expanding_partition(partition, ordering) {
        return Err(ClassError::NotExpanding);
    }
    fold_partition(partition, ordering)
}

/// The decode–label–fold pipeline without the expanding-partition check.
/// The partition must still be tree-generated.
pub fn fold_partition<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
) -> Result<LeafLabeledNetwork, ClassError> {
    let tree = decode(partition, ordering)?;
    let labeled = compute_full_labeling(&tree, ordering).labeled;
    Ok(fold_unchecked(&labeled).restrict_to_leaves())
}

/// The distinct block values as a cover of `[m]`, `m` the largest value.
pub fn partition_to_cover(partition: &MultisetPartition) -> Result<ExpandingCover, ClassError> {
    let mut sets = Vec::new();
    for block in partition.distinct() {
        if !block.is_set() {
            return Err(ClassError::NotASet(block.clone()));
        }
        sets.push(block.iter().collect::<BTreeSet<Label>>());
    }
    let m = partition.distinct().filter_map(Multiset::max_value).max().unwrap_or(0);
    ExpandingCover::new(sets, m)
}

/// The network of an expanding cover. Labels are handed out as in the
/// labeling algorithm: the values `1..=n_C` are the leaves, and label
/// `n_C + i` goes to the `≼`-least remaining set whose values are all
/// labeled already. Vertex ids are the labels.
pub fn cover_to_network<O: MultisetOrder + ?Sized>(
    cover: &ExpandingCover,
    ordering: &O,
) -> Result<LeafLabeledNetwork, ClassError> {
    if !cover.is_expanding() {
        return Err(ClassError::NotExpandingCover);
    }
    let n = cover.n() as Label;
    let mut remaining: Vec<Multiset> = cover.sets().iter().map(|s| s.iter().copied().collect()).collect();
    let mut b = NetworkBuilder::new();
    for x in 1..=cover.m() + 1 {
        b.vertex(x.to_string());
    }
    let mut next = n + 1;
    while !remaining.is_empty() {
        let ready = remaining
            .iter()
            .enumerate()
            .filter(|(_, s)| s.max_value().is_some_and(|m| m < next))
            .min_by(|(_, a), (_, b)| ordering.order(a, b))
            .map(|(i, _)| i)
            .ok_or(ClassError::NotExpandingCover)?;
        for x in remaining.swap_remove(ready).iter() {
            b.arc(next.to_string(), x.to_string());
        }
        next += 1;
    }
    let net = b.build().map_err(|_| ClassError::NotExpandingCover)?;
    let leaves = (1..=n).map(|x| (x.to_string(), x)).collect();
    LeafLabeledNetwork::new(net, &leaves).map_err(|_| ClassError::NotExpandingCover)
}

fn require_consistent<O: MultisetOrder + ?Sized>(ordering: &O) -> Result<(), ClassError> {
    match is_labeling_consistent(ordering, 3, 2).expect("bounds are positive") {
        ConsistencyScan::Pass => Ok(()),
        ConsistencyScan::Counterexample(a, b) => Err(ClassError::NotLabelingConsistent(a, b)),
    }
}

/// In the folded network the vertex labeled `x` has one parent per
/// distinct block value containing `x`.
fn parent_count(partition: &MultisetPartition, x: Label) -> usize {
    partition.distinct().filter(|b| b.contains(x)).count()
}

/// Partition-side test for non-degeneracy. With `F_1 ≺ ... ≺ F_k` the
/// distinct blocks, for each `i < k` the label `n + i` must lie in exactly
/// one block value if `|F_i| > 1`, and in at least two if `|F_i| = 1`.
pub fn check_non_degenerate_partition<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
) -> Result<bool, ClassError> {
    require_consistent(ordering)?;
    if !is_expanding_partition(partition, ordering) {
        return Err(ClassError::NotExpanding);
    }
    let n = n_value(&partition.ground(), partition)?;
    let classes = partition.sorted_distinct(ordering);
    let k = classes.len();
    Ok(classes.iter().take(k - 1).enumerate().all(|(i, f)| {
        let parents = parent_count(partition, n + i as Label + 1);
        if f.len() > 1 {
            parents <= 1
        } else {
            parents >= 2
        }
    }))
}

/// Partition-side test for tree-child networks: every distinct block value
/// holds a value found in no other distinct block value.
pub fn check_tree_child_partition<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
) -> Result<bool, ClassError> {
    if !is_expanding_partition(partition, ordering) {
        return Err(ClassError::NotExpanding);
    }
    Ok(partition
        .distinct()
        .all(|f| f.counts().any(|(x, _)| parent_count(partition, x) == 1)))
}
