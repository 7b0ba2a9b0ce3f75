//! Multiset partitions from labeled trees, and back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::labeling::compute_full_labeling;
use crate::multiset::{is_labeling_consistent, ConsistencyScan, Label, Multiset, MultisetError, MultisetOrder};
use crate::network::{LeafLabeledNetwork, NetworkBuilder};

/// Why a partition was found not to be tree-generated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// The leaf multiset read off the partition is not gap-less.
    LeavesNotGapless(Multiset),
    /// No remaining block fits into the labels of the current roots.
    NoContainedBlock { remaining: usize },
    /// A block occurrence ran out of unattached vertices carrying `value`.
    CannotConsume { block: Multiset, value: Label },
    /// The construction ended with this many parentless vertices.
    RootCount(usize),
    /// The built tree encodes to a different partition.
    ReencodingMismatch,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::LeavesNotGapless(m) => write!(f, "leaf multiset {m:?} is not gap-less"),
            Rejection::NoContainedBlock { remaining } => {
                write!(f, "none of the {remaining} remaining blocks fits the unattached vertices")
            }
            Rejection::CannotConsume { block, value } => {
                write!(f, "block {block:?} finds no unattached vertex labeled {value}")
            }
            Rejection::RootCount(c) => write!(f, "construction ends with {c} parentless vertices"),
            Rejection::ReencodingMismatch => write!(f, "re-encoding the built tree gives a different partition"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("partition has no blocks")]
    EmptyPartition,
    #[error("partition contains an empty block")]
    EmptyBlock,
    #[error("ground multiset {ground:?} does not match the partition's blocks (sum {sum:?})")]
    GroundMismatch { ground: Multiset, sum: Multiset },
    #[error("input is not a tree")]
    NotATree,
    #[error("not tree-generated: {0}")]
    NotTreeGenerated(Rejection),
    #[error("ordering is not labeling-consistent: {0:?} vs {1:?}")]
    NotLabelingConsistent(Multiset, Multiset),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: MultisetError },
}

/// A multiset of non-empty blocks, each a [`Multiset`].
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultisetPartition {
    blocks: BTreeMap<Multiset, usize>,
}

impl fmt::Debug for MultisetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.occurrences()).finish()
    }
}

impl MultisetPartition {
    pub fn new<I: IntoIterator<Item = Multiset>>(blocks: I) -> Result<Self, CodecError> {
        let mut out = MultisetPartition::default();
        for b in blocks {
            if b.is_empty() {
                return Err(CodecError::EmptyBlock);
            }
            out.push(b);
        }
        if out.blocks.is_empty() {
            return Err(CodecError::EmptyPartition);
        }
        Ok(out)
    }

    /// Panics on empty blocks; for literals.
    pub fn of(blocks: &[&[Label]]) -> Self {
        Self::new(blocks.iter().map(|b| Multiset::of(b))).expect("non-empty blocks")
    }

    pub(crate) fn push(&mut self, block: Multiset) {
        debug_assert!(!block.is_empty());
        *self.blocks.entry(block).or_insert(0) += 1;
    }

    /// The number of block occurrences.
    pub fn len(&self) -> usize {
        self.blocks.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Distinct block values with their multiplicities.
    pub fn blocks(&self) -> impl Iterator<Item = (&Multiset, usize)> {
        self.blocks.iter().map(|(b, &c)| (b, c))
    }

    pub fn distinct(&self) -> impl Iterator<Item = &Multiset> {
        self.blocks.keys()
    }

    pub fn distinct_len(&self) -> usize {
        self.blocks.len()
    }

    pub fn multiplicity(&self, block: &Multiset) -> usize {
        self.blocks.get(block).copied().unwrap_or(0)
    }

    /// Every occurrence, repeated blocks adjacent.
    pub fn occurrences(&self) -> impl Iterator<Item = &Multiset> {
        self.blocks.iter().flat_map(|(b, &c)| std::iter::repeat_n(b, c))
    }

    /// The ground multiset: the sum of all block occurrences.
    pub fn ground(&self) -> Multiset {
        let mut out = Multiset::new();
        for (b, c) in self.blocks() {
            for _ in 0..c {
                out.add(b);
            }
        }
        out
    }

    /// Distinct block values sorted increasingly by `ordering`.
    pub fn sorted_distinct<O: MultisetOrder + ?Sized>(&self, ordering: &O) -> Vec<&Multiset> {
        let mut v: Vec<&Multiset> = self.distinct().collect();
        v.sort_by(|a, b| ordering.order(a, b));
        v
    }
}

/// One block per line, repeated lines for repeated blocks.
impl fmt::Display for MultisetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.occurrences() {
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for MultisetPartition {
    type Err = CodecError;

    /// Blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut blocks = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let block: Multiset = line.parse().map_err(|source| CodecError::Parse { line: i + 1, source })?;
            blocks.push(block);
        }
        MultisetPartition::new(blocks)
    }
}

/// The multisets read off a labeled tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    /// Labels of all vertices except the root.
    pub ground: Multiset,
    /// Child-label multisets of the interior vertices.
    pub partition: MultisetPartition,
    /// Leaf labels.
    pub leaves: Multiset,
}

/// Labels `t` with `ordering` and reads off its ground multiset, partition
/// and leaf multiset. A single-vertex tree yields an empty partition.
pub fn encode<O: MultisetOrder + ?Sized>(t: &LeafLabeledNetwork, ordering: &O) -> Result<Encoding, CodecError> {
    if !t.is_tree() {
        return Err(CodecError::NotATree);
    }
    let full = compute_full_labeling(t, ordering).labeled;
    let net = full.network();
    let ground = (0..net.len()).filter(|&v| v != net.root()).map(|v| full.label(v)).collect();
    let mut partition = MultisetPartition::default();
    for u in net.interior() {
        partition.push(full.child_labels_at(u));
    }
    Ok(Encoding { ground, partition, leaves: t.leaf_multiset() })
}

fn check_ground(ground: &Multiset, partition: &MultisetPartition) -> Result<(), CodecError> {
    if partition.is_empty() {
        return Err(CodecError::EmptyPartition);
    }
    let sum = partition.ground();
    if &sum != ground {
        return Err(CodecError::GroundMismatch { ground: ground.clone(), sum });
    }
    Ok(())
}

/// `|P| + 1 - |Π|`, the number of leaves of any tree generating `Π`.
pub fn leaf_count(ground: &Multiset, partition: &MultisetPartition) -> Result<usize, CodecError> {
    check_ground(ground, partition)?;
    Ok(ground.len() + 1 - partition.len())
}

/// The element of `ground` at position `|P| + 1 - |Π|` in sorted order.
pub fn n_value(ground: &Multiset, partition: &MultisetPartition) -> Result<Label, CodecError> {
    let pos = leaf_count(ground, partition)?;
    Ok(ground.nth_smallest(pos).expect("position is within the ground multiset"))
}

/// The part of `ground` at or below [`n_value`]. Only meaningful when the
/// partition is tree-generated; other inputs give an unspecified multiset.
pub fn leaf_multiset(ground: &Multiset, partition: &MultisetPartition) -> Result<Multiset, CodecError> {
    let n = n_value(ground, partition)?;
    Ok(ground.truncated(n))
}

/// Rebuilds a leaf-labeled tree from a tree-generated partition.
///
/// New vertices get ids `1, 2, ...` in creation order, leaves first. Each
/// block occurrence attaches to the lowest-id parentless vertices carrying
/// its values. Fails with the first guard that trips, including a final
/// check that the result encodes back to `partition`.
pub fn decode<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
) -> Result<LeafLabeledNetwork, CodecError> {
    let tree = reconstruct(partition, ordering)?;
    let again = encode(&tree, ordering)?;
    if &again.partition != partition {
        return Err(CodecError::NotTreeGenerated(Rejection::ReencodingMismatch));
    }
    Ok(tree)
}

fn reconstruct<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
) -> Result<LeafLabeledNetwork, CodecError> {
    let reject = |r| Err(CodecError::NotTreeGenerated(r));
    let ground = partition.ground();
    let mut label = n_value(&ground, partition)?;
    let leaves = ground.truncated(label);
    if !leaves.is_gapless() {
        return reject(Rejection::LeavesNotGapless(leaves));
    }

    let mut vertex_labels: Vec<Label> = leaves.iter().collect();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut has_parent = vec![false; vertex_labels.len()];
    // Parentless vertices by label, lowest index first.
    let mut pool: BTreeMap<Label, BTreeSet<usize>> = BTreeMap::new();
    for (v, &l) in vertex_labels.iter().enumerate() {
        pool.entry(l).or_default().insert(v);
    }
    let mut available = leaves.clone();
    let mut remaining: BTreeMap<Multiset, usize> = partition.blocks().map(|(b, c)| (b.clone(), c)).collect();

    while !remaining.is_empty() {
        let block = match remaining
            .keys()
            .filter(|b| b.is_submultiset_of(&available))
            .min_by(|a, b| ordering.order(a, b))
        {
            Some(b) => b.clone(),
            None => return reject(Rejection::NoContainedBlock { remaining: remaining.values().sum() }),
        };
        let copies = remaining.remove(&block).expect("present");
        label += 1;
        for _ in 0..copies {
            let u = vertex_labels.len();
            vertex_labels.push(label);
            has_parent.push(false);
            available.insert(label);
            pool.entry(label).or_default().insert(u);
            for x in block.iter() {
                let v = match pool.get_mut(&x).and_then(|s| s.pop_first()) {
                    Some(v) => v,
                    None => return reject(Rejection::CannotConsume { block: block.clone(), value: x }),
                };
                arcs.push((u, v));
                has_parent[v] = true;
                available.remove(x);
            }
        }
    }

    let roots = has_parent.iter().filter(|p| !**p).count();
    if roots != 1 {
        return reject(Rejection::RootCount(roots));
    }
    let mut b = NetworkBuilder::new();
    for v in 0..vertex_labels.len() {
        b.vertex((v + 1).to_string());
    }
    for &(u, v) in &arcs {
        b.arc((u + 1).to_string(), (v + 1).to_string());
    }
    let net = b.build().expect("construction yields a rooted tree");
    // Numeric ids keep index order equal to creation order.
    Ok(LeafLabeledNetwork::from_index_labels(net, &vertex_labels).expect("leaves are seeded with labels"))
}

/// Outcome of [`is_tree_generated`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeGenerated {
    Yes(LeafLabeledNetwork),
    No(Rejection),
}

impl TreeGenerated {
    pub fn holds(&self) -> bool {
        matches!(self, TreeGenerated::Yes(_))
    }
}

/// Decides whether `partition` arises from a tree with gap-less leaf
/// multiset under `ordering`, returning the witness tree when it does.
/// Works for any ordering.
pub fn is_tree_generated<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
) -> Result<TreeGenerated, CodecError> {
    match decode(partition, ordering) {
        Ok(t) => Ok(TreeGenerated::Yes(t)),
        Err(CodecError::NotTreeGenerated(r)) => Ok(TreeGenerated::No(r)),
        Err(e) => Err(e),
    }
}

/// Per-condition results of the closed-form characterization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterizationReport {
    /// `P` is gap-less.
    pub gapless: bool,
    /// Count condition on the distinct blocks.
    pub class_count: bool,
    /// Label multiplicities match block multiplicities.
    pub multiplicities: bool,
    /// `max(F_i) <= n + i - 1` for every `i`.
    pub max_bounds: bool,
}

impl CharacterizationReport {
    pub fn holds(&self) -> bool {
        self.gapless && self.class_count && self.multiplicities && self.max_bounds
    }
}

/// Closed-form test for tree-generated partitions under a labeling-consistent
/// ordering.
///
/// With `F_1 ≺ ... ≺ F_k` the distinct blocks and `n` = [`n_value`], checks
/// that `P` is gap-less, `k = max(P) + 1 - n`, `P(n+i) = Π(F_i)` for `i < k`
/// with `P(n+k) = Π(F_k) - 1`, and `max(F_i) <= n + i - 1`. The root label
/// `n + k` is not part of `P`, which is why the last class is offset by one.
pub fn check_characterization<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
) -> Result<CharacterizationReport, CodecError> {
    if let ConsistencyScan::Counterexample(a, b) =
        is_labeling_consistent(ordering, 3, 2).expect("bounds are positive")
    {
        return Err(CodecError::NotLabelingConsistent(a, b));
    }
    Ok(characterize(partition, ordering, false))
}

/// The same conditions without the root offset: `k = max(P) - n` and
/// `P(n+i) = Π(F_i)` for all `i`. These reject tree-generated partitions
/// and are kept only to document the difference.
pub fn check_characterization_literal<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
) -> CharacterizationReport {
    characterize(partition, ordering, true)
}

fn characterize<O: MultisetOrder + ?Sized>(
    partition: &MultisetPartition,
    ordering: &O,
    literal: bool,
) -> CharacterizationReport {
    let ground = partition.ground();
    let n = n_value(&ground, partition).expect("ground is derived from the partition") as usize;
    let classes = partition.sorted_distinct(ordering);
    let k = classes.len();
    let max_p = ground.max_value().expect("non-empty") as usize;

    let class_count = if literal { max_p >= n && k == max_p - n } else { k == max_p + 1 - n };
    let multiplicities = classes.iter().enumerate().all(|(i, f)| {
        let value = (n + i + 1) as Label;
        let expected = partition.multiplicity(f) - usize::from(!literal && i + 1 == k);
        ground.multiplicity(value) == expected
    });
    let max_bounds = classes
        .iter()
        .enumerate()
        .all(|(i, f)| f.max_value().expect("non-empty block") as usize <= n + i);
    CharacterizationReport { gapless: ground.is_gapless(), class_count, multiplicities, max_bounds }
}
