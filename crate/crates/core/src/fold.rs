//! Folding labeled trees into networks and unfolding networks into trees.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::iso::is_isomorphic_full;
use crate::labeling::{compute_full_labeling, is_labelable};
use crate::multiset::{Label, MultisetOrder, MultisetOrdering};
use crate::network::{FullyLabeledNetwork, LeafLabeledNetwork, NetworkBuilder};

/// Default bound on the number of root paths [`unfold`] will materialize.
pub const DEFAULT_PATH_CAP: usize = 100_000;

/// Separator between vertex ids in the id of an unfolded vertex.
pub const PATH_SEPARATOR: char = '/';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoldError {
    #[error("input is not a tree")]
    NotATree,
    #[error("labeling does not match the labeling algorithm under any shipped ordering")]
    LabelingMismatch,
    #[error("network has {count} root paths, more than the cap of {cap}")]
    TooManyPaths { count: u128, cap: usize },
}

/// Quotient of a fully labeled tree by its labels: one vertex per label,
/// one arc per distinct label pair of an arc.
///
/// The labeling must be the output of the labeling algorithm for one of
/// the shipped orderings; use [`fold_with_order`] to pin the ordering.
pub fn fold(t: &FullyLabeledNetwork) -> Result<FullyLabeledNetwork, FoldError> {
    if !t.network().is_tree() {
        return Err(FoldError::NotATree);
    }
    let leaves = t.restrict_to_leaves();
    if !MultisetOrdering::ALL
        .iter()
        .any(|o| compute_full_labeling(&leaves, o).labeled.labels() == t.labels())
    {
        return Err(FoldError::LabelingMismatch);
    }
    Ok(fold_unchecked(t))
}

/// Like [`fold`], requiring the labeling produced under `ordering`.
pub fn fold_with_order<O: MultisetOrder + ?Sized>(
    t: &FullyLabeledNetwork,
    ordering: &O,
) -> Result<FullyLabeledNetwork, FoldError> {
    if !t.network().is_tree() {
        return Err(FoldError::NotATree);
    }
    if compute_full_labeling(&t.restrict_to_leaves(), ordering).labeled.labels() != t.labels() {
        return Err(FoldError::LabelingMismatch);
    }
    Ok(fold_unchecked(t))
}

/// The label quotient without any check on where the labels came from.
/// Vertex ids of the result are the decimal labels.
pub(crate) fn fold_unchecked(t: &FullyLabeledNetwork) -> FullyLabeledNetwork {
    let net = t.network();
    let labels: BTreeSet<Label> = t.labels().iter().copied().collect();
    let arcs: BTreeSet<(Label, Label)> = net.arcs().map(|(u, v)| (t.label(u), t.label(v))).collect();
    let mut b = NetworkBuilder::new();
    for l in &labels {
        b.vertex(l.to_string());
    }
    for (u, v) in &arcs {
        b.arc(u.to_string(), v.to_string());
    }
    let folded = b.build().expect("labels from the labeling algorithm fold to a rooted network");
    let identity = folded.ids().iter().map(|id| id.parse::<Label>().expect("numeric id")).collect();
    FullyLabeledNetwork::from_index_labels(folded, identity)
}

/// Number of directed paths from the root, saturating at `u128::MAX`.
pub fn count_root_paths(n: &FullyLabeledNetwork) -> u128 {
    let net = n.network();
    let mut paths = vec![0u128; net.len()];
    paths[net.root()] = 1;
    for &v in &net.topological_order() {
        for &c in net.children(v) {
            paths[c] = paths[c].saturating_add(paths[v]);
        }
    }
    paths.iter().fold(0u128, |acc, &p| acc.saturating_add(p))
}

/// The tree of directed root paths, with [`DEFAULT_PATH_CAP`].
pub fn unfold(n: &FullyLabeledNetwork) -> Result<FullyLabeledNetwork, FoldError> {
    unfold_with_cap(n, DEFAULT_PATH_CAP)
}

/// The tree whose vertices are the directed paths from the root. A path is
/// labeled by its last vertex and its id joins the vertex ids along it
/// with [`PATH_SEPARATOR`]. Children are visited in id order.
pub fn unfold_with_cap(n: &FullyLabeledNetwork, cap: usize) -> Result<FullyLabeledNetwork, FoldError> {
    let count = count_root_paths(n);
    if count > cap as u128 {
        return Err(FoldError::TooManyPaths { count, cap });
    }
    let net = n.network();
    let mut b = NetworkBuilder::new();
    let mut labels = Vec::with_capacity(count as usize);
    let root_id = net.id(net.root()).to_string();
    let mut stack = vec![(net.root(), root_id)];
    while let Some((v, path)) = stack.pop() {
        b.vertex(path.clone());
        labels.push((path.clone(), n.label(v)));
        for &c in net.children(v).iter().rev() {
            let child_path = format!("{path}{PATH_SEPARATOR}{}", net.id(c));
            b.arc(path.clone(), child_path.clone());
            stack.push((c, child_path));
        }
    }
    let tree = b.build().expect("root paths form a tree");
    let labels = labels.into_iter().collect();
    Ok(FullyLabeledNetwork::new(tree, &labels).expect("every path labeled"))
}

/// Stability, decided through labelability.
pub fn is_stable<O: MultisetOrder + ?Sized>(n: &LeafLabeledNetwork, _ordering: &O) -> bool {
    is_labelable(n)
}

/// Stability from the definition: label, unfold, fold, and compare the
/// result with the labeled input up to isomorphism.
pub fn is_stable_by_definition<O: MultisetOrder + ?Sized>(
    n: &LeafLabeledNetwork,
    ordering: &O,
) -> Result<bool, FoldError> {
    let labeled = compute_full_labeling(n, ordering).labeled;
    let unfolded = unfold(&labeled)?;
    let refolded = fold_with_order(&unfolded, ordering)?;
    Ok(is_isomorphic_full(&labeled, &refolded))
}
