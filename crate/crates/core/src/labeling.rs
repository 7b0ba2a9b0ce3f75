//! Extending a leaf labeling to every vertex, and the labelability test.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use crate::multiset::{Label, Multiset, MultisetOrder};
use crate::network::{FullyLabeledNetwork, LeafLabeledNetwork};

/// One pass of the labeling loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingStep {
    /// The fresh label handed out.
    pub label: Label,
    /// The minimal child-label multiset among the ready vertices.
    pub children: Multiset,
    /// How many vertices received `label`.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullLabeling {
    pub labeled: FullyLabeledNetwork,
    pub trace: Vec<LabelingStep>,
}

/// Labels interior vertices bottom-up.
///
/// Leaves keep their labels. Each pass collects the unlabeled vertices whose
/// children are all labeled, keeps those whose child-label multiset is
/// minimal under `ordering`, and gives all of them the smallest positive
/// integer not yet in use.
pub fn compute_full_labeling<O: MultisetOrder + ?Sized>(n: &LeafLabeledNetwork, ordering: &O) -> FullLabeling {
    let net = n.network();
    let size = net.len();
    let mut labels: Vec<Option<Label>> = n.labels().to_vec();
    let mut used: BTreeSet<Label> = labels.iter().flatten().copied().collect();
    let mut next_free: Label = 1;

    let mut waiting: Vec<usize> = (0..size).map(|v| net.out_degree(v)).collect();
    // Ready vertices with their (now final) child-label multisets.
    let mut ready: Vec<(usize, Multiset)> = Vec::new();
    for v in net.leaves() {
        for &p in net.parents(v) {
            waiting[p] -= 1;
            if waiting[p] == 0 {
                ready.push((p, child_labels(net.children(p), &labels)));
            }
        }
    }
    let mut unlabeled = net.interior().count();
    let mut trace = Vec::new();

    while unlabeled > 0 {
        let min = ready
            .iter()
            .map(|(_, f)| f)
            .min_by(|x, y| ordering.order(x, y))
            .expect("an acyclic network always has a ready vertex")
            .clone();
        while used.contains(&next_free) {
            next_free += 1;
        }
        let k = next_free;
        used.insert(k);

        let (chosen, rest): (Vec<_>, Vec<_>) =
            ready.into_iter().partition(|(_, f)| ordering.order(f, &min) == Ordering::Equal);
        ready = rest;
        for &(w, _) in &chosen {
            labels[w] = Some(k);
        }
        for &(w, _) in &chosen {
            for &p in net.parents(w) {
                waiting[p] -= 1;
                if waiting[p] == 0 {
                    ready.push((p, child_labels(net.children(p), &labels)));
                }
            }
        }
        unlabeled -= chosen.len();
        trace.push(LabelingStep { label: k, children: min, count: chosen.len() });
    }

    let labels = labels.into_iter().map(|l| l.expect("every vertex labeled")).collect();
    FullLabeling { labeled: FullyLabeledNetwork::from_index_labels(net.clone(), labels), trace }
}

fn child_labels(children: &[usize], labels: &[Option<Label>]) -> Multiset {
    children.iter().map(|&c| labels[c].expect("child labeled")).collect()
}

/// The labeling produced by [`compute_full_labeling`] is injective iff the
/// leaf labels are injective and no two interior vertices share a child set.
///
/// Leaves are excluded from the child-set comparison: distinct leaves all
/// have the empty child set yet can carry distinct labels.
pub fn is_labelable(n: &LeafLabeledNetwork) -> bool {
    let mut seen_labels = HashSet::new();
    if !n.labels().iter().flatten().all(|l| seen_labels.insert(*l)) {
        return false;
    }
    let net = n.network();
    let mut seen_sets = HashSet::new();
    net.interior().all(|v| seen_sets.insert(net.children(v)))
}
