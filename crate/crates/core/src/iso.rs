//! Isomorphism of labeled rooted networks.
//!
//! [`is_isomorphic`] is exact: color refinement narrows the candidate images
//! of each vertex and a backtracking search completes the bijection. It is
//! meant for small networks; the search is exponential in the worst case.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use crate::multiset::Label;
use crate::network::{FullyLabeledNetwork, LeafLabeledNetwork, NetworkError, RootedNetwork};

fn hash_of<T: Hash>(value: &T) -> u64 {
    // DefaultHasher::new() uses fixed keys, so colors are reproducible.
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Stable vertex colors after iterated refinement, plus the round count.
///
/// Isomorphic inputs produce the same round count and the same color for
/// corresponding vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub colors: Vec<u64>,
    pub rounds: usize,
}

impl Refinement {
    /// Sorted color multiset; equal for isomorphic inputs.
    pub fn signature(&self) -> Vec<u64> {
        let mut s = self.colors.clone();
        s.sort_unstable();
        s
    }
}

pub fn refine(net: &RootedNetwork, labels: &[Option<Label>]) -> Refinement {
    let n = net.len();
    let mut colors: Vec<u64> = (0..n)
        .map(|v| hash_of(&(labels[v], net.in_degree(v), net.out_degree(v))))
        .collect();
    let mut classes = count_distinct(&colors);
    let mut rounds = 0;
    loop {
        let next: Vec<u64> = (0..n)
            .map(|v| {
                let mut down: Vec<u64> = net.children(v).iter().map(|&c| colors[c]).collect();
                let mut up: Vec<u64> = net.parents(v).iter().map(|&p| colors[p]).collect();
                down.sort_unstable();
                up.sort_unstable();
                hash_of(&(colors[v], down, up))
            })
            .collect();
        rounds += 1;
        let next_classes = count_distinct(&next);
        colors = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    Refinement { colors, rounds }
}

fn count_distinct(colors: &[u64]) -> usize {
    colors.iter().collect::<HashSet<_>>().len()
}

/// A bijection `a → b` preserving arcs and the given vertex labels, if any.
pub fn find_isomorphism(
    a: &RootedNetwork,
    a_labels: &[Option<Label>],
    b: &RootedNetwork,
    b_labels: &[Option<Label>],
) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.arc_count() != b.arc_count() {
        return None;
    }
    let ra = refine(a, a_labels);
    let rb = refine(b, b_labels);
    if ra.rounds != rb.rounds || ra.signature() != rb.signature() {
        return None;
    }
    // Breadth-first from the root so every vertex after the first has an
    // already mapped neighbour to check against.
    let order = a.topological_order();
    let mut search = Search {
        a,
        b,
        ca: &ra.colors,
        cb: &rb.colors,
        order: &order,
        forward: vec![usize::MAX; a.len()],
        backward: vec![usize::MAX; b.len()],
    };
    if search.extend(0) {
        Some(search.forward)
    } else {
        None
    }
}

struct Search<'a> {
    a: &'a RootedNetwork,
    b: &'a RootedNetwork,
    ca: &'a [u64],
    cb: &'a [u64],
    order: &'a [usize],
    forward: Vec<usize>,
    backward: Vec<usize>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for w in 0..self.b.len() {
            if self.backward[w] != usize::MAX || self.cb[w] != self.ca[v] || !self.consistent(v, w) {
                continue;
            }
            self.forward[v] = w;
            self.backward[w] = v;
            if self.extend(depth + 1) {
                return true;
            }
            self.forward[v] = usize::MAX;
            self.backward[w] = usize::MAX;
        }
        false
    }

    /// Mapped neighbours of `v` must map onto exactly the mapped neighbours of `w`.
    fn consistent(&self, v: usize, w: usize) -> bool {
        let mut mapped = 0;
        for &c in self.a.children(v) {
            let image = self.forward[c];
            if image != usize::MAX {
                if !self.b.has_arc(w, image) {
                    return false;
                }
                mapped += 1;
            }
        }
        if self.b.children(w).iter().filter(|&&c| self.backward[c] != usize::MAX).count() != mapped {
            return false;
        }
        let mut mapped = 0;
        for &p in self.a.parents(v) {
            let image = self.forward[p];
            if image != usize::MAX {
                if !self.b.has_arc(image, w) {
                    return false;
                }
                mapped += 1;
            }
        }
        self.b.parents(w).iter().filter(|&&p| self.backward[p] != usize::MAX).count() == mapped
    }
}

/// Isomorphism of leaf-labeled networks (arcs and leaf labels preserved).
pub fn is_isomorphic(a: &LeafLabeledNetwork, b: &LeafLabeledNetwork) -> bool {
    find_isomorphism(a.network(), a.labels(), b.network(), b.labels()).is_some()
}

/// Isomorphism of fully labeled networks (every label preserved).
pub fn is_isomorphic_full(a: &FullyLabeledNetwork, b: &FullyLabeledNetwork) -> bool {
    let la: Vec<Option<Label>> = a.labels().iter().map(|&l| Some(l)).collect();
    let lb: Vec<Option<Label>> = b.labels().iter().map(|&l| Some(l)).collect();
    find_isomorphism(a.network(), &la, b.network(), &lb).is_some()
}

/// Hash key that agrees on isomorphic leaf-labeled networks. Used to
/// bucket candidates before running the exact test.
pub fn invariant_key(n: &LeafLabeledNetwork) -> (usize, usize, Vec<u64>) {
    let r = refine(n.network(), n.labels());
    (n.network().len(), r.rounds, r.signature())
}

/// Canonical string of a leaf-labeled tree.
///
/// A leaf renders as its label; an interior vertex as `(` + its children's
/// codes, sorted bytewise and space-separated, + `)`. Two leaf-labeled trees
/// are isomorphic iff their codes are equal.
pub fn canonical_tree_code(t: &LeafLabeledNetwork) -> Result<String, NetworkError> {
    let net = t.network();
    if !net.is_tree() {
        return Err(NetworkError::NotATree);
    }
    let mut codes: Vec<String> = vec![String::new(); net.len()];
    for &v in net.topological_order().iter().rev() {
        codes[v] = if net.is_leaf(v) {
            t.label(v).expect("leaf label").to_string()
        } else {
            let mut parts: Vec<String> = net.children(v).iter().map(|&c| std::mem::take(&mut codes[c])).collect();
            parts.sort_unstable();
            format!("({})", parts.join(" "))
        };
    }
    Ok(std::mem::take(&mut codes[net.root()]))
}
