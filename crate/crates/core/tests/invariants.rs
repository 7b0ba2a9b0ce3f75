//! Structural invariants over exhaustively enumerated populations.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use labelnet::fold::fold_with_order;
use labelnet::multiset::MultisetOrdering::AntiLex;
use labelnet::*;

fn networks(max_vertices: usize, max_label: Label) -> Vec<LeafLabeledNetwork> {
    enumerate_networks(&EnumerationBounds::new(max_vertices, max_label)).unwrap()
}

fn gapless_trees(max_vertices: usize, max_label: Label) -> Vec<LeafLabeledNetwork> {
    enumerate_trees(&EnumerationBounds::new(max_vertices, max_label).gapless()).unwrap()
}

#[test]
fn enumerated_networks_are_rooted() {
    for n in networks(5, 2) {
        let net = n.network();
        assert_eq!((0..net.len()).filter(|&v| net.in_degree(v) == 0).count(), 1);
        assert_eq!(net.reachable_from(net.root()).len(), net.len());
        assert!(is_isomorphic(&n.subnetwork_at(net.root()), &n));
    }
}

#[test]
fn isomorphism_agrees_with_tree_codes() {
    let trees = enumerate_trees(&EnumerationBounds::new(6, 2)).unwrap();
    for (i, a) in trees.iter().enumerate() {
        let ca = canonical_tree_code(a).unwrap();
        for b in &trees[i..] {
            let same = ca == canonical_tree_code(b).unwrap();
            assert_eq!(is_isomorphic(a, b), same, "{ca}");
        }
        // A copy with reversed vertex ids keeps its code and class.
        let text = format::write_leaf_labeled(a);
        let renamed: String = text
            .lines()
            .map(|line| {
                let fields: Vec<String> = line
                    .split_whitespace()
                    .enumerate()
                    .map(|(k, f)| match (k, f.parse::<usize>()) {
                        (1 | 2, Ok(id)) if !(line.starts_with("leaf") && k == 2) => (100 - id).to_string(),
                        _ => f.to_string(),
                    })
                    .collect();
                fields.join(" ") + "\n"
            })
            .collect();
        let b = parse_network(&renamed).unwrap().leaf_labeled().unwrap();
        assert_eq!(canonical_tree_code(&b).unwrap(), ca);
        assert!(is_isomorphic(a, &b));
    }
}

#[test]
fn labeling_preserves_leaves_and_uses_fresh_labels() {
    for n in networks(5, 3) {
        for o in MultisetOrdering::ALL {
            let out = compute_full_labeling(&n, &o);
            let net = n.network();
            for v in net.leaves() {
                assert_eq!(Some(out.labeled.label(v)), n.label(v));
            }
            let mut used: BTreeSet<Label> = n.labels().iter().flatten().copied().collect();
            for step in &out.trace {
                let fresh = (1..).find(|k| !used.contains(k)).unwrap();
                assert_eq!(step.label, fresh);
                used.insert(step.label);
            }
            assert_eq!(out.trace.iter().map(|s| s.count).sum::<usize>(), net.interior().count());
        }
    }
}

/// Interior vertices share a label exactly when their subtrees are isomorphic.
#[test]
fn equal_labels_mean_isomorphic_subtrees() {
    for t in gapless_trees(7, 3) {
        for o in MultisetOrdering::ALL {
            let labeled = compute_full_labeling(&t, &o).labeled;
            let net = t.network();
            let interior: Vec<usize> = net.interior().collect();
            let codes: Vec<String> =
                interior.iter().map(|&u| canonical_tree_code(&t.subnetwork_at(u)).unwrap()).collect();
            for (i, &u) in interior.iter().enumerate() {
                for (j, &v) in interior.iter().enumerate() {
                    assert_eq!(labeled.label(u) == labeled.label(v), codes[i] == codes[j]);
                }
            }
        }
    }
}

#[test]
fn labels_are_monotone_in_child_multisets() {
    for t in gapless_trees(7, 3) {
        let labeled = compute_full_labeling(&t, &AntiLex).labeled;
        let net = t.network();
        for u in net.interior() {
            for v in net.interior() {
                if labeled.label(u) <= labeled.label(v) {
                    let order = AntiLex.compare(&labeled.child_labels_at(u), &labeled.child_labels_at(v)).unwrap();
                    assert_ne!(order, Ordering::Greater);
                }
            }
        }
    }
}

#[test]
fn labelable_iff_injective() {
    for n in networks(5, 2) {
        let predicted = is_labelable(&n);
        for o in MultisetOrdering::ALL {
            assert_eq!(compute_full_labeling(&n, &o).labeled.is_injective(), predicted);
        }
    }
}

#[test]
fn encoding_counts_leaves() {
    for t in gapless_trees(7, 3).into_iter().filter(|t| t.network().len() > 1) {
        for o in MultisetOrdering::ALL {
            let enc = encode(&t, &o).unwrap();
            assert_eq!(leaf_count(&enc.ground, &enc.partition), Ok(t.network().leaves().count()));
            assert_eq!(leaf_multiset(&enc.ground, &enc.partition), Ok(t.leaf_multiset()));
        }
    }
}

#[test]
fn fig4_encodings_coincide_under_every_ordering() {
    use labelnet::fixtures::{network, T_FIG4A, T_FIG4B};
    let (a, b) = (network(T_FIG4A), network(T_FIG4B));
    for o in MultisetOrdering::ALL {
        let (ea, eb) = (encode(&a, &o).unwrap(), encode(&b, &o).unwrap());
        assert_eq!((ea.ground, ea.partition), (eb.ground, eb.partition), "{o}");
    }
}

#[test]
fn unfolding_reproduces_the_labeling() {
    for n in networks(6, 2) {
        for o in MultisetOrdering::ALL {
            let labeled = compute_full_labeling(&n, &o);
            let tree = unfold(&labeled.labeled).unwrap();
            let again = compute_full_labeling(&tree.restrict_to_leaves(), &o);
            assert_eq!(again.labeled.labels(), tree.labels());
            // Each pass hands out the same label for the same child multiset.
            let steps = |t: &[LabelingStep]| t.iter().map(|s| (s.label, s.children.clone())).collect::<Vec<_>>();
            assert_eq!(steps(&again.trace), steps(&labeled.trace));
        }
    }
}

#[test]
fn stability_three_ways() {
    for n in networks(5, 2) {
        for o in MultisetOrdering::ALL {
            let fast = is_stable(&n, &o);
            assert_eq!(fast, is_labelable(&n));
            assert_eq!(is_stable_by_definition(&n, &o), Ok(fast));
        }
    }
}

#[test]
fn fold_of_unfold_is_injective() {
    for n in networks(5, 2) {
        let labeled = compute_full_labeling(&n, &AntiLex).labeled;
        let refolded = fold_with_order(&unfold(&labeled).unwrap(), &AntiLex).unwrap();
        assert!(refolded.is_injective());
    }
}

#[test]
fn unfold_inverts_fold_on_stable_unfoldings() {
    for n in networks(5, 2).into_iter().filter(is_labelable) {
        let tree = unfold(&compute_full_labeling(&n, &AntiLex).labeled).unwrap();
        let back = unfold(&fold_with_order(&tree, &AntiLex).unwrap()).unwrap();
        assert!(is_isomorphic_full(&back, &tree));
    }
}

#[test]
fn folding_duplicate_siblings_loses_vertices() {
    let t = parse_network("arc r u\narc r v\narc u a\narc u b\narc v c\narc v d\nleaf a 1\nleaf b 2\nleaf c 1\nleaf d 2\n")
        .unwrap()
        .leaf_labeled()
        .unwrap();
    let labeled = compute_full_labeling(&t, &AntiLex).labeled;
    let back = unfold(&fold(&labeled).unwrap()).unwrap();
    assert_eq!(back.network().len(), 4);
    assert!(!is_isomorphic_full(&back, &labeled));
}

fn stable_phylogenetic(max_vertices: usize, n: Label) -> Vec<LeafLabeledNetwork> {
    enumerate_networks(&EnumerationBounds::new(max_vertices, n).phylogenetic())
        .unwrap()
        .into_iter()
        .filter(|x| x.leaf_multiset().len() == n as usize && is_labelable(x))
        .collect()
}

#[test]
fn bijection_under_every_ordering() {
    for n in 1..=3 {
        let population = stable_phylogenetic(6, n);
        for o in MultisetOrdering::ALL {
            let mut images = BTreeSet::new();
            for net in &population {
                let p = network_to_partition(net, &o).unwrap();
                assert!(is_expanding_partition(&p, &o), "{o}\n{p}");
                let back = partition_to_network(&p, &o).unwrap();
                assert!(is_isomorphic(&back, net), "{o}\n{p}");
                assert_eq!(network_to_partition(&back, &o).as_ref(), Ok(&p));
                let cover = partition_to_cover(&p).unwrap();
                assert!(cover.is_expanding());
                let from_cover = cover_to_network(&cover, &o).unwrap();
                assert_eq!(format::write_leaf_labeled(&from_cover), format::write_leaf_labeled(&back));
                images.insert(p);
            }
            assert_eq!(images.len(), population.len());
        }
    }
}

#[test]
fn class_checks_agree_on_small_networks() {
    for n in 1..=3 {
        for net in stable_phylogenetic(6, n) {
            let p = network_to_partition(&net, &AntiLex).unwrap();
            assert_eq!(check_non_degenerate_partition(&p, &AntiLex), Ok(is_non_degenerate(&net)), "\n{p}");
            assert_eq!(check_tree_child_partition(&p, &AntiLex), Ok(is_tree_child(&net)), "\n{p}");
        }
    }
}

#[test]
fn tree_child_networks_are_labelable() {
    for n in 1..=3 {
        let population = enumerate_networks(&EnumerationBounds::new(6, n).phylogenetic()).unwrap();
        for net in population.iter().filter(|x| is_tree_child(x)) {
            assert!(is_labelable(net), "\n{}", format::write_leaf_labeled(net));
        }
    }
}

/// Among tree-generated partitions with set blocks, the leaf-disjointness
/// condition holds exactly when every leaf of the folded network has one
/// parent.
#[test]
fn leaf_disjointness_matches_leaf_in_degree() {
    let mut checked = 0;
    for ground in labelnet::multiset::bounded_multisets(6, 6) {
        for p in enumerate_partitions(&ground).unwrap() {
            if !p.distinct().all(Multiset::is_set) || !is_tree_generated(&p, &AntiLex).unwrap().holds() {
                continue;
            }
            let folded = fold_partition(&p, &AntiLex).unwrap();
            assert_eq!(is_expanding_partition(&p, &AntiLex), is_phylogenetic(&folded), "\n{p}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}
