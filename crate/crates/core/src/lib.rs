//! Labeling, encoding and folding of leaf-labeled rooted trees and networks.
//!
//! A leaf-labeled network gets a label on every vertex from
//! [`compute_full_labeling`]. For trees the labels yield a multiset
//! partition ([`encode`]) from which the tree can be rebuilt ([`decode`]).
//! Folding a labeled tree by its labels gives a network, and unfolding a
//! network gives the tree of its root paths. For phylogenetic networks these
//! maps put stable networks, expanding partitions and expanding covers in
//! bijection.

pub mod classes;
pub mod codec;
pub mod enumerate;
pub mod fixtures;
pub mod fold;
pub mod format;
pub mod iso;
pub mod labeling;
pub mod multiset;
pub mod network;

pub use classes::{
    check_non_degenerate_partition, check_tree_child_partition, cover_to_network, fold_partition, is_expanding_partition,
    is_non_degenerate, is_phylogenetic, is_tree_child, network_to_partition, partition_to_cover,
    partition_to_network, ClassError, CoverReport, ExpandingCover,
};
pub use codec::{
    check_characterization, check_characterization_literal, decode, encode, is_tree_generated, leaf_count, leaf_multiset,
    n_value, CharacterizationReport, CodecError, Encoding, MultisetPartition, Rejection, TreeGenerated,
};
pub use enumerate::{
    bell, census, count_semi_labeled_trees, enumerate_networks, enumerate_partitions, enumerate_trees,
    CensusRow, ClassPredicate, EnumerationBounds, EnumerationError,
};
pub use fold::{
    count_root_paths, fold, fold_with_order, is_stable, is_stable_by_definition, unfold, unfold_with_cap,
    FoldError,
};
pub use format::{parse_network, NetworkFile};
pub use iso::{canonical_tree_code, is_isomorphic, is_isomorphic_full};
pub use labeling::{compute_full_labeling, is_labelable, FullLabeling, LabelingStep};
pub use multiset::{
    is_labeling_consistent, ConsistencyScan, Label, Multiset, MultisetError, MultisetOrder, MultisetOrdering,
};
pub use network::{FullyLabeledNetwork, LeafLabeledNetwork, NetworkBuilder, NetworkError, RootedNetwork};
