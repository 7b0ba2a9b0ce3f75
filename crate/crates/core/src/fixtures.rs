//! Small example networks and partitions shipped with the crate.

use crate::codec::MultisetPartition;
use crate::format::parse_network;
use crate::network::LeafLabeledNetwork;

pub const T_CHERRY: &str = include_str!("../fixtures/t_cherry.net");
pub const T_FIG4A: &str = include_str!("../fixtures/t_fig4a.net");
pub const T_FIG4B: &str = include_str!("../fixtures/t_fig4b.net");
pub const T_RET: &str = include_str!("../fixtures/t_ret.net");
pub const N_RET: &str = include_str!("../fixtures/n_ret.net");
pub const T_ND: &str = include_str!("../fixtures/t_nd.net");
pub const N_ND: &str = include_str!("../fixtures/n_nd.net");
pub const DIAMOND: &str = include_str!("../fixtures/diamond.net");
pub const NOT_TREE_CHILD: &str = include_str!("../fixtures/not_tree_child.net");
pub const SHARED_LEAF: &str = include_str!("../fixtures/shared_leaf.net");

pub const FIG4_PARTITION: &str = include_str!("../fixtures/fig4.part");
pub const RET_PARTITION: &str = include_str!("../fixtures/ret.part");
pub const ND_PARTITION: &str = include_str!("../fixtures/nd.part");

/// Every network fixture with its file stem.
pub const NETWORKS: [(&str, &str); 10] = [
    ("t_cherry", T_CHERRY),
    ("t_fig4a", T_FIG4A),
    ("t_fig4b", T_FIG4B),
    ("t_ret", T_RET),
    ("n_ret", N_RET),
    ("t_nd", T_ND),
    ("n_nd", N_ND),
    ("diamond", DIAMOND),
    ("not_tree_child", NOT_TREE_CHILD),
    ("shared_leaf", SHARED_LEAF),
];

/// Parses a shipped network fixture. Panics on malformed text.
pub fn network(text: &str) -> LeafLabeledNetwork {
    parse_network(text).and_then(|f| f.leaf_labeled()).expect("fixture parses")
}

/// Parses a shipped partition fixture. Panics on malformed text.
pub fn partition(text: &str) -> MultisetPartition {
    text.parse().expect("fixture parses")
}
