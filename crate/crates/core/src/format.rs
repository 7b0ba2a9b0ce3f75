//! Line-based text format for networks.
//!
//! ```text
//! # comment
//! vertex r
//! arc r a
//! arc r b
//! leaf a 1
//! leaf b 1
//! label r 2
//! ```
//!
//! `vertex` lines are optional for vertices that appear in an arc. `leaf`
//! lines give the leaf labeling, `label` lines a full labeling. Line order
//! does not matter.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::fold::PATH_SEPARATOR;
use crate::multiset::Label;
use crate::network::{FullyLabeledNetwork, LeafLabeledNetwork, NetworkBuilder, NetworkError, RootedNetwork};

/// A parsed network file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkFile {
    pub network: RootedNetwork,
    pub leaf_labels: BTreeMap<String, Label>,
    pub labels: BTreeMap<String, Label>,
}

impl NetworkFile {
    /// The leaf labeling from `leaf` lines. Without any `leaf` lines, the
    /// `label` values of the leaves are used instead.
    pub fn leaf_labeled(&self) -> Result<LeafLabeledNetwork, NetworkError> {
        if self.leaf_labels.is_empty() && !self.labels.is_empty() {
            let leaves = self
                .network
                .leaves()
                .map(|v| {
                    let id = self.network.id(v);
                    let l = self.labels.get(id).ok_or_else(|| NetworkError::MissingLeafLabel(id.to_string()))?;
                    Ok((id.to_string(), *l))
                })
                .collect::<Result<_, NetworkError>>()?;
            return LeafLabeledNetwork::new(self.network.clone(), &leaves);
        }
        LeafLabeledNetwork::new(self.network.clone(), &self.leaf_labels)
    }

    /// The full labeling from `label` lines. A `leaf` line counts as the
    /// label of its vertex unless a `label` line overrides it.
    pub fn fully_labeled(&self) -> Result<FullyLabeledNetwork, NetworkError> {
        let mut all = self.leaf_labels.clone();
        all.extend(self.labels.iter().map(|(k, v)| (k.clone(), *v)));
        FullyLabeledNetwork::new(self.network.clone(), &all)
    }
}

impl FromStr for NetworkFile {
    type Err = NetworkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_network(s)
    }
}

pub fn parse_network(text: &str) -> Result<NetworkFile, NetworkError> {
    let mut b = NetworkBuilder::new();
    let mut leaf_labels = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| NetworkError::Parse { line: i + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["vertex", id] => {
                b.vertex(*id);
            }
            ["arc", from, to] => {
                b.link(*from, *to);
            }
            [kind @ ("leaf" | "label"), id, value] => {
                let value: Label = value.parse().map_err(|_| err(format!("invalid label {value:?}")))?;
                if value == 0 {
                    return Err(err("labels must be positive".into()));
                }
                let map = if *kind == "leaf" { &mut leaf_labels } else { &mut labels };
                if map.insert(id.to_string(), value).is_some_and(|old| old != value) {
                    return Err(err(format!("conflicting {kind} values for {id:?}")));
                }
                b.vertex(*id);
            }
            [keyword, ..] if ["vertex", "arc", "leaf", "label"].contains(keyword) => {
                return Err(err(format!("wrong number of fields for {keyword:?}")));
            }
            [keyword, ..] => return Err(err(format!("unknown keyword {keyword:?}"))),
            [] => unreachable!("blank lines are skipped"),
        }
    }
    let network = b.build()?;
    Ok(NetworkFile { network, leaf_labels, labels })
}

fn write_structure(out: &mut String, net: &RootedNetwork) {
    for id in net.ids() {
        writeln!(out, "vertex {id}").expect("writing to a String");
    }
    for (u, v) in net.arcs() {
        writeln!(out, "arc {} {}", net.id(u), net.id(v)).expect("writing to a String");
    }
}

pub fn write_network(net: &RootedNetwork) -> String {
    let mut out = String::new();
    write_structure(&mut out, net);
    out
}

pub fn write_leaf_labeled(n: &LeafLabeledNetwork) -> String {
    let net = n.network();
    let mut out = String::new();
    write_structure(&mut out, net);
    for v in net.leaves() {
        writeln!(out, "leaf {} {}", net.id(v), n.label(v).expect("leaf label")).expect("writing to a String");
    }
    out
}

/// Writes `leaf` lines for the leaves and `label` lines for every vertex,
/// so the output also reads back as a leaf-labeled network.
pub fn write_fully_labeled(n: &FullyLabeledNetwork) -> String {
    let net = n.network();
    let mut out = String::new();
    write_structure(&mut out, net);
    for v in net.leaves() {
        writeln!(out, "leaf {} {}", net.id(v), n.label(v)).expect("writing to a String");
    }
    for v in 0..net.len() {
        writeln!(out, "label {} {}", net.id(v), n.label(v)).expect("writing to a String");
    }
    out
}

/// Like [`write_fully_labeled`], preceded by one comment per vertex giving
/// the source path it stands for.
pub fn write_unfolded(tree: &FullyLabeledNetwork) -> String {
    let mut out = String::new();
    for id in tree.network().ids() {
        let path: Vec<&str> = id.split(PATH_SEPARATOR).collect();
        writeln!(out, "# {id}: path {}", path.join(" -> ")).expect("writing to a String");
    }
    out.push_str(&write_fully_labeled(tree));
    out
}
