//! The `labelnet` command line.
//!
//! Every subcommand reads one document (a network, a partition or a cover)
//! from `-i` and writes its result to `-o`; `-` means stdin or stdout.
//! Exit codes: 0 on success or a true predicate, 1 on a false predicate,
//! 2 on bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use labelnet::format::{write_fully_labeled, write_leaf_labeled, write_unfolded};
use labelnet::multiset::MultisetError;
use labelnet::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("expected {expected} input, got a {found}")]
    WrongInput { expected: &'static str, found: &'static str },
    #[error("invalid multiset {0:?}: {1}")]
    BadMultiset(String, MultisetError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Fold(#[from] FoldError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Multiset(#[from] MultisetError),
}

#[derive(Debug, Parser)]
#[command(name = "labelnet", version, about = "Label, encode and fold leaf-labeled trees and networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Io {
    /// Input file, `-` for stdin.
    #[arg(short, long, default_value = "-")]
    input: String,
    /// Output file, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    output: String,
}

#[derive(Debug, Args)]
struct Order {
    /// Multiset ordering: antilex, lex-paper or lex-sorted.
    #[arg(long, default_value = "antilex")]
    order: MultisetOrdering,
}

#[derive(Debug, Args)]
struct Bounds {
    #[arg(long, default_value_t = 5)]
    max_vertices: usize,
    #[arg(long, default_value_t = 2)]
    max_label: Label,
    /// Keep only gap-less leaf multisets.
    #[arg(long)]
    gapless: bool,
    /// Keep only phylogenetic networks.
    #[arg(long)]
    phylogenetic: bool,
}

impl Bounds {
    fn build(&self, trees: bool) -> EnumerationBounds {
        let mut b = EnumerationBounds::new(self.max_vertices, self.max_label);
        b.require_gapless_leaves = self.gapless;
        b.phylogenetic_only = self.phylogenetic;
        b.trees_only = trees;
        b
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extend the leaf labeling of a network to all vertices.
    Label {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        order: Order,
        /// Print one comment line per labeling pass.
        #[arg(long)]
        trace: bool,
    },
    /// Encode a tree as a multiset partition.
    Encode {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        order: Order,
    },
    /// Rebuild the tree of a tree-generated partition.
    Decode {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        order: Order,
    },
    /// Fold a fully labeled tree into a network.
    Fold {
        #[command(flatten)]
        io: Io,
        /// Ordering the labels must come from; any shipped ordering if omitted.
        #[arg(long)]
        order: Option<MultisetOrdering>,
    },
    /// Unfold a network into the tree of its root paths.
    Unfold {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        order: Order,
        /// Refuse networks with more root paths than this.
        #[arg(long, default_value_t = 100_000)]
        max_paths: usize,
    },
    /// Test a predicate; exit 0 if it holds and 1 if not.
    Check {
        predicate: Predicate,
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        order: Order,
        /// Largest value scanned by labeling-consistent.
        #[arg(long, default_value_t = 3)]
        max_label: Label,
        /// Largest multiset size scanned by labeling-consistent.
        #[arg(long, default_value_t = 2)]
        max_size: usize,
    },
    /// Expanding cover of a partition or a stable phylogenetic network.
    ToCover {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        order: Order,
    },
    /// Network of an expanding partition or an expanding cover.
    ToNetwork {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        order: Order,
    },
    /// Partition of a stable phylogenetic network or an expanding cover.
    ToPartition {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        order: Order,
    },
    /// List trees, networks or multiset partitions.
    Enumerate {
        kind: Kind,
        #[command(flatten)]
        bounds: Bounds,
        /// Ground multiset for partitions, e.g. "1 1 2".
        #[arg(long)]
        ground: Option<String>,
        /// Print only the number of results.
        #[arg(long)]
        count: bool,
        /// Output file, `-` for stdout.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Count enumerated networks per class, or print a closed count.
    Census {
        /// Print the number of semi-labeled trees with this many leaves.
        #[arg(long, conflicts_with = "bell")]
        semi_labeled: Option<usize>,
        /// Print this Bell number.
        #[arg(long)]
        bell: Option<usize>,
        #[command(flatten)]
        bounds: Bounds,
        /// Count trees instead of networks.
        #[arg(long)]
        trees: bool,
        /// Classes to count; all if omitted.
        #[arg(long = "predicate", value_name = "PREDICATE")]
        predicates: Vec<ClassPredicate>,
        /// Output file, `-` for stdout.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Predicate {
    Tree,
    Labelable,
    Stable,
    Phylogenetic,
    TreeGenerated,
    ExpandingPartition,
    ExpandingCover,
    TreeChild,
    NonDegenerate,
    LabelingConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Trees,
    Networks,
    Partitions,
}

/// A parsed input document.
enum Document {
    Network(NetworkFile),
    Partition(MultisetPartition),
    Cover(ExpandingCover),
}

impl Document {
    /// Covers start with an `m=` line, partitions with a number, and
    /// networks with a keyword.
    fn parse(text: &str) -> Result<Self, CliError> {
        let first = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty());
        Ok(match first {
            Some(l) if l.starts_with("m=") => Document::Cover(text.parse()?),
            Some(l) if l.starts_with(|c: char| c.is_ascii_alphabetic()) => Document::Network(parse_network(text)?),
            _ => Document::Partition(text.parse()?),
        })
    }

    fn kind(&self) -> &'static str {
        match self {
            Document::Network(_) => "network",
            Document::Partition(_) => "partition",
            Document::Cover(_) => "cover",
        }
    }

    fn network(self) -> Result<LeafLabeledNetwork, CliError> {
        match self {
            Document::Network(f) => Ok(f.leaf_labeled()?),
            other => Err(CliError::WrongInput { expected: "network", found: other.kind() }),
        }
    }

    fn partition(self) -> Result<MultisetPartition, CliError> {
        match self {
            Document::Partition(p) => Ok(p),
            other => Err(CliError::WrongInput { expected: "partition", found: other.kind() }),
        }
    }
}

/// What a successful command reports through its exit code.
enum Outcome {
    Done,
    Holds(bool),
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Usage errors and failures are reported on `stderr`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdin, stdout) {
        Ok(Outcome::Done) | Ok(Outcome::Holds(true)) => 0,
        Ok(Outcome::Holds(false)) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    let result = if path == "-" {
        stdin.read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    result.map_err(|source| CliError::Io { path: path.to_string(), source })?;
    Ok(text)
}

fn write_output(path: &str, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let result = if path == "-" { stdout.write_all(text.as_bytes()) } else { std::fs::write(path, text) };
    result.map_err(|source| CliError::Io { path: path.to_string(), source })
}

fn read_document(io: &Io, stdin: &mut dyn Read) -> Result<Document, CliError> {
    Document::parse(&read_input(&io.input, stdin)?)
}

fn execute(command: Command, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let (output, text, outcome) = match command {
        Command::Label { io, order, trace } => {
            let n = read_document(&io, stdin)?.network()?;
            let full = compute_full_labeling(&n, &order.order);
            let mut text = String::new();
            if trace {
                for step in &full.trace {
                    writeln!(text, "# label {} for {} vertices with children {{{}}}", step.label, step.count, step.children)
                        .expect("writing to a String");
                }
            }
            text.push_str(&write_fully_labeled(&full.labeled));
            (io.output, text, Outcome::Done)
        }
        Command::Encode { io, order } => {
            let t = read_document(&io, stdin)?.network()?;
            let enc = encode(&t, &order.order)?;
            let text = format!("# ground {}\n{}", enc.ground, enc.partition);
            (io.output, text, Outcome::Done)
        }
        Command::Decode { io, order } => {
            let p = read_document(&io, stdin)?.partition()?;
            (io.output, write_leaf_labeled(&decode(&p, &order.order)?), Outcome::Done)
        }
        Command::Fold { io, order } => {
            let file = match read_document(&io, stdin)? {
                Document::Network(f) => f,
                other => return Err(CliError::WrongInput { expected: "network", found: other.kind() }),
            };
            let t = file.fully_labeled()?;
            let folded = match order {
                Some(o) => fold::fold_with_order(&t, &o)?,
                None => fold(&t)?,
            };
            (io.output, write_fully_labeled(&folded), Outcome::Done)
        }
        Command::Unfold { io, order, max_paths } => {
            let file = match read_document(&io, stdin)? {
                Document::Network(f) => f,
                other => return Err(CliError::WrongInput { expected: "network", found: other.kind() }),
            };
            // A complete `label` section is used as given.
            let labeled = if file.labels.len() == file.network.len() {
                file.fully_labeled()?
            } else {
                compute_full_labeling(&file.leaf_labeled()?, &order.order).labeled
            };
            (io.output, write_unfolded(&unfold_with_cap(&labeled, max_paths)?), Outcome::Done)
        }
        Command::Check { predicate, io, order, max_label, max_size } => {
            let (holds, detail) = check(predicate, &io, &order.order, max_label, max_size, stdin)?;
            let text = match detail {
                Some(d) => format!("{holds}: {d}\n"),
                None => format!("{holds}\n"),
            };
            (io.output, text, Outcome::Holds(holds))
        }
        Command::ToCover { io, order } => {
            let p = match read_document(&io, stdin)? {
                Document::Network(f) => network_to_partition(&f.leaf_labeled()?, &order.order)?,
                Document::Partition(p) => p,
                other => return Err(CliError::WrongInput { expected: "network or partition", found: other.kind() }),
            };
            (io.output, partition_to_cover(&p)?.to_string(), Outcome::Done)
        }
        Command::ToNetwork { io, order } => {
            let n = match read_document(&io, stdin)? {
                Document::Partition(p) => partition_to_network(&p, &order.order)?,
                Document::Cover(c) => cover_to_network(&c, &order.order)?,
                other => return Err(CliError::WrongInput { expected: "partition or cover", found: other.kind() }),
            };
            (io.output, write_leaf_labeled(&n), Outcome::Done)
        }
        Command::ToPartition { io, order } => {
            let n = match read_document(&io, stdin)? {
                Document::Network(f) => f.leaf_labeled()?,
                Document::Cover(c) => cover_to_network(&c, &order.order)?,
                other => return Err(CliError::WrongInput { expected: "network or cover", found: other.kind() }),
            };
            (io.output, network_to_partition(&n, &order.order)?.to_string(), Outcome::Done)
        }
        Command::Enumerate { kind, bounds, ground, count, output } => {
            let documents: Vec<String> = match kind {
                Kind::Trees => enumerate_trees(&bounds.build(true))?.iter().map(write_leaf_labeled).collect(),
                Kind::Networks => enumerate_networks(&bounds.build(false))?.iter().map(write_leaf_labeled).collect(),
                Kind::Partitions => {
                    let ground = ground.unwrap_or_default();
                    let p: Multiset = ground.parse().map_err(|e| CliError::BadMultiset(ground.clone(), e))?;
                    enumerate_partitions(&p)?.iter().map(|q| q.to_string()).collect()
                }
            };
            let text = if count {
                format!("{}\n", documents.len())
            } else {
                let mut text = String::new();
                for (i, d) in documents.iter().enumerate() {
                    if i > 0 {
                        text.push('\n');
                    }
                    writeln!(text, "# {}", i + 1).expect("writing to a String");
                    text.push_str(d);
                }
                text
            };
            (output, text, Outcome::Done)
        }
        Command::Census { semi_labeled, bell: bell_n, bounds, trees, predicates, output } => {
            let text = if let Some(n) = semi_labeled {
                format!("{}\n", count_semi_labeled_trees(n)?)
            } else if let Some(n) = bell_n {
                format!("{}\n", bell(n)?)
            } else {
                let predicates = if predicates.is_empty() { ClassPredicate::ALL.to_vec() } else { predicates };
                let mut text = format!("{}\n", CensusRow::HEADER);
                for row in census(&bounds.build(trees), &predicates)? {
                    writeln!(text, "{row}").expect("writing to a String");
                }
                text
            };
            (output, text, Outcome::Done)
        }
    };
    write_output(&output, &text, stdout)?;
    Ok(outcome)
}

fn check(
    predicate: Predicate,
    io: &Io,
    order: &MultisetOrdering,
    max_label: Label,
    max_size: usize,
    stdin: &mut dyn Read,
) -> Result<(bool, Option<String>), CliError> {
    if predicate == Predicate::LabelingConsistent {
        return Ok(match is_labeling_consistent(order, max_label, max_size)? {
            ConsistencyScan::Pass => (true, None),
            ConsistencyScan::Counterexample(a, b) => (false, Some(format!("{a:?} is not below {b:?}"))),
        });
    }
    let doc = read_document(io, stdin)?;
    Ok(match predicate {
        Predicate::Tree => (doc.network()?.is_tree(), None),
        Predicate::Labelable => (is_labelable(&doc.network()?), None),
        Predicate::Stable => (is_stable_by_definition(&doc.network()?, order)?, None),
        Predicate::Phylogenetic => (is_phylogenetic(&doc.network()?), None),
        Predicate::TreeChild => match doc {
            Document::Partition(p) => (check_tree_child_partition(&p, order)?, None),
            doc => (is_tree_child(&doc.network()?), None),
        },
        Predicate::NonDegenerate => match doc {
            Document::Partition(p) => (check_non_degenerate_partition(&p, order)?, None),
            doc => (is_non_degenerate(&doc.network()?), None),
        },
        Predicate::TreeGenerated => match is_tree_generated(&doc.partition()?, order)? {
            TreeGenerated::Yes(_) => (true, None),
            TreeGenerated::No(r) => (false, Some(r.to_string())),
        },
        Predicate::ExpandingPartition => (is_expanding_partition(&doc.partition()?, order), None),
        Predicate::ExpandingCover => {
            let cover = match doc {
                Document::Cover(c) => c,
                Document::Partition(p) => partition_to_cover(&p)?,
                other => return Err(CliError::WrongInput { expected: "cover or partition", found: other.kind() }),
            };
            let r = cover.report();
            let failed: Vec<&str> = [
                (r.union_is_range, "union is not 1..m"),
                (r.positive_n, "m - |C| + 1 < 1"),
                (r.unique_low_elements, "a value up to n lies in more or fewer than one set"),
                (r.nested_growth, "too few sets below some bound"),
            ]
            .into_iter()
            .filter(|(ok, _)| !ok)
            .map(|(_, why)| why)
            .collect();
            (failed.is_empty(), (!failed.is_empty()).then(|| failed.join("; ")))
        }
        Predicate::LabelingConsistent => unreachable!("handled above"),
    })
}
