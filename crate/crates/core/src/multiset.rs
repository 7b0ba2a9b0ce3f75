//! Finite multisets over positive integers and total orderings on them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Vertex labels and multiset elements are positive integers.
pub type Label = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultisetError {
    #[error("multiset is empty")]
    Empty,
    #[error("multiset values must be positive, found 0")]
    ZeroValue,
    #[error("invalid multiset value {0:?}")]
    Parse(String),
    #[error("bounds must be at least 1")]
    InvalidBounds,
}

/// A finite multiset of positive integers.
///
/// Stored as a value → multiplicity map; every stored multiplicity is at
/// least 1 and values are visited in increasing order.
///
/// The `Ord` impl compares the non-decreasing value sequences
/// lexicographically (a proper prefix is smaller). It is only used for
/// storage and output; the labeling code is parameterized by a
/// [`MultisetOrder`] instead.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Multiset {
    counts: BTreeMap<Label, usize>,
    size: usize,
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a multiset from values, rejecting zero.
    pub fn from_values<I: IntoIterator<Item = Label>>(values: I) -> Result<Self, MultisetError> {
        let mut m = Multiset::new();
        for v in values {
            if v == 0 {
                return Err(MultisetError::ZeroValue);
            }
            m.insert(v);
        }
        Ok(m)
    }

    /// Panics on zero; meant for literals in code and tests.
    pub fn of(values: &[Label]) -> Self {
        Self::from_values(values.iter().copied()).expect("multiset values must be positive")
    }

    /// The set `{1, ..., n}`.
    pub fn range(n: Label) -> Self {
        Self::from_values(1..=n).expect("range starts at 1")
    }

    pub fn insert(&mut self, value: Label) {
        self.insert_n(value, 1);
    }

    pub fn insert_n(&mut self, value: Label, count: usize) {
        assert!(value > 0, "multiset values must be positive");
        if count == 0 {
            return;
        }
        *self.counts.entry(value).or_insert(0) += count;
        self.size += count;
    }

    /// Removes one copy of `value`; returns false if it was absent.
    pub fn remove(&mut self, value: Label) -> bool {
        match self.counts.get_mut(&value) {
            Some(c) => {
                *c -= 1;
                if *c == 0 {
                    self.counts.remove(&value);
                }
                self.size -= 1;
                true
            }
            None => false,
        }
    }

    pub fn multiplicity(&self, value: Label) -> usize {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// Total number of elements counted with multiplicity.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn distinct_len(&self) -> usize {
        self.counts.len()
    }

    pub fn max_value(&self) -> Option<Label> {
        self.counts.keys().next_back().copied()
    }

    pub fn min_value(&self) -> Option<Label> {
        self.counts.keys().next().copied()
    }

    pub fn contains(&self, value: Label) -> bool {
        self.counts.contains_key(&value)
    }

    /// `(value, multiplicity)` pairs in increasing value order.
    pub fn counts(&self) -> impl DoubleEndedIterator<Item = (Label, usize)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    /// Values with repetition, non-decreasing.
    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.counts
            .iter()
            .flat_map(|(&v, &c)| std::iter::repeat_n(v, c))
    }

    pub fn to_sorted_vec(&self) -> Vec<Label> {
        self.iter().collect()
    }

    /// Multiset inclusion: every multiplicity of `self` is at most that of `other`.
    pub fn is_submultiset_of(&self, other: &Multiset) -> bool {
        self.size <= other.size && self.counts().all(|(v, c)| other.multiplicity(v) >= c)
    }

    /// True iff every multiplicity is 1.
    pub fn is_set(&self) -> bool {
        self.size == self.counts.len()
    }

    /// True iff every value `1..=max` occurs. The empty multiset is not gap-less.
    pub fn is_gapless(&self) -> bool {
        match self.max_value() {
            Some(max) => self.counts.len() == max as usize,
            None => false,
        }
    }

    /// Pointwise multiplicity sum.
    pub fn add(&mut self, other: &Multiset) {
        for (v, c) in other.counts() {
            self.insert_n(v, c);
        }
    }

    /// The element at 1-based `position` of the non-decreasing sequence.
    pub fn nth_smallest(&self, position: usize) -> Option<Label> {
        if position == 0 {
            return None;
        }
        let mut seen = 0;
        for (v, c) in self.counts() {
            seen += c;
            if seen >= position {
                return Some(v);
            }
        }
        None
    }

    /// Keeps only values `<= bound`.
    pub fn truncated(&self, bound: Label) -> Multiset {
        let mut out = Multiset::new();
        for (v, c) in self.counts().take_while(|&(v, _)| v <= bound) {
            out.insert_n(v, c);
        }
        out
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for Multiset {
    type Err = MultisetError;

    /// Parses whitespace-separated positive integers in any order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split_whitespace()
            .map(|tok| tok.parse::<Label>().map_err(|_| MultisetError::Parse(tok.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Multiset::from_values(values)
    }
}

impl Ord for Multiset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Multiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Label> for Multiset {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for v in iter {
            m.insert(v);
        }
        m
    }
}

/// Pointwise sum of a list of multisets.
pub fn multiset_sum<'a, I: IntoIterator<Item = &'a Multiset>>(parts: I) -> Multiset {
    let mut out = Multiset::new();
    for p in parts {
        out.add(p);
    }
    out
}

/// A total order on non-empty multisets.
///
/// Implementations must be total, antisymmetric and transitive, and
/// report `Equal` exactly for equal multisets.
pub trait MultisetOrder {
    fn order(&self, a: &Multiset, b: &Multiset) -> Ordering;
}

/// The shipped multiset orderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultisetOrdering {
    /// `a < b` iff `a(x) < b(x)` at the smallest `x` where they differ.
    LexPaper,
    /// `a < b` iff `a(x) < b(x)` at the largest `x` where they differ.
    AntiLex,
    /// Non-decreasing value sequences compared lexicographically.
    LexSorted,
}

impl MultisetOrdering {
    pub const ALL: [MultisetOrdering; 3] = [
        MultisetOrdering::LexPaper,
        MultisetOrdering::AntiLex,
        MultisetOrdering::LexSorted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MultisetOrdering::LexPaper => "lex-paper",
            MultisetOrdering::AntiLex => "antilex",
            MultisetOrdering::LexSorted => "lex-sorted",
        }
    }

    /// Compares two non-empty multisets.
    pub fn compare(self, a: &Multiset, b: &Multiset) -> Result<Ordering, MultisetError> {
        if a.is_empty() || b.is_empty() {
            return Err(MultisetError::Empty);
        }
        Ok(self.order(a, b))
    }
}

impl FromStr for MultisetOrdering {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex-paper" | "lex" => Ok(MultisetOrdering::LexPaper),
            "antilex" | "anti-lex" => Ok(MultisetOrdering::AntiLex),
            "lex-sorted" => Ok(MultisetOrdering::LexSorted),
            other => Err(format!("unknown ordering {other:?}")),
        }
    }
}

impl fmt::Display for MultisetOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl MultisetOrder for MultisetOrdering {
    fn order(&self, a: &Multiset, b: &Multiset) -> Ordering {
        match self {
            MultisetOrdering::LexPaper => first_difference(a.counts(), b.counts(), true),
            MultisetOrdering::AntiLex => first_difference(a.counts().rev(), b.counts().rev(), false),
            MultisetOrdering::LexSorted => a.iter().cmp(b.iter()),
        }
    }
}

/// Walks two `(value, multiplicity)` streams in the same direction and
/// decides at the first value whose multiplicities differ.
fn first_difference<A, B>(mut a: A, mut b: B, ascending: bool) -> Ordering
where
    A: Iterator<Item = (Label, usize)>,
    B: Iterator<Item = (Label, usize)>,
{
    let mut next_a = a.next();
    let mut next_b = b.next();
    loop {
        match (next_a, next_b) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((va, ca)), Some((vb, cb))) if va == vb => {
                if ca != cb {
                    return ca.cmp(&cb);
                }
                next_a = a.next();
                next_b = b.next();
            }
            (Some((va, _)), Some((vb, _))) => {
                // The value reached first is missing from the other side.
                let a_first = if ascending { va < vb } else { va > vb };
                return if a_first { Ordering::Greater } else { Ordering::Less };
            }
        }
    }
}

/// Outcome of an exhaustive labeling-consistency scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyScan {
    Pass,
    /// `max(a) < max(b)` but `a` is not strictly below `b`.
    Counterexample(Multiset, Multiset),
}

/// All non-empty multisets with values `<= max_value` and size `<= max_size`,
/// ordered by size and then by their sorted value sequence.
pub fn bounded_multisets(max_value: Label, max_size: usize) -> Vec<Multiset> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        let mut seq = vec![1; size];
        loop {
            out.push(Multiset::from_values(seq.iter().copied()).expect("positive"));
            // next non-decreasing sequence
            let mut i = size;
            while i > 0 && seq[i - 1] == max_value {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let v = seq[i - 1] + 1;
            for s in &mut seq[i - 1..] {
                *s = v;
            }
        }
    }
    out
}

/// Checks `max(a) < max(b) ⇒ a ≺ b` over all bounded pairs.
///
/// Pairs are scanned with `a` in the outer loop, both drawn from
/// [`bounded_multisets`] order; the first violation is returned.
pub fn is_labeling_consistent<O: MultisetOrder + ?Sized>(
    ordering: &O,
    max_value: Label,
    max_size: usize,
) -> Result<ConsistencyScan, MultisetError> {
    if max_value == 0 || max_size == 0 {
        return Err(MultisetError::InvalidBounds);
    }
    let all = bounded_multisets(max_value, max_size);
    for a in &all {
        for b in &all {
            if violates_consistency(ordering, a, b) {
                return Ok(ConsistencyScan::Counterexample(a.clone(), b.clone()));
            }
        }
    }
    Ok(ConsistencyScan::Pass)
}

/// True iff the pair breaks `max(a) < max(b) ⇒ a ≺ b`.
pub fn violates_consistency<O: MultisetOrder + ?Sized>(ordering: &O, a: &Multiset, b: &Multiset) -> bool {
    match (a.max_value(), b.max_value()) {
        (Some(ma), Some(mb)) => ma < mb && ordering.order(a, b) != Ordering::Less,
        _ => false,
    }
}
