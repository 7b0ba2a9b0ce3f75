//! Acceptance checks, one line per criterion. Exits non-zero on any failure.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use labelnet::fixtures;
use labelnet::multiset::bounded_multisets;
use labelnet::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Decoding the encoding of every small gap-less tree gives the tree back.
fn round_trip() -> Outcome {
    let trees = enumerate_trees(&EnumerationBounds::new(7, 3).gapless()).map_err(|e| e.to_string())?;
    // A single vertex has no interior vertex and encodes to nothing.
    let trees: Vec<_> = trees.into_iter().filter(|t| t.network().len() > 1).collect();
    for o in MultisetOrdering::ALL {
        for t in &trees {
            let code = canonical_tree_code(t).expect("tree");
            let enc = encode(t, &o).map_err(|e| format!("{o}: encode {code}: {e}"))?;
            let back = decode(&enc.partition, &o).map_err(|e| format!("{o}: decode {code}: {e}"))?;
            ensure(is_isomorphic(t, &back), || format!("{o}: {code} came back as {}", canonical_tree_code(&back).unwrap()))?;
        }
    }
    Ok(format!("{} trees x 3 orderings", trees.len()))
}

/// The closed-form conditions agree with decoding on every small partition.
fn characterization() -> Outcome {
    let o = MultisetOrdering::AntiLex;
    let mut partitions = 0usize;
    let mut generated = 0usize;
    for ground in bounded_multisets(6, 6) {
        for p in enumerate_partitions(&ground).map_err(|e| e.to_string())? {
            partitions += 1;
            let closed = check_characterization(&p, &o).map_err(|e| e.to_string())?.holds();
            let decoded = is_tree_generated(&p, &o).map_err(|e| e.to_string())?.holds();
            ensure(closed == decoded, || format!("disagreement on\n{p}closed form {closed}, decoding {decoded}"))?;
            generated += usize::from(decoded);
        }
    }
    let fig4 = fixtures::partition(fixtures::FIG4_PARTITION);
    ensure(is_tree_generated(&fig4, &o).map_err(|e| e.to_string())?.holds(), || "fig4 is not tree-generated".into())?;
    ensure(!check_characterization_literal(&fig4, &o).holds(), || "unadjusted conditions accept fig4".into())?;
    Ok(format!("{partitions} partitions, {generated} tree-generated; unadjusted form rejects fig4"))
}

fn consistency() -> Outcome {
    let scan = is_labeling_consistent(&MultisetOrdering::AntiLex, 6, 4).map_err(|e| e.to_string())?;
    ensure(scan == ConsistencyScan::Pass, || format!("antilex: {scan:?}"))?;
    let o = MultisetOrdering::LexPaper;
    match is_labeling_consistent(&o, 3, 2).map_err(|e| e.to_string())? {
        ConsistencyScan::Counterexample(a, b) => {
            let verified = a.max_value() < b.max_value() && o.compare(&a, &b).map_err(|e| e.to_string())? != Ordering::Less;
            ensure(verified, || format!("reported pair {a:?}, {b:?} is not a violation"))?;
            Ok(format!("antilex passes (6, 4); lex-paper fails at {a:?} vs {b:?}"))
        }
        ConsistencyScan::Pass => Err("lex-paper passed".into()),
    }
}

fn small_networks() -> Result<Vec<LeafLabeledNetwork>, String> {
    enumerate_networks(&EnumerationBounds::new(6, 2)).map_err(|e| e.to_string())
}

/// Labelability predicts injectivity of the computed labeling.
fn labelable(population: &[LeafLabeledNetwork]) -> Outcome {
    let mut labelable = 0usize;
    for n in population {
        let predicted = is_labelable(n);
        let outcomes: Vec<bool> = MultisetOrdering::ALL
            .iter()
            .map(|o| compute_full_labeling(n, o).labeled.is_injective())
            .collect();
        ensure(outcomes.iter().all(|&x| x == predicted), || {
            format!("labelable={predicted}, injective per ordering {outcomes:?} on\n{}", format::write_leaf_labeled(n))
        })?;
        labelable += usize::from(predicted);
    }
    Ok(format!("{} networks, {labelable} labelable", population.len()))
}

/// Stability from the definition agrees with labelability.
fn stable(population: &[LeafLabeledNetwork]) -> Outcome {
    for o in MultisetOrdering::ALL {
        for n in population {
            let by_definition = is_stable_by_definition(n, &o).map_err(|e| e.to_string())?;
            ensure(by_definition == is_labelable(n), || {
                format!("{o}: stable={by_definition} on\n{}", format::write_leaf_labeled(n))
            })?;
        }
    }
    Ok(format!("{} networks x 3 orderings", population.len()))
}

/// Expanding covers with `n_C = n` and `m <= max_m`, counted directly from
/// the axioms.
///
/// Sets are bitmasks over `[m]`. Listing a family in increasing mask order,
/// the nesting axiom says the `i`-th mask is below `2^(n+i-1)`.
fn count_covers(n: u32, max_m: u32) -> usize {
    fn extend(masks: &mut Vec<u32>, c: usize, n: u32, m: u32, count: &mut usize) {
        let i = masks.len();
        if i == c {
            let union = masks.iter().fold(0, |acc, s| acc | s);
            let low_unique = (0..n).all(|x| masks.iter().filter(|&&s| s & (1 << x) != 0).count() == 1);
            if union == (1 << m) - 1 && low_unique {
                *count += 1;
            }
            return;
        }
        let start = masks.last().map_or(1, |&s| s + 1);
        let bound = 1u32 << (n + i as u32);
        for s in start..bound.min(1 << m) {
            masks.push(s);
            extend(masks, c, n, m, count);
            masks.pop();
        }
    }
    let mut count = 0;
    for m in n..=max_m {
        let c = (m - n + 1) as usize;
        extend(&mut Vec::new(), c, n, m, &mut count);
    }
    count
}

struct Bijection {
    partitions: Vec<MultisetPartition>,
    summary: String,
}

fn bijection() -> Result<Bijection, String> {
    let o = MultisetOrdering::AntiLex;
    let mut partitions = Vec::new();
    let mut summary = Vec::new();
    for n in 1..=3u32 {
        let population = enumerate_networks(&EnumerationBounds::new(7, n).phylogenetic()).map_err(|e| e.to_string())?;
        let stable: Vec<_> =
            population.into_iter().filter(|x| x.leaf_multiset().len() == n as usize && is_labelable(x)).collect();
        let mut images = BTreeSet::new();
        let mut covers = BTreeSet::new();
        for net in &stable {
            let p = network_to_partition(net, &o).map_err(|e| e.to_string())?;
            ensure(is_expanding_partition(&p, &o), || format!("image is not expanding:\n{p}"))?;
            let back = partition_to_network(&p, &o).map_err(|e| e.to_string())?;
            ensure(is_isomorphic(&back, net), || format!("network round trip fails for\n{p}"))?;
            ensure(network_to_partition(&back, &o).as_ref() == Ok(&p), || format!("partition round trip fails for\n{p}"))?;
            let cover = partition_to_cover(&p).map_err(|e| e.to_string())?;
            ensure(cover.is_expanding(), || format!("cover is not expanding:\n{cover}"))?;
            covers.insert(cover.to_string());
            images.insert(p);
        }
        let oracle = count_covers(n, 6);
        ensure(stable.len() == images.len() && images.len() == covers.len() && covers.len() == oracle, || {
            format!("n={n}: {} networks, {} partitions, {} covers, {oracle} covers by direct count", stable.len(), images.len(), covers.len())
        })?;
        summary.push(format!("n={n}: {oracle}"));
        partitions.extend(images);
    }
    Ok(Bijection { partitions, summary: summary.join(", ") })
}

fn class_cross_checks(partitions: &[MultisetPartition]) -> Outcome {
    let o = MultisetOrdering::AntiLex;
    for p in partitions {
        let net = partition_to_network(p, &o).map_err(|e| e.to_string())?;
        let nd = check_non_degenerate_partition(p, &o).map_err(|e| e.to_string())?;
        let tc = check_tree_child_partition(p, &o).map_err(|e| e.to_string())?;
        ensure(nd == is_non_degenerate(&net), || format!("non-degeneracy disagrees on\n{p}"))?;
        ensure(tc == is_tree_child(&net), || format!("tree-child disagrees on\n{p}"))?;
    }
    let n_ret = fixtures::network(fixtures::N_RET);
    let n_nd = fixtures::network(fixtures::N_ND);
    ensure(is_tree_child(&n_ret) && !is_non_degenerate(&n_ret), || "n_ret misclassified".into())?;
    ensure(is_tree_child(&n_nd) && is_non_degenerate(&n_nd), || "n_nd misclassified".into())?;
    let ret = fixtures::partition(fixtures::RET_PARTITION);
    let nd = fixtures::partition(fixtures::ND_PARTITION);
    let part = |p, f: fn(&MultisetPartition, &MultisetOrdering) -> Result<bool, ClassError>| f(p, &o).map_err(|e| e.to_string());
    ensure(part(&ret, check_tree_child_partition)? && !part(&ret, check_non_degenerate_partition)?, || "ret.part misclassified".into())?;
    ensure(part(&nd, check_tree_child_partition)? && part(&nd, check_non_degenerate_partition)?, || "nd.part misclassified".into())?;
    Ok(format!("{} expanding partitions; fixtures as expected", partitions.len()))
}

fn census_check() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    for n in 1..=5 {
        let trees = count_semi_labeled_trees(n).map_err(|e| e.to_string())?;
        let b = bell(n).map_err(|e| e.to_string())?;
        ensure(trees == b, || format!("n={n}: {trees} trees, bell {b}"))?;
        counts.push(trees);
    }
    ensure(counts == [1, 2, 5, 15, 52], || format!("counts {counts:?}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs() < 60, || format!("took {elapsed:?}"))?;
    Ok(format!("{counts:?} in {elapsed:.2?}"))
}

fn worked_example() -> Outcome {
    let a = fixtures::network(fixtures::T_FIG4A);
    let b = fixtures::network(fixtures::T_FIG4B);
    let enc = encode(&a, &MultisetOrdering::AntiLex).map_err(|e| e.to_string())?;
    ensure(enc.ground == Multiset::of(&[1, 1, 1, 2, 3]), || format!("P = {:?}", enc.ground))?;
    ensure(enc.partition == MultisetPartition::of(&[&[1, 2], &[1, 1, 3]]), || format!("partition\n{}", enc.partition))?;
    let n = n_value(&enc.ground, &enc.partition).map_err(|e| e.to_string())?;
    ensure(n == 2, || format!("n = {n}"))?;
    let m = leaf_multiset(&enc.ground, &enc.partition).map_err(|e| e.to_string())?;
    ensure(m == Multiset::of(&[1, 1, 1, 2]), || format!("M = {m:?}"))?;
    ensure(!is_isomorphic(&a, &b), || "fig4 trees are isomorphic".into())?;
    for o in MultisetOrdering::ALL {
        let (ea, eb) = (encode(&a, &o).map_err(|e| e.to_string())?, encode(&b, &o).map_err(|e| e.to_string())?);
        ensure(ea.ground == eb.ground && ea.partition == eb.partition, || format!("{o}: encodings differ"))?;
    }
    Ok("P, partition, n and M as expected; the two trees share (P, partition)".into())
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |index: usize, name: &str, start: Instant, outcome: Outcome| {
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {index} PASS {name} ({elapsed:.1?}): {detail}"),
            Err(reason) => {
                failures += 1;
                println!("criterion {index} FAIL {name} ({elapsed:.1?}): {reason}");
            }
        }
    };

    let t = Instant::now();
    report(1, "round-trip", t, round_trip());
    let t = Instant::now();
    report(2, "characterization", t, characterization());
    let t = Instant::now();
    report(3, "labeling-consistency", t, consistency());

    let t = Instant::now();
    match small_networks() {
        Ok(population) => {
            report(4, "labelable-iff-injective", t, labelable(&population));
            let t = Instant::now();
            report(5, "stable-iff-labelable", t, stable(&population));
        }
        Err(e) => {
            report(4, "labelable-iff-injective", t, Err(e.clone()));
            report(5, "stable-iff-labelable", t, Err(e));
        }
    }

    let t = Instant::now();
    match bijection() {
        Ok(b) => {
            report(6, "bijection-counts", t, Ok(b.summary));
            let t = Instant::now();
            report(7, "class-cross-checks", t, class_cross_checks(&b.partitions));
        }
        Err(e) => {
            report(6, "bijection-counts", t, Err(e));
            report(7, "class-cross-checks", Instant::now(), Err("no partitions from criterion 6".into()));
        }
    }

    let t = Instant::now();
    report(8, "census", t, census_check());
    let t = Instant::now();
    report(9, "worked-example", t, worked_example());

    if failures == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
