use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use labelnet_cli::run;

fn fixture(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    dir.join(name).to_string_lossy().into_owned()
}

/// Runs the command line with `input` on stdin; returns (code, stdout, stderr).
fn labelnet(args: &[&str], input: &str) -> (i32, String, String) {
    let argv = std::iter::once("labelnet").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const TREES: [&str; 5] = ["t_cherry.net", "t_fig4a.net", "t_fig4b.net", "t_ret.net", "t_nd.net"];

#[test]
fn fig4_partition_is_tree_generated() {
    let (code, out, _) = labelnet(&["check", "tree-generated", "-i", &fixture("fig4.part"), "--order", "antilex"], "");
    assert_eq!((code, out.as_str()), (0, "true\n"));
}

#[test]
fn diamond_is_not_stable() {
    let (code, out, _) = labelnet(&["check", "stable", "-i", &fixture("diamond.net")], "");
    assert_eq!((code, out.as_str()), (1, "false\n"));
}

#[test]
fn semi_labeled_census() {
    assert_eq!(labelnet(&["census", "--semi-labeled", "4"], ""), (0, "15\n".into(), String::new()));
    assert_eq!(labelnet(&["census", "--bell", "5"], "").1, "52\n");
    assert_eq!(labelnet(&["census", "--semi-labeled", "9"], "").0, 2);
}

#[test]
fn encode_decode_encode_is_byte_identical() {
    for name in TREES {
        for order in ["antilex", "lex-paper", "lex-sorted"] {
            let (code, first, err) = labelnet(&["encode", "--order", order, "-i", &fixture(name)], "");
            assert_eq!(code, 0, "{name}: {err}");
            let (code, tree, err) = labelnet(&["decode", "--order", order], &first);
            assert_eq!(code, 0, "{name}: {err}");
            let (_, second, _) = labelnet(&["encode", "--order", order], &tree);
            assert_eq!(first, second, "{name} under {order}");
        }
    }
}

#[test]
fn labeling_output_is_a_fixed_point() {
    for name in ["t_fig4a.net", "n_ret.net", "n_nd.net", "diamond.net", "not_tree_child.net"] {
        let (code, once, _) = labelnet(&["label", "-i", &fixture(name)], "");
        assert_eq!(code, 0);
        let (_, twice, _) = labelnet(&["label"], &once);
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn fold_inverts_unfold_on_a_stable_network() {
    let (_, tree, _) = labelnet(&["unfold", "-i", &fixture("n_ret.net")], "");
    let (code, folded, err) = labelnet(&["fold"], &tree);
    assert_eq!(code, 0, "{err}");
    let (_, direct, _) = labelnet(&["to-network", "-i", &fixture("ret.part")], "");
    let (_, a, _) = labelnet(&["to-partition"], &folded);
    let (_, b, _) = labelnet(&["to-partition"], &direct);
    assert_eq!(a, b);
}

#[test]
fn conversions_close_the_triangle() {
    let part = std::fs::read_to_string(fixture("ret.part")).unwrap();
    let (_, net, _) = labelnet(&["to-network"], &part);
    let (_, cover, _) = labelnet(&["to-cover"], &net);
    assert_eq!(cover, "m=7\n1 5\n2 5\n3 4\n6 7\n");
    let (code, back, _) = labelnet(&["to-partition"], &cover);
    assert_eq!(code, 0);
    assert_eq!(back.parse::<labelnet::MultisetPartition>(), part.parse());
}

#[test]
fn class_checks_on_fixtures() {
    let cases = [
        ("tree-child", "n_ret.net", 0),
        ("non-degenerate", "n_ret.net", 1),
        ("tree-child", "n_nd.net", 0),
        ("non-degenerate", "n_nd.net", 0),
        ("tree-child", "not_tree_child.net", 1),
        ("phylogenetic", "shared_leaf.net", 1),
        ("tree", "t_ret.net", 0),
        ("tree", "n_ret.net", 1),
        ("labelable", "n_ret.net", 0),
        ("labelable", "diamond.net", 1),
        ("expanding-partition", "ret.part", 0),
        ("expanding-partition", "fig4.part", 1),
        ("tree-child", "ret.part", 0),
        ("non-degenerate", "ret.part", 1),
        ("non-degenerate", "nd.part", 0),
    ];
    for (predicate, file, expected) in cases {
        let (code, _, err) = labelnet(&["check", predicate, "-i", &fixture(file)], "");
        assert_eq!(code, expected, "{predicate} {file}: {err}");
    }
}

#[test]
fn cover_and_consistency_checks() {
    assert_eq!(labelnet(&["check", "expanding-cover"], "m=6\n3\n1 4\n2 4\n5 6\n").0, 0);
    let (code, out, _) = labelnet(&["check", "expanding-cover"], "m=2\n1\n1 2\n");
    assert_eq!(code, 1);
    assert!(out.starts_with("false: "));
    assert_eq!(labelnet(&["check", "labeling-consistent", "--max-label", "6", "--max-size", "4"], "").0, 0);
    let (code, out, _) = labelnet(&["check", "labeling-consistent", "--order", "lex-paper"], "");
    assert_eq!((code, out.as_str()), (1, "false: {1} is not below {2}\n"));
}

#[test]
fn bad_input_exits_with_two() {
    let (code, _, err) = labelnet(&["label"], "arc r a\nleaf a x\n");
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, err) = labelnet(&["decode"], "1 2\n1 1 x\n");
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(labelnet(&["decode"], "1\n1\n").0, 2);
    assert_eq!(labelnet(&["encode", "-i", &fixture("n_ret.net")], "").0, 2);
    assert_eq!(labelnet(&["to-network"], "1 1\n").0, 2);
    assert_eq!(labelnet(&["to-partition", "-i", &fixture("diamond.net")], "").0, 2);
    assert_eq!(labelnet(&["check", "stable", "-i", "/nonexistent/file.net"], "").0, 2);
    assert_eq!(labelnet(&["label", "--order", "random"], "").0, 2);
    assert_eq!(labelnet(&["frobnicate"], "").0, 2);
}

#[test]
fn help_exits_with_zero() {
    let (code, out, _) = labelnet(&["--help"], "");
    assert_eq!(code, 0);
    assert!(out.contains("census"));
}

#[test]
fn enumeration_output() {
    assert_eq!(labelnet(&["enumerate", "trees", "--max-vertices", "4", "--max-label", "1", "--count"], "").1, "8\n");
    assert_eq!(labelnet(&["enumerate", "partitions", "--ground", "1 1 2", "--count"], "").1, "4\n");
    let (_, listing, _) = labelnet(&["enumerate", "networks", "--max-vertices", "3", "--max-label", "1"], "");
    assert_eq!(listing.matches("# ").count(), 5);
    let (code, csv, _) = labelnet(&["census", "--max-vertices", "4", "--max-label", "1", "--predicate", "tree"], "");
    assert_eq!(code, 0);
    assert_eq!(csv.lines().nth(1), Some("4,1,false,false,false,tree,8"));
}

#[test]
fn output_file_and_binary_streaming() {
    let dir = std::env::temp_dir().join(format!("labelnet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig4.part");
    let out = path.to_string_lossy().into_owned();
    assert_eq!(labelnet(&["encode", "-i", &fixture("t_fig4a.net"), "-o", &out], "").0, 0);
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();

    let mut child = Command::new(env!("CARGO_BIN_EXE_labelnet"))
        .args(["encode", "-i", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let text = std::fs::read_to_string(fixture("t_fig4a.net")).unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let result = child.wait_with_output().unwrap();
    assert!(result.status.success());
    assert_eq!(String::from_utf8(result.stdout).unwrap(), written);
    assert!(written.ends_with("1 1 3\n1 2\n"));
}
