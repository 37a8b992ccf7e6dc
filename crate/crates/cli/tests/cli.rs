use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const R0: &str = "% 5 4\n1 2\n1 5\n2 1\n2 4\n3 1\n3 3\n3 5\n4 5\n";

fn binrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binrel")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build(dir: &TempDir, input: &Path, repr: &str) -> PathBuf {
    let out = dir.path().join(format!("{repr}.brel"));
    let o = binrel(&["build", s(input), "--repr", repr, "-o", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn build_reports_dimensions() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r0.txt", R0);
    let out = dir.path().join("wt.brel");
    let o = binrel(&["build", s(&input), "--repr", "wt", "-o", s(&out)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "repr=wt n=5 sigma=4 t=8 payload_bits=29\n");
    let o = binrel(&["stats", s(&out)]);
    assert!(stdout(&o).contains("\nt=8\n"));
}

#[test]
fn build_accepts_a_header_only_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "empty.txt", "% 5 4\n");
    let out = build(&dir, &input, "brwt");
    let o = binrel(&["query", s(&out), "rel_num", "1", "4", "1", "5"]);
    assert_eq!(stdout(&o), "0\n");
    let o = binrel(&["stats", s(&input)]);
    assert!(stdout(&o).contains("entropy_bits=0.0000\n"));
}

#[test]
fn build_rejects_bad_lines_and_misplaced_arity() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.txt", "1 1\n0 3\n");
    let o = binrel(&["build", s(&input), "--repr", "wt", "-o", s(&dir.path().join("x"))]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let input = write(&dir, "r0.txt", R0);
    let o = binrel(&["build", s(&input), "--repr", "wt", "--arity", "4", "-o", s(&dir.path().join("x"))]);
    assert!(!o.status.success());
}

#[test]
fn query_prints_counts_pairs_and_none() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r0.txt", R0);
    let wt = build(&dir, &input, "wt");
    assert_eq!(stdout(&binrel(&["query", s(&wt), "rel_num", "2", "3", "1", "3"])), "3\n");
    assert_eq!(stdout(&binrel(&["query", s(&wt), "rel_sel_lab_fst", "1", "9", "1", "5"])), "none\n");
    let o = binrel(&["query", s(&wt), "rel_acc", "1", "4", "4", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
    let o = binrel(&["query", s(&wt), "no_such_op", "1"]);
    assert!(!o.status.success());
}

#[test]
fn query_output_is_identical_across_representations() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r0.txt", R0);
    let script: &[&[&str]] = &[
        &["rel_acc", "1", "4", "1", "5"],
        &["rel_num", "2", "3", "1", "3"],
        &["rel_min_lab_fst", "2", "1", "5", "3"],
        &["rel_min_obj_fst", "2", "3", "3", "1"],
        &["rel_sel_obj_fst", "1", "4", "1", "3"],
        &["lab_acc", "1", "4", "3", "5"],
        &["obj_sel_one", "3", "2", "2"],
    ];
    let outputs: Vec<String> = ["str", "wt", "gwt", "brwt"]
        .iter()
        .map(|repr| {
            let file = build(&dir, &input, repr);
            script
                .iter()
                .map(|q| {
                    let mut args = vec!["query", s(&file)];
                    args.extend_from_slice(q);
                    stdout(&binrel(&args))
                })
                .collect()
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{outputs:?}");
    assert!(outputs[0].starts_with("1 2\n1 5\n2 1\n"));
}

#[test]
fn verify_passes_and_catches_a_wrong_structure() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r0.txt", R0);
    let o = binrel(&["verify", s(&input), "--rounds", "10", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("brwt: 270 queries passed"));
    let o = binrel(&["verify", s(&input), "--rounds", "0"]);
    assert!(o.status.success());

    let other = write(&dir, "other.txt", "% 5 4\n1 2\n1 5\n2 1\n2 4\n3 1\n3 3\n3 5\n");
    let wrong = build(&dir, &other, "gwt");
    let o = binrel(&["verify", s(&input), "--structure", s(&wrong), "--rounds", "50"]);
    assert!(!o.status.success());
    let text = stdout(&o);
    assert!(text.contains("repro: "), "{text}");
    assert!(text.contains("pairs=1:2,1:5,2:1,2:4,3:1,3:3,3:5,4:5"));
}

#[test]
fn stats_include_the_bound_line() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r0.txt", R0);
    let o = binrel(&["stats", s(&input)]);
    let text = stdout(&o);
    assert!(text.contains("16.94"));
    assert!(text.contains("brwt ideal"));
    assert!(text.contains("brwt_bound_holds=true"));
    assert!(text.contains("payload_bits.wt=29"));
}

#[test]
fn bench_visit_counts_follow_the_tree_height() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("% 64 256\n");
    for a in 1..=256 {
        for x in 1..=64 {
            if (a * 7 + x * 13) % 5 == 0 {
                text.push_str(&format!("{a} {x}\n"));
            }
        }
    }
    let input = write(&dir, "big.txt", &text);
    let max_visits = |file: &Path| {
        let o = binrel(&["bench", s(file), "rel_rnk", "--count", "500"]);
        let out = stdout(&o);
        let field = out.split_whitespace().find(|f| f.starts_with("max_visits=")).unwrap();
        field["max_visits=".len()..].parse::<u64>().unwrap()
    };
    assert!(max_visits(&build(&dir, &input, "wt")) <= 9);
    let gwt = dir.path().join("gwt16.brel");
    let o = binrel(&["build", s(&input), "--repr", "gwt", "--arity", "16", "-o", s(&gwt)]);
    assert!(o.status.success());
    assert!(max_visits(&gwt) <= 3);
    let o = binrel(&["bench", s(&gwt), "rel_rnk", "--count", "0"]);
    assert_eq!(stdout(&o), "op=rel_rnk queries=0\n");
}
