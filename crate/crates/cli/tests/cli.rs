use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

fn subjectnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subjectnet"))
        .args(args)
        .output()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn report_prints_one_line_per_category() {
    let out = tempfile::tempdir().unwrap();
    let input = data("synthetic_corpus.csv");
    let o = subjectnet(&[
        "report",
        "--input",
        path_str(&input),
        "--out",
        path_str(out.path()),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let stdout = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("all   papers=100 "));
    assert!(lines[5].contains("d=13 l=11"));
    assert!(out.path().join("wm/mst.dot").is_file());
}

#[test]
fn category_subset_and_color_flag() {
    let out = tempfile::tempdir().unwrap();
    let input = data("synthetic_corpus.csv");
    let o = subjectnet(&[
        "mst",
        "--input",
        path_str(&input),
        "--out",
        path_str(out.path()),
        "--categories",
        "MExc,wexc",
        "--color-T",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);
    assert!(out.path().join("mexc").is_dir() && out.path().join("wexc").is_dir());
    assert!(!out.path().join("all").exists());
    let colors = fs::read_to_string(out.path().join("colors.json")).unwrap();
    assert!(colors.contains("\"multiplier\": 0.5"));
}

#[test]
fn validation_errors_exit_1() {
    let out = tempfile::tempdir().unwrap();
    let input = data("synthetic_corpus.csv");
    let bad_category = subjectnet(&[
        "stats",
        "--input",
        path_str(&input),
        "--out",
        path_str(out.path()),
        "--categories",
        "nobody",
    ]);
    assert_eq!(bad_category.status.code(), Some(1));

    let bad_t = subjectnet(&[
        "mst",
        "--input",
        path_str(&input),
        "--out",
        path_str(out.path()),
        "--color-T",
        "-1",
    ]);
    assert_eq!(bad_t.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_t.stderr).starts_with("error: "));

    assert_eq!(subjectnet(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(subjectnet(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_input_exits_2() {
    let out = tempfile::tempdir().unwrap();
    let o = subjectnet(&[
        "stats",
        "--input",
        "/nonexistent/corpus.csv",
        "--out",
        path_str(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fs::read_dir(out.path()).unwrap().count(), 0);
}

#[test]
fn ingest_writes_corpus_and_rejects() {
    let out = tempfile::tempdir().unwrap();
    let (input, lexicon) = (data("raw_sample.csv"), data("lexicon.csv"));
    let o = subjectnet(&[
        "ingest",
        "--input",
        path_str(&input),
        "--lexicon",
        path_str(&lexicon),
        "--out",
        path_str(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "ingested 8 records, rejected 2\n"
    );
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("r006") && stderr.contains("r007"));
    assert!(out.path().join("corpus.csv").is_file());
    assert!(out.path().join("rejects.csv").is_file());
}

#[test]
fn oracle_check_on_edge_lists() {
    let tmp = tempfile::tempdir().unwrap();
    let tied = tmp.path().join("tied.csv");
    fs::write(
        &tied,
        "subject_i,subject_j,weight\n1,2,1\n2,3,1\n1,3,1\n3,4,2\n",
    )
    .unwrap();
    let o = subjectnet(&["oracle-check", "--input", path_str(&tied)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().ends_with("PASS\n"));

    let split = tmp.path().join("split.csv");
    fs::write(&split, "subject_i,subject_j,weight\n1,2,1\n3,4,1\n").unwrap();
    let o = subjectnet(&["oracle-check", "--input", path_str(&split)]);
    assert_eq!(o.status.code(), Some(1));

    let garbage = tmp.path().join("garbage.csv");
    fs::write(&garbage, "subject_i,subject_j,weight\n1,1,3\n").unwrap();
    assert_eq!(
        subjectnet(&["oracle-check", "--input", path_str(&garbage)])
            .status
            .code(),
        Some(1)
    );
}
