use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genusforge"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("GENUSFORGE_CACHE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn expand_table_one_certifies_k12() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["expand-index4", "--table", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("genus=6\n"));
    let cert = std::fs::read_to_string(dir.path().join("k12.cert")).unwrap();
    let rsf = std::fs::read_to_string(dir.path().join("k12.rsf")).unwrap();
    let hash = cert.lines().find_map(|l| l.strip_prefix("hash=")).unwrap();
    assert_eq!(rsf.lines().next().unwrap(), format!("# hash={hash}"));
}

#[test]
fn family_s3_with_surgery_writes_k36() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["family", "--s", "3", "--surgery"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("genus=88\n"));
    let rsf = dir.path().join("k36.rsf");
    assert!(rsf.exists() && dir.path().join("k36.cert").exists() && dir.path().join("k36.plan").exists());

    // the written triangulation verifies on its own
    let o = run(dir.path(), &["verify-triangulation", rsf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    // and a second run produces byte-identical artifacts
    let first = std::fs::read(&rsf).unwrap();
    let again = tempfile::tempdir().unwrap();
    assert_eq!(run(again.path(), &["family", "--s", "3", "--surgery"]).status.code(), Some(0));
    assert_eq!(std::fs::read(again.path().join("k36.rsf")).unwrap(), first);
}

#[test]
fn truncated_rsf_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["expand-index4", "--table", "2"]).status.code(), Some(0));
    let full = std::fs::read_to_string(dir.path().join("k24.rsf")).unwrap();
    let cut: String = full.lines().take(5).map(|l| format!("{l}\n")).collect();
    let path = dir.path().join("cut.rsf");
    std::fs::write(&path, cut).unwrap();
    assert_eq!(run(dir.path(), &["verify-triangulation", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn non_triangulation_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.rsf");
    std::fs::write(&path, "rsf n=4 letters=\n0. 1 3\n1. 2 0\n2. 3 1\n3. 0 2\n").unwrap();
    assert_eq!(run(dir.path(), &["verify-triangulation", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn tiny_budget_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["surgery", "--s", "3", "--budget-states", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["family"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["expand-index4", "--table", "7"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["no-such-command"]).status.code(), Some(2));
}

#[test]
fn log_file_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("s3.log");
    std::fs::write(&good, "# s = 3\n3 x 1 y 31 z 29 24 20 2 21 25 15 6 16 22 7 28 8 5 23 17 10 26 9 14 12 4 11 13 w 19 30 18 27\n").unwrap();
    let o = run(dir.path(), &["verify-log", "--file", good.to_str().unwrap(), "--n", "32"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[16 6 15] Reversed"));
    let o = run(dir.path(), &["reconstruct", "--file", good.to_str().unwrap(), "--n", "32"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("current_graph.cgf").exists());

    let bad = dir.path().join("bad.log");
    std::fs::write(&bad, "3 x 1 y 31 z 3\n").unwrap();
    let o = run(dir.path(), &["verify-log", "--file", bad.to_str().unwrap(), "--n", "32"]);
    assert_eq!(o.status.code(), Some(2));
}
