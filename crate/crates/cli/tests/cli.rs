use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const TREFOIL: &str = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]";

fn khtor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khtor"))
        .args(args)
        .output()
        .expect("run khtor")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn census_file(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let p = dir.path().join("census.tsv");
    fs::write(&p, text).unwrap();
    p
}

const SMALL: &str = "\
0_1\tunlink 1\tsignature=0 alternating=true
3_1\tX[1,5,2,4] X[3,1,4,6] X[5,3,6,2]\tsignature=-2 alternating=true
4_1\tX[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]\tsignature=0 alternating=true
";

#[test]
fn compute_trefoil_table() {
    let o = khtor(&["compute", TREFOIL, "--reduced"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("     7 |             [1]"), "{s}");
    assert!(s.contains("    ~2 |   1"), "{s}");
    assert!(s.contains("J    = q^2 + q^6 - q^8"), "{s}");
    assert!(s.contains("d    = 3"));
    assert!(s.contains("H-slim, T-thin"));
}

#[test]
fn compute_json_round_trips() {
    let o = khtor(&["compute", TREFOIL, "--json", "--mod", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["crossings"], 3);
    assert_eq!(v["mod_p"][0]["p"], 3);
    assert_eq!(v["classification"]["h_class"], "H-slim");
}

#[test]
fn classify_flags() {
    let o = khtor(&["classify", "unlink 1"]);
    let s = stdout(&o);
    assert!(s.contains("H-slim, T-thin (trivially)"), "{s}");
    assert!(s.contains("s = 0"));
}

#[test]
fn classify_from_census_name() {
    let dir = tempfile::tempdir().unwrap();
    let c = census_file(&dir, SMALL);
    let o = khtor(&["classify", "4_1", "--census", c.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("H-slim, T-thin\n"), "{}", stdout(&o));
    let o = khtor(&["classify", "5_1", "--census", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_pd_is_an_error() {
    let o = khtor(&["compute", "X[1,2,3,4]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let c = census_file(&dir, SMALL);
    let report = dir.path().join("report.csv");
    let o = khtor(&[
        "verify",
        c.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
        "--jobs",
        "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&report).unwrap();
    assert!(csv.starts_with("check,subject,passed,detail\n"));
    assert!(csv.contains("d_squared,3_1,true"));
    assert!(csv.contains("theorem_b,4_1,true"));
    assert!(csv.contains("conjecture_2_two_power_torsion,census,true"));
}

#[test]
fn verify_parse_errors_and_keep_going() {
    let dir = tempfile::tempdir().unwrap();
    let c = census_file(&dir, &format!("{SMALL}broken\tX[1,2,3]\n"));
    let o = khtor(&["verify", c.to_str().unwrap(), "--suite", "chain"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("parse,"));
    let o = khtor(&[
        "verify",
        c.to_str().unwrap(),
        "--suite",
        "chain",
        "--keep-going",
    ]);
    assert!(o.status.success());
}

#[test]
fn verify_unknown_suite() {
    let dir = tempfile::tempdir().unwrap();
    let c = census_file(&dir, SMALL);
    let o = khtor(&["verify", c.to_str().unwrap(), "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn batch_caches_and_indexes() {
    let dir = tempfile::tempdir().unwrap();
    let c = census_file(&dir, SMALL);
    let store = dir.path().join("store");
    let args = [
        "batch",
        c.to_str().unwrap(),
        "--store",
        store.to_str().unwrap(),
        "--reduced",
    ];
    let first = khtor(&args);
    assert!(first.status.success());
    assert!(
        stdout(&first).contains("computed 3, cached 0, failed 0"),
        "{}",
        stdout(&first)
    );
    let second = khtor(&args);
    assert!(
        stdout(&second).contains("computed 0, cached 3, failed 0"),
        "{}",
        stdout(&second)
    );
    // a request the cache does not cover is recomputed
    let third = khtor(&[
        "batch",
        c.to_str().unwrap(),
        "--store",
        store.to_str().unwrap(),
        "--mod",
        "3",
    ]);
    assert!(
        stdout(&third).contains("computed 3, cached 0"),
        "{}",
        stdout(&third)
    );
    let index = fs::read_to_string(store.join("index.csv")).unwrap();
    assert!(index.contains("3_1,3,H-slim,T-thin,4,2,3"), "{index}");
    // names are resolved through the store
    let o = khtor(&["classify", "3_1", "--store", store.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("H-slim, T-thin\n"), "{}", stdout(&o));
}
