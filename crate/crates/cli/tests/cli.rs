use std::fs::{self, OpenOptions};
use std::path::Path;
use std::process::{Command, Output};

use kronpoly::{KronSet, PolytopeV};
use kronpoly_cli::cache::CacheFile;

fn kronpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kronpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn coeff_examples_and_exit_codes() {
    assert_eq!(stdout(&kronpoly(&["coeff", "2,1", "2,1", "2,1"])), "1\n");
    assert_eq!(stdout(&kronpoly(&["coeff", "1,1", "1,1", "1,1"])), "0\n");
    let mismatch = kronpoly(&["coeff", "2", "2,1", "2,1"]);
    assert_eq!(mismatch.status.code(), Some(2));
    assert_eq!(stderr(&mismatch).lines().count(), 1);
    assert_eq!(kronpoly(&["coeff", "1,2", "2,1", "2,1"]).status.code(), Some(2));
    assert_eq!(kronpoly(&["coeff", "a", "1", "1"]).status.code(), Some(2));
}

#[test]
fn enumerate_counts() {
    for (k, expected) in [(0, 0), (1, 1), (2, 4)] {
        let out = kronpoly(&["enumerate", "--k", &k.to_string()]);
        let set = KronSet::from_json(&stdout(&out)).unwrap();
        assert_eq!(set.len(), expected);
        assert!(stderr(&out).contains(&format!("triples: {expected}")));
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let out = kronpoly(&["enumerate", "--k", "1", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn polytope_small_cases() {
    let one = PolytopeV::from_json(&stdout(&kronpoly(&["polytope", "--max-boxes", "1"]))).unwrap();
    assert_eq!(one.len(), 1);
    let out = kronpoly(&["polytope", "--max-boxes", "2"]);
    let two = PolytopeV::from_json(&stdout(&out)).unwrap();
    // (1),(1),(1) plus the three sign-type k = 2 triples; (2),(2),(2) normalizes onto (1),(1),(1)
    assert_eq!(two.len(), 4);
    assert!(stderr(&out).contains("vertices: 4"));
    assert_eq!(kronpoly(&["polytope", "--max-boxes", "0"]).status.code(), Some(2));
}

#[test]
fn sample_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let hull = dir.path().join("hull.json");
    stdout(&kronpoly(&["polytope", "--max-boxes", "2", "--out", path(&hull)]));

    let out = kronpoly(&["sample", "--trials", "0", "--hull", path(&hull)]);
    let csv = stdout(&out);
    assert_eq!(csv.lines().count(), 1);
    assert!(csv.starts_with("id,seed,rA_1,rA_2,rB_1,rB_2,rAB_1"));
    assert!(stderr(&out).contains("max hull distance: 0,"));

    let out = kronpoly(&["sample", "--trials", "0", "--fixture", "max-entangled", "--hull", path(&hull)]);
    let csv = stdout(&out);
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("max-entangled,,0.5,0.5,0.5,0.5,1,0,0,0"), "{row}");
    assert!(row.ends_with(",0"));

    let out = kronpoly(&["sample", "--trials", "5", "--m", "2", "--n", "3", "--hull", path(&hull)]);
    assert_eq!(out.status.code(), Some(4));
    let out = kronpoly(&["sample", "--trials", "5", "--hull", path(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn estimate_tables() {
    let table = stdout(&kronpoly(&["estimate", "1,0", "--k-max", "8"]));
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 8);
    for row in rows {
        assert_eq!(row.split(',').nth(3), Some("0"), "{row}");
    }
    let out = kronpoly(&["estimate", "0.3,0.7", "--k-max", "64"]);
    assert!(stdout(&out).lines().skip(1).all(|r| r.ends_with("true")));
    assert!(stderr(&out).contains("fitted c:"));
    assert_eq!(kronpoly(&["estimate", "0.7,0.2"]).status.code(), Some(2));
    assert_eq!(kronpoly(&["estimate", "0.7,x"]).status.code(), Some(2));
}

#[test]
fn generators_examples() {
    let one = KronSet::from_json(&stdout(&kronpoly(&["generators", "--max-boxes", "1"]))).unwrap();
    assert_eq!(one.len(), 1);
    let two = KronSet::from_json(&stdout(&kronpoly(&["generators", "--max-boxes", "2"]))).unwrap();
    for (mu, nu, lambda) in [("2", "1,1", "1,1"), ("1,1", "2", "1,1"), ("1,1", "1,1", "2")] {
        assert!(two
            .triples
            .iter()
            .any(|t| (t.mu.to_string(), t.nu.to_string(), t.lambda.to_string()) == (mu.into(), nu.into(), lambda.into())));
    }
    let at8 = KronSet::from_json(&stdout(&kronpoly(&["generators", "--max-boxes", "8"]))).unwrap();
    let at12 = KronSet::from_json(&stdout(&kronpoly(&["generators", "--max-boxes", "12"]))).unwrap();
    for t in &at8.triples {
        assert!(at12.triples.contains(t), "{t} not indecomposable at K=12");
    }
}

#[test]
fn check_suites_pass() {
    let out = kronpoly(&["check", "--max-boxes", "6", "--trials", "200"]);
    let text = stdout(&out);
    for suite in ["semigroup", "stability", "entropy", "estimation-bound", "normalization", "pinsker"] {
        let line = text.lines().find(|l| l.starts_with(suite)).unwrap();
        assert!(line.ends_with(" 0 violations"), "{line}");
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    stdout(&kronpoly(&["--cache", path(&cache), "enumerate", "--k", "4"]));
    let saved = CacheFile::read(&cache).unwrap();
    assert!(!saved.kron_entries.is_empty());
    assert!(!saved.character_entries.is_empty());
    saved.spot_check(usize::MAX, 1).unwrap();

    // reloading and querying reproduces every cached coefficient
    for (key, &g) in saved.kron_entries.iter().take(40) {
        let parts: Vec<&str> = key.split('|').collect();
        let out = kronpoly(&["--cache", path(&cache), "coeff", parts[0], parts[1], parts[2]]);
        assert_eq!(stdout(&out), format!("{g}\n"));
    }
    let reloaded = CacheFile::read(&cache).unwrap();
    for (key, g) in &saved.kron_entries {
        assert_eq!(reloaded.kron_entries.get(key), Some(g));
    }
}

#[test]
fn corrupted_cache_is_a_consistency_error() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    stdout(&kronpoly(&["--cache", path(&cache), "coeff", "2,1", "2,1", "2,1"]));
    let mut file = CacheFile::read(&cache).unwrap();
    file.kron_entries.insert("2,1|2,1|2,1".into(), 7);
    file.write(&cache).unwrap();
    let out = kronpoly(&["--cache", path(&cache), "coeff", "2", "2", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr(&out).lines().count(), 1);
}

#[test]
fn locked_cache_falls_back_to_no_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let lock = OpenOptions::new()
        .create(true)
        .truncate(false)
        .write(true)
        .open(dir.path().join("cache.json.lock"))
        .unwrap();
    lock.lock().unwrap();
    let out = kronpoly(&["--cache", path(&cache), "coeff", "2,1", "2,1", "2,1"]);
    assert_eq!(stdout(&out), "1\n");
    assert!(stderr(&out).contains("running without cache"));
    assert!(!cache.exists());
    lock.unlock().unwrap();
    stdout(&kronpoly(&["--cache", path(&cache), "coeff", "2,1", "2,1", "2,1"]));
    assert!(fs::metadata(&cache).is_ok());
}

#[test]
fn tolerance_overrides_are_validated() {
    assert_eq!(kronpoly(&["--tol-hull", "0", "coeff", "1", "1", "1"]).status.code(), Some(2));
    assert_eq!(kronpoly(&["--threads", "0", "coeff", "1", "1", "1"]).status.code(), Some(2));
}
