mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use satprep::dimacs::{parse_dimacs, parse_model};
use satprep::oracle::check_model;

use common::fixture;

fn satprep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satprep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const WORKED_MAP: &str = "original variables\n4\nno table\nee table\n1 2 0\npostprocess stack\n\
ee\nve 3 3\n1 3 0\n-1 -3 0\n-3 4 0\nbce 1\n1 4 0\nbce -1\n-1 -4 0\n";

#[test]
fn preprocess_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.out.cnf");
    let map = dir.path().join("w.map");
    let input = fixture("worked.cnf");
    let r = satprep(&[
        "preprocess",
        p(&input),
        "--out",
        p(&out),
        "--map",
        p(&map),
        "--enable",
        "ee,ve,bce",
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    assert_eq!(fs::read_to_string(&out).unwrap(), "p cnf 0 0\n");
    assert_eq!(fs::read_to_string(&map).unwrap(), WORKED_MAP);
}

#[test]
fn compress_with_whitelist_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let wl = dir.path().join("wl.txt");
    fs::write(&wl, "1 2\n").unwrap();
    let input = fixture("worked.cnf");
    let r = satprep(&["preprocess", p(&input), "--compress", "--whitelist", p(&wl)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("whitelist"));
}

#[test]
fn unsatisfiable_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.cnf");
    let map = dir.path().join("u.map");
    let input = fixture("unsat.cnf");
    let r = satprep(&["preprocess", p(&input), "--out", p(&out), "--map", p(&map)]);
    assert_eq!(r.status.code(), Some(20));
    assert_eq!(fs::read_to_string(&out).unwrap(), "p cnf 0 1\n0\n");
    assert!(map.exists());
}

#[test]
fn missing_input_file() {
    let r = satprep(&["preprocess", "/nonexistent/input.cnf"]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn extend_golden_map_with_empty_model() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("w.map");
    let model = dir.path().join("model.txt");
    fs::write(&map, WORKED_MAP).unwrap();
    fs::write(&model, "s SATISFIABLE\nv 0\n").unwrap();
    let r = satprep(&["extend", "--map", p(&map), "--model", p(&model)]);
    assert_eq!(r.status.code(), Some(0));
    let extended = parse_model(&String::from_utf8(r.stdout).unwrap()).unwrap();
    let (original, _) = parse_dimacs(&fs::read_to_string(fixture("worked.cnf")).unwrap())
        .unwrap()
        .to_formula();
    assert!(check_model(&original, &extended));
}

#[test]
fn extend_with_identity_map() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("id.map");
    let model = dir.path().join("model.txt");
    let out = dir.path().join("extended.txt");
    fs::write(
        &map,
        "original variables\n2\nno table\nee table\npostprocess stack\n",
    )
    .unwrap();
    fs::write(&model, "v 1 -2 0\n").unwrap();
    let r = satprep(&[
        "extend",
        "--map",
        p(&map),
        "--model",
        p(&model),
        "--out",
        p(&out),
    ]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "v 1 -2 0\n");
}

#[test]
fn extend_truncated_map() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("t.map");
    let model = dir.path().join("model.txt");
    fs::write(&map, "original variables\n4\nno table\nee table\n1 2 0\n").unwrap();
    fs::write(&model, "v 0\n").unwrap();
    let r = satprep(&["extend", "--map", p(&map), "--model", p(&model)]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("postprocess stack"));
}

#[test]
fn extend_sanity_failure() {
    // contradictory stored clauses cannot both be repaired
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("bad.map");
    let model = dir.path().join("model.txt");
    fs::write(
        &map,
        "original variables\n1\nno table\nee table\npostprocess stack\nve 1 2\n1 0\n-1 0\n",
    )
    .unwrap();
    fs::write(&model, "v 0\n").unwrap();
    let r = satprep(&["extend", "--map", p(&map), "--model", p(&model)]);
    assert_eq!(r.status.code(), Some(3));
}

#[test]
fn preprocess_then_extend_on_every_satisfiable_fixture() {
    for name in [
        "worked.cnf",
        "hte.cnf",
        "probe.cnf",
        "er.cnf",
        "random3sat.cnf",
        "equivalences.cnf",
    ] {
        for extra in [
            &[][..],
            &["--compress"][..],
            &["--enable", "er,ve,bce,ee", "--er-min", "2"][..],
        ] {
            let dir = tempfile::tempdir().unwrap();
            let out = dir.path().join("out.cnf");
            let map = dir.path().join("out.map");
            let input = fixture(name);
            let mut args = vec!["preprocess", p(&input), "--out", p(&out), "--map", p(&map)];
            args.extend_from_slice(extra);
            assert_eq!(satprep(&args).status.code(), Some(0), "{name} {extra:?}");

            let solved = satprep(&["oracle", p(&out)]);
            assert_eq!(solved.status.code(), Some(10), "{name} {extra:?}");
            let model = dir.path().join("model.txt");
            fs::write(&model, &solved.stdout).unwrap();

            let r = satprep(&["extend", "--map", p(&map), "--model", p(&model)]);
            assert_eq!(r.status.code(), Some(0), "{name} {extra:?}");
            let extended = parse_model(&String::from_utf8(r.stdout).unwrap()).unwrap();
            let (original, _) = parse_dimacs(&fs::read_to_string(&input).unwrap())
                .unwrap()
                .to_formula();
            assert!(check_model(&original, &extended), "{name} {extra:?}");
        }
    }
}

#[test]
fn stats_lines() {
    let input = fixture("worked.cnf");
    let r = satprep(&["stats", p(&input)]);
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("clauses 6 -> 0 (100.0%)\n"), "{text}");
    assert!(text.contains("variables 4 -> 0\n"), "{text}");

    // already normalized and nothing enabled
    let input = fixture("hte.cnf");
    let r = satprep(&[
        "stats",
        p(&input),
        "--enable",
        "subsume",
        "--disable",
        "subsume",
    ]);
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("clauses 3 -> 3 (0.0%)\n"), "{text}");

    let input = fixture("er.cnf");
    let r = satprep(&["stats", p(&input), "--enable", "er", "--er-defs", "1"]);
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("clauses 4 -> 7 (-75.0%)\n"), "{text}");
    assert!(text.contains("er.definitions 1\n"), "{text}");
}

#[test]
fn stats_is_deterministic() {
    let input = fixture("random3sat.cnf");
    let a = satprep(&["stats", p(&input)]);
    let b = satprep(&["stats", p(&input)]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oracle_exit_codes() {
    let r = satprep(&["oracle", p(&fixture("worked.cnf"))]);
    assert_eq!(r.status.code(), Some(10));
    assert_eq!(
        String::from_utf8(r.stdout).unwrap(),
        "s SATISFIABLE\nv 1 2 -3 -4 0\n"
    );

    let r = satprep(&["oracle", p(&fixture("unsat.cnf"))]);
    assert_eq!(r.status.code(), Some(20));

    let dir = tempfile::tempdir().unwrap();
    let wide = dir.path().join("wide.cnf");
    let clause: Vec<String> = (1..=40).map(|v| v.to_string()).collect();
    fs::write(&wide, format!("p cnf 40 1\n{} 0\n", clause.join(" "))).unwrap();
    let r = satprep(&["oracle", p(&wide)]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("limit"));
}

#[test]
fn unknown_technique_name() {
    let r = satprep(&["stats", p(&fixture("worked.cnf")), "--enable", "xor"]);
    assert_eq!(r.status.code(), Some(2));
}
