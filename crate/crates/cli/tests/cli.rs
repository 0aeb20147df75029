use std::process::{Command, Output};

fn galaxies(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galaxies")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit status")
}

#[test]
fn distances_from_builtins() {
    let o = galaxies(&["dist", "--builtin=grounded_ladder", "x(0)", "x(5)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "2"));
    let o = galaxies(&["wdist", "--builtin=ladder_of_endless_paths", "n1(0)", "n1(7)"]);
    assert_eq!(code(&o), 0);
    let d: galaxies_core::Ordinal = stdout(&o).parse().unwrap();
    assert!(d <= galaxies_core::Ordinal::omega_times(4));
    let o = galaxies(&["wdist", "--builtin=diamond_chain", "--solver", "--json", "a(0,0)", "a(2,0)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dist"], "w*4");
}

#[test]
fn exported_builtins_answer_like_the_originals() {
    let dir = tempfile::tempdir().unwrap();
    let queries: &[(&str, &str, &str, &str)] = &[
        ("grounded_ladder", "dist", "x(3)", "g"),
        ("ladder_with_tail", "dist", "t(4)", "x(2)"),
        ("grid2d", "dist", "grid(1,-2)", "grid(-3,5)"),
        ("endless_path", "dist", "x(-4)", "x(9)"),
        ("endless_1path", "wdist", "e(0,3)", "p(4)"),
        ("ladder_of_endless_paths", "wdist", "h(1,2)", "v(3,0)"),
        ("ladder_mixed", "wdist", "h(2,0)", "g"),
        ("diamond_chain", "wdist", "a(0,0)", "x1(3)"),
    ];
    for (name, cmd, x, y) in queries {
        let path = dir.path().join(format!("{name}.json"));
        let p = path.to_str().unwrap();
        let e = galaxies(&["export-builtin", name, "--out", p]);
        assert_eq!(code(&e), 0, "{name}");
        let a = galaxies(&[cmd, &format!("--builtin={name}"), x, y]);
        let b = galaxies(&[cmd, &format!("--graph={p}"), x, y]);
        assert_eq!(code(&a), 0, "{name}");
        assert_eq!(stdout(&a), stdout(&b), "{name}");
        // a second export from the file form is identical
        let again = galaxies(&["export-builtin", name]);
        let j1: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
        let j2: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(j1, j2, "{name}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&galaxies(&["dist", "--builtin=nope", "a", "b"])), 64);
    assert_eq!(code(&galaxies(&["dist", "--builtin=grounded_ladder", "x(", "g"])), 64);
    assert_eq!(code(&galaxies(&["--no-such-flag"])), 64);
    assert_eq!(code(&galaxies(&["dist", "x(0)", "x(1)"])), 64);
    assert_eq!(code(&galaxies(&["dist", "--builtin=grounded_ladder", "y(0)", "g"])), 65);
    assert_eq!(code(&galaxies(&["wdist", "--builtin=grounded_ladder", "x(0)", "g"])), 65);
    // the base of a chain must be standard, and v must be far away
    assert_eq!(code(&galaxies(&["chain", "--builtin=one_ended_path", "seq(k=n)@x", "seq(k=n)@x"])), 65);
    assert_eq!(code(&galaxies(&["chain", "--builtin=grounded_ladder", "const(x(0))", "seq(k=n)@x"])), 65);
    assert_eq!(code(&galaxies(&["--help"])), 0);
}

#[test]
fn undetermined_verdicts_and_strict_mode() {
    // x(n) on even indices, x(0) on odd ones: within 0 of [x(n)] on the
    // evens, unboundedly far on the odds, so Frechet cannot decide
    let split = r#"{"prefix":[],"period":2,"tail":[
        {"family":"x","params":[{"slope":2,"intercept":0}]},
        {"family":"x","params":[{"slope":0,"intercept":0}]}]}"#;
    let args = ["classify", "--builtin=endless_path", "seq(k=n)@x", split];
    let loose = galaxies(&args);
    assert_eq!(code(&loose), 0);
    assert!(stdout(&loose).contains("undetermined"), "{}", stdout(&loose));
    let strict: Vec<&str> = args.iter().copied().chain(["--strict"]).collect();
    assert_eq!(code(&galaxies(&strict)), 2);
    // a residue oracle settles it
    let decided: Vec<&str> = args.iter().copied().chain(["--strict", "--oracle=residues=2:0"]).collect();
    let o = galaxies(&decided);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("galaxy 0: seq(k=n)@x"));
}

#[test]
fn chain_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = galaxies(&["chain", "--builtin=one_ended_path", "--depth=1", "--json", "const(x(0))", "seq(k=n)@x"]);
    assert_eq!(code(&o), 0);
    let path = dir.path().join("chain.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let r = galaxies(&["report", path.to_str().unwrap()]);
    assert_eq!(code(&r), 0);
    assert!(stdout(&r).contains("valid: true"));
    let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    v["adjacent"][0]["answer"] = "not_closer".into();
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(code(&galaxies(&["report", path.to_str().unwrap()])), 65);
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(code(&galaxies(&["report", path.to_str().unwrap()])), 64);
}

#[test]
fn verify_examples_all_pass() {
    let o = galaxies(&["verify-examples"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0, "{out}");
    assert!(!out.contains("FAIL"));
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
}
