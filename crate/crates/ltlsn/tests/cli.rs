use std::path::PathBuf;

use ltlsn::run;

const FIG1: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/models/fig1.sn");
const FIG2: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/models/fig2.sn");

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn trace_figure_one() {
    let r = run(["trace", FIG1]);
    assert_eq!(r.exit_code, 0);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[4], "4: {a,b,c,d,e,f}");
    assert_eq!(lines[5], "fixed point at i=4");
}

#[test]
fn check_exit_codes() {
    let r = run(["check", FIG2, "G !B(d)"]);
    assert_eq!((r.exit_code, r.stdout.as_str()), (0, "S = {0,1} (+tail)\nholds at 0: yes\n"));
    let r = run(["check", FIG1, "G !B(d)"]);
    assert_eq!((r.exit_code, r.stdout.as_str()), (1, "S = {}\nholds at 0: no\n"));
    let r = run(["check", FIG1, "B(c)"]);
    assert_eq!(r.stdout, "S = {1,2,3,4} (+tail)\nholds at 0: no\n");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(run(Vec::<String>::new()).exit_code, 2);
    assert_eq!(run(["frobnicate"]).exit_code, 2);
    assert_eq!(run(["check", FIG1]).exit_code, 2);
    let r = run(["check", FIG1, "B(a) &"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("formula"), "{}", r.stderr);
    assert_eq!(run(["check", FIG1, "B(zz)"]).exit_code, 2);
    assert_eq!(run(["trace", "/nonexistent/model.sn"]).exit_code, 2);
    let bad = scratch("syntax.sn", "agents a b\ntheta 1/2\nlink a b\n");
    let r = run(["trace", &bad]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("line 3, column 1"), "{}", r.stderr);
    assert_eq!(run(["--help"]).exit_code, 0);
}

#[test]
fn invalid_models_exit_3() {
    let isolated = scratch("isolated.sn", "agents a b g\ntheta 1/2\nedge a b\ninitial a\n");
    let r = run(["trace", &isolated]);
    assert_eq!(r.exit_code, 3);
    assert!(r.stderr.contains("`g`"), "{}", r.stderr);
    let r = run(["validate", &isolated]);
    assert_eq!(r.exit_code, 3);
    assert!(r.stdout.contains("seriality: violated by seriality(g)"), "{}", r.stdout);
    assert!(r.stdout.ends_with("invalid\n"));

    let looped = scratch("loop.sn", "agents a b\ntheta 1/2\nedge a b\nedge b b\n");
    assert_eq!(run(["check", &looped, "B(a)"]).exit_code, 3);
    assert!(run(["validate", &looped]).stdout.contains("irreflexivity: violated by irreflexivity(b)"));
    let range = scratch("range.sn", "agents a b\ntheta 2\nedge a b\n");
    assert_eq!(run(["trace", &range]).exit_code, 3);
}

#[test]
fn validate_reports_axioms() {
    let r = run(["validate", FIG2]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(
        r.stdout,
        "agents: 6\nedges: 9\ntheta: >= 1/3\ninitial: {a}\nirreflexivity: ok\nsymmetry: ok\nseriality: ok\nvalid\n"
    );
}

#[test]
fn translate_outputs() {
    let r = run(["translate", FIG1, "X N(a,c)"]);
    assert_eq!((r.exit_code, r.stdout.as_str()), (0, "N(a,c)\n"));
    let r = run(["translate", FIG1, "X B(a)"]);
    assert_eq!(r.stdout, "!(!B(a) & !MAJ(a))\n");
    let r = run(["translate", FIG1, "X B(a)", "--expand-majority"]);
    assert_eq!(r.exit_code, 0);
    assert!(!r.stdout.contains("MAJ"));
    let r = run(["translate", FIG1, "X B(a)", "--expand-majority", "--guard", "3"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("limit of 3"), "{}", r.stderr);
    let r = run(["translate", FIG1, "B(a) U B(d)", "--stats"]);
    assert!(r.stdout.contains("#1 := "), "{}", r.stdout);
    assert!(r.stdout.contains("rewrites unchecked: 0"));
}

#[test]
fn xcheck_agrees_on_figures() {
    for (path, formula, code) in [
        (FIG1, "!(B(d)&B(e)&B(f)) U B(d)", 0),
        (FIG2, "!(B(d)&B(e)&B(f)) U B(d)", 1),
        (FIG1, "G (B(b) -> X B(d))", 0),
        (FIG2, "F (B(c) & X !B(e))", 0),
    ] {
        let r = run(["xcheck", path, formula]);
        assert_eq!(r.exit_code, code, "{formula}: {}", r.stdout);
        assert!(r.stdout.contains("engines agree"), "{}", r.stdout);
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(["translate", FIG2, "G (B(a) -> F B(e))"]);
    let b = run(["translate", FIG2, "G (B(a) -> F B(e))"]);
    assert_eq!(a, b);
}
