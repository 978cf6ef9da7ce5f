use std::process::{Command, Output};

use hyperqec::harness::read_csv;
use hyperqec::BoundaryOperatorSet;

fn hyperqec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperqec"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn generate_writes_loadable_operators() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ops.txt");
    let net = dir.path().join("net.txt");
    let o = hyperqec(&[
        "generate",
        "--preset",
        "max-happy",
        "--layers",
        "1",
        "--out",
        out.to_str().unwrap(),
        "--network",
        net.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ops = BoundaryOperatorSet::load(&out).unwrap();
    assert_eq!((ops.n, ops.k()), (25, 11));
    assert!(ops.validate().is_empty());
    let text = std::fs::read_to_string(net).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("tensor ")).count(), 11);
}

#[test]
fn check_reports_success() {
    let o = hyperqec(&["check", "--preset", "zero-steane", "--layers", "1", "--rule", "edge"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("n=49 k=1"));
}

#[test]
fn sweep_over_several_layers() {
    let dir = tempfile::tempdir().unwrap();
    let template = dir.path().join("r{R}.csv");
    let o = hyperqec(&[
        "sweep", "--preset", "max-happy", "--layers", "0,1", "--decoder", "erasure",
        "--trials", "20", "--p-step", "0.1", "--out", template.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for l in 0..2 {
        let r = read_csv(&dir.path().join(format!("r{l}.csv"))).unwrap();
        assert_eq!(r.rows.len(), 10);
        assert!(r.metadata.iter().any(|(k, v)| k == "layers" && *v == l.to_string()));
    }
}

#[test]
fn several_layers_need_a_placeholder() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = hyperqec(&[
        "sweep", "--preset", "max-happy", "--layers", "0,1", "--decoder", "erasure",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(!out.exists());
}

#[test]
fn rejects_bad_arguments() {
    assert!(!hyperqec(&["check", "--preset", "nope"]).status.success());
    let o = hyperqec(&[
        "sweep", "--preset", "max-happy", "--decoder", "intopt", "--rx", "0.9", "--rz", "0.9",
        "--out", "/dev/null",
    ]);
    assert!(!o.status.success());
}

#[test]
fn timestamp_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let args = [
        "sweep", "--preset", "zero-happy", "--decoder", "tn", "--trials", "5",
        "--p-start", "0.1", "--p-end", "0.1", "--out", out.to_str().unwrap(),
    ];
    assert!(hyperqec(&args).status.success());
    assert!(!std::fs::read_to_string(&out).unwrap().contains("timestamp"));
    let mut with = args.to_vec();
    with.push("--timestamp");
    assert!(hyperqec(&with).status.success());
    assert!(std::fs::read_to_string(&out).unwrap().contains("# timestamp="));
}
