use std::process::{Command, Output};

fn pmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmc-verify")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_f_at_quarter_pi() {
    let o = pmc(&["eval", "F", "--at", "alpha=pi/4,a=0,rho=1,b=1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("exact: 15/8"), "{out}");
    assert!(out.contains("float: 1.875"), "{out}");
}

#[test]
fn diff_and_pshow() {
    let o = pmc(&["diff", "a^2*abar", "--wrt", "a"]);
    assert_eq!(stdout(&o).trim(), "2*a*abar");
    let o = pmc(&["diff", "sin(alpha)", "--wrt", "alpha"]);
    assert_eq!(stdout(&o).trim(), "cos(alpha)");
    let o = pmc(&["pshow", "p3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sin(alpha)"));
    assert!(pmc(&["pshow", "p23"]).status.success());
}

#[test]
fn errors_map_to_exit_codes() {
    assert_eq!(pmc(&["pshow", "p99"]).status.code(), Some(2));
    assert_eq!(pmc(&["eval", "a +"]).status.code(), Some(2));
    assert_eq!(pmc(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(pmc(&["verify", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(pmc(&["diff", "a", "--wrt", "rho"]).status.code(), Some(2));
}

#[test]
fn verify_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = pmc(&["verify", "--suite", "static", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("IDS39"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["version", "config", "results", "summary"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn roots_and_ode() {
    let o = pmc(&["roots", "--at", "alpha=pi/4,rho=1,b=1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("root ")).count(), 3, "{out}");
    assert!(out.contains("coefficients real: true"));
    let o = pmc(&["ode", "--at", "alpha=pi/4", "--to", "1.0", "--step", "0.1"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().filter(|l| !l.starts_with('#')).count() > 2);
}
