use pmc_verify::verify::{exit_code, registry, run_suite, Mode, Report, ResultMode, Status, Suite, VerifyConfig};

fn cfg(suite: Suite, mode: Mode, samples: usize, seed: u64) -> VerifyConfig {
    VerifyConfig {
        suite,
        mode,
        samples,
        seed,
        ..VerifyConfig::default()
    }
}

fn status(r: &Report, id: &str) -> Status {
    r.results.iter().find(|c| c.check_id == id).unwrap_or_else(|| panic!("{id} missing")).status
}

fn check_invariants(r: &Report) {
    for c in &r.results {
        if c.status == Status::Fail {
            assert!(c.witness.is_some(), "{} fails without a witness", c.check_id);
        }
        if c.status == Status::Pass && c.mode == ResultMode::Symbolic {
            assert_eq!(c.residual_terms, 0, "{}", c.check_id);
        }
    }
}

#[test]
fn static_suite_passes_exactly() {
    let r = run_suite(&cfg(Suite::Static, Mode::Symbolic, 200, 0)).unwrap();
    check_invariants(&r);
    for id in ["IDS39", "IDS311", "COEFSIMP", "SWAP"] {
        assert_eq!(status(&r, id), Status::Pass, "{id}");
    }
    assert_eq!(exit_code(&r), 0);
}

#[test]
fn runs_are_byte_identical() {
    let c = cfg(Suite::Static, Mode::Symbolic, 200, 3);
    assert_eq!(run_suite(&c).unwrap().to_json(), run_suite(&c).unwrap().to_json());
    let c = cfg(Suite::Jet, Mode::Sampled, 10, 3);
    let (a, b) = (run_suite(&c).unwrap(), run_suite(&c).unwrap());
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_text(), b.to_text());
}

/// Sampling never contradicts a symbolic verdict, and a failing check does not stop the others.
#[test]
fn sampled_replay_agrees_with_symbolic() {
    let sym = run_suite(&cfg(Suite::Jet, Mode::Symbolic, 200, 0)).unwrap();
    let smp = run_suite(&cfg(Suite::Jet, Mode::Sampled, 100, 7)).unwrap();
    check_invariants(&sym);
    check_invariants(&smp);
    let jet_ids: Vec<_> = registry().into_iter().filter(|c| c.suite == Suite::Jet).map(|c| c.id).collect();
    for id in &jet_ids {
        assert!(sym.results.iter().any(|c| c.check_id == *id), "{id} not run");
    }
    let mut compared = 0;
    for s in &sym.results {
        let Some(p) = smp.results.iter().find(|c| c.check_id == s.check_id) else {
            continue;
        };
        compared += 1;
        match s.status {
            Status::Pass => assert_eq!(p.status, Status::ProbablyPass, "{}", s.check_id),
            Status::Fail => assert_eq!(p.status, Status::Fail, "{}", s.check_id),
            other => panic!("{}: unexpected {other}", s.check_id),
        }
    }
    assert!(compared >= jet_ids.len());
    assert_eq!(exit_code(&sym), i32::from(sym.summary.fail > 0));
}

#[test]
fn bad_configuration_is_rejected() {
    assert!(run_suite(&VerifyConfig { samples: 0, ..VerifyConfig::default() }).is_err());
    assert!(run_suite(&VerifyConfig { budget: 0, ..VerifyConfig::default() }).is_err());
    assert!(run_suite(&VerifyConfig { precision: 8, ..VerifyConfig::default() }).is_err());
    assert!("everything".parse::<Suite>().is_err());
    assert!("guess".parse::<Mode>().is_err());
}
