mod common;

#[test]
fn cubic_backward_error_is_small() {
    common::cubic_residual(1000).unwrap();
}

#[test]
fn real_cubics_have_conjugate_closed_roots() {
    common::real_cubic_conjugate_closed(1000).unwrap();
}

#[test]
fn cubic_recovers_planted_roots() {
    common::cubic_recovers_roots(500).unwrap();
}

#[test]
fn exact_and_float_evaluation_agree() {
    common::float_coherence(1000).unwrap();
}
