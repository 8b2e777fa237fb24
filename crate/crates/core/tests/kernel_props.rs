mod common;

use pmc_verify::kernel::{DiffVar, TrigRational};
use pmc_verify::lang::parse_expr;

const CASES: u32 = 1000;

#[test]
fn normalize_is_idempotent_and_value_preserving() {
    common::normalize_idempotent(CASES).unwrap();
}

#[test]
fn conjugation_is_an_involutive_ring_map() {
    common::conjugation_involution(CASES).unwrap();
}

#[test]
fn leibniz_rule() {
    common::leibniz(CASES).unwrap();
}

#[test]
fn power_and_quotient_rules() {
    common::chain(CASES).unwrap();
}

#[test]
fn exact_evaluation_is_a_homomorphism() {
    common::evaluation_homomorphism(CASES).unwrap();
}

#[test]
fn circle_relation_is_constant_along_alpha() {
    let circle = parse_expr("sin(alpha)^2 + cos(alpha)^2 - 1").unwrap();
    assert!(circle.is_zero());
    let raw = parse_expr("sin(alpha)^2 + cos(alpha)^2").unwrap();
    assert!(raw.equals(&TrigRational::one()).unwrap());
    assert!(raw.differentiate(DiffVar::Alpha).unwrap().is_zero());
}
