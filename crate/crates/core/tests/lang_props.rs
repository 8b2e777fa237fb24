mod common;

#[test]
fn random_expressions_round_trip() {
    common::render_round_trip(1000).unwrap();
}

#[test]
fn catalog_entries_round_trip() {
    common::catalog_round_trip().unwrap();
}

#[test]
fn parser_is_total() {
    common::parser_total(2000).unwrap();
}
