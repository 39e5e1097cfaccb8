//! The full acceptance suite as one integration test: one printed line per
//! criterion, failing the test if any criterion fails.

#[test]
fn acceptance() {
    let outcomes = gedsearch::selftest::run_all_with(|o| println!("{}", o.line()));
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
