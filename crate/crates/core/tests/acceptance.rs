use spectral_stokes::selftest;

#[test]
fn acceptance() {
    let results = selftest::run_all();
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
