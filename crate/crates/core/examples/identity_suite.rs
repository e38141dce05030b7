// Randomized identity checks, with and without a corrupted symbol.

use circle_geodesics::harness::{run_identity_suite, IdentitySuiteOptions};
use circle_geodesics::InertiaOperator;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = InertiaOperator::sobolev(64, 2.0)?;
    let report = run_identity_suite(&IdentitySuiteOptions::new(a.clone(), 5, 7));
    for line in report.lines() {
        println!("{line}");
    }
    assert!(report.passed);

    let corrupted = IdentitySuiteOptions {
        corrupt_mode: Some(2),
        ..IdentitySuiteOptions::new(a, 5, 7)
    };
    let report = run_identity_suite(&corrupted);
    println!("corrupted a(2): passed = {}", report.passed);
    for line in report.lines().iter().filter(|l| l.starts_with("FAIL")) {
        println!("{line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
