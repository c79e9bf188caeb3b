//! End-to-end acceptance run: executes every verification criterion on the
//! default rig and prints one pass/fail line per criterion.
//!
//! The run covers the default superpotential family on `x ∈ [-8, 8]` with
//! 1024 nodes, momentum rank 1024, and the exponent set {0, 0.3, 0.5, 1}.

use wspace::verify::{self, VerifyConfig};

#[test]
fn acceptance_criteria() {
    let report = verify::run(&VerifyConfig::default()).expect("verification run completes");

    for criterion in &report.criteria {
        println!("{}", criterion.summary_line());
    }

    let failing: Vec<String> = report
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.summary_line())
        .collect();
    assert!(
        report.passed,
        "acceptance criteria failed:\n{}",
        failing.join("\n")
    );
}
