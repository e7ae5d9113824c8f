//! Acceptance gate: runs every verification criterion and prints one
//! pass/fail line per criterion (visible with `cargo test --test acceptance
//! -- --nocapture`).

use npspec_core::verify::run_criteria;

#[test]
fn acceptance_criteria() {
    let results = run_criteria(None);
    assert_eq!(results.len(), 10, "expected all ten criteria to run");
    let mut failed = Vec::new();
    for r in &results {
        println!(
            "criterion {:>2} {:<26} {} [{:>7.2?}] {}",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.runtime,
            r.detail
        );
        if !r.passed {
            failed.push(format!("{} ({}): {}", r.id, r.name, r.detail));
        }
    }
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
