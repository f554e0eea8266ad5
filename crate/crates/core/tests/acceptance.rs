use pmoments::acceptance::{run_acceptance, AcceptanceOptions};

#[test]
fn acceptance_criteria() {
    let report = run_acceptance(&AcceptanceOptions::default());
    for r in &report.results {
        println!("{r}");
        for d in &r.details {
            println!("      {d}");
        }
    }
    for c in &report.comparisons {
        println!("  note: {c}");
    }
    let failed: Vec<usize> = report.results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
