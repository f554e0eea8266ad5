use pmoments::acceptance::{run_acceptance, AcceptanceOptions};

use crate::{CliError, ReportArgs};

pub fn run(args: &ReportArgs) -> Result<(), CliError> {
    let report = run_acceptance(&AcceptanceOptions {
        separable_trials: args.separable_trials.max(1),
        corrupt_sigma_b: args.corrupt_fixture,
    });
    if args.json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Usage(e.to_string()))?;
        println!("{text}");
    } else {
        for r in &report.results {
            println!("{r}");
            for d in &r.details {
                println!("        {d}");
            }
        }
        if !report.comparisons.is_empty() {
            println!("\nconvention comparison (informational):");
            for c in &report.comparisons {
                println!("  {c}");
            }
        }
        let passed = report.results.iter().filter(|r| r.passed).count();
        println!("\n{passed}/{} items passed", report.results.len());
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}
