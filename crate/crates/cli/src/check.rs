use pmoments::acceptance::tiles_closed_form;
use pmoments::evaluate::{evaluate, EvalOptions, Evaluation};
use pmoments::maps::MapId;
use pmoments::oracles::{oracle_report, OracleReport};
use pmoments::states::StateId;
use serde::Serialize;

use crate::{parse_party, CheckArgs, CliError};

#[derive(Serialize)]
struct CheckOutput<'a> {
    state: String,
    map: String,
    party: usize,
    evaluation: &'a Evaluation,
    oracle: &'a OracleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    tiles_closed_form: Option<f64>,
}

pub fn run(args: &CheckArgs) -> Result<(), CliError> {
    let state: StateId = args.state.parse()?;
    let map_id: MapId = args.map.parse()?;
    let party = parse_party(&args.party)?;
    let rho = state.generate()?;
    let dim = *rho
        .dims()
        .get(party)
        .ok_or_else(|| CliError::Usage(format!("party {party} out of range for dims {:?}", rho.dims())))?;
    let map = map_id.build(dim)?;
    let opts = EvalOptions {
        n: args.n,
        normalize: args.normalize,
        ..Default::default()
    };
    let eval = evaluate(&rho, &map, party, &opts)?;
    let oracle = oracle_report(&rho, &[(&map, party)], args.n)?;
    let closed_form = matches!(state, StateId::UpbTiles).then(tiles_closed_form);

    if args.json {
        let out = CheckOutput {
            state: state.to_string(),
            map: map_id.to_string(),
            party,
            evaluation: &eval,
            oracle: &oracle,
            tiles_closed_form: closed_form,
        };
        let text = serde_json::to_string_pretty(&out).map_err(|e| CliError::Usage(e.to_string()))?;
        println!("{text}");
        return Ok(());
    }

    println!("state {state}  map {map_id}  party {party}  dims {:?}", rho.dims());
    let kind = if eval.moments.is_normalized() {
        "normalized"
    } else {
        "raw"
    };
    println!("\nmoments ({kind}):");
    for (k, m) in eval.moments.values().iter().enumerate() {
        println!("  m{} = {m:.12e}", k + 1);
    }
    let h = &eval.hankel;
    println!("\nHankel:");
    println!("  min eig S1 = {:.6e}", h.min_eig_s1);
    println!("  min eig S2 = {:.6e}", h.min_eig_s2);
    if let Some(s3) = h.min_eig_s3 {
        println!("  min eig S3 = {s3:.6e}");
    }
    if let Some(m) = &eval.minors {
        println!("  normalized minor residuals:");
        for (name, v) in m.named() {
            println!("    {name:<12} {v:.6e}");
        }
    }
    println!("\ncriteria:");
    for v in &eval.verdicts {
        let params: Vec<String> = v.parameters.iter().map(|(n, x)| format!("{n}={x:.6}")).collect();
        println!(
            "  {:<6} {:<22} witness {:+.6e} {}",
            v.criterion.to_string(),
            v.outcome.to_string(),
            v.witness_value,
            params.join(" ")
        );
    }
    println!("\noracle:");
    for p in &oracle.ppt.parties {
        println!(
            "  PT party {}: min eigenvalue {:.6e}{}",
            p.party,
            p.min_eigenvalue,
            if p.npt { "  NPT" } else { "" }
        );
    }
    println!("  state is {}", if oracle.ppt.npt { "NPT" } else { "PPT" });
    for s in &oracle.mapped_spectra {
        let values: Vec<String> = s.spectrum.eigenvalues().iter().map(|x| format!("{x:.6e}")).collect();
        println!("  spectrum of {} on party {}: [{}]", s.map, s.party, values.join(", "));
    }
    if let Some(r) = &oracle.realignment_moments {
        let values: Vec<String> = r.iter().map(|(re, im)| format!("{re:.6e}{im:+.3e}i")).collect();
        println!("  realignment moments: [{}]", values.join(", "));
    }
    if let Some(t) = oracle.realignment_trace_norm {
        println!("  realignment trace norm: {t:.6}");
    }
    for note in eval.notes.iter().chain(&oracle.notes) {
        println!("  note: {note}");
    }
    if let Some(v) = &eval.consistency_violation {
        println!("  INTERNAL INCONSISTENCY: {v}");
    }
    if let Some(target) = closed_form {
        println!(
            "\nclosed form -9/(4(301+sqrt(91177))) = {target:.12e}; min eig S1 = {:.12e}; |diff| = {:.3e}",
            h.min_eig_s1,
            (h.min_eig_s1 - target).abs()
        );
    }
    Ok(())
}
