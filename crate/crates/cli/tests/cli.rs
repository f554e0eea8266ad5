use std::fs;
use std::process::{Command, Output};

fn pmoments(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmoments"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_werner_detects_and_reports_npt() {
    let o = pmoments(&["check", "werner:0.5", "lambda1", "B", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.trim_start().starts_with("S1") && l.contains("detected")));
    assert!(text.contains("state is NPT"));
}

#[test]
fn check_rho_alpha_separable_region() {
    let o = pmoments(&["check", "rho_alpha:2.5", "phi1", "B", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let detected = text
        .lines()
        .filter(|l| l.contains("witness"))
        .any(|l| l.split_whitespace().nth(1) == Some("detected"));
    assert!(!detected, "{text}");
    assert!(text.contains("state is PPT"));
}

#[test]
fn check_tiles_prints_closed_form() {
    let o = pmoments(&["check", "upb_tiles", "reduction:3", "B", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("closed form -9/(4(301+sqrt(91177)))"));
}

#[test]
fn check_json_output() {
    let o = pmoments(&["check", "werner:0.9", "transpose", "A", "7", "--json", "--normalize"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["party"], 0);
    assert_eq!(v["evaluation"]["moments"]["values"].as_array().unwrap().len(), 7);
    assert_eq!(v["oracle"]["ppt"]["npt"], true);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["check", "werner:1.5", "lambda1", "B"][..],
        &["check", "werner:0.5", "phi1", "B"],
        &["check", "werner:0.5", "nomap", "B"],
        &["check", "werner:0.5", "lambda1", "Z"],
        &["check", "werner:0.5", "lambda1", "B", "3"],
        &["check", "ghz:0.5", "lambda1", "3"],
        &["frobnicate"],
        &["scan", "--family", "werner", "--map", "lambda1"],
    ] {
        let o = pmoments(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn scan_is_byte_stable_and_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let base = [
        "scan", "--family", "werner", "--points", "21", "--map", "lambda1", "--map", "lambda2",
    ];
    let run = |out: &std::path::Path, jobs: &str| {
        let mut args = base.to_vec();
        args.extend(["--jobs", jobs, "-o", out.to_str().unwrap()]);
        assert_eq!(pmoments(&args).status.code(), Some(0));
    };
    run(&a, "4");
    run(&b, "1");
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "param,map,convention,min_eig_s1,min_eig_s2,q3_minus_q2sq,q3_olambda_witness,p3_oppt_witness,oracle_min_mapped_eig,ppt_min_eig"
    );
    assert_eq!(lines.len(), 1 + 21 * 2);
    assert!(lines[1].starts_with("0,lambda1,"));
    assert!(lines[2].starts_with("0,lambda2,"));
    assert!(lines[42].starts_with("1,lambda2,"));
}

#[test]
fn scan_refine_finds_published_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = pmoments(&[
        "scan",
        "--family",
        "rho_alpha",
        "--map",
        "phi1",
        "--party",
        "A",
        "--points",
        "31",
        "--refine",
        "q3_minus_q2sq",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("refine phi1 q3_minus_q2sq: sign change at "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 3.1658).abs() < 1e-3);
}

#[test]
fn scan_config_file_and_failures_leave_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"family": "sigma_b", "points": 3, "maps": ["hou:4:unordered", "hou:4:ordered"], "output": {:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    assert_eq!(
        pmoments(&["scan", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(0)
    );
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains(",hou:4:ordered,ordered,"));
    assert_eq!(text.lines().count(), 7);

    let bad = dir.path().join("bad.csv");
    let o = pmoments(&[
        "scan",
        "--family",
        "werner",
        "--lo",
        "0.8",
        "--hi",
        "0.2",
        "--map",
        "lambda1",
        "-o",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = pmoments(&[
        "scan",
        "--family",
        "werner",
        "--map",
        "lambda1",
        "--points",
        "1",
        "-o",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("bad"))
        .collect();
    assert!(leftovers.is_empty());

    fs::write(&cfg, r#"{"family": "werner", "colour": 3}"#).unwrap();
    assert_eq!(
        pmoments(&["scan", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn state_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = pmoments(&["state", "sigma_b:0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("dims 2 4"));
    let path = dir.path().join("rho.txt");
    fs::write(&path, &text).unwrap();
    let id = format!("file:{}", path.display());
    let from_file = pmoments(&["check", &id, "transpose", "B", "5", "--json"]);
    let direct = pmoments(&["check", "sigma_b:0.3", "transpose", "B", "5", "--json"]);
    let a: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&direct.stdout).unwrap();
    assert_eq!(a["evaluation"]["hankel"], b["evaluation"]["hankel"]);
}

#[test]
fn report_passes_and_negative_control_fails() {
    let ok = pmoments(&["report", "--separable-trials", "50"]);
    let text = stdout(&ok);
    assert_eq!(ok.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
    assert!(text.contains("Tiles closed form"));

    let bad = pmoments(&["report", "--separable-trials", "20", "--corrupt-fixture"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(
        text.lines()
            .any(|l| l.starts_with("[FAIL]") && l.contains("PPT verification")),
        "{text}"
    );
}
