use std::fs;
use std::path::{Path, PathBuf};

use pmoments::evaluate::{bisect, evaluate, EvalOptions};
use pmoments::linalg::hermitian_eigenvalues;
use pmoments::maps::{MapId, SignedKrausMap};
use pmoments::moments::{moments_from_spectrum, optimal_bound, Criterion};
use pmoments::oracles::ppt_check;
use pmoments::states::Family;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{parse_party, CliError, ScanArgs};

pub const HEADER: [&str; 10] = [
    "param",
    "map",
    "convention",
    "min_eig_s1",
    "min_eig_s2",
    "q3_minus_q2sq",
    "q3_olambda_witness",
    "p3_oppt_witness",
    "oracle_min_mapped_eig",
    "ppt_min_eig",
];

/// Scan settings as read from a JSON file; every field is optional so that
/// flags can fill in the rest.
#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    family: Option<String>,
    lo: Option<f64>,
    hi: Option<f64>,
    points: Option<usize>,
    maps: Option<Vec<String>>,
    party: Option<String>,
    n: Option<usize>,
    normalize: Option<bool>,
    output: Option<PathBuf>,
}

#[derive(Debug)]
struct ScanConfig {
    family: Family,
    lo: f64,
    hi: f64,
    points: usize,
    maps: Vec<MapId>,
    party: usize,
    n: usize,
    normalize: bool,
    output: PathBuf,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn resolve(args: &ScanArgs) -> Result<ScanConfig, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<ConfigFile>(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let family: Family = args
        .family
        .clone()
        .or(file.family)
        .ok_or_else(|| usage("missing --family"))?
        .parse()?;
    let (default_lo, default_hi) = family.scan_bounds();
    let lo = args.lo.or(file.lo).unwrap_or(default_lo);
    let hi = args.hi.or(file.hi).unwrap_or(default_hi);
    if lo >= hi || lo.is_nan() || hi.is_nan() {
        return Err(usage(format!("need lo < hi, got {lo} and {hi}")));
    }
    family.check(lo)?;
    family.check(hi)?;
    let points = args.points.or(file.points).unwrap_or(101);
    if points < 2 {
        return Err(usage("need at least 2 points"));
    }
    let map_ids = if args.maps.is_empty() {
        file.maps.unwrap_or_default()
    } else {
        args.maps.clone()
    };
    if map_ids.is_empty() {
        return Err(usage("at least one --map is required"));
    }
    let maps = map_ids.iter().map(|m| m.parse()).collect::<Result<Vec<MapId>, _>>()?;
    let party = parse_party(args.party.as_deref().or(file.party.as_deref()).unwrap_or("B"))?;
    let dims = family.dims();
    let dim = *dims
        .get(party)
        .ok_or_else(|| usage(format!("party {party} out of range for dims {dims:?}")))?;
    for m in &maps {
        m.build(dim)?;
    }
    let n = args.n.or(file.n).unwrap_or(5);
    if n < 5 {
        return Err(usage(format!("need at least 5 moments, got {n}")));
    }
    let output = args
        .output
        .clone()
        .or(file.output)
        .ok_or_else(|| usage("missing --output"))?;
    Ok(ScanConfig {
        family,
        lo,
        hi,
        points,
        maps,
        party,
        n,
        normalize: args.normalize || file.normalize.unwrap_or(false),
        output,
    })
}

/// One CSV row; `None` cells are written empty.
struct Row {
    param: f64,
    map: String,
    convention: String,
    values: [Option<f64>; 7],
}

fn p3_oppt_witness(rho: &pmoments::DensityMatrix, party: usize) -> pmoments::Result<Option<f64>> {
    let spectrum = hermitian_eigenvalues(&rho.partial_transpose(party)?)?;
    let p = moments_from_spectrum(&spectrum, 3, true)?;
    Ok(optimal_bound(p.moment(2)).ok().map(|ob| p.moment(3) - ob.bound))
}

fn row(cfg: &ScanConfig, id: &MapId, map: &SignedKrausMap, x: f64) -> pmoments::Result<Row> {
    let rho = cfg.family.generate(x)?;
    let opts = EvalOptions {
        n: cfg.n,
        normalize: cfg.normalize,
        ..Default::default()
    };
    let e = evaluate(&rho, map, cfg.party, &opts)?;
    let optimal = e
        .witness(Criterion::Q3OptimalLambda)
        .or_else(|| e.witness(Criterion::P3Oppt));
    Ok(Row {
        param: x,
        map: id.to_string(),
        convention: id.convention().map_or(String::new(), |c| c.to_string()),
        values: [
            Some(e.hankel.min_eig_s1),
            Some(e.hankel.min_eig_s2),
            e.minors.map(|m| m.q3_minus_q2_sq),
            optimal,
            p3_oppt_witness(&rho, cfg.party)?,
            Some(e.mapped_spectrum.min()),
            Some(ppt_check(&rho)?.min_eigenvalue()),
        ],
    })
}

fn column_value(row: &Row, column: &str) -> Option<f64> {
    let idx = HEADER.iter().position(|h| *h == column)?;
    idx.checked_sub(3).and_then(|i| row.values[i])
}

fn write_csv(path: &Path, rows: &[Row]) -> Result<(), CliError> {
    let file_name = path
        .file_name()
        .ok_or_else(|| usage(format!("invalid output path {}", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".partial");
    let tmp = path.with_file_name(tmp_name);
    let result = (|| -> Result<(), Box<dyn std::error::Error>> {
        let mut w = csv::Writer::from_path(&tmp)?;
        w.write_record(HEADER)?;
        for r in rows {
            let mut record = vec![r.param.to_string(), r.map.clone(), r.convention.clone()];
            record.extend(r.values.iter().map(|v| v.map_or(String::new(), |x| format!("{x:e}"))));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    })();
    match result {
        Ok(()) => fs::rename(&tmp, path).map_err(|e| usage(format!("{}: {e}", path.display()))),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(usage(format!("{}: {e}", path.display())))
        }
    }
}

pub fn run(args: &ScanArgs) -> Result<(), CliError> {
    let cfg = resolve(args)?;
    if let Some(col) = &args.refine {
        if HEADER[3..].iter().all(|h| h != col) {
            return Err(usage(format!(
                "cannot refine on '{col}'; choose one of {:?}",
                &HEADER[3..]
            )));
        }
    }
    let dim = cfg.family.dims()[cfg.party];
    let maps: Vec<(MapId, SignedKrausMap)> = cfg
        .maps
        .iter()
        .map(|id| Ok((*id, id.build(dim)?)))
        .collect::<pmoments::Result<_>>()?;
    let step = (cfg.hi - cfg.lo) / (cfg.points - 1) as f64;
    let grid: Vec<f64> = (0..cfg.points)
        .map(|i| {
            if i + 1 == cfg.points {
                cfg.hi
            } else {
                cfg.lo + step * i as f64
            }
        })
        .collect();
    let tasks: Vec<(f64, usize)> = grid
        .iter()
        .flat_map(|&x| (0..maps.len()).map(move |m| (x, m)))
        .collect();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| usage(e.to_string()))?;
    let rows: Vec<Row> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(x, m)| row(&cfg, &maps[m].0, &maps[m].1, x))
            .collect::<pmoments::Result<Vec<_>>>()
    })?;
    write_csv(&cfg.output, &rows)?;
    println!("wrote {} rows to {}", rows.len(), cfg.output.display());

    if let Some(col) = &args.refine {
        for (m, (id, map)) in maps.iter().enumerate() {
            let series: Vec<&Row> = rows.iter().skip(m).step_by(maps.len()).collect();
            let hit = series
                .iter()
                .position(|r| column_value(r, col).is_some_and(|v| v < 0.0));
            match hit {
                Some(0) => println!("refine {id} {col}: negative from {}", series[0].param),
                Some(i) => {
                    let f = |x: f64| -> pmoments::Result<f64> {
                        Ok(column_value(&row(&cfg, id, map, x)?, col).unwrap_or(f64::NAN))
                    };
                    let t = bisect(f, series[i - 1].param, series[i].param, 1e-6)?;
                    println!("refine {id} {col}: sign change at {t:.6}");
                }
                None => println!("refine {id} {col}: no sign change"),
            }
        }
    }
    Ok(())
}
