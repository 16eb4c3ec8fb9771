use std::time::Instant;

use qradius_core::oracle::{estimate_radius_gram, sample_range_cloud};
use qradius_core::{estimate_radius, Complex64, OracleConfig, RankOnePair, SeedStream, Suite, SuiteParams};

use crate::io::{csv_number, print_json, read_gram, read_matrix, read_vector, write_csv, CliError};
use crate::{EstimateArgs, ProfileArgs, RadiusArgs, RangeArgs, VerifyArgs};

type Outcome = Result<u8, CliError>;

fn read_pair(a: &std::path::Path, b: &std::path::Path) -> Result<RankOnePair, CliError> {
    Ok(RankOnePair::new(read_vector(a)?, read_vector(b)?)?)
}

pub fn radius(args: &RadiusArgs) -> Outcome {
    let (a, b) = (read_vector(&args.a)?, read_vector(&args.b)?);
    let pair = match &args.gram {
        Some(path) => RankOnePair::with_gram(a, b, read_gram(path)?)?,
        None => RankOnePair::new(a, b)?,
    };
    let mut report = pair.report(args.q, args.witness)?;
    if let Some(restarts) = args.check_oracle {
        let cfg = OracleConfig::with_restarts(restarts, 0);
        let estimate = if pair.gram().is_identity() {
            estimate_radius(&pair.as_matrix(), args.q, &cfg)?
        } else {
            estimate_radius_gram(&pair.as_matrix(), pair.gram(), args.q, &cfg)?
        };
        report = report.with_oracle(estimate.estimate);
    }
    print_json(&report)?;
    Ok(0)
}

pub fn estimate(args: &EstimateArgs) -> Outcome {
    let (a, g) = read_matrix(&args.matrix)?;
    let cfg = OracleConfig::with_restarts(args.restarts, args.seed);
    let estimate = match g {
        Some(g) => estimate_radius_gram(&a, &g, args.q, &cfg)?,
        None => estimate_radius(&a, args.q, &cfg)?,
    };
    print_json(&estimate)?;
    Ok(0)
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("--q expects \"re\" or \"re,im\", got {s:?}"));
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad()));
    let re = parts.next().ok_or_else(bad)??;
    let im = parts.next().transpose()?.unwrap_or(0.0);
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn range(args: &RangeArgs) -> Outcome {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let q = parse_complex(&args.q)?;
    let (a, _) = read_matrix(&args.matrix)?;
    let cloud = sample_range_cloud(&a, q, args.samples, SeedStream::new(args.seed))?;
    let rows: Vec<Vec<String>> = cloud.iter().map(|p| vec![csv_number(p.value.re), csv_number(p.value.im)]).collect();
    write_csv(args.out.as_deref(), &["re", "im"], &rows)?;
    Ok(0)
}

pub fn profile(args: &ProfileArgs) -> Outcome {
    if args.grid < 3 {
        return Err(CliError::Usage("--grid must be at least 3".into()));
    }
    let pair = read_pair(&args.a, &args.b)?;
    pair.q_star()?;
    let last = args.grid - 1;
    let mut rows = Vec::with_capacity(args.grid);
    for k in 0..args.grid {
        let q = k as f64 / last as f64;
        let row = if k == 0 || k == last {
            vec![csv_number(q), csv_number(pair.radius(q)?), String::new(), String::new()]
        } else {
            let p = pair.profile(q)?;
            vec![csv_number(q), csv_number(p.f), csv_number(p.f1), csv_number(p.f2)]
        };
        rows.push(row);
    }
    write_csv(args.out.as_deref(), &["q", "f", "f1", "f2"], &rows)?;
    Ok(0)
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let suite: Suite = args.suite.parse().map_err(|e: qradius_core::Error| CliError::Usage(e.to_string()))?;
    let params = SuiteParams { trials: args.trials, dim: args.dim, max_degree: args.max_degree, seed: args.seed };
    let start = Instant::now();
    let mut report = suite.run(&params)?;
    report.elapsed = args.timing.then(|| start.elapsed().as_secs_f64());
    print_json(&report)?;
    Ok(if report.passed() { 0 } else { 1 })
}
