//! Simulation drivers. Each writes one JSON object whose bytes depend only
//! on the parameters and the seed.

use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use multipack::error::Error;
use multipack::geometry::PointSet;
use multipack::montecarlo::{
    estimate_error_prob, estimate_list_identity, estimate_shell_probability, sample_matern, sample_ppp,
    sample_spherical_code, shell_probability_target, Codebook, PppConfig, SimEstimate, Window, CONSTRUCTION_STREAM,
};
use multipack::numerics::{ln_ball_volume, q_function, SeedSpec};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{fmt_g, write_csv, write_json};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Subcommand)]
pub enum Simulate {
    /// Error rate of a list decoded to all but one of its points
    List(ListArgs),
    /// List-decoding error rate of a random spherical code
    Code(CodeArgs),
    /// Frequency of ‖x‖² − nP landing in [−δ, 0] for Gaussian x
    Shell(ShellArgs),
    /// Poisson point process counts, or Matérn thinning with --radius
    Ppp(PppArgs),
}

#[derive(Debug, Args)]
pub struct Run {
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ListArgs {
    #[arg(long)]
    pub sigma: f64,
    /// Points as CSV, one per row, no header (default: two points at --distance)
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    pub distance: f64,
    /// Ambient dimension of the default two-point list
    #[arg(long = "n", default_value_t = 1)]
    pub dim: usize,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    #[arg(long)]
    pub sigma: f64,
    #[arg(long = "n", default_value_t = 8)]
    pub dim: usize,
    /// Number of codewords
    #[arg(long = "M", default_value_t = 16)]
    pub size: usize,
    #[arg(long = "P", default_value_t = 1.0)]
    pub power: f64,
    /// Multiplicity L; the decoder outputs L-1 codewords
    #[arg(long = "L", default_value_t = 2)]
    pub multiplicity: usize,
    /// Also write the sampled codebook as CSV
    #[arg(long)]
    pub save_codebook: Option<PathBuf>,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Args)]
pub struct ShellArgs {
    #[arg(long = "n", default_value_t = 400)]
    pub dim: usize,
    #[arg(long = "P", default_value_t = 1.0)]
    pub power: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Args)]
pub struct PppArgs {
    #[arg(long, default_value_t = 10.0)]
    pub intensity: f64,
    #[arg(long = "n", default_value_t = 2)]
    pub dim: usize,
    /// Side of the cube window centred at the origin
    #[arg(long, default_value_t = 1.0)]
    pub side: f64,
    /// Exclusion radius; switches to the Matérn process
    #[arg(long)]
    pub radius: Option<f64>,
    /// Also write the first sample as CSV
    #[arg(long)]
    pub save_points: Option<PathBuf>,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Serialize)]
struct Report {
    schema_version: u32,
    command: &'static str,
    params: Value,
    seed: SeedSpec,
    trials: u64,
    errors: Option<u64>,
    p_hat: Option<f64>,
    stderr: Option<f64>,
    log_p_hat: Option<f64>,
    derived: Value,
}

impl Report {
    fn from_estimate(command: &'static str, params: Value, est: &SimEstimate, derived: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            params,
            seed: est.seed,
            trials: est.trials,
            errors: Some(est.errors),
            p_hat: Some(est.p_hat),
            stderr: Some(est.stderr),
            log_p_hat: est.log_p_hat,
            derived,
        }
    }
}

fn read_points(path: &Path) -> Result<PointSet, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            rec.iter()
                .map(|f| f.parse::<f64>().map_err(|e| CliError::usage(format!("{}: {f:?}: {e}", path.display()))))
                .collect()
        })
        .collect::<Result<_, CliError>>()?;
    Ok(PointSet::from_rows(&rows)?)
}

fn save_points(path: &Path, pts: &PointSet) -> Result<(), CliError> {
    let header: Vec<String> = (0..pts.dim()).map(|i| format!("x{i}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = pts.iter().map(|p| p.iter().map(|&v| fmt_g(v)).collect()).collect();
    write_csv(Some(path), &header, &rows)?;
    Ok(())
}

fn list(a: &ListArgs) -> Result<Report, CliError> {
    let (list, source) = match &a.points {
        Some(path) => (read_points(path)?, json!(path.display().to_string())),
        None => {
            let mut coords = vec![0.0; 2 * a.dim.max(1)];
            coords[a.dim.max(1)] = a.distance;
            (PointSet::new(a.dim.max(1), coords)?, json!({"two_point_distance": a.distance, "n": a.dim}))
        }
    };
    let params = json!({"sigma": a.sigma, "points": source, "trials": a.run.trials, "seed": a.run.seed});
    match estimate_list_identity(&list, a.sigma, a.run.trials, a.run.seed) {
        Ok(out) => {
            let mut derived = json!({
                "ratio": out.ratio,
                "radius_sq": out.radius_sq,
                "per_vertex_p_hat": out.per_vertex.iter().map(|e| e.p_hat).collect::<Vec<_>>(),
            });
            if list.len() == 2 {
                derived["q_reference"] = json!(q_function(out.radius_sq.sqrt() / a.sigma));
            }
            Ok(Report::from_estimate("simulate list", params, &out.estimate, derived))
        }
        Err(Error::InsufficientErrors(_)) => {
            let code = Codebook::new(list.clone(), None)?;
            let est = estimate_error_prob(&code, a.sigma, list.len() - 1, a.run.trials, a.run.seed)?;
            Ok(Report::from_estimate("simulate list", params, &est, json!({"ratio": null})))
        }
        Err(e) => Err(e.into()),
    }
}

fn code(a: &CodeArgs) -> Result<Report, CliError> {
    let book = sample_spherical_code(a.dim, a.size, a.power, SeedSpec::new(a.run.seed, CONSTRUCTION_STREAM))?;
    if let Some(path) = &a.save_codebook {
        save_points(path, book.points())?;
    }
    let list_size = a.multiplicity.saturating_sub(1);
    let est = estimate_error_prob(&book, a.sigma, list_size, a.run.trials, a.run.seed)?;
    let params = json!({
        "sigma": a.sigma, "n": a.dim, "M": a.size, "P": a.power, "L": a.multiplicity,
        "trials": a.run.trials, "seed": a.run.seed,
    });
    let derived = json!({"rate": (a.size as f64).ln() / a.dim as f64, "codebook_stream": CONSTRUCTION_STREAM});
    Ok(Report::from_estimate("simulate code", params, &est, derived))
}

fn shell(a: &ShellArgs) -> Result<Report, CliError> {
    let est = estimate_shell_probability(a.dim, a.power, a.delta, a.run.trials, a.run.seed)?;
    let params = json!({"n": a.dim, "P": a.power, "delta": a.delta, "trials": a.run.trials, "seed": a.run.seed});
    let derived = json!({"clt_target": shell_probability_target(a.dim, a.power, a.delta)});
    Ok(Report::from_estimate("simulate shell", params, &est, derived))
}

fn ppp(a: &PppArgs) -> Result<Report, CliError> {
    if a.run.trials < 2 {
        return Err(CliError::usage("--trials must be at least 2"));
    }
    let cfg = PppConfig::new(a.intensity, Window::cube(a.dim, a.side / 2.0)?, a.radius)?;
    let draw = |i: u64| {
        let seed = SeedSpec::new(a.run.seed, i);
        if a.radius.is_some() {
            sample_matern(&cfg, seed)
        } else {
            sample_ppp(&cfg, seed)
        }
    };
    if let Some(path) = &a.save_points {
        save_points(path, &draw(0)?)?;
    }
    let counts: Vec<u64> =
        (0..a.run.trials).into_par_iter().map(|i| draw(i).map(|p| p.len() as u64)).collect::<Result<_, _>>()?;
    let m = counts.len() as f64;
    let mean = counts.iter().sum::<u64>() as f64 / m;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let volume = cfg.window.volume();
    let expected = match a.radius {
        None => a.intensity * volume,
        Some(r) => a.intensity * (-a.intensity * ln_ball_volume(a.dim, r).exp()).exp() * volume,
    };
    let params = json!({
        "intensity": a.intensity, "n": a.dim, "side": a.side, "radius": a.radius,
        "trials": a.run.trials, "seed": a.run.seed,
    });
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: if a.radius.is_some() { "simulate ppp matern" } else { "simulate ppp" },
        params,
        seed: SeedSpec::new(a.run.seed, 0),
        trials: a.run.trials,
        errors: None,
        p_hat: None,
        stderr: None,
        log_p_hat: None,
        derived: json!({
            "mean_count": mean,
            "count_variance": var,
            "mean_count_stderr": (var / m).sqrt(),
            "expected_count": expected,
            "intensity_hat": mean / volume,
        }),
    })
}

pub fn run(sim: &Simulate, out: Option<&Path>) -> Result<(), CliError> {
    let report = match sim {
        Simulate::List(a) => list(a)?,
        Simulate::Code(a) => code(a)?,
        Simulate::Shell(a) => shell(a)?,
        Simulate::Ppp(a) => ppp(a)?,
    };
    write_json(out, &report)?;
    Ok(())
}
