mod channel;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use logsing::coherent::{
    nonadditivity_report, threshold_curve, BiasSearch, DEFAULT_RESTARTS, THRESHOLD_CSV_HEADER,
    WIDE_EPS_GRID,
};
use logsing::singularity::{default_sigmas, search_certificates, theorem_scan, ScanOptions, Side};
use logsing::{DensityOperator, Exec, Isometry, RANK_TOL, TOOL_VERSION};
use serde::Serialize;
use serde_json::{json, Value};

use crate::channel::ChannelSpec;

const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "logsing",
    version,
    about = "Log-singularity analysis of complementary channel pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify positive coherent information of either channel in a pair.
    Positivity {
        #[command(flatten)]
        channel: ChannelSpec,
        /// Mixing state: `mixed`, `basis:K`, or a density-operator JSON file.
        /// Defaults to every basis state plus the maximally mixed state.
        #[arg(long)]
        sigma: Option<String>,
        /// Random pure states tried after the structured candidates.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Non-additivity threshold curve with one verification point per s.
    Figd {
        #[arg(long, default_value_t = 0.0)]
        s_min: f64,
        #[arg(long, default_value_t = 0.5)]
        s_max: f64,
        #[arg(long, default_value_t = 0.025)]
        s_step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximize the entropy bias of the direct channel.
    Qcoh {
        #[command(flatten)]
        channel: ChannelSpec,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Agreement of the two best restarts required to report convergence.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the isometry of a named channel as JSON.
    Isometry {
        #[command(flatten)]
        channel: ChannelSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Serialize)]
struct RunConfig {
    tool: &'static str,
    command: &'static str,
    parameters: Value,
    output_path: Option<String>,
    format: &'static str,
}

impl RunConfig {
    fn new(
        command: &'static str,
        parameters: Value,
        out: &Option<PathBuf>,
        format: &'static str,
    ) -> Self {
        Self {
            tool: TOOL_VERSION,
            command,
            parameters,
            output_path: out.as_ref().map(|p| p.display().to_string()),
            format,
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout"),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn parse_sigma(spec: &str, dim: usize) -> Result<DensityOperator> {
    if spec == "mixed" {
        return Ok(DensityOperator::maximally_mixed(dim));
    }
    if let Some(k) = spec.strip_prefix("basis:") {
        let k: usize = k
            .parse()
            .with_context(|| format!("bad basis index in --sigma {spec}"))?;
        if k >= dim {
            bail!("--sigma basis:{k} out of range for input dimension {dim}");
        }
        return Ok(DensityOperator::basis(dim, k));
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading --sigma file {spec}"))?;
    let rho: DensityOperator =
        serde_json::from_str(&text).with_context(|| format!("parsing --sigma file {spec}"))?;
    if rho.dim() != dim {
        bail!(
            "--sigma has dimension {}, channel input has {dim}",
            rho.dim()
        );
    }
    Ok(rho)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Direct => "direct",
        Side::Complement => "complement",
    }
}

fn cmd_positivity(
    j: &Isometry,
    sigma: Option<DensityOperator>,
    samples: usize,
    seed: u64,
    config: RunConfig,
) -> Result<(String, bool)> {
    let sigmas = match &sigma {
        Some(s) => vec![s.clone()],
        None => default_sigmas(j.d_a()),
    };
    let certificates = search_certificates(j, &sigmas, RANK_TOL, Exec::default())?;
    let mut opts = ScanOptions::new(samples, seed);
    opts.sigma = sigma;
    let scan = theorem_scan(j, &opts)?;

    let mut sides: Vec<Side> = certificates.iter().filter_map(|c| c.target).collect();
    if let Some(target) = scan.certificate().and_then(|c| c.target) {
        if !sides.contains(&target) {
            sides.push(target);
        }
    }
    sides.sort_by_key(|s| *s != Side::Direct);
    let positive = !sides.is_empty();
    let minimal = j.minimal_output_dims(RANK_TOL);
    let doc = json!({
        "config": config,
        "dims": { "d_a": j.d_a(), "d_b": j.d_b(), "d_c": j.d_c() },
        "minimal_dims": [minimal.0, minimal.1],
        "conclusion": if positive { "positive" } else { "inconclusive" },
        "positive_sides": sides.iter().map(|s| side_name(*s)).collect::<Vec<_>>(),
        "certificates": certificates,
        "theorem_scan": scan,
    });
    Ok((to_json(&doc)?, positive))
}

fn s_grid(s_min: f64, s_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0 <= s_min && s_min <= s_max && s_max <= 0.5) {
        bail!("need 0 <= s_min <= s_max <= 0.5, got s_min = {s_min}, s_max = {s_max}");
    }
    if step.is_nan() || step <= 0.0 {
        bail!("--s-step must be positive, got {step}");
    }
    let n = ((s_max - s_min) / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n)
        .map(|i| ((s_min + i as f64 * step) * 1e12).round() / 1e12)
        .map(|s| s.min(s_max))
        .collect();
    if s_max - grid[grid.len() - 1] > 1e-12 {
        grid.push(s_max);
    }
    Ok(grid)
}

fn cmd_figd(grid: &[f64], config: &RunConfig) -> Result<String> {
    let curve = threshold_curve(grid, Exec::default())?;
    let reports = Exec::default()
        .map_slice(&curve, |pt| {
            nonadditivity_report(0.5 * (0.5 + pt.p_bar), pt.s, &WIDE_EPS_GRID)
        })
        .into_iter()
        .collect::<logsing::Result<Vec<_>>>()?;

    let mut out = format!(
        "# {TOOL_VERSION}\n# config {}\n",
        serde_json::to_string(config)?
    );
    out.push_str(THRESHOLD_CSV_HEADER);
    out.push_str(",p_verify,rate_b,rate_c,delta0,delta_eps,verdict\n");
    for (pt, r) in curve.iter().zip(&reports) {
        let verdict = serde_json::to_value(r.verdict)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            pt.s,
            pt.w_star,
            pt.k,
            pt.p_bar,
            r.p,
            r.rate_b,
            r.rate_c,
            r.delta0,
            r.delta_eps,
            verdict.as_str().unwrap_or_default()
        ));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Positivity {
            channel,
            sigma,
            samples,
            seed,
            out,
        } => {
            let j = channel.build()?;
            let sigma = sigma
                .as_deref()
                .map(|s| parse_sigma(s, j.d_a()))
                .transpose()?;
            let params = json!({
                "channel": channel.describe(),
                "sigma": sigma.as_ref().map_or(json!("basis states and maximally mixed"), |s| json!(s)),
                "samples": samples,
                "seed": seed,
            });
            let config = RunConfig::new("positivity", params, &out, "json");
            let (text, positive) = cmd_positivity(&j, sigma, samples, seed, config)?;
            emit(&out, &text)?;
            Ok(if positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INCONCLUSIVE)
            })
        }
        Command::Figd {
            s_min,
            s_max,
            s_step,
            seed,
            out,
        } => {
            let grid = s_grid(s_min, s_max, s_step)?;
            let params = json!({
                "s_min": s_min,
                "s_max": s_max,
                "s_step": s_step,
                "seed": seed,
                "eps_grid": WIDE_EPS_GRID,
                "p_verify": "(1/2 + p_bar) / 2",
            });
            let config = RunConfig::new("figd", params, &out, "csv");
            emit(&out, &cmd_figd(&grid, &config)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Qcoh {
            channel,
            restarts,
            seed,
            tol,
            out,
        } => {
            if restarts == 0 {
                bail!("--restarts must be at least 1");
            }
            let j = channel.build()?;
            let mut search = BiasSearch::new(restarts, seed);
            search.tol = tol;
            let result = search.run(&j)?;
            let params = json!({
                "channel": channel.describe(),
                "restarts": restarts,
                "seed": seed,
                "tol": tol,
            });
            let config = RunConfig::new("qcoh", params, &out, "json");
            emit(
                &out,
                &to_json(&json!({ "config": config, "result": result }))?,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Isometry { channel, out } => {
            let j = channel.build()?;
            emit(&out, &(j.to_json() + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
