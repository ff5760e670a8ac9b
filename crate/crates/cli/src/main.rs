use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use groupbuy::{emit_report, run_experiment, ExperimentConfig, Mno, Scheme, TrafficKind};

/// Simulate day-ahead/real-time energy purchase by two cellular operators
/// under non-cooperative, full-cooperation and Nash-bargaining schemes.
#[derive(Debug, Parser)]
#[command(name = "groupbuy", version)]
struct Args {
    /// Flat key=value file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; every random stream is derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Base-station pairs (K).
    #[arg(long = "bs-pairs")]
    bs_pairs: Option<usize>,
    /// Slots per day (N).
    #[arg(long)]
    slots: Option<usize>,
    /// Monte-Carlo samples per slot for day-ahead planning (M).
    #[arg(long = "mc-samples")]
    mc_samples: Option<usize>,
    /// Realised days to average over (R).
    #[arg(long)]
    realizations: Option<usize>,
    /// symmetric | asymmetric | file:<path>
    #[arg(long)]
    traffic: Option<TrafficKind>,
    /// CSV with header slot,alpha,alpha_buy_pred,alpha_sell_pred.
    #[arg(long)]
    prices: Option<PathBuf>,
    /// noncoop | fullcoop | bargain | all
    #[arg(long)]
    scheme: Option<String>,
    /// Output directory for the CSV reports.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_config(args: &Args) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_kv_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.bs_pairs {
        cfg.set("bs-pairs", &v.to_string())?;
    }
    if let Some(v) = args.slots {
        cfg.set("slots", &v.to_string())?;
    }
    if let Some(v) = args.mc_samples {
        cfg.set("mc-samples", &v.to_string())?;
    }
    if let Some(v) = args.realizations {
        cfg.set("realizations", &v.to_string())?;
    }
    if let Some(v) = &args.traffic {
        cfg.traffic = v.clone();
    }
    if let Some(v) = &args.prices {
        cfg.prices = Some(v.clone());
    }
    if let Some(v) = &args.scheme {
        cfg.schemes = Scheme::parse_list(v)?;
    }
    if let Some(v) = &args.out {
        cfg.out = v.clone();
    }
    Ok(cfg)
}

fn run(args: Args) -> Result<()> {
    let cfg = build_config(&args)?;
    let report = run_experiment(&cfg).context("experiment failed")?;
    let files = emit_report(&report, &cfg.out)
        .with_context(|| format!("writing reports to {}", cfg.out.display()))?;

    for s in &report.schemes {
        let total = s.daily_total();
        let pct = report.reduction_pct(s.scheme, None).unwrap_or(0.0);
        print!(
            "{:<9} total {:>12.2}  ({:+.2}%)",
            s.scheme.label(),
            total,
            -pct
        );
        if s.per_mno.is_some() {
            for mno in Mno::BOTH {
                let pct = report.reduction_pct(s.scheme, Some(mno)).unwrap_or(0.0);
                print!(
                    "  mno{} {:>10.2} ({:+.2}%)",
                    mno.label(),
                    s.daily(mno).unwrap_or(0.0),
                    -pct
                );
            }
        }
        println!();
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
