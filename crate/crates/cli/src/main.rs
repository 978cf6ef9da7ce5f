use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hyperqec::harness::{runtime_bench, BenchConfig};
use hyperqec::{
    batch_push, correctness_check, readout, run_sweep, write_csv, DecoderKind, InflationRule,
    Preset, SweepConfig,
};

/// Holographic codes on {p,4} hyperbolic tilings.
#[derive(Parser)]
#[command(name = "hyperqec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write its boundary operators.
    Generate(GenerateArgs),
    /// Monte Carlo recovery rates over a grid of error rates.
    Sweep(SweepArgs),
    /// Time code generation and the decoders.
    Bench(BenchArgs),
    /// Push operators, run the correctness check and validate the code.
    Check(CodeArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// max-happy, zero-happy or zero-steane
    #[arg(long)]
    preset: Preset,
    #[arg(long, default_value_t = 0)]
    layers: usize,
    /// vertex or edge
    #[arg(long, default_value_t = InflationRule::Vertex)]
    rule: InflationRule,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    out: PathBuf,
    /// Also write the network description here.
    #[arg(long)]
    network: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    preset: Preset,
    /// Comma-separated layer counts; with several, `--out` must contain `{R}`.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    layers: Vec<usize>,
    #[arg(long, default_value_t = InflationRule::Vertex)]
    rule: InflationRule,
    /// erasure, intopt or tn
    #[arg(long)]
    decoder: DecoderKind,
    #[arg(long)]
    p_start: Option<f64>,
    #[arg(long)]
    p_end: Option<f64>,
    #[arg(long)]
    p_step: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    rx: Option<f64>,
    /// Defaults to `1 - rx - rz`.
    #[arg(long)]
    ry: Option<f64>,
    #[arg(long)]
    rz: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Logical qubits that must survive, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    targets: Vec<usize>,
    /// Record the wall-clock time in the CSV metadata.
    #[arg(long)]
    timestamp: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Repeatable; defaults to every preset.
    #[arg(long)]
    preset: Vec<Preset>,
    #[arg(long, default_value_t = 2)]
    max_layers: usize,
    #[arg(long, default_value_t = 20)]
    events: usize,
    #[arg(long, default_value_t = 0.1)]
    p: f64,
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let net = args.code.preset.build_with(args.code.layers, args.code.rule)?;
    let ops = hyperqec::generate_operators(&net)?;
    ops.save(&args.out)?;
    if let Some(path) = &args.network {
        std::fs::write(path, net.describe())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    println!(
        "{} L={}: n={} k={} stabilizers={} -> {}",
        args.code.preset,
        args.code.layers,
        ops.n,
        ops.k(),
        ops.stabilizers.len(),
        args.out.display()
    );
    Ok(())
}

fn output_for(template: &Path, layers: usize, several: bool) -> Result<PathBuf> {
    let s = template.to_string_lossy();
    if s.contains("{R}") {
        Ok(PathBuf::from(s.replace("{R}", &layers.to_string())))
    } else if several {
        bail!("--out must contain {{R}} when sweeping several layer counts");
    } else {
        Ok(template.to_path_buf())
    }
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let several = args.layers.len() > 1;
    for &layers in &args.layers {
        let mut cfg = match args.decoder {
            DecoderKind::Erasure => SweepConfig::erasure(args.preset, layers),
            d => SweepConfig::pauli(args.preset, layers, d),
        };
        cfg.rule = args.rule;
        cfg.p_start = args.p_start.unwrap_or(cfg.p_start);
        cfg.p_end = args.p_end.unwrap_or(cfg.p_end);
        cfg.p_step = args.p_step.unwrap_or(cfg.p_step);
        cfg.trials = args.trials.unwrap_or(cfg.trials);
        cfg.rx = args.rx.unwrap_or(cfg.rx);
        cfg.rz = args.rz.unwrap_or(cfg.rz);
        cfg.ry = args.ry.unwrap_or(1.0 - cfg.rx - cfg.rz);
        cfg.master_seed = args.seed;
        cfg.workers = args.workers;
        cfg.targets = args.targets.clone();
        if args.timestamp {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            cfg.timestamp = Some(format!("unix:{secs}"));
        }
        let out = output_for(&args.out, layers, several)?;
        let result = run_sweep(&cfg)?;
        write_csv(&result, &out)?;
        println!("{} L={layers}: {} rows -> {}", args.preset, result.rows.len(), out.display());
    }
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<()> {
    let cfg = BenchConfig {
        presets: if args.preset.is_empty() {
            Preset::ALL.to_vec()
        } else {
            args.preset.clone()
        },
        max_layers: args.max_layers,
        events: args.events,
        p: args.p,
        ..BenchConfig::default()
    };
    for row in runtime_bench(&cfg) {
        println!("{row}");
    }
    Ok(())
}

fn check(args: &CodeArgs) -> Result<bool> {
    let net = args.preset.build_with(args.layers, args.rule)?;
    let pushed = batch_push(&net)?;
    let report = correctness_check(&net, &pushed);
    for d in report.diagnostics.iter().take(20) {
        println!("mismatch: {d}");
    }
    let ops = readout(&net, &pushed);
    let problems = ops.validate();
    for p in problems.iter().take(20) {
        println!("invalid: {p}");
    }
    let ok = report.ok() && problems.is_empty();
    println!(
        "{} L={} rule={}: tensors={} n={} k={} operators={} {}",
        args.preset,
        args.layers,
        args.rule,
        net.tensors.len(),
        ops.n,
        ops.k(),
        pushed.operators.len(),
        if ok { "ok" } else { "FAILED" }
    );
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Generate(a) => generate(a).map(|_| true),
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Bench(a) => bench(a).map(|_| true),
        Command::Check(a) => check(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
