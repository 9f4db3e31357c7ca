use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fracfem_cli::{
    emit_table, run_experiment, CliError, ExampleKind, ExperimentConfig, GradingKind, MethodKind, OutputFormat, QKind,
};

/// Convergence studies for −D₀^α u + q u = f.
#[derive(Debug, Parser)]
#[command(name = "fracfem", version)]
struct Args {
    /// JSON config file; flags given on the command line override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated orders, e.g. 1.25,1.5,1.75.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Source: a, b, c or custom.
    #[arg(long)]
    example: Option<String>,
    /// Potential: zero, x_times_1mx or custom.
    #[arg(long)]
    q: Option<String>,
    /// standard, recon or recon_mixed.
    #[arg(long)]
    method: Option<String>,
    /// Level range k_min..k_max, mesh size 2^-k.
    #[arg(long)]
    levels: Option<String>,
    /// Use graded meshes x_j = (j/m)^DELTA.
    #[arg(long, value_name = "DELTA")]
    graded: Option<f64>,
    /// Mesh size (power of two) of the reference solve used when q is nonzero
    #[arg(long)]
    reference_m: Option<usize>,
    /// csv or markdown.
    #[arg(long)]
    format: Option<String>,
    /// Write the table here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Custom source expression, e.g. "chi(0,0.5)*x".
    #[arg(long)]
    f_expr: Option<String>,
    /// Exponent p with f ~ x^p at 0.
    #[arg(long, allow_negative_numbers = true)]
    f_hint: Option<f64>,
    /// Custom potential expression
    #[arg(long)]
    q_expr: Option<String>,
    /// Exponent p with q ~ x^p at 0
    #[arg(long, allow_negative_numbers = true)]
    q_hint: Option<f64>,
}

fn enum_arg<T: serde::de::DeserializeOwned>(name: &str, v: &str) -> Result<T, CliError> {
    serde_json::from_value(serde_json::Value::String(v.to_string()))
        .map_err(|_| CliError::Config(format!("invalid --{name} value '{v}'")))
}

fn parse_levels(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Config(format!("levels must look like 5..10, got '{s}'"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn build_config(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?
        }
        None => ExperimentConfig::new(vec![1.25, 1.5, 1.75], ExampleKind::A, QKind::Zero, MethodKind::Standard, 5, 10),
    };
    if let Some(a) = &args.alpha {
        cfg.alpha_list = a.clone();
    }
    if let Some(v) = &args.example {
        cfg.example = enum_arg("example", v)?;
    }
    if let Some(v) = &args.q {
        cfg.q_kind = enum_arg("q", v)?;
    }
    if let Some(v) = &args.method {
        cfg.method = enum_arg("method", v)?;
    }
    if let Some(v) = &args.levels {
        (cfg.k_min, cfg.k_max) = parse_levels(v)?;
    }
    if let Some(d) = args.graded {
        cfg.grading = GradingKind::Graded;
        cfg.delta = Some(d);
    }
    if let Some(m) = args.reference_m {
        cfg.reference_m = m;
    }
    if let Some(v) = &args.format {
        cfg.output = enum_arg::<OutputFormat>("format", v)?;
    }
    if args.f_expr.is_some() {
        cfg.f_expr = args.f_expr.clone();
    }
    if args.f_hint.is_some() {
        cfg.f_hint = args.f_hint;
    }
    if args.q_expr.is_some() {
        cfg.q_expr = args.q_expr.clone();
    }
    if args.q_hint.is_some() {
        cfg.q_hint = args.q_hint;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &Args) -> Result<bool, CliError> {
    let cfg = build_config(args)?;
    let study = run_experiment(&cfg)?;
    let text = emit_table(&study, cfg.output);
    match &args.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?
        }
        None => print!("{text}"),
    }
    for cell in &study.cells {
        if let Err(msg) = &cell.outcome {
            eprintln!("alpha = {}: {msg}", cell.alpha);
        }
    }
    Ok(!study.any_failed())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
