// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use bathflow::flow::{bath_exponent, flow_ode, stopping_frequency, StopStatus};
use bathflow::sweep::{
    flag_summary, flow_trajectories, write_trajectories_csv, write_trajectories_json, Figure,
    GridSpec, InstanceSpec, SweepConfig, TrajectoryConfig, CSV_HEADER,
};
use bathflow::textfmt::g12;
use bathflow::{ghz_measured_offdiagonal, ghz_offdiagonal_factor, BathSpec, PauliOperator};

/// Dense matrices above this many qubits are not built for the GHZ check.
const GHZ_DENSE_LIMIT: usize = 12;
const THREADS_ENV: &str = "BATHFLOW_THREADS";

#[derive(Parser, Debug)]
#[command(name = "bathflow", version, about = "Ohmic-bath scaling of qubit Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Flow a Pauli-string Hamiltonian to a lower cutoff.
    Flow(FlowArgs),
    /// GHZ coherence factor, analytic and channel-measured.
    Ghz(GhzArgs),
    /// Evaluate a single (s, alpha) point and print one CSV row.
    Run(RunArgs),
    /// Run a grid sweep from a config file or a figure preset.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct FlowArgs {
    /// Hamiltonian, e.g. "0.5*XXI + 0.25*ZZI".
    hamiltonian: String,
    /// Coupling per qubit; a single value applies to every qubit.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    #[arg(long)]
    omega_c: f64,
    /// Final cutoff.
    #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
    omega0: Option<f64>,
    /// Stop at the self-consistent cutoff instead of a fixed one.
    #[arg(long)]
    auto: bool,
    #[arg(long, default_value_t = bathflow::sweep::DEFAULT_ETA)]
    eta: f64,
    /// Log-spaced integration steps.
    #[arg(long, default_value_t = bathflow::sweep::DEFAULT_ODE_STEPS)]
    steps: usize,
    /// Write the sampled coefficients to this CSV file.
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GhzArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    /// omega0 / omega_c
    #[arg(long)]
    ratio: f64,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Sweep config supplying instance and bath settings; defaults to the
    /// 12-qubit benchmark ring.
    config: Option<PathBuf>,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    alpha: f64,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Sweep config (TOML).
    #[arg(required_unless_present = "figure", conflicts_with = "figure")]
    config: Option<PathBuf>,
    /// Preset: s1, 2, s2, s3 or s4.
    #[arg(long)]
    figure: Option<String>,
    /// Replace the alpha grid.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Replace the s grid.
    #[arg(long, value_delimiter = ',')]
    s: Option<Vec<f64>>,
    #[command(flatten)]
    overrides: Overrides,
    /// Output directory for preset files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV output path (overrides the config).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON output path (overrides the config).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Overrides {
    #[arg(long)]
    omega_c: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// ODE steps recorded in the config.
    #[arg(long)]
    steps: Option<usize>,
    /// Seed of the random regular graph.
    #[arg(long)]
    seed: Option<u64>,
}

impl Overrides {
    fn apply(&self, cfg: &mut SweepConfig) -> anyhow::Result<()> {
        if let Some(v) = self.omega_c {
            cfg.omega_c = v;
        }
        if let Some(v) = self.eta {
            cfg.eta = v;
        }
        if let Some(v) = self.steps {
            cfg.ode_steps = v;
        }
        if let Some(v) = self.seed {
            match &mut cfg.instance {
                InstanceSpec::Afm { seed, .. } => *seed = v,
                InstanceSpec::Operator { .. } => {
                    bail!("--seed needs an afm instance")
                }
            }
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    let result = match cli.command {
        Command::Flow(args) => cmd_flow(args),
        Command::Ghz(args) => cmd_ghz(args),
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let numerical = e
        .chain()
        .any(|c| matches!(c.downcast_ref::<bathflow::Error>(), Some(err) if err.is_numerical()));
    if numerical {
        2
    } else {
        1
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .with_context(|| format!("{THREADS_ENV}={value} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring thread pool")?;
    Ok(())
}

fn cmd_flow(args: FlowArgs) -> anyhow::Result<()> {
    let h: PauliOperator = args
        .hamiltonian
        .parse()
        .with_context(|| format!("parsing hamiltonian '{}'", args.hamiltonian))?;
    let n = h.num_qubits();
    let alpha = match args.alpha.as_slice() {
        [a] => vec![*a; n],
        list if list.len() == n => list.to_vec(),
        list => bail!("--alpha has {} values for {n} qubits", list.len()),
    };
    let bath = BathSpec::new(args.omega_c, alpha)?;

    let omega0 = if args.auto {
        let stop = stopping_frequency(&h, &bath, args.eta)?;
        let status = match stop.status {
            StopStatus::Converged => "converged",
            StopStatus::AtCutoff => "at_cutoff",
            StopStatus::FullyLocalized => "fully_localized",
        };
        println!("omega0_star\t{}", g12(stop.omega0));
        println!("status\t{status}");
        stop.omega0
    } else {
        args.omega0.expect("clap enforces omega0 or auto")
    };

    let flow = flow_ode(&h, &bath, omega0, args.steps)?;
    println!("omega0\t{}", g12(flow.omega0));
    println!("string\tc\tcoefficient\teffective");
    for (s, coefficient) in h.terms() {
        println!(
            "{s}\t{}\t{}\t{}",
            g12(bath_exponent(s, &bath)?),
            g12(coefficient),
            g12(flow.effective.coefficient(s))
        );
    }
    println!("H_eff\t{}", flow.effective);

    if let Some(path) = args.trajectory {
        let mut out = csv::Writer::from_path(&path)
            .with_context(|| format!("creating {}", path.display()))?;
        let strings: Vec<_> = h.terms().map(|(s, _)| *s).collect();
        let mut header = vec!["omega0".to_string()];
        header.extend(strings.iter().map(|s| s.to_string()));
        out.write_record(&header)?;
        for sample in &flow.trajectory {
            let mut row = vec![g12(sample.omega0)];
            row.extend(strings.iter().map(|s| g12(sample.operator.coefficient(s))));
            out.write_record(&row)?;
        }
        out.flush()?;
    }
    Ok(())
}

fn cmd_ghz(args: GhzArgs) -> anyhow::Result<()> {
    let analytic = ghz_offdiagonal_factor(args.n, args.alpha, args.ratio)?;
    println!("analytic\t{}", g12(analytic));
    if args.n <= GHZ_DENSE_LIMIT {
        let measured = ghz_measured_offdiagonal(args.n, args.alpha, args.ratio)?;
        println!("measured\t{}", g12(measured));
        let difference = (measured - analytic).abs();
        if difference > 1e-12 {
            return Err(bathflow::Error::Numerical(format!(
                "channel value differs from the analytic factor by {difference:e}"
            ))
            .into());
        }
    }
    Ok(())
}

fn load_config(path: Option<&Path>) -> anyhow::Result<SweepConfig> {
    match path {
        Some(p) => Ok(SweepConfig::from_file(p)?),
        None => Ok(Figure::Two.sweep_config().expect("sweep preset")),
    }
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let mut cfg = load_config(args.config.as_deref())?;
    args.overrides.apply(&mut cfg)?;
    cfg.grid.s = GridSpec::List(vec![args.s]);
    cfg.grid.alpha = GridSpec::List(vec![args.alpha]);
    cfg.validate()?;
    let record = bathflow::run_point(&cfg, args.s, args.alpha)?;
    let mut out = csv::Writer::from_writer(std::io::stdout());
    out.write_record(CSV_HEADER)?;
    out.write_record(record.csv_fields())?;
    out.flush()?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<()> {
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let (mut cfg, preset) = match &args.figure {
        Some(name) => {
            let figure: Figure = name.parse()?;
            match figure.sweep_config() {
                Some(cfg) => (cfg, Some(figure)),
                None => return emit_trajectories(&args, figure, &out_dir),
            }
        }
        None => (load_config(args.config.as_deref())?, None),
    };
    args.overrides.apply(&mut cfg)?;
    if let Some(alpha) = &args.alpha {
        cfg.grid.alpha = GridSpec::List(alpha.clone());
    }
    if let Some(s) = &args.s {
        cfg.grid.s = GridSpec::List(s.clone());
    }
    if let Some(figure) = preset {
        cfg.output.csv = Some(out_dir.join(format!("fig_{}.csv", figure.name())));
    }
    if let Some(p) = &args.csv {
        cfg.output.csv = Some(p.clone());
    }
    if let Some(p) = &args.json {
        cfg.output.json = Some(p.clone());
    }
    if cfg.output.csv.is_none() && cfg.output.json.is_none() {
        cfg.output.csv = Some(out_dir.join("sweep.csv"));
    }
    cfg.validate()?;

    let records = bathflow::run_sweep(&cfg)?;
    let s_count = cfg.s_values()?.len();
    let alpha_count = cfg.alpha_values()?.len();
    println!("grid\t{s_count} x {alpha_count} = {} points", records.len());
    let flags = flag_summary(&records);
    if flags.is_empty() {
        println!("flagged\t0");
    }
    for (flag, count) in &flags {
        println!("flagged\t{flag}\t{count}");
    }
    for path in [&cfg.output.csv, &cfg.output.json].into_iter().flatten() {
        println!("wrote\t{}", path.display());
    }
    if !records.is_empty() && records
        .iter()
        .all(|r| r.flags.iter().any(|f| f.starts_with("error"))) {
        return Err(anyhow!(bathflow::Error::Numerical(
            "every grid point failed".into()
        )));
    }
    Ok(())
}

fn emit_trajectories(args: &SweepArgs, figure: Figure, out_dir: &Path) -> anyhow::Result<()> {
    if args.alpha.is_some() || args.s.is_some() || args.overrides.seed.is_some() {
        bail!("--alpha, --s and --seed do not apply to --figure s1");
    }
    let mut cfg = TrajectoryConfig::default();
    if let Some(v) = args.overrides.omega_c {
        cfg.omega_start = v;
    }
    if let Some(v) = args.overrides.eta {
        cfg.eta = v;
    }
    if let Some(v) = args.overrides.steps {
        cfg.steps = v;
    }
    let rows = flow_trajectories(&cfg)?;
    let path = args
        .csv
        .clone()
        .unwrap_or_else(|| out_dir.join(format!("fig_{}.csv", figure.name())));
    write_trajectories_csv(&rows, &path)?;
    if let Some(json) = &args.json {
        write_trajectories_json(&rows, json)?;
    }
    println!("curves\t{}", cfg.exponents.len());
    println!("rows\t{}", rows.len());
    println!("wrote\t{}", path.display());
    Ok(())
}
