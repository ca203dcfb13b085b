//! `twsec`: CSV front end for the tw-secrecy library.

mod manifest;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tw_secrecy::capacity::{capacity, CapacityKind, EveMode};
use tw_secrecy::optimize::{
    crossing_threshold_fixed_eta, crossing_threshold_optimized, log_grid, optimize_eta, sweep_gamma, GammaConvention,
    OptimizeOptions, PerPoint, SweepRow,
};
use tw_secrecy::protosim::{
    estimate_stats_with_bins, leakage_exhaustive, run_rounds, simulate_secret_key, EmpiricalStats, LeakageOptions,
    ProtocolConfig, ZQuantizer, DEFAULT_Z_BINS,
};
use tw_secrecy::report::{Cell, CsvWriter};
use tw_secrecy::satgeo::{parse_scenarios, scenario_table, GridSpec, Scenario, ScenarioPreset};
use tw_secrecy::QuadratureSpec;

use manifest::RunManifest;

const OUT_DIR_ENV: &str = "TWSEC_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "twsec-out";

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "twsec",
    version,
    about = "Secrecy capacities and protocol simulation for BPSK wiretap channels"
)]
struct Cli {
    /// Worker threads for parallel sweeps and simulation.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory; defaults to $TWSEC_OUT_DIR, then ./twsec-out.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// How --gamma maps to the eavesdropper's SNR: snr-ratio (gamma * eta)
    /// or amplitude (gamma^2 * eta).
    #[arg(long, global = true, default_value = "snr-ratio", value_parser = parse_convention)]
    gamma_convention: GammaConvention,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
enum Command {
    /// Evaluate one or all capacities at a single point.
    Capacity(CapacityArgs),
    /// Maximise capacities over eta at a fixed gamma.
    Optimize(OptimizeArgs),
    /// Evaluate capacities over a gamma range.
    Sweep(SweepArgs),
    /// Gamma where one-way and two-way soft capacities cross.
    Threshold(ThresholdArgs),
    /// Worst-case gamma and optimum capacities for satellite scenarios.
    Satellite(SatelliteArgs),
    /// Monte Carlo run of the two-way protocol, or exact key leakage.
    Simulate(SimulateArgs),
    /// Re-run a command from its manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args, Serialize)]
struct CapacityArgs {
    /// ow_soft, ow_hard, tw_soft, tw_hard or all.
    #[arg(long, default_value = "all")]
    kind: String,
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    eta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct EtaSearch {
    #[arg(long, default_value_t = 1e-3)]
    eta_min: f64,
    #[arg(long, default_value_t = 1e4)]
    eta_max: f64,
    /// Points in the coarse log grid before golden-section refinement.
    #[arg(long, default_value_t = 96)]
    grid_points: usize,
}

#[derive(Debug, Args, Serialize)]
struct OptimizeArgs {
    #[arg(long, default_value = "all")]
    kind: String,
    #[arg(long)]
    gamma: f64,
    #[command(flatten)]
    search: EtaSearch,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct SweepArgs {
    #[arg(long, default_value = "all")]
    kind: String,
    /// Gamma range `lo:hi:count`, linear unless --log is given.
    #[arg(long, conflicts_with = "gamma_log")]
    gamma: Option<String>,
    /// Gamma range `lo:hi:count`, log spaced.
    #[arg(long)]
    gamma_log: Option<String>,
    #[arg(long)]
    log: bool,
    /// Fixed eta for every point.
    #[arg(long, default_value_t = 1.0, conflicts_with = "optimize_eta")]
    eta: f64,
    /// Optimise eta separately at every point.
    #[arg(long)]
    optimize_eta: bool,
    #[command(flatten)]
    search: EtaSearch,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ThresholdArgs {
    /// Use eta-optimised capacities on both sides.
    #[arg(long)]
    optimized: bool,
    /// Fixed eta value or range `lo:hi:count`.
    #[arg(long, conflicts_with = "eta_log")]
    eta: Option<String>,
    /// Log-spaced eta range `lo:hi:count`.
    #[arg(long)]
    eta_log: Option<String>,
    #[arg(long)]
    log: bool,
    #[command(flatten)]
    search: EtaSearch,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct SatelliteArgs {
    /// Preset name (I_MEO, I_LEO, II_GEO, II_MEO, II_LEO) or `all`.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Scenario file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    search: EtaSearch,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum EveModeArg {
    Hard,
    Soft,
}

impl From<EveModeArg> for EveMode {
    fn from(m: EveModeArg) -> Self {
        match m {
            EveModeArg::Hard => EveMode::Hard,
            EveModeArg::Soft => EveMode::Soft,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    #[arg(long, default_value_t = 2.0)]
    eta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Protocol rounds; scientific notation such as 1e6 is accepted.
    #[arg(long, default_value = "1e5", value_parser = parse_count)]
    rounds: usize,
    /// Block length: symbols per round.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Hash output length; defaults to n / 2.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum, default_value = "hard")]
    eve_mode: EveModeArg,
    #[arg(long, default_value_t = 0.0)]
    public_ber: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    hash_seed: u64,
    /// Bins for Eve's observation in soft-mode estimates.
    #[arg(long, default_value_t = DEFAULT_Z_BINS)]
    z_bins: usize,
    /// Also write the per-symbol transcript.
    #[arg(long)]
    transcript: bool,
    /// Run one block of n symbols through privacy amplification.
    #[arg(long, conflicts_with = "leakage_exhaustive")]
    key: bool,
    /// Exact key leakage by enumeration (n <= 12).
    #[arg(long)]
    leakage_exhaustive: bool,
    /// Quantiser bins for --leakage-exhaustive.
    #[arg(long, default_value_t = 4)]
    bins: usize,
    /// With --leakage-exhaustive, report every key length from n down to 0.
    #[arg(long)]
    all_m: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ReplayArgs {
    manifest: PathBuf,
}

/// Input rejected before any computation.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn parse_convention(s: &str) -> std::result::Result<GammaConvention, String> {
    s.parse().map_err(|e: tw_secrecy::Error| e.to_string())
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 * 1024.0 {
        Ok(x as usize)
    } else {
        Err(format!("`{s}` is not a whole number"))
    }
}

fn parse_kinds(s: &str) -> Result<Vec<CapacityKind>> {
    if s == "all" {
        return Ok(CapacityKind::ALL.to_vec());
    }
    s.split(',')
        .map(|k| k.trim().parse().map_err(|e: tw_secrecy::Error| usage(e.to_string())))
        .collect()
}

/// `lo:hi:count`, or a single value.
fn parse_range(s: &str, log: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("`{t}` is not a number in `{s}`")))
    };
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [lo, hi, count] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            let count = parse_count(count).map_err(usage)?;
            if count == 0 {
                return Err(usage("range count must be positive"));
            }
            if log {
                if !(lo > 0.0 && hi > 0.0) {
                    return Err(usage("log ranges need positive end points"));
                }
                Ok(log_grid(lo, hi, count))
            } else if count == 1 {
                Ok(vec![lo])
            } else {
                Ok((0..count)
                    .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                    .collect())
            }
        }
        _ => Err(usage(format!("expected `lo:hi:count`, got `{s}`"))),
    }
}

struct RunContext {
    out_dir: PathBuf,
    convention: GammaConvention,
}

impl RunContext {
    fn options(&self, search: &EtaSearch) -> OptimizeOptions {
        OptimizeOptions {
            eta_bounds: (search.eta_min, search.eta_max),
            grid_points: search.grid_points,
            convention: self.convention,
            ..OptimizeOptions::default()
        }
    }

    fn output(&self, explicit: &Option<PathBuf>, default_name: &str) -> PathBuf {
        explicit.clone().unwrap_or_else(|| self.out_dir.join(default_name))
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Results of one command: files written and seeds used.
#[derive(Default)]
struct Outcome {
    outputs: Vec<PathBuf>,
    seeds: Vec<u64>,
}

impl Outcome {
    fn emit(&mut self, path: PathBuf, bytes: Vec<u8>, echo: bool) -> Result<()> {
        write_file(&path, &bytes)?;
        if echo {
            print!("{}", String::from_utf8_lossy(&bytes));
        }
        eprintln!("wrote {}", path.display());
        self.outputs.push(path);
        Ok(())
    }
}

fn cmd_capacity(ctx: &RunContext, a: &CapacityArgs) -> Result<Outcome> {
    let params = ctx.convention.params(a.gamma, a.eta)?;
    let quad = QuadratureSpec::default();
    let mut w = CsvWriter::new(Vec::new(), &["kind", "gamma", "eta", "capacity", "ln_capacity"])?;
    for kind in parse_kinds(&a.kind)? {
        let r = capacity(kind, &params, &quad)?;
        w.row([
            Cell::from(kind.as_str()),
            a.gamma.into(),
            a.eta.into(),
            r.value.into(),
            r.ln_value.into(),
        ])?;
    }
    let mut out = Outcome::default();
    out.emit(ctx.output(&a.out, "capacity.csv"), w.into_inner()?, true)?;
    Ok(out)
}

fn cmd_optimize(ctx: &RunContext, a: &OptimizeArgs) -> Result<Outcome> {
    let opts = ctx.options(&a.search);
    let mut w = CsvWriter::new(
        Vec::new(),
        &["kind", "gamma", "eta_star", "capacity", "ln_capacity", "flag"],
    )?;
    for kind in parse_kinds(&a.kind)? {
        let o = optimize_eta(kind, a.gamma, &opts)?;
        w.row([
            Cell::from(kind.as_str()),
            a.gamma.into(),
            o.eta_star.into(),
            o.capacity_star.into(),
            o.ln_capacity_star.into(),
            o.flag.as_str().into(),
        ])?;
    }
    let mut out = Outcome::default();
    out.emit(ctx.output(&a.out, "optimize.csv"), w.into_inner()?, true)?;
    Ok(out)
}

fn cmd_sweep(ctx: &RunContext, a: &SweepArgs) -> Result<Outcome> {
    let gammas = match (&a.gamma, &a.gamma_log) {
        (Some(r), None) => parse_range(r, a.log)?,
        (None, Some(r)) => parse_range(r, true)?,
        _ => return Err(usage("give --gamma or --gamma-log")),
    };
    let kinds = parse_kinds(&a.kind)?;
    let opts = ctx.options(&a.search);
    opts.validate()?;
    let per_point = if a.optimize_eta {
        PerPoint::OptimizedEta
    } else {
        PerPoint::FixedEta(a.eta)
    };
    let columns: Vec<Vec<SweepRow>> = kinds
        .iter()
        .map(|&k| sweep_gamma(k, &gammas, per_point, &opts))
        .collect();

    let mut header = vec!["gamma".to_string()];
    for k in &kinds {
        header.extend([format!("c_{k}"), format!("eta_{k}"), format!("flag_{k}")]);
    }
    header.push("error".into());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut w = CsvWriter::new(Vec::new(), &header_refs)?;
    let mut failures = 0;
    for (i, &gamma) in gammas.iter().enumerate() {
        let mut cells = vec![Cell::from(gamma)];
        let mut errors = Vec::new();
        for (k, col) in kinds.iter().zip(&columns) {
            let row = &col[i];
            cells.extend([
                Cell::from(row.capacity),
                Cell::from(row.eta),
                Cell::from(row.flag.map(|f| f.as_str())),
            ]);
            if let Some(e) = &row.error {
                errors.push(format!("{k}: {e}").replace(',', ";"));
            }
        }
        failures += !errors.is_empty() as usize;
        cells.push(Cell::from(errors.join(" | ")));
        w.row(cells)?;
    }
    if failures > 0 {
        eprintln!("{failures} of {} points failed; see the error column", gammas.len());
    }
    let mut out = Outcome::default();
    out.emit(ctx.output(&a.out, "sweep.csv"), w.into_inner()?, false)?;
    Ok(out)
}

fn cmd_threshold(ctx: &RunContext, a: &ThresholdArgs) -> Result<Outcome> {
    let opts = ctx.options(&a.search);
    let mut w = CsvWriter::new(Vec::new(), &["mode", "eta", "gamma_cross", "residual"])?;
    let etas = match (&a.eta, &a.eta_log) {
        (Some(r), None) => parse_range(r, a.log)?,
        (None, Some(r)) => parse_range(r, true)?,
        _ => Vec::new(),
    };
    if a.optimized || etas.is_empty() {
        let c = crossing_threshold_optimized(&opts)?;
        w.row([
            Cell::from("optimized"),
            Cell::Empty,
            Cell::from(c.map(|c| c.gamma)),
            Cell::from(c.map(|c| c.residual)),
        ])?;
    }
    for eta in etas {
        let c = crossing_threshold_fixed_eta(eta, &opts)?;
        w.row([
            Cell::from("fixed_eta"),
            Cell::from(eta),
            Cell::from(c.map(|c| c.gamma)),
            Cell::from(c.map(|c| c.residual)),
        ])?;
    }
    let mut out = Outcome::default();
    out.emit(ctx.output(&a.out, "threshold.csv"), w.into_inner()?, true)?;
    Ok(out)
}

fn cmd_satellite(ctx: &RunContext, a: &SatelliteArgs) -> Result<Outcome> {
    let scenarios: Vec<Scenario> = match (&a.preset, &a.config) {
        (Some(p), None) if p.eq_ignore_ascii_case("all") => ScenarioPreset::ALL.iter().map(|p| p.scenario()).collect(),
        (Some(p), None) => vec![p
            .parse::<ScenarioPreset>()
            .map_err(|e| usage(e.to_string()))?
            .scenario()],
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_scenarios(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        _ => return Err(usage("give --preset or --config")),
    };
    let rows = scenario_table(&scenarios, &GridSpec::default(), &ctx.options(&a.search))?;
    let mut w = CsvWriter::new(
        Vec::new(),
        &[
            "scenario",
            "gamma_max",
            "theta_e_rad",
            "rho_e_km",
            "c_tw_soft",
            "c_tw_hard",
            "c_ow_soft",
            "c_ow_hard",
            "eta_tw_soft",
            "eta_tw_hard",
            "flag_tw_soft",
            "flag_tw_hard",
        ],
    )?;
    for r in rows {
        w.row([
            Cell::from(r.name.as_str()),
            r.worst_case.gamma_max.into(),
            r.worst_case.theta_e.into(),
            r.worst_case.rho_e.into(),
            r.tw_soft.capacity_star.into(),
            r.tw_hard.capacity_star.into(),
            r.ow_soft.capacity_star.into(),
            r.ow_hard.capacity_star.into(),
            r.tw_soft.eta_star.into(),
            r.tw_hard.eta_star.into(),
            r.tw_soft.flag.as_str().into(),
            r.tw_hard.flag.as_str().into(),
        ])?;
    }
    let mut out = Outcome::default();
    out.emit(ctx.output(&a.out, "satellite.csv"), w.into_inner()?, true)?;
    Ok(out)
}

fn stats_row(s: &EmpiricalStats) -> Vec<Cell> {
    vec![
        s.sample_count.into(),
        Cell::from(match s.eve_mode {
            EveMode::Hard => "hard",
            EveMode::Soft => "soft",
        }),
        s.z_bins.into(),
        s.eps_a_hat.into(),
        s.std_err.eps_a.into(),
        s.eps_e_hat.into(),
        s.std_err.eps_e.into(),
        s.mi_ab_hat.into(),
        s.std_err.mi_ab.into(),
        s.mi_ae_hat.into(),
        s.std_err.mi_ae.into(),
        s.secrecy_gap().into(),
    ]
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

fn cmd_simulate(ctx: &RunContext, a: &SimulateArgs) -> Result<Outcome> {
    let params = ctx.convention.params(a.gamma, a.eta)?;
    let mut out = Outcome {
        seeds: vec![a.seed, a.hash_seed],
        ..Outcome::default()
    };
    let m = a.m.unwrap_or(a.n / 2);

    if a.leakage_exhaustive {
        let lengths: Vec<usize> = if a.all_m { (0..=a.n).rev().collect() } else { vec![m] };
        let mut w = CsvWriter::new(
            Vec::new(),
            &[
                "n",
                "m",
                "bins",
                "gamma",
                "eta",
                "mi_key_eve",
                "sd_uniform",
                "key_entropy",
            ],
        )?;
        for m in lengths {
            let r = leakage_exhaustive(&LeakageOptions {
                block_len: a.n,
                hash_out_len: m,
                params,
                quantizer: ZQuantizer { bins: a.bins },
                hash_seed: a.hash_seed,
            })?;
            w.row([
                Cell::from(r.block_len),
                r.hash_out_len.into(),
                r.bins.into(),
                a.gamma.into(),
                a.eta.into(),
                r.mi_key_eve.into(),
                r.sd_uniform.into(),
                r.key_entropy.into(),
            ])?;
        }
        out.emit(ctx.output(&a.out, "leakage.csv"), w.into_inner()?, true)?;
        return Ok(out);
    }

    let cfg = ProtocolConfig {
        block_len: a.n,
        params,
        eve_mode: a.eve_mode.into(),
        public_channel_ber: a.public_ber,
        rng_seed: a.seed,
        hash_out_len: m,
        hash_seed: a.hash_seed,
    };

    if a.key {
        let r = simulate_secret_key(&cfg)?;
        let mut w = CsvWriter::new(
            Vec::new(),
            &[
                "n",
                "m",
                "agreement_rate",
                "raw_agreement_rate",
                "leakage_estimate",
                "leakage_source",
                "alice_key",
                "bob_key",
            ],
        )?;
        w.row([
            Cell::from(a.n),
            m.into(),
            r.agreement_rate.into(),
            r.raw_agreement_rate.into(),
            r.leakage_estimate.into(),
            Cell::from(match r.leakage_source {
                tw_secrecy::protosim::LeakageSource::Empirical => "empirical",
                tw_secrecy::protosim::LeakageSource::Analytic => "analytic",
            }),
            bit_string(&r.alice_key).into(),
            bit_string(&r.bob_key).into(),
        ])?;
        out.emit(ctx.output(&a.out, "key.csv"), w.into_inner()?, true)?;
        return Ok(out);
    }

    let ensemble = run_rounds(&cfg, a.rounds)?;
    let stats = estimate_stats_with_bins(&ensemble, a.z_bins)?;
    let mut header = vec!["eta", "gamma", "n", "rounds", "seed", "public_ber"];
    header.extend(EmpiricalStats::CSV_HEADER);
    let mut w = CsvWriter::new(Vec::new(), &header)?;
    let mut row = vec![
        Cell::from(a.eta),
        a.gamma.into(),
        a.n.into(),
        a.rounds.into(),
        a.seed.into(),
        a.public_ber.into(),
    ];
    row.extend(stats_row(&stats));
    w.row(row)?;
    let stats_path = ctx.output(&a.out, "simulate.csv");
    if a.transcript {
        let path = stats_path.with_file_name(format!(
            "{}_transcript.csv",
            stats_path.file_stem().and_then(|s| s.to_str()).unwrap_or("simulate")
        ));
        out.emit(path, ensemble.write_csv(Vec::new())?, false)?;
    }
    out.emit(stats_path, w.into_inner()?, true)?;
    Ok(out)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Capacity(_) => "capacity",
        Command::Optimize(_) => "optimize",
        Command::Sweep(_) => "sweep",
        Command::Threshold(_) => "threshold",
        Command::Satellite(_) => "satellite",
        Command::Simulate(_) => "simulate",
        Command::Replay(_) => "replay",
    }
}

fn resolve_out_dir(explicit: Option<&PathBuf>) -> PathBuf {
    explicit
        .cloned()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        // Fails only if a pool already exists, as during replay.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    if let Command::Replay(r) = &cli.command {
        let m = RunManifest::load(&r.manifest)?;
        let replayed = Cli::try_parse_from(&m.argv).map_err(|e| usage(format!("manifest argv: {e}")))?;
        if matches!(replayed.command, Command::Replay(_)) {
            bail!(usage("a manifest cannot replay another replay"));
        }
        let mut argv = m.argv.clone();
        if replayed.out_dir.is_none() {
            argv.extend(["--out-dir".to_string(), m.out_dir.display().to_string()]);
        }
        let replayed = Cli::try_parse_from(&argv).map_err(|e| usage(e.to_string()))?;
        return execute(replayed, argv);
    }

    let ctx = RunContext {
        out_dir: resolve_out_dir(cli.out_dir.as_ref()),
        convention: cli.gamma_convention,
    };
    let outcome = match &cli.command {
        Command::Capacity(a) => cmd_capacity(&ctx, a),
        Command::Optimize(a) => cmd_optimize(&ctx, a),
        Command::Sweep(a) => cmd_sweep(&ctx, a),
        Command::Threshold(a) => cmd_threshold(&ctx, a),
        Command::Satellite(a) => cmd_satellite(&ctx, a),
        Command::Simulate(a) => cmd_simulate(&ctx, a),
        Command::Replay(_) => unreachable!("handled above"),
    }?;
    let primary = outcome
        .outputs
        .last()
        .ok_or_else(|| anyhow!("command produced no output"))?;
    let manifest = RunManifest::new(
        command_name(&cli.command),
        argv,
        serde_json::to_value(&cli)?,
        outcome.seeds.clone(),
        ctx.out_dir.clone(),
        outcome.outputs.clone(),
    );
    let path = primary.with_extension("manifest.json");
    manifest.save(&path)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<tw_secrecy::Error>() {
            return match e {
                tw_secrecy::Error::NonConvergence { .. } => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<io::Error>().is_some() || cause.downcast_ref::<serde_json::Error>().is_some() {
            return 4;
        }
    }
    1
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
