//! `quake` command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 data/format error, 3 numeric/domain error.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::ann::{load_model, save_model, TrainReport};
use crate::error::{Error, Result};
use crate::io::{
    format_f64, generate_synthetic, parse_config, read_record_file, write_csv, write_record,
    SyntheticKind, SyntheticParams,
};
use crate::pipeline::{
    build_accel_response_set, build_spectrum_set, desired_response, predict_history, round_sig,
    run_experiment, train_surrogate, truncate_for_training, ExperimentResult, ExperimentSpec,
    Features, Mode,
};
use crate::sdof::{
    period_sweep, respond_damped, respond_undamped, response_spectrum_with_kernel, scale_record,
    DampedFrequency, DampingSpec, SdofSystem,
};

pub const SEED_ENV: &str = "QUAKE_SEED";

#[derive(Debug, Parser)]
#[command(name = "quake", version, about = "SDOF earthquake response and neural surrogate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Response history of one system to a record (CSV `t,desired`).
    Respond(RespondArgs),
    /// Peak response against period (CSV `period,peak`).
    Spectrum(SpectrumArgs),
    /// Train a surrogate from an experiment config; writes weights and a training report.
    Train(TrainArgs),
    /// Apply stored weights to a record (CSV `t,desired,predicted`).
    Predict(PredictArgs),
    /// Train and evaluate an experiment; writes the peak/RMS table.
    Eval(EvalArgs),
    /// Write a synthetic ground-motion record.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Natural frequency parameter ω in rad/s.
    #[arg(long)]
    omega: f64,
    /// Decay rate ξω in 1/s; selects the damped kernel when given.
    #[arg(long, conflicts_with = "damping_ratio")]
    damping_rate: Option<f64>,
    /// Damping ratio ξ (rate = ξω); selects the damped kernel when given.
    #[arg(long)]
    damping_ratio: Option<f64>,
    /// Frequency inside the damped kernel: literal or corrected.
    #[arg(long, default_value = "literal")]
    kernel: String,
}

impl SystemArgs {
    fn resolve(&self) -> Result<(SdofSystem, bool)> {
        let kernel: DampedFrequency = self.kernel.parse()?;
        let rate = match (self.damping_rate, self.damping_ratio) {
            (Some(c), _) => Some(DampingSpec::Rate(c).rate_for(self.omega)?),
            (None, Some(xi)) => Some(DampingSpec::Ratio(xi).rate_for(self.omega)?),
            (None, None) => None,
        };
        let system = SdofSystem::new(self.omega, rate.unwrap_or(0.0))?.with_kernel(kernel)?;
        Ok((system, rate.is_some()))
    }
}

#[derive(Debug, Args)]
struct RespondArgs {
    /// Ground-motion record file.
    #[arg(long)]
    record: PathBuf,
    #[command(flatten)]
    system: SystemArgs,
    /// Intensity factor applied to the record first.
    #[arg(long, default_value_t = 1.0)]
    factor: f64,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    record: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    start: f64,
    #[arg(long, default_value_t = 10.0)]
    stop: f64,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    /// `ratio:<ξ>` or `rate:<ξω>`.
    #[arg(long, default_value = "ratio:0.05")]
    damping: String,
    #[arg(long, default_value = "literal")]
    kernel: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Experiment config (key=value lines).
    #[arg(long)]
    config: PathBuf,
    /// Weights file to write.
    #[arg(long)]
    weights: PathBuf,
    /// Training report CSV (`epoch,cumulative_error`).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Overrides QUAKE_SEED and the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    record: PathBuf,
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value_t = 1.0)]
    factor: f64,
    /// Input window the network was trained with (1 = pointwise).
    #[arg(long, default_value_t = 1)]
    window: usize,
    /// The network was trained with a constant bias input.
    #[arg(long)]
    bias: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for per-case `desired` vs `predicted` curves.
    #[arg(long)]
    curves: Option<PathBuf>,
    /// Also store the trained weights here.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// sine, sweep or noise.
    #[arg(long, default_value = "sine")]
    kind: String,
    #[arg(long, default_value_t = 14.92)]
    duration: f64,
    #[arg(long, default_value_t = 0.02)]
    dt: f64,
    /// Peak ground acceleration in m/s².
    #[arg(long, default_value_t = 0.16885)]
    peak: f64,
    /// Tone frequency in Hz (sine).
    #[arg(long, default_value_t = 3.0)]
    freq: f64,
    /// Lower band edge in Hz (sweep, noise).
    #[arg(long, default_value_t = 1.0)]
    f0: f64,
    /// Upper band edge in Hz (sweep, noise).
    #[arg(long, default_value_t = 5.0)]
    f1: f64,
    /// Number of tones (noise).
    #[arg(long, default_value_t = 64)]
    components: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Runs the CLI with `QUAKE_SEED` taken from the process environment.
pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    run(argv, env_seed.as_deref())
}

/// Runs the CLI with an explicit `QUAKE_SEED` value.
pub fn run<I, S>(argv: I, env_seed: Option<&str>) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, env_seed) {
        Ok(()) => 0,
        // A closed downstream pipe (`quake ... | head`) is not a failure.
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("quake: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, env_seed: Option<&str>) -> Result<()> {
    match command {
        Command::Respond(a) => respond(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Train(a) => train_cmd(a, env_seed),
        Command::Predict(a) => predict(a),
        Command::Eval(a) => eval(a, env_seed),
        Command::Gen(a) => gen(a, env_seed),
    }
}

/// Flag, then environment, then config file.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>, file: u64) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(raw) = env {
        return raw
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::usage(format!("{SEED_ENV} must be an unsigned integer, got `{raw}`")));
    }
    Ok(file)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| with_path(e, p))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn with_path(e: io::Error, p: &Path) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", p.display())))
}

fn respond(a: RespondArgs) -> Result<()> {
    let record = scale_record(&read_record_file(&a.record)?, a.factor)?;
    let (system, damped) = a.system.resolve()?;
    let history = if damped {
        respond_damped(&record, &system)?
    } else {
        respond_undamped(&record, system.omega())?
    };
    let t: Vec<f64> = (0..record.len()).map(|n| record.time(n)).collect();
    write_csv(open_output(a.output.as_deref())?, &["t", "desired"], &[&t, history.values()])
}

fn spectrum(a: SpectrumArgs) -> Result<()> {
    let record = read_record_file(&a.record)?;
    let damping: DampingSpec = a.damping.parse()?;
    let kernel: DampedFrequency = a.kernel.parse()?;
    let periods = period_sweep(a.start, a.stop, a.step)?;
    let s = response_spectrum_with_kernel(&record, &periods, damping, kernel)?;
    write_csv(open_output(a.output.as_deref())?, &["period", "peak"], &[s.periods(), s.peaks()])
}

fn load_spec(config: &Path, flag_seed: Option<u64>, env_seed: Option<&str>) -> Result<ExperimentSpec> {
    let file = File::open(config).map_err(|e| with_path(e, config))?;
    let mut cfg = parse_config(BufReader::new(file))?;
    cfg.trainer.seed = resolve_seed(flag_seed, env_seed, cfg.trainer.seed)?;
    let base = config.parent().unwrap_or_else(|| Path::new("."));
    cfg.into_spec(base)
}

fn train_cmd(a: TrainArgs, env_seed: Option<&str>) -> Result<()> {
    let spec = load_spec(&a.config, a.seed, env_seed)?;
    let full = match spec.mode {
        Mode::AccelToResponse => {
            build_accel_response_set(&spec.record, &spec.system, spec.damped, spec.features)?
        }
        Mode::PeriodToPeak => build_spectrum_set(
            &spec.record,
            &spec.sweep.periods()?,
            spec.spectrum_damping,
            spec.features,
        )?,
    };
    let set = truncate_for_training(&full, spec.train_points.unwrap_or(full.len()))?;
    if set.used_fallback() {
        eprintln!("quake: warning: constant training series, normalization scale fell back to 1");
    }
    let (net, report) = train_surrogate(&set, spec.hidden, &spec.trainer)?;
    let out = File::create(&a.weights).map_err(|e| with_path(e, &a.weights))?;
    save_model(&net, set.normalization(), BufWriter::new(out))?;
    if let Some(path) = &a.report {
        write_report(&report, Some(path))?;
    }
    Ok(())
}

fn write_report(report: &TrainReport, path: Option<&Path>) -> Result<()> {
    let epochs: Vec<f64> = (1..=report.epochs_run).map(|e| e as f64).collect();
    write_csv(open_output(path)?, &["epoch", "cumulative_error"], &[&epochs, &report.trace])
}

fn predict(a: PredictArgs) -> Result<()> {
    let file = File::open(&a.weights).map_err(|e| with_path(e, &a.weights))?;
    let (net, norm) = load_model(BufReader::new(file))?;
    let norm = norm.ok_or_else(|| Error::format("weights file has no normalization line"))?;
    let features = Features { window: a.window, bias: a.bias };
    features.validate()?;
    if net.input_size() != features.input_size() {
        return Err(Error::format(format!(
            "dimension mismatch: weights have I={} inputs, window={} bias={} expects {}",
            net.input_size(),
            a.window,
            a.bias,
            features.input_size()
        )));
    }
    let record = scale_record(&read_record_file(&a.record)?, a.factor)?;
    let (system, damped) = a.system.resolve()?;
    let desired = desired_response(&record, &system, damped)?;
    let predicted = predict_history(&net, &norm, features, &record)?;
    let t: Vec<f64> = (0..record.len()).map(|n| record.time(n)).collect();
    write_csv(
        open_output(a.output.as_deref())?,
        &["t", "desired", "predicted"],
        &[&t, &desired, &predicted],
    )
}

fn eval(a: EvalArgs, env_seed: Option<&str>) -> Result<()> {
    let spec = load_spec(&a.config, a.seed, env_seed)?;
    let result = run_experiment(&spec)?;
    if result.normalization_fallback {
        eprintln!("quake: warning: constant training series, normalization scale fell back to 1");
    }
    if let Some(path) = &a.weights {
        let out = File::create(path).map_err(|e| with_path(e, path))?;
        save_model(&result.network, &result.normalization, BufWriter::new(out))?;
    }
    if let Some(dir) = &a.curves {
        write_curves(dir, &result)?;
    }
    write_eval_table(&result, open_output(a.output.as_deref())?)
}

pub fn write_eval_table<W: Write>(result: &ExperimentResult, mut out: W) -> Result<()> {
    writeln!(
        out,
        "label,factor,desired_peak,predicted_peak,desired_peak_5sf,predicted_peak_5sf,rms_error,relative_rms,relative_rms_train_range,peak_relative_error"
    )?;
    for ev in &result.evaluations {
        let m = &ev.metrics;
        let cells = [
            ev.factor,
            m.desired_peak,
            m.predicted_peak,
            round_sig(m.desired_peak, 5),
            round_sig(m.predicted_peak, 5),
            m.rms_error,
            m.relative_rms,
            m.relative_rms_train_range,
            m.peak_relative_error,
        ];
        let cells: Vec<String> = cells.iter().map(|&x| format_f64(x)).collect();
        writeln!(out, "{},{}", ev.label.replace(',', ";"), cells.join(","))?;
    }
    out.flush()?;
    Ok(())
}

fn write_curves(dir: &Path, result: &ExperimentResult) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| with_path(e, dir))?;
    let axis_name = match result.mode {
        Mode::AccelToResponse => "t",
        Mode::PeriodToPeak => "period",
    };
    for ev in &result.evaluations {
        let stem: String = ev
            .label
            .replace('%', "pct")
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
            .collect();
        let path = dir.join(format!("{stem}.csv"));
        let out = File::create(&path).map_err(|e| with_path(e, &path))?;
        write_csv(
            BufWriter::new(out),
            &[axis_name, "desired", "predicted"],
            &[&ev.axis, &ev.desired, &ev.predicted],
        )?;
    }
    Ok(())
}

fn gen(a: GenArgs, env_seed: Option<&str>) -> Result<()> {
    let kind: SyntheticKind = a.kind.parse()?;
    let params = SyntheticParams {
        duration: a.duration,
        dt: a.dt,
        peak: a.peak,
        freq: a.freq,
        f0: a.f0,
        f1: a.f1,
        components: a.components,
    };
    let seed = resolve_seed(a.seed, env_seed, 0)?;
    let record = generate_synthetic(kind, &params, seed)?;
    write_record(&record, open_output(a.output.as_deref())?)
}
