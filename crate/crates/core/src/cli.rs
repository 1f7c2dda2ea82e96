//! Command-line front end: `features`, `fit`, `analyze`, `decode`, `stream`.
//!
//! Every flag can also be set in a TOML file passed with `--config`, under a
//! table named after the subcommand with keys spelled like the long flags:
//!
//! ```toml
//! [decode]
//! model = "model.json"
//! half-life = 0.5
//! ```
//!
//! Flags given on the command line take precedence over the file.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::parser::ValueSource;
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::audio::{load_audio, PacedSource, Pacing, CANONICAL_RATE};
use crate::decoder::{
    read_trace_records, smooth, write_trace_csv, write_trace_jsonl, Decoder, EmotionTrace,
    FeatureExtractor, LiveSession, SmoothingSpec, WindowSpec,
};
use crate::dsp::{mean_rms, onset_density, rms_trace};
use crate::format::sig4;
use crate::io::write_atomic;
use crate::midlevel::{parse_provider, ConstantProvider, MidLevelProvider, MidLevelVector};
use crate::regression::{
    fit_emotion_model, fit_report, importance_report, load_dataset, load_model, save_model,
    EmotionModel, FeatureSubset,
};
use crate::server::{serve, ReplayPacing, ServerConfig, SessionSource};

#[derive(Debug, Parser)]
#[command(name = "emotrace", version, about = "Decode valence and arousal from music audio")]
pub struct Cli {
    /// TOML file with per-subcommand defaults; command-line flags win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract RMS, onsets and per-window features from an audio file
    Features(FeaturesArgs),
    /// Fit a regression model from a feature dataset and print the fit report
    Fit(FitArgs),
    /// Print and export the T-statistic feature importance of a model
    Analyze(AnalyzeArgs),
    /// Decode an audio file into an emotion trace
    Decode(DecodeArgs),
    /// Serve a live decode or a recorded trace to WebSocket clients
    Stream(StreamArgs),
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    /// Input WAV file
    #[arg(long, value_name = "WAV")]
    pub audio: PathBuf,
    /// Output directory for rms.csv, onsets.csv, windows.csv and summary.csv
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Analysis window length in seconds
    #[arg(long, default_value_t = 5.0)]
    pub window: f64,
    /// Analysis window hop in seconds
    #[arg(long, default_value_t = 1.0)]
    pub hop: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Dataset CSV: clip_id, the nine feature columns, arousal, valence
    #[arg(long, value_name = "CSV")]
    pub dataset: PathBuf,
    /// Feature subset: all, midlevel7, new2, or a comma-separated list of feature names
    #[arg(long, default_value = "all")]
    pub features: String,
    /// Output model file (JSON)
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Also fit and report the three standard feature sets
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Model file written by `fit`
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Directory for importance.csv and importance.svg
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Input WAV file
    #[arg(long, value_name = "WAV")]
    pub audio: PathBuf,
    /// Model file written by `fit`
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Mid-level feature source: constant:<v1,...,v7> or trace:<csv>
    #[arg(long, value_name = "SPEC")]
    pub provider: Option<String>,
    /// One prediction for the whole clip
    #[arg(long = "static", conflicts_with = "dynamic")]
    pub static_mode: bool,
    /// One prediction per sliding window (the default)
    #[arg(long)]
    pub dynamic: bool,
    /// Output trace (.csv for CSV, anything else for JSON lines); stdout if omitted
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Append the smoothed trace after the raw trace
    #[arg(long)]
    pub smooth: bool,
    /// Smoothed trace sample rate in Hz
    #[arg(long, default_value_t = 30.0)]
    pub render_rate: f64,
    /// Smoothing half-life in seconds
    #[arg(long, default_value_t = 0.35)]
    pub half_life: f64,
    /// Dynamic window length in seconds
    #[arg(long, default_value_t = 5.0)]
    pub window: f64,
    /// Dynamic window hop in seconds
    #[arg(long, default_value_t = 1.0)]
    pub hop: f64,
}

#[derive(Debug, Args)]
pub struct StreamArgs {
    /// Decode this WAV file live
    #[arg(long, value_name = "WAV", conflicts_with = "trace", required_unless_present = "trace")]
    pub audio: Option<PathBuf>,
    /// Replay this recorded trace
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,
    /// Model file, required with --audio
    #[arg(long, value_name = "FILE", required_unless_present = "trace")]
    pub model: Option<PathBuf>,
    /// Mid-level feature source: constant:<v1,...,v7> or trace:<csv>
    #[arg(long, value_name = "SPEC")]
    pub provider: Option<String>,
    /// Replay the smoothed records of the trace instead of the raw ones
    #[arg(long)]
    pub smoothed: bool,
    /// Address to listen on
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    /// Port to listen on (0 picks a free port)
    #[arg(long, default_value_t = 8765)]
    pub port: u16,
    /// Playback speed factor
    #[arg(long, default_value_t = 1.0)]
    pub speed: f64,
    /// Samples per ingested chunk in live mode
    #[arg(long, default_value_t = 1024)]
    pub chunk: usize,
    /// Start the session once this many clients are connected
    #[arg(long, default_value_t = 0)]
    pub wait_for_clients: usize,
    /// Directory of static files served alongside the stream (e.g. a web UI)
    #[arg(long, value_name = "DIR")]
    pub static_dir: Option<PathBuf>,
    /// Seconds to wait for clients to disconnect after the end frame
    #[arg(long, default_value_t = 2.0)]
    pub linger: f64,
}

/// Parses `args` (program name first), applying a `--config` file if given.
pub fn parse_args<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cmd = Cli::command();
    // first pass tolerates flags that only the config file supplies
    let partial = cmd.clone().ignore_errors(true).try_get_matches_from(&argv)?;
    if let Some(path) = partial.get_one::<PathBuf>("config") {
        let extra = config_args(&cmd, &partial, path)
            .map_err(|e| Cli::command().error(clap::error::ErrorKind::InvalidValue, e))?;
        argv.extend(extra);
    }
    let matches = cmd.try_get_matches_from(&argv)?;
    Cli::from_arg_matches(&matches)
}

/// Flags from the config table of the chosen subcommand that the command
/// line did not already set.
fn config_args(
    cmd: &clap::Command,
    matches: &clap::ArgMatches,
    path: &Path,
) -> Result<Vec<OsString>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let table: toml::Table =
        toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
    let Some((name, sub_matches)) = matches.subcommand() else {
        return Ok(Vec::new());
    };
    for key in table.keys() {
        if cmd.find_subcommand(key).is_none() {
            return Err(format!("config {}: unknown table [{key}]", path.display()));
        }
    }
    let Some(section) = table.get(name) else {
        return Ok(Vec::new());
    };
    let section = section
        .as_table()
        .ok_or_else(|| format!("config {}: [{name}] must be a table", path.display()))?;
    let sub = cmd.find_subcommand(name).expect("matched subcommand exists");

    let given = |id: &str| sub_matches.value_source(id) == Some(ValueSource::CommandLine);
    let mut out = Vec::new();
    for (key, value) in section {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| format!("config {}: unknown key '{key}' in [{name}]", path.display()))?;
        let id = arg.get_id().as_str();
        if given(id)
            || sub
                .get_arg_conflicts_with(arg)
                .iter()
                .any(|c| given(c.get_id().as_str()))
        {
            continue;
        }
        let flag = OsString::from(format!("--{key}"));
        match value {
            toml::Value::Boolean(true) => out.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => out.extend([flag, s.into()]),
            toml::Value::Integer(i) => out.extend([flag, i.to_string().into()]),
            toml::Value::Float(f) => out.extend([flag, f.to_string().into()]),
            other => {
                return Err(format!(
                    "config {}: unsupported value for '{key}': {other}",
                    path.display()
                ))
            }
        }
    }
    Ok(out)
}

/// Entry point for the binary: parses the process arguments, runs the
/// command and maps failures to exit codes (2 for usage, 1 otherwise).
pub fn main() -> ExitCode {
    let cli = match parse_args(std::env::args_os()) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Features(a) => cmd_features(&a),
        Command::Fit(a) => cmd_fit(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Decode(a) => cmd_decode(&a),
        Command::Stream(a) => cmd_stream(&a),
    }
}

fn cmd_features(args: &FeaturesArgs) -> anyhow::Result<()> {
    let spec = WindowSpec::new(args.window, args.hop)?;
    let audio = load_audio(&args.audio)?;
    let extractor = FeatureExtractor::default();
    let duration = audio.duration_seconds();

    let rms = rms_trace(&audio, extractor.rms_frames);
    let mut rms_csv = String::from("time_s,rms\n");
    for (t, v) in rms.frame_times.iter().zip(&rms.values) {
        let _ = writeln!(rms_csv, "{t},{v}");
    }

    let onsets = extractor.onsets(&audio)?;
    let mut onsets_csv = String::from("time_s\n");
    for t in &onsets.onset_times {
        let _ = writeln!(onsets_csv, "{t}");
    }

    let rate = audio.sample_rate();
    let mut windows_csv = String::from("t_start,t_end,onset_density,mean_rms\n");
    let windows = crate::decoder::dynamic_windows(audio.len(), rate, spec);
    for &(s, e) in &windows {
        let w = extractor.window(&audio.samples()[s..e], rate)?;
        let r = f64::from(rate);
        let _ = writeln!(
            windows_csv,
            "{},{},{},{}",
            s as f64 / r,
            e as f64 / r,
            w.onset_density,
            w.mean_rms
        );
    }

    let (density, level) = if duration > 0.0 {
        (onset_density(&onsets, 0.0, duration), mean_rms(&rms, 0.0, duration))
    } else {
        (0.0, 0.0)
    };
    let summary = format!(
        "duration,onsets,onset_density,mean_rms\n{duration},{},{density},{level}\n",
        onsets.len()
    );

    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    write_atomic(args.out.join("rms.csv"), rms_csv.as_bytes())?;
    write_atomic(args.out.join("onsets.csv"), onsets_csv.as_bytes())?;
    write_atomic(args.out.join("windows.csv"), windows_csv.as_bytes())?;
    write_atomic(args.out.join("summary.csv"), summary.as_bytes())?;

    println!("{}", args.audio.display());
    println!("  duration       {} s", sig4(duration));
    println!("  onsets         {}", onsets.len());
    println!("  onset density  {} /s", sig4(density));
    println!("  mean RMS       {}", sig4(level));
    println!("  windows        {}", windows.len());
    Ok(())
}

fn cmd_fit(args: &FitArgs) -> anyhow::Result<()> {
    let subset = FeatureSubset::parse(&args.features)?;
    let dataset = load_dataset(&args.dataset)?;
    let model = fit_emotion_model(&dataset, &subset)?;

    let mut shown: Vec<EmotionModel> = Vec::new();
    if args.compare {
        for s in [
            FeatureSubset::all(),
            FeatureSubset::midlevel7(),
            FeatureSubset::new2(),
        ] {
            if s != subset {
                shown.push(fit_emotion_model(&dataset, &s)?);
            }
        }
    }
    let mut rows: Vec<&EmotionModel> = vec![&model];
    rows.extend(shown.iter());
    print!("{}", fit_report(&rows));
    println!("n = {}, p = {}", dataset.len(), model.p());

    save_model(&model, &args.out)?;
    println!("model written to {}", args.out.display());
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> anyhow::Result<()> {
    let model = load_model(&args.model)?;
    let report = importance_report(&model);
    print!("{}", report.to_table());
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        write_atomic(dir.join("importance.csv"), report.to_csv().as_bytes())?;
        write_atomic(dir.join("importance.svg"), report.to_svg().as_bytes())?;
        println!("importance written to {}", dir.display());
    }
    Ok(())
}

/// The provider named on the command line, or zeros when the model uses no
/// mid-level feature.
fn resolve_provider(
    spec: Option<&str>,
    model: &EmotionModel,
) -> anyhow::Result<Arc<dyn MidLevelProvider>> {
    if let Some(spec) = spec {
        return Ok(Arc::from(parse_provider(spec)?));
    }
    let subset = model.subset()?;
    if subset.indices().iter().any(|&i| i < 7) {
        bail!(
            "the model uses mid-level features; pass --provider constant:<v1,...,v7> or trace:<csv>"
        );
    }
    Ok(Arc::new(ConstantProvider(MidLevelVector::splat(0.0)?)))
}

fn cmd_decode(args: &DecodeArgs) -> anyhow::Result<()> {
    let window = WindowSpec::new(args.window, args.hop)?;
    let smoothing = SmoothingSpec::new(args.render_rate, args.half_life)?;
    let model = load_model(&args.model)?;
    let provider = resolve_provider(args.provider.as_deref(), &model)?;
    let audio = load_audio(&args.audio)?;
    let decoder = Decoder::new(Arc::new(model), provider).with_window(window);

    let source = args.audio.display().to_string();
    let raw = if args.static_mode {
        EmotionTrace::new(vec![decoder.static_decode(&audio)?], source)?
    } else {
        EmotionTrace::new(decoder.dynamic_decode(&audio)?.points, source)?
    };
    let smoothed = (args.smooth && !args.static_mode).then(|| smooth(&raw, smoothing));
    let mut traces = vec![&raw];
    traces.extend(smoothed.as_ref());

    match &args.out {
        Some(path) if is_csv(path) => write_trace_csv(path, &traces)?,
        Some(path) => write_trace_jsonl(path, &traces)?,
        None => {
            for trace in &traces {
                for r in trace.records() {
                    println!("{}", serde_json::to_string(&r)?);
                }
            }
        }
    }
    if let Some(path) = &args.out {
        eprintln!("{} points written to {}", raw.len(), path.display());
    }
    Ok(())
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn cmd_stream(args: &StreamArgs) -> anyhow::Result<()> {
    if !(args.speed.is_finite() && args.speed > 0.0) {
        bail!("--speed must be positive");
    }
    if args.chunk == 0 {
        bail!("--chunk must be positive");
    }
    let source = match (&args.audio, &args.trace) {
        (Some(audio_path), _) => {
            let model_path = args.model.as_ref().context("--model is required with --audio")?;
            let model = load_model(model_path)?;
            let provider = resolve_provider(args.provider.as_deref(), &model)?;
            let audio = load_audio(audio_path)?;
            debug_assert_eq!(audio.sample_rate(), CANONICAL_RATE);
            let decoder = Decoder::new(Arc::new(model), provider);
            SessionSource::Live {
                session: LiveSession::new(decoder),
                source: PacedSource::new(audio, args.chunk, Pacing::Realtime { speed: args.speed }),
            }
        }
        (None, Some(trace_path)) => {
            let records = read_trace_records(trace_path)?;
            let smoothed = args.smoothed || records.iter().all(|r| r.smoothed);
            let trace =
                EmotionTrace::from_records(&records, smoothed, trace_path.display().to_string())?;
            SessionSource::Replay {
                trace,
                pacing: ReplayPacing::Realtime { speed: args.speed },
            }
        }
        (None, None) => bail!("pass --audio or --trace"),
    };

    let mut config = ServerConfig::new(SocketAddr::new(args.host, args.port));
    config.wait_for_clients = args.wait_for_clients;
    config.static_dir = args.static_dir.clone();
    let linger = Duration::from_secs_f64(args.linger.max(0.0));

    let runtime = tokio::runtime::Runtime::new().context("cannot start async runtime")?;
    runtime.block_on(async move {
        let mut handle = serve(config, source).await?;
        eprintln!("listening on http://{}", handle.local_addr());
        tokio::select! {
            r = handle.session_finished() => r?,
            _ = tokio::signal::ctrl_c() => {
                eprintln!("interrupted, closing session");
                handle.interrupt();
            }
        }
        handle.wait(linger).await?;
        eprintln!("session ended");
        anyhow::Ok(())
    })
}
