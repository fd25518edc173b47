use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use craftbench::craftworld::{ExecConfig, RuleSet, WorldConfig};
use craftbench::harness::{
    aggregate, read_transcript, render_text, replay, run_experiment, to_csv, to_json, transcript_file_name,
    write_transcript, Arm, BackendKind, TrialConfig, TrialEnv, TrialRecord,
};
use craftbench::perception::RenderOptions;
use craftbench::planner::{
    BackendError, HttpBackend, HttpConfig, InflightLimiter, OracleBackend, PlannerBackend, PlaybackBackend,
    PlaybackMode,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_BACKEND: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "craftbench", version, about = "Run, report and replay crafting-world curriculum experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run trials and write transcripts plus a report.
    Run(RunArgs),
    /// Aggregate transcripts from a directory.
    Report(ReportArgs),
    /// Re-run a transcript against its recorded replies.
    Replay(ReplayArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Arm label (1-1, 1-2, 1-3, 1-4, 2-1, 2-2) or "all"; repeatable.
    #[arg(long)]
    arm: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u32>,
    /// oracle, http or playback
    #[arg(long)]
    backend: Option<String>,
    /// Iteration cap per trial.
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Free-description length cap in characters.
    #[arg(long)]
    text_cap: Option<usize>,
    #[arg(long)]
    parallelism: Option<usize>,
    /// TOML settings file; its values win over flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(clap::Args)]
struct ReportArgs {
    #[arg(long)]
    in_dir: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(clap::Args)]
struct ReplayArgs {
    #[arg(long)]
    transcript: PathBuf,
    /// Treat prompt-hash mismatches as errors and exit 3 on any divergence.
    #[arg(long)]
    strict: bool,
    /// Rule table to replay under (defaults to the embedded table).
    #[arg(long)]
    rules: Option<PathBuf>,
}

/// Keys accepted in a `run` settings file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    arms: Option<Vec<String>>,
    seed: Option<u64>,
    trials: Option<u32>,
    backend: Option<String>,
    cap: Option<u32>,
    out_dir: Option<PathBuf>,
    text_cap: Option<usize>,
    parallelism: Option<usize>,
    step_budget: Option<u32>,
    parse_retries: Option<u32>,
    window: Option<usize>,
    rules_file: Option<PathBuf>,
    world_file: Option<PathBuf>,
    /// Directory of transcripts for the playback backend.
    playback_dir: Option<PathBuf>,
    world: Option<WorldConfig>,
    render: Option<RenderOptions>,
    exec: Option<ExecConfig>,
    http: Option<HttpConfig>,
}

struct Fail(u8, String);

impl Fail {
    fn config(msg: impl Into<String>) -> Self {
        Fail(EXIT_CONFIG, msg.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Report(a) => cmd_report(a),
        Command::Replay(a) => cmd_replay(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::config(format!("{}: {e}", path.display())))
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn parse_arms(labels: &[String]) -> Result<Vec<Arm>, Fail> {
    if labels.is_empty() {
        return Ok(vec![Arm::Predictive]);
    }
    let mut arms = Vec::new();
    for l in labels {
        for part in l.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if part == "all" {
                arms.extend(Arm::ALL);
            } else {
                arms.push(part.parse().map_err(|e| Fail::config(format!("{e}")))?);
            }
        }
    }
    arms.dedup();
    Ok(arms)
}

fn cmd_run(a: RunArgs) -> Result<(), Fail> {
    let (file, base) = match &a.config {
        Some(p) => {
            let f: FileConfig = toml::from_str(&read_text(p)?)
                .map_err(|e| Fail::config(format!("{}: {e}", p.display())))?;
            (f, p.parent().map(Path::to_path_buf).unwrap_or_default())
        }
        None => (FileConfig::default(), PathBuf::new()),
    };

    let arms = parse_arms(file.arms.as_deref().unwrap_or(&a.arm))?;
    let backend: BackendKind = file
        .backend
        .clone()
        .or(a.backend.clone())
        .unwrap_or_else(|| "oracle".into())
        .parse()
        .map_err(|e| Fail::config(format!("{e}")))?;
    let out_dir = file.out_dir.clone().map(|p| resolve(&base, &p)).or(a.out_dir.clone()).unwrap_or_else(|| "out".into());
    let parallelism = file.parallelism.or(a.parallelism).unwrap_or(1);

    let rules = match &file.rules_file {
        Some(p) => RuleSet::from_toml(&read_text(&resolve(&base, p))?).map_err(|e| Fail::config(e.to_string()))?,
        None => RuleSet::default(),
    };
    let world = match (&file.world, &file.world_file) {
        (Some(_), Some(_)) => return Err(Fail::config("set either world or world_file, not both")),
        (Some(w), None) => {
            w.validate().map_err(|e| Fail::config(e.to_string()))?;
            w.clone()
        }
        (None, Some(p)) => {
            WorldConfig::from_toml(&read_text(&resolve(&base, p))?).map_err(|e| Fail::config(e.to_string()))?
        }
        (None, None) => WorldConfig::default(),
    };
    let env = TrialEnv { rules: Arc::new(rules), world };

    let mut configs = Vec::new();
    for arm in &arms {
        let d = TrialConfig::for_arm(*arm);
        let cfg = TrialConfig {
            seed: file.seed.or(a.seed).unwrap_or(0),
            trials: file.trials.or(a.trials).unwrap_or(d.trials),
            backend,
            max_iterations: file.cap.or(a.cap).unwrap_or(d.max_iterations),
            free_text_cap: file.text_cap.or(a.text_cap).unwrap_or(d.free_text_cap),
            step_budget: file.step_budget.unwrap_or(d.step_budget),
            parse_retries: file.parse_retries.unwrap_or(d.parse_retries),
            window: file.window.unwrap_or(d.window),
            render: file.render.unwrap_or(d.render),
            exec: file.exec.unwrap_or(d.exec),
            ..d
        };
        cfg.validate().map_err(|e| Fail::config(e.to_string()))?;
        configs.push(cfg);
    }

    let http = file.http.clone().unwrap_or_default();
    let limiter = InflightLimiter::new(http.max_in_flight);
    let playback_dir = file.playback_dir.as_ref().map(|p| resolve(&base, p));
    if backend == BackendKind::Playback && playback_dir.is_none() {
        return Err(Fail::config("the playback backend needs playback_dir in the settings file"));
    }
    let rules = env.rules.clone();
    let factory = move |cfg: &TrialConfig| -> Result<Box<dyn PlannerBackend>, BackendError> {
        match cfg.backend {
            BackendKind::Oracle => Ok(Box::new(OracleBackend::new(rules.clone()))),
            BackendKind::Http => Ok(Box::new(HttpBackend::new(http.clone(), limiter.clone())?)),
            BackendKind::Playback => {
                let dir = playback_dir.as_ref().expect("checked above");
                let name = format!("arm-{}_seed-{}.jsonl", cfg.arm, cfg.seed);
                let f = fs::File::open(dir.join(&name)).map_err(|e| BackendError::Config(format!("{name}: {e}")))?;
                let t = read_transcript(BufReader::new(f)).map_err(|e| BackendError::Config(e.to_string()))?;
                Ok(Box::new(PlaybackBackend::new(t.record.playback_calls(), PlaybackMode::Strict, t.record.backend.model)))
            }
        }
    };

    let records = run_experiment(&configs, &env, &factory, parallelism);
    write_outputs(&out_dir, &records, &env)?;

    let aborted: Vec<&TrialRecord> = records.iter().filter(|r| r.aborted.is_some()).collect();
    if !aborted.is_empty() {
        for r in &aborted {
            eprintln!("trial arm {} seed {} aborted: {}", r.config.arm, r.config.seed, r.aborted.as_deref().unwrap_or(""));
        }
        return Err(Fail(EXIT_BACKEND, format!("{} of {} trials aborted", aborted.len(), records.len())));
    }
    Ok(())
}

fn write_outputs(out_dir: &Path, records: &[TrialRecord], env: &TrialEnv) -> Result<(), Fail> {
    let io = |e: std::io::Error| Fail::config(format!("{}: {e}", out_dir.display()));
    let tdir = out_dir.join("transcripts");
    fs::create_dir_all(&tdir).map_err(io)?;
    for r in records {
        let path = tdir.join(transcript_file_name(r));
        let mut f = std::io::BufWriter::new(fs::File::create(&path).map_err(io)?);
        write_transcript(&mut f, r, &env.rules, &env.world).map_err(|e| Fail::config(e.to_string()))?;
    }
    let table = aggregate(records).map_err(|e| Fail::config(e.to_string()))?;
    fs::write(out_dir.join("report.csv"), to_csv(&table).map_err(|e| Fail::config(e.to_string()))?).map_err(io)?;
    fs::write(out_dir.join("report.json"), to_json(&table).map_err(|e| Fail::config(e.to_string()))?).map_err(io)?;
    print!("{}", render_text(&table));
    Ok(())
}

fn load_records(dir: &Path) -> Result<Vec<TrialRecord>, Fail> {
    let sub = dir.join("transcripts");
    let dir = if sub.is_dir() { sub } else { dir.to_path_buf() };
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| Fail::config(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let f = fs::File::open(p).map_err(|e| Fail::config(format!("{}: {e}", p.display())))?;
            read_transcript(BufReader::new(f))
                .map(|t| t.record)
                .map_err(|e| Fail::config(format!("{}: {e}", p.display())))
        })
        .collect()
}

fn cmd_report(a: ReportArgs) -> Result<(), Fail> {
    let records = load_records(&a.in_dir)?;
    let table = aggregate(&records).map_err(|e| Fail::config(e.to_string()))?;
    let out = match a.format {
        Format::Text => render_text(&table),
        Format::Csv => to_csv(&table).map_err(|e| Fail::config(e.to_string()))?,
        Format::Json => to_json(&table).map_err(|e| Fail::config(e.to_string()))? + "\n",
    };
    print!("{out}");
    Ok(())
}

fn cmd_replay(a: ReplayArgs) -> Result<(), Fail> {
    let f = fs::File::open(&a.transcript).map_err(|e| Fail::config(format!("{}: {e}", a.transcript.display())))?;
    let t = read_transcript(BufReader::new(f)).map_err(|e| Fail::config(e.to_string()))?;
    let rules = match &a.rules {
        Some(p) => RuleSet::from_toml(&read_text(p)?).map_err(|e| Fail::config(e.to_string()))?,
        None => RuleSet::default(),
    };
    let mode = if a.strict { PlaybackMode::Strict } else { PlaybackMode::Lenient };
    let report = replay(&t, &rules, mode);
    for d in &report.rule_diff {
        println!("rule mismatch: {d}");
    }
    for m in &report.prompt_mismatches {
        println!("prompt hash mismatch at call {}", m.call);
    }
    match report.first_divergence() {
        None => {
            println!("replay matches: {} iterations", report.record.iterations.len());
            Ok(())
        }
        Some(d) => {
            println!("first divergence: {d}");
            println!("{} divergences in total", report.divergences.len());
            if a.strict {
                Err(Fail(EXIT_DIVERGED, format!("replay diverged at iteration {}", d.iteration)))
            } else {
                Ok(())
            }
        }
    }
}
