use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use markerless::pipeline::{
    analyze_all, compare, read_records_csv, read_report_json, render_table, write_analysis,
    write_atomic, write_report, Format, MetricRecord, RunConfig,
};
use markerless::synth::{generate, write_fixture, write_study, SynthParams, StudyParams};
use markerless::task::{PtmMethod, TaskCode};

type Result<T> = std::result::Result<T, Box<dyn std::error::Error + Send + Sync>>;

#[derive(Parser)]
#[command(name = "markerless", version, about = "Markerless motion capture analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output formats (repeatable or comma separated).
    #[arg(long, value_delimiter = ',')]
    format: Vec<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute per-repetition metrics for session manifests.
    Analyze {
        /// Manifest files, or directories searched for session.json.
        paths: Vec<PathBuf>,
        /// Pixel-to-metre method for every task.
        #[arg(long)]
        ptm: Option<PtmMethod>,
        /// Also compare devices and write the agreement report.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Agreement between devices from metric record CSV files.
    Compare {
        records: Vec<PathBuf>,
        /// Keep only markerless rows computed with this scale.
        #[arg(long)]
        ptm: Option<PtmMethod>,
        #[command(flatten)]
        common: Common,
    },
    /// Render a saved report.json as table, CSV, and plots.
    Report {
        report: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write synthetic fixtures in the capture input formats.
    Synth {
        /// Single task to generate; omit for a whole study.
        #[arg(long)]
        task: Option<TaskCode>,
        /// JSON file with generator parameters (single task or study).
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        fps: Option<f64>,
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        participants: Option<usize>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &common.out {
        cfg.out_dir = out.clone();
    }
    if !common.format.is_empty() {
        cfg.formats = common.format.clone();
    }
    Ok(cfg)
}

fn find_manifests(path: &Path, found: &mut Vec<PathBuf>) -> std::io::Result<()> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(path)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        entries.sort();
        for e in entries {
            if e.is_dir() {
                find_manifests(&e, found)?;
            } else if e.file_name().is_some_and(|n| n == "session.json") {
                found.push(e);
            }
        }
    } else {
        found.push(path.to_path_buf());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { paths, ptm, compare: also_compare, common } => {
            let mut cfg = load_config(&common)?;
            if ptm.is_some() {
                cfg.ptm = ptm;
            }
            let mut manifests = Vec::new();
            for p in paths.iter().chain(cfg.manifests.iter()) {
                find_manifests(p, &mut manifests)?;
            }
            if manifests.is_empty() {
                log::warn!("no session manifests given");
                return Ok(ExitCode::SUCCESS);
            }
            let outcome = analyze_all(&manifests, &cfg);
            let records = outcome.records();
            let discards = outcome.discards();
            write_analysis(&records, &discards, &cfg.out_dir, &cfg.formats)?;
            write_all_records(&records, &cfg.out_dir)?;
            println!(
                "{} sessions analysed, {} failed, {} records, {} discards",
                outcome.sessions.len(),
                outcome.failures.len(),
                records.len(),
                discards.len()
            );
            if also_compare {
                let report = compare(&records, cfg.trr_estimator)?;
                write_report(&report, &cfg.out_dir, &cfg.formats)?;
                print!("{}", render_table(&report.rows));
            }
            Ok(if outcome.any_succeeded() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Compare { records, ptm, common } => {
            let cfg = load_config(&common)?;
            let mut all = Vec::new();
            for p in &records {
                all.extend(read_records_csv(p)?);
            }
            if let Some(m) = ptm {
                all.retain(|r| r.ptm_method.is_none() || r.ptm_method == Some(m));
            }
            if all.is_empty() {
                log::warn!("no metric records given");
            }
            let report = compare(&all, cfg.trr_estimator)?;
            write_report(&report, &cfg.out_dir, &with_json(&cfg.formats))?;
            print!("{}", render_table(&report.rows));
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { report, common } => {
            let cfg = load_config(&common)?;
            let outcome = read_report_json(&report)?;
            write_report(&outcome, &cfg.out_dir, &cfg.formats)?;
            print!("{}", render_table(&outcome.rows));
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth { task, params, fps, noise, seed, participants, reps, out } => {
            let text = params.as_ref().map(std::fs::read_to_string).transpose()?;
            match task {
                Some(task) => {
                    let mut p = match &text {
                        Some(t) => serde_json::from_str(t)?,
                        None => SynthParams::for_task(task),
                    };
                    p.task = task;
                    if let Some(v) = fps {
                        p.fps = v;
                    }
                    if let Some(v) = noise {
                        p.noise_sigma_px = v;
                    }
                    if let Some(v) = seed {
                        p.seed = v;
                    }
                    if let Some(v) = reps {
                        p.reps = v;
                    }
                    let fixture = generate(&p)?;
                    let manifest = write_fixture(&fixture, &out, "P01")?;
                    println!("{}", manifest.display());
                }
                None => {
                    let mut s: StudyParams = match &text {
                        Some(t) => serde_json::from_str(t)?,
                        None => StudyParams::default(),
                    };
                    if let Some(v) = fps {
                        s.fps = v;
                    }
                    if let Some(v) = noise {
                        s.noise_sigma_px = v;
                    }
                    if let Some(v) = seed {
                        s.seed = v;
                    }
                    if let Some(v) = participants {
                        s.participants = v;
                    }
                    if let Some(v) = reps {
                        s.reps = v;
                    }
                    let manifests = write_study(&s, &out)?;
                    println!("{} sessions written to {}", manifests.len(), out.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn with_json(formats: &[Format]) -> Vec<Format> {
    let mut f = formats.to_vec();
    if !f.contains(&Format::Json) {
        f.push(Format::Json);
    }
    f
}

fn write_all_records(records: &[MetricRecord], out: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    write_atomic(&out.join("records.csv"), &w.into_inner().map_err(|e| e.into_error())?)?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
