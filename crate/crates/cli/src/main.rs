use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use estbench::cocomo::{cocomo2_estimate, coconut_calibrate_traced, reduce_ranges, CoconutConfig, ReductionSpec};
use estbench::estimators::EstimatorSpec;
use estbench::io::{self, ColumnMapping, ReportFormat};
use estbench::model::{
    validate_project, Attribute, CalibrationParams, Dataset, Project, RatingLevel, Ratings, TuningTable,
};
use estbench::rig::{run_experiment, RigConfig, SeGranularity};
use estbench::stats::{scott_knott, StatConfig};

#[derive(Parser)]
#[command(name = "estbench", version, about = "COCOMO-II and rival effort estimators under leave-one-out")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate one project with COCOMO-II.
    Estimate {
        #[arg(long)]
        kloc: f64,
        /// Attribute ratings as `name=level`, e.g. `cplx=5`. Unrated attributes are nominal.
        #[arg(long = "rating", value_name = "NAME=LEVEL")]
        ratings: Vec<String>,
        #[arg(long, default_value_t = CalibrationParams::DEFAULT.a())]
        a: f64,
        #[arg(long, default_value_t = CalibrationParams::DEFAULT.b())]
        b: f64,
        /// Use the three-point (below/nominal/above) tuning table.
        #[arg(long)]
        three_point: bool,
    },
    /// Fit (a, b) to a dataset with COCONUT.
    Calibrate {
        #[arg(long, default_value = "nasa10")]
        data: String,
        #[arg(long)]
        mapping: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 20)]
        repeats: usize,
    },
    /// Run the leave-one-out rig and rank the learners.
    Bench {
        /// Embedded dataset name, or a CSV/ARFF path.
        #[arg(long, default_value = "nasa10")]
        data: String,
        /// Column mapping (TOML) for PROMISE files; `coc81` selects the bundled one.
        #[arg(long)]
        mapping: Option<String>,
        /// Comma-separated learner tokens, `kind[n][:key=value][@reduction]`.
        #[arg(long, default_value = "cocomo2,coconut,loc1,loc3")]
        learners: String,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Reduction applied to every learner without its own `@...` part, e.g. `c0.5+r8+3pt`.
        #[arg(long)]
        reduce: Option<String>,
        #[arg(long, default_value = "holdout-terms")]
        se: String,
        #[arg(long, default_value = "plain")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the raw SE values (treatment,error) here.
        #[arg(long)]
        errors_out: Option<PathBuf>,
    },
    /// Scott-Knott over a precomputed `treatment,error` CSV.
    Rank {
        errors: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "plain")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the embedded datasets, or print one as CSV.
    Datasets {
        #[arg(long)]
        show: Option<String>,
    },
}

fn load_data(data: &str, mapping: Option<&str>) -> Result<Dataset> {
    if mapping.is_none() {
        if let Some(d) = io::embedded(data) {
            return Ok(d);
        }
    }
    let path = Path::new(data);
    let text = fs::read_to_string(path).with_context(|| format!("reading {data}"))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("data").to_string();
    let is_arff = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("arff"));
    match mapping {
        Some("coc81") => Ok(io::parse_promise(&text, &ColumnMapping::coc81(), &name)?),
        Some(m) => {
            let mapping = ColumnMapping::from_toml(&fs::read_to_string(m).with_context(|| format!("reading {m}"))?)?;
            Ok(io::parse_promise(&text, &mapping, &name)?)
        }
        None if is_arff => Ok(io::parse_promise(&text, &ColumnMapping::coc81(), &name)?),
        None => {
            let parsed = io::parse_dataset_with_warnings(&text, &name)?;
            for w in &parsed.warnings {
                eprintln!("warning: {w}");
            }
            Ok(parsed.dataset)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn estimate(kloc: f64, ratings: &[String], a: f64, b: f64, three_point: bool) -> Result<()> {
    let mut r = Ratings::default();
    for spec in ratings {
        let (name, level) = spec.split_once('=').with_context(|| format!("rating `{spec}` is not NAME=LEVEL"))?;
        let attr: Attribute = name.parse()?;
        let level: i64 = level.trim().parse().with_context(|| format!("rating `{spec}`: level is not an integer"))?;
        r.set(attr, RatingLevel::new(level)?);
    }
    let table = if three_point { reduce_ranges(&TuningTable::coc2000()) } else { TuningTable::coc2000() };
    let project = Project::new("query", r, kloc, None);
    for d in validate_project(&project, &table).warnings() {
        eprintln!("{d}");
    }
    let params = CalibrationParams::new(a, b)?;
    let effort = cocomo2_estimate(&project, params, &table)?;
    println!("# a: {a}\n# b: {b}\n# table: {}", if three_point { "three-point" } else { "standard" });
    println!("effort (person-months): {effort:.2}");
    Ok(())
}

fn calibrate(data: &str, mapping: Option<&Path>, seed: u64, depth: usize, repeats: usize) -> Result<()> {
    let dataset = load_data(data, mapping.and_then(Path::to_str))?;
    let cfg = CoconutConfig { seed, depth, repeats, ..Default::default() };
    let trace = coconut_calibrate_traced(&dataset, &cfg, &TuningTable::coc2000())?;
    let default_error = estbench::cocomo::assess(&dataset, CalibrationParams::DEFAULT, &TuningTable::coc2000())?;
    println!("# dataset: {} ({} projects)", dataset.name(), dataset.len());
    println!(
        "# seed: {seed}\n# coconut: start=({},{}) deltas=({},{}) depth={depth} repeats={repeats} constricting={}",
        cfg.initial_a, cfg.initial_b, cfg.delta_a, cfg.delta_b, cfg.constricting
    );
    println!("a = {:.4}", trace.result.a());
    println!("b = {:.4}", trace.result.b());
    println!(
        "mean relative error: {:.4} (start {:.4}, defaults {:.4})",
        trace.result_error, trace.initial_error, default_error
    );
    println!("levels searched: {}", trace.levels.len());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    data: &str,
    mapping: Option<&str>,
    learners: &str,
    repeats: usize,
    seed: u64,
    reduce: Option<&str>,
    se: &str,
    format: &str,
    out: Option<&Path>,
    errors_out: Option<&Path>,
) -> Result<()> {
    let dataset = load_data(data, mapping)?;
    let default_reduction: Option<ReductionSpec> = reduce.map(str::parse).transpose()?;
    let mut specs = Vec::new();
    for token in learners.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let mut spec: EstimatorSpec = token.parse()?;
        if let (Some(r), false) = (default_reduction, token.contains('@')) {
            spec.reduction = r;
        }
        specs.push(spec);
    }
    if specs.is_empty() {
        bail!("no learners given");
    }
    let mut cfg = RigConfig::new(specs, seed);
    cfg.repeats = repeats;
    cfg.granularity = se.parse::<SeGranularity>()?;
    let fmt: ReportFormat = format.parse()?;
    let report = run_experiment(&dataset, &cfg)?;
    for run in &report.learners {
        if run.failed_folds() > 0 {
            eprintln!("warning: {} failed on {} folds", run.name, run.failed_folds());
        }
    }
    if let Some(path) = errors_out {
        fs::write(path, io::write_error_csv(&report)?).with_context(|| format!("writing {}", path.display()))?;
    }
    emit(&io::render_report(&report, fmt)?, out)
}

fn rank(errors: &Path, seed: u64, format: &str, out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(errors).with_context(|| format!("reading {}", errors.display()))?;
    let treatments = io::parse_error_csv(&text)?;
    let cfg = StatConfig::with_seed(seed);
    let groups = scott_knott(&treatments, &cfg)?;
    let header = vec![
        ("errors".to_string(), errors.display().to_string()),
        ("seed".to_string(), seed.to_string()),
        (
            "ranking".to_string(),
            format!(
                "scott-knott bootstrap={} confidence={} a12={}",
                cfg.bootstrap_resamples, cfg.confidence, cfg.a12_threshold
            ),
        ),
    ];
    emit(&io::render_groups(&groups, &header, format.parse()?)?, out)
}

fn datasets(show: Option<&str>) -> Result<()> {
    match show {
        Some(name) => {
            let d = io::embedded(name).with_context(|| format!("no embedded dataset `{name}`"))?;
            print!("{}", io::write_dataset(&d)?);
        }
        None => {
            for name in io::embedded_names() {
                let d = io::embedded(name).expect("listed datasets exist");
                println!("{name}\t{} projects", d.len());
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate { kloc, ratings, a, b, three_point } => estimate(kloc, &ratings, a, b, three_point),
        Command::Calibrate { data, mapping, seed, depth, repeats } => {
            calibrate(&data, mapping.as_deref(), seed, depth, repeats)
        }
        Command::Bench { data, mapping, learners, repeats, seed, reduce, se, format, out, errors_out } => bench(
            &data,
            mapping.as_deref(),
            &learners,
            repeats,
            seed,
            reduce.as_deref(),
            &se,
            &format,
            out.as_deref(),
            errors_out.as_deref(),
        ),
        Command::Rank { errors, seed, format, out } => rank(&errors, seed, &format, out.as_deref()),
        Command::Datasets { show } => datasets(show.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
