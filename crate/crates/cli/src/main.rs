mod analysis;
mod format;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lime::experiments::{parse_config, replicate_rng, run_experiment, run_sensitivity, ExperimentConfig, Method, RunManifest};
use lime::likelihood::CountsTable;
use lime::simulate::{ascertain, tabulate, write_dataset_csv, FamilyGenerator};
use lime::{Error, HypothesisKind, Sidedness};

#[derive(Parser)]
#[command(name = "lime", version, about = "Partial-likelihood tests for imprinting and maternal effects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one dataset and write dataset.csv, counts.csv and manifest.json.
    Simulate(SimulateArgs),
    /// Fit the full model to a counts file.
    Fit(AnalysisArgs),
    /// Fit and run likelihood-ratio tests on a counts file.
    Test(TestArgs),
    /// Run a scenario grid and write metrics.csv, replicates.csv and manifest.json.
    Experiment(GridArgs),
    /// Re-analyze each scenario under misspecified prevalences.
    Sensitivity(GridArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Configuration file (flat `key = value`).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Base seed (overrides the `seed` key).
    #[arg(long)]
    seed: Option<u64>,
    /// True disease prevalence (overrides the `prevalence` key).
    #[arg(long)]
    prevalence: Option<f64>,
    /// Record the wall-clock time in the manifest.
    #[arg(long)]
    stamp: bool,
}

#[derive(Args)]
struct AnalysisArgs {
    /// Counts file as written by `lime simulate`.
    #[arg(long)]
    counts: PathBuf,
    /// Known disease prevalence.
    #[arg(long)]
    prevalence: f64,
    /// Estimator to run.
    #[arg(long, value_enum, default_value_t = MethodArg::LimeMix)]
    method: MethodArg,
    /// Print JSON instead of the table.
    #[arg(long)]
    json: bool,
    /// Also write report.json and manifest.json to this directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record the wall-clock time in the manifest.
    #[arg(long)]
    stamp: bool,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    common: AnalysisArgs,
    /// Hypotheses to test.
    #[arg(long, value_enum, default_value_t = HypothesisArg::All)]
    hypothesis: HypothesisArg,
    /// Alternative for the imprinting test.
    #[arg(long, value_enum, default_value_t = SidedArg::Two)]
    sided: SidedArg,
}

#[derive(Args)]
struct GridArgs {
    /// Configuration file (flat `key = value`).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Base seed (overrides the `seed` key).
    #[arg(long)]
    seed: Option<u64>,
    /// Replicates per scenario (overrides the `replicates` key).
    #[arg(long)]
    replicates: Option<usize>,
    /// Restrict the run to one method (overrides the `methods` key).
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// True disease prevalence (overrides the `prevalence` key).
    #[arg(long)]
    prevalence: Option<f64>,
    /// Alternative for the imprinting test (overrides the `sided` key).
    #[arg(long, value_enum)]
    sided: Option<SidedArg>,
    /// Record the wall-clock time in the manifest.
    #[arg(long)]
    stamp: bool,
    /// Suppress progress output.
    #[arg(long)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    LimeMix,
    LimePair,
    LlLrt,
    Cll,
    #[value(name = "cll-drop11")]
    CllDrop11,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::LimeMix => Method::LimeMix,
            MethodArg::LimePair => Method::LimePair,
            MethodArg::LlLrt => Method::LlLrt,
            MethodArg::Cll => Method::Cll,
            MethodArg::CllDrop11 => Method::CllDrop11,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum HypothesisArg {
    Association,
    Imprinting,
    Maternal,
    All,
}

impl HypothesisArg {
    fn kinds(self) -> Vec<HypothesisKind> {
        match self {
            Self::Association => vec![HypothesisKind::Association],
            Self::Imprinting => vec![HypothesisKind::Imprinting],
            Self::Maternal => vec![HypothesisKind::Maternal],
            Self::All => HypothesisKind::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SidedArg {
    Two,
    Greater,
    Less,
}

impl From<SidedArg> for Sidedness {
    fn from(s: SidedArg) -> Self {
        match s {
            SidedArg::Two => Sidedness::Two,
            SidedArg::Greater => Sidedness::Greater,
            SidedArg::Less => Sidedness::Less,
        }
    }
}

impl SidedArg {
    fn name(self) -> &'static str {
        match self {
            Self::Two => "two",
            Self::Greater => "greater",
            Self::Less => "less",
        }
    }
}

/// Failure carrying its exit status: 1 for I/O, 2 for configuration and
/// input errors, 3 for data that cannot be analyzed.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => 1,
            Error::DegenerateData(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 1, message: format!("{}: {e}", path.display()) }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn create_dir(path: &Path) -> Result<(), Failure> {
    fs::create_dir_all(path).map_err(|e| io_failure(path, e))
}

fn manifest(subcommand: &str, config: BTreeMap<String, String>, seed: u64, stamp: bool) -> RunManifest {
    let mut m = RunManifest::new(subcommand, config, seed);
    if stamp {
        m.timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
    }
    m
}

fn load_config(path: &Path, overrides: &[(&str, String)]) -> Result<ExperimentConfig, Failure> {
    let text = read(path)?;
    parse_config(&text, overrides).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let mut overrides = Vec::new();
    if let Some(s) = args.seed {
        overrides.push(("seed", s.to_string()));
    }
    if let Some(p) = args.prevalence {
        overrides.push(("prevalence", p.to_string()));
    }
    let cfg = load_config(&args.config, &overrides)?;
    let [scenario] = cfg.scenarios.as_slice() else {
        return Err(Failure {
            code: 2,
            message: format!("simulate needs a single scenario, the configuration expands to {}", cfg.scenarios.len()),
        });
    };
    let generator = FamilyGenerator::solve(&scenario.population, &scenario.risks, scenario.prevalence)?;
    let mut rng = replicate_rng(cfg.seed, 0);
    let records = ascertain(&generator, &scenario.ascertainment, &mut rng)?;
    let counts = tabulate(&records)?;
    create_dir(&args.out)?;
    let mut m = manifest("simulate", cfg.values.clone(), cfg.seed, args.stamp);
    m.inputs = vec![args.config.display().to_string()];
    m.outputs = vec!["dataset.csv".into(), "counts.csv".into()];
    m.scenarios = 1;
    write(&args.out.join("dataset.csv"), &write_dataset_csv(&records))?;
    write(&args.out.join("counts.csv"), &counts.to_csv())?;
    m.completed_scenarios = 1;
    m.complete = true;
    write(&args.out.join("manifest.json"), &m.to_json())?;
    eprintln!(
        "simulated {} families ({} triads, {} pairs) into {}",
        records.len(),
        counts.triad_cases() + counts.triad_controls(),
        counts.pair_cases() + counts.pair_controls(),
        args.out.display()
    );
    Ok(())
}

fn analyze(args: &AnalysisArgs, tests: Option<(&[HypothesisKind], SidedArg)>) -> Result<(), Failure> {
    let counts = CountsTable::from_csv(&read(&args.counts)?)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", args.counts.display()) })?;
    let method = Method::from(args.method);
    let report = match tests {
        None => analysis::fit_report(&counts, args.prevalence, method)?,
        Some((kinds, sided)) => analysis::test_report(&counts, args.prevalence, method, kinds, sided.into())?,
    };
    let json = report.to_json();
    if args.json {
        println!("{}", serde_json::to_string_pretty(&json).expect("report serializes"));
    } else {
        print!("{}", report.to_table());
    }
    if let Some(dir) = &args.out {
        create_dir(dir)?;
        let subcommand = if tests.is_some() { "test" } else { "fit" };
        let mut config = BTreeMap::from([
            ("counts".to_string(), args.counts.display().to_string()),
            ("prevalence".to_string(), args.prevalence.to_string()),
            ("method".to_string(), method.to_string()),
        ]);
        if let Some((kinds, sided)) = tests {
            let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
            config.insert("hypothesis".into(), names.join(","));
            config.insert("sided".into(), sided.name().into());
        }
        let mut m = manifest(subcommand, config, 0, args.stamp);
        m.inputs = vec![args.counts.display().to_string()];
        m.outputs = vec!["report.json".into()];
        m.scenarios = 1;
        m.completed_scenarios = 1;
        m.complete = true;
        let mut text = serde_json::to_string_pretty(&json).expect("report serializes");
        text.push('\n');
        write(&dir.join("report.json"), &text)?;
        write(&dir.join("manifest.json"), &m.to_json())?;
    }
    Ok(())
}

fn grid(args: GridArgs, subcommand: &str) -> Result<(), Failure> {
    let mut overrides = Vec::new();
    if let Some(s) = args.seed {
        overrides.push(("seed", s.to_string()));
    }
    if let Some(r) = args.replicates {
        overrides.push(("replicates", r.to_string()));
    }
    if let Some(m) = args.method {
        overrides.push(("methods", Method::from(m).to_string()));
    }
    if let Some(p) = args.prevalence {
        overrides.push(("prevalence", p.to_string()));
    }
    if let Some(s) = args.sided {
        overrides.push(("sided", s.name().to_string()));
    }
    let cfg = load_config(&args.config, &overrides)?;
    let mut m = manifest(subcommand, cfg.values.clone(), cfg.seed, args.stamp);
    m.inputs = vec![args.config.display().to_string()];
    let n = cfg.scenarios.len();
    let quiet = args.quiet;
    let mut progress = |i: usize, done: usize, total: usize| {
        if !quiet {
            eprintln!("[{}/{n}] {}: {done}/{total} replicates", i + 1, cfg.scenarios[i].label);
        }
    };
    let result = if subcommand == "sensitivity" {
        run_sensitivity(&cfg, &args.out, m, &mut progress)
    } else {
        run_experiment(&cfg, &args.out, m, &mut progress)
    };
    let m = result.map_err(|e| match e {
        Error::Io(msg) => Failure { code: 1, message: format!("{}: {msg}", args.out.display()) },
        other => other.into(),
    })?;
    if !quiet {
        eprintln!("wrote {} scenarios to {}", m.completed_scenarios, args.out.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Fit(a) => analyze(&a, None),
        Command::Test(a) => {
            let kinds = a.hypothesis.kinds();
            analyze(&a.common, Some((&kinds, a.sided)))
        }
        Command::Experiment(a) => grid(a, "experiment"),
        Command::Sensitivity(a) => grid(a, "sensitivity"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
