use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fwsindy::format::fmt17;
use fwsindy::harness::{self, ExperimentConfig, RunOptions};
use fwsindy::learners::{learn, LearnContext, Method};
use fwsindy::ode::{add_noise, make_system};
use fwsindy::spectral::multitaper_psd;
use fwsindy::{DictionarySpec, NoiseSpec, SolverConfig, Trajectory};

#[derive(Parser)]
#[command(name = "fwsindy", version, about = "Sparse identification of nonlinear ODEs with Fourier weak SINDy")]
struct Cli {
    /// Experiment config (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named experiment preset
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Base seed, overriding the config
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; stdout where a single file would be written otherwise
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print the default experiment config and exit
    #[arg(long)]
    print_default_config: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a benchmark system and write its trajectory as CSV
    Simulate(SimulateArgs),
    /// Multitaper PSD of every component of a trajectory CSV
    Psd(PsdArgs),
    /// Learn a model from a trajectory CSV and print it as JSON
    Learn(LearnArgs),
    /// Run a full noise sweep and write results, summaries and plots
    Benchmark(BenchmarkArgs),
    /// Summarize a results CSV
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value = "lorenz")]
    system: String,
    /// Parameter override, e.g. `--param rho=35`
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Initial condition, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10.0)]
    duration: f64,
    #[arg(long, default_value_t = 1000.0)]
    fs: f64,
    /// Noise ratio added to the clean trajectory
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
}

#[derive(Args)]
struct PsdArgs {
    /// Trajectory CSV
    input: PathBuf,
    /// Time-bandwidth product
    #[arg(long, default_value_t = 4.0)]
    nw: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodKind {
    Sindy,
    Bump,
    Sweep,
    Sde,
    Oracle,
}

#[derive(Args)]
struct LearnArgs {
    /// Trajectory CSV
    input: PathBuf,
    #[arg(long, value_enum, default_value = "sde")]
    method: MethodKind,
    #[arg(long, default_value_t = 2)]
    degree: u32,
    /// Dominant frequencies per component (sde, oracle)
    #[arg(long, default_value_t = 100)]
    k: usize,
    /// Time-bandwidth product of the multitaper estimate (sde)
    #[arg(long, default_value_t = harness::DEFAULT_SDE_NW)]
    nw: f64,
    /// Highest frequency index (sweep)
    #[arg(long, default_value_t = 500)]
    l_max: usize,
    /// Subdomain count (bump)
    #[arg(long, default_value_t = 1000)]
    subdomains: usize,
    /// Bump exponent (bump)
    #[arg(long, default_value_t = 4)]
    q: u32,
    /// Clean trajectory CSV (oracle)
    #[arg(long)]
    clean: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    #[arg(long, default_value_t = 0.001)]
    ridge: f64,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Record zero wall time so repeated runs produce identical files
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Results CSV written by `benchmark`
    input: PathBuf,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = v.parse().map_err(|_| format!("invalid value in `{s}`"))?;
    Ok((k.to_string(), v))
}

fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Trajectory::read_csv(BufReader::new(file)).with_context(|| format!("cannot read trajectory {}", path.display()))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    Ok(BufWriter::new(File::create(&path).with_context(|| format!("cannot create {}", path.display()))?))
}

fn out_dir(cli: &Cli) -> Result<Option<&Path>> {
    if let Some(dir) = &cli.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    Ok(cli.out_dir.as_deref())
}

fn load_configs(cli: &Cli) -> Result<Vec<ExperimentConfig>> {
    let mut configs = match (&cli.config, &cli.preset) {
        (Some(_), Some(_)) => bail!("--config and --preset are mutually exclusive"),
        (Some(path), None) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
            vec![ExperimentConfig::from_json(&text)?]
        }
        (None, Some(name)) => harness::preset(name)?,
        (None, None) => vec![ExperimentConfig::default()],
    };
    if let Some(seed) = cli.seed {
        configs.iter_mut().for_each(|c| c.seed = seed);
    }
    Ok(configs)
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<()> {
    let sys = make_system(&args.system, &args.params)?;
    let x0 = args.x0.clone().unwrap_or_else(|| sys.default_x0().to_vec());
    let mut traj = sys.simulate(&x0, args.duration, args.fs)?;
    if args.noise > 0.0 {
        traj = add_noise(&traj, &NoiseSpec::new(args.noise, cli.seed.unwrap_or(0))?);
    }
    match out_dir(cli)? {
        Some(dir) => {
            let mut w = create(dir, "trajectory.csv")?;
            traj.write_csv(&mut w)?;
            w.flush()?;
        }
        None => traj.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn psd(cli: &Cli, args: &PsdArgs) -> Result<()> {
    let traj = read_trajectory(&args.input)?;
    let dir = out_dir(cli)?.unwrap_or(Path::new("."));
    for i in 0..traj.dim() {
        let est = multitaper_psd(traj.component(i), traj.dt(), args.nw)?;
        let mut w = create(dir, &format!("psd_x{}.csv", i + 1))?;
        writeln!(w, "freq_hz,power")?;
        for (f, p) in est.freqs.iter().zip(&est.power) {
            writeln!(w, "{},{}", fmt17(*f), fmt17(*p))?;
        }
        w.flush()?;
    }
    Ok(())
}

fn learn_cmd(cli: &Cli, args: &LearnArgs) -> Result<()> {
    let data = read_trajectory(&args.input)?;
    let spec = DictionarySpec::new(data.dim(), args.degree)?;
    let cfg = SolverConfig { threshold: args.threshold, ridge: args.ridge, ..SolverConfig::default() };
    let method = match args.method {
        MethodKind::Sindy => Method::Sindy,
        MethodKind::Bump => Method::WsindyBump { subdomains: args.subdomains, q: args.q },
        MethodKind::Sweep => Method::WsindyFourierSweep { l_max: args.l_max },
        MethodKind::Sde => Method::WsindyFourierSde { k: args.k, nw: args.nw },
        MethodKind::Oracle => Method::WsindyFourierOracle { k: args.k },
    };
    let clean = args.clean.as_deref().map(read_trajectory).transpose()?;
    if matches!(args.method, MethodKind::Oracle) && clean.is_none() {
        bail!("--method oracle needs --clean <trajectory.csv>");
    }
    let ctx = LearnContext { clean: clean.as_ref(), tapers: None };
    let result = learn(&method, &data, &spec, &cfg, ctx)?;
    let text = serde_json::to_string_pretty(&result.to_json())?;
    match out_dir(cli)? {
        Some(dir) => {
            let mut w = create(dir, "result.json")?;
            writeln!(w, "{text}")?;
            w.flush()?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn write_summary(dir: &Path, stem: &str, table: &harness::ResultTable) -> Result<()> {
    let summary = harness::summarize(table)?;
    let mut w = create(dir, &format!("summary_{stem}.csv"))?;
    summary.write_csv(&mut w)?;
    w.flush()?;
    for (metric, svg) in harness::plot(&summary)? {
        fs::write(dir.join(format!("{stem}_{metric}.svg")), svg)?;
    }
    Ok(())
}

fn benchmark(cli: &Cli, args: &BenchmarkArgs) -> Result<()> {
    let configs = load_configs(cli)?;
    let dir = out_dir(cli)?.unwrap_or(Path::new("."));
    let opts = RunOptions { jobs: cli.jobs, deterministic: args.deterministic };
    for cfg in &configs {
        let table = harness::run_experiment(cfg, &opts)?;
        let failed = table.rows.iter().filter(|r| !r.is_ok()).count();
        let mut w = create(dir, &format!("results_{}.csv", cfg.system))?;
        table.write_csv(&mut w)?;
        w.flush()?;
        write_summary(dir, &cfg.system, &table)?;
        eprintln!("{}: {} rows, {} failed", cfg.system, table.len(), failed);
    }
    Ok(())
}

fn summarize(cli: &Cli, args: &SummarizeArgs) -> Result<()> {
    let file = File::open(&args.input).with_context(|| format!("cannot open {}", args.input.display()))?;
    let table = harness::ResultTable::read_csv(BufReader::new(file))?;
    match out_dir(cli)? {
        Some(dir) => {
            let stem = args.input.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
            write_summary(dir, stem.strip_prefix("results_").unwrap_or(stem), &table)
        }
        None => Ok(harness::summarize(&table)?.write_csv(io::stdout().lock())?),
    }
}

fn run(cli: &Cli) -> Result<()> {
    if cli.print_default_config {
        let cfg = load_configs(cli)?;
        let text = if cfg.len() == 1 { serde_json::to_string_pretty(&cfg[0])? } else { serde_json::to_string_pretty(&cfg)? };
        println!("{text}");
        return Ok(());
    }
    match &cli.command {
        Some(Command::Simulate(a)) => simulate(cli, a),
        Some(Command::Psd(a)) => psd(cli, a),
        Some(Command::Learn(a)) => learn_cmd(cli, a),
        Some(Command::Benchmark(a)) => benchmark(cli, a),
        Some(Command::Summarize(a)) => summarize(cli, a),
        None => bail!("no subcommand given; see --help"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
