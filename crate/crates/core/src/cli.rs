//! The `dirichlet-ds` command line.
//!
//! Exit codes: `0` success, `2` usage or parse error, `3` data outside the
//! model's domain, `1` I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::ds::{CategoryCounts, DirichletDs, DsPolytope, Weakening};
use crate::error::Error;
use crate::report;
use crate::sim::{self, Hypothesis, SimulationConfig};
use crate::uniformity::{
    bin_samples, chi_square_uniformity_test, ds_uniformity_test, ContingencyTable, Method, SamplePoint,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dirichlet-ds", version, about = "Dirichlet DS inference and uniformity tests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw DS polytopes for a vector of counts.
    Sample(SampleArgs),
    /// Test a table or point set for uniformity with the DS and chi-square tests.
    Test(TestArgs),
    /// Bin a point set into a k x k table.
    Bin(BinArgs),
    /// Run the Monte Carlo study and write records.csv and ecdf.csv.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Comma-separated category counts.
    #[arg(long)]
    pub counts: String,
    /// Number of polytopes.
    #[arg(short = 'm', long = "m")]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub weaken: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// File of "x,y" lines.
    #[arg(long, conflicts_with = "counts", required_unless_present = "counts")]
    pub points: Option<PathBuf>,
    /// Row-major comma-separated k*k cell counts.
    #[arg(long)]
    pub counts: Option<String>,
    #[arg(short = 'k', long = "k")]
    pub k: usize,
    #[arg(short = 'm', long = "m")]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub weaken: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BinArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(short = 'k', long = "k")]
    pub k: usize,
}

#[derive(Debug, Clone, Args, Default)]
pub struct SimulateArgs {
    /// key=value file with the same names as the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "n")]
    pub n: Option<usize>,
    #[arg(long)]
    pub datasets: Option<usize>,
    /// Comma-separated resolutions.
    #[arg(long)]
    pub resolutions: Option<String>,
    #[arg(short = 'm', long = "m")]
    pub m: Option<usize>,
    /// h0 or h1.
    #[arg(long)]
    pub hypothesis: Option<String>,
    /// Comma-separated subset of ds,chisq.
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long)]
    pub weaken: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "data error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfDomain(_) | Error::Empty(_) => CliError::Domain(e.to_string()),
            Error::Trial { ref source, .. } if matches!(**source, Error::OutOfDomain(_) | Error::Empty(_)) => {
                CliError::Domain(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Parses and runs a command line, writing results to `stdout` and
/// diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "dirichlet-ds: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Sample(a) => cmd_sample(&a, stdout),
        Command::Test(a) => cmd_test(&a, stdout),
        Command::Bin(a) => cmd_bin(&a, stdout, stderr),
        Command::Simulate(a) => cmd_simulate(&a),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("cannot parse '{}' in {what}", t.trim())))
        })
        .collect()
}

fn parse_counts(s: &str) -> Result<Vec<u64>, CliError> {
    parse_list(s, "counts")
}

/// Parses a points file: one `x,y` pair per line, `#` starts a comment.
pub fn parse_points(text: &str) -> Result<Vec<SamplePoint>, CliError> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || CliError::Usage(format!("line {}: expected 'x,y', got '{line}'", lineno + 1));
        let mut fields = line.split(',');
        let (Some(x), Some(y), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad());
        };
        let x: f64 = x.trim().parse().map_err(|_| bad())?;
        let y: f64 = y.trim().parse().map_err(|_| bad())?;
        let p = SamplePoint::new(x, y)
            .map_err(|e| CliError::Domain(format!("line {}: {e}", lineno + 1)))?;
        points.push(p);
    }
    Ok(points)
}

fn read_points(path: &Path) -> Result<Vec<SamplePoint>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_points(&text)
}

fn cmd_sample(a: &SampleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let counts = CategoryCounts::new(parse_counts(&a.counts)?)?;
    if a.m == 0 {
        return Err(CliError::Usage("-m must be positive".into()));
    }
    let sampler = DirichletDs::new(&counts, Weakening(a.weaken));
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut buf = io::BufWriter::new(out);
    writeln!(buf, "{}", report::polytope_header(counts.categories()))?;
    for draw in 0..a.m {
        let poly = DsPolytope::from_weights(sampler.sample(&mut rng));
        report::write_polytope_row(&mut buf, draw, &poly)?;
    }
    buf.flush()?;
    Ok(())
}

fn cmd_test(a: &TestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.k < 2 {
        return Err(CliError::Usage("-k must be at least 2".into()));
    }
    if a.m == 0 {
        return Err(CliError::Usage("-m must be positive".into()));
    }
    let table = match (&a.points, &a.counts) {
        (Some(path), None) => bin_samples(&read_points(path)?, a.k)?,
        (None, Some(c)) => {
            let cells = parse_counts(c)?;
            if cells.len() != a.k * a.k {
                return Err(CliError::Usage(format!(
                    "expected {} counts for k={}, got {}",
                    a.k * a.k,
                    a.k,
                    cells.len()
                )));
            }
            ContingencyTable::new(a.k, cells)?
        }
        _ => return Err(CliError::Usage("give exactly one of --points or --counts".into())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let ds = ds_uniformity_test(&table, a.m, Weakening(a.weaken), &mut rng)?;
    let chi = chi_square_uniformity_test(&table)?;
    report::write_test_reports(out, &[ds, chi])?;
    Ok(())
}

fn cmd_bin(a: &BinArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if a.k < 2 {
        return Err(CliError::Usage("-k must be at least 2".into()));
    }
    let points = read_points(&a.points)?;
    if points.is_empty() {
        writeln!(err, "warning: {} contains no points", a.points.display())?;
    }
    report::write_table(out, &bin_samples(&points, a.k)?)?;
    Ok(())
}

/// Applies `key=value` lines from a config file to `args`, keeping values
/// already set by flags.
pub fn apply_config_file(args: &mut SimulateArgs, text: &str) -> Result<(), CliError> {
    fn set<T: std::str::FromStr>(slot: &mut Option<T>, key: &str, value: &str) -> Result<(), CliError> {
        if slot.is_none() {
            *slot = Some(
                value
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad value '{value}' for '{key}'")))?,
            );
        }
        Ok(())
    }
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key=value", lineno + 1)));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "n" => set(&mut args.n, key, value)?,
            "datasets" => set(&mut args.datasets, key, value)?,
            "resolutions" => set(&mut args.resolutions, key, value)?,
            "m" => set(&mut args.m, key, value)?,
            "hypothesis" => set(&mut args.hypothesis, key, value)?,
            "methods" => set(&mut args.methods, key, value)?,
            "weaken" => set(&mut args.weaken, key, value)?,
            "seed" => set(&mut args.seed, key, value)?,
            "threads" => set(&mut args.threads, key, value)?,
            other => return Err(CliError::Usage(format!("unknown config key '{other}'"))),
        }
    }
    Ok(())
}

/// Resolves flags (and an optional config file) into a simulation config.
pub fn simulation_config(a: &SimulateArgs) -> Result<SimulationConfig, CliError> {
    let mut a = a.clone();
    if let Some(path) = a.config.take() {
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        apply_config_file(&mut a, &text)?;
    }

    let tag: Hypothesis = a.hypothesis.take().as_deref().unwrap_or("h0").parse()?;
    let mut config = SimulationConfig::standard(tag);
    if let Some(n) = a.n {
        config.n = n;
    }
    if let Some(d) = a.datasets {
        config.datasets = d;
    }
    if let Some(r) = &a.resolutions {
        config.resolutions = parse_list(r, "resolutions")?;
    }
    if let Some(m) = a.m {
        config.m = m;
    }
    if let Some(methods) = &a.methods {
        config.methods = methods
            .split(',')
            .map(|s| s.parse::<Method>())
            .collect::<Result<_, _>>()?;
        config.methods.sort();
        config.methods.dedup();
    }
    if let Some(r) = a.weaken {
        config.weaken = Weakening(r);
    }
    if let Some(s) = a.seed {
        config.master_seed = s;
    }
    if let Some(t) = a.threads {
        config.threads = t;
    }
    config.validate()?;
    Ok(config)
}

fn cmd_simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let config = simulation_config(a)?;
    let records = sim::run_experiment(&config)?;
    let curves = sim::ecdf_curves(&records, &sim::default_grid())?;
    fs::create_dir_all(&a.out)?;
    let mut f = io::BufWriter::new(fs::File::create(a.out.join("records.csv"))?);
    report::write_records(&mut f, &records)?;
    f.flush()?;
    let mut f = io::BufWriter::new(fs::File::create(a.out.join("ecdf.csv"))?);
    report::write_ecdf(&mut f, &curves)?;
    f.flush()?;
    Ok(())
}
