//! The `symmwig` command-line front end.
//!
//! Every subcommand resolves its parameters from flags, then from an optional
//! `--config` file of `key=value` lines, then from defaults. The resolved
//! parameters form a [`RunManifest`], written next to every output file as
//! `<out>.manifest`; the manifest is itself a valid `--config` file.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::{self, Display, Write as _};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::chebyshev::trace_cheb_vector;
use crate::covariance::{
    config_oracle_matrix, cov_report, v_asymptotic, v_n_breakdown, GoodRule, MomentOracle,
};
use crate::ensemble::{sample_matrix, ClassTable, EntryModel, Family, SymmetryClass};
use crate::montecarlo::{clt_report, run_simulation, CltThresholds, SimulationConfig, THREADS_ENV};
use crate::patterns::{count_delta_sequences, DominoMode, SequenceFilter};
use crate::{Budget, Error, Result};

/// Version tag of every JSON document.
pub const SCHEMA: &str = "symmwig/1";

#[derive(Debug, Parser)]
#[command(name = "symmwig", version, about = "DIII/CI Wigner matrices: patterns, exact covariances, CLT checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the entry equivalence classes.
    Classes(ClassesArgs),
    /// Count cyclic delta sequences and compare with closed forms.
    Patterns(PatternsArgs),
    /// Trace variances: finite-n formula, limit, or brute-force oracle.
    Variance(VarianceArgs),
    /// Monte Carlo estimate of trace covariances and cumulants.
    Simulate(SimulateArgs),
    /// Cross-check the two brute-force covariance oracles.
    Oracle(OracleArgs),
    /// Finite-n variances against their limits, with the per-element split.
    Report(ReportArgs),
    /// Chebyshev traces of one sampled matrix.
    Traces(TracesArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Parameter file of key=value lines; flags take precedence.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; a `<PATH>.manifest` is written next to it [default: stdout].
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format, csv or json [default: csv].
    #[arg(long)]
    format: Option<Format>,
    /// Print the resolved parameters and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Symmetry class, DIII or CI [default: DIII].
    #[arg(long)]
    class: Option<SymmetryClass>,
    /// Block size n, the matrix is 2n x 2n [default: 4].
    #[arg(long)]
    n: Option<usize>,
    /// Entry standard deviation [default: 1, or implied by atoms].
    #[arg(long, conflicts_with = "sigma2")]
    sigma: Option<f64>,
    /// Entry variance, alternative to --sigma.
    #[arg(long)]
    sigma2: Option<f64>,
    /// gaussian, rademacher or atoms:(v1,p1),(v2,p2),... [default: gaussian].
    #[arg(long)]
    family: Option<Family>,
}

#[derive(Debug, Args)]
struct ClassesArgs {
    #[command(flatten)]
    common: Common,
    /// Symmetry class, DIII or CI [default: DIII].
    #[arg(long)]
    class: Option<SymmetryClass>,
    /// Block size n [default: 4].
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct PatternsArgs {
    #[command(flatten)]
    common: Common,
    /// Sequence lengths, e.g. `4`, `4,6,8` or `3-10` [default: 4].
    #[arg(long)]
    m: Option<DegreeList>,
    /// Domino condition, forward or reverse [default: forward].
    #[arg(long)]
    condition: Option<DominoMode>,
    /// all, identical-rows, identical-rows-alpha1, different-rows,
    /// first-entry-one, starts-with:<bits>, tau-realizable[:<bits>] [default: all].
    #[arg(long)]
    filter: Option<SequenceFilter>,
    /// Enumeration budget [default: 100000000].
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Debug, Args)]
struct VarianceArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    model: ModelArgs,
    /// Chebyshev degrees [default: 2-4].
    #[arg(long)]
    m: Option<DegreeList>,
    /// exact, asymptotic or oracle [default: exact].
    #[arg(long)]
    mode: Option<VarianceMode>,
    /// Good-set rule, equality or coarsening [default: equality].
    #[arg(long)]
    rule: Option<GoodRule>,
    /// Enumeration budget [default: 100000000].
    #[arg(long)]
    budget: Option<u128>,
    /// Worker threads [default: $SYMMWIG_THREADS, else all cores].
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    model: ModelArgs,
    /// Largest Chebyshev degree [default: 6].
    #[arg(long = "M")]
    max_degree: Option<usize>,
    /// Number of samples [default: 10000].
    #[arg(long)]
    samples: Option<usize>,
    /// Master seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads [default: $SYMMWIG_THREADS, else all cores].
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// Symmetry class, DIII or CI [default: DIII].
    #[arg(long)]
    class: Option<SymmetryClass>,
    /// Block size n [default: 2].
    #[arg(long)]
    n: Option<usize>,
    /// Entry standard deviation [default: 1, or implied by atoms].
    #[arg(long, conflicts_with = "sigma2")]
    sigma: Option<f64>,
    /// Entry variance, alternative to --sigma.
    #[arg(long)]
    sigma2: Option<f64>,
    /// rademacher, atoms:(v1,p1),... or gaussian (moment oracle only) [default: rademacher].
    #[arg(long)]
    family: Option<Family>,
    /// Largest degree; all pairs (m, mu) up to it are listed [default: 4].
    #[arg(long = "M")]
    max_degree: Option<usize>,
    /// Enumeration budget [default: 100000000].
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    model: ModelArgs,
    /// Chebyshev degrees [default: 2-5].
    #[arg(long)]
    m: Option<DegreeList>,
    /// Good-set rule, equality or coarsening [default: equality].
    #[arg(long)]
    rule: Option<GoodRule>,
    /// Enumeration budget [default: 100000000].
    #[arg(long)]
    budget: Option<u128>,
    /// Worker threads [default: $SYMMWIG_THREADS, else all cores].
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct TracesArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    model: ModelArgs,
    /// Largest Chebyshev degree [default: 6].
    #[arg(long = "M")]
    max_degree: Option<usize>,
    /// Sample seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown format '{other}'"))),
        }
    }
}

impl Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarianceMode {
    Exact,
    Asymptotic,
    Oracle,
}

impl FromStr for VarianceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(VarianceMode::Exact),
            "asymptotic" => Ok(VarianceMode::Asymptotic),
            "oracle" => Ok(VarianceMode::Oracle),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}

impl Display for VarianceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarianceMode::Exact => "exact",
            VarianceMode::Asymptotic => "asymptotic",
            VarianceMode::Oracle => "oracle",
        })
    }
}

/// A list of positive degrees: `4`, `2,4,6`, `3-8` or a mix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeList(pub Vec<usize>);

impl FromStr for DegreeList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad degree list '{s}'"));
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim) {
            match part.split_once('-') {
                Some((a, b)) => {
                    let a: usize = a.trim().parse().map_err(|_| bad())?;
                    let b: usize = b.trim().parse().map_err(|_| bad())?;
                    if a > b {
                        return Err(bad());
                    }
                    out.extend(a..=b);
                }
                None => out.push(part.parse().map_err(|_| bad())?),
            }
        }
        if out.is_empty() || out.contains(&0) {
            return Err(bad());
        }
        Ok(DegreeList(out))
    }
}

impl Display for DegreeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Resolved parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    /// `(key, value)` in resolution order.
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_json(&self) -> Value {
        let params: serde_json::Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "subcommand": self.subcommand,
            "params": params,
            "seed": self.seed,
            "version": self.version,
            "timestamp": self.timestamp,
        })
    }
}

impl Display for RunManifest {
    /// `key=value` lines accepted by `--config`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "subcommand={}", self.subcommand)?;
        writeln!(f, "version={}", self.version)?;
        writeln!(f, "timestamp={}", self.timestamp)?;
        for (k, v) in &self.params {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Parsed `key=value` file: key -> (line number, raw value).
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    /// Blank lines and `#` comments are skipped; a repeated key keeps the
    /// last value.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (k, v) = body.split_once('=').ok_or_else(|| Error::Config {
                line,
                message: format!("expected key=value, got '{body}'"),
            })?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Config {
                    line,
                    message: "empty key".into(),
                });
            }
            entries.insert(k.to_string(), (line, v.trim().to_string()));
        }
        Ok(Self { entries })
    }
}

/// Load a parameter file.
pub fn load_config(path: &Path) -> Result<ConfigFile> {
    ConfigFile::parse(&std::fs::read_to_string(path)?)
}

struct Resolver {
    subcommand: &'static str,
    file: ConfigFile,
    used: BTreeSet<String>,
    params: Vec<(String, String)>,
}

impl Resolver {
    fn new(subcommand: &'static str, path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => load_config(p)?,
            None => ConfigFile::default(),
        };
        let mut r = Self {
            subcommand,
            file,
            used: BTreeSet::new(),
            params: Vec::new(),
        };
        if let Some((line, v)) = r.raw("subcommand") {
            if v != subcommand {
                return Err(Error::Config {
                    line,
                    message: format!("file is for subcommand '{v}', not '{subcommand}'"),
                });
            }
        }
        r.raw("version");
        r.raw("timestamp");
        Ok(r)
    }

    fn raw(&mut self, key: &str) -> Option<(usize, String)> {
        let e = self.file.entries.get(key).cloned();
        if e.is_some() {
            self.used.insert(key.to_string());
        }
        e
    }

    fn file_value<T>(&mut self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|e| Error::Config {
                line,
                message: format!("{key}: {e}"),
            }),
        }
    }

    fn record(&mut self, key: &str, value: impl Display) {
        self.params.push((key.to_string(), value.to_string()));
    }

    fn opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let file = self.file_value::<T>(key)?;
        let v = flag.or(file);
        if let Some(v) = &v {
            self.record(key, v);
        }
        Ok(v)
    }

    fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        Ok(self.opt(key, flag)?.unwrap_or_else(|| {
            self.record(key, &default);
            default
        }))
    }

    fn model(&mut self, sigma: Option<f64>, sigma2: Option<f64>, family: Option<Family>, default: Family) -> Result<EntryModel> {
        let family = self.get("family", family, default)?;
        let file_sigma2 = self.file_value::<f64>("sigma2")?;
        let file_sigma = self.file_value::<f64>("sigma")?;
        let s2 = sigma2
            .or(sigma.map(|s| s * s))
            .or(file_sigma2)
            .or(file_sigma.map(|s| s * s));
        let model = match (&family, s2) {
            (Family::Atoms(atoms), None) => EntryModel::atoms(atoms.clone())?,
            (_, s2) => EntryModel::new(family, s2.unwrap_or(1.0))?,
        };
        self.record("sigma2", model.sigma2());
        Ok(model)
    }

    fn threads(&mut self, flag: Option<usize>) -> Result<Option<usize>> {
        let t = match self.opt("threads", flag)? {
            Some(t) => Some(t),
            None => match std::env::var(THREADS_ENV) {
                Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidParameter(format!("{THREADS_ENV}={v} is not a positive integer"))
                })?),
                Err(_) => None,
            },
        };
        if t == Some(0) {
            return Err(Error::InvalidParameter("threads must be >= 1".into()));
        }
        Ok(t)
    }

    fn finish(self, seed: Option<u64>) -> Result<RunManifest> {
        for (k, (line, _)) in &self.file.entries {
            if !self.used.contains(k) {
                return Err(Error::Config {
                    line: *line,
                    message: format!("unknown key '{k}' for subcommand '{}'", self.subcommand),
                });
            }
        }
        Ok(RunManifest {
            subcommand: self.subcommand.to_string(),
            params: self.params,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        })
    }
}

/// A float with 12 significant digits, `n/a` for missing values.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let exp = rounded.abs().log10().floor();
    if (-5.0..15.0).contains(&exp) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".into(), fmt_num)
}

struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|c| {
                    if c.contains([',', '"', '\n']) {
                        format!("\"{}\"", c.replace('"', "\"\""))
                    } else {
                        c.clone()
                    }
                })
                .collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }
}

struct Output {
    table: Table,
    data: Value,
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(f),
        None => f(),
    }
}

/// Run the command line `argv` (program name first), writing tables to
/// `stdout` and diagnostics to `stderr`. Returns the process exit code:
/// 0 on success, 1 on invalid input, 2 when an enumeration budget is exceeded.
pub fn dispatch_to<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match run(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// [`dispatch_to`] on the process streams.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let code = dispatch_to(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    let _ = std::io::stdout().flush();
    code
}

fn run(command: Command, stdout: &mut dyn Write) -> Result<()> {
    let (common, mut r) = match &command {
        Command::Classes(a) => (&a.common, Resolver::new("classes", a.common.config.as_deref())?),
        Command::Patterns(a) => (&a.common, Resolver::new("patterns", a.common.config.as_deref())?),
        Command::Variance(a) => (&a.common, Resolver::new("variance", a.common.config.as_deref())?),
        Command::Simulate(a) => (&a.common, Resolver::new("simulate", a.common.config.as_deref())?),
        Command::Oracle(a) => (&a.common, Resolver::new("oracle", a.common.config.as_deref())?),
        Command::Report(a) => (&a.common, Resolver::new("report", a.common.config.as_deref())?),
        Command::Traces(a) => (&a.common, Resolver::new("traces", a.common.config.as_deref())?),
    };
    let format = r.get("format", common.format, Format::Csv)?;
    let job = match &command {
        Command::Classes(a) => resolve_classes(a, &mut r)?,
        Command::Patterns(a) => resolve_patterns(a, &mut r)?,
        Command::Variance(a) => resolve_variance(a, &mut r)?,
        Command::Simulate(a) => resolve_simulate(a, &mut r)?,
        Command::Oracle(a) => resolve_oracle(a, &mut r)?,
        Command::Report(a) => resolve_report(a, &mut r)?,
        Command::Traces(a) => resolve_traces(a, &mut r)?,
    };
    let manifest = r.finish(job.seed)?;
    if common.print_config {
        write!(stdout, "{manifest}")?;
        return Ok(());
    }
    let out = (job.run)()?;
    let doc = json!({
        "schema": SCHEMA,
        "manifest": manifest.to_json(),
        "data": out.data,
    });
    let csv = out.table.to_csv();
    let json_text = serde_json::to_string_pretty(&doc)? + "\n";
    let simulate = matches!(command, Command::Simulate(_));
    match &common.out {
        Some(path) => {
            let body = if simulate || format == Format::Json { &json_text } else { &csv };
            std::fs::write(path, body)?;
            let mut mpath = path.clone().into_os_string();
            mpath.push(".manifest");
            std::fs::write(PathBuf::from(mpath), manifest.to_string())?;
            if simulate && format == Format::Csv {
                stdout.write_all(csv.as_bytes())?;
            }
        }
        None => match format {
            Format::Csv => stdout.write_all(csv.as_bytes())?,
            Format::Json => stdout.write_all(json_text.as_bytes())?,
        },
    }
    Ok(())
}

struct Job {
    seed: Option<u64>,
    run: Box<dyn FnOnce() -> Result<Output>>,
}

fn resolve_classes(a: &ClassesArgs, r: &mut Resolver) -> Result<Job> {
    let class = r.get("class", a.class, SymmetryClass::Diii)?;
    let n = r.get("n", a.n, 4)?;
    Ok(Job {
        seed: None,
        run: Box::new(move || {
            let table = ClassTable::new(class, n)?;
            let mut t = Table::new(&["id", "label", "kind", "size", "representative", "members"]);
            for (id, c) in table.classes().iter().enumerate() {
                let members: Vec<String> = c
                    .members
                    .iter()
                    .map(|(p, s)| format!("{}{}:{}", if *s > 0 { '+' } else { '-' }, p.p, p.q))
                    .collect();
                t.push(vec![
                    id.to_string(),
                    c.label(),
                    c.kind.to_string(),
                    c.len().to_string(),
                    format!("{}:{}", c.representative.p, c.representative.q),
                    members.join(" "),
                ]);
            }
            Ok(Output {
                table: t,
                data: json!({ "class": class, "n": n, "classes": table.classes() }),
            })
        }),
    })
}

fn resolve_patterns(a: &PatternsArgs, r: &mut Resolver) -> Result<Job> {
    let ms = r.get("m", a.m.clone(), DegreeList(vec![4]))?;
    let mode = r.get("condition", a.condition, DominoMode::Forward)?;
    let filter = r.get("filter", a.filter, SequenceFilter::All)?;
    let budget = Budget::new(r.get("budget", a.budget, Budget::default().limit)?);
    Ok(Job {
        seed: None,
        run: Box::new(move || {
            let mut t = Table::new(&["m", "condition", "filter", "count", "closed_form", "match"]);
            let mut data = Vec::new();
            for &m in &ms.0 {
                let e = count_delta_sequences(m, mode, filter, budget)?;
                t.push(vec![
                    m.to_string(),
                    mode.to_string(),
                    filter.to_string(),
                    e.count.to_string(),
                    e.closed_form.to_string(),
                    e.matches().to_string(),
                ]);
                data.push(json!({
                    "m": m, "condition": mode, "filter": filter.to_string(),
                    "count": e.count, "closed_form": e.closed_form, "match": e.matches(),
                }));
            }
            Ok(Output { table: t, data: Value::Array(data) })
        }),
    })
}

fn resolve_variance(a: &VarianceArgs, r: &mut Resolver) -> Result<Job> {
    let class = r.get("class", a.model.class, SymmetryClass::Diii)?;
    let n = r.get("n", a.model.n, 4)?;
    let model = r.model(a.model.sigma, a.model.sigma2, a.model.family.clone(), Family::Gaussian)?;
    let ms = r.get("m", a.m.clone(), DegreeList(vec![2, 3, 4]))?;
    let mode = r.get("mode", a.mode, VarianceMode::Exact)?;
    let rule = r.get("rule", a.rule, GoodRule::Equality)?;
    let budget = Budget::new(r.get("budget", a.budget, Budget::default().limit)?);
    let threads = r.threads(a.threads)?;
    Ok(Job {
        seed: None,
        run: Box::new(move || {
            with_threads(threads, move || {
                let mut t = Table::new(&["class", "n", "m", "value", "mode", "flag"]);
                let mut data = Vec::new();
                let mut oracle = match mode {
                    VarianceMode::Oracle => Some(MomentOracle::new(class, n, model.clone(), budget)?),
                    _ => None,
                };
                for &m in &ms.0 {
                    let (value, flag) = match mode {
                        VarianceMode::Exact => {
                            class.check_n(n)?;
                            (v_n_breakdown(class, n, m, &model, rule, budget)?.value, "finite-n".to_string())
                        }
                        VarianceMode::Asymptotic => {
                            let a = v_asymptotic(m, &model)?;
                            (a.value, a.flag.to_string())
                        }
                        VarianceMode::Oracle => (
                            oracle.as_mut().expect("oracle built").cheb_cov(m, m)?,
                            "finite-n".to_string(),
                        ),
                    };
                    t.push(vec![
                        class.to_string(),
                        n.to_string(),
                        m.to_string(),
                        fmt_num(value),
                        mode.to_string(),
                        flag.clone(),
                    ]);
                    data.push(json!({
                        "class": class, "n": n, "m": m, "value": value,
                        "mode": mode.to_string(), "flag": flag,
                    }));
                }
                Ok(Output { table: t, data: Value::Array(data) })
            })
        }),
    })
}

fn resolve_simulate(a: &SimulateArgs, r: &mut Resolver) -> Result<Job> {
    let class = r.get("class", a.model.class, SymmetryClass::Diii)?;
    let n = r.get("n", a.model.n, 64)?;
    let model = r.model(a.model.sigma, a.model.sigma2, a.model.family.clone(), Family::Gaussian)?;
    let max_degree = r.get("M", a.max_degree, 6)?;
    let samples = r.get("samples", a.samples, 10_000)?;
    let seed = r.get("seed", a.seed, 0)?;
    let threads = r.threads(a.threads)?;
    let mut config = SimulationConfig::new(class, n, model, max_degree, samples, seed);
    config.threads = threads;
    config.validate()?;
    Ok(Job {
        seed: Some(seed),
        run: Box::new(move || {
            let result = run_simulation(&config)?;
            let report = clt_report(&result, CltThresholds::default())?;
            let mut t = Table::new(&["degree", "var_est", "var_se", "theory", "flag", "z", "k3", "k4"]);
            for d in &report.degrees {
                t.push(vec![
                    d.degree.to_string(),
                    fmt_num(d.var_est),
                    fmt_num(d.var_se),
                    fmt_num(d.theory),
                    d.flag.to_string(),
                    fmt_opt(d.z),
                    fmt_opt(d.k3),
                    fmt_opt(d.k4),
                ]);
            }
            Ok(Output {
                table: t,
                data: json!({ "result": result, "report": report }),
            })
        }),
    })
}

fn resolve_oracle(a: &OracleArgs, r: &mut Resolver) -> Result<Job> {
    let class = r.get("class", a.class, SymmetryClass::Diii)?;
    let n = r.get("n", a.n, 2)?;
    let model = r.model(a.sigma, a.sigma2, a.family.clone(), Family::Rademacher)?;
    let max_degree = r.get("M", a.max_degree, 4)?;
    let budget = Budget::new(r.get("budget", a.budget, Budget::default().limit)?);
    Ok(Job {
        seed: None,
        run: Box::new(move || {
            class.check_n(n)?;
            let mut moment = MomentOracle::new(class, n, model.clone(), budget)?;
            let config = match model.support() {
                Some(_) => Some(config_oracle_matrix(class, n, max_degree, &model, budget)?),
                None => None,
            };
            let mut t = Table::new(&["class", "n", "m", "mu", "moment_oracle", "config_oracle", "abs_diff"]);
            let mut data = Vec::new();
            for m in 1..=max_degree {
                for mu in 1..=max_degree {
                    let a = moment.cheb_cov(m, mu)?;
                    let b = config.as_ref().map(|c| c[m - 1][mu - 1]);
                    let diff = b.map(|b| (a - b).abs());
                    t.push(vec![
                        class.to_string(),
                        n.to_string(),
                        m.to_string(),
                        mu.to_string(),
                        fmt_num(a),
                        fmt_opt(b),
                        fmt_opt(diff),
                    ]);
                    data.push(json!({
                        "m": m, "mu": mu, "moment_oracle": a, "config_oracle": b, "abs_diff": diff,
                    }));
                }
            }
            Ok(Output {
                table: t,
                data: json!({ "class": class, "n": n, "rows": data }),
            })
        }),
    })
}

fn resolve_report(a: &ReportArgs, r: &mut Resolver) -> Result<Job> {
    let class = r.get("class", a.model.class, SymmetryClass::Diii)?;
    let n = r.get("n", a.model.n, 4)?;
    let model = r.model(a.model.sigma, a.model.sigma2, a.model.family.clone(), Family::Gaussian)?;
    let ms = r.get("m", a.m.clone(), DegreeList(vec![2, 3, 4, 5]))?;
    let rule = r.get("rule", a.rule, GoodRule::Equality)?;
    let budget = Budget::new(r.get("budget", a.budget, Budget::default().limit)?);
    let threads = r.threads(a.threads)?;
    Ok(Job {
        seed: None,
        run: Box::new(move || {
            with_threads(threads, move || {
                let rep = cov_report(class, n, &ms.0, &model, rule, budget)?;
                let mut t = Table::new(&["class", "n", "m", "v_n_exact", "v_asymptotic", "flag", "gap"]);
                for row in &rep.rows {
                    t.push(vec![
                        class.to_string(),
                        n.to_string(),
                        row.m.to_string(),
                        fmt_num(row.v_n_exact),
                        fmt_num(row.v_asymptotic),
                        row.flag.to_string(),
                        fmt_num(row.gap),
                    ]);
                }
                Ok(Output {
                    table: t,
                    data: serde_json::to_value(&rep)?,
                })
            })
        }),
    })
}

fn resolve_traces(a: &TracesArgs, r: &mut Resolver) -> Result<Job> {
    let class = r.get("class", a.model.class, SymmetryClass::Diii)?;
    let n = r.get("n", a.model.n, 4)?;
    let model = r.model(a.model.sigma, a.model.sigma2, a.model.family.clone(), Family::Gaussian)?;
    let max_degree = r.get("M", a.max_degree, 6)?;
    let seed = r.get("seed", a.seed, 0)?;
    Ok(Job {
        seed: Some(seed),
        run: Box::new(move || {
            let sample = sample_matrix(class, n, &model, seed)?;
            let traces = trace_cheb_vector(&sample, max_degree, model.sigma())?;
            let mut t = Table::new(&["degree", "trace"]);
            for (i, v) in traces.iter().enumerate() {
                t.push(vec![(i + 1).to_string(), fmt_num(*v)]);
            }
            Ok(Output {
                table: t,
                data: json!({ "class": class, "n": n, "seed": seed, "traces": traces }),
            })
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("symmwig").chain(args.iter().copied());
        let code = dispatch_to(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(16.0), "16");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_num(-1.5e-20), "-1.5e-20");
        assert_eq!(fmt_num(0.0), "0");
    }

    #[test]
    fn degree_lists() {
        assert_eq!("4".parse::<DegreeList>().unwrap().0, vec![4]);
        assert_eq!("2-4,7".parse::<DegreeList>().unwrap().0, vec![2, 3, 4, 7]);
        assert!("0".parse::<DegreeList>().is_err());
        assert!("5-3".parse::<DegreeList>().is_err());
        assert_eq!(DegreeList(vec![2, 3]).to_string(), "2,3");
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let e = ConfigFile::parse("n=3\n\n# c\nbroken\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 4, .. }));
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_args(&["classes", "--bogus"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
        let (code, _, _) = run_args(&["frobnicate"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn budget_errors_exit_two() {
        let (code, _, err) = run_args(&["variance", "--n", "20", "--m", "8", "--budget", "1000"]);
        assert_eq!(code, 2, "{err}");
    }
}
