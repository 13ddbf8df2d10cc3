//! Seeded experiment runner behind the `gext` binary.
//!
//! Every random quantity derives from `--seed` through [`crate::seed`], so a
//! fixed command line reproduces its output byte for byte. Options may also
//! come from a `key=value` file given by `--config`; flags on the command
//! line take precedence. Relative `--out` paths resolve against
//! `$GEXT_OUTPUT_DIR` when it is set.

mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use output::{Cell, ConfigEcho, Format, Table};

use crate::error::Error;
use crate::extension::{correlation_cesaro, walk, Observable, ObservableMode, SimpleFunction, WalkOptions};
use crate::groups::{serialize_tuple, GTuple, GroupDescriptor, GroupElement, Representation};
use crate::iet::{golden_approximant, golden_lengths, random_exact_lengths, random_irreducible_permutation, Iet, Permutation};
use crate::obstruction::{conjugacy_batch, fixed_vector_batch, track_conjugacy, track_conjugacy_all, track_fixed_vector, BatchSummary};
use crate::rauzy::{renormalize, veech_flags, ExtendedState};
use crate::scalar::{parse_lengths, LengthInput, Rational, Scalar};
use crate::seed::child_rng;
use crate::selftest::run_suites;

/// Environment variable naming the directory for relative `--out` paths.
pub const OUTPUT_DIR_ENV: &str = "GEXT_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "gext", version, about = "Extended Rauzy-Veech renormalization experiments", args_override_self = true)]
pub struct Cli {
    /// `key=value` file of default options.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print an exchange, or an orbit and its coding.
    Iet(IetArgs),
    /// Extended renormalization path.
    Renorm(RenormArgs),
    /// Orbit random walk and its Weyl sums.
    Walk(WalkArgs),
    /// Cesaro-averaged correlations of the skew product.
    Mix(MixArgs),
    /// Fixed-vector functional along renormalization.
    Obstruct(ObstructArgs),
    /// Conjugacy functional along renormalization.
    Conj(ConjArgs),
    /// Oracle suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ExchangeOpts {
    /// Number of intervals (inferred from the lengths when omitted).
    #[arg(long)]
    pub n: Option<usize>,
    /// Images `pi(1),...,pi(n)`, or `random`; defaults to the reversal.
    #[arg(long)]
    pub perm: Option<String>,
    /// `p/q` list (exact), decimal list (float), `random` (exact), `golden`
    /// (float) or `golden-exact` (Fibonacci approximant).
    #[arg(long)]
    pub lengths: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputOpts {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct TupleOpts {
    /// `u1`, `torus:m`, `su2` or a `*`-product.
    #[arg(long, default_value = "su2")]
    pub group: String,
    /// `haar`, `identity` or `;`-separated elements.
    #[arg(long, default_value = "haar")]
    pub tuple: String,
}

#[derive(Debug, Clone, Args)]
pub struct IetArgs {
    #[command(flatten)]
    pub exchange: ExchangeOpts,
    #[command(flatten)]
    pub output: OutputOpts,
    /// Starting point of an orbit.
    #[arg(long)]
    pub orbit: Option<String>,
    /// Number of orbit points.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RenormArgs {
    #[command(flatten)]
    pub exchange: ExchangeOpts,
    #[command(flatten)]
    pub tuple: TupleOpts,
    #[command(flatten)]
    pub output: OutputOpts,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Evaluate P1/P2 at this epsilon.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Rescale float lengths to total 1 after each step.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub exchange: ExchangeOpts,
    #[command(flatten)]
    pub tuple: TupleOpts,
    #[command(flatten)]
    pub output: OutputOpts,
    /// Starting point.
    #[arg(long, default_value = "0")]
    pub x: String,
    /// Walk length.
    #[arg(long = "K", visible_alias = "steps", default_value_t = 100_000)]
    pub k: u64,
    /// Comma separated representation labels; defaults to the basic one.
    #[arg(long)]
    pub reps: Option<String>,
    /// Rows every `stride` steps (default `K/100`).
    #[arg(long)]
    pub stride: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct MixArgs {
    #[command(flatten)]
    pub exchange: ExchangeOpts,
    #[command(flatten)]
    pub tuple: TupleOpts,
    #[command(flatten)]
    pub output: OutputOpts,
    /// Fiber representation label.
    #[arg(long)]
    pub rep: Option<String>,
    /// Base frequency `l` of `e^{2 pi i l x}`.
    #[arg(long, default_value_t = 0)]
    pub freq: i64,
    /// Matrix coefficient `p,q` (0-based) instead of the character.
    #[arg(long)]
    pub entry: Option<String>,
    /// Number of lags `N`.
    #[arg(long = "N", visible_alias = "lags", default_value_t = 50)]
    pub lags: usize,
    /// Monte Carlo sample size `M`.
    #[arg(long = "M", visible_alias = "samples", default_value_t = 2_000)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ObstructArgs {
    #[command(flatten)]
    pub exchange: ExchangeOpts,
    #[command(flatten)]
    pub tuple: TupleOpts,
    #[command(flatten)]
    pub output: OutputOpts,
    /// Representation label; defaults to the basic one.
    #[arg(long)]
    pub rep: Option<String>,
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Flag levels where P1/P2 hold at this epsilon.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Run a batch of this many random exact 3-IETs with Haar SU(2) tuples
    /// and emit the per-run distribution instead.
    #[arg(long)]
    pub batch: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ConjArgs {
    #[command(flatten)]
    pub exchange: ExchangeOpts,
    #[command(flatten)]
    pub tuple: TupleOpts,
    #[command(flatten)]
    pub output: OutputOpts,
    /// Second tuple: `haar`, `same`, `conjugate` (by a Haar element) or
    /// explicit elements.
    #[arg(long, default_value = "haar")]
    pub other: String,
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Report the all-components variant.
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    pub all: bool,
    /// Batch of random exact 3-IETs with independent Haar SU(2) tuples.
    #[arg(long)]
    pub batch: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code. Tables go to `--out` or `stdout`;
/// summaries and errors go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed subcommand.
pub fn dispatch(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Iet(a) => cmd_iet(a, stdout, stderr),
        Command::Renorm(a) => cmd_renorm(a, stdout, stderr),
        Command::Walk(a) => cmd_walk(a, stdout, stderr),
        Command::Mix(a) => cmd_mix(a, stdout, stderr),
        Command::Obstruct(a) => cmd_obstruct(a, stdout, stderr),
        Command::Conj(a) => cmd_conj(a, stdout, stderr),
        Command::Selftest(a) => cmd_selftest(a, stdout, stderr),
    }
}

const SUBCOMMANDS: [&str; 7] = ["iet", "renorm", "walk", "mix", "obstruct", "conj", "selftest"];

/// Removes `--config FILE` and splices the file's `key=value` lines in as
/// `--key=value` right after the subcommand, ahead of the user's flags.
fn expand_config(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            path = Some(it.next().ok_or_else(|| usage("--config needs a file"))?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(&path).map_err(|e| usage(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let mut tokens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("config line {} is not key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k == "subcommand" || k == "config" {
            continue;
        }
        tokens.push(OsString::from(format!("--{k}={v}")));
    }
    let at = rest.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref())).map(|i| i + 1);
    if let Some(at) = at {
        rest.splice(at..at, tokens);
    }
    Ok(rest)
}

/// An exchange in whichever mode its lengths were entered.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyIet {
    Exact(Iet<Rational>),
    Float(Iet<f64>),
}

macro_rules! with_iet {
    ($any:expr, $iet:ident => $body:expr) => {
        match $any {
            AnyIet::Exact($iet) => $body,
            AnyIet::Float($iet) => $body,
        }
    };
}

impl AnyIet {
    pub fn n(&self) -> usize {
        with_iet!(self, t => t.n())
    }

    pub fn mode(&self) -> &'static str {
        match self {
            AnyIet::Exact(_) => "exact",
            AnyIet::Float(_) => "float",
        }
    }

    fn lengths_text(&self) -> String {
        with_iet!(self, t => join(t.lengths(), ","))
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// Index of the Fibonacci approximant behind `--lengths golden-exact`.
pub const GOLDEN_EXACT_INDEX: usize = 90;

/// Builds the exchange described by `opts`; random parts use `seed`.
pub fn resolve_iet(opts: &ExchangeOpts, seed: u64) -> CliResult<AnyIet> {
    let raw = opts.lengths.as_deref().ok_or_else(|| usage("missing --lengths"))?.trim();
    let lengths = match raw {
        "golden" => LengthInput::Float(golden_lengths()),
        "golden-exact" => LengthInput::Exact(golden_approximant(GOLDEN_EXACT_INDEX)),
        "random" => {
            let n = opts.n.ok_or_else(|| usage("--lengths random needs --n"))?;
            LengthInput::Exact(random_exact_lengths(n, &mut child_rng(seed, "lengths", 0)))
        }
        s => parse_lengths(s).map_err(usage)?,
    };
    let n = match &lengths {
        LengthInput::Exact(v) => v.len(),
        LengthInput::Float(v) => v.len(),
    };
    if let Some(want) = opts.n {
        if want != n {
            return Err(usage(format!("--n {want} but {n} lengths given")));
        }
    }
    let perm = match opts.perm.as_deref().map(str::trim) {
        None => Permutation::reversal(n),
        Some("random") => random_irreducible_permutation(n, &mut child_rng(seed, "perm", 0)).map_err(usage)?,
        Some(s) => s.parse::<Permutation>().map_err(usage)?,
    };
    if perm.n() != n {
        return Err(usage(format!("permutation has {} entries but {n} lengths given", perm.n())));
    }
    Ok(match lengths {
        LengthInput::Exact(v) => AnyIet::Exact(Iet::new(v, perm).map_err(usage)?),
        LengthInput::Float(v) => AnyIet::Float(Iet::new(v, perm).map_err(usage)?),
    })
}

/// Tuple for `n` intervals: `haar` (seeded by `(seed, label)`), `identity`
/// or explicit `;`-separated elements.
pub fn resolve_tuple(opts: &TupleOpts, n: usize, seed: u64, label: &str) -> CliResult<(GroupDescriptor, Vec<GroupElement>)> {
    let desc: GroupDescriptor = opts.group.parse().map_err(usage)?;
    let tuple = match opts.tuple.trim() {
        "haar" => GTuple::haar(&desc, n, &mut child_rng(seed, label, 0)),
        "identity" => GTuple::identity(&desc, n),
        s => GTuple::parse(&desc, s).map_err(usage)?,
    };
    if tuple.len() != n {
        return Err(usage(format!("tuple has {} elements but the exchange has {n} intervals", tuple.len())));
    }
    Ok((desc, tuple.into_elements()))
}

/// The basic nontrivial representation of a group.
pub fn default_rep(desc: &GroupDescriptor) -> Representation {
    match desc {
        GroupDescriptor::U1 => Representation::U1(1),
        GroupDescriptor::Torus(m) => Representation::Torus((0..*m).map(|i| i64::from(i == 0)).collect()),
        GroupDescriptor::Su2 => Representation::spin_half(),
        GroupDescriptor::Product(parts) => Representation::Product(parts.iter().map(default_rep).collect()),
    }
}

fn resolve_rep(desc: &GroupDescriptor, label: Option<&str>) -> CliResult<Representation> {
    match label {
        None => Ok(default_rep(desc)),
        Some(s) => Representation::parse(desc, s).map_err(usage),
    }
}

fn exchange_echo(iet: &AnyIet, echo: &mut ConfigEcho) {
    echo.push(("n".into(), iet.n().to_string()));
    echo.push(("perm".into(), with_iet!(iet, t => join(t.perm().images(), ","))));
    echo.push(("lengths".into(), iet.lengths_text()));
    echo.push(("mode".into(), iet.mode().into()));
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn emit(table: &Table, output: &OutputOpts, stdout: &mut dyn Write) -> CliResult<()> {
    match &output.out {
        None => table.write(output.format, stdout)?,
        Some(path) => {
            let path = match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            let mut file = std::io::BufWriter::new(fs::File::create(&path)?);
            table.write(output.format, &mut file)?;
            file.flush()?;
        }
    }
    Ok(())
}

pub fn cmd_iet(a: &IetArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let iet = resolve_iet(&a.exchange, a.output.seed)?;
    let mut echo = vec![kv("subcommand", "iet")];
    exchange_echo(&iet, &mut echo);
    echo.push(kv("seed", a.output.seed));
    let table = match &a.orbit {
        Some(x) => {
            echo.push(kv("orbit", x));
            echo.push(kv("k", a.k));
            echo.push(kv("format", a.output.format.name()));
            with_iet!(&iet, t => orbit_table(t, x, a.k, echo)?)
        }
        None => {
            echo.push(kv("format", a.output.format.name()));
            with_iet!(&iet, t => interval_table(t, echo))
        }
    };
    emit(&table, &a.output, stdout)?;
    with_iet!(&iet, t => writeln!(
        stderr,
        "iet: n={} perm={} mode={} total={} cuts={}",
        t.n(),
        t.perm(),
        iet.mode(),
        t.total(),
        join(t.cuts(), ",")
    ))?;
    Ok(())
}

fn interval_table<S: Scalar>(t: &Iet<S>, echo: ConfigEcho) -> Table {
    let mut table = Table::new(echo, &["interval", "length", "left", "position", "offset"]);
    for k in 1..=t.n() {
        table.push(vec![
            k.into(),
            t.length(k).to_string().into(),
            t.cuts()[k - 1].to_string().into(),
            t.perm().image(k).into(),
            t.offsets()[k - 1].to_string().into(),
        ]);
    }
    table
}

fn orbit_table<S: Scalar>(t: &Iet<S>, x: &str, k: usize, echo: ConfigEcho) -> CliResult<Table> {
    let x = S::parse_value(x).map_err(usage)?;
    let points = t.orbit(&x, k).map_err(usage)?;
    let word = t.coding_word(&x, k)?;
    let mut table = Table::new(echo, &["k", "x", "interval"]);
    for (i, (p, w)) in points.iter().zip(word).enumerate() {
        table.push(vec![i.into(), p.to_string().into(), w.into()]);
    }
    Ok(table)
}

pub fn cmd_renorm(a: &RenormArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    if a.stride == 0 {
        return Err(usage("--stride must be positive"));
    }
    let iet = resolve_iet(&a.exchange, a.output.seed)?;
    let (desc, tuple) = resolve_tuple(&a.tuple, iet.n(), a.output.seed, "tuple")?;
    let mut echo = vec![kv("subcommand", "renorm")];
    exchange_echo(&iet, &mut echo);
    echo.extend([
        kv("group", &desc),
        kv("tuple", &a.tuple.tuple),
        kv("seed", a.output.seed),
        kv("steps", a.steps),
        kv("stride", a.stride),
        kv("eps", a.eps.map_or("none".to_string(), |e| e.to_string())),
        kv("normalize", a.normalize),
        kv("format", a.output.format.name()),
    ]);
    let (table, summary) = with_iet!(iet, t => renorm_table(t, tuple, a, echo)?);
    emit(&table, &a.output, stdout)?;
    writeln!(stderr, "{summary}")?;
    Ok(())
}

fn renorm_table<S: Scalar>(iet: Iet<S>, tuple: Vec<GroupElement>, a: &RenormArgs, echo: ConfigEcho) -> CliResult<(Table, String)> {
    let state = ExtendedState::new(iet, tuple)?;
    let path = renormalize(&state, a.steps, a.normalize);
    let levels: Vec<usize> = (0..=path.len()).step_by(a.stride).collect();
    let flags = match a.eps {
        Some(eps) => Some(veech_flags(state.iet(), &levels, eps)?),
        None => None,
    };
    let mut table = Table::new(echo, &["m", "rule", "lengths", "perm", "tuple", "p1", "p2", "status"]);
    for (i, &m) in levels.iter().enumerate() {
        let t = path.iet_at(m);
        let rule = (m > 0).then(|| path.records()[m - 1].rule.to_string());
        let lengths = if S::is_exact() { join(t.normalized().lengths(), ";") } else { join(t.lengths(), ";") };
        let flag = flags.as_ref().and_then(|f| f.get(i).copied());
        table.push(vec![
            m.into(),
            rule.into(),
            lengths.into(),
            join(t.perm().images(), ",").into(),
            serialize_tuple(path.tuple_at(m)).into(),
            flag.map(|f| f.0).into(),
            flag.map(|f| f.1).into(),
            "ok".into(),
        ]);
    }
    let status = match path.stop() {
        Some(e) => {
            table.push(vec![(path.len() + 1).into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, "degenerate".into()]);
            format!("degenerate ({e})")
        }
        None => "ok".to_string(),
    };
    let rules: String = path.rules().iter().map(ToString::to_string).collect();
    Ok((table, format!("renorm: steps={} rules={} status={}", path.len(), rules, status)))
}

fn parse_reps(desc: &GroupDescriptor, s: Option<&str>) -> CliResult<Vec<Representation>> {
    match s {
        None => Ok(vec![default_rep(desc)]),
        Some(s) => s.split(',').map(|l| Representation::parse(desc, l).map_err(usage)).collect(),
    }
}

pub fn cmd_walk(a: &WalkArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    if a.k == 0 || a.stride == Some(0) {
        return Err(usage("--K and --stride must be positive"));
    }
    let iet = resolve_iet(&a.exchange, a.output.seed)?;
    let (desc, tuple) = resolve_tuple(&a.tuple, iet.n(), a.output.seed, "tuple")?;
    let reps = parse_reps(&desc, a.reps.as_deref())?;
    let stride = a.stride.unwrap_or((a.k / 100).max(1));
    let mut echo = vec![kv("subcommand", "walk")];
    exchange_echo(&iet, &mut echo);
    echo.extend([
        kv("group", &desc),
        kv("tuple", &a.tuple.tuple),
        kv("seed", a.output.seed),
        kv("x", &a.x),
        kv("K", a.k),
        kv("reps", join(&reps, ",")),
        kv("stride", stride),
        kv("format", a.output.format.name()),
    ]);
    let options = WalkOptions { atom_stride: None, trace_stride: Some(stride) };
    let record = with_iet!(&iet, t => {
        let x = Scalar::parse_value(&a.x).map_err(usage)?;
        walk(t, &tuple, &x, a.k, &reps, &options)?
    });
    let mut columns = vec!["k".to_string()];
    for r in &reps {
        columns.extend([format!("re[{r}]"), format!("im[{r}]"), format!("abs[{r}]")]);
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = Table::new(echo, &cols);
    for snap in &record.trace {
        let mut row = vec![Cell::from(snap.k)];
        for s in &snap.weyl {
            row.extend([Cell::from(s.re), Cell::from(s.im), Cell::from(s.norm())]);
        }
        table.push(row);
    }
    emit(&table, &a.output, stdout)?;
    let finals: Vec<String> =
        reps.iter().zip(record.weyl_sums()).map(|(r, s)| format!("|S_K^({r})|={:.6}", s.norm())).collect();
    writeln!(
        stderr,
        "walk: K={} {} reference 1/sqrt(K)={:.6}{}",
        a.k,
        finals.join(" "),
        1.0 / (a.k as f64).sqrt(),
        if record.is_degenerate() { " degenerate" } else { "" }
    )?;
    Ok(())
}

pub fn cmd_mix(a: &MixArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let iet = resolve_iet(&a.exchange, a.output.seed)?;
    let (desc, tuple) = resolve_tuple(&a.tuple, iet.n(), a.output.seed, "tuple")?;
    let rep = resolve_rep(&desc, a.rep.as_deref())?;
    let mode = match a.entry.as_deref() {
        None => ObservableMode::Character,
        Some(s) => {
            let (p, q) = s.split_once(',').ok_or_else(|| usage("--entry needs p,q"))?;
            let idx = |v: &str| v.trim().parse::<usize>().map_err(|_| usage(format!("bad matrix index '{v}'")));
            ObservableMode::Entry(idx(p)?, idx(q)?)
        }
    };
    let obs = Observable { frequency: a.freq, rep: rep.clone(), mode };
    let mut echo = vec![kv("subcommand", "mix")];
    exchange_echo(&iet, &mut echo);
    echo.extend([
        kv("group", &desc),
        kv("tuple", &a.tuple.tuple),
        kv("seed", a.output.seed),
        kv("rep", &rep),
        kv("freq", a.freq),
        kv("entry", a.entry.as_deref().unwrap_or("none")),
        kv("N", a.lags),
        kv("M", a.samples),
        kv("format", a.output.format.name()),
    ]);
    let phi = SimpleFunction::new(tuple);
    let mut rng = child_rng(a.output.seed, "mix", 0);
    let report = with_iet!(&iet, t => correlation_cesaro(t, &phi, &obs, a.lags, a.samples, &mut rng)?);
    let mut table = Table::new(echo, &["lag", "corr", "cesaro"]);
    for (j, (c, s)) in report.correlations.iter().zip(&report.cesaro).enumerate() {
        table.push(vec![(j + 1).into(), (*c).into(), (*s).into()]);
    }
    emit(&table, &a.output, stdout)?;
    writeln!(
        stderr,
        "mix: C_N={:.6} noise bound 3/sqrt(M)={:.6} mean={:.6}{:+.6}i",
        report.final_cesaro(),
        report.noise_bound,
        report.mean.re,
        report.mean.im
    )?;
    Ok(())
}

fn batch_table(batch: &BatchSummary, echo: ConfigEcho) -> Table {
    let mut table = Table::new(echo, &["run", "perm", "min", "terminal", "decayed", "truncated", "series"]);
    for r in &batch.runs {
        table.push(vec![
            r.index.into(),
            join(r.perm.images(), ",").into(),
            r.min.into(),
            r.terminal.into(),
            r.decayed.into(),
            r.truncated.into(),
            join(&r.series, ";").into(),
        ]);
    }
    table
}

pub fn cmd_obstruct(a: &ObstructArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    if a.stride == 0 {
        return Err(usage("--stride must be positive"));
    }
    if let Some(runs) = a.batch {
        let rep = resolve_rep(&GroupDescriptor::Su2, a.rep.as_deref())?;
        let echo = vec![
            kv("subcommand", "obstruct"),
            kv("batch", runs),
            kv("group", "su2"),
            kv("rep", &rep),
            kv("seed", a.output.seed),
            kv("steps", a.steps),
            kv("format", a.output.format.name()),
        ];
        let batch = fixed_vector_batch(a.output.seed, runs, a.steps, &rep)?;
        emit(&batch_table(&batch, echo), &a.output, stdout)?;
        writeln!(stderr, "{}", batch.describe())?;
        return Ok(());
    }
    let iet = resolve_iet(&a.exchange, a.output.seed)?;
    let (desc, tuple) = resolve_tuple(&a.tuple, iet.n(), a.output.seed, "tuple")?;
    let rep = resolve_rep(&desc, a.rep.as_deref())?;
    let mut echo = vec![kv("subcommand", "obstruct")];
    exchange_echo(&iet, &mut echo);
    echo.extend([
        kv("group", &desc),
        kv("tuple", &a.tuple.tuple),
        kv("rep", &rep),
        kv("seed", a.output.seed),
        kv("steps", a.steps),
        kv("stride", a.stride),
        kv("eps", a.eps.map_or("none".to_string(), |e| e.to_string())),
        kv("format", a.output.format.name()),
    ]);
    let (series, flags) = with_iet!(&iet, t => {
        let series = track_fixed_vector(&ExtendedState::new(t.clone(), tuple)?, &rep, a.steps, a.stride)?;
        let levels: Vec<usize> = series.rows.iter().map(|r| r.m).collect();
        let flags = match a.eps {
            Some(eps) => Some(veech_flags(t, &levels, eps)?),
            None => None,
        };
        (series, flags)
    });
    let mut columns = vec!["m", "rule", "surrogate", "ob"];
    if flags.is_some() {
        columns.extend(["p1", "p2"]);
    }
    let mut table = Table::new(echo, &columns);
    for (i, r) in series.rows.iter().enumerate() {
        let mut row = vec![r.m.into(), r.rule.map(|x| x.to_string()).into(), r.surrogate.into(), r.ob.into()];
        if let Some(f) = &flags {
            let flag = f.get(i).copied();
            row.extend([flag.map(|f| f.0).into(), flag.map(|f| f.1).into()]);
        }
        table.push(row);
    }
    emit(&table, &a.output, stdout)?;
    let min = series.rows.iter().map(|r| r.ob).fold(f64::INFINITY, f64::min);
    let last = series.rows.last().map_or(f64::NAN, |r| r.ob);
    writeln!(
        stderr,
        "obstruct: levels={} min ob={:.6e} final ob={:.6e}{}",
        series.rows.len(),
        min,
        last,
        series.stop.as_ref().map_or(String::new(), |e| format!(" truncated ({e})"))
    )?;
    Ok(())
}

pub fn cmd_conj(a: &ConjArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    if a.stride == 0 {
        return Err(usage("--stride must be positive"));
    }
    if let Some(runs) = a.batch {
        let echo = vec![
            kv("subcommand", "conj"),
            kv("batch", runs),
            kv("group", "su2"),
            kv("seed", a.output.seed),
            kv("steps", a.steps),
            kv("format", a.output.format.name()),
        ];
        let batch = conjugacy_batch(a.output.seed, runs, a.steps)?;
        emit(&batch_table(&batch, echo), &a.output, stdout)?;
        writeln!(stderr, "{}", batch.describe())?;
        return Ok(());
    }
    let iet = resolve_iet(&a.exchange, a.output.seed)?;
    let (desc, g) = resolve_tuple(&a.tuple, iet.n(), a.output.seed, "tuple")?;
    let h = match a.other.trim() {
        "same" => g.clone(),
        "conjugate" => {
            let c = crate::groups::haar_sample(&desc, &mut child_rng(a.output.seed, "conjugator", 0));
            g.iter().map(|x| x.conjugated_by(&c)).collect::<crate::error::Result<_>>()?
        }
        other => resolve_tuple(&TupleOpts { group: a.tuple.group.clone(), tuple: other.to_string() }, iet.n(), a.output.seed, "other")?.1,
    };
    let mut echo = vec![kv("subcommand", "conj")];
    exchange_echo(&iet, &mut echo);
    echo.extend([
        kv("group", &desc),
        kv("tuple", &a.tuple.tuple),
        kv("other", &a.other),
        kv("seed", a.output.seed),
        kv("steps", a.steps),
        kv("stride", a.stride),
        kv("all", a.all),
        kv("format", a.output.format.name()),
    ]);
    let series = with_iet!(&iet, t => {
        let gs = ExtendedState::new(t.clone(), g)?;
        let hs = ExtendedState::new(t.clone(), h)?;
        if a.all { track_conjugacy_all(&gs, &hs, a.steps, a.stride)? } else { track_conjugacy(&gs, &hs, a.steps, a.stride)? }
    });
    let mut table = Table::new(echo, &["m", "rule", "c_m"]);
    for r in &series.rows {
        table.push(vec![r.m.into(), r.rule.map(|x| x.to_string()).into(), r.value.into()]);
    }
    emit(&table, &a.output, stdout)?;
    let min = series.rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    writeln!(
        stderr,
        "conj: levels={} min c_m={:.6e}{}",
        series.rows.len(),
        min,
        series.stop.as_ref().map_or(String::new(), |e| format!(" truncated ({e})"))
    )?;
    Ok(())
}

pub fn cmd_selftest(a: &SelftestArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let reports = run_suites(a.seed);
    for r in &reports {
        writeln!(stdout, "{}", r.line())?;
        writeln!(stderr, "{}: {:.2}s", r.name, r.elapsed.as_secs_f64())?;
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        writeln!(stdout, "selftest: {} suites passed", reports.len())?;
        Ok(())
    } else {
        Err(CliError::Failed(format!("failed suites: {}", failed.join(", "))))
    }
}
