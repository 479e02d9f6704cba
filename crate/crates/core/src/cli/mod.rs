//! Command-line front end. Every subcommand produces a [`Report`] holding
//! the same data as JSON and as a CSV table; the binary only writes it out.

mod harness;

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

pub use harness::{
    default_timeout, gi_table, hilbert_table, parallel_map, reference_value, run_trials, GiCell, GiTable, HilbertRow, HilbertTable,
    Outcome, TableOptions, TimeStats, TrialOptions, TrialReport, SCHEMA_VERSION,
};

use crate::arith::{Field, FieldDescriptor, PrimeField, Rationals};
use crate::bounds::{bounds_report, BoundsInput};
use crate::error::{Error, Result};
use crate::groebner::{buchberger_in, BuchbergerOptions};
use crate::hilbert::{affine_hilbert_function, emit_certification_system, find_points_bruteforce, jde_dimension, DEFAULT_POINT_BUDGET};
use crate::linalg::rank;
use crate::poly::{monomials_up_to_degree, parse_polynomial, parse_text_system, print_polynomial, AnySystem, Monomial, MonomialOrder, Polynomial, Ring, SystemFile};
use crate::problems::{builtin, conics_specialized_system, degree_profile, ProblemInstance, BUILTIN_NAMES};
use crate::saturate::{compute_gi_with, GiOptions};

/// Name of the specialized conics system, loadable wherever a plain system
/// is accepted.
pub const CONICS_PSTAR: &str = "conics-pstar";

/// Default modulus when none is given.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "satura", version, about = "Groebner bases, randomized solution counts and Hilbert-function bounds")]
pub struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for batch commands.
    #[arg(long, global = true, env = "SATURA_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    /// Per-computation time limit in seconds.
    #[arg(long = "timeout-s", global = true)]
    pub timeout_s: Option<u64>,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduced Groebner basis of a system.
    Gb(GbArgs),
    /// Randomized solution count g_i.
    Gi(GiArgs),
    /// Affine Hilbert function of a system or of saturated ideals.
    Hilbert(HilbertArgs),
    /// Dimensions of the truncated spans J_d^e.
    Jde(JdeArgs),
    /// Repeated randomized counts with an outcome histogram.
    Trials(TrialsArgs),
    /// Degree and probability bounds.
    Bounds(BoundsArgs),
    /// Built-in problems.
    #[command(subcommand)]
    Problems(ProblemsCommand),
    /// Write the square certification system for brute-forced points.
    EmitCert(EmitCertArgs),
}

/// Where a polynomial system comes from.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Built-in name, `conics-pstar` or `file:<path>`.
    #[arg(long)]
    pub problem: Option<String>,
    /// JSON system file or text file (one polynomial per line).
    #[arg(long, conflicts_with = "problem")]
    pub file: Option<PathBuf>,
    /// Variable names for text input, comma separated.
    #[arg(long)]
    pub vars: Option<String>,
}

#[derive(Debug, Args)]
pub struct GbArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value = "grevlex")]
    pub order: MonomialOrder,
    /// `Q` or `Fp:<p>`; defaults to the field of the input.
    #[arg(long)]
    pub field: Option<FieldDescriptor>,
}

#[derive(Debug, Args)]
pub struct GiArgs {
    #[arg(long)]
    pub problem: String,
    /// One or more values of i.
    #[arg(long, value_delimiter = ',', required = true)]
    pub i: Vec<usize>,
    /// One or more primes; several values (or several i) produce a table.
    #[arg(long, value_delimiter = ',')]
    pub prime: Vec<u64>,
    /// Count over `Q` instead of a prime field.
    #[arg(long, conflicts_with = "prime")]
    pub rational: bool,
    /// Run this many trials instead of a single draw.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Value counted as a success in trial mode.
    #[arg(long)]
    pub reference: Option<usize>,
    /// JSON-lines file for resumable tables.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HilbertArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Values of i; when given, rows are for the saturated ideals.
    #[arg(long, value_delimiter = ',')]
    pub i: Vec<usize>,
    #[arg(long)]
    pub prime: Option<u64>,
    /// Field for the plain-system mode; defaults to the input field.
    #[arg(long, conflicts_with = "prime")]
    pub field: Option<FieldDescriptor>,
    #[arg(long, default_value_t = 10)]
    pub dmax: u32,
}

#[derive(Debug, Args)]
pub struct JdeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub d: u32,
    /// Largest e; one row per e in 0..=e.
    #[arg(long)]
    pub e: u32,
    #[arg(long)]
    pub field: Option<FieldDescriptor>,
}

#[derive(Debug, Args)]
pub struct TrialsArgs {
    #[arg(long)]
    pub problem: String,
    #[arg(long)]
    pub i: usize,
    #[arg(long)]
    pub prime: u64,
    #[arg(long)]
    pub trials: usize,
    #[arg(long)]
    pub reference: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub dmin: Option<u32>,
    #[arg(long)]
    pub dmax: Option<u32>,
    /// Degrees of the polynomials, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub degrees: Vec<u32>,
    /// Degree bound of the variety when no degree list is given.
    #[arg(long = "deg-v")]
    pub deg_v: Option<BigUint>,
    #[arg(long = "g-upper")]
    pub g_upper: BigUint,
    /// Evaluate the probabilities at p = 2^k.
    #[arg(long = "prime-exp")]
    pub prime_exp: Option<u32>,
    /// Success target as a decimal or a fraction.
    #[arg(long, default_value = "0.99", value_parser = parse_probability)]
    pub target: BigRational,
}

#[derive(Debug, Subcommand)]
pub enum ProblemsCommand {
    /// Names and shapes of the built-in problems.
    List,
    /// Write a problem in the JSON system format.
    Export {
        #[arg(long)]
        name: String,
    },
}

#[derive(Debug, Args)]
pub struct EmitCertArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Prime for point enumeration when the input is over `Q`.
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long)]
    pub d: u32,
    /// Column monomials, comma separated; chosen greedily when absent.
    #[arg(long)]
    pub columns: Option<String>,
    /// Largest number of points to enumerate.
    #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
    pub budget: u64,
}

/// Exact rational in `(0, 1)` from `0.99` or `99/100`.
pub fn parse_probability(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let q = if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| format!("bad fraction `{s}`"))?;
        let b: BigInt = b.trim().parse().map_err(|_| format!("bad fraction `{s}`"))?;
        if b.is_zero() {
            return Err("zero denominator".into());
        }
        BigRational::new(a, b)
    } else {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.chars().any(|c| !c.is_ascii_digit()) {
            return Err(format!("bad decimal `{s}`"));
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| format!("bad decimal `{s}`"))?;
        BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
    };
    if q <= BigRational::zero() || q >= BigRational::one() {
        return Err(format!("`{s}` is not strictly between 0 and 1"));
    }
    Ok(q)
}

/// A command result in both output shapes.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Cells or trials that did not produce a value.
    pub failures: usize,
}

impl Report {
    fn new(json: impl Serialize, header: &[&str], rows: Vec<Vec<String>>) -> Report {
        Report { json: serde_json::to_value(json).expect("serializable"), header: header.iter().map(|s| s.to_string()).collect(), rows, failures: 0 }
    }

    fn with_failures(mut self, failures: usize) -> Report {
        self.failures = failures;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", self.json),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
        }
    }
}

/// Process exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 1,
        Error::Timeout | Error::NotZeroDimensional => 3,
        _ => 2,
    }
}

/// Global settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub seed: u64,
    pub threads: usize,
    pub timeout: Option<Duration>,
}

impl Cli {
    pub fn settings(&self) -> Settings {
        let threads = self
            .threads
            .map(|t| t as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
        Settings { seed: self.seed, threads, timeout: self.timeout_s.map(Duration::from_secs) }
    }
}

/// Runs the parsed command.
pub fn run(cli: &Cli) -> Result<Report> {
    let s = cli.settings();
    match &cli.command {
        Command::Gb(a) => cmd_gb(a, s),
        Command::Gi(a) => cmd_gi(a, s),
        Command::Hilbert(a) => cmd_hilbert(a, s),
        Command::Jde(a) => cmd_jde(a),
        Command::Trials(a) => cmd_trials(a, s),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Problems(ProblemsCommand::List) => cmd_problems_list(),
        Command::Problems(ProblemsCommand::Export { name }) => cmd_problems_export(name),
        Command::EmitCert(a) => cmd_emit_cert(a),
    }
}

macro_rules! with_system {
    ($sys:expr, $ring:ident, $polys:ident => $body:expr) => {
        match $sys {
            AnySystem::Rational($ring, $polys) => $body,
            AnySystem::Modular($ring, $polys) => $body,
        }
    };
}

/// Loads a problem instance (built-in name or `file:<path>`).
pub fn load_problem(spec: &str) -> Result<ProblemInstance> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        let file = SystemFile::from_json(&text)?;
        let name = PathBuf::from(path).file_stem().map_or_else(|| path.to_string(), |s| s.to_string_lossy().into_owned());
        return ProblemInstance::from_file(&name, &file);
    }
    builtin(spec).ok_or_else(|| Error::InvalidArgument(format!("unknown problem `{spec}`; known: {}", BUILTIN_NAMES.join(", "))))
}

/// Loads a plain system from `--problem` or `--file`.
pub fn load_system(src: &SourceArgs, order: MonomialOrder) -> Result<AnySystem> {
    let path = match (&src.problem, &src.file) {
        (Some(name), _) if name == CONICS_PSTAR => {
            let polys = conics_specialized_system();
            let ring = polys[0].ring().with_order(order);
            let polys = polys.iter().map(|f| f.with_ring(&ring)).collect::<Result<_>>()?;
            return Ok(AnySystem::Rational(ring, polys));
        }
        (Some(name), _) => match name.strip_prefix("file:") {
            Some(p) => PathBuf::from(p),
            None => {
                let inst = load_problem(name)?;
                let ring = inst.ring.with_order(order);
                let polys = inst.polys.iter().map(|f| f.with_ring(&ring)).collect::<Result<_>>()?;
                return Ok(AnySystem::Rational(ring, polys));
            }
        },
        (None, Some(p)) => p.clone(),
        (None, None) => return Err(Error::InvalidArgument("give --problem or --file".into())),
    };
    let text = std::fs::read_to_string(&path)?;
    if text.trim_start().starts_with('{') {
        return AnySystem::from_file(&SystemFile::from_json(&text)?, order);
    }
    parse_text_file(&text, src.vars.as_deref(), order)
}

/// Text systems: optional `vars:` and `field:` header lines, then one
/// polynomial per line. Without a variable list, identifiers are taken in
/// order of first appearance.
pub fn parse_text_file(text: &str, vars: Option<&str>, order: MonomialOrder) -> Result<AnySystem> {
    let mut names: Option<Vec<String>> = vars.map(split_names);
    let mut field = FieldDescriptor::Rationals;
    let mut body = String::new();
    for line in text.lines() {
        let t = line.trim();
        if let Some(v) = t.strip_prefix("vars:") {
            names.get_or_insert_with(|| split_names(v));
        } else if let Some(f) = t.strip_prefix("field:") {
            field = f.parse()?;
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let names = names.unwrap_or_else(|| identifiers(&body));
    if names.is_empty() {
        return Err(Error::InvalidArgument("system has no variables".into()));
    }
    match field {
        FieldDescriptor::Rationals => {
            let ring = Ring::new(&names, Rationals, order)?;
            let polys = parse_text_system(&body, &ring)?;
            Ok(AnySystem::Rational(ring, polys))
        }
        FieldDescriptor::PrimeField(p) => {
            let ring = Ring::new(&names, PrimeField::new(p)?, order)?;
            let polys = parse_text_system(&body, &ring)?;
            Ok(AnySystem::Modular(ring, polys))
        }
    }
}

fn split_names(s: &str) -> Vec<String> {
    s.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect()
}

fn identifiers(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut cur = String::new();
    let mut push = |cur: &mut String| {
        if !cur.is_empty() && !out.contains(cur) {
            out.push(cur.clone());
        }
        cur.clear();
    };
    for line in text.lines().filter(|l| !l.trim_start().starts_with('#')) {
        for ch in line.chars() {
            if ch.is_alphabetic() || ch == '_' || (!cur.is_empty() && ch.is_alphanumeric()) {
                cur.push(ch);
            } else {
                push(&mut cur);
            }
        }
        push(&mut cur);
    }
    out
}

fn retarget(sys: AnySystem, field: Option<FieldDescriptor>, order: MonomialOrder) -> Result<AnySystem> {
    match field {
        Some(f) => sys.into_field(f, order),
        None => Ok(sys),
    }
}

fn exps_json(m: &Monomial) -> Vec<u16> {
    m.exponents().to_vec()
}

fn polys_rows<F: Field>(polys: &[Polynomial<F>]) -> Vec<Vec<String>> {
    polys.iter().enumerate().map(|(k, f)| vec![k.to_string(), print_polynomial(f)]).collect()
}

fn cmd_gb(a: &GbArgs, s: Settings) -> Result<Report> {
    let sys = retarget(load_system(&a.source, a.order)?, a.field, a.order)?;
    let deadline = s.timeout.map(|t| Instant::now() + t);
    with_system!(sys, ring, polys => {
        let gb = buchberger_in(&ring, &polys, BuchbergerOptions { deadline, ..BuchbergerOptions::default() })?;
        let degree = match gb.degree() {
            Ok(v) => Some(v),
            Err(Error::NotZeroDimensional) => None,
            Err(e) => return Err(e),
        };
        let st = gb.stats();
        let json = json!({
            "schema_version": SCHEMA_VERSION,
            "field": ring.field().descriptor().to_string(),
            "order": format!("{:?}", a.order).to_lowercase(),
            "basis": SystemFile::from_polys(gb.generators(), &ring),
            "leading_monomials": gb.leading_monomials().iter().map(exps_json).collect::<Vec<_>>(),
            "unit": gb.is_unit(),
            "zero_dimensional": degree.is_some(),
            "standard_monomials": degree,
            "stats": {
                "pairs_reduced": st.pairs_reduced,
                "pairs_pruned": st.pairs_pruned,
                "zero_reductions": st.zero_reductions,
                "elapsed_ms": st.elapsed.as_secs_f64() * 1e3,
            },
        });
        Ok(Report::new(json, &["index", "polynomial"], polys_rows(gb.generators())))
    })
}

fn primes_or_default(primes: &[u64]) -> Vec<u64> {
    if primes.is_empty() {
        vec![DEFAULT_PRIME]
    } else {
        primes.to_vec()
    }
}

fn cmd_gi(a: &GiArgs, s: Settings) -> Result<Report> {
    let inst = load_problem(&a.problem)?;
    if let Some(n) = a.trials {
        if a.i.len() != 1 || a.prime.len() > 1 || a.rational {
            return Err(Error::InvalidArgument("trial mode takes one i and one prime".into()));
        }
        let p = primes_or_default(&a.prime)[0];
        return trials_report(&inst, a.i[0], p, n, a.reference, s);
    }
    if a.rational {
        if a.i.len() != 1 {
            return Err(Error::InvalidArgument("counts over Q take a single i".into()));
        }
        return single_gi(&inst, a.i[0], FieldDescriptor::Rationals, s);
    }
    let primes = primes_or_default(&a.prime);
    if a.i.len() == 1 && primes.len() == 1 && a.checkpoint.is_none() {
        return single_gi(&inst, a.i[0], FieldDescriptor::PrimeField(primes[0]), s);
    }
    let table = gi_table(&inst, &a.i, &primes, s.seed, TableOptions { threads: s.threads, timeout: s.timeout }, a.checkpoint.as_deref())?;
    let rows = table
        .cells
        .iter()
        .map(|c| vec![c.i.to_string(), c.prime.to_string(), c.seed.to_string(), c.outcome.label(), c.display.clone(), format!("{:.3}", c.elapsed_ms)])
        .collect();
    let failures = table.failures();
    Ok(Report::new(&table, &["i", "prime", "seed", "outcome", "display", "elapsed_ms"], rows).with_failures(failures))
}

fn single_gi(inst: &ProblemInstance, i: usize, field: FieldDescriptor, s: Settings) -> Result<Report> {
    if let FieldDescriptor::PrimeField(p) = field {
        PrimeField::new(p)?;
    }
    let opts = GiOptions { timeout: default_timeout(i, s.timeout), ..GiOptions::default() };
    let prime = match field {
        FieldDescriptor::PrimeField(p) => Some(p),
        FieldDescriptor::Rationals => None,
    };
    let (value, unit, outcome, elapsed_ms) = match compute_gi_with(inst, i, field, s.seed, opts) {
        Ok(r) => (Some(r.value), r.unit, if r.unit { Outcome::Unit } else { Outcome::Value(r.value) }, r.elapsed_ms),
        Err(e @ (Error::Timeout | Error::NotZeroDimensional)) => {
            let o = if e == Error::Timeout { Outcome::Timeout } else { Outcome::PositiveDimensional };
            (None, false, o, f64::NAN)
        }
        Err(e) => return Err(e),
    };
    let degenerate = !matches!(outcome, Outcome::Value(_));
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "problem": inst.name,
        "value": value,
        "i": i,
        "prime": prime,
        "field": field.to_string(),
        "seed": s.seed,
        "elapsed_ms": if elapsed_ms.is_finite() { json!(elapsed_ms) } else { Value::Null },
        "degenerate": degenerate,
        "unit": unit,
        "outcome": outcome.label(),
    });
    let row = vec![
        inst.name.clone(),
        value.map_or_else(String::new, |v| v.to_string()),
        i.to_string(),
        prime.map_or_else(String::new, |p| p.to_string()),
        field.to_string(),
        s.seed.to_string(),
        if elapsed_ms.is_finite() { format!("{elapsed_ms:.3}") } else { String::new() },
        degenerate.to_string(),
        unit.to_string(),
        outcome.label(),
    ];
    let failures = usize::from(value.is_none());
    Ok(Report::new(json, &["problem", "value", "i", "prime", "field", "seed", "elapsed_ms", "degenerate", "unit", "outcome"], vec![row])
        .with_failures(failures))
}

fn trials_report(inst: &ProblemInstance, i: usize, p: u64, n: usize, reference: Option<usize>, s: Settings) -> Result<Report> {
    let rep = run_trials(inst, i, p, n, s.seed, TrialOptions { threads: s.threads, timeout: s.timeout, reference })?;
    let rows = trial_rows(&rep);
    let failures = rep.positive_dimensional + rep.timeouts + rep.errors;
    Ok(Report::new(&rep, &TRIAL_HEADER, rows).with_failures(failures))
}

const TRIAL_HEADER: [&str; 9] = ["problem", "i", "prime", "trials", "seed", "reference", "successes", "outcome", "count"];

/// One CSV row per histogram bucket, degenerate buckets last.
pub fn trial_rows(rep: &TrialReport) -> Vec<Vec<String>> {
    let lead = || {
        vec![
            rep.problem.clone(),
            rep.i.to_string(),
            rep.prime.to_string(),
            rep.trials.to_string(),
            rep.seed.to_string(),
            rep.reference.map_or_else(String::new, |v| v.to_string()),
            rep.successes.to_string(),
        ]
    };
    let mut buckets: Vec<(String, usize)> = rep.histogram.iter().map(|(v, c)| (v.to_string(), *c)).collect();
    buckets.extend([
        ("unit".to_string(), rep.unit),
        ("positive_dimensional".to_string(), rep.positive_dimensional),
        ("timeout".to_string(), rep.timeouts),
        ("error".to_string(), rep.errors),
    ]);
    buckets
        .into_iter()
        .map(|(k, c)| {
            let mut row = lead();
            row.push(k);
            row.push(c.to_string());
            row
        })
        .collect()
}

fn cmd_trials(a: &TrialsArgs, s: Settings) -> Result<Report> {
    let inst = load_problem(&a.problem)?;
    trials_report(&inst, a.i, a.prime, a.trials, a.reference, s)
}

fn cmd_hilbert(a: &HilbertArgs, s: Settings) -> Result<Report> {
    if !a.i.is_empty() {
        let name = match (&a.source.problem, &a.source.file) {
            (Some(n), _) => n.clone(),
            (None, Some(f)) => format!("file:{}", f.display()),
            (None, None) => return Err(Error::InvalidArgument("give --problem or --file".into())),
        };
        let inst = load_problem(&name)?;
        let p = a.prime.unwrap_or(DEFAULT_PRIME);
        let table = hilbert_table(&inst, &a.i, p, a.dmax, s.seed, TableOptions { threads: s.threads, timeout: s.timeout })?;
        let mut rows = Vec::new();
        for r in &table.rows {
            for (d, v) in r.values.iter().enumerate() {
                rows.push(vec![r.i.to_string(), d.to_string(), v.to_string()]);
            }
        }
        let failures = table.failures();
        return Ok(Report::new(&table, &["i", "d", "hf"], rows).with_failures(failures));
    }
    let field = a.prime.map(FieldDescriptor::PrimeField).or(a.field);
    let order = MonomialOrder::GrevLex;
    let sys = retarget(load_system(&a.source, order)?, field, order)?;
    let deadline = s.timeout.map(|t| Instant::now() + t);
    with_system!(sys, ring, polys => {
        let gb = buchberger_in(&ring, &polys, BuchbergerOptions { deadline, ..BuchbergerOptions::default() })?;
        let hf = affine_hilbert_function(&gb, a.dmax)?;
        let rows = hf.values.iter().enumerate().map(|(d, v)| vec![d.to_string(), v.to_string()]).collect();
        let json = json!({
            "schema_version": SCHEMA_VERSION,
            "field": ring.field().descriptor().to_string(),
            "dmax": a.dmax,
            "values": hf.values,
            "stabilized_at": hf.stabilized_at,
            "stable_value": hf.stable_value,
        });
        Ok(Report::new(json, &["d", "hf"], rows))
    })
}

fn cmd_jde(a: &JdeArgs) -> Result<Report> {
    let order = MonomialOrder::GrevLex;
    let sys = retarget(load_system(&a.source, order)?, a.field, order)?;
    let rows = with_system!(&sys, _ring, polys => {
        (0..=a.e).map(|e| jde_dimension(polys, a.d, e)).collect::<Result<Vec<_>>>()?
    });
    let csv = rows.iter().map(|r| vec![r.d.to_string(), r.e.to_string(), r.dim.to_string(), r.bound.to_string()]).collect();
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "field": sys.descriptor().to_string(),
        "d": a.d,
        "rows": rows,
    });
    Ok(Report::new(json, &["d", "e", "dim", "bound"], csv))
}

fn cmd_bounds(a: &BoundsArgs) -> Result<Report> {
    let input = if a.degrees.is_empty() {
        let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required without --degrees")));
        let deg_v = a.deg_v.clone().ok_or_else(|| Error::InvalidArgument("--deg-v is required without --degrees".into()))?;
        BoundsInput::from_constants(a.n, need(a.r, "r")?, need(a.dmin, "dmin")?, need(a.dmax, "dmax")?, deg_v, a.g_upper.clone())?
    } else {
        let input = BoundsInput::from_degrees(a.n, &a.degrees, a.g_upper.clone())?;
        let clash = |given: Option<u32>, derived: u32| given.is_some_and(|g| g != derived);
        if clash(a.r, input.r) || clash(a.dmin, input.d_min) || clash(a.dmax, input.d_max) {
            return Err(Error::InvalidArgument("--r/--dmin/--dmax disagree with --degrees".into()));
        }
        if a.deg_v.as_ref().is_some_and(|d| *d != input.deg_v) {
            return Err(Error::InvalidArgument("--deg-v disagrees with the product of --degrees".into()));
        }
        input
    };
    let input = match a.prime_exp {
        Some(k) => input.with_prime(BigUint::one() << k),
        None => input,
    };
    let rep = bounds_report(&input, &a.target);
    let mut rows = vec![
        vec!["bezout_bound".into(), rep.bezout_bound.clone()],
        vec!["discriminant_degree_bound".into(), rep.discriminant_degree_bound.clone()],
        vec!["nu_upper_bound".into(), rep.nu_upper_bound.clone()],
        vec!["additive_constant".into(), rep.additive_constant.clone()],
        vec!["target".into(), rep.target.clone()],
        vec!["min_prime_exponent".into(), rep.min_prime_exponent.to_string()],
    ];
    if let (Some(l), Some(sp)) = (&rep.lucky_probability, &rep.success_probability) {
        rows.push(vec!["prime".into(), rep.prime.clone().unwrap_or_default()]);
        rows.push(vec!["lucky_probability_lower".into(), l.lower.clone()]);
        rows.push(vec!["lucky_probability_upper".into(), l.upper.clone()]);
        rows.push(vec!["success_probability_lower".into(), sp.lower.clone()]);
        rows.push(vec!["success_probability_upper".into(), sp.upper.clone()]);
    }
    let mut json = json!({ "schema_version": SCHEMA_VERSION });
    if let (Value::Object(head), Value::Object(body)) = (&mut json, serde_json::to_value(&rep).expect("serializable")) {
        head.extend(body);
    }
    Ok(Report::new(json, &["quantity", "value"], rows))
}

#[derive(Debug, Serialize)]
struct ProblemEntry {
    name: String,
    kind: &'static str,
    nvars: usize,
    npolys: usize,
    degrees: Vec<u32>,
    vars: Vec<String>,
}

fn cmd_problems_list() -> Result<Report> {
    let mut entries: Vec<ProblemEntry> = BUILTIN_NAMES
        .iter()
        .map(|name| {
            let inst = builtin(name).expect("listed");
            ProblemEntry {
                name: inst.name.clone(),
                kind: "problem",
                nvars: inst.nvars(),
                npolys: inst.npolys(),
                degrees: degree_profile(&inst).0,
                vars: inst.vars().to_vec(),
            }
        })
        .collect();
    let pstar = conics_specialized_system();
    entries.push(ProblemEntry {
        name: CONICS_PSTAR.into(),
        kind: "system",
        nvars: pstar[0].ring().nvars(),
        npolys: pstar.len(),
        degrees: pstar.iter().map(|f| f.total_degree().unwrap_or(0)).collect(),
        vars: pstar[0].ring().vars().to_vec(),
    });
    let rows = entries
        .iter()
        .map(|e| {
            let degrees = e.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
            vec![e.name.clone(), e.kind.to_string(), e.nvars.to_string(), e.npolys.to_string(), degrees]
        })
        .collect();
    let json = json!({ "schema_version": SCHEMA_VERSION, "problems": entries });
    Ok(Report::new(json, &["name", "kind", "nvars", "npolys", "degrees"], rows))
}

fn cmd_problems_export(name: &str) -> Result<Report> {
    let src = SourceArgs { problem: Some(name.to_string()), file: None, vars: None };
    let file = load_system(&src, MonomialOrder::GrevLex)?.to_file();
    let rows = file
        .polys
        .iter()
        .enumerate()
        .map(|(k, terms)| {
            let text = terms.iter().map(|(c, e)| format!("{c}{e:?}")).collect::<Vec<_>>().join(" ");
            vec![k.to_string(), text]
        })
        .collect();
    // the system file itself, untouched, so the JSON output is bit-exact
    Ok(Report::new(&file, &["index", "terms"], rows))
}

fn cmd_emit_cert(a: &EmitCertArgs) -> Result<Report> {
    let order = MonomialOrder::GrevLex;
    let sys = load_system(&a.source, order)?;
    let sys = match (sys, a.prime) {
        (s, Some(p)) => s.into_field(FieldDescriptor::PrimeField(p), order)?,
        (s @ AnySystem::Modular(..), None) => s,
        (AnySystem::Rational(..), None) => return Err(Error::InvalidArgument("points are enumerated over F_p; give --prime".into())),
    };
    let AnySystem::Modular(ring, polys) = sys else { unreachable!("retargeted to a prime field") };
    let points = find_points_bruteforce(&polys, a.budget)?;
    if points.is_empty() {
        return Err(Error::InvalidArgument("the system has no F_p-rational points".into()));
    }
    let columns = match &a.columns {
        Some(text) => parse_columns(text, &ring)?,
        None => greedy_columns(&ring, &points, a.d)?,
    };
    let cert = emit_certification_system(&polys, &points, a.d, &columns)?;
    let field = ring.field();
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "degree": cert.degree,
        "points": points.iter().map(|p| p.iter().map(|c| field.format(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "columns": cert.columns.iter().map(exps_json).collect::<Vec<_>>(),
        "lambda_start": cert.lambda_start.iter().map(|r| r.iter().map(|c| field.format(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "system": SystemFile::from_polys(&cert.polynomials, &cert.ring),
    });
    Ok(Report::new(json, &["index", "polynomial"], polys_rows(&cert.polynomials)))
}

fn parse_columns(text: &str, ring: &Arc<Ring<PrimeField>>) -> Result<Vec<Monomial>> {
    split_names(text)
        .iter()
        .map(|s| {
            let f = parse_polynomial(s, ring)?;
            match f.terms() {
                [(_, m)] => Ok(m.clone()),
                _ => Err(Error::InvalidArgument(format!("`{s}` is not a monomial"))),
            }
        })
        .collect()
}

/// First `k` monomials of degree at most `d`, smallest first, whose
/// evaluations at the `k` points are linearly independent.
pub fn greedy_columns(ring: &Arc<Ring<PrimeField>>, points: &[Vec<u64>], d: u32) -> Result<Vec<Monomial>> {
    let field = ring.field();
    let k = points.len();
    let mut chosen: Vec<Monomial> = Vec::with_capacity(k);
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(k);
    let mut candidates = monomials_up_to_degree(ring.nvars(), d, MonomialOrder::GrevLex);
    candidates.reverse();
    for m in candidates {
        if chosen.len() == k {
            break;
        }
        let col: Vec<u64> = points
            .iter()
            .map(|p| {
                m.exponents().iter().zip(p).fold(field.one(), |acc, (&e, x)| field.mul(&acc, &pow(field, x, e)))
            })
            .collect();
        cols.push(col);
        if rank(field, &cols) == cols.len() {
            chosen.push(m);
        } else {
            cols.pop();
        }
    }
    if chosen.len() < k {
        return Err(Error::SingularSubmatrix);
    }
    Ok(chosen)
}

fn pow(field: &PrimeField, x: &u64, e: u16) -> u64 {
    (0..e).fold(field.one(), |acc, _| field.mul(&acc, x))
}

#[cfg(test)]
mod tests;
