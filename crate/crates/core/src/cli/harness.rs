//! Batch experiments: repeated randomized counts, result tables and their
//! aggregation. Work is spread over a rayon pool; finished items travel
//! over a channel to the calling thread, which owns every aggregate.

use std::collections::{BTreeMap, HashSet};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::arith::PrimeField;
use crate::error::{Error, Result};
use crate::groebner::BuchbergerOptions;
use crate::hilbert::affine_hilbert_function;
use crate::poly::MonomialOrder;
use crate::problems::ProblemInstance;
use crate::saturate::{check_prime, random_prime_parameters, run_draw, trial_seed, GiOptions, GiResult, Saturator};

pub const SCHEMA_VERSION: u32 = 1;

/// Known generic counts, indexed by `i`.
pub fn reference_value(problem: &str, i: usize) -> Option<usize> {
    const ALT: [usize; 8] = [8652, 10858, 8716, 3832, 1108, 234, 43, 7];
    match problem {
        "alt" => ALT.get(i).copied(),
        "monomial-example" => [6, 5].get(i).copied(),
        "conics-affine" if i == 0 => Some(18),
        _ => None,
    }
}

/// Per-draw deadline: the explicit value if given, else 60 s for `i >= 5`.
pub fn default_timeout(i: usize, explicit: Option<Duration>) -> Option<Duration> {
    explicit.or((i >= 5).then(|| Duration::from_secs(60)))
}

/// What a single randomized draw produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Value(usize),
    /// The draw produced the unit ideal.
    Unit,
    PositiveDimensional,
    Timeout,
    Error(String),
}

impl Outcome {
    fn from_result(r: Result<GiResult>) -> Outcome {
        Outcome::classify(r.map(|g| (g.value, g.unit)))
    }

    /// `r` holds the quotient dimension and whether the ideal is the unit.
    fn classify(r: Result<(usize, bool)>) -> Outcome {
        match r {
            Ok((_, true)) => Outcome::Unit,
            Ok((v, false)) => Outcome::Value(v),
            Err(Error::Timeout) => Outcome::Timeout,
            Err(Error::NotZeroDimensional) => Outcome::PositiveDimensional,
            Err(e) => Outcome::Error(e.to_string()),
        }
    }

    pub fn value(&self) -> Option<usize> {
        match self {
            Outcome::Value(v) => Some(*v),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Outcome::Value(v) => v.to_string(),
            Outcome::Unit => "unit".into(),
            Outcome::PositiveDimensional => "positive_dimensional".into(),
            Outcome::Timeout => "timeout".into(),
            Outcome::Error(_) => "error".into(),
        }
    }
}

/// Maps `f` over `items` on a pool of `threads` workers. Results arrive on
/// the calling thread in completion order, are handed to `on_done`, and
/// are returned in input order.
pub fn parallel_map<T, R>(
    threads: usize,
    items: &[T],
    f: impl Fn(&T) -> R + Sync,
    mut on_done: impl FnMut(usize, &R),
) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let mut out: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let (tx, rx) = mpsc::channel();
    pool.in_place_scope(|s| {
        for (k, item) in items.iter().enumerate() {
            let tx = tx.clone();
            let f = &f;
            s.spawn(move |_| {
                let _ = tx.send((k, f(item)));
            });
        }
        drop(tx);
        for (k, r) in rx {
            on_done(k, &r);
            out[k] = Some(r);
        }
    });
    Ok(out.into_iter().map(|r| r.expect("every task reports")).collect())
}

/// Summary of per-trial wall times in milliseconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TimeStats {
    pub min_ms: f64,
    pub median_ms: f64,
    pub mean_ms: f64,
    pub max_ms: f64,
}

impl TimeStats {
    fn of(times: &[f64]) -> TimeStats {
        if times.is_empty() {
            return TimeStats::default();
        }
        let mut t = times.to_vec();
        t.sort_by(f64::total_cmp);
        let mid = t.len() / 2;
        let median = if t.len() % 2 == 1 { t[mid] } else { (t[mid - 1] + t[mid]) / 2.0 };
        TimeStats { min_ms: t[0], median_ms: median, mean_ms: t.iter().sum::<f64>() / t.len() as f64, max_ms: t[t.len() - 1] }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TrialOptions {
    pub threads: usize,
    pub timeout: Option<Duration>,
    /// Value counted as a success; defaults to [`reference_value`].
    pub reference: Option<usize>,
}

/// Aggregate of `trials` independent draws. Every field except the timing
/// data is a function of `(problem, i, prime, trials, seed, reference)`.
#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub schema_version: u32,
    pub problem: String,
    pub i: usize,
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
    pub reference: Option<usize>,
    pub successes: usize,
    /// Count per computed value, degenerate draws excluded.
    pub histogram: BTreeMap<usize, usize>,
    pub unit: usize,
    pub positive_dimensional: usize,
    pub timeouts: usize,
    pub errors: usize,
    pub wall_ms: f64,
    pub trial_times: TimeStats,
    #[serde(skip)]
    pub outcomes: Vec<Outcome>,
}

impl TrialReport {
    pub fn success_fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// Bucket total, which always equals `trials`.
    pub fn bucket_total(&self) -> usize {
        self.histogram.values().sum::<usize>() + self.unit + self.positive_dimensional + self.timeouts + self.errors
    }

    /// Everything that must be reproducible, with timings stripped.
    pub fn fingerprint(&self) -> impl PartialEq + std::fmt::Debug + '_ {
        (&self.problem, self.i, self.prime, self.trials, self.seed, self.reference, self.successes, &self.histogram, &self.outcomes)
    }
}

/// Runs `trials` draws of `g_i` over `F_p`; trial `t` uses seed
/// `trial_seed(seed, t)`, so results do not depend on the thread count.
pub fn run_trials(inst: &ProblemInstance, i: usize, p: u64, trials: usize, seed: u64, opts: TrialOptions) -> Result<TrialReport> {
    let field = PrimeField::new(p)?;
    check_prime(inst, p)?;
    check_index(inst, i)?;
    let sat = Saturator::new(inst, field, MonomialOrder::GrevLex)?;
    let gi_opts = GiOptions { timeout: default_timeout(i, opts.timeout), ..GiOptions::default() };
    let (n, r) = (inst.nvars(), inst.npolys());
    let start = Instant::now();
    let ids: Vec<u64> = (0..trials as u64).collect();
    let results = parallel_map(
        opts.threads,
        &ids,
        |&t| {
            let s = trial_seed(seed, t);
            let began = Instant::now();
            let params = random_prime_parameters(&field, i, n, r, s);
            let outcome = Outcome::from_result(run_draw(&sat, &params, s, gi_opts));
            (outcome, began.elapsed().as_secs_f64() * 1e3)
        },
        |_, _| {},
    )?;
    let reference = opts.reference.or_else(|| reference_value(&inst.name, i));
    let mut report = TrialReport {
        schema_version: SCHEMA_VERSION,
        problem: inst.name.clone(),
        i,
        prime: p,
        trials,
        seed,
        reference,
        successes: 0,
        histogram: BTreeMap::new(),
        unit: 0,
        positive_dimensional: 0,
        timeouts: 0,
        errors: 0,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        trial_times: TimeStats::of(&results.iter().map(|r| r.1).collect::<Vec<_>>()),
        outcomes: Vec::with_capacity(trials),
    };
    for (outcome, _) in results {
        match &outcome {
            Outcome::Value(v) => *report.histogram.entry(*v).or_default() += 1,
            Outcome::Unit => report.unit += 1,
            Outcome::PositiveDimensional => report.positive_dimensional += 1,
            Outcome::Timeout => report.timeouts += 1,
            Outcome::Error(_) => report.errors += 1,
        }
        report.outcomes.push(outcome);
    }
    report.successes = reference.and_then(|v| report.histogram.get(&v).copied()).unwrap_or(0);
    Ok(report)
}

fn check_index(inst: &ProblemInstance, i: usize) -> Result<()> {
    if i >= inst.nvars() {
        return Err(Error::InvalidArgument(format!("i = {i} must lie in [0, {}]", inst.nvars() - 1)));
    }
    Ok(())
}

/// One `(i, p)` entry of a count table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GiCell {
    pub i: usize,
    pub prime: u64,
    pub seed: u64,
    pub outcome: Outcome,
    /// The value, or `-` when the cell did not produce one.
    pub display: String,
    pub elapsed_ms: f64,
}

impl GiCell {
    pub fn failed(&self) -> bool {
        self.outcome.value().is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GiTable {
    pub schema_version: u32,
    pub problem: String,
    pub seed: u64,
    pub i_values: Vec<usize>,
    pub primes: Vec<u64>,
    /// Row-major by prime, then by `i` in the order given.
    pub cells: Vec<GiCell>,
    /// Cells taken from the checkpoint instead of recomputed.
    pub resumed: usize,
}

impl GiTable {
    pub fn cell(&self, i: usize, prime: u64) -> Option<&GiCell> {
        self.cells.iter().find(|c| c.i == i && c.prime == prime)
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.failed()).count()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TableOptions {
    pub threads: usize,
    pub timeout: Option<Duration>,
}

/// Computes `g_i` for every `(i, p)` with the same master seed, so each
/// cell matches a single `gi` run. With a checkpoint path, finished cells
/// are appended as JSON lines and skipped on the next run.
pub fn gi_table(
    inst: &ProblemInstance,
    i_values: &[usize],
    primes: &[u64],
    seed: u64,
    opts: TableOptions,
    checkpoint: Option<&Path>,
) -> Result<GiTable> {
    for &p in primes {
        PrimeField::new(p)?;
        check_prime(inst, p)?;
    }
    for &i in i_values {
        check_index(inst, i)?;
    }
    let mut done: Vec<GiCell> = match checkpoint {
        Some(path) if path.exists() => read_checkpoint(path)?,
        _ => Vec::new(),
    };
    done.retain(|c| c.seed == seed && primes.contains(&c.prime) && i_values.contains(&c.i));
    let have: HashSet<(usize, u64)> = done.iter().map(|c| (c.i, c.prime)).collect();
    let todo: Vec<(usize, u64)> =
        primes.iter().flat_map(|&p| i_values.iter().map(move |&i| (i, p))).filter(|k| !have.contains(k)).collect();

    let mut sink = match checkpoint {
        Some(path) => Some(OpenOptions::new().create(true).append(true).open(path)?),
        None => None,
    };
    let mut write_err = None;
    let fresh = parallel_map(
        opts.threads,
        &todo,
        |&(i, p)| {
            let field = PrimeField::new(p).expect("validated");
            let began = Instant::now();
            let result = Saturator::new(inst, field, MonomialOrder::GrevLex).and_then(|sat| {
                let params = random_prime_parameters(&field, i, inst.nvars(), inst.npolys(), seed);
                let gi_opts = GiOptions { timeout: default_timeout(i, opts.timeout), ..GiOptions::default() };
                run_draw(&sat, &params, seed, gi_opts)
            });
            let outcome = Outcome::from_result(result);
            let display = outcome.value().map_or_else(|| "-".to_string(), |v| v.to_string());
            GiCell { i, prime: p, seed, outcome, display, elapsed_ms: began.elapsed().as_secs_f64() * 1e3 }
        },
        |_, cell| {
            if let Some(f) = sink.as_mut() {
                let line = serde_json::to_string(cell).expect("serializable");
                if let Err(e) = writeln!(f, "{line}").and_then(|_| f.flush()) {
                    write_err.get_or_insert(e);
                }
            }
        },
    )?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let resumed = done.len();
    done.extend(fresh);
    let pos = |c: &GiCell| {
        let pi = primes.iter().position(|&p| p == c.prime).unwrap_or(usize::MAX);
        let ii = i_values.iter().position(|&i| i == c.i).unwrap_or(usize::MAX);
        (pi, ii)
    };
    done.sort_by_key(pos);
    done.dedup_by_key(|c| (c.i, c.prime));
    Ok(GiTable {
        schema_version: SCHEMA_VERSION,
        problem: inst.name.clone(),
        seed,
        i_values: i_values.to_vec(),
        primes: primes.to_vec(),
        cells: done,
        resumed,
    })
}

fn read_checkpoint(path: &Path) -> Result<Vec<GiCell>> {
    let file = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn final line from an interrupted run is recomputed
        if let Ok(cell) = serde_json::from_str::<GiCell>(&line) {
            out.push(cell);
        }
    }
    Ok(out)
}

/// `HF(0..=dmax)` of the saturated ideal for one `i`.
#[derive(Debug, Clone, Serialize)]
pub struct HilbertRow {
    pub i: usize,
    pub values: Vec<u64>,
    pub stabilized_at: Option<u32>,
    pub stable_value: Option<u64>,
    pub outcome: Outcome,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HilbertTable {
    pub schema_version: u32,
    pub problem: String,
    pub prime: u64,
    pub seed: u64,
    pub dmax: u32,
    pub rows: Vec<HilbertRow>,
}

impl HilbertTable {
    pub fn row(&self, i: usize) -> Option<&HilbertRow> {
        self.rows.iter().find(|r| r.i == i)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.values.is_empty()).count()
    }
}

/// Hilbert functions of the saturated ideals (in the ring with the extra
/// variable) for each `i`, drawn with the master seed.
pub fn hilbert_table(inst: &ProblemInstance, i_values: &[usize], p: u64, dmax: u32, seed: u64, opts: TableOptions) -> Result<HilbertTable> {
    let field = PrimeField::new(p)?;
    check_prime(inst, p)?;
    for &i in i_values {
        check_index(inst, i)?;
    }
    let sat = Saturator::new(inst, field, MonomialOrder::GrevLex)?;
    let rows = parallel_map(
        opts.threads,
        i_values,
        |&i| {
            let began = Instant::now();
            let params = random_prime_parameters(&field, i, inst.nvars(), inst.npolys(), seed);
            let deadline = default_timeout(i, opts.timeout).map(|t| began + t);
            let run = sat.build(&params).and_then(|sys| {
                let gb = sat.basis(&sys, BuchbergerOptions { deadline, ..BuchbergerOptions::default() })?;
                let hf = affine_hilbert_function(&gb, dmax)?;
                Ok((hf, Outcome::classify(gb.degree().map(|v| (v, gb.is_unit())))))
            });
            let elapsed_ms = began.elapsed().as_secs_f64() * 1e3;
            match run {
                Ok((hf, outcome)) => HilbertRow {
                    i,
                    values: hf.values,
                    stabilized_at: hf.stabilized_at,
                    stable_value: hf.stable_value,
                    outcome,
                    elapsed_ms,
                },
                Err(e) => HilbertRow {
                    i,
                    values: Vec::new(),
                    stabilized_at: None,
                    stable_value: None,
                    outcome: Outcome::from_result(Err(e)),
                    elapsed_ms,
                },
            }
        },
        |_, _| {},
    )?;
    Ok(HilbertTable { schema_version: SCHEMA_VERSION, problem: inst.name.clone(), prime: p, seed, dmax, rows })
}
