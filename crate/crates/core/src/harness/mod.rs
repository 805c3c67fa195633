//! Seeded Monte Carlo experiments.
//!
//! Each trial of a point draws a fresh word set, picks a stored word
//! uniformly, erases `r` positions and asks every configured backend to
//! retrieve it. Trial `t` of point `p` always uses the streams
//! `(seed, [point_id(p), t, 0])` for the set and query and
//! `(seed, [point_id(p), t, 1])` for tie-breaking, the latter restarted for
//! each backend, so results do not depend on worker count or on which other
//! backends are in the run. Counters are integers, so the reduction is
//! order-independent.

mod adversarial;
mod backend;
mod complexity;
pub mod csv;
mod memory;
pub mod presets;

pub use adversarial::{adversarial_queries, adversarial_set};
pub use backend::BackendSpec;
pub use complexity::{run_complexity_experiment, ComplexityRow};
pub use memory::{
    run_capacity_search, run_memory_experiment, CapacityConfig, CapacityRow, MemoryRow,
};

use rand::Rng;
use rayon::prelude::*;

use crate::analytics::{self, ScenarioParams};
use crate::error::{Error, Result};
use crate::exact;
use crate::rng;
use crate::word::{erase, sample_word_set, Alphabet, WordSet};
use csv::{fmt_f64, fmt_opt, CsvRow};

/// One `(l, n, m, r)` sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub l: u32,
    pub n: usize,
    pub m: u64,
    pub r: usize,
}

impl Point {
    pub fn new(l: u32, n: usize, m: u64, r: usize) -> Self {
        Point { l, n, m, r }
    }

    pub fn params(&self) -> Result<ScenarioParams> {
        ScenarioParams::new(self.l, self.n, self.m, self.r)
    }

    /// Stream index for this point, derived from its coordinates only.
    pub fn id(&self) -> u64 {
        rng::derive_seed(self.l as u64, &[self.n as u64, self.m, self.r as u64])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub points: Vec<Point>,
    pub backends: Vec<BackendSpec>,
    pub trials: usize,
    pub base_seed: u64,
    /// Worker threads; 0 means available parallelism.
    pub workers: usize,
    /// Reuse one set per point instead of drawing a fresh set per trial.
    pub fixed_set: bool,
}

impl ExperimentConfig {
    pub fn new(
        points: Vec<Point>,
        backends: Vec<BackendSpec>,
        trials: usize,
        base_seed: u64,
    ) -> Self {
        ExperimentConfig {
            points,
            backends,
            trials,
            base_seed,
            workers: 0,
            fixed_set: false,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::arg("trials must be >= 1"));
        }
        if self.points.is_empty() {
            return Err(Error::arg("sweep has no points"));
        }
        if self.backends.is_empty() {
            return Err(Error::arg("no backends selected"));
        }
        for p in &self.points {
            p.params()?;
            for b in &self.backends {
                b.check_feasible(p.l, p.n).map_err(|e| match e {
                    Error::Resource(msg) => Error::Resource(format!("point {p:?}, {b}: {msg}")),
                    other => other,
                })?;
            }
        }
        Ok(())
    }

    pub fn provenance(&self) -> Vec<(String, String)> {
        let mut c = vec![
            ("seed".to_string(), self.base_seed.to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("trials".to_string(), self.trials.to_string()),
            ("fixed_set".to_string(), self.fixed_set.to_string()),
        ];
        for b in &self.backends {
            c.push(("backend".to_string(), b.to_string()));
        }
        c.push((
            "op_count_units".to_string(),
            "exact=symbol comparisons; trie=nodes visited; hopfield=multiply-accumulates; gbnn=score accumulations"
                .to_string(),
        ));
        c
    }
}

/// Runs `f` on a pool of `workers` threads (0 = default).
pub(crate) fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        builder = builder.num_threads(workers);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::resource(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    pub trials: u64,
    pub errors: u64,
    pub ops: u128,
    pub store_ops: u128,
    pub memory_bits: u128,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.trials += o.trials;
        self.errors += o.errors;
        self.ops += o.ops;
        self.store_ops += o.store_ops;
        self.memory_bits += o.memory_bits;
        self
    }

    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }

    pub fn stderr(&self) -> f64 {
        let p = self.error_rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn mean_ops(&self) -> f64 {
        self.ops as f64 / self.trials as f64
    }

    pub fn mean_store_ops(&self) -> f64 {
        self.store_ops as f64 / self.trials as f64
    }

    pub fn mean_memory_bits(&self) -> f64 {
        self.memory_bits as f64 / self.trials as f64
    }
}

fn merge_all(a: Vec<Tally>, b: Vec<Tally>) -> Vec<Tally> {
    a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()
}

fn run_trial(
    point: &Point,
    backends: &[BackendSpec],
    set: &WordSet,
    seed: u64,
    t: u64,
) -> Result<Vec<Tally>> {
    let pid = point.id();
    let mut draw = rng::stream(seed, &[pid, t, 0]);
    let target = draw.gen_range(0..set.m());
    let word = set.word(target);
    let query = erase(word, point.r, &mut draw)?;
    backends
        .iter()
        .map(|b| {
            let mem = b.build(set)?;
            let mut ties = rng::stream(seed, &[pid, t, 1]);
            let res = mem.recall(&query, &mut ties);
            let ok = res.word.as_ref().is_some_and(|w| w.symbols() == word);
            Ok(Tally {
                trials: 1,
                errors: (!ok) as u64,
                ops: res.op_count as u128,
                store_ops: mem.store_ops() as u128,
                memory_bits: mem.memory_bits().round() as u128,
            })
        })
        .collect()
}

fn fixed_set_for(point: &Point, seed: u64) -> Result<WordSet> {
    let alphabet = Alphabet::new(point.l)?;
    sample_word_set(
        alphabet,
        point.n,
        point.m as usize,
        &mut rng::stream(seed, &[point.id(), u64::MAX]),
    )
}

/// Per-backend tallies for one point, in `cfg.backends` order.
pub(crate) fn tally_point(cfg: &ExperimentConfig, point: &Point) -> Result<Vec<Tally>> {
    let alphabet = Alphabet::new(point.l)?;
    let fixed = if cfg.fixed_set {
        Some(fixed_set_for(point, cfg.base_seed)?)
    } else {
        None
    };
    let zero = vec![Tally::default(); cfg.backends.len()];
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| match &fixed {
            Some(set) => run_trial(point, &cfg.backends, set, cfg.base_seed, t),
            None => {
                let mut draw = rng::stream(cfg.base_seed, &[point.id(), t, 2]);
                let set = sample_word_set(alphabet, point.n, point.m as usize, &mut draw)?;
                run_trial(point, &cfg.backends, &set, cfg.base_seed, t)
            }
        })
        .try_reduce(|| zero.clone(), |a, b| Ok(merge_all(a, b)))
}

/// One line of an error-rate experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub backend: String,
    pub l: u32,
    pub n: usize,
    pub m: u64,
    pub r: usize,
    pub trials: u64,
    pub word_error_rate: f64,
    pub stderr: f64,
    /// Expected residual error of the maximum-likelihood memory; for
    /// fixed-set runs, the exact residual error of that set when enumerable.
    pub analytic_error: Option<f64>,
    pub mean_op_count: f64,
    pub memory_bits: f64,
    pub seed: u64,
}

impl CsvRow for ResultRow {
    fn header() -> &'static [&'static str] {
        &[
            "backend",
            "l",
            "n",
            "m",
            "r",
            "trials",
            "word_error_rate",
            "stderr",
            "analytic_error",
            "mean_op_count",
            "memory_bits",
            "seed",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.backend.clone(),
            self.l.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.r.to_string(),
            self.trials.to_string(),
            fmt_f64(self.word_error_rate),
            fmt_f64(self.stderr),
            fmt_opt(self.analytic_error),
            fmt_f64(self.mean_op_count),
            fmt_f64(self.memory_bits),
            self.seed.to_string(),
        ]
    }
}

impl ResultRow {
    /// True when the empirical rate lies within `k` standard errors of the
    /// analytic value. A zero standard error demands exact agreement.
    pub fn within_stderr(&self, k: f64) -> Option<bool> {
        self.analytic_error
            .map(|a| (self.word_error_rate - a).abs() <= k * self.stderr + 1e-12)
    }
}

fn analytic_for(cfg: &ExperimentConfig, point: &Point) -> Result<Option<f64>> {
    if cfg.fixed_set {
        let set = fixed_set_for(point, cfg.base_seed)?;
        return Ok(exact::exact_success_probability(&set, point.r)
            .ok()
            .and_then(|p| num_traits::ToPrimitive::to_f64(&p))
            .map(|p| 1.0 - p));
    }
    Ok(Some(analytics::residual_error(&point.params()?)?))
}

/// Empirical word error rate per point and backend, with the closed-form
/// residual error alongside. Rows are sorted by backend then point.
pub fn run_error_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for point in &cfg.points {
        let tallies = with_pool(cfg.workers, || tally_point(cfg, point))??;
        let analytic = analytic_for(cfg, point)?;
        for (b, t) in cfg.backends.iter().zip(tallies) {
            rows.push(ResultRow {
                backend: b.to_string(),
                l: point.l,
                n: point.n,
                m: point.m,
                r: point.r,
                trials: t.trials,
                word_error_rate: t.error_rate(),
                stderr: t.stderr(),
                analytic_error: analytic,
                mean_op_count: t.mean_ops(),
                memory_bits: t.mean_memory_bits(),
                seed: cfg.base_seed,
            });
        }
    }
    rows.sort_by(|a, b| (&a.backend, a.l, a.n, a.m, a.r).cmp(&(&b.backend, b.l, b.n, b.m, b.r)));
    Ok(rows)
}
