//! Ready-made sweeps for the standard figures and tables, emitted as CSV.

use std::fmt;
use std::str::FromStr;

use super::csv::{fmt_f64, to_csv, CsvRow};
use super::{
    run_capacity_search, run_complexity_experiment, run_error_experiment, run_memory_experiment,
    BackendSpec, CapacityConfig, ExperimentConfig, Point,
};
use crate::analytics::{residual_error, ScenarioParams};
use crate::error::{Error, Result};
use crate::gbnn::SelfPairs;
use crate::hopfield::{DiagonalMode, DEFAULT_MAX_ITERS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Closed-form residual error against m at l = 256, n = 4, r = 1..3.
    Fig1,
    /// Simulated word error of every backend at l = 256, n = 4, r = 2.
    Fig2,
    /// Set entropy against ordered-list and network bit counts.
    Fig3,
    /// Largest m at 1% error for the two networks, with memory/entropy ratios.
    Table1,
    /// Operation counts over n and l sweeps.
    Table2,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig1,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Table1,
        Preset::Table2,
    ];

    pub fn default_trials(self) -> usize {
        match self {
            Preset::Fig1 | Preset::Fig3 => 0,
            Preset::Fig2 => 5000,
            Preset::Table1 => 2000,
            Preset::Table2 => 200,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Table1 => "table1",
            Preset::Table2 => "table2",
        })
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| Error::arg(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Overrides the preset's trial count (per probe for table1).
    pub trials: Option<usize>,
    pub workers: usize,
}

/// One point of a closed-form residual error curve.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticRow {
    pub l: u32,
    pub n: usize,
    pub m: u64,
    pub r: usize,
    pub residual_error: f64,
    pub log10_residual_error: f64,
}

impl CsvRow for AnalyticRow {
    fn header() -> &'static [&'static str] {
        &["l", "n", "m", "r", "residual_error", "log10_residual_error"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.l.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.r.to_string(),
            fmt_f64(self.residual_error),
            fmt_f64(self.log10_residual_error),
        ]
    }
}

/// 1, 2, 5, 10, 20, ... up to and including `max`.
fn one_two_five(max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for k in [1, 2, 5] {
            match decade.checked_mul(k) {
                Some(v) if v <= max => out.push(v),
                _ => break 'outer,
            }
        }
        decade *= 10;
    }
    if out.last() != Some(&max) {
        out.push(max);
    }
    out
}

pub fn fig1_rows() -> Result<Vec<AnalyticRow>> {
    let (l, n) = (256u32, 4usize);
    let mut rows = Vec::new();
    for r in 1..=3 {
        for m in one_two_five(1u64 << 32) {
            let e = residual_error(&ScenarioParams::new(l, n, m, r)?)?;
            rows.push(AnalyticRow {
                l,
                n,
                m,
                r,
                residual_error: e,
                log10_residual_error: e.log10(),
            });
        }
    }
    Ok(rows)
}

/// Backends and option variants compared in the fig2 sweep.
pub fn fig2_backends() -> Vec<BackendSpec> {
    let gbnn = |self_pairs, iterations| BackendSpec::Gbnn {
        self_pairs,
        iterations,
        gamma: None,
    };
    let hopfield = |diagonal| BackendSpec::Hopfield {
        diagonal,
        max_iters: DEFAULT_MAX_ITERS,
        clamp: false,
    };
    vec![
        BackendSpec::exact(),
        BackendSpec::trie(),
        gbnn(SelfPairs::Included, 1),
        gbnn(SelfPairs::Excluded, 1),
        gbnn(SelfPairs::Included, 4),
        hopfield(DiagonalMode::Summed),
        hopfield(DiagonalMode::Zeroed),
    ]
}

pub fn fig2_config(opts: RunOptions) -> ExperimentConfig {
    let points = [500, 2000, 8000, 32000]
        .into_iter()
        .map(|m| Point::new(256, 4, m, 2))
        .collect();
    ExperimentConfig::new(
        points,
        fig2_backends(),
        opts.trials.unwrap_or(5000),
        opts.seed,
    )
    .with_workers(opts.workers)
}

pub fn fig3_points() -> Vec<Point> {
    let mut pts = Vec::new();
    for (l, n) in [(2u32, 16usize), (4, 8), (16, 4), (256, 4)] {
        let universe = (l as u64).pow(n as u32);
        let mut m = 1u64;
        while m <= universe.min(1 << 24) {
            pts.push(Point::new(l, n, m, 0));
            m *= 2;
        }
    }
    pts
}

pub fn table1_configs(opts: RunOptions) -> Vec<CapacityConfig> {
    [(256u32, 4usize), (64, 10)]
        .into_iter()
        .map(|(l, n)| {
            let mut c = CapacityConfig::new(
                l,
                n,
                1,
                0.01,
                vec![BackendSpec::hopfield(), BackendSpec::gbnn()],
                opts.seed,
            );
            c.trials_per_probe = opts.trials.unwrap_or(2000);
            c.workers = opts.workers;
            c
        })
        .collect()
}

/// The n sweep for exact and trie, and the l sweep for the two networks.
pub fn table2_configs(opts: RunOptions) -> [ExperimentConfig; 2] {
    let trials = opts.trials.unwrap_or(200);
    let n_sweep = [10u64, 100, 1000]
        .into_iter()
        .flat_map(|m| (4..=12).map(move |n| Point::new(16, n, m, 1)))
        .collect();
    let l_sweep = [16u32, 32, 64]
        .into_iter()
        .map(|l| Point::new(l, 4, 100, 1))
        .collect();
    [
        ExperimentConfig::new(
            n_sweep,
            vec![BackendSpec::exact(), BackendSpec::trie()],
            trials,
            opts.seed,
        )
        .with_workers(opts.workers),
        ExperimentConfig::new(
            l_sweep,
            vec![BackendSpec::gbnn(), BackendSpec::hopfield()],
            trials,
            opts.seed,
        )
        .with_workers(opts.workers),
    ]
}

fn header(preset: Preset, opts: &RunOptions) -> Vec<(String, String)> {
    vec![
        ("experiment".to_string(), preset.to_string()),
        ("seed".to_string(), opts.seed.to_string()),
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ]
}

/// Runs a preset and returns its CSV text. The output does not depend on
/// `opts.workers`.
pub fn run_preset(preset: Preset, opts: RunOptions) -> Result<String> {
    if opts.trials == Some(0) {
        return Err(Error::arg("trials must be >= 1"));
    }
    match preset {
        Preset::Fig1 => Ok(to_csv(&header(preset, &opts), &fig1_rows()?)),
        Preset::Fig2 => {
            let cfg = fig2_config(opts);
            let mut c = header(preset, &opts);
            c.extend(cfg.provenance().into_iter().skip(2));
            Ok(to_csv(&c, &run_error_experiment(&cfg)?))
        }
        Preset::Fig3 => Ok(to_csv(
            &header(preset, &opts),
            &run_memory_experiment(&fig3_points())?,
        )),
        Preset::Table1 => {
            let mut c = header(preset, &opts);
            let mut rows = Vec::new();
            for (i, cfg) in table1_configs(opts).iter().enumerate() {
                if i == 0 {
                    c.extend(cfg.provenance().into_iter().skip(2));
                }
                rows.extend(run_capacity_search(cfg)?);
            }
            Ok(to_csv(&c, &rows))
        }
        Preset::Table2 => {
            let mut c = header(preset, &opts);
            let mut rows = Vec::new();
            for cfg in table2_configs(opts) {
                c.extend(
                    cfg.provenance()
                        .into_iter()
                        .skip(2)
                        .filter(|(k, _)| k == "backend" || k == "op_count_units"),
                );
                rows.extend(run_complexity_experiment(&cfg)?);
            }
            Ok(to_csv(&c, &rows))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.to_string().parse::<Preset>().unwrap(), p);
        }
        assert!("fig9".parse::<Preset>().is_err());
    }

    #[test]
    fn sweep_helpers() {
        assert_eq!(one_two_five(60), vec![1, 2, 5, 10, 20, 50, 60]);
        assert_eq!(one_two_five(50), vec![1, 2, 5, 10, 20, 50]);
    }

    #[test]
    fn fig1_curves_are_monotone_and_ordered() {
        let rows = fig1_rows().unwrap();
        let curve = |r: usize| {
            rows.iter()
                .filter(|x| x.r == r)
                .map(|x| x.residual_error)
                .collect::<Vec<_>>()
        };
        for r in 1..=3 {
            assert!(curve(r).windows(2).all(|w| w[0] <= w[1]));
        }
        for (a, b) in curve(1).iter().zip(curve(2)) {
            assert!(*a <= b);
        }
    }
}
