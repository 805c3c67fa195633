//! Memory accounting rows and the target-error capacity search.

use super::csv::{fmt_f64, fmt_opt, CsvRow};
use super::{tally_point, with_pool, BackendSpec, ExperimentConfig, Point};
use crate::analytics::{self, ordered_list_bits, set_entropy_bits};
use crate::error::{Error, Result};
use crate::word::Alphabet;

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryRow {
    pub l: u32,
    pub n: usize,
    pub m: u64,
    pub entropy_bits: f64,
    pub ordered_list_bits: f64,
    pub hnn_bits: f64,
    pub gbnn_bits: f64,
    /// `entropy_bits / ordered_list_bits`.
    pub unordered_to_ordered: f64,
    pub entropy_le_ordered: bool,
}

impl CsvRow for MemoryRow {
    fn header() -> &'static [&'static str] {
        &[
            "l",
            "n",
            "m",
            "entropy_bits",
            "ordered_list_bits",
            "hnn_bits",
            "gbnn_bits",
            "unordered_to_ordered",
            "entropy_le_ordered",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.l.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            fmt_f64(self.entropy_bits),
            fmt_f64(self.ordered_list_bits),
            fmt_f64(self.hnn_bits),
            fmt_f64(self.gbnn_bits),
            fmt_f64(self.unordered_to_ordered),
            self.entropy_le_ordered.to_string(),
        ]
    }
}

/// Set entropy next to the stored-bit counts of each representation.
/// The `r` field of each point is ignored.
pub fn run_memory_experiment(points: &[Point]) -> Result<Vec<MemoryRow>> {
    if points.is_empty() {
        return Err(Error::arg("sweep has no points"));
    }
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        let alphabet = Alphabet::new(p.l)?;
        if alphabet.universe(p.n).is_some_and(|u| (p.m as u128) > u) || p.m == 0 {
            return Err(Error::arg(format!("point {p:?}: m must be in [1, l^n]")));
        }
        let h = set_entropy_bits(p.l, p.n, p.m)?;
        let ordered = ordered_list_bits(p.l, p.n, p.m);
        rows.push(MemoryRow {
            l: p.l,
            n: p.n,
            m: p.m,
            entropy_bits: h,
            ordered_list_bits: ordered,
            hnn_bits: analytics::hnn_memory_bits(p.l, p.n, p.m as usize),
            gbnn_bits: analytics::gbnn_memory_bits(p.l, p.n),
            unordered_to_ordered: h / ordered,
            // Tolerance covers log-gamma rounding when H and the list size meet.
            entropy_le_ordered: h <= ordered * (1.0 + 1e-12),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityConfig {
    pub l: u32,
    pub n: usize,
    pub r: usize,
    pub p0: f64,
    pub trials_per_probe: usize,
    pub backends: Vec<BackendSpec>,
    pub base_seed: u64,
    pub workers: usize,
    /// Upper limit for the doubling phase.
    pub max_m: u64,
}

impl CapacityConfig {
    pub fn new(
        l: u32,
        n: usize,
        r: usize,
        p0: f64,
        backends: Vec<BackendSpec>,
        base_seed: u64,
    ) -> Self {
        CapacityConfig {
            l,
            n,
            r,
            p0,
            trials_per_probe: 2000,
            backends,
            base_seed,
            workers: 0,
            max_m: 1 << 20,
        }
    }

    pub fn provenance(&self) -> Vec<(String, String)> {
        let mut c = vec![
            ("seed".to_string(), self.base_seed.to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            (
                "trials_per_probe".to_string(),
                self.trials_per_probe.to_string(),
            ),
            ("stop_window".to_string(), "hi <= 1.2*lo".to_string()),
        ];
        for b in &self.backends {
            c.push(("backend".to_string(), b.to_string()));
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityRow {
    pub backend: String,
    pub l: u32,
    pub n: usize,
    pub r: usize,
    pub p0: f64,
    pub trials_per_probe: usize,
    /// Largest probed m whose empirical error stayed at or below `p0`.
    pub max_m: u64,
    pub error_at_max: Option<f64>,
    /// Smallest probed m that failed, when one was found.
    pub first_fail_m: Option<u64>,
    pub memory_bits: Option<f64>,
    pub entropy_bits: Option<f64>,
    pub ratio: Option<f64>,
    pub bracketed: bool,
    pub probes: usize,
    pub seed: u64,
}

impl CsvRow for CapacityRow {
    fn header() -> &'static [&'static str] {
        &[
            "backend",
            "l",
            "n",
            "r",
            "p0",
            "trials_per_probe",
            "max_m",
            "error_at_max",
            "first_fail_m",
            "memory_bits",
            "entropy_bits",
            "ratio",
            "bracketed",
            "probes",
            "seed",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.backend.clone(),
            self.l.to_string(),
            self.n.to_string(),
            self.r.to_string(),
            fmt_f64(self.p0),
            self.trials_per_probe.to_string(),
            self.max_m.to_string(),
            fmt_opt(self.error_at_max),
            self.first_fail_m.map(|m| m.to_string()).unwrap_or_default(),
            fmt_opt(self.memory_bits),
            fmt_opt(self.entropy_bits),
            fmt_opt(self.ratio),
            self.bracketed.to_string(),
            self.probes.to_string(),
            self.seed.to_string(),
        ]
    }
}

fn probe(cfg: &CapacityConfig, backend: BackendSpec, m: u64) -> Result<(f64, f64)> {
    let exp = ExperimentConfig::new(
        vec![Point::new(cfg.l, cfg.n, m, cfg.r)],
        vec![backend],
        cfg.trials_per_probe,
        cfg.base_seed,
    );
    exp.validate()?;
    let t = tally_point(&exp, &exp.points[0])?[0];
    Ok((t.error_rate(), t.mean_memory_bits()))
}

fn search(cfg: &CapacityConfig, backend: BackendSpec) -> Result<CapacityRow> {
    let universe = Alphabet::new(cfg.l)?.universe(cfg.n).unwrap_or(u128::MAX);
    let ceiling = (cfg.max_m as u128).min(universe) as u64;
    let mut probes = 0;
    let mut lo: Option<(u64, f64, f64)> = None;
    let mut hi: Option<u64> = None;

    let mut m = 1u64;
    loop {
        let (err, bits) = probe(cfg, backend, m)?;
        probes += 1;
        if err <= cfg.p0 {
            lo = Some((m, err, bits));
            if m == ceiling {
                break;
            }
            m = (m * 2).min(ceiling);
        } else {
            hi = Some(m);
            break;
        }
    }

    if let (Some(_), Some(_)) = (lo, hi) {
        while let (Some((a, _, _)), Some(b)) = (lo, hi) {
            if b as f64 <= 1.2 * a as f64 || b - a <= 1 {
                break;
            }
            let mid = a + (b - a) / 2;
            let (err, bits) = probe(cfg, backend, mid)?;
            probes += 1;
            if err <= cfg.p0 {
                lo = Some((mid, err, bits));
            } else {
                hi = Some(mid);
            }
        }
    }

    let (max_m, error_at_max, memory_bits) = match lo {
        Some((m, e, b)) => (m, Some(e), Some(b)),
        None => (0, None, None),
    };
    let entropy = if max_m > 0 {
        Some(set_entropy_bits(cfg.l, cfg.n, max_m)?)
    } else {
        None
    };
    let ratio = match (memory_bits, entropy) {
        (Some(b), Some(h)) if h > 0.0 => Some(b / h),
        _ => None,
    };
    Ok(CapacityRow {
        backend: backend.to_string(),
        l: cfg.l,
        n: cfg.n,
        r: cfg.r,
        p0: cfg.p0,
        trials_per_probe: cfg.trials_per_probe,
        max_m,
        error_at_max,
        first_fail_m: hi,
        memory_bits,
        entropy_bits: entropy,
        ratio,
        bracketed: lo.is_some() && hi.is_some(),
        probes,
        seed: cfg.base_seed,
    })
}

/// For each backend, the largest m whose empirical word error stays at or
/// below `p0`, found by doubling from m = 1 and then bisecting until the
/// bracket is within 20%. Memory is the backend's reported bit count at
/// that m, divided by the set entropy for the ratio column.
///
/// A search that never fails below `max_m`, or fails already at m = 1,
/// is reported with `bracketed = false`.
pub fn run_capacity_search(cfg: &CapacityConfig) -> Result<Vec<CapacityRow>> {
    if cfg.trials_per_probe == 0 {
        return Err(Error::arg("trials_per_probe must be >= 1"));
    }
    if !(cfg.p0 > 0.0 && cfg.p0 < 1.0) {
        return Err(Error::arg("p0 must lie in (0, 1)"));
    }
    if cfg.backends.is_empty() {
        return Err(Error::arg("no backends selected"));
    }
    if cfg.r > cfg.n {
        return Err(Error::arg("r must not exceed n"));
    }
    let mut rows = with_pool(cfg.workers, || {
        cfg.backends
            .iter()
            .map(|b| search(cfg, *b))
            .collect::<Result<Vec<_>>>()
    })??;
    rows.sort_by(|a, b| a.backend.cmp(&b.backend));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memory_rows() {
        let rows =
            run_memory_experiment(&[Point::new(2, 2, 2, 0), Point::new(256, 4, 100, 0)]).unwrap();
        assert!((rows[0].entropy_bits - 6f64.log2()).abs() < 1e-12);
        assert_eq!(rows[0].ordered_list_bits, 4.0);
        assert!(rows.iter().all(|r| r.entropy_le_ordered));
        assert_eq!(rows[1].gbnn_bits, 393_216.0);
        assert!(run_memory_experiment(&[Point::new(2, 2, 5, 0)]).is_err());
    }

    #[test]
    fn capacity_search_brackets_exact_backend() {
        let mut cfg = CapacityConfig::new(16, 4, 1, 0.05, vec![BackendSpec::exact()], 3);
        cfg.trials_per_probe = 1000;
        let row = &run_capacity_search(&cfg).unwrap()[0];
        assert!(row.bracketed, "{row:?}");
        let fail = row.first_fail_m.unwrap();
        assert!(fail as f64 <= 1.2 * row.max_m as f64 || fail - row.max_m <= 1);
        // The closed form puts 5% error near m = 2 * 0.05 * 16^3 = 410.
        assert!((200..=800).contains(&row.max_m), "{row:?}");
    }

    #[test]
    fn unbracketed_search_is_flagged() {
        let mut cfg = CapacityConfig::new(2, 3, 0, 0.01, vec![BackendSpec::exact()], 0);
        cfg.trials_per_probe = 10;
        let row = &run_capacity_search(&cfg).unwrap()[0];
        assert!(!row.bracketed);
        assert_eq!(row.max_m, 8);
    }
}
