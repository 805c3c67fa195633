//! Retrieval and store operation counts across a sweep.

use super::csv::{fmt_f64, fmt_opt, CsvRow};
use super::{tally_point, with_pool, ExperimentConfig};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityRow {
    pub backend: String,
    pub l: u32,
    pub n: usize,
    pub m: u64,
    pub r: usize,
    pub trials: u64,
    pub mean_op_count: f64,
    pub op_count_per_n: f64,
    pub mean_store_ops: f64,
    /// `mean_op_count` over that of the previous row with the same
    /// backend, l, m and r (the next smaller n).
    pub growth: Option<f64>,
    pub seed: u64,
}

impl CsvRow for ComplexityRow {
    fn header() -> &'static [&'static str] {
        &[
            "backend",
            "l",
            "n",
            "m",
            "r",
            "trials",
            "mean_op_count",
            "op_count_per_n",
            "mean_store_ops",
            "growth",
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
            fmt_f64(self.mean_op_count),
            fmt_f64(self.op_count_per_n),
            fmt_f64(self.mean_store_ops),
            fmt_opt(self.growth),
            self.seed.to_string(),
        ]
    }
}

/// Mean retrieval and store operation counts per point and backend.
/// Rows are sorted by (backend, l, m, r, n).
pub fn run_complexity_experiment(cfg: &ExperimentConfig) -> Result<Vec<ComplexityRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for point in &cfg.points {
        let tallies = with_pool(cfg.workers, || tally_point(cfg, point))??;
        for (b, t) in cfg.backends.iter().zip(tallies) {
            rows.push(ComplexityRow {
                backend: b.to_string(),
                l: point.l,
                n: point.n,
                m: point.m,
                r: point.r,
                trials: t.trials,
                mean_op_count: t.mean_ops(),
                op_count_per_n: t.mean_ops() / point.n as f64,
                mean_store_ops: t.mean_store_ops(),
                growth: None,
                seed: cfg.base_seed,
            });
        }
    }
    rows.sort_by(|a, b| (&a.backend, a.l, a.m, a.r, a.n).cmp(&(&b.backend, b.l, b.m, b.r, b.n)));
    for i in 1..rows.len() {
        let (prev, cur) = (&rows[i - 1], &rows[i]);
        if (&prev.backend, prev.l, prev.m, prev.r) == (&cur.backend, cur.l, cur.m, cur.r) {
            let g = cur.mean_op_count / prev.mean_op_count;
            rows[i].growth = Some(g);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{BackendSpec, Point};

    #[test]
    fn exact_scans_every_symbol() {
        let cfg = ExperimentConfig::new(
            vec![Point::new(4, 4, 10, 1), Point::new(4, 5, 10, 1)],
            vec![BackendSpec::exact(), BackendSpec::trie()],
            50,
            2,
        );
        let rows = run_complexity_experiment(&cfg).unwrap();
        let exact: Vec<_> = rows
            .iter()
            .filter(|r| r.backend.starts_with("exact"))
            .collect();
        assert_eq!(exact[0].mean_op_count, 40.0);
        assert_eq!(exact[1].mean_op_count, 50.0);
        assert_eq!(exact[1].growth, Some(1.25));
        let trie: Vec<_> = rows
            .iter()
            .filter(|r| r.backend.starts_with("trie"))
            .collect();
        assert_eq!(trie[0].mean_op_count, 5.0);
        assert!(trie[0].growth.is_none());
    }
}
