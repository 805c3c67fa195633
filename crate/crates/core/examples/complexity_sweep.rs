//! Retrieval cost against word length: the trie grows by one node per
//! symbol while the scan grows with the whole set.

use assocmem::harness::{run_complexity_experiment, BackendSpec, ExperimentConfig, Point};

fn main() -> assocmem::Result<()> {
    let points = (4..=12)
        .step_by(2)
        .map(|n| Point::new(16, n, 500, 1))
        .collect();
    let cfg = ExperimentConfig::new(
        points,
        vec![BackendSpec::exact(), BackendSpec::trie()],
        100,
        0,
    );
    for row in run_complexity_experiment(&cfg)? {
        println!(
            "{:<26} n = {:>2}: {:>8.1} ops ({:.2} per symbol), store {:.0}",
            row.backend, row.n, row.mean_op_count, row.op_count_per_n, row.mean_store_ops
        );
    }
    Ok(())
}
