//! Word error of all four memories on fresh random sets, next to the
//! closed-form residual error. Output is CSV.

use assocmem::harness::csv::to_csv;
use assocmem::harness::{run_error_experiment, BackendSpec, ExperimentConfig, Point};

fn main() -> assocmem::Result<()> {
    let points = [50, 200, 800]
        .into_iter()
        .map(|m| Point::new(16, 4, m, 2))
        .collect();
    let backends = vec![
        BackendSpec::exact(),
        BackendSpec::trie(),
        BackendSpec::gbnn(),
        BackendSpec::hopfield(),
    ];
    let cfg = ExperimentConfig::new(points, backends, 2000, 42);
    let rows = run_error_experiment(&cfg)?;
    print!("{}", to_csv(&cfg.provenance(), &rows));
    Ok(())
}
