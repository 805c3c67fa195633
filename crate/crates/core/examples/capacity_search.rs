//! Largest set size each neural memory holds at 1% word error, and how its
//! memory compares with the entropy of the stored set.
//!
//! Usage: `cargo run --release --example capacity_search -- [l n r trials]`
//! (defaults: 64 10 1 2000).

use assocmem::harness::csv::to_csv;
use assocmem::harness::{run_capacity_search, BackendSpec, CapacityConfig};

fn main() -> assocmem::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let get = |i: usize, d: u64| args.get(i).copied().unwrap_or(d);
    let (l, n, r, trials) = (
        get(0, 64) as u32,
        get(1, 10) as usize,
        get(2, 1) as usize,
        get(3, 2000) as usize,
    );

    let mut cfg = CapacityConfig::new(
        l,
        n,
        r,
        0.01,
        vec![BackendSpec::hopfield(), BackendSpec::gbnn()],
        0,
    );
    cfg.trials_per_probe = trials;
    let rows = run_capacity_search(&cfg)?;
    print!("{}", to_csv(&cfg.provenance(), &rows));
    for row in &rows {
        if let Some(ratio) = row.ratio {
            println!(
                "{}: m = {}, memory / entropy = {:.0}%",
                row.backend,
                row.max_m,
                100.0 * ratio
            );
        }
    }
    Ok(())
}
