use assocmem::analytics::{
    capacity_estimate, entropy_asymptotic_small_m, expected_success_asymptotic, gbnn_memory_bits,
    hnn_memory_bits, ordered_list_bits, ordered_to_unordered_ratio, residual_error,
    set_entropy_bits, ScenarioParams,
};

fn main() -> assocmem::Result<()> {
    println!("residual error at l = 256, n = 4");
    for r in 1..=3 {
        let curve: Vec<String> = [1_000u64, 100_000, 10_000_000]
            .iter()
            .map(|&m| {
                Ok(format!(
                    "{:.3e}",
                    residual_error(&ScenarioParams::new(256, 4, m, r)?)?
                ))
            })
            .collect::<assocmem::Result<_>>()?;
        println!("  r = {r}: {}", curve.join("  "));
    }

    let p = ScenarioParams::new(2, 20, 1000, 4)?;
    println!(
        "large-n form at (2, 20, 1000, 4): {:.6}",
        expected_success_asymptotic(&p)
    );
    println!(
        "capacity at 1% error, l = 256, n = 4, r = 1: {}",
        capacity_estimate(256, 4, 1, 0.01)
    );

    let (l, n, m) = (256, 4, 100_000);
    println!("bits for m = {m} words of length {n} over {l} letters:");
    println!("  entropy      {:.0}", set_entropy_bits(l, n, m)?);
    println!("  m n log2 l   {:.0}", entropy_asymptotic_small_m(l, n, m));
    println!("  ordered list {:.0}", ordered_list_bits(l, n, m));
    println!("  hopfield     {:.0}", hnn_memory_bits(l, n, m as usize));
    println!("  clique net   {:.0}", gbnn_memory_bits(l, n));
    for n in [4, 16, 64] {
        println!(
            "unordered/ordered at c = 4, l = 2, n = {n}: {:.4}",
            ordered_to_unordered_ratio(4.0, n, 2)?
        );
    }
    Ok(())
}
