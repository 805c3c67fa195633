//! End-to-end acceptance checks. Runs as a plain binary so that each
//! criterion prints one PASS/FAIL line under `cargo test`.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use assocmem::analytics::{self, log2_binomial, CombinatoricsMode, ScenarioParams};
use assocmem::exact::{
    consistent_partial_words, exact_success_probability, BruteForceMemory, TiePolicy,
};
use assocmem::gbnn::{GbnnNetwork, SelfPairs};
use assocmem::harness::presets::{self, run_preset, Preset, RunOptions};
use assocmem::harness::{
    adversarial_queries, adversarial_set, run_capacity_search, run_complexity_experiment,
    run_error_experiment, run_memory_experiment, BackendSpec, CapacityConfig, ExperimentConfig,
    Point,
};
use assocmem::hopfield::{encode_bipolar, DiagonalMode, HopfieldNetwork};
use assocmem::trie::{PathPolicy, TrieMemory, TrieMode};
use assocmem::{erase, rng, sample_word_set, Alphabet, Status, Word, WordSet};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn set_from_indices(l: u32, n: usize, idx: &[usize]) -> WordSet {
    let words: Vec<Vec<u32>> = idx
        .iter()
        .map(|&i| {
            let mut w = vec![0; n];
            let mut x = i;
            for p in (0..n).rev() {
                w[p] = (x % l as usize) as u32;
                x /= l as usize;
            }
            w
        })
        .collect();
    WordSet::new(n, Alphabet::new(l).unwrap(), &words).unwrap()
}

/// Every `m` in `1..=universe` with `C(universe, m) <= 1e4`.
fn small_binomial_sizes(universe: u128) -> Vec<u128> {
    let mut low = Vec::new();
    let mut c = 1u128;
    for m in 1..=universe {
        c = c * (universe - m + 1) / m;
        if c > 10_000 {
            break;
        }
        low.push(m);
    }
    let mut all: Vec<u128> = low
        .iter()
        .flat_map(|&m| [m, universe - m])
        .chain([universe])
        .filter(|&m| m > 0)
        .collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// Work allowed per (l, n, m) in the exhaustive sweep, counted as
/// `C(l^n, m) * (m + 8) * 2^n`: projected words plus per-set overhead.
const SWEEP_BUDGET: u128 = 100_000;

fn c1_exhaustive_oracle() -> Outcome {
    // The named case as exact rationals through the per-set oracle.
    let mut total = BigRational::zero();
    for idx in (0..4).combinations(2) {
        total += exact_success_probability(&set_from_indices(2, 2, &idx), 1).unwrap();
    }
    let mean = total / BigRational::from_integer(BigInt::from(6));
    let p = ScenarioParams::new(2, 2, 2, 1).unwrap();
    let closed = analytics::expected_success_rational(&p).unwrap();
    let five_sixths = BigRational::new(BigInt::from(5), BigInt::from(6));
    let named = mean == closed && mean == five_sixths;

    // Every tuple with C(l^n, m) <= 1e4 whose enumeration fits the budget.
    let (mut covered, mut skipped, mut worst) = (0usize, 0usize, 0f64);
    for l in 2u32..=10_000 {
        for n in 1usize.. {
            let Some(universe) = (l as u128).checked_pow(n as u32).filter(|&u| u <= 10_000) else {
                break;
            };
            for m in small_binomial_sizes(universe) {
                let sets = binom(universe, m);
                if sets * (m + 8) * (1u128 << n) > SWEEP_BUDGET {
                    skipped += n + 1;
                    continue;
                }
                let mut consistent = vec![0u128; n + 1];
                for idx in (0..universe as usize).combinations(m as usize) {
                    let s = set_from_indices(l, n, &idx);
                    for (r, c) in consistent.iter_mut().enumerate() {
                        *c += consistent_partial_words(&s, r).unwrap();
                    }
                }
                for (r, c) in consistent.iter().enumerate() {
                    let oracle = *c as f64 / (sets * m * binom(n as u128, r as u128)) as f64;
                    let p = ScenarioParams::new(l, n, m as u64, r).unwrap();
                    let closed = analytics::expected_success_exact(&p).unwrap();
                    worst = worst.max((oracle - closed).abs());
                    covered += 1;
                }
            }
        }
    }
    outcome(
        named && worst <= 1e-12,
        format!(
            "mean over 6 sets = 5/6 exactly: {named}; {covered} tuples max |diff| = {worst:.2e}; \
             {skipped} tuples above the enumeration budget"
        ),
    )
}

fn c2_calibration() -> Outcome {
    let cfg = ExperimentConfig::new(
        vec![Point::new(4, 4, 32, 1)],
        vec![BackendSpec::exact()],
        20_000,
        2,
    );
    let row = &run_error_experiment(&cfg).unwrap()[0];
    let a = row.analytic_error.unwrap();
    let z = (row.word_error_rate - a) / row.stderr;
    outcome(
        z.abs() <= 3.0,
        format!(
            "empirical {:.5} vs analytic {a:.5}, z = {z:.2}",
            row.word_error_rate
        ),
    )
}

fn c3_asymptotic_regime() -> Outcome {
    let p = ScenarioParams::new(2, 20, 1000, 4).unwrap();
    let (e2, e4) = (
        analytics::expected_success_exact(&p).unwrap(),
        analytics::expected_success_asymptotic(&p),
    );
    let inside = (e4 - e2).abs() / e2;
    let q = ScenarioParams::new(2, 2, 2, 1).unwrap();
    let (f2, f4) = (
        analytics::expected_success_exact(&q).unwrap(),
        analytics::expected_success_asymptotic(&q),
    );
    let outside = (f4 - f2).abs() / f2;
    outcome(
        inside <= 1e-3 && outside > 0.05,
        format!("in regime rel {inside:.2e} (<= 1e-3); (2,2,2,1) rel {outside:.3} (> 0.05)"),
    )
}

fn c4_capacity() -> Outcome {
    let m = analytics::capacity_estimate(16, 4, 1, 0.01);
    let e = analytics::residual_error(&ScenarioParams::new(16, 4, m, 1).unwrap()).unwrap();
    outcome(
        (0.008..=0.012).contains(&e),
        format!("m = {m}, residual error {e:.5}"),
    )
}

fn c5_trie_matches_brute_force() -> Outcome {
    let mut r = rng::seeded(5);
    let mut mismatches = 0;
    let mut unique = 0;
    for _ in 0..1000 {
        let l = [2u32, 4, 16][r.gen_range(0..3)];
        let n = [4usize, 8][r.gen_range(0..2)];
        let max_m = (l as u64).pow(n as u32).min(64) as usize;
        let m = r.gen_range(2..=max_m);
        let k = r.gen_range(0..=n);
        let set = sample_word_set(Alphabet::new(l).unwrap(), n, m, &mut r).unwrap();
        let w = set.word(r.gen_range(0..m)).to_vec();
        let q = erase(&w, k, &mut r).unwrap();
        let exact = BruteForceMemory::store(set.clone(), None).unwrap();
        let trie = TrieMemory::build(set, TrieMode::Lazy).unwrap();
        let a = exact.retrieve(&q, TiePolicy::UniformRandom, &mut r);
        let b = trie.retrieve(&q, PathPolicy::LeafWeighted, &mut r);
        if a.candidate_count != b.candidate_count {
            mismatches += 1;
        }
        if a.candidate_count == Some(1) {
            unique += 1;
            if a.word != b.word || a.word.as_ref().map(|x| &x.0) != Some(&w) {
                mismatches += 1;
            }
        }
    }

    // Ambiguous fixtures: compare per-candidate frequencies under
    // independent streams.
    let mut fixtures = 0;
    let mut worst = 0f64;
    let mut seed = 0u64;
    while fixtures < 10 {
        seed += 1;
        let mut r = rng::seeded(1000 + seed);
        let set = sample_word_set(Alphabet::new(2).unwrap(), 6, 24, &mut r).unwrap();
        let w = set.word(r.gen_range(0..set.m())).to_vec();
        let q = erase(&w, 3, &mut r).unwrap();
        let cands = assocmem::candidates(&set, &q);
        if cands.len() < 2 {
            continue;
        }
        fixtures += 1;
        let exact = BruteForceMemory::store(set.clone(), None).unwrap();
        let trie = TrieMemory::build(set, TrieMode::Lazy).unwrap();
        let (mut fa, mut fb): (HashMap<Word, u32>, HashMap<Word, u32>) = Default::default();
        let mut ra = rng::seeded(seed * 2);
        let mut rb = rng::seeded(seed * 2 + 1);
        for _ in 0..10_000 {
            *fa.entry(
                exact
                    .retrieve(&q, TiePolicy::UniformRandom, &mut ra)
                    .word
                    .unwrap(),
            )
            .or_default() += 1;
            *fb.entry(
                trie.retrieve(&q, PathPolicy::LeafWeighted, &mut rb)
                    .word
                    .unwrap(),
            )
            .or_default() += 1;
        }
        for c in &cands {
            let d = (fa.get(c).copied().unwrap_or(0) as f64
                - fb.get(c).copied().unwrap_or(0) as f64)
                .abs()
                / 1e4;
            worst = worst.max(d);
        }
    }
    outcome(
        mismatches == 0 && worst <= 0.03,
        format!("1000 instances ({unique} unique), {mismatches} disagreements; max frequency gap {worst:.4} over 10 fixtures"),
    )
}

fn c6_trie_linear_retrieval() -> Outcome {
    let points = [10u64, 100, 1000]
        .into_iter()
        .flat_map(|m| (4..=12).map(move |n| Point::new(16, n, m, 1)))
        .collect();
    let cfg = ExperimentConfig::new(points, vec![BackendSpec::trie()], 200, 6);
    let rows = run_complexity_experiment(&cfg).unwrap();
    let mean = rows.iter().map(|r| r.op_count_per_n).sum::<f64>() / rows.len() as f64;
    let spread = rows
        .iter()
        .map(|r| (r.op_count_per_n / mean - 1.0).abs())
        .fold(0.0, f64::max);
    let mut m_gap = 0f64;
    for n in 4..=12 {
        let ops: Vec<f64> = rows
            .iter()
            .filter(|r| r.n == n)
            .map(|r| r.mean_op_count)
            .collect();
        let (lo, hi) = ops
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        m_gap = m_gap.max(hi - lo);
    }
    outcome(
        spread <= 0.2 && m_gap <= 1.0,
        format!(
            "op/n within {:.1}% of {mean:.3}; max change across m {m_gap} nodes",
            100.0 * spread
        ),
    )
}

fn c7_adversarial() -> Outcome {
    let mut bad = 0;
    let mut max_ratio = 0f64;
    let mut r = rng::seeded(7);
    for n in 3..=10 {
        let set = adversarial_set(2, n).unwrap();
        let exact = BruteForceMemory::store(set.clone(), None).unwrap();
        let trie = TrieMemory::build(set, TrieMode::Lazy).unwrap();
        for (w, q) in adversarial_queries(2, n).unwrap() {
            let a = exact.retrieve(&q, TiePolicy::UniformRandom, &mut r);
            let b = trie.retrieve(&q, PathPolicy::LeafWeighted, &mut r);
            for res in [&a, &b] {
                if res.status != Status::Unique || res.word.as_ref() != Some(&w) {
                    bad += 1;
                }
            }
            max_ratio = max_ratio.max(b.op_count as f64 / n as f64);
        }
    }
    outcome(
        bad == 0 && max_ratio <= 2.0,
        format!("{bad} failures over n = 3..10; trie op_count <= {max_ratio:.3} n"),
    )
}

fn c8_single_word_recall() -> Outcome {
    let mut r = rng::seeded(8);
    let mut hnn_ok = 0;
    for _ in 0..500 {
        let l = [2u32, 4, 16, 256][r.gen_range(0..4)];
        let alphabet = Alphabet::new(l).unwrap();
        let bits = alphabet.bits_per_symbol() as usize;
        let n = r.gen_range(1..=32 / bits);
        let set = sample_word_set(alphabet, n, 1, &mut r).unwrap();
        let pattern = encode_bipolar(set.word(0), alphabet);
        let neurons = pattern.len();
        let net = HopfieldNetwork::store(&set, DiagonalMode::Summed);
        let k = r.gen_range(0..neurons);
        let mut query = pattern.clone();
        for i in rand::seq::index::sample(&mut r, neurons, k) {
            query[i] = 0;
        }
        if net.retrieve(&query, 1, false).state == pattern {
            hnn_ok += 1;
        }
    }
    let mut gbnn_ok = 0;
    for _ in 0..500 {
        let l = r.gen_range(2..=16);
        let n = r.gen_range(1..=8);
        let set = sample_word_set(Alphabet::new(l).unwrap(), n, 1, &mut r).unwrap();
        let w = set.word(0).to_vec();
        let q = erase(&w, r.gen_range(0..n), &mut r).unwrap();
        let net = GbnnNetwork::store(&set, SelfPairs::Included);
        let res = net.retrieve(&q, 1, Some(&set), &mut r).unwrap();
        if res.status == Status::Unique && res.word.map(|x| x.0) == Some(w) {
            gbnn_ok += 1;
        }
    }
    outcome(
        hnn_ok == 500 && gbnn_ok == 500,
        format!("hopfield {hnn_ok}/500, clique network {gbnn_ok}/500"),
    )
}

fn c9_fig2_ordering() -> Outcome {
    let points = [500, 2000, 8000, 32000]
        .into_iter()
        .map(|m| Point::new(256, 4, m, 2))
        .collect();
    let cfg = ExperimentConfig::new(
        points,
        vec![
            BackendSpec::exact(),
            BackendSpec::gbnn(),
            BackendSpec::hopfield(),
        ],
        5000,
        9,
    );
    let rows = run_error_experiment(&cfg).unwrap();
    let by = |kind: &str, m: u64| {
        rows.iter()
            .find(|r| r.backend.starts_with(kind) && r.m == m)
            .unwrap()
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for m in [500, 2000, 8000, 32000] {
        let (e, g, h) = (by("exact", m), by("gbnn", m), by("hopfield", m));
        let z = (e.word_error_rate - e.analytic_error.unwrap()) / e.stderr.max(f64::MIN_POSITIVE);
        ok &= e.word_error_rate <= g.word_error_rate + 0.02;
        ok &= g.word_error_rate + 0.02 <= h.word_error_rate + 0.04;
        ok &= e.within_stderr(3.0) == Some(true);
        parts.push(format!(
            "m={m}: {:.4}/{:.4}/{:.4} z={z:.2}",
            e.word_error_rate, g.word_error_rate, h.word_error_rate
        ));
    }
    outcome(ok, format!("exact/gbnn/hopfield {}", parts.join("; ")))
}

fn c10_entropy_numerics() -> Outcome {
    let mut worst = 0f64;
    let mut cases = 0;
    for (l, max_n) in [
        (2u32, 20usize),
        (3, 12),
        (4, 10),
        (16, 5),
        (256, 2),
        (1024, 2),
    ] {
        for n in 1..=max_n {
            let universe = (l as u128).pow(n as u32);
            if universe > 1 << 20 {
                continue;
            }
            for m in [1u128, 2, 3, 7, 10, 50, 100, 333, 500, 999, 1000] {
                if m > universe {
                    continue;
                }
                let a = log2_binomial(universe as f64, m as f64, CombinatoricsMode::ExactBigInt)
                    .unwrap();
                let b =
                    log2_binomial(universe as f64, m as f64, CombinatoricsMode::LogGamma).unwrap();
                let rel = if a == 0.0 { b.abs() } else { (a - b).abs() / a };
                worst = worst.max(rel);
                cases += 1;
            }
        }
    }
    let h = analytics::set_entropy_bits(2, 2, 2).unwrap();
    let named = (h - 6f64.log2()).abs() <= 1e-12;
    let rows = run_memory_experiment(&presets::fig3_points()).unwrap();
    let bounded = rows
        .iter()
        .all(|r| r.entropy_bits <= r.ordered_list_bits && r.entropy_le_ordered);
    outcome(
        worst <= 1e-9 && named && bounded,
        format!(
            "{cases} cases max rel {worst:.2e}; H(2,2,2) = {h:.12}; H <= ordered on {} fig3 rows: {bounded}",
            rows.len()
        ),
    )
}

fn c11_table1_ordering() -> Outcome {
    let cfg = CapacityConfig::new(
        64,
        10,
        1,
        0.01,
        vec![BackendSpec::hopfield(), BackendSpec::gbnn()],
        11,
    );
    let rows = run_capacity_search(&cfg).unwrap();
    let get = |k: &str| rows.iter().find(|r| r.backend.starts_with(k)).unwrap();
    let (h, g) = (get("hopfield"), get("gbnn"));
    let ok = match (h.ratio, g.ratio) {
        (Some(hr), Some(gr)) => hr > gr && gr > 1.0,
        _ => false,
    };
    let pct = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{:.0}%", 100.0 * v));
    outcome(
        ok,
        format!(
            "hopfield m = {} ratio {}; gbnn m = {} ratio {} (bracketed {}/{})",
            h.max_m,
            pct(h.ratio),
            g.max_m,
            pct(g.ratio),
            h.bracketed,
            g.bracketed
        ),
    )
}

fn c12_determinism() -> Outcome {
    let mut differing = Vec::new();
    for p in Preset::ALL {
        let trials = match p {
            Preset::Fig2 => Some(40),
            Preset::Table1 => Some(100),
            Preset::Table2 => Some(20),
            _ => None,
        };
        let a = run_preset(
            p,
            RunOptions {
                seed: 12,
                trials,
                workers: 1,
            },
        )
        .unwrap();
        let b = run_preset(
            p,
            RunOptions {
                seed: 12,
                trials,
                workers: 3,
            },
        )
        .unwrap();
        if a != b {
            differing.push(p.to_string());
        }
    }
    // The fixed-set mode shares one set across workers.
    let mut cfg = ExperimentConfig::new(
        vec![Point::new(4, 3, 20, 2)],
        vec![BackendSpec::exact()],
        500,
        12,
    );
    cfg.fixed_set = true;
    let one = run_error_experiment(&cfg.clone().with_workers(1)).unwrap();
    let four = run_error_experiment(&cfg.with_workers(4)).unwrap();
    if one != four {
        differing.push("fixed-set".into());
    }
    outcome(
        differing.is_empty(),
        format!("workers 1 vs 3 on all presets plus fixed-set mode; differing: {differing:?}"),
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    // Names, runtime bounds and checks, in criterion order.
    let criteria: [Criterion; 12] = [
        (
            1,
            "closed form equals exhaustive per-set oracle",
            Duration::from_secs(30),
            c1_exhaustive_oracle,
        ),
        (
            2,
            "Monte Carlo calibration of the exact backend",
            Duration::from_secs(10),
            c2_calibration,
        ),
        (
            3,
            "large-n approximation regime",
            Duration::from_secs(1),
            c3_asymptotic_regime,
        ),
        (
            4,
            "capacity estimate consistency",
            Duration::from_secs(1),
            c4_capacity,
        ),
        (
            5,
            "trie equals brute force",
            Duration::from_secs(60),
            c5_trie_matches_brute_force,
        ),
        (
            6,
            "trie retrieval linear in n",
            Duration::from_secs(30),
            c6_trie_linear_retrieval,
        ),
        (
            7,
            "single-deviation fixture",
            Duration::from_secs(10),
            c7_adversarial,
        ),
        (
            8,
            "single-word recall in one iteration",
            Duration::from_secs(10),
            c8_single_word_recall,
        ),
        (
            9,
            "error ordering at l=256, n=4, r=2",
            Duration::from_secs(600),
            c9_fig2_ordering,
        ),
        (
            10,
            "entropy numerics",
            Duration::from_secs(10),
            c10_entropy_numerics,
        ),
        (
            11,
            "memory/entropy ordering at 1% error",
            Duration::from_secs(900),
            c11_table1_ordering,
        ),
        (
            12,
            "determinism across worker counts",
            Duration::from_secs(600),
            c12_determinism,
        ),
    ];
    let filter: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = check();
        let took = start.elapsed();
        let pass = out.pass && took <= limit;
        failed += !pass as u32;
        println!(
            "acceptance {id:>2} {}: {name}: {} [{:.1}s, limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
