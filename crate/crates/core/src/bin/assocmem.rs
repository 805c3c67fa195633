use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use assocmem::analytics::{self, ScenarioParams};
use assocmem::exact::TiePolicy;
use assocmem::gbnn::SelfPairs;
use assocmem::harness::presets::{run_preset, Preset, RunOptions};
use assocmem::harness::{adversarial_queries, adversarial_set, BackendSpec};
use assocmem::hopfield::DiagonalMode;
use assocmem::trie::{PathPolicy, TrieMemory, TrieMode};
use assocmem::{io, rng, sample_word_set, Alphabet, Error, Result, WordSet};

/// Associative memories over erased words.
///
/// Word-set files start with a `n l` header followed by one word per line
/// (symbols 0..l-1 separated by spaces). Query files use the same layout and
/// may write `?` for an erased symbol.
///
/// Experiment CSVs begin with `# key=value` provenance lines. Error
/// experiments use the columns backend,l,n,m,r,trials,word_error_rate,
/// stderr,analytic_error,mean_op_count,memory_bits,seed.
///
/// Exit codes: 0 success, 1 usage or input error, 2 resource limit.
#[derive(Parser)]
#[command(name = "assocmem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load or sample a word set and report its size and memory footprint.
    Build(BuildArgs),
    /// Retrieve each query of a query file; prints `word status candidate_count op_count`.
    Query(QueryArgs),
    /// Evaluate one closed form and print a CSV header and row.
    Analytic(AnalyticArgs),
    /// Run a preset sweep and write its CSV.
    Experiment(ExperimentArgs),
    /// Write the single-deviation word set, optionally with its hiding queries.
    Adversarial(AdversarialArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Word-set file to load. Without it a set is sampled from --l, --n, --m.
    #[arg(long)]
    words: Option<PathBuf>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Build every erasure-pattern trie up front and report their size.
    #[arg(long)]
    eager_tries: bool,
    /// Write the set as a word-set file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendKind {
    Exact,
    Trie,
    Hopfield,
    Gbnn,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    Uniform,
    First,
    Maxweight,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrieModeArg {
    Eager,
    Lazy,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Leaf,
    First,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagArg {
    Sum,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelfArg {
    Include,
    Exclude,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    words: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendKind,
    /// Exact backend: tie-breaking among candidates.
    #[arg(long, value_enum, default_value = "uniform")]
    tie: TieArg,
    /// Trie backend: build all tries up front or on first use.
    #[arg(long, value_enum, default_value = "lazy")]
    trie_mode: TrieModeArg,
    /// Trie backend: completion below the known prefix.
    #[arg(long, value_enum, default_value = "leaf")]
    path: PathArg,
    /// Hopfield backend: iteration cap.
    #[arg(long, default_value_t = assocmem::hopfield::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Hopfield backend: diagonal weights.
    #[arg(long, value_enum, default_value = "sum")]
    diag: DiagArg,
    /// Hopfield backend: hold known neurons at their query values.
    #[arg(long)]
    clamp: bool,
    /// Clique backend: memory coefficient, at least n*l (default n*l).
    #[arg(long)]
    gamma: Option<u64>,
    /// Clique backend: update rounds.
    #[arg(long, default_value_t = assocmem::gbnn::DEFAULT_ITERATIONS)]
    iters: usize,
    /// Clique backend: whether a word connects each neuron to itself.
    #[arg(long = "self", value_enum, default_value = "include")]
    self_pairs: SelfArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl QueryArgs {
    fn backend(&self) -> BackendSpec {
        match self.backend {
            BackendKind::Exact => BackendSpec::Exact {
                tie: match self.tie {
                    TieArg::Uniform => TiePolicy::UniformRandom,
                    TieArg::First => TiePolicy::FirstStored,
                    TieArg::Maxweight => TiePolicy::MaxWeight,
                },
            },
            BackendKind::Trie => BackendSpec::Trie {
                mode: match self.trie_mode {
                    TrieModeArg::Eager => TrieMode::Eager,
                    TrieModeArg::Lazy => TrieMode::Lazy,
                },
                path: match self.path {
                    PathArg::Leaf => PathPolicy::LeafWeighted,
                    PathArg::First => PathPolicy::FirstChild,
                },
            },
            BackendKind::Hopfield => BackendSpec::Hopfield {
                diagonal: match self.diag {
                    DiagArg::Sum => DiagonalMode::Summed,
                    DiagArg::Zero => DiagonalMode::Zeroed,
                },
                max_iters: self.max_iters,
                clamp: self.clamp,
            },
            BackendKind::Gbnn => BackendSpec::Gbnn {
                self_pairs: match self.self_pairs {
                    SelfArg::Include => SelfPairs::Included,
                    SelfArg::Exclude => SelfPairs::Excluded,
                },
                iterations: self.iters,
                gamma: self.gamma,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Formula {
    /// Expected maximum-likelihood success over random sets (needs l, n, m, r).
    Eq2,
    /// Large-n approximation of the same (needs l, n, m, r).
    Eq4,
    /// Set size at target error p0 (needs l, n, r, p0).
    Capacity,
    /// Set entropy and its asymptotic forms (needs l, n, m).
    Entropy,
    /// Unordered/ordered bit ratio at c = l^n/m (needs l, n, m).
    Ratio,
    /// Bits used by each representation (needs l, n, m).
    Membits,
}

#[derive(Args)]
struct AnalyticArgs {
    #[arg(value_enum)]
    formula: Formula,
    #[arg(long)]
    l: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p0: Option<f64>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// fig1, fig2, fig3, table1 or table2.
    name: String,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trials per point (per probe for table1); preset default when absent.
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads, 0 for all cores. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct AdversarialArgs {
    #[arg(long)]
    l: u32,
    #[arg(long)]
    n: usize,
    /// Word-set destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the queries that erase each word's deviating symbol.
    #[arg(long)]
    queries: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::arg(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn build(a: BuildArgs) -> Result<()> {
    let set = match (&a.words, a.l, a.n, a.m) {
        (Some(p), None, None, None) => io::parse_word_set(&read(p)?)?,
        (None, Some(l), Some(n), Some(m)) => {
            sample_word_set(Alphabet::new(l)?, n, m, &mut rng::seeded(a.seed))?
        }
        _ => return Err(Error::arg("give either --words or all of --l, --n, --m")),
    };
    let (l, n, m) = (set.l(), set.n(), set.m() as u64);
    let mut stats = vec![
        ("n", n.to_string()),
        ("l", l.to_string()),
        ("m", m.to_string()),
        (
            "entropy_bits",
            analytics::set_entropy_bits(l, n, m)?.to_string(),
        ),
        (
            "ordered_list_bits",
            analytics::ordered_list_bits(l, n, m).to_string(),
        ),
        (
            "hnn_bits",
            analytics::hnn_memory_bits(l, n, m as usize).to_string(),
        ),
        ("gbnn_bits", analytics::gbnn_memory_bits(l, n).to_string()),
    ];
    if a.eager_tries {
        let t = TrieMemory::build(set.clone(), TrieMode::Eager)?.stats();
        stats.push(("trie_count", t.trie_count.to_string()));
        stats.push(("trie_nodes", t.node_count.to_string()));
        stats.push(("trie_bits", t.estimated_bits.to_string()));
    }
    if let Some(p) = &a.out {
        fs::write(p, io::format_word_set(&set))?;
    }
    let mut text = String::new();
    for (k, v) in stats {
        text.push_str(&format!("{k}={v}\n"));
    }
    emit(None, &text)
}

fn query(a: QueryArgs) -> Result<()> {
    let set: WordSet = io::parse_word_set(&read(&a.words)?)?;
    let (n, alphabet, queries) = io::parse_queries(&read(&a.queries)?)?;
    if n != set.n() || alphabet != set.alphabet() {
        return Err(Error::arg(format!(
            "query file header `{n} {}` does not match word set `{} {}`",
            alphabet.size(),
            set.n(),
            set.l()
        )));
    }
    let spec = a.backend();
    spec.check_feasible(set.l(), set.n())?;
    let mem = spec.build(&set)?;
    let mut text = String::new();
    for (i, q) in queries.iter().enumerate() {
        let res = mem.recall(q, &mut rng::stream(a.seed, &[i as u64]));
        let word = res.word.as_ref().map_or("-".to_string(), |w| w.to_string());
        let count = res
            .candidate_count
            .map_or("-".to_string(), |c| c.to_string());
        text.push_str(&format!("{word} {} {count} {}\n", res.status, res.op_count));
    }
    emit(None, &text)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::arg(format!("this formula needs --{flag}")))
}

fn analytic(a: AnalyticArgs) -> Result<()> {
    let f = |x: f64| x.to_string();
    let (header, row): (&str, Vec<String>) = match a.formula {
        Formula::Eq2 | Formula::Eq4 => {
            let (m, r) = (need(a.m, "m")?, need(a.r, "r")?);
            let p = ScenarioParams::new(a.l, a.n, m, r)?;
            let s = match a.formula {
                Formula::Eq2 => analytics::expected_success_exact(&p)?,
                _ => analytics::expected_success_asymptotic(&p),
            };
            let e = match a.formula {
                Formula::Eq2 => analytics::residual_error(&p)?,
                _ => 1.0 - s,
            };
            (
                "l,n,m,r,success,log10_success,residual_error,log10_residual_error",
                vec![
                    a.l.to_string(),
                    a.n.to_string(),
                    m.to_string(),
                    r.to_string(),
                    f(s),
                    f(s.log10()),
                    f(e),
                    f(e.log10()),
                ],
            )
        }
        Formula::Capacity => {
            let (r, p0) = (need(a.r, "r")?, need(a.p0, "p0")?);
            ScenarioParams::new(a.l, a.n, 1, r)?.with_p0(p0)?;
            let m = analytics::capacity_estimate(a.l, a.n, r, p0);
            (
                "l,n,r,p0,m",
                vec![
                    a.l.to_string(),
                    a.n.to_string(),
                    r.to_string(),
                    f(p0),
                    m.to_string(),
                ],
            )
        }
        Formula::Entropy => {
            let m = need(a.m, "m")?;
            ScenarioParams::new(a.l, a.n, m, 0)?;
            let h = analytics::set_entropy_bits(a.l, a.n, m)?;
            let c = (a.l as f64).powi(a.n as i32) / m as f64;
            let cc = analytics::entropy_asymptotic_constant_c(m, c).ok();
            (
                "l,n,m,entropy_bits,log10_entropy_bits,small_m_bits,constant_c_bits",
                vec![
                    a.l.to_string(),
                    a.n.to_string(),
                    m.to_string(),
                    f(h),
                    f(h.log10()),
                    f(analytics::entropy_asymptotic_small_m(a.l, a.n, m)),
                    cc.map(f).unwrap_or_default(),
                ],
            )
        }
        Formula::Ratio => {
            let m = need(a.m, "m")?;
            ScenarioParams::new(a.l, a.n, m, 0)?;
            let c = (a.l as f64).powi(a.n as i32) / m as f64;
            let ratio = analytics::ordered_to_unordered_ratio(c, a.n, a.l)?;
            let exact = analytics::set_entropy_bits(a.l, a.n, m)?
                / analytics::entropy_asymptotic_small_m(a.l, a.n, m);
            (
                "l,n,m,c,ratio,exact_ratio",
                vec![
                    a.l.to_string(),
                    a.n.to_string(),
                    m.to_string(),
                    f(c),
                    f(ratio),
                    f(exact),
                ],
            )
        }
        Formula::Membits => {
            let m = need(a.m, "m")?;
            ScenarioParams::new(a.l, a.n, m, 0)?;
            (
                "l,n,m,entropy_bits,ordered_list_bits,hnn_bits,gbnn_bits",
                vec![
                    a.l.to_string(),
                    a.n.to_string(),
                    m.to_string(),
                    f(analytics::set_entropy_bits(a.l, a.n, m)?),
                    f(analytics::ordered_list_bits(a.l, a.n, m)),
                    f(analytics::hnn_memory_bits(a.l, a.n, m as usize)),
                    f(analytics::gbnn_memory_bits(a.l, a.n)),
                ],
            )
        }
    };
    emit(None, &format!("{header}\n{}\n", row.join(",")))
}

fn experiment(a: ExperimentArgs) -> Result<()> {
    let preset: Preset = a.name.parse()?;
    let csv = run_preset(
        preset,
        RunOptions {
            seed: a.seed,
            trials: a.trials,
            workers: a.workers,
        },
    )?;
    emit(a.out.as_deref(), &csv)
}

fn adversarial(a: AdversarialArgs) -> Result<()> {
    let set = adversarial_set(a.l, a.n)?;
    if let Some(p) = &a.queries {
        let qs: Vec<_> = adversarial_queries(a.l, a.n)?
            .into_iter()
            .map(|(_, q)| q)
            .collect();
        fs::write(p, io::format_queries(a.n, set.alphabet(), &qs))?;
    }
    emit(a.out.as_deref(), &io::format_word_set(&set))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Build(a) => build(a),
        Command::Query(a) => query(a),
        Command::Analytic(a) => analytic(a),
        Command::Experiment(a) => experiment(a),
        Command::Adversarial(a) => adversarial(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => 2,
                _ => 1,
            })
        }
    }
}
