use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{BruteForceMemory, TiePolicy};
use crate::gbnn::{GbnnMemory, SelfPairs};
use crate::hopfield::{DiagonalMode, HopfieldMemory};
use crate::memory::AssociativeMemory;
use crate::trie::{PathPolicy, TrieMemory, TrieMode, DEFAULT_EAGER_CAP};
use crate::word::WordSet;

/// Largest clique network (in matrix bits) the harness will build per trial.
pub const MAX_GBNN_BITS: u128 = 1 << 31;
/// Largest Hopfield network (in neurons) the harness will build per trial.
pub const MAX_HOPFIELD_NEURONS: usize = 4096;

/// A memory kind plus its options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BackendSpec {
    Exact {
        tie: TiePolicy,
    },
    Trie {
        mode: TrieMode,
        path: PathPolicy,
    },
    Hopfield {
        diagonal: DiagonalMode,
        max_iters: usize,
        clamp: bool,
    },
    Gbnn {
        self_pairs: SelfPairs,
        iterations: usize,
        gamma: Option<u64>,
    },
}

impl BackendSpec {
    pub fn exact() -> Self {
        BackendSpec::Exact {
            tie: TiePolicy::UniformRandom,
        }
    }

    pub fn trie() -> Self {
        BackendSpec::Trie {
            mode: TrieMode::Lazy,
            path: PathPolicy::LeafWeighted,
        }
    }

    pub fn hopfield() -> Self {
        BackendSpec::Hopfield {
            diagonal: DiagonalMode::Summed,
            max_iters: crate::hopfield::DEFAULT_MAX_ITERS,
            clamp: false,
        }
    }

    pub fn gbnn() -> Self {
        BackendSpec::Gbnn {
            self_pairs: SelfPairs::Included,
            iterations: crate::gbnn::DEFAULT_ITERATIONS,
            gamma: None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BackendSpec::Exact { .. } => "exact",
            BackendSpec::Trie { .. } => "trie",
            BackendSpec::Hopfield { .. } => "hopfield",
            BackendSpec::Gbnn { .. } => "gbnn",
        }
    }

    /// Rejects option values and scales the backend cannot run at.
    pub fn check_feasible(&self, l: u32, n: usize) -> Result<()> {
        match *self {
            BackendSpec::Exact { .. } => Ok(()),
            BackendSpec::Trie { mode, .. } => {
                if n > 64 || (mode == TrieMode::Eager && n > DEFAULT_EAGER_CAP) {
                    Err(Error::resource(format!(
                        "trie backend cannot build n = {n} in {mode:?} mode"
                    )))
                } else {
                    Ok(())
                }
            }
            BackendSpec::Hopfield { max_iters, .. } => {
                if max_iters == 0 {
                    return Err(Error::arg("hopfield max_iters must be >= 1"));
                }
                let neurons = n * crate::word::ceil_log2(l as u64) as usize;
                if neurons > MAX_HOPFIELD_NEURONS {
                    return Err(Error::resource(format!(
                        "hopfield backend needs {neurons} neurons at (l={l}, n={n})"
                    )));
                }
                Ok(())
            }
            BackendSpec::Gbnn {
                iterations, gamma, ..
            } => {
                if iterations == 0 {
                    return Err(Error::arg("gbnn iterations must be >= 1"));
                }
                let neurons = n as u128 * l as u128;
                if gamma.is_some_and(|g| (g as u128) < neurons) {
                    return Err(Error::arg(format!("gbnn gamma must be >= n*l = {neurons}")));
                }
                if neurons * neurons > MAX_GBNN_BITS {
                    return Err(Error::resource(format!(
                        "gbnn backend needs {} matrix bits at (l={l}, n={n})",
                        neurons * neurons
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn build(&self, set: &WordSet) -> Result<Box<dyn AssociativeMemory>> {
        Ok(match *self {
            BackendSpec::Exact { tie } => {
                Box::new(BruteForceMemory::store(set.clone(), None)?.with_tie_policy(tie))
            }
            BackendSpec::Trie { mode, path } => {
                Box::new(TrieMemory::build(set.clone(), mode)?.with_path_policy(path))
            }
            BackendSpec::Hopfield {
                diagonal,
                max_iters,
                clamp,
            } => Box::new(
                HopfieldMemory::store(set.clone(), diagonal)
                    .with_max_iters(max_iters)
                    .with_clamp(clamp),
            ),
            BackendSpec::Gbnn {
                self_pairs,
                iterations,
                gamma,
            } => {
                let mut mem =
                    GbnnMemory::store(set.clone(), self_pairs).with_iterations(iterations)?;
                if let Some(g) = gamma {
                    mem = mem.with_gamma(g)?;
                }
                Box::new(mem)
            }
        })
    }
}

impl fmt::Display for BackendSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendSpec::Exact { tie } => {
                let t = match tie {
                    TiePolicy::UniformRandom => "uniform",
                    TiePolicy::FirstStored => "first",
                    TiePolicy::MaxWeight => "maxweight",
                };
                write!(f, "exact[tie={t}]")
            }
            BackendSpec::Trie { mode, path } => {
                let m = if *mode == TrieMode::Eager {
                    "eager"
                } else {
                    "lazy"
                };
                let p = if *path == PathPolicy::LeafWeighted {
                    "leaf"
                } else {
                    "first"
                };
                write!(f, "trie[mode={m};path={p}]")
            }
            BackendSpec::Hopfield {
                diagonal,
                max_iters,
                clamp,
            } => {
                let d = if *diagonal == DiagonalMode::Summed {
                    "sum"
                } else {
                    "zero"
                };
                write!(
                    f,
                    "hopfield[diag={d};iters={max_iters};clamp={}]",
                    *clamp as u8
                )
            }
            BackendSpec::Gbnn {
                self_pairs,
                iterations,
                gamma,
            } => {
                let s = if *self_pairs == SelfPairs::Included {
                    "include"
                } else {
                    "exclude"
                };
                match gamma {
                    Some(g) => write!(f, "gbnn[self={s};iters={iterations};gamma={g}]"),
                    None => write!(f, "gbnn[self={s};iters={iterations};gamma=nl]"),
                }
            }
        }
    }
}
