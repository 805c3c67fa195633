//! Brute-force maximum-likelihood memory and the exact per-set success
//! probability.
//!
//! With erasures as the only noise, every stored word consistent with a query
//! is equally likely under a uniform source, so any consistent choice is
//! optimal. [`exact_success_probability`] counts the distinct consistent
//! partial words `|S_r|` and divides by `m * C(n, r)`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::memory::AssociativeMemory;
use crate::word::{ErasurePattern, PartialWord, RetrievalResult, Status, Symbol, Word, WordSet};

/// Default cap on `(word, pattern)` pairs enumerated by the exact oracle.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Uniform over the consistent words.
    #[default]
    UniformRandom,
    /// The consistent word stored first.
    FirstStored,
    /// The consistent word of largest weight, ties by stored order.
    MaxWeight,
}

#[derive(Debug, Clone)]
pub struct BruteForceMemory {
    set: WordSet,
    weights: Option<Vec<f64>>,
    tie_policy: TiePolicy,
}

impl BruteForceMemory {
    /// Stores `set`, optionally with a source measure over its words.
    pub fn store(set: WordSet, weights: Option<Vec<f64>>) -> Result<Self> {
        if let Some(w) = &weights {
            if w.len() != set.m() {
                return Err(Error::arg(format!(
                    "{} weights for {} words",
                    w.len(),
                    set.m()
                )));
            }
            if w.iter().any(|&x| x.is_nan() || x < 0.0 || !x.is_finite()) {
                return Err(Error::arg("weights must be finite and nonnegative"));
            }
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::arg(format!("weights sum to {total}, expected 1")));
            }
        }
        Ok(BruteForceMemory {
            set,
            weights,
            tie_policy: TiePolicy::default(),
        })
    }

    pub fn with_tie_policy(mut self, policy: TiePolicy) -> Self {
        self.tie_policy = policy;
        self
    }

    pub fn word_set(&self) -> &WordSet {
        &self.set
    }

    /// Stored symbols; `m * n`.
    pub fn storage_symbols(&self) -> usize {
        self.set.m() * self.set.n()
    }

    /// Scans every stored word. `op_count` is the number of symbol
    /// comparisons, always `m * n`.
    pub fn retrieve<R: Rng + ?Sized>(
        &self,
        q: &PartialWord,
        policy: TiePolicy,
        rng: &mut R,
    ) -> RetrievalResult {
        let n = self.set.n();
        assert_eq!(q.len(), n, "query length must equal word length");
        let query = q.raw();
        let mut ops = 0u64;
        let mut hits = Vec::new();
        for (i, w) in self.set.iter().enumerate() {
            let mut ok = true;
            for (&qs, &ws) in query.iter().zip(w) {
                ops += 1;
                ok &= qs == crate::word::ERASED || qs == ws;
            }
            if ok {
                hits.push(i);
            }
        }
        let count = hits.len() as u64;
        if hits.is_empty() {
            return RetrievalResult::no_match(Some(0), ops);
        }
        let pick = match policy {
            TiePolicy::FirstStored => hits[0],
            TiePolicy::UniformRandom => {
                if hits.len() == 1 {
                    hits[0]
                } else {
                    hits[rng.gen_range(0..hits.len())]
                }
            }
            TiePolicy::MaxWeight => match &self.weights {
                None => hits[0],
                Some(w) => {
                    hits.iter()
                        .copied()
                        .fold(hits[0], |best, i| if w[i] > w[best] { i } else { best })
                }
            },
        };
        RetrievalResult {
            word: Some(Word::from(self.set.word(pick))),
            status: if count == 1 {
                Status::Unique
            } else {
                Status::Ambiguous
            },
            candidate_count: Some(count),
            op_count: ops,
        }
    }
}

impl AssociativeMemory for BruteForceMemory {
    fn label(&self) -> String {
        "exact".into()
    }

    fn recall(&self, query: &PartialWord, rng: &mut dyn RngCore) -> RetrievalResult {
        self.retrieve(query, self.tie_policy, rng)
    }

    /// An ordered list: `m * n * ceil(log2 l)` bits.
    fn memory_bits(&self) -> f64 {
        (self.storage_symbols() as f64) * self.set.alphabet().bits_per_symbol() as f64
    }

    fn store_ops(&self) -> u64 {
        self.storage_symbols() as u64
    }
}

pub(crate) fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

fn check_budget(set: &WordSet, r: usize, budget: u128) -> Result<u128> {
    let n = set.n();
    if r > n {
        return Err(Error::arg(format!("cannot erase {r} of {n} positions")));
    }
    if n > 63 {
        return Err(Error::resource("erasure-pattern enumeration needs n <= 63"));
    }
    let patterns = binomial_u128(n as u64, r as u64).expect("C(n, r) fits for n <= 63");
    let pairs = patterns * set.m() as u128;
    if pairs > budget {
        return Err(Error::resource(format!(
            "exact oracle needs {pairs} (word, pattern) pairs, budget is {budget}"
        )));
    }
    Ok(patterns)
}

/// Number of distinct `r`-erasure partial words consistent with the set.
pub fn consistent_partial_words(set: &WordSet, r: usize) -> Result<u128> {
    check_budget(set, r, u128::MAX)?;
    let n = set.n();
    let l = set.l() as u128;
    let keep = n - r;
    let packs = (l).checked_pow(keep as u32).is_some();
    let mut total = 0u128;
    for mask in ErasurePattern::all_masks(n, r) {
        let kept: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        let distinct = if packs {
            let mut seen = HashSet::with_capacity(set.m());
            for w in set.iter() {
                seen.insert(kept.iter().fold(0u128, |acc, &i| acc * l + w[i] as u128));
            }
            seen.len()
        } else {
            let mut seen: HashSet<Vec<Symbol>> = HashSet::with_capacity(set.m());
            for w in set.iter() {
                seen.insert(kept.iter().map(|&i| w[i]).collect());
            }
            seen.len()
        };
        total += distinct as u128;
    }
    Ok(total)
}

/// Exact success probability of the maximum-likelihood rule on `set` when
/// exactly `r` uniformly placed symbols are erased.
pub fn exact_success_probability(set: &WordSet, r: usize) -> Result<BigRational> {
    exact_success_probability_with_budget(set, r, DEFAULT_ENUMERATION_BUDGET)
}

pub fn exact_success_probability_with_budget(
    set: &WordSet,
    r: usize,
    budget: u128,
) -> Result<BigRational> {
    let patterns = check_budget(set, r, budget)?;
    let distinct = consistent_partial_words(set, r)?;
    Ok(BigRational::new(
        BigInt::from(distinct),
        BigInt::from(patterns) * BigInt::from(set.m()),
    ))
}

/// The same probability computed as the average, over every `(word, pattern)`
/// pair, of `1 / |candidates|`. Quadratic in `m`; meant as a cross-check.
pub fn success_probability_by_candidates(set: &WordSet, r: usize) -> Result<BigRational> {
    let patterns = check_budget(set, r, DEFAULT_ENUMERATION_BUDGET)?;
    let mut sum = BigRational::from_integer(0.into());
    for mask in ErasurePattern::all_masks(set.n(), r) {
        let pattern = ErasurePattern::from_mask(set.n(), mask);
        for w in set.iter() {
            let q = pattern.apply(w);
            let c = set.iter().filter(|x| q.matches(x)).count();
            sum += BigRational::new(1.into(), BigInt::from(c));
        }
    }
    Ok(sum / BigRational::from_integer(BigInt::from(patterns) * BigInt::from(set.m())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::word::{candidates, Alphabet};

    fn set(l: u32, words: &[&[Symbol]]) -> WordSet {
        let v: Vec<Vec<Symbol>> = words.iter().map(|w| w.to_vec()).collect();
        WordSet::new(words[0].len(), Alphabet::new(l).unwrap(), &v).unwrap()
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn store_weight_validation() {
        let s = set(2, &[&[0, 0], &[0, 1]]);
        assert!(BruteForceMemory::store(s.clone(), Some(vec![0.9, 0.1])).is_ok());
        assert!(BruteForceMemory::store(s.clone(), Some(vec![0.9, 0.2])).is_err());
        assert!(BruteForceMemory::store(s.clone(), Some(vec![1.0])).is_err());
        assert!(BruteForceMemory::store(s, Some(vec![1.5, -0.5])).is_err());
    }

    #[test]
    fn retrieve_examples() {
        let mem = BruteForceMemory::store(set(2, &[&[0, 0], &[1, 1]]), None).unwrap();
        let mut r = rng::seeded(0);
        let res = mem.retrieve(
            &PartialWord::new([Some(0), None]),
            TiePolicy::FirstStored,
            &mut r,
        );
        assert_eq!(res.word, Some(Word(vec![0, 0])));
        assert_eq!(res.status, Status::Unique);
        assert_eq!(res.candidate_count, Some(1));
        assert_eq!(res.op_count, 4);

        let res = mem.retrieve(
            &PartialWord::new([Some(1), Some(0)]),
            TiePolicy::UniformRandom,
            &mut r,
        );
        assert_eq!(res.status, Status::NoMatch);
        assert!(res.word.is_none());
    }

    #[test]
    fn retrieve_reproduces_candidates() {
        let s = set(2, &[&[0, 0], &[1, 1]]);
        let mem = BruteForceMemory::store(s.clone(), None).unwrap();
        for a in [None, Some(0), Some(1)] {
            for b in [None, Some(0), Some(1)] {
                let q = PartialWord::new([a, b]);
                let res = mem.retrieve(&q, TiePolicy::FirstStored, &mut rng::seeded(0));
                let c = candidates(&s, &q);
                assert_eq!(res.candidate_count, Some(c.len() as u64));
                assert_eq!(res.word, c.first().cloned());
            }
        }
    }

    #[test]
    fn uniform_ties_split_evenly() {
        let mem = BruteForceMemory::store(set(2, &[&[0, 0], &[0, 1]]), None).unwrap();
        let q = PartialWord::new([Some(0), None]);
        let trials = 10_000;
        let first = (0..trials)
            .filter(|&s| {
                mem.retrieve(&q, TiePolicy::UniformRandom, &mut rng::seeded(s))
                    .word
                    == Some(Word(vec![0, 0]))
            })
            .count();
        assert!((first as f64 / trials as f64 - 0.5).abs() <= 0.02);
    }

    #[test]
    fn max_weight_prefers_heavier_word() {
        let mem =
            BruteForceMemory::store(set(2, &[&[0, 0], &[0, 1]]), Some(vec![0.1, 0.9])).unwrap();
        let q = PartialWord::new([Some(0), None]);
        let res = mem.retrieve(&q, TiePolicy::MaxWeight, &mut rng::seeded(0));
        assert_eq!(res.word, Some(Word(vec![0, 1])));
    }

    #[test]
    fn exact_probability_examples() {
        let s = set(2, &[&[0, 0], &[1, 1]]);
        assert_eq!(exact_success_probability(&s, 1).unwrap(), ratio(1, 1));
        let s = set(2, &[&[0, 0], &[0, 1]]);
        assert_eq!(exact_success_probability(&s, 1).unwrap(), ratio(3, 4));
        assert_eq!(exact_success_probability(&s, 0).unwrap(), ratio(1, 1));
        assert_eq!(
            success_probability_by_candidates(&s, 1).unwrap(),
            ratio(3, 4)
        );
    }

    #[test]
    fn budget_is_enforced() {
        let s = set(2, &[&[0, 0, 0, 0], &[0, 1, 0, 1]]);
        assert!(matches!(
            exact_success_probability_with_budget(&s, 2, 11),
            Err(Error::Resource(_))
        ));
        assert!(exact_success_probability_with_budget(&s, 2, 12).is_ok());
        assert!(exact_success_probability(&s, 5).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_u128(4, 2), Some(6));
        assert_eq!(binomial_u128(63, 31), Some(916312070471295267));
        assert_eq!(binomial_u128(3, 5), Some(0));
    }
}
