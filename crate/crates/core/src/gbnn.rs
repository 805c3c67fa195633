//! Clustered binary clique network.
//!
//! `n` clusters of `l` neurons; neuron `(i, j)` stands for "position `i`
//! holds letter `j`". Storing a word connects all of its neurons pairwise.
//! Retrieval iterates a per-cluster winner-take-all over the scores
//! `W v + gamma v`.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::memory::AssociativeMemory;
use crate::word::{PartialWord, RetrievalResult, Status, Symbol, Word, WordSet};

pub const DEFAULT_ITERATIONS: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfPairs {
    /// Pairs within one cluster (`i1 = i2`) are stored too, which puts a 1 on
    /// the diagonal of every used neuron.
    #[default]
    Included,
    /// Only connections between distinct clusters.
    Excluded,
}

/// Square bit matrix with 64-bit row blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitMatrix {
    size: usize,
    blocks: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(size: usize) -> Self {
        let blocks = size.div_ceil(64);
        BitMatrix {
            size,
            blocks,
            bits: vec![0; size * blocks],
        }
    }

    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.blocks + c / 64] |= 1 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.blocks + c / 64] >> (c % 64) & 1 == 1
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.blocks..(r + 1) * self.blocks]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GbnnNetwork {
    n: usize,
    l: usize,
    w: BitMatrix,
    gamma: u64,
    self_pairs: SelfPairs,
    m_stored: usize,
}

/// Per-cluster active neuron sets after the dynamics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activation {
    pub active: Vec<Vec<Symbol>>,
    pub iterations: usize,
    pub converged: bool,
    /// Score accumulations: `iterations * (n l)^2`.
    pub op_count: u64,
}

impl GbnnNetwork {
    /// Stores `set` with `gamma = n l`.
    pub fn store(set: &WordSet, self_pairs: SelfPairs) -> Self {
        let (n, l) = (set.n(), set.l() as usize);
        let mut w = BitMatrix::new(n * l);
        for word in set.iter() {
            for i1 in 0..n {
                let a = i1 * l + word[i1] as usize;
                if self_pairs == SelfPairs::Included {
                    w.set(a, a);
                }
                for (i2, &s2) in word.iter().enumerate().skip(i1 + 1) {
                    let b = i2 * l + s2 as usize;
                    w.set(a, b);
                    w.set(b, a);
                }
            }
        }
        GbnnNetwork {
            n,
            l,
            w,
            gamma: (n * l) as u64,
            self_pairs,
            m_stored: set.m(),
        }
    }

    /// Overrides the memory coefficient; must be at least `n l`.
    pub fn with_gamma(mut self, gamma: u64) -> Result<Self> {
        if gamma < (self.n * self.l) as u64 {
            return Err(Error::arg(format!(
                "gamma must be >= n*l = {}, got {gamma}",
                self.n * self.l
            )));
        }
        self.gamma = gamma;
        Ok(self)
    }

    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    pub fn neurons(&self) -> usize {
        self.n * self.l
    }

    pub fn self_pairs(&self) -> SelfPairs {
        self.self_pairs
    }

    pub fn connected(&self, (i1, j1): (usize, Symbol), (i2, j2): (usize, Symbol)) -> bool {
        self.w
            .get(i1 * self.l + j1 as usize, i2 * self.l + j2 as usize)
    }

    pub fn is_symmetric(&self) -> bool {
        let s = self.neurons();
        (0..s).all(|a| (0..a).all(|b| self.w.get(a, b) == self.w.get(b, a)))
    }

    /// Entrywise `self <= other`.
    pub fn is_subgraph_of(&self, other: &GbnnNetwork) -> bool {
        self.w.size == other.w.size
            && self
                .w
                .bits
                .iter()
                .zip(&other.w.bits)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn connection_count(&self) -> usize {
        self.w.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Pair-insertions of the storage rule, `m * n^2`.
    pub fn store_ops(&self) -> u64 {
        (self.m_stored * self.n * self.n) as u64
    }

    fn initial_state(&self, q: &PartialWord) -> Vec<u64> {
        let mut v = vec![0u64; self.w.blocks];
        for i in 0..self.n {
            if let Some(s) = q.get(i) {
                let idx = i * self.l + s as usize;
                v[idx / 64] |= 1 << (idx % 64);
            }
        }
        v
    }

    /// One application of `s(W v + gamma v)`.
    fn step(&self, v: &[u64]) -> Vec<u64> {
        let mut next = vec![0u64; self.w.blocks];
        let mut scores = vec![0u64; self.l];
        for i in 0..self.n {
            for (j, score) in scores.iter_mut().enumerate() {
                let idx = i * self.l + j;
                let cross: u32 = self
                    .w
                    .row(idx)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                let own = v[idx / 64] >> (idx % 64) & 1;
                *score = cross as u64 + self.gamma * own;
            }
            let best = *scores.iter().max().expect("l >= 2");
            for (j, &score) in scores.iter().enumerate() {
                if score == best {
                    let idx = i * self.l + j;
                    next[idx / 64] |= 1 << (idx % 64);
                }
            }
        }
        next
    }

    /// Runs the dynamics for at most `iterations` updates, stopping early at
    /// a fixed point.
    pub fn activate(&self, q: &PartialWord, iterations: usize) -> Result<Activation> {
        if iterations == 0 {
            return Err(Error::arg("iterations must be >= 1"));
        }
        if q.len() != self.n {
            return Err(Error::arg(format!(
                "query has length {}, expected {}",
                q.len(),
                self.n
            )));
        }
        let mut v = self.initial_state(q);
        let mut done = 0;
        let mut converged = false;
        for _ in 0..iterations {
            let next = self.step(&v);
            done += 1;
            if next == v {
                converged = true;
                break;
            }
            v = next;
        }
        let active = (0..self.n)
            .map(|i| {
                (0..self.l)
                    .filter(|&j| {
                        let idx = i * self.l + j;
                        v[idx / 64] >> (idx % 64) & 1 == 1
                    })
                    .map(|j| j as Symbol)
                    .collect()
            })
            .collect();
        let s = self.neurons() as u64;
        Ok(Activation {
            active,
            iterations: done,
            converged,
            op_count: done as u64 * s * s,
        })
    }

    /// Runs the dynamics and decodes one letter per cluster, choosing
    /// uniformly among tied active neurons. With `known`, a decoded word
    /// outside the set is reported as `Mismatch`.
    pub fn retrieve<R: Rng + ?Sized>(
        &self,
        q: &PartialWord,
        iterations: usize,
        known: Option<&WordSet>,
        rng: &mut R,
    ) -> Result<RetrievalResult> {
        let act = self.activate(q, iterations)?;
        let mut ambiguous = false;
        let mut combos: u64 = 1;
        let word: Vec<Symbol> = act
            .active
            .iter()
            .map(|cluster| {
                combos = combos.saturating_mul(cluster.len() as u64);
                if cluster.len() == 1 {
                    cluster[0]
                } else {
                    ambiguous = true;
                    cluster[rng.gen_range(0..cluster.len())]
                }
            })
            .collect();
        let status = if known.is_some_and(|set| !set.contains(&word)) {
            Status::Mismatch
        } else if ambiguous {
            Status::Ambiguous
        } else {
            Status::Unique
        };
        Ok(RetrievalResult {
            word: Some(Word(word)),
            status,
            candidate_count: Some(combos),
            op_count: act.op_count,
        })
    }
}

/// A clique network paired with the stored set, for `Mismatch` detection.
#[derive(Debug, Clone)]
pub struct GbnnMemory {
    net: GbnnNetwork,
    set: WordSet,
    iterations: usize,
}

impl GbnnMemory {
    pub fn store(set: WordSet, self_pairs: SelfPairs) -> Self {
        GbnnMemory {
            net: GbnnNetwork::store(&set, self_pairs),
            set,
            iterations: DEFAULT_ITERATIONS,
        }
    }

    pub fn with_gamma(mut self, gamma: u64) -> Result<Self> {
        self.net = self.net.with_gamma(gamma)?;
        Ok(self)
    }

    pub fn with_iterations(mut self, iterations: usize) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::arg("iterations must be >= 1"));
        }
        self.iterations = iterations;
        Ok(self)
    }

    pub fn network(&self) -> &GbnnNetwork {
        &self.net
    }

    /// Dense bit count, `(n l)^2`.
    pub fn dense_bits(&self) -> f64 {
        let s = self.net.neurons() as f64;
        s * s
    }
}

impl AssociativeMemory for GbnnMemory {
    fn label(&self) -> String {
        "gbnn".into()
    }

    fn recall(&self, query: &PartialWord, rng: &mut dyn RngCore) -> RetrievalResult {
        self.net
            .retrieve(query, self.iterations, Some(&self.set), rng)
            .expect("iterations validated at construction")
    }

    fn memory_bits(&self) -> f64 {
        crate::analytics::gbnn_memory_bits(self.set.l(), self.set.n())
    }

    fn store_ops(&self) -> u64 {
        self.net.store_ops()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::word::Alphabet;

    fn set(n: usize, l: u32, words: &[&[Symbol]]) -> WordSet {
        let v: Vec<Vec<Symbol>> = words.iter().map(|w| w.to_vec()).collect();
        WordSet::new(n, Alphabet::new(l).unwrap(), &v).unwrap()
    }

    #[test]
    fn store_single_word() {
        let net = GbnnNetwork::store(&set(2, 2, &[&[0, 1]]), SelfPairs::Included);
        let mut ones = Vec::new();
        for i1 in 0..2 {
            for j1 in 0..2 {
                for i2 in 0..2 {
                    for j2 in 0..2 {
                        if net.connected((i1, j1), (i2, j2)) {
                            ones.push(((i1, j1), (i2, j2)));
                        }
                    }
                }
            }
        }
        ones.sort();
        assert_eq!(
            ones,
            vec![
                ((0, 0), (0, 0)),
                ((0, 0), (1, 1)),
                ((1, 1), (0, 0)),
                ((1, 1), (1, 1))
            ]
        );
        assert_eq!(net.gamma(), 4);
        assert!(net.is_symmetric());
    }

    #[test]
    fn excluded_self_pairs_leave_diagonal_empty() {
        let net = GbnnNetwork::store(&set(2, 2, &[&[0, 1]]), SelfPairs::Excluded);
        assert_eq!(net.connection_count(), 2);
    }

    #[test]
    fn full_universe_saturates_cross_clusters() {
        let all: Vec<Vec<Symbol>> = (0..9).map(|k| vec![k / 3, k % 3]).collect();
        let s = WordSet::new(2, Alphabet::new(3).unwrap(), &all).unwrap();
        let net = GbnnNetwork::store(&s, SelfPairs::Excluded);
        assert_eq!(net.connection_count(), 2 * 9);
    }

    #[test]
    fn gamma_lower_bound() {
        let net = GbnnNetwork::store(&set(2, 2, &[&[0, 1]]), SelfPairs::Included);
        assert!(net.clone().with_gamma(3).is_err());
        assert!(net.with_gamma(4).is_ok());
    }

    #[test]
    fn retrieve_examples() {
        let net = GbnnNetwork::store(&set(2, 2, &[&[0, 1], &[1, 0]]), SelfPairs::Included);
        let res = net
            .retrieve(
                &PartialWord::new([Some(0), None]),
                1,
                None,
                &mut rng::seeded(0),
            )
            .unwrap();
        assert_eq!(res.word, Some(Word(vec![0, 1])));
        assert_eq!(res.status, Status::Unique);
        assert_eq!(res.op_count, 16);

        let s = set(3, 2, &[&[1, 0, 1]]);
        let net = GbnnNetwork::store(&s, SelfPairs::Included);
        let act = net
            .activate(&PartialWord::from_word(&[1, 0, 1]), 5)
            .unwrap();
        assert!(act.converged);
        assert_eq!(act.iterations, 1);
        assert_eq!(act.active, vec![vec![1], vec![0], vec![1]]);
    }

    #[test]
    fn symmetric_tie_splits_evenly() {
        let s = set(2, 3, &[&[0, 1], &[0, 2]]);
        let net = GbnnNetwork::store(&s, SelfPairs::Included);
        let q = PartialWord::new([Some(0), None]);
        let trials = 10_000;
        let mut ones = 0;
        for seed in 0..trials {
            let res = net
                .retrieve(&q, 1, Some(&s), &mut rng::seeded(seed))
                .unwrap();
            assert_eq!(res.status, Status::Ambiguous);
            if res.word == Some(Word(vec![0, 1])) {
                ones += 1;
            }
        }
        assert!((ones as f64 / trials as f64 - 0.5).abs() <= 0.02);
    }

    #[test]
    fn mismatch_when_decoded_word_not_stored() {
        let s = set(3, 2, &[&[0, 0, 0], &[1, 1, 1]]);
        let net = GbnnNetwork::store(&s, SelfPairs::Included);
        // both letters of cluster 1 score 1; either choice yields 001 or 011
        let q = PartialWord::new([Some(0), None, Some(1)]);
        let res = net.retrieve(&q, 1, Some(&s), &mut rng::seeded(1)).unwrap();
        assert_eq!(res.status, Status::Mismatch);
        assert_eq!(res.candidate_count, Some(2));
        assert!(net.activate(&PartialWord::all_erased(3), 0).is_err());
    }
}
