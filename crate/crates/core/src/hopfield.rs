//! Hopfield network over ±1 neurons with correlation-sum weights and
//! synchronous sign updates.
//!
//! Words over a general alphabet are bit-encoded: each symbol becomes its
//! `ceil(log2 l)`-bit big-endian expansion with 0 -> -1 and 1 -> +1. An erased
//! symbol zeroes all of its bits.

use rand::RngCore;

use crate::analytics;
use crate::memory::AssociativeMemory;
use crate::word::{Alphabet, PartialWord, RetrievalResult, Status, Symbol, Word, WordSet};

pub const DEFAULT_MAX_ITERS: usize = 10;

/// A ±1 vector; in queries 0 marks an unknown entry.
pub type BipolarWord = Vec<i8>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalMode {
    /// `M_ii = m`, the plain sum over all index pairs.
    #[default]
    Summed,
    /// `M_ii = 0`.
    Zeroed,
}

pub fn encode_bipolar(w: &[Symbol], alphabet: Alphabet) -> BipolarWord {
    encode_partial(&PartialWord::from_word(w), alphabet)
}

pub fn encode_partial(q: &PartialWord, alphabet: Alphabet) -> BipolarWord {
    let bits = alphabet.bits_per_symbol() as usize;
    let mut out = Vec::with_capacity(q.len() * bits);
    for i in 0..q.len() {
        match q.get(i) {
            None => out.extend(std::iter::repeat_n(0, bits)),
            Some(s) => out.extend(
                (0..bits)
                    .rev()
                    .map(|b| if s >> b & 1 == 1 { 1 } else { -1 }),
            ),
        }
    }
    out
}

/// Inverse of [`encode_bipolar`]; `None` if a bit group decodes to a value
/// outside the alphabet. Zero entries read as +1.
pub fn decode_bipolar(v: &[i8], alphabet: Alphabet) -> Option<Vec<Symbol>> {
    let bits = alphabet.bits_per_symbol() as usize;
    v.chunks_exact(bits)
        .map(|group| {
            let s = group
                .iter()
                .fold(0u32, |acc, &x| acc << 1 | (x >= 0) as u32);
            (s < alphabet.size()).then_some(s)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfieldNetwork {
    neurons: usize,
    // row-major, neurons x neurons
    weights: Vec<i32>,
    diagonal: DiagonalMode,
    m_stored: usize,
}

/// Result of running the synchronous dynamics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub state: BipolarWord,
    /// True when the last update left the state unchanged.
    pub converged: bool,
    /// Updates performed (matrix-vector products).
    pub iterations: usize,
    /// Index `t` of the first state with `v_{t+1} = v_t`, when one was seen.
    pub fixed_point_at: Option<usize>,
    /// The run ended in a 2-cycle `v_{t+1} = v_{t-1} != v_t`.
    pub period_two: bool,
    /// Multiply-accumulates: `iterations * neurons^2`.
    pub op_count: u64,
}

impl HopfieldNetwork {
    /// Stores bit-encoded words. Equivalent to summing outer products, but
    /// computed per weight as `m - 2 * (number of words where bits i, j differ)`
    /// over bit-packed columns.
    pub fn store(set: &WordSet, diagonal: DiagonalMode) -> Self {
        let alphabet = set.alphabet();
        let bits = alphabet.bits_per_symbol() as usize;
        let neurons = set.n() * bits;
        let m = set.m();
        let blocks = m.div_ceil(64);
        // columns[i] holds bit i of every stored word
        let mut columns = vec![0u64; neurons * blocks];
        for (k, w) in set.iter().enumerate() {
            for (pos, &s) in w.iter().enumerate() {
                for b in 0..bits {
                    if s >> (bits - 1 - b) & 1 == 1 {
                        columns[(pos * bits + b) * blocks + k / 64] |= 1 << (k % 64);
                    }
                }
            }
        }
        let mut weights = vec![0i32; neurons * neurons];
        for i in 0..neurons {
            let ci = &columns[i * blocks..(i + 1) * blocks];
            for j in i + 1..neurons {
                let cj = &columns[j * blocks..(j + 1) * blocks];
                let differ: u32 = ci.iter().zip(cj).map(|(a, b)| (a ^ b).count_ones()).sum();
                let wij = m as i32 - 2 * differ as i32;
                weights[i * neurons + j] = wij;
                weights[j * neurons + i] = wij;
            }
            if diagonal == DiagonalMode::Summed {
                weights[i * neurons + i] = m as i32;
            }
        }
        HopfieldNetwork {
            neurons,
            weights,
            diagonal,
            m_stored: m,
        }
    }

    /// Reference storage rule: the literal sum of outer products.
    pub fn store_outer_products(patterns: &[BipolarWord], diagonal: DiagonalMode) -> Self {
        let neurons = patterns.first().map_or(0, Vec::len);
        let mut weights = vec![0i32; neurons * neurons];
        for p in patterns {
            assert_eq!(p.len(), neurons, "patterns must share one length");
            for i in 0..neurons {
                for j in 0..neurons {
                    weights[i * neurons + j] += p[i] as i32 * p[j] as i32;
                }
            }
        }
        if diagonal == DiagonalMode::Zeroed {
            for i in 0..neurons {
                weights[i * neurons + i] = 0;
            }
        }
        HopfieldNetwork {
            neurons,
            weights,
            diagonal,
            m_stored: patterns.len(),
        }
    }

    pub fn neurons(&self) -> usize {
        self.neurons
    }

    pub fn m_stored(&self) -> usize {
        self.m_stored
    }

    pub fn diagonal(&self) -> DiagonalMode {
        self.diagonal
    }

    pub fn weight(&self, i: usize, j: usize) -> i32 {
        self.weights[i * self.neurons + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.neurons).all(|i| (0..i).all(|j| self.weight(i, j) == self.weight(j, i)))
    }

    /// Multiply-accumulates of the literal storage rule, `m * neurons^2`.
    pub fn store_ops(&self) -> u64 {
        (self.m_stored * self.neurons * self.neurons) as u64
    }

    /// Runs `v_{t+1} = sign(M v_t)` with `sign(0) = +1` from `query` until a
    /// fixed point or `max_iters` updates. With `clamp_known`, entries that
    /// were nonzero in the query are restored after each update.
    pub fn retrieve(&self, query: &[i8], max_iters: usize, clamp_known: bool) -> Trajectory {
        assert_eq!(
            query.len(),
            self.neurons,
            "query length must equal neuron count"
        );
        assert!(max_iters >= 1, "max_iters must be >= 1");
        let n = self.neurons;
        let mut prev: Option<BipolarWord> = None;
        let mut cur = query.to_vec();
        let mut next = vec![0i8; n];
        let mut fixed_point_at = None;
        let mut iterations = 0;
        for t in 1..=max_iters {
            for (i, out) in next.iter_mut().enumerate() {
                let row = &self.weights[i * n..(i + 1) * n];
                let h: i64 = row
                    .iter()
                    .zip(&cur)
                    .map(|(&w, &v)| w as i64 * v as i64)
                    .sum();
                *out = if h >= 0 { 1 } else { -1 };
            }
            if clamp_known {
                for (out, &q) in next.iter_mut().zip(query) {
                    if q != 0 {
                        *out = q;
                    }
                }
            }
            iterations = t;
            if next == cur {
                fixed_point_at = Some(t - 1);
                break;
            }
            let old = std::mem::replace(&mut cur, next.clone());
            prev = Some(old);
        }
        let converged = fixed_point_at.is_some();
        let period_two = !converged
            && iterations >= 2
            && prev.as_ref().is_some_and(|p| {
                // cur = v_T, prev = v_{T-1}; a 2-cycle shows as sign(M v_T) = v_{T-1}
                let mut probe = vec![0i8; n];
                for (i, out) in probe.iter_mut().enumerate() {
                    let row = &self.weights[i * n..(i + 1) * n];
                    let h: i64 = row
                        .iter()
                        .zip(&cur)
                        .map(|(&w, &v)| w as i64 * v as i64)
                        .sum();
                    *out = if h >= 0 { 1 } else { -1 };
                }
                if clamp_known {
                    for (out, &q) in probe.iter_mut().zip(query) {
                        if q != 0 {
                            *out = q;
                        }
                    }
                }
                &probe == p
            });
        Trajectory {
            state: cur,
            converged,
            iterations,
            fixed_point_at,
            period_two,
            op_count: (iterations * n * n) as u64,
        }
    }
}

/// A Hopfield network together with the word encoding it was built for.
#[derive(Debug, Clone)]
pub struct HopfieldMemory {
    net: HopfieldNetwork,
    set: WordSet,
    max_iters: usize,
    clamp_known: bool,
}

impl HopfieldMemory {
    pub fn store(set: WordSet, diagonal: DiagonalMode) -> Self {
        HopfieldMemory {
            net: HopfieldNetwork::store(&set, diagonal),
            set,
            max_iters: DEFAULT_MAX_ITERS,
            clamp_known: false,
        }
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters.max(1);
        self
    }

    pub fn with_clamp(mut self, clamp_known: bool) -> Self {
        self.clamp_known = clamp_known;
        self
    }

    pub fn network(&self) -> &HopfieldNetwork {
        &self.net
    }

    /// Encodes, iterates, decodes. `Unique` when the final state decodes to a
    /// stored word, `Mismatch` otherwise.
    pub fn retrieve_word(&self, q: &PartialWord) -> (RetrievalResult, Trajectory) {
        let alphabet = self.set.alphabet();
        let traj = self.net.retrieve(
            &encode_partial(q, alphabet),
            self.max_iters,
            self.clamp_known,
        );
        let decoded = decode_bipolar(&traj.state, alphabet);
        let stored = decoded.as_ref().is_some_and(|w| self.set.contains(w));
        let result = RetrievalResult {
            word: decoded.map(Word),
            status: if stored {
                Status::Unique
            } else {
                Status::Mismatch
            },
            candidate_count: stored.then_some(1),
            op_count: traj.op_count,
        };
        (result, traj)
    }

    /// Weight bits plus, when the diagonal is kept, its `n' * ceil(log2(m+1))`.
    pub fn memory_bits_with_diagonal(&self) -> f64 {
        let base = analytics::hnn_memory_bits(self.set.l(), self.set.n(), self.set.m());
        match self.net.diagonal {
            DiagonalMode::Zeroed => base,
            DiagonalMode::Summed => {
                base + (self.net.neurons as f64)
                    * crate::word::ceil_log2(self.set.m() as u64 + 1) as f64
            }
        }
    }
}

impl AssociativeMemory for HopfieldMemory {
    fn label(&self) -> String {
        "hopfield".into()
    }

    fn recall(&self, query: &PartialWord, _rng: &mut dyn RngCore) -> RetrievalResult {
        self.retrieve_word(query).0
    }

    fn memory_bits(&self) -> f64 {
        analytics::hnn_memory_bits(self.set.l(), self.set.n(), self.set.m())
    }

    fn store_ops(&self) -> u64 {
        self.net.store_ops()
    }
}
