//! Alphabet, word and erasure types shared by every memory.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};

/// A symbol of the alphabet, `0..l`.
pub type Symbol = u32;

/// Internal marker for an erased position.
pub const ERASED: Symbol = Symbol::MAX;

/// Above this universe size `sample_word_set` switches from index sampling
/// to rejection sampling of whole words.
pub const ENUMERABLE_UNIVERSE: u128 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet(u32);

impl Alphabet {
    pub fn new(size: u32) -> Result<Self> {
        if size < 2 {
            return Err(Error::arg(format!(
                "alphabet size must be >= 2, got {size}"
            )));
        }
        if size == ERASED {
            return Err(Error::arg("alphabet size collides with the erasure marker"));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> u32 {
        self.0
    }

    /// Bits needed to write one symbol, `ceil(log2 l)`.
    pub fn bits_per_symbol(self) -> u32 {
        ceil_log2(self.0 as u64)
    }

    /// `l^n`, or `None` when it does not fit in 128 bits.
    pub fn universe(self, n: usize) -> Option<u128> {
        (self.0 as u128).checked_pow(u32::try_from(n).ok()?)
    }
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// A complete word of `n` symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, self.0.iter().copied())
    }
}

fn write_symbols(f: &mut fmt::Formatter<'_>, it: impl Iterator<Item = Symbol>) -> fmt::Result {
    for (i, s) in it.enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        if s == ERASED {
            f.write_str("?")?;
        } else {
            write!(f, "{s}")?;
        }
    }
    Ok(())
}

/// A word in which some positions may be erased.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialWord(Vec<Symbol>);

impl PartialWord {
    /// Builds a partial word from optional symbols; `None` is an erasure.
    pub fn new(symbols: impl IntoIterator<Item = Option<Symbol>>) -> Self {
        PartialWord(symbols.into_iter().map(|s| s.unwrap_or(ERASED)).collect())
    }

    /// Builds a partial word from raw symbols where [`ERASED`] marks erasures.
    pub fn from_raw(symbols: Vec<Symbol>) -> Self {
        PartialWord(symbols)
    }

    pub fn from_word(w: &[Symbol]) -> Self {
        PartialWord(w.to_vec())
    }

    pub fn all_erased(n: usize) -> Self {
        PartialWord(vec![ERASED; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn raw(&self) -> &[Symbol] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<Symbol> {
        match self.0[i] {
            ERASED => None,
            s => Some(s),
        }
    }

    pub fn is_erased(&self, i: usize) -> bool {
        self.0[i] == ERASED
    }

    pub fn erased_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == ERASED).count()
    }

    /// Bit `i` set iff position `i` is erased. Requires `n <= 64`.
    pub fn erasure_mask(&self) -> u64 {
        debug_assert!(self.len() <= 64);
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == ERASED)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    /// Returns a copy with position `i` erased.
    pub fn with_erased(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] = ERASED;
        PartialWord(v)
    }

    /// True iff the complete word `w` agrees with every unerased position.
    pub fn matches(&self, w: &[Symbol]) -> bool {
        self.0.len() == w.len() && self.0.iter().zip(w).all(|(&q, &s)| q == ERASED || q == s)
    }

    /// Checks that every unerased symbol lies in the alphabet.
    pub fn validate(&self, n: usize, alphabet: Alphabet) -> Result<()> {
        if self.len() != n {
            return Err(Error::arg(format!(
                "query has length {}, expected {n}",
                self.len()
            )));
        }
        if let Some(&s) = self
            .0
            .iter()
            .find(|&&s| s != ERASED && s >= alphabet.size())
        {
            return Err(Error::arg(format!(
                "symbol {s} outside alphabet of size {}",
                alphabet.size()
            )));
        }
        Ok(())
    }
}

impl From<&Word> for PartialWord {
    fn from(w: &Word) -> Self {
        PartialWord(w.0.clone())
    }
}

impl fmt::Display for PartialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, self.0.iter().copied())
    }
}

/// Equality up to erased symbols: at every position the symbols agree or at
/// least one of them is erased.
pub fn masked_eq(a: &PartialWord, b: &PartialWord) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::arg(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.0
        .iter()
        .zip(&b.0)
        .all(|(&x, &y)| x == ERASED || y == ERASED || x == y))
}

/// A set of erased positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErasurePattern {
    positions: Vec<usize>,
    n: usize,
}

impl ErasurePattern {
    pub fn new(n: usize, mut positions: Vec<usize>) -> Result<Self> {
        positions.sort_unstable();
        positions.dedup();
        if positions.last().is_some_and(|&p| p >= n) {
            return Err(Error::arg(format!(
                "erasure position out of range for n = {n}"
            )));
        }
        Ok(ErasurePattern { positions, n })
    }

    /// Draws `r` of the `n` positions uniformly.
    pub fn sample<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> Result<Self> {
        if r > n {
            return Err(Error::arg(format!("cannot erase {r} of {n} positions")));
        }
        let mut positions = index::sample(rng, n, r).into_vec();
        positions.sort_unstable();
        Ok(ErasurePattern { positions, n })
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        ErasurePattern {
            positions: (0..n).filter(|&i| mask >> i & 1 == 1).collect(),
            n,
        }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn r(&self) -> usize {
        self.positions.len()
    }

    pub fn apply(&self, w: &[Symbol]) -> PartialWord {
        let mut v = w.to_vec();
        for &p in &self.positions {
            v[p] = ERASED;
        }
        PartialWord(v)
    }

    /// All `C(n, r)` patterns with `r` erasures, as bit masks.
    pub fn all_masks(n: usize, r: usize) -> impl Iterator<Item = u64> {
        assert!(n <= 63, "pattern masks need n <= 63");
        (0u64..1 << n).filter(move |m| m.count_ones() as usize == r)
    }
}

/// Erases exactly `r` uniformly chosen positions of `w`.
pub fn erase<R: Rng + ?Sized>(w: &[Symbol], r: usize, rng: &mut R) -> Result<PartialWord> {
    Ok(ErasurePattern::sample(w.len(), r, rng)?.apply(w))
}

/// The stored message set: `m` distinct words of length `n`.
///
/// Words live in one flat buffer in the order they were given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSet {
    n: usize,
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
    sorted: bool,
}

impl WordSet {
    pub fn new(n: usize, alphabet: Alphabet, words: &[Vec<Symbol>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("word length must be >= 1"));
        }
        let mut symbols = Vec::with_capacity(words.len() * n);
        for (i, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(Error::arg(format!(
                    "word {i} has length {}, expected {n}",
                    w.len()
                )));
            }
            if let Some(&s) = w.iter().find(|&&s| s >= alphabet.size()) {
                return Err(Error::arg(format!(
                    "word {i}: symbol {s} outside alphabet of size {}",
                    alphabet.size()
                )));
            }
            symbols.extend_from_slice(w);
        }
        let set = Self::from_flat(n, alphabet, symbols);
        if set.m() == 0 {
            return Err(Error::arg("word set must contain at least one word"));
        }
        let mut order: Vec<&[Symbol]> = set.iter().collect();
        order.sort_unstable();
        if order.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::arg("word set contains duplicate words"));
        }
        Ok(set)
    }

    /// Wraps a flat buffer already known to hold distinct, in-range words.
    pub(crate) fn from_flat(n: usize, alphabet: Alphabet, symbols: Vec<Symbol>) -> Self {
        let sorted = symbols
            .chunks_exact(n)
            .zip(symbols.chunks_exact(n).skip(1))
            .all(|(a, b)| a < b);
        WordSet {
            n,
            alphabet,
            symbols,
            sorted,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn l(&self) -> u32 {
        self.alphabet.size()
    }

    pub fn m(&self) -> usize {
        self.symbols.len() / self.n
    }

    pub fn word(&self, i: usize) -> &[Symbol] {
        &self.symbols[i * self.n..(i + 1) * self.n]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[Symbol]> + '_ {
        self.symbols.chunks_exact(self.n)
    }

    pub fn to_words(&self) -> Vec<Word> {
        self.iter().map(Word::from).collect()
    }

    /// True when words are stored in strictly increasing lexicographic order.
    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        if w.len() != self.n {
            return false;
        }
        if self.sorted {
            let (mut lo, mut hi) = (0, self.m());
            while lo < hi {
                let mid = (lo + hi) / 2;
                match self.word(mid).cmp(w) {
                    std::cmp::Ordering::Less => lo = mid + 1,
                    std::cmp::Ordering::Greater => hi = mid,
                    std::cmp::Ordering::Equal => return true,
                }
            }
            false
        } else {
            self.iter().any(|x| x == w)
        }
    }

    /// Stored indices of the words matching `q` up to erasures, in stored order.
    pub fn candidate_indices(&self, q: &PartialWord) -> Vec<usize> {
        self.iter()
            .enumerate()
            .filter(|(_, w)| q.matches(w))
            .map(|(i, _)| i)
            .collect()
    }
}

/// The stored words matching `q` up to erasures, in stored order.
pub fn candidates(set: &WordSet, q: &PartialWord) -> Vec<Word> {
    set.candidate_indices(q)
        .into_iter()
        .map(|i| Word::from(set.word(i)))
        .collect()
}

/// Decodes the big-endian base-`l` index of a word.
pub(crate) fn word_from_index(mut idx: u128, n: usize, l: u32, out: &mut [Symbol]) {
    for slot in out[..n].iter_mut().rev() {
        *slot = (idx % l as u128) as Symbol;
        idx /= l as u128;
    }
}

/// Draws `m` distinct words uniformly without replacement, so that every
/// `m`-subset of the `l^n` words is equally likely. The result is stored in
/// lexicographic order.
pub fn sample_word_set<R: Rng + ?Sized>(
    alphabet: Alphabet,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<WordSet> {
    if n == 0 || m == 0 {
        return Err(Error::arg("need n >= 1 and m >= 1"));
    }
    let l = alphabet.size();
    let universe = alphabet.universe(n);
    if let Some(u) = universe {
        if m as u128 > u {
            return Err(Error::arg(format!(
                "cannot draw {m} distinct words from {l}^{n} = {u}"
            )));
        }
    }
    let mut symbols = vec![0; m * n];
    match universe {
        Some(u) if u <= ENUMERABLE_UNIVERSE => {
            let mut picks = index::sample(rng, u as usize, m).into_vec();
            picks.sort_unstable();
            for (chunk, idx) in symbols.chunks_exact_mut(n).zip(picks) {
                word_from_index(idx as u128, n, l, chunk);
            }
        }
        Some(u) => {
            let mut seen = HashSet::with_capacity(m);
            let mut picks = Vec::with_capacity(m);
            while picks.len() < m {
                let idx = rng.gen_range(0..u);
                if seen.insert(idx) {
                    picks.push(idx);
                }
            }
            picks.sort_unstable();
            for (chunk, idx) in symbols.chunks_exact_mut(n).zip(picks) {
                word_from_index(idx, n, l, chunk);
            }
        }
        None => {
            let mut seen: HashSet<Vec<Symbol>> = HashSet::with_capacity(m);
            while seen.len() < m {
                seen.insert((0..n).map(|_| rng.gen_range(0..l)).collect());
            }
            let mut words: Vec<Vec<Symbol>> = seen.into_iter().collect();
            words.sort_unstable();
            for (chunk, w) in symbols.chunks_exact_mut(n).zip(words) {
                chunk.copy_from_slice(&w);
            }
        }
    }
    Ok(WordSet::from_flat(n, alphabet, symbols))
}

/// Outcome category of a retrieval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Exactly one stored word is consistent with the query.
    Unique,
    /// Several words are consistent; one was chosen.
    Ambiguous,
    /// No stored word is consistent with the query.
    NoMatch,
    /// A network settled on a state that is not a stored word.
    Mismatch,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Unique => "Unique",
            Status::Ambiguous => "Ambiguous",
            Status::NoMatch => "NoMatch",
            Status::Mismatch => "Mismatch",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetrievalResult {
    pub word: Option<Word>,
    pub status: Status,
    pub candidate_count: Option<u64>,
    /// Elementary operations spent; the unit depends on the memory.
    pub op_count: u64,
}

impl RetrievalResult {
    pub fn no_match(candidate_count: Option<u64>, op_count: u64) -> Self {
        RetrievalResult {
            word: None,
            status: Status::NoMatch,
            candidate_count,
            op_count,
        }
    }
}
