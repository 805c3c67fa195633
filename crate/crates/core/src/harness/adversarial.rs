//! Sets of single-deviation words `a^k b a^(n-k-1)` that force a reader
//! to inspect the erased position.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::word::{Alphabet, PartialWord, Symbol, Word, WordSet};

fn deviation(n: usize, k: usize, a: Symbol, b: Symbol) -> Vec<Symbol> {
    let mut w = vec![a; n];
    w[k] = b;
    w
}

/// All words with one position `k` holding `b` on an all-`a` background,
/// over every `k` and ordered pair `a != b`, with duplicates removed.
pub fn adversarial_set(l: u32, n: usize) -> Result<WordSet> {
    let alphabet = Alphabet::new(l)?;
    if n < 2 {
        return Err(Error::arg("adversarial set needs n >= 2"));
    }
    let mut words = BTreeSet::new();
    for k in 0..n {
        for a in 0..l {
            for b in (0..l).filter(|&b| b != a) {
                words.insert(deviation(n, k, a, b));
            }
        }
    }
    WordSet::new(n, alphabet, &words.into_iter().collect::<Vec<_>>())
}

/// For every construction word, the query erasing its unique `b`.
pub fn adversarial_queries(l: u32, n: usize) -> Result<Vec<(Word, PartialWord)>> {
    Alphabet::new(l)?;
    let mut out = Vec::new();
    for k in 0..n {
        for a in 0..l {
            for b in (0..l).filter(|&b| b != a) {
                let w = deviation(n, k, a, b);
                let q = PartialWord::from_word(&w).with_erased(k);
                out.push((Word(w), q));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::candidates;

    #[test]
    fn small_instances() {
        let s = adversarial_set(2, 3).unwrap();
        let words: Vec<_> = s.iter().map(|w| w.to_vec()).collect();
        assert_eq!(
            words,
            vec![
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![1, 0, 0],
                vec![1, 0, 1],
                vec![1, 1, 0]
            ]
        );
        let s = adversarial_set(2, 2).unwrap();
        assert_eq!(s.m(), 2);
        assert_eq!(adversarial_set(3, 4).unwrap().m(), 4 * 3 * 2);
    }

    #[test]
    fn binary_queries_are_singletons() {
        for n in 2..=8 {
            let s = adversarial_set(2, n).unwrap();
            for (w, q) in adversarial_queries(2, n).unwrap() {
                assert_eq!(candidates(&s, &q), vec![w]);
            }
        }
    }
}
