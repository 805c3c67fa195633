//! Associative memories that retrieve stored words from erased queries.
//!
//! Four memories share one query model, [`PartialWord`]:
//!
//! * [`exact::BruteForceMemory`] scans the stored set and is maximum likelihood.
//! * [`trie::TrieMemory`] is also maximum likelihood, with retrieval cost
//!   linear in the word length, paid for with one trie per erasure pattern.
//! * [`hopfield::HopfieldMemory`] and [`gbnn::GbnnMemory`] are neural
//!   approximations with compact state.
//!
//! [`analytics`] holds the closed forms for expected error, capacity and set
//! entropy, and [`harness`] runs seeded Monte Carlo experiments comparing
//! the memories against them.

pub mod analytics;
pub mod error;
pub mod exact;
pub mod gbnn;
pub mod harness;
pub mod hopfield;
pub mod io;
pub mod memory;
pub mod rng;
pub mod trie;
pub mod word;

pub use error::{Error, Result};
pub use memory::AssociativeMemory;
pub use word::{
    candidates, erase, masked_eq, sample_word_set, Alphabet, ErasurePattern, PartialWord,
    RetrievalResult, Status, Symbol, Word, WordSet,
};
