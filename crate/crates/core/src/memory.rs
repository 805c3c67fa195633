use rand::RngCore;

use crate::word::{PartialWord, RetrievalResult};

/// Common surface of every associative memory, used by the harness and CLI.
pub trait AssociativeMemory: Send + Sync {
    /// Short label for result tables.
    fn label(&self) -> String;

    /// Retrieves a word using the memory's configured policies.
    fn recall(&self, query: &PartialWord, rng: &mut dyn RngCore) -> RetrievalResult;

    /// Bits needed to hold the memory's state under its accounting model.
    fn memory_bits(&self) -> f64;

    /// Elementary operations spent while storing.
    fn store_ops(&self) -> u64;
}
