//! Words that differ from a constant background in one place. Erasing the
//! odd symbol leaves one candidate, but only reading that position tells
//! the candidates apart from the missing all-background word.

use assocmem::harness::{adversarial_queries, adversarial_set};
use assocmem::rng;
use assocmem::trie::{PathPolicy, TrieMemory, TrieMode};

fn main() -> assocmem::Result<()> {
    let mut r = rng::seeded(0);
    for n in [3, 6, 10] {
        let set = adversarial_set(2, n)?;
        let mem = TrieMemory::build(set.clone(), TrieMode::Lazy)?;
        let worst = adversarial_queries(2, n)?
            .iter()
            .map(|(_, q)| mem.retrieve(q, PathPolicy::LeafWeighted, &mut r).op_count)
            .max()
            .unwrap();
        println!(
            "n = {n:>2}: {} words, worst trie cost {worst} nodes",
            set.m()
        );
    }
    Ok(())
}
