//! Trie retrieval: one trie per erasure pattern, so a query costs one node
//! visit per symbol no matter how many words are stored.

use assocmem::trie::{PathPolicy, TrieMemory, TrieMode};
use assocmem::{erase, rng, sample_word_set, Alphabet};

fn main() -> assocmem::Result<()> {
    let mut r = rng::seeded(2);
    for m in [10, 1_000, 50_000] {
        let set = sample_word_set(Alphabet::new(16)?, 6, m, &mut r)?;
        let mem = TrieMemory::build(set.clone(), TrieMode::Lazy)?;
        let q = erase(set.word(0), 2, &mut r)?;
        let res = mem.retrieve(&q, PathPolicy::LeafWeighted, &mut r);
        let stats = mem.stats();
        println!(
            "m = {m:>6}: {} candidates, {} nodes visited; {} trie(s), {} nodes, ~{:.0} bits",
            res.candidate_count.unwrap(),
            res.op_count,
            stats.trie_count,
            stats.node_count,
            stats.estimated_bits
        );
    }

    // Building every pattern up front.
    let set = sample_word_set(Alphabet::new(4)?, 8, 200, &mut r)?;
    let eager = TrieMemory::build(set, TrieMode::Eager)?.stats();
    println!(
        "eager, n = 8: {} tries, {} nodes",
        eager.trie_count, eager.node_count
    );
    Ok(())
}
