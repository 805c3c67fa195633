//! Maximum-likelihood retrieval by scanning the stored set, and the exact
//! success probability of that set under random erasures.

use assocmem::exact::{exact_success_probability, BruteForceMemory, TiePolicy};
use assocmem::{rng, sample_word_set, Alphabet, PartialWord, Word};

fn main() -> assocmem::Result<()> {
    let mut r = rng::seeded(1);
    let set = sample_word_set(Alphabet::new(4)?, 5, 40, &mut r)?;
    let mem = BruteForceMemory::store(set.clone(), None)?;

    let stored = set.word(7);
    let query = PartialWord::from_word(stored).with_erased(1).with_erased(3);
    let res = mem.retrieve(&query, TiePolicy::UniformRandom, &mut r);
    println!("query     {query}");
    println!("stored    {}", Word(stored.to_vec()));
    println!(
        "retrieved {} ({}, {} candidates, {} comparisons)",
        res.word.unwrap(),
        res.status,
        res.candidate_count.unwrap(),
        res.op_count
    );

    for erased in 0..=3 {
        let p = exact_success_probability(&set, erased)?;
        println!("r = {erased}: P(success) = {p}");
    }
    Ok(())
}
