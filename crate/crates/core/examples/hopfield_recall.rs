//! Hopfield network over the binary expansion of each symbol.

use assocmem::hopfield::{encode_bipolar, DiagonalMode, HopfieldMemory};
use assocmem::{rng, sample_word_set, Alphabet, PartialWord};

fn main() -> assocmem::Result<()> {
    let alphabet = Alphabet::new(2)?;
    let mut r = rng::seeded(3);
    for m in [1, 3, 8] {
        let set = sample_word_set(alphabet, 64, m, &mut r)?;
        let mem = HopfieldMemory::store(set.clone(), DiagonalMode::Summed);
        let q = (0..16).fold(PartialWord::from_word(set.word(0)), |q, i| q.with_erased(i));
        let (res, traj) = mem.retrieve_word(&q);
        let target = encode_bipolar(set.word(0), alphabet);
        let flipped = traj
            .state
            .iter()
            .zip(&target)
            .filter(|(a, b)| a != b)
            .count();
        println!(
            "m = {m}: {} after {} update(s), {flipped} of 64 bits wrong, converged = {}",
            res.status, traj.iterations, traj.converged
        );
    }
    Ok(())
}
