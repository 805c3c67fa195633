//! Clustered clique network: one cluster per position, one neuron per
//! letter, winner-take-all within each cluster.

use assocmem::gbnn::{GbnnMemory, SelfPairs};
use assocmem::{erase, rng, sample_word_set, Alphabet, AssociativeMemory};

fn main() -> assocmem::Result<()> {
    let mut r = rng::seeded(4);
    println!("{:>6} {:>10} {:>8}", "m", "density", "errors");
    for m in [100, 400, 1600, 6400] {
        let mut errors = 0;
        let mut density = 0.0;
        for _ in 0..200 {
            let set = sample_word_set(Alphabet::new(64)?, 4, m, &mut r)?;
            let mem = GbnnMemory::store(set.clone(), SelfPairs::Included);
            density += mem.network().connection_count() as f64 / (256.0 * 256.0);
            let w = set.word(r.next_u32() as usize % m);
            let res = mem.recall(&erase(w, 2, &mut r)?, &mut r);
            errors += (res.word.as_ref().map(|x| x.symbols()) != Some(w)) as u32;
        }
        println!("{m:>6} {:>10.4} {:>8}", density / 200.0, errors);
    }
    Ok(())
}

use rand::RngCore;
