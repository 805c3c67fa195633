use assocmem::io::{format_queries, format_word_set, parse_queries, parse_word_set};
use assocmem::{candidates, rng, sample_word_set, Alphabet, PartialWord};

fn main() -> assocmem::Result<()> {
    let set = sample_word_set(Alphabet::new(10)?, 3, 5, &mut rng::seeded(9))?;
    let text = format_word_set(&set);
    print!("{text}");
    assert_eq!(parse_word_set(&text)?, set);

    let q = PartialWord::new([None, Some(set.word(2)[1]), None]);
    let qtext = format_queries(3, set.alphabet(), std::slice::from_ref(&q));
    print!("{qtext}");
    let (_, _, parsed) = parse_queries(&qtext)?;
    for w in candidates(&set, &parsed[0]) {
        println!("matches {w}");
    }

    match parse_word_set("3 10\n1 2 3\n4 5 x\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
