//! Text format for word sets and query files.
//!
//! ```text
//! 4 256          <- header: n l
//! 12 0 255 7     <- one word per line, symbols separated by whitespace
//! 12 ? 255 ?     <- query files may use `?` for an erased symbol
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{Alphabet, PartialWord, Symbol, WordSet, ERASED};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<(usize, Alphabet)> {
    let (line, text) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `n l` header"))?;
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(line, "header must be `n l`"));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| parse_err(line, format!("bad word length `{}`", fields[0])))?;
    let l: u32 = fields[1]
        .parse()
        .map_err(|_| parse_err(line, format!("bad alphabet size `{}`", fields[1])))?;
    if n == 0 {
        return Err(parse_err(line, "word length must be >= 1"));
    }
    let alphabet = Alphabet::new(l).map_err(|e| parse_err(line, e.to_string()))?;
    Ok((n, alphabet))
}

fn parse_row(
    line: usize,
    text: &str,
    n: usize,
    alphabet: Alphabet,
    allow_erasure: bool,
) -> Result<Vec<Symbol>> {
    let row = text
        .split_whitespace()
        .map(|tok| {
            if tok == "?" {
                return if allow_erasure {
                    Ok(ERASED)
                } else {
                    Err(parse_err(
                        line,
                        "erasures are not allowed in a word-set file",
                    ))
                };
            }
            let s: Symbol = tok
                .parse()
                .map_err(|_| parse_err(line, format!("bad symbol `{tok}`")))?;
            if s >= alphabet.size() {
                return Err(parse_err(
                    line,
                    format!("symbol {s} outside alphabet of size {}", alphabet.size()),
                ));
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    if row.len() != n {
        return Err(parse_err(
            line,
            format!("expected {n} symbols, found {}", row.len()),
        ));
    }
    Ok(row)
}

pub fn parse_word_set(text: &str) -> Result<WordSet> {
    let mut lines = content_lines(text);
    let (n, alphabet) = parse_header(&mut lines)?;
    let mut words = Vec::new();
    let mut last_line = 1;
    for (line, row) in lines {
        words.push(parse_row(line, row, n, alphabet, false)?);
        last_line = line;
    }
    WordSet::new(n, alphabet, &words).map_err(|e| parse_err(last_line, e.to_string()))
}

/// Parses a query file; returns the header and the partial words.
pub fn parse_queries(text: &str) -> Result<(usize, Alphabet, Vec<PartialWord>)> {
    let mut lines = content_lines(text);
    let (n, alphabet) = parse_header(&mut lines)?;
    let queries = lines
        .map(|(line, row)| parse_row(line, row, n, alphabet, true).map(PartialWord::from_raw))
        .collect::<Result<Vec<_>>>()?;
    Ok((n, alphabet, queries))
}

pub fn format_word_set(set: &WordSet) -> String {
    let mut out = format!("{} {}\n", set.n(), set.l());
    for w in set.iter() {
        let row: Vec<String> = w.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn format_queries(n: usize, alphabet: Alphabet, queries: &[PartialWord]) -> String {
    let mut out = format!("{n} {}\n", alphabet.size());
    for q in queries {
        let _ = writeln!(out, "{q}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let set = parse_word_set("2 4\n1 2\n\n# note\n1 3\n").unwrap();
        assert_eq!(set.m(), 2);
        assert_eq!(format_word_set(&set), "2 4\n1 2\n1 3\n");
        let (n, _, qs) = parse_queries("2 4\n? 3\n1 ?\n").unwrap();
        assert_eq!(n, 2);
        assert_eq!(qs[0].get(0), None);
        assert_eq!(qs[0].get(1), Some(3));
    }

    #[test]
    fn errors_name_the_line() {
        match parse_word_set("2 4\n1 2\n1 9\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_word_set("2 4\n1 2 3\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_word_set("2 4\n1 ?\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_word_set("2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_word_set("2 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
