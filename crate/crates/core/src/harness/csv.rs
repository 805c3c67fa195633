//! Minimal CSV emission: `#` provenance lines, a header, then rows.

use std::io::Write;

/// A row type with a fixed column schema.
pub trait CsvRow {
    fn header() -> &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub(crate) fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x}")
    }
}

pub(crate) fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn to_csv<R: CsvRow>(comments: &[(String, String)], rows: &[R]) -> String {
    let mut out = String::new();
    for (k, v) in comments {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(&R::header().join(","));
    out.push('\n');
    for r in rows {
        out.push_str(&r.fields().join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv<R: CsvRow, W: Write>(
    mut w: W,
    comments: &[(String, String)],
    rows: &[R],
) -> std::io::Result<()> {
    w.write_all(to_csv(comments, rows).as_bytes())
}
