//! Matrix file I/O.
//!
//! Two input forms are accepted:
//!
//! - plain text: first token is the order `n`, followed by `n*n`
//!   whitespace-separated reals in row-major order;
//! - a JSON document `{"order": n, "entries": [...]}` with a row-major
//!   entries array.
//!
//! Output is always the plain-text form, one row per line. Integer-valued
//! entries are rendered without a decimal point so the structured families
//! round-trip bit-exactly and diff cleanly; everything else is written with
//! 17 significant digits, which reparses to the identical double.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;

pub struct RawMatrix {
    pub order: usize,
    pub entries: Vec<f64>,
}

#[derive(Deserialize)]
struct MatrixDoc {
    order: usize,
    entries: Vec<f64>,
}

pub fn read_matrix(path: &Path) -> Result<RawMatrix, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_matrix(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_matrix(text: &str) -> Result<RawMatrix, String> {
    if text.trim_start().starts_with('{') {
        let doc: MatrixDoc =
            serde_json::from_str(text).map_err(|e| format!("invalid matrix document: {e}"))?;
        check_count(doc.order, doc.entries.len())?;
        return Ok(RawMatrix {
            order: doc.order,
            entries: doc.entries,
        });
    }
    let mut tokens = text.split_whitespace();
    let order: usize = tokens
        .next()
        .ok_or("empty matrix file")?
        .parse()
        .map_err(|e| format!("invalid order token: {e}"))?;
    let mut entries = Vec::with_capacity(order.saturating_mul(order));
    for tok in tokens {
        let v: f64 = tok
            .parse()
            .map_err(|e| format!("invalid entry {tok:?}: {e}"))?;
        entries.push(v);
    }
    check_count(order, entries.len())?;
    Ok(RawMatrix { order, entries })
}

fn check_count(order: usize, len: usize) -> Result<(), String> {
    if order == 0 {
        return Err("order must be positive".into());
    }
    let expect = order
        .checked_mul(order)
        .ok_or_else(|| "order overflows".to_string())?;
    if len != expect {
        return Err(format!("expected {expect} entries for order {order}, got {len}"));
    }
    Ok(())
}

/// Largest integer range where every value is exactly representable.
const INT_EXACT: f64 = 9.007_199_254_740_992e15;

pub fn format_value(v: f64) -> String {
    if v == v.trunc() && v.abs() < INT_EXACT {
        format!("{}", v as i64)
    } else {
        format!("{:.16e}", v)
    }
}

pub fn write_matrix<W: Write>(
    w: &mut W,
    order: usize,
    entry: impl Fn(usize, usize) -> f64,
) -> std::io::Result<()> {
    writeln!(w, "{order}")?;
    let mut line = String::new();
    for i in 0..order {
        line.clear();
        for j in 0..order {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format_value(entry(i, j)));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}
