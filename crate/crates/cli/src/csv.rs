//! Two-column CSV with LF line endings and 17 significant digits.

use std::fmt::Write;

pub(crate) enum Cell {
    Int(usize),
    Real(f64),
}

/// `x` with 17 significant digits, e.g. `6.9314718055994529e-1`.
pub(crate) fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn render(key: &str, value: &str, rows: impl Iterator<Item = (Cell, f64)>) -> String {
    let mut out = format!("{key},{value}\n");
    for (cell, v) in rows {
        match cell {
            Cell::Int(i) => write!(out, "{i}"),
            Cell::Real(t) => write!(out, "{}", real(t)),
        }
        .expect("write to String");
        writeln!(out, ",{}", real(v)).expect("write to String");
    }
    out
}
