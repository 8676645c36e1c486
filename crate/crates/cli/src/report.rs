//! Plain-text reports: `key: value` lines, two-space indentation for nested
//! entries, fixed-precision numbers so output is byte-stable.

use std::fmt::Write;

use contraction_models::linalg::CMat;
use num_complex::Complex64;

#[derive(Default)]
pub struct Report {
    out: String,
    depth: usize,
}

pub fn num(x: f64) -> String {
    // avoid printing "-0.000000000000"
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12}")
}

pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

pub fn complex(z: Complex64) -> String {
    format!("[{}, {}]", num(z.re), num(z.im))
}

pub fn matrix(m: &CMat) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| format!("[{}]", r.iter().map(|z| complex(*z)).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{:indent$}{key}: {value}", "", indent = 2 * self.depth);
    }

    pub fn open(&mut self, key: &str) {
        let _ = writeln!(self.out, "{:indent$}{key}:", "", indent = 2 * self.depth);
        self.depth += 1;
    }

    /// Starts a list entry `- key: value`; following lines nest under it.
    pub fn item(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{:indent$}- {key}: {value}", "", indent = 2 * self.depth);
        self.depth += 1;
    }

    pub fn close(&mut self) {
        self.depth = self.depth.saturating_sub(1);
    }

    pub fn finish(self) -> String {
        self.out
    }
}
