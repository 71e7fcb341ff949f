//! CSV tables with fixed headers.
//!
//! Reals are written with 17 significant digits. `inf` marks an infinite
//! value and `na` a value that does not exist. Footer lines start with `#`.

use std::io::Write;

use crate::error::Result;

pub const ANALYZE_HEADER: [&str; 14] = [
    "k",
    "q",
    "alpha",
    "beta",
    "alpha_I",
    "alpha_II",
    "beta_I",
    "beta_II",
    "d",
    "q_c",
    "method",
    "iterations",
    "residual",
    "beta_positive",
];

pub const SIMULATE_HEADER: [&str; 10] = [
    "experiment",
    "model",
    "statistic",
    "k",
    "t",
    "n",
    "mean",
    "stderr",
    "exact_target",
    "z",
];

pub fn real(x: f64) -> String {
    if x.is_nan() {
        "na".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map_or_else(|| "na".into(), real)
}

/// Parses a cell written by [`real`]; `None` for `na`.
pub fn parse_real(cell: &str) -> Option<f64> {
    match cell {
        "na" => None,
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        s => s.parse().ok(),
    }
}

/// A table of string cells plus `#` footer lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<(String, String)>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn footer(&mut self, key: &str, value: String) {
        self.footer.push((key.into(), value));
    }

    pub fn write_to(&self, out: impl Write) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let mut out = w.into_inner().map_err(|e| e.into_error())?;
        for (key, value) in &self.footer {
            writeln!(out, "# {key},{value}")?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [
            0.0,
            1.0,
            1.0 / 3.0,
            0.1316,
            1e-300,
            123456789.123,
            f64::MIN_POSITIVE,
        ] {
            let s = real(x);
            assert_eq!(parse_real(&s), Some(x), "{s}");
        }
        assert_eq!(real(f64::INFINITY), "inf");
        assert_eq!(opt_real(None), "na");
        assert_eq!(real(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn footer_follows_rows() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![real(1.0), "x".into()]);
        t.footer("esssup", real(0.25));
        let text = String::from_utf8(t.to_bytes()).unwrap();
        assert_eq!(
            text,
            "a,b\n1.0000000000000000e0,x\n# esssup,2.5000000000000000e-1\n"
        );
    }
}
