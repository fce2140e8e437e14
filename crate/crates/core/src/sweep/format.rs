//! Row serialisation: CSV with C-style `%.12g` numbers, or JSON lines.

use std::io::{self, Write};
use std::str::FromStr;

use super::SweepRow;
use crate::error::Error;

pub const SWEEP_HEADER: &str = "alpha,theta,entropy,a0,b0,a_theta,b_theta,det";
pub const FIGURE_HEADER: &str = "alpha,theta,entropy";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    JsonLines,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::JsonLines),
            other => Err(Error::usage(format!("unknown format '{other}' (csv or jsonl)"))),
        }
    }
}

/// Equivalent of C's `printf("%.*g", precision, v)`.
pub fn format_g(v: f64, precision: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = precision.max(1);
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // rounding to p significant digits decides the exponent
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g12(v: f64) -> String {
    format_g(v, 12)
}

/// Writes rows as they arrive; nothing is buffered beyond the writer.
pub struct RowWriter<W: Write> {
    out: W,
    format: OutputFormat,
    full: bool,
}

impl<W: Write> RowWriter<W> {
    /// Full sweep rows (all coefficient columns).
    pub fn sweep(out: W, format: OutputFormat) -> Self {
        RowWriter { out, format, full: true }
    }

    /// Figure rows: `alpha,theta,entropy` only.
    pub fn figure(out: W, format: OutputFormat) -> Self {
        RowWriter { out, format, full: false }
    }

    pub fn write_header(&mut self) -> io::Result<()> {
        if self.format == OutputFormat::Csv {
            let header = if self.full { SWEEP_HEADER } else { FIGURE_HEADER };
            writeln!(self.out, "{header}")?;
        }
        Ok(())
    }

    pub fn write_row(&mut self, row: &SweepRow) -> io::Result<()> {
        match (self.format, self.full) {
            (OutputFormat::Csv, true) => writeln!(
                self.out,
                "{},{},{},{},{},{},{},{}",
                g12(row.alpha),
                g12(row.theta),
                g12(row.entropy),
                g12(row.a0),
                g12(row.b0),
                g12(row.a_theta),
                g12(row.b_theta),
                g12(row.det)
            ),
            (OutputFormat::Csv, false) => writeln!(
                self.out,
                "{},{},{}",
                g12(row.alpha),
                g12(row.theta),
                g12(row.entropy)
            ),
            (OutputFormat::JsonLines, true) => {
                serde_json::to_writer(&mut self.out, row)?;
                writeln!(self.out)
            }
            (OutputFormat::JsonLines, false) => {
                let short = serde_json::json!({
                    "alpha": row.alpha,
                    "theta": row.theta,
                    "entropy": row.entropy,
                });
                serde_json::to_writer(&mut self.out, &short)?;
                writeln!(self.out)
            }
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}
