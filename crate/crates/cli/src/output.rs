//! CSV and raw little-endian writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    F64le,
}

/// `printf("%.16e", v)`: 17 significant digits, signed exponent of at least
/// two digits.
pub fn c_exp(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

pub enum Column<'a> {
    Float(&'a [f64]),
    Int(&'a [usize]),
}

impl Column<'_> {
    fn len(&self) -> usize {
        match self {
            Column::Float(v) => v.len(),
            Column::Int(v) => v.len(),
        }
    }
}

/// Writes equal-length columns. CSV gets a header row; `f64le` writes the
/// rows back to back with every cell as an `f64`.
pub fn write_table<W: Write>(out: W, format: Format, header: &[&str], columns: &[Column]) -> io::Result<()> {
    debug_assert_eq!(header.len(), columns.len());
    let rows = columns.first().map_or(0, Column::len);
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let mut w = BufWriter::new(out);
    match format {
        Format::Csv => {
            writeln!(w, "{}", header.join(","))?;
            let mut line = String::new();
            for r in 0..rows {
                line.clear();
                for (i, c) in columns.iter().enumerate() {
                    if i > 0 {
                        line.push(',');
                    }
                    match c {
                        Column::Float(v) => line.push_str(&c_exp(v[r])),
                        Column::Int(v) => line.push_str(&v[r].to_string()),
                    }
                }
                writeln!(w, "{line}")?;
            }
        }
        Format::F64le => {
            for r in 0..rows {
                for c in columns {
                    let v = match c {
                        Column::Float(v) => v[r],
                        Column::Int(v) => v[r] as f64,
                    };
                    w.write_all(&v.to_le_bytes())?;
                }
            }
        }
    }
    w.flush()
}

/// Writes to `path`, or to stdout when `path` is `None` or `-`.
pub fn write_to(path: Option<&Path>, format: Format, header: &[&str], columns: &[Column]) -> Result<(), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            write_table(file, format, header, columns).map_err(|e| CliError::io(p, e))
        }
        _ => write_table(io::stdout().lock(), format, header, columns).map_err(|e| CliError::io(Path::new("-"), e)),
    }
}
