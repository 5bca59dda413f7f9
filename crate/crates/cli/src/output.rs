use std::io::{self, Write};

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A float written with 17 significant digits, so it reads back exactly.
/// Non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F(pub f64);

impl F {
    pub fn text(self) -> String {
        if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            "null".to_string()
        }
    }
}

impl Serialize for F {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(self.text())
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

pub fn floats(xs: &[f64]) -> Vec<F> {
    xs.iter().copied().map(F).collect()
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// CSV with a fixed header. Fields never contain commas or quotes.
pub struct Csv<'a> {
    out: &'a mut dyn Write,
}

impl<'a> Csv<'a> {
    pub fn new(out: &'a mut dyn Write, header: &[&str]) -> io::Result<Self> {
        writeln!(out, "{}", header.join(","))?;
        Ok(Self { out })
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        writeln!(self.out, "{}", fields.join(","))
    }
}
