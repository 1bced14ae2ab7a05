use std::io::Write;
use std::path::Path;

use oscint::Complex64;

/// Buffered CSV table, written in one go so output order never depends on
/// evaluation order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, sink: W) -> anyhow::Result<()> {
        let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(sink);
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn emit(&self, out: Option<&Path>) -> anyhow::Result<()> {
        match out {
            Some(path) => self.write_to(std::fs::File::create(path)?),
            None => self.write_to(std::io::stdout().lock()),
        }
    }
}

/// Shortest representation that reads back to the same value.
pub fn fmt_real(x: f64) -> String {
    format!("{x}")
}

/// `re+imj` with 17 significant digits in each part.
pub fn fmt_complex(z: Complex64) -> String {
    // adding zero folds -0 into +0
    let (re, im) = (z.re + 0.0, z.im + 0.0);
    let sign = if im.is_sign_negative() { "" } else { "+" };
    format!("{re:.16e}{sign}{im:.16e}j")
}
