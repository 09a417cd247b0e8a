//! CSV tables with a leading metadata comment.

use std::io::Write;

use aztec::lattice::Weight;

#[derive(Debug, Clone, PartialEq)]
pub struct StatsTable {
    pub n: usize,
    pub a: Weight,
    pub k: Option<f64>,
    pub samples: usize,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl StatsTable {
    pub fn new(n: usize, a: &Weight, columns: &[&'static str]) -> Self {
        StatsTable {
            n,
            a: a.clone(),
            k: None,
            samples: 0,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// The metadata line `# n=.. a=.. k=.. samples=..` (with `k` empty when
    /// it does not apply), then a header and the rows.
    pub fn write(&self, out: &mut impl Write) -> anyhow::Result<()> {
        let k = self.k.map(|k| k.to_string()).unwrap_or_default();
        writeln!(out, "# n={} a={} k={k} samples={}", self.n, self.a, self.samples)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}
