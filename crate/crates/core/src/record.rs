//! Result rows and the on-disk result format.
//!
//! A result file is a header record, any number of solution records and an
//! optional summary record. JSON-lines files carry one JSON object per line;
//! CSV files carry the header as a `#` comment line followed by a normal CSV
//! table with the `n,s_n,s_n2,bits` columns.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bigbits::BitInt;
use crate::error::{Error, Result};

pub const SCHEMA: &str = "binsquare.results";
pub const SCHEMA_VERSION: u32 = 1;

/// One found `n` with its weight, square weight and bit length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub n: BitInt,
    #[serde(rename = "s_n")]
    pub weight_n: u32,
    #[serde(rename = "s_n2")]
    pub weight_n2: u32,
    #[serde(rename = "bits")]
    pub bit_length: usize,
}

impl SolutionRecord {
    pub fn new(n: BitInt) -> Self {
        let weight_n2 = n.square().weight();
        Self::with_square_weight(n, weight_n2)
    }

    /// Record for `n` whose square weight was already computed.
    pub fn with_square_weight(n: BitInt, weight_n2: u32) -> Self {
        SolutionRecord { weight_n: n.weight(), bit_length: n.bit_len(), weight_n2, n }
    }
}

impl From<u64> for SolutionRecord {
    fn from(n: u64) -> Self {
        SolutionRecord::new(BitInt::from(n))
    }
}

/// First record of every result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultHeader {
    pub schema: String,
    pub version: u32,
    pub command: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl ResultHeader {
    pub fn new(command: impl Into<String>, params: serde_json::Value) -> Self {
        ResultHeader { schema: SCHEMA.to_string(), version: SCHEMA_VERSION, command: command.into(), params }
    }
}

/// Closing record with counts. Timing is deliberately absent so that a
/// rerun with a different thread count produces an identical file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: u64,
    /// Fraction of odd integers below the search bound that are solutions,
    /// when the search covered a full range.
    pub proportion: Option<f64>,
    pub max_n: Option<BitInt>,
    #[serde(default)]
    pub nodes_visited: u64,
    #[serde(default)]
    pub truncated: bool,
}

impl Summary {
    pub fn of(records: &[SolutionRecord], nodes_visited: u64, truncated: bool) -> Self {
        Summary {
            count: records.len() as u64,
            proportion: None,
            max_n: records.iter().map(|r| &r.n).max().cloned(),
            nodes_visited,
            truncated,
        }
    }
}

/// Output format of result files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    JsonLines,
    Csv,
}

pub struct ResultWriter<W: Write> {
    format: Format,
    out: W,
}

impl<W: Write> ResultWriter<W> {
    pub fn new(mut out: W, format: Format, header: &ResultHeader) -> Result<Self> {
        match format {
            Format::JsonLines => {
                serde_json::to_writer(&mut out, header)?;
                out.write_all(b"\n")?;
            }
            Format::Csv => {
                writeln!(out, "# {}", serde_json::to_string(header)?)?;
                writeln!(out, "n,s_n,s_n2,bits")?;
            }
        }
        Ok(ResultWriter { format, out })
    }

    pub fn record(&mut self, r: &SolutionRecord) -> Result<()> {
        match self.format {
            Format::JsonLines => {
                serde_json::to_writer(&mut self.out, r)?;
                self.out.write_all(b"\n")?;
            }
            Format::Csv => writeln!(self.out, "{},{},{},{}", r.n, r.weight_n, r.weight_n2, r.bit_length)?,
        }
        Ok(())
    }

    /// Writes the summary. In CSV files it becomes a trailing comment line.
    pub fn summary(&mut self, s: &Summary) -> Result<()> {
        #[derive(Serialize)]
        struct Tagged<'a> {
            summary: &'a Summary,
        }
        let line = serde_json::to_string(&Tagged { summary: s })?;
        match self.format {
            Format::JsonLines => writeln!(self.out, "{line}")?,
            Format::Csv => writeln!(self.out, "# {line}")?,
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Parsed result file.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultFile {
    pub header: ResultHeader,
    pub records: Vec<SolutionRecord>,
    pub summary: Option<Summary>,
}

#[derive(Deserialize)]
struct TaggedSummary {
    summary: Summary,
}

/// Reads a JSON-lines or CSV result file written by this or an older version.
pub fn read_results(input: impl BufRead) -> Result<ResultFile> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| Error::Format("empty file".into()))??;
    let (format, header_text) = match first.strip_prefix("# ") {
        Some(rest) => (Format::Csv, rest.to_string()),
        None => (Format::JsonLines, first),
    };
    let header: ResultHeader = serde_json::from_str(&header_text)?;
    if header.schema != SCHEMA {
        return Err(Error::Format(format!("unknown schema {:?}", header.schema)));
    }
    if header.version > SCHEMA_VERSION {
        return Err(Error::Format(format!("schema version {} is newer than {}", header.version, SCHEMA_VERSION)));
    }
    let mut records = Vec::new();
    let mut summary = None;
    let mut csv_body = String::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match format {
            Format::JsonLines => {
                if line.starts_with("{\"summary\"") {
                    summary = Some(serde_json::from_str::<TaggedSummary>(&line)?.summary);
                } else {
                    records.push(serde_json::from_str(&line)?);
                }
            }
            Format::Csv => match line.strip_prefix("# ") {
                Some(rest) => summary = Some(serde_json::from_str::<TaggedSummary>(rest)?.summary),
                None => {
                    csv_body.push_str(&line);
                    csv_body.push('\n');
                }
            },
        }
    }
    if format == Format::Csv {
        let mut reader = csv::Reader::from_reader(csv_body.as_bytes());
        for row in reader.deserialize() {
            records.push(row?);
        }
    }
    Ok(ResultFile { header, records, summary })
}
