//! Result files on disk or standard output.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::json;

use binsquare::enumerate::{PairOutcome, PairQuery};
use binsquare::record::{Format, ResultHeader, ResultWriter, Summary};
use binsquare::structure::FamilyReport;
use binsquare::SolutionRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Jsonl => Format::JsonLines,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

pub struct Sink {
    out: Box<dyn Write>,
    format: OutputFormat,
}

impl Sink {
    pub fn open(path: Option<&Path>, format: OutputFormat) -> Result<Sink> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot write {}", p.display()))?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Sink { out, format })
    }

    pub fn results(&mut self, header: &ResultHeader, records: &[SolutionRecord], summary: Option<&Summary>) -> Result<()> {
        let mut w = ResultWriter::new(&mut self.out, self.format.into(), header)?;
        for r in records {
            w.record(r)?;
        }
        if let Some(s) = summary {
            w.summary(s)?;
        }
        w.finish()?;
        Ok(())
    }

    pub fn pair_header(&mut self, header: &ResultHeader) -> Result<()> {
        match self.format {
            OutputFormat::Jsonl => writeln!(self.out, "{}", serde_json::to_string(header)?)?,
            OutputFormat::Csv => {
                writeln!(self.out, "# {}", serde_json::to_string(header)?)?;
                writeln!(self.out, "s_x1,s_x0,square_cap,max_bits,high_size,low_size,pairs_checked,solutions,truncated")?;
            }
        }
        Ok(())
    }

    pub fn pair_row(&mut self, q: &PairQuery, out: &PairOutcome) -> Result<()> {
        match self.format {
            OutputFormat::Jsonl => {
                let row = json!({
                    "row": q,
                    "high_size": out.high_size,
                    "low_size": out.low_size,
                    "pairs_checked": out.pairs_checked,
                    "solutions": out.solutions,
                    "truncated": out.truncated,
                });
                writeln!(self.out, "{row}")?;
            }
            OutputFormat::Csv => writeln!(
                self.out,
                "{},{},{},{},{},{},{},{},{}",
                q.high.weight,
                q.low.weight,
                q.high.square_cap,
                q.high.max_bits,
                out.high_size,
                out.low_size,
                out.pairs_checked,
                out.solutions.len(),
                out.truncated
            )?,
        }
        Ok(())
    }

    /// JSON lines carry the report object, CSV carries the plain table.
    pub fn family(&mut self, report: &FamilyReport) -> Result<()> {
        match self.format {
            OutputFormat::Jsonl => writeln!(self.out, "{}", serde_json::to_string(report)?)?,
            OutputFormat::Csv => write!(self.out, "{}", report.table())?,
        }
        Ok(())
    }

    pub fn line(&mut self, text: &str) -> Result<()> {
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}
