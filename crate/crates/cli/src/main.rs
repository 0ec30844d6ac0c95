//! `binsquare`: command-line front end for the binsquare search engine.

mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use binsquare::candidate::{self, CandidateOptions, SearchOrder, Variant, ZeroGuard};
use binsquare::enumerate::{self, BoundConvention, DeltaQuery, PairQuery, ScanQuery, SearchOptions};
use binsquare::record::{ResultHeader, Summary};
use binsquare::structure::{builtin_families, verify_family, Expectation, Family};

use output::{OutputFormat, Sink};

static CANCEL: AtomicBool = AtomicBool::new(false);

/// Exit status for arguments that fail validation.
const EXIT_USAGE: u8 = 1;
/// Exit status for a check that ran and failed.
const EXIT_CHECK_FAILED: u8 = 2;
/// Exit status after Ctrl-C, once partial results are written.
const EXIT_INTERRUPTED: u8 = 130;

#[derive(Parser, Debug)]
#[command(name = "binsquare", version, about = "Searches and checks for equations on the binary digit sum of n and n^2")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "BINSQUARE_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Result file; standard output when absent.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Jsonl)]
    format: OutputFormat,
    /// Width of the low-bit prefilter on n^2.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..=64))]
    window: u32,
    /// Append a summary record to the result file.
    #[arg(long, global = true)]
    summary: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Odd n < 2^max-bits with s(n) = l1 and s(n^2) <= l2.
    Delta {
        #[arg(long)]
        l1: u32,
        #[arg(long)]
        l2: u32,
        #[arg(long)]
        max_bits: u32,
        /// Restrict to odd n whose second set bit is at position a.
        #[arg(long)]
        a: Option<u32>,
    },
    /// Odd n < 2^max-bits with s(n) = s(n^2) = k.
    Scan {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_bits: u32,
    },
    /// Two-block pair search over the rows of a product table.
    Pair {
        #[arg(long)]
        k: u32,
        /// s(x1 x0) of the table.
        #[arg(long, default_value_t = 2)]
        product_weight: u32,
        #[arg(long, value_enum, default_value_t = ConventionArg::Published)]
        convention: ConventionArg,
        /// Only the row with s(x1) equal to this.
        #[arg(long)]
        row: Option<u32>,
    },
    /// Candidate-word search for one shape of n with s(n^2) in {4, 5}.
    MaxInteger {
        /// Bound on s(n).
        #[arg(long)]
        lambda: u32,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Shift l of s4-main; all shifts up to 2*lambda when absent.
        #[arg(long)]
        ell: Option<u32>,
        /// Shift l1 of s5-c.
        #[arg(long)]
        ell1: Option<u32>,
        /// Shift l2 of s5-a and s5-c.
        #[arg(long)]
        ell2: Option<u32>,
        #[arg(long, value_enum, default_value_t = GuardArg::Run)]
        guard: GuardArg,
        #[arg(long, value_enum, default_value_t = OrderArg::DepthFirst)]
        order: OrderArg,
        /// Longest word extended; required with --guard none.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Odd n with s(n^2) = k and from <= s(n) <= lambda.
    ESet {
        #[arg(long, value_parser = clap::value_parser!(u32).range(4..=5))]
        k: u32,
        #[arg(long)]
        lambda: u32,
        /// Smallest s(n) reported; defaults to lambda.
        #[arg(long)]
        from: Option<u32>,
    },
    /// Runs built-in check suites; exits with status 2 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
    /// Evaluates infinite families and checks their claimed digit sums.
    Family {
        /// Index into the built-in list; all built-ins when absent.
        #[arg(long, conflicts_with_all = ["c1", "c0"])]
        index: Option<usize>,
        /// Custom family c1*2^(t+shift)+c0.
        #[arg(long, requires = "c0")]
        c1: Option<u64>,
        #[arg(long, requires = "c1")]
        c0: Option<u64>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
        #[arg(long)]
        t_min: Option<u32>,
        #[arg(long, default_value_t = 200)]
        t_max: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Published,
    Product,
    ColumnMax,
    PerFactor,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    S4Main,
    #[value(name = "s5-a")]
    S5A,
    #[value(name = "s5-b")]
    S5B,
    #[value(name = "s5-c")]
    S5C,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GuardArg {
    Run,
    Half,
    None,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    DepthFirst,
    DepthFirstOnesFirst,
    BreadthFirst,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let _ = ctrlc::set_handler(|| CANCEL.store(true, Ordering::SeqCst));
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.global.threads {
        pool = pool.num_threads(t as usize);
    }
    let pool = pool.build().context("building thread pool")?;
    let started = Instant::now();
    let code = pool.install(|| dispatch(&cli))?;
    eprintln!("wall time: {:.3} s", started.elapsed().as_secs_f64());
    Ok(code)
}

fn search_options(g: &Global) -> SearchOptions<'static> {
    SearchOptions { window: g.window, cancel: Some(&CANCEL), ..Default::default() }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match &cli.command {
        Command::Delta { l1, l2, max_bits, a } => {
            let mut q = DeltaQuery::new(*l1, *l2, *max_bits)?;
            if let Some(a) = a {
                q = q.partition(*a)?;
            }
            let out = enumerate::delta_set_with(&q, &search_options(g))?;
            let header = ResultHeader::new("delta", json!({ "l1": l1, "l2": l2, "max_bits": max_bits, "a": a, "window": g.window }));
            let mut summary = Summary::of(&out.records, out.stats.enumerated, out.truncated);
            if a.is_none() && !out.truncated {
                summary.proportion = Some(out.proportion(*max_bits));
            }
            report_stats(&out.stats, out.records.len());
            write_records(g, &header, &out.records, summary)?;
        }
        Command::Scan { k, max_bits } => {
            let q = ScanQuery::new(*k, *max_bits)?;
            let out = enumerate::scan_with(&q, &search_options(g))?;
            let header = ResultHeader::new("scan", json!({ "k": k, "max_bits": max_bits, "window": g.window }));
            let mut summary = Summary::of(&out.records, out.stats.enumerated, out.truncated);
            if !out.truncated {
                summary.proportion = Some(out.proportion(*max_bits));
            }
            report_stats(&out.stats, out.records.len());
            write_records(g, &header, &out.records, summary)?;
        }
        Command::Pair { k, product_weight, convention, row } => {
            let convention = match convention {
                ConventionArg::Published => BoundConvention::published(*k, *product_weight),
                ConventionArg::Product => BoundConvention::Product,
                ConventionArg::ColumnMax => BoundConvention::ColumnMax,
                ConventionArg::PerFactor => BoundConvention::PerFactor,
            };
            let rows: Vec<PairQuery> = enumerate::pair_table(*k, *product_weight, convention)?
                .into_iter()
                .filter(|q| row.is_none_or(|r| q.high.weight == r))
                .collect();
            if rows.is_empty() {
                bail!("no table row with s(x1) = {}", row.unwrap_or_default());
            }
            let header = ResultHeader::new("pair", json!({ "k": k, "product_weight": product_weight, "convention": convention }));
            let mut sink = Sink::open(g.output.as_deref(), g.format)?;
            sink.pair_header(&header)?;
            let mut truncated = false;
            for q in &rows {
                let out = enumerate::pair_search_with(q, &search_options(g))?;
                eprintln!(
                    "row s(x1)={} s(x0)={} bits={}: |high|={} |low|={} pairs={} solutions={}",
                    q.high.weight,
                    q.low.weight,
                    q.high.max_bits,
                    out.high_size,
                    out.low_size,
                    out.pairs_checked,
                    out.solutions.len()
                );
                sink.pair_row(q, &out)?;
                truncated |= out.truncated;
                if truncated {
                    break;
                }
            }
            if truncated {
                eprintln!("interrupted: partial results written");
            }
            sink.finish()?;
        }
        Command::MaxInteger { lambda, variant, ell, ell1, ell2, guard, order, max_len } => {
            let b = candidate::shift_bound(*lambda);
            let variants: Vec<Variant> = match variant {
                VariantArg::S4Main => shifts(*ell, 1, b).map(|ell| Variant::S4Main { ell }).collect(),
                VariantArg::S5A => shifts(*ell2, 2, b).map(|ell2| Variant::S5A { ell2 }).collect(),
                VariantArg::S5B => vec![Variant::S5B],
                VariantArg::S5C => {
                    let l2: Vec<u32> = shifts(*ell2, 1, b).collect();
                    shifts(*ell1, 2, b).flat_map(|ell1| l2.iter().map(move |&ell2| Variant::S5C { ell1, ell2 })).collect()
                }
            };
            let opts = CandidateOptions {
                guard: match guard {
                    GuardArg::Run => ZeroGuard::Run,
                    GuardArg::Half => ZeroGuard::Half,
                    GuardArg::None => ZeroGuard::None,
                },
                order: match order {
                    OrderArg::DepthFirst => SearchOrder::DepthFirst,
                    OrderArg::DepthFirstOnesFirst => SearchOrder::DepthFirstOnesFirst,
                    OrderArg::BreadthFirst => SearchOrder::BreadthFirst,
                },
                max_len: *max_len,
                cancel: Some(&CANCEL),
            };
            let mut records = Vec::new();
            let (mut nodes, mut max_stack, mut truncated) = (0u64, 0usize, false);
            for v in &variants {
                let out = candidate::max_integer(*lambda, *v, &opts)?;
                eprintln!("{v}: nodes={} max_stack={} solutions={}", out.stats.nodes, out.stats.max_stack, out.records.len());
                nodes += out.stats.nodes;
                max_stack = max_stack.max(out.stats.max_stack);
                truncated |= out.truncated;
                records.extend(out.records);
                if truncated {
                    break;
                }
            }
            records.sort();
            records.dedup();
            eprintln!("nodes visited: {nodes}, max stack depth: {max_stack}");
            let header = ResultHeader::new(
                "max-integer",
                json!({ "lambda": lambda, "variant": format!("{variant:?}"), "ell": ell, "ell1": ell1, "ell2": ell2, "max_len": max_len }),
            );
            write_records(g, &header, &records, Summary::of(&records, nodes, truncated))?;
        }
        Command::ESet { k, lambda, from } => {
            let from = from.unwrap_or(*lambda);
            if from == 0 || from > *lambda {
                bail!("--from must lie in 1..={lambda}");
            }
            let opts = CandidateOptions { cancel: Some(&CANCEL), ..Default::default() };
            let e = candidate::e_sets(*k, *lambda, &opts)?;
            for (l, v) in e.by_weight.range(from..=*lambda) {
                eprintln!("|E_{{{k},{l}}}| = {}", v.len());
            }
            if !e.family_members.is_empty() {
                eprintln!("{} members of the weight-3 families left out", e.family_members.len());
            }
            eprintln!("shapes: {}, nodes visited: {}, max stack depth: {}", e.variants, e.stats.nodes, e.stats.max_stack);
            let records = e.union(from, *lambda);
            let header = ResultHeader::new("e-set", json!({ "k": k, "lambda": lambda, "from": from }));
            write_records(g, &header, &records, Summary::of(&records, e.stats.nodes, e.truncated))?;
        }
        Command::Verify { suite } => {
            let mut sink = Sink::open(g.output.as_deref(), output::OutputFormat::Jsonl)?;
            let results = verify::run(*suite);
            let mut failed = 0;
            for r in &results {
                sink.line(&format!("{} {} {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail))?;
                failed += usize::from(!r.passed);
            }
            sink.line(&format!("{} checks, {} failed", results.len(), failed))?;
            sink.finish()?;
            if failed > 0 {
                return Ok(ExitCode::from(EXIT_CHECK_FAILED));
            }
        }
        Command::Family { index, c1, c0, shift, t_min, t_max } => {
            let families: Vec<Family> = match (index, c1, c0) {
                (Some(i), _, _) => {
                    let all = builtin_families();
                    let n = all.len();
                    vec![all.into_iter().nth(*i).with_context(|| format!("family index {i} out of range 0..{n}"))?]
                }
                (None, Some(c1), Some(c0)) => vec![Family::linear(*c1, *shift, *c0, t_min.unwrap_or(0), Expectation::default())],
                _ => builtin_families(),
            };
            let mut sink = Sink::open(g.output.as_deref(), g.format)?;
            let mut all_passed = true;
            for f in &families {
                let start = t_min.unwrap_or(f.t_min);
                if start > *t_max {
                    bail!("--t-min {start} exceeds --t-max {t_max}");
                }
                let report = verify_family(f, start..=*t_max)?;
                all_passed &= report.passed;
                eprintln!("{}: {}", report.family, if report.passed { "all rows pass" } else { "FAILED" });
                sink.family(&report)?;
            }
            sink.finish()?;
            if !all_passed {
                return Ok(ExitCode::from(EXIT_CHECK_FAILED));
            }
        }
    }
    if CANCEL.load(Ordering::SeqCst) {
        return Ok(ExitCode::from(EXIT_INTERRUPTED));
    }
    Ok(ExitCode::SUCCESS)
}

/// `Some(v)` alone, else `lo..=hi`.
fn shifts(fixed: Option<u32>, lo: u32, hi: u32) -> std::ops::RangeInclusive<u32> {
    match fixed {
        Some(v) => v..=v,
        None => lo..=hi,
    }
}

fn report_stats(stats: &enumerate::SearchStats, found: usize) {
    eprintln!(
        "shards: {}, enumerated: {}, prefilter rejected: {}, pruned: {}, planned: {}, solutions: {found}",
        stats.shards, stats.enumerated, stats.prefilter_rejected, stats.pruned, stats.planned
    );
}

fn write_records(g: &Global, header: &ResultHeader, records: &[binsquare::SolutionRecord], summary: Summary) -> Result<()> {
    let mut sink = Sink::open(g.output.as_deref(), g.format)?;
    sink.results(header, records, (g.summary || summary.truncated).then_some(&summary))?;
    sink.finish()?;
    if summary.truncated {
        eprintln!("interrupted: {} partial results written", records.len());
    }
    Ok(())
}
