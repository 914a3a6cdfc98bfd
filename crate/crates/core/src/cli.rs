//! Batch front end: census tables, identity suites, harmonic checks and the
//! conjecture scan.
//!
//! Output is a pure function of the configuration. Table output starts with a
//! `#` header line carrying the configuration and seed; record output is one
//! JSON object per line, the first of which is the header.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::census::{census_cell, CensusReport, OracleLimit};
use crate::harmonic::{conjecture_scan, ConjectureReport};
use crate::nabla::Family;
use crate::verify::{
    forms_suites, harmonic_field_suite, harmonic_function_suite, lemma_constructed_suite,
    lemma_random_suite, nabla_suites, SuiteResult, DEFAULT_SEED,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Census,
    Verify,
    Harmonic,
    Conjecture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    A,
    B,
}

#[derive(Debug, Parser)]
#[command(
    name = "diffops",
    version,
    about = "Census of non-trivial compositions of the operations ∇0..∇n on R^n, \
             with exact identity and harmonic checks"
)]
struct Args {
    /// Command to run.
    #[arg(value_enum)]
    command: Option<Command>,
    /// Command to run, as a flag.
    #[arg(long = "command", value_enum, id = "command_flag")]
    command_flag: Option<Command>,
    /// Dimension `n` or inclusive range `a..b`.
    #[arg(long)]
    n: Option<String>,
    /// Order `k` or inclusive range `a..b`.
    #[arg(long)]
    k: Option<String>,
    /// Restrict the census to one family (default: both).
    #[arg(long, value_enum, ignore_case = true)]
    family: Option<FamilyArg>,
    /// Run the symbolic triviality oracle inside the census.
    #[arg(long)]
    oracle: bool,
    /// Largest `n` the oracle is run for (at most 5).
    #[arg(long, default_value_t = OracleLimit::DEFAULT.n_max)]
    oracle_n_max: usize,
    /// Largest `k` the oracle is run for (at most 4).
    #[arg(long, default_value_t = OracleLimit::DEFAULT.k_max)]
    oracle_k_max: usize,
    /// Degree bound for harmonic witnesses.
    #[arg(long)]
    deg: Option<u32>,
    /// Seed of the randomized suites.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random cases per suite and degree.
    #[arg(long, default_value_t = 50)]
    cases: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

/// Validated configuration of one run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: RangeInclusive<usize>,
    pub k: RangeInclusive<usize>,
    pub families: Vec<Family>,
    pub oracle: Option<(usize, usize)>,
    pub degree: u32,
    pub seed: u64,
    pub cases: usize,
    pub format: Format,
}

fn parse_range(text: &str, what: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("invalid {what} `{text}`: expected a number or a range a..b");
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty {what} range `{text}`"));
    }
    Ok(lo..=hi)
}

impl RunConfig {
    /// Parses command-line arguments (including the program name). On error
    /// the message is the usage text to print.
    pub fn from_args<I, T>(args: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let args = Args::try_parse_from(args).map_err(|e| e.render().to_string())?;
        let command = match (args.command, args.command_flag) {
            (Some(a), Some(b)) if a != b => {
                return Err(format!("conflicting commands `{a:?}` and `{b:?}`").to_lowercase())
            }
            (Some(c), _) | (None, Some(c)) => c,
            (None, None) => return Err("a command is required: census, verify, harmonic or conjecture".into()),
        };
        let n = parse_range(args.n.as_deref().unwrap_or("3"), "n")?;
        let min_n = if command == Command::Conjecture { 3 } else { 2 };
        if *n.start() < min_n {
            return Err(format!("n must be at least {min_n} for this command"));
        }
        let default_k = match command {
            Command::Census => "1..10",
            Command::Verify | Command::Harmonic => "1..4",
            Command::Conjecture => "3..5",
        };
        let k = parse_range(args.k.as_deref().unwrap_or(default_k), "k")?;
        if *k.start() == 0 {
            return Err("k starts at 1".into());
        }
        let oracle = if args.oracle {
            let limit = OracleLimit::DEFAULT;
            if args.oracle_n_max > limit.n_max || args.oracle_k_max > limit.k_max {
                return Err(format!(
                    "oracle limits may not exceed n <= {} and k <= {}",
                    limit.n_max, limit.k_max
                ));
            }
            Some((args.oracle_n_max, args.oracle_k_max))
        } else {
            None
        };
        let families = match args.family {
            Some(FamilyArg::A) => vec![Family::A],
            Some(FamilyArg::B) => vec![Family::B],
            None => vec![Family::A, Family::B],
        };
        let degree = args.deg.unwrap_or(match command {
            Command::Conjecture => 4,
            _ => 3,
        });
        Ok(Self {
            command,
            n,
            k,
            families,
            oracle,
            degree,
            seed: args.seed,
            cases: args.cases,
            format: args.format,
        })
    }
}

#[derive(Serialize)]
struct Header<'a> {
    command: Command,
    n: String,
    k: String,
    families: String,
    oracle: Option<String>,
    degree: u32,
    seed: u64,
    #[serde(skip)]
    config: &'a RunConfig,
}

impl<'a> Header<'a> {
    fn new(config: &'a RunConfig) -> Self {
        let range = |r: &RangeInclusive<usize>| format!("{}..{}", r.start(), r.end());
        Self {
            command: config.command,
            n: range(&config.n),
            k: range(&config.k),
            families: config.families.iter().map(ToString::to_string).collect(),
            oracle: config.oracle.map(|(n, k)| format!("n<={n},k<={k}")),
            degree: config.degree,
            seed: config.seed,
            config,
        }
    }

    fn render(&self) -> String {
        match self.config.format {
            Format::Records => serde_json::to_string(self).expect("header serializes"),
            Format::Table => format!(
                "# diffops {} n={} k={} families={} oracle={} deg={} seed={}",
                serde_json::to_value(self.command).expect("command serializes").as_str().unwrap_or(""),
                self.n,
                self.k,
                self.families,
                self.oracle.as_deref().unwrap_or("off"),
                self.degree,
                self.seed
            ),
        }
    }
}

/// Result of one run: exit status and everything written to stdout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub status: i32,
    pub output: String,
}

fn record<T: Serialize>(out: &mut String, value: &T) {
    out.push_str(&serde_json::to_string(value).expect("records serialize"));
    out.push('\n');
}

pub fn run(config: &RunConfig) -> RunOutcome {
    let mut out = Header::new(config).render();
    out.push('\n');
    let status = match config.command {
        Command::Census => run_census(config, &mut out),
        Command::Verify => run_suites(config, &mut out, |n| {
            let mut v = forms_suites(n, config.cases, config.seed);
            v.extend(nabla_suites(n, config.cases, config.seed));
            v
        }),
        Command::Harmonic => run_suites(config, &mut out, |n| {
            let k_max = *config.k.end();
            vec![
                lemma_random_suite(n, config.cases, config.seed),
                lemma_constructed_suite(n, config.degree),
                harmonic_function_suite(n, k_max, config.degree),
                harmonic_field_suite(n, k_max, config.degree),
            ]
        }),
        Command::Conjecture => run_conjecture(config, &mut out),
    };
    RunOutcome { status, output: out }
}

fn run_census(config: &RunConfig, out: &mut String) -> i32 {
    let oracle = config
        .oracle
        .map_or(OracleLimit::OFF, |(n_max, k_max)| OracleLimit { n_max, k_max });
    let mut rows: Vec<CensusReport> = Vec::new();
    for n in config.n.clone() {
        for &family in &config.families {
            for k in config.k.clone() {
                match census_cell(n, k, family, oracle) {
                    Ok(row) => rows.push(row),
                    Err(e) => {
                        let _ = writeln!(out, "error: n={n} k={k} family={family}: {e}");
                        return EXIT_FAILURE;
                    }
                }
            }
        }
    }
    match config.format {
        Format::Records => rows.iter().for_each(|r| record(out, r)),
        Format::Table => {
            let _ = writeln!(
                out,
                "{:>3} {:>6} {:>3} {:>14} {:>12} {:>12} {:>12} {:>8}  agree",
                "n", "family", "k", "compositions", "graph", "formula", "recurrence", "oracle"
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:>3} {:>6} {:>3} {:>14} {:>12} {:>12} {:>12} {:>8}  {}",
                    r.n,
                    r.family.to_string(),
                    r.k,
                    r.compositions.to_string(),
                    r.count_graph.to_string(),
                    r.count_formula.to_string(),
                    r.count_recurrence.to_string(),
                    r.count_oracle.as_ref().map_or("-".to_string(), ToString::to_string),
                    if r.agree { "yes" } else { "NO" }
                );
            }
        }
    }
    if rows.iter().all(|r| r.agree) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn run_suites(config: &RunConfig, out: &mut String, suites: impl Fn(usize) -> Vec<SuiteResult>) -> i32 {
    let mut all_ok = true;
    for n in config.n.clone() {
        for s in suites(n) {
            all_ok &= s.ok();
            match config.format {
                Format::Records => record(out, &s),
                Format::Table => {
                    let verdict = if s.ok() { "PASS" } else { "FAIL" };
                    let _ = writeln!(out, "{verdict} n={} {} ({}/{})", s.n, s.suite, s.passed, s.cases);
                    if let Some(w) = &s.first_failure {
                        let _ = writeln!(out, "     first failure: {w}");
                    }
                }
            }
        }
    }
    if all_ok {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn render_scan(report: &ConjectureReport) -> String {
    let mut line = format!(
        "n={} orders {}..{} degree <= {}: {} applications of {} sequences to {} witnesses, ",
        report.n,
        report.k_min,
        report.k_max,
        report.degree_max,
        report.applications,
        report.sequences_tested,
        report.witnesses_tested
    );
    match &report.counterexample {
        None => line.push_str("no counterexample"),
        Some(c) => {
            let _ = write!(
                line,
                "counterexample: {} on rank {} witness ({}) gives ({}); {} nonzero outputs",
                c.rendered,
                c.witness_rank,
                c.witness.join(", "),
                c.output.join(", "),
                report.nonzero_outputs
            );
        }
    }
    line
}

fn run_conjecture(config: &RunConfig, out: &mut String) -> i32 {
    let mut found = false;
    for n in config.n.clone() {
        match conjecture_scan(n, *config.k.start(), *config.k.end(), config.degree) {
            Ok(report) => {
                found |= report.counterexample.is_some();
                match config.format {
                    Format::Records => record(out, &report),
                    Format::Table => {
                        out.push_str(&render_scan(&report));
                        out.push('\n');
                    }
                }
            }
            Err(e) => {
                let _ = writeln!(out, "error: n={n}: {e}");
                return EXIT_FAILURE;
            }
        }
    }
    if found {
        EXIT_COUNTEREXAMPLE
    } else {
        EXIT_OK
    }
}

/// Parses `args` and runs; usage errors give status 2 with the message as output.
pub fn main_with_args<I, T>(args: I) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::from_args(args) {
        Ok(config) => run(&config),
        Err(usage) => RunOutcome {
            status: EXIT_USAGE,
            output: usage,
        },
    }
}
