//! Command-line front end. [`run`] is the whole program minus process
//! I/O, so it can be driven in-process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::eta::{self, GeneratorSetSpec, HopfCase, Mode, SigmaSource};
use crate::model::{self, EntryFilter, GeneratorFilter, ModelKind};
use crate::opseq::{self, Indexing, OpSequence};
use crate::parse::{parse_element, parse_model, parse_seq};
use crate::report::{emit_table, Format, VerificationReport};
use crate::steenrod;

/// Environment variable consulted when --threads is absent.
pub const THREADS_ENV: &str = "HUREWICZ_THREADS";

/// Dyer-Lashof and Steenrod calculus on free loop-space models, with
/// verification sweeps for the Hurewicz images of the η_i family.
#[derive(Parser, Debug)]
#[command(name = "hurewicz", version)]
struct Cli {
    /// Output format: text, json or csv.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Worker threads for sweeps (default 1, or $HUREWICZ_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Normalization cache file, read before and written after the run.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// List admissible sequences I with Q^I g a polynomial generator.
    Enumerate(EnumerateArgs),
    /// List the monomial basis in one degree.
    Basis(BasisArgs),
    /// Print graded dimensions.
    Poincare(PoincareArgs),
    /// Bring an operation word to admissible normal form.
    Adem(AdemArgs),
    /// Expand Sq^r_* Q^s, or apply Sq^r_* to an element.
    Nishida(NishidaArgs),
    /// Image of Q^I applied to the Hurewicz image of [η_i]_{6-k}.
    Image(ImageArgs),
    /// Apply the homology suspension.
    Suspend(SuspendArgs),
    /// Run a verification sweep.
    Verify(VerifyArgs),
    /// Check the stable image and its bottom class.
    Stable(StableArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FilterArg {
    Even,
    Div4,
    None,
}

impl From<FilterArg> for EntryFilter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::Even => EntryFilter::even(),
            FilterArg::Div4 => EntryFilter::DivisibleBy(4),
            FilterArg::None => EntryFilter::Any,
        }
    }
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// sphere:N, stunted:K0,M or sphere-zero, optionally ;loops=L.
    #[arg(long, default_value = "sphere:3")]
    model: String,
    #[arg(long)]
    max_degree: u32,
    /// Strict lower bound on excess (default: generator dimension).
    #[arg(long, allow_hyphen_values = true)]
    excess_gt: Option<i64>,
    /// Strict upper bound on the last entry.
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long, value_enum, default_value = "none")]
    filter: FilterArg,
    #[arg(long)]
    max_length: Option<usize>,
}

#[derive(Args, Debug)]
struct BasisArgs {
    #[arg(long, default_value = "sphere:3")]
    model: String,
    #[arg(long)]
    degree: u32,
}

#[derive(Args, Debug)]
struct PoincareArgs {
    #[arg(long, default_value = "sphere:3")]
    model: String,
    #[arg(long)]
    max_degree: u32,
}

#[derive(Args, Debug)]
struct AdemArgs {
    /// Upper-indexed word, outermost first, e.g. 9,4.
    #[arg(long)]
    seq: String,
}

#[derive(Args, Debug)]
struct NishidaArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: Option<u32>,
    /// Element to act on instead of expanding Sq^r_* Q^s.
    #[arg(long)]
    element: Option<String>,
    #[arg(long, default_value = "sphere:3")]
    model: String,
}

#[derive(Args, Debug)]
struct ImageArgs {
    #[arg(long)]
    k: u8,
    /// Mahowald index.
    #[arg(long, default_value_t = 4)]
    i: u32,
    #[arg(long, default_value = "")]
    seq: String,
    /// Read --seq as lower indices.
    #[arg(long)]
    lower: bool,
}

#[derive(Args, Debug)]
struct SuspendArgs {
    #[arg(long, default_value = "sphere:3")]
    model: String,
    #[arg(long)]
    element: String,
    #[arg(long, default_value_t = 1)]
    times: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Check {
    Generators,
    Kernel,
    Independence,
    DualAdem,
    Hopf,
    Chain,
    Stable,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "generators")]
    check: Check,
    #[arg(long, default_value_t = 0)]
    k: u8,
    /// Mahowald index.
    #[arg(long, default_value_t = 4)]
    i: u32,
    /// in_R or on_generator.
    #[arg(long, default_value = "on_generator")]
    mode: String,
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    max_length: Option<usize>,
    /// Strict upper bound on the last entry (default 2^(i+1) - 3).
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long, value_enum, default_value = "none")]
    filter: FilterArg,
    /// nu or sigma, for --check hopf.
    #[arg(long, default_value = "nu")]
    case: String,
    /// Adjoint level for --check hopf (default: all levels).
    #[arg(long)]
    level: Option<u32>,
    /// Source sphere for the sigma case, 8 or 4.
    #[arg(long, default_value = "8")]
    source: String,
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long, default_value = "sphere:3")]
    model: String,
}

#[derive(Args, Debug)]
struct StableArgs {
    /// Mahowald index.
    #[arg(long, default_value_t = 4)]
    i: u32,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Output {
    Table(Table),
    Report(VerificationReport),
}

/// A plain result table: fixed columns, string cells, JSON values.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<serde_json::Value>>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<serde_json::Value>) {
        self.rows.push(row);
    }

    fn cell(v: &serde_json::Value) -> String {
        match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Array(a) => {
                let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
            other => other.to_string(),
        }
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Json => {
                for row in &self.rows {
                    let fields: Vec<String> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| format!("{}:{}", serde_json::Value::from(*c), v))
                        .collect();
                    let _ = writeln!(out, "{{{}}}", fields.join(","));
                }
            }
            Format::Csv => {
                let _ = writeln!(out, "{}", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|v| csv_cell(&Self::cell(v))).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            Format::Text => {
                if self.columns.len() == 1 {
                    for row in &self.rows {
                        let _ = writeln!(out, "{}", Self::cell(&row[0]));
                    }
                    return out;
                }
                let cells: Vec<Vec<String>> =
                    self.rows.iter().map(|r| r.iter().map(Self::cell).collect()).collect();
                let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
                for row in &cells {
                    for (w, c) in widths.iter_mut().zip(row) {
                        *w = (*w).max(c.len());
                    }
                }
                let line = |items: Vec<&str>| {
                    let padded: Vec<String> =
                        items.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string()
                };
                let _ = writeln!(out, "{}", line(self.columns.clone()));
                for row in &cells {
                    let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
                }
            }
        }
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn single(column: &'static str, value: impl Into<serde_json::Value>) -> Output {
    let mut t = Table::new(vec![column]);
    t.push(vec![value.into()]);
    Output::Table(t)
}

fn threads(flag: Option<usize>) -> Result<usize> {
    if let Some(t) = flag {
        return if t == 0 { Err(Error::Usage("--threads must be positive".into())) } else { Ok(t) };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(Error::Usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(1),
    }
}

/// Runs the program on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("error: invalid arguments");
            return Outcome { code: 2, stdout: String::new(), stderr: format!("{line}\n") };
        }
    };
    match execute(&cli) {
        Ok((stdout, failures)) => Outcome { code: i32::from(failures > 0), stdout, stderr: String::new() },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn execute(cli: &Cli) -> Result<(String, usize)> {
    let format: Format = cli.format.parse()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads(cli.threads)?)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker threads: {e}")))?;
    if let Some(path) = &cli.cache {
        if path.exists() {
            opseq::load_cache(path)?;
        }
    }
    let output = pool.install(|| dispatch(&cli.verb))?;
    if let Some(path) = &cli.cache {
        opseq::save_cache(path)?;
    }
    Ok(match output {
        Output::Table(t) => (t.render(format), 0),
        Output::Report(r) => {
            let failures = r.summary().failures();
            (emit_table(&r, format), failures)
        }
    })
}

fn dispatch(verb: &Verb) -> Result<Output> {
    match verb {
        Verb::Enumerate(a) => enumerate(a),
        Verb::Basis(a) => {
            let m = parse_model(&a.model)?;
            let mut t = Table::new(vec!["monomial"]);
            for mono in model::enumerate_basis(&m, a.degree)? {
                t.push(vec![mono.to_string().into()]);
            }
            Ok(Output::Table(t))
        }
        Verb::Poincare(a) => {
            let m = parse_model(&a.model)?;
            let series = model::poincare_series(&m, a.max_degree)?;
            let mut t = Table::new(vec!["degree", "dim"]);
            for (d, c) in series.into_iter().enumerate() {
                t.push(vec![d.into(), c.into()]);
            }
            Ok(Output::Table(t))
        }
        Verb::Adem(a) => {
            let word = parse_seq(&a.seq)?;
            Ok(single("normal_form", opseq::normalize(&word).to_string()))
        }
        Verb::Nishida(a) => nishida(a),
        Verb::Image(a) => {
            let word = parse_seq(&a.seq)?;
            let indexing = if a.lower { Indexing::Lower } else { Indexing::Upper };
            let seq = OpSequence::new(word, indexing)?;
            Ok(single("image", eta::jhopf_image(a.k, &seq, a.i)?.to_string()))
        }
        Verb::Suspend(a) => {
            let m = parse_model(&a.model)?;
            let x = parse_element(&a.element, &m)?;
            Ok(single("suspension", model::suspend_times(&x, a.times)?.to_string()))
        }
        Verb::Verify(a) => verify(a).map(Output::Report),
        Verb::Stable(a) => stable(a.i).map(Output::Report),
    }
}

fn enumerate(a: &EnumerateArgs) -> Result<Output> {
    let m = parse_model(&a.model)?;
    let filter = GeneratorFilter {
        excess_gt: a.excess_gt.unwrap_or(m.bottom_dim() as i64),
        cap_lt: a.cap,
        entries: a.filter.into(),
        max_length: a.max_length,
    };
    let mut t = Table::new(vec!["seq", "degree"]);
    let mut rows: Vec<(u32, Vec<u32>)> = model::enumerate_generators(&m, a.max_degree, &filter)?
        .into_iter()
        .map(|s| (m.bottom_dim() + s.entries().iter().sum::<u32>(), s.entries().to_vec()))
        .collect();
    rows.sort();
    for (d, s) in rows {
        t.push(vec![s.into(), d.into()]);
    }
    Ok(Output::Table(t))
}

fn nishida(a: &NishidaArgs) -> Result<Output> {
    match (a.s, &a.element) {
        (Some(s), None) => Ok(single("expansion", steenrod::nishida_expand(a.r, s).to_string())),
        (None, Some(text)) => {
            let m = parse_model(&a.model)?;
            let x = parse_element(text, &m)?;
            Ok(single("result", steenrod::sq_act(a.r, &x).to_string()))
        }
        _ => Err(Error::Usage("nishida needs exactly one of --s or --element".into())),
    }
}

fn verify(a: &VerifyArgs) -> Result<VerificationReport> {
    let mode: Mode = a.mode.parse()?;
    let spec = || -> Result<GeneratorSetSpec> {
        let mut spec = GeneratorSetSpec::new(a.k, a.i, mode)?.with_entries(a.filter.into());
        if let Some(c) = a.cap {
            spec = spec.with_cap(c);
        }
        Ok(spec)
    };
    match a.check {
        Check::Generators => eta::verify_generators(&spec()?, a.max_degree.unwrap_or(50), a.max_length),
        Check::Kernel => eta::kernel_ideal_check(&spec()?, a.max_degree.unwrap_or(50), a.max_length.unwrap_or(2)),
        Check::Independence => eta::verify_independence(&spec()?, a.max_degree.unwrap_or(30)),
        Check::DualAdem => {
            let (Some(x), Some(y)) = (a.a, a.b) else {
                return Err(Error::Usage("dual-adem needs --a and --b".into()));
            };
            let m = parse_model(&a.model)?;
            if m.kind() == ModelKind::SphereZero {
                return Err(Error::Usage("dual-adem needs a model of finite type".into()));
            }
            steenrod::verify_dual_adem(x, y, &m, a.max_degree.unwrap_or(20))
        }
        Check::Hopf => {
            let case: HopfCase = a.case.parse()?;
            let source: SigmaSource = a.source.parse()?;
            let max_degree = a.max_degree.unwrap_or(30);
            let levels: Vec<u32> = match a.level {
                Some(l) => vec![l],
                None => (0..=case.max_level()).collect(),
            };
            let mut report = VerificationReport::new("hopf");
            for l in levels {
                let r = eta::verify_hopf_case(case, l, max_degree, source)?;
                if report.params.is_empty() {
                    report.params = r.params.clone();
                    report.params.remove("i");
                    if let Some(l) = a.level {
                        report.params.insert("i".into(), l.to_string());
                    }
                }
                report.annotations.extend(r.annotations.iter().map(|n| format!("level {l}: {n}")));
                report.records.extend(r.records);
                report.violations.extend(r.violations);
            }
            report.sort();
            Ok(report)
        }
        Check::Chain => eta::suspension_chain_check(),
        Check::Stable => stable(a.i),
    }
}

fn stable(i: u32) -> Result<VerificationReport> {
    let mut report = eta::verify_stable(i)?;
    let k0 = (1u32 << i) - 3;
    let words: Vec<Vec<u32>> = eta::excess_criterion_words(i, k0 + 20).into_iter().take(20).collect();
    let crit = eta::excess_criterion_check(i, &words)?;
    report.records.extend(crit.records);
    report.violations.extend(crit.violations);
    report.annotations.push(format!(
        "excess criterion checked on {} sequences with excess >= {k0}",
        words.len()
    ));
    report.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &str) -> Outcome {
        run(std::iter::once("hurewicz").chain(args.split_whitespace()))
    }

    #[test]
    fn adem_and_image() {
        let o = go("adem --seq 9,4");
        assert_eq!((o.code, o.stdout.as_str()), (0, "0\n"));
        let o = go("image --k 0 --i 4 --seq 8");
        assert_eq!(o.stdout, "(Q^4 g_3)^2\n");
        let o = run(["hurewicz", "image", "--k", "0", "--i", "4", "--seq", ""]);
        assert_eq!(o.stdout, "g_3^2\n");
    }

    #[test]
    fn usage_errors() {
        for bad in ["adem --seq 9,x", "verify --bogus", "image --k 0 --seq 40", "basis --model torus:3 --degree 3"] {
            let o = go(bad);
            assert_eq!(o.code, 2, "{bad}");
            assert_eq!(o.stderr.lines().count(), 1, "{bad}: {}", o.stderr);
        }
    }

    #[test]
    fn verify_json() {
        let o = go("verify --k 0 --i 4 --max-degree 50 --format json");
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains(r#"{"seq":[16,8],"k":0,"i":4,"predicted":true,"computed_nonzero":true,"status":"agree""#));
    }
}
