//! Command-line front end.
//!
//! Exit codes: 0 success, 1 check or certification failure, 2 usage error.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::bounds::{audit_point, sweep, theorem_bound, BoundReport, SweepGrid, SweepRow};
use crate::convertible::{default_scheme, run_conversion, ConversionScheme, SchemeDoc, SplitParams};
use crate::entropy::{canonical_pair, rs_ensemble, verify_grid, Corruption, VerifyConfig};
use crate::exec::{cap_threads, Exec};
use crate::gf::Elem;
use crate::search::{certify_bound, min_bandwidth_exhaustive, SearchBudget};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "CONVERT_BW_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "convert-bw",
    version,
    about = "Conversion bandwidth bounds for split-regime MDS convertible codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run every data-parallel loop on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the lower bound at one parameter point.
    Bound {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the entropy checks over a grid of Reed-Solomon ensembles.
    Verify(VerifyArgs),
    /// Convert random messages and check the resulting codewords.
    Simulate(SimulateArgs),
    /// Exhaustively search conversion schemes and compare with the bound.
    Search(SearchArgs),
    /// Evaluate the bound over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub lf: usize,
    #[arg(long)]
    pub kf: usize,
    #[arg(long)]
    pub rf: usize,
    #[arg(long)]
    pub ri: usize,
    #[arg(long)]
    pub alpha: usize,
    /// Field order; must be at least max(n_i, n_f).
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlantArg {
    DuplicateParity,
    InitialIntoFinal,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_list, default_value = "5,7,11")]
    pub qs: ValueList,
    #[arg(long, value_parser = parse_list, default_value = "2,3")]
    pub lfs: ValueList,
    #[arg(long, value_parser = parse_list, default_value = "1,2")]
    pub kfs: ValueList,
    #[arg(long, value_parser = parse_list, default_value = "1,2")]
    pub rfs: ValueList,
    #[arg(long, value_parser = parse_list, default_value = "1..=3")]
    pub ris: ValueList,
    #[arg(long, value_parser = parse_list, default_value = "1,2")]
    pub alphas: ValueList,
    #[arg(long, default_value_t = 8)]
    pub max_ni: usize,
    /// Random instances per randomized check and ensemble.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Plant a defect in every ensemble; the run is then expected to fail.
    #[arg(long, value_enum)]
    pub plant_corruption: Option<PlantArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeChoice {
    /// Read every information node in full.
    Default,
    /// The minimizer found by exhaustive search.
    Minimal,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 100)]
    pub messages: usize,
    #[arg(long, value_enum, default_value_t = SchemeChoice::Default)]
    pub scheme: SchemeChoice,
    /// Read the scheme from a JSON file (`beta`, `sigma`, `A`, `B`) instead.
    #[arg(long)]
    pub scheme_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Code pairs to search: the canonical pair, then random pairs.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_visits: u64,
    /// Also enumerate and check every feasible scheme.
    #[arg(long)]
    pub audit: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Values as `2`, `2,3`, `2..=5` or `2..6`.
    #[arg(long, value_parser = parse_list)]
    pub lf: ValueList,
    #[arg(long, value_parser = parse_list)]
    pub kf: ValueList,
    #[arg(long, value_parser = parse_list)]
    pub rf: ValueList,
    /// Defaults to `1..=2*k_i` at each point.
    #[arg(long, value_parser = parse_list)]
    pub ri: Option<ValueList>,
    #[arg(long, value_parser = parse_list, default_value = "1")]
    pub alpha: ValueList,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_rows: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Values of one grid axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueList(pub Vec<usize>);

/// Parses `3`, `1,2,5`, `1..=4`, `1..4` or a comma list of these.
pub fn parse_list(s: &str) -> Result<ValueList, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad number {t:?}: {e}"));
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        if let Some((a, b)) = part.split_once("..=") {
            out.extend(num(a)?..=num(b)?);
        } else if let Some((a, b)) = part.split_once("..") {
            out.extend(num(a)?..num(b)?);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(ValueList(out))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// What a command produced: the document for stdout (or `--out`), extra
/// lines for stderr, and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    pub code: i32,
    pub out: Option<PathBuf>,
}

impl Outcome {
    fn new(text: String, code: i32, out: Option<PathBuf>) -> Self {
        Outcome {
            text,
            warnings: Vec::new(),
            code,
            out,
        }
    }

    /// Writes the document to its destination and the warnings to stderr.
    pub fn emit(&self) -> Result<(), CliError> {
        for w in &self.warnings {
            eprintln!("warning: {w}");
        }
        match &self.out {
            Some(path) => std::fs::write(path, &self.text)?,
            None => {
                use std::io::Write;
                let mut stdout = std::io::stdout().lock();
                match stdout.write_all(self.text.as_bytes()).and_then(|_| stdout.flush()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn to_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn split_params(a: &ParamArgs) -> Result<SplitParams, CliError> {
    let p = SplitParams::new(a.lf, a.kf, a.rf, a.ri, a.alpha).map_err(usage)?;
    match a.q {
        Some(q) => p.with_field(q).map_err(usage),
        None => Ok(p),
    }
}

fn field_params(a: &ParamArgs) -> Result<SplitParams, CliError> {
    if a.q.is_none() {
        return Err(usage("--q is required for this command"));
    }
    split_params(a)
}

fn report_text(reports: &[BoundReport], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json if reports.len() == 1 => Ok(to_json(&reports[0])),
        Format::Json => Ok(to_json(&reports)),
        Format::Csv => to_csv(&reports.iter().map(SweepRow::from).collect::<Vec<_>>()),
    }
}

pub fn cmd_bound(params: &ParamArgs, output: &OutputArgs) -> Result<Outcome, CliError> {
    let p = split_params(params)?;
    let text = report_text(&[theorem_bound(&p)], output.format)?;
    Ok(Outcome::new(text, EXIT_OK, output.out.clone()))
}

pub fn cmd_verify(args: &VerifyArgs, exec: Exec) -> Result<Outcome, CliError> {
    let cfg = VerifyConfig {
        qs: args.qs.0.clone(),
        lfs: args.lfs.0.clone(),
        kfs: args.kfs.0.clone(),
        rfs: args.rfs.0.clone(),
        ris: args.ris.0.clone(),
        alphas: args.alphas.0.clone(),
        max_ni: args.max_ni,
        trials: args.trials,
        seed: args.seed,
        corruption: args.plant_corruption.map(|c| match c {
            PlantArg::DuplicateParity => Corruption::DuplicateParity,
            PlantArg::InitialIntoFinal => Corruption::InitialIntoFinal,
        }),
    };
    let outcome = verify_grid(&cfg, exec);
    let failures = outcome.failures().count();
    let doc = json!({
        "summary": {
            "ensembles_skipped": outcome.skipped.len(),
            "reports": outcome.reports.len(),
            "failures": failures,
        },
        "reports": outcome.reports,
        "skipped": outcome.skipped,
    });
    let code = if failures == 0 { EXIT_OK } else { EXIT_FAILURE };
    let mut out = Outcome::new(to_json(&doc), code, args.out.clone());
    if outcome.reports.is_empty() {
        out.warnings.push("the grid is empty; no checks were run".into());
    }
    Ok(out)
}

fn load_scheme(path: &PathBuf, p: SplitParams) -> Result<ConversionScheme, CliError> {
    let text = std::fs::read_to_string(path)?;
    let doc: SchemeDoc = serde_json::from_str(&text).map_err(usage)?;
    let field = p.field().expect("field set").map_err(usage)?;
    ConversionScheme::from_doc(p, &field, &doc).map_err(usage)
}

pub fn cmd_simulate(args: &SimulateArgs, exec: Exec) -> Result<Outcome, CliError> {
    let p = field_params(&args.params)?;
    let (initial, final_code) = canonical_pair(&p).map_err(usage)?;
    let field = initial.field().clone();
    let scheme = match (&args.scheme_file, args.scheme) {
        (Some(path), _) => load_scheme(path, p)?,
        (None, SchemeChoice::Default) => default_scheme(p, &field),
        (None, SchemeChoice::Minimal) => {
            let ens = rs_ensemble(p).map_err(usage)?;
            min_bandwidth_exhaustive(&ens, &SearchBudget::default(), exec)
                .map_err(usage)?
                .scheme
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let messages: Vec<Vec<Elem>> = (0..args.messages)
        .map(|_| (0..p.message_dim()).map(|_| field.random(&mut rng)).collect())
        .collect();
    let results = exec.map(&messages, |m| check_round_trip(p, &initial, &final_code, &scheme, m));
    let mut failures = Vec::new();
    let mut bandwidth = None;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(b) => bandwidth = Some(b),
            Err(e) => failures.push(json!({ "message": i, "error": e })),
        }
    }
    let doc = json!({
        "params": p,
        "messages": args.messages,
        "scheme": scheme.to_doc(),
        "bandwidth": bandwidth,
        "failures": failures,
    });
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_FAILURE };
    Ok(Outcome::new(to_json(&doc), code, args.out.clone()))
}

/// Converts one message and checks that every final codeword decodes from
/// every `k_f`-subset of its nodes and keeps the information nodes intact.
pub fn check_round_trip(
    p: SplitParams,
    initial: &crate::mds::VectorCode,
    final_code: &crate::mds::VectorCode,
    scheme: &ConversionScheme,
    message: &[Elem],
) -> Result<crate::convertible::BandwidthReport, String> {
    use itertools::Itertools;
    let out = run_conversion(p, initial, final_code, scheme, message).map_err(|e| e.to_string())?;
    let stored = initial.encode(message).map_err(|e| e.to_string())?;
    let a = p.alpha;
    for (t, cw) in out.codewords.iter().enumerate() {
        for (local, j) in p.codeword_nodes(t).enumerate() {
            if cw[local] != stored[j] {
                return Err(format!("codeword {t}: information node {local} changed"));
            }
        }
        let block = &message[t * p.k_f * a..(t + 1) * p.k_f * a];
        for subset in (0..p.n_f()).combinations(p.k_f) {
            let avail: BTreeMap<usize, Vec<Elem>> = subset.iter().map(|&i| (i, cw[i].clone())).collect();
            match final_code.decode_from(&avail) {
                Ok(m) if m == block => {}
                Ok(_) => return Err(format!("codeword {t}: nodes {subset:?} decode to the wrong message")),
                Err(e) => return Err(format!("codeword {t}: nodes {subset:?}: {e}")),
            }
        }
    }
    Ok(out.bandwidth)
}

pub fn cmd_search(args: &SearchArgs, exec: Exec) -> Result<Outcome, CliError> {
    let p = field_params(&args.params)?;
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let budget = SearchBudget {
        max_dimension: None,
        max_visits: args.max_visits,
        seed: args.seed,
    };
    let reports = certify_bound(&p, args.trials, &budget, args.audit, exec).map_err(usage)?;
    let code = if reports.iter().all(|r| r.ok()) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    Ok(Outcome::new(to_json(&reports), code, args.out.clone()))
}

pub fn cmd_sweep(args: &SweepArgs, exec: Exec) -> Result<Outcome, CliError> {
    let grid = SweepGrid {
        lfs: args.lf.0.clone(),
        kfs: args.kf.0.clone(),
        rfs: args.rf.0.clone(),
        ris: args.ri.as_ref().map(|v| v.0.clone()),
        alphas: args.alpha.0.clone(),
    };
    let rows = sweep(&grid, args.max_rows, exec).map_err(usage)?;
    let bad: Vec<_> = exec
        .map(&rows, |r| audit_point(&r.params))
        .into_iter()
        .filter(|a| !a.passed())
        .collect();
    let text = report_text(&rows, args.output.format)?;
    let mut out = Outcome::new(
        text,
        if bad.is_empty() { EXIT_OK } else { EXIT_FAILURE },
        args.output.out.clone(),
    );
    out.warnings
        .extend(bad.iter().map(|a| format!("consistency check failed: {}", json!(a))));
    if rows.is_empty() {
        out.warnings.push("the grid is empty".into());
    }
    Ok(out)
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match &cli.command {
        Command::Bound { params, output } => cmd_bound(params, output),
        Command::Verify(a) => cmd_verify(a, exec),
        Command::Simulate(a) => cmd_simulate(a, exec),
        Command::Search(a) => cmd_search(a, exec),
        Command::Sweep(a) => cmd_sweep(a, exec),
    }
}

/// Full entry point: parses `args`, honours the thread cap, runs, emits,
/// and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()) {
        cap_threads(n);
    }
    match run(&cli).and_then(|o| o.emit().map(|_| o.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_syntax() {
        assert_eq!(parse_list("3").unwrap().0, vec![3]);
        assert_eq!(parse_list("1,2,5").unwrap().0, vec![1, 2, 5]);
        assert_eq!(parse_list("1..=3").unwrap().0, vec![1, 2, 3]);
        assert_eq!(parse_list("1..3,7").unwrap().0, vec![1, 2, 7]);
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn bound_rejects_lambda_one() {
        let cli = Cli::try_parse_from([
            "convert-bw",
            "bound",
            "--lf",
            "1",
            "--kf",
            "2",
            "--rf",
            "1",
            "--ri",
            "1",
            "--alpha",
            "1",
        ])
        .unwrap();
        let err = run(&cli).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert!(err.to_string().contains("lambda_f >= 2"));
    }
}
