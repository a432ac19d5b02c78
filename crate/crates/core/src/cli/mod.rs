// SPDX-License-Identifier: Apache-2.0

//! The `faccompat` command line.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad input,
//! 3 a resource cap was hit.

pub mod verify;

use crate::compat::{
    bound_value, Analysis, BoundParams, CheckStatus, CompatError, Pair, RatioReport,
};
use crate::instances::{generate, parse, serialize, Family, FamilySpec, ParseError, SpecError};
use crate::metric_core::{
    Aggregator, ClientCost, Instance, ObjectiveError, ObjectiveSpec, Solution,
};
use crate::solvers::{optimum, OptResult, SolveError};
use crate::tolerance::LIMIT_TOL;
use crate::voting::{
    induced_profile, plurality_veto, realized_distortion, OrdinalProfile, VetoTranscript,
    VotingError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;
use verify::{run_lower_bounds, run_trial, tally, trial_instance, Record};

/// Columns of `pair --format csv`.
pub const PAIR_CSV_HEADER: [&str; 14] = [
    "instance",
    "family",
    "seed",
    "k",
    "n",
    "pair",
    "candidate",
    "alpha_1",
    "alpha_2",
    "simultaneous",
    "bound",
    "slack",
    "method_1",
    "method_2",
];

/// Columns of `solve --format csv`.
pub const SOLVE_CSV_HEADER: [&str; 9] = [
    "instance",
    "family",
    "seed",
    "k",
    "n",
    "objective",
    "slots",
    "value",
    "method",
];

/// Columns of `verify --format csv`.
pub const VERIFY_CSV_HEADER: [&str; 6] = ["suite", "case", "check", "status", "value", "slack"];

#[derive(Debug, Parser)]
#[command(
    name = "faccompat",
    version,
    about = "Simultaneous approximation for metric facility objectives"
)]
pub struct Cli {
    /// Tolerance for comparing lower-bound ratios with their limits.
    #[arg(long, global = true, env = "FACCOMPAT_TOLERANCE", default_value_t = LIMIT_TOL)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimise one objective.
    Solve {
        #[command(flatten)]
        source: Source,
        /// `sum-sum`, `max-sum`, `sum-max`, `max-max` or `centrum:<l>:<sum|max|q:<q>>`.
        #[arg(long)]
        objective: String,
        #[command(flatten)]
        out: Output,
    },
    /// Best simultaneous approximation for two objectives.
    Pair {
        #[command(flatten)]
        source: Source,
        /// Two objectives joined by `+`.
        #[arg(long)]
        pair: String,
        /// Search every committee instead of the candidate set.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run the property suite on random trials and the lower-bound limits.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, value_enum, default_value_t = VerifyFormat::Table)]
        format: VerifyFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write an instance document.
    Gen {
        #[command(flatten)]
        source: Source,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run Plurality Veto on an induced or stored profile.
    Vote {
        #[command(flatten)]
        source: Source,
        /// Profile document; used instead of an instance.
        #[arg(long, conflicts_with_all = ["instance", "family"])]
        profile: Option<PathBuf>,
        /// Per-voter cost: `sum`, `max` or `q:<q>`.
        #[arg(long, default_value = "sum")]
        cost: String,
        /// Centrum sizes for distortion; defaults to 1, ceil(n/2) and n.
        #[arg(long, value_delimiter = ',')]
        l: Vec<u64>,
        /// Veto order as comma-separated voter indices.
        #[arg(long, value_delimiter = ',', conflicts_with = "order_seed")]
        order: Option<Vec<usize>>,
        /// Shuffle the veto order with this seed.
        #[arg(long)]
        order_seed: Option<u64>,
    },
}

/// Where the instance comes from.
#[derive(Debug, Clone, Args)]
pub struct Source {
    #[arg(long, conflicts_with = "family")]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    /// Total client weight.
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub clients: Option<usize>,
    #[arg(long)]
    pub facilities: Option<usize>,
    #[arg(long)]
    pub max_mult: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    LowerBounds,
    Random,
    All,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            SolveError::Objective(o) => CliError::Usage(format!("objective: {o}")),
        }
    }
}

impl From<CompatError> for CliError {
    fn from(e: CompatError) -> Self {
        match e {
            CompatError::Solve(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<VotingError> for CliError {
    fn from(e: VotingError) -> Self {
        match e {
            VotingError::Solve(s) => s.into(),
            VotingError::TooManyVoters { .. } => CliError::Cap(e.to_string()),
            other => CliError::Usage(format!("profile: {other}")),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve {
            source,
            objective,
            out,
        } => cmd_solve(source, objective, out),
        Command::Pair {
            source,
            pair,
            exhaustive,
            out,
        } => cmd_pair(source, pair, *exhaustive, out),
        Command::Verify {
            trials,
            seed,
            suite,
            format,
            output,
        } => cmd_verify(
            *trials,
            *seed,
            *suite,
            *format,
            output.as_deref(),
            cli.tolerance,
        ),
        Command::Gen { source, output } => {
            let (inst, _) = load(source)?;
            emit(output.as_deref(), &serialize(&inst))
        }
        Command::Vote {
            source,
            profile,
            cost,
            l,
            order,
            order_seed,
        } => cmd_vote(
            source,
            profile.as_deref(),
            cost,
            l,
            order.as_deref(),
            *order_seed,
        ),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::Usage(format!("stdout: {e}")))
        }
    }
}

/// Identifies the instance in reports.
#[derive(Debug, Clone, PartialEq)]
struct Origin {
    instance: String,
    family: String,
    seed: String,
}

fn spec_err(e: SpecError) -> CliError {
    let field = match &e {
        SpecError::UnknownFamily(_) => "family",
        SpecError::FixedK { .. } | SpecError::KTooSmall { .. } => "k",
        SpecError::TooFewClients { .. } => "n",
        _ => "family",
    };
    CliError::Usage(format!("{field}: {e}"))
}

fn parse_err(path: &Path, e: ParseError) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

fn load(source: &Source) -> Result<(Instance, Origin), CliError> {
    match (&source.instance, &source.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let mut inst = parse(&text).map_err(|e| parse_err(path, e))?;
            if let Some(k) = source.k {
                inst = inst
                    .with_k(k)
                    .map_err(|e| CliError::Usage(format!("k: {e}")))?;
            }
            let origin = Origin {
                instance: path.display().to_string(),
                family: String::new(),
                seed: String::new(),
            };
            Ok((inst, origin))
        }
        (None, Some(name)) => {
            let family: Family = name.parse().map_err(spec_err)?;
            let mut spec = FamilySpec::new(family, source.n).with_seed(source.seed);
            spec.k = source.k;
            spec.points = source.points.unwrap_or(spec.points);
            spec.clients = source.clients.unwrap_or(spec.clients);
            spec.facilities = source.facilities.unwrap_or(spec.facilities);
            spec.max_mult = source.max_mult.unwrap_or(spec.max_mult);
            spec.dim = source.dim.unwrap_or(spec.dim);
            let inst = generate(&spec).map_err(spec_err)?;
            let seed = if family.is_random() {
                source.seed.to_string()
            } else {
                String::new()
            };
            let origin = Origin {
                instance: family.to_string(),
                family: family.to_string(),
                seed,
            };
            Ok((inst, origin))
        }
        _ => Err(CliError::Usage(
            "instance: give exactly one of --instance or --family".into(),
        )),
    }
}

fn parse_objective(s: &str) -> Result<ObjectiveSpec, CliError> {
    s.parse()
        .map_err(|e: ObjectiveError| CliError::Usage(format!("objective: {e}")))
}

fn slots_json(inst: &Instance, sol: &Solution) -> Value {
    json!({ "slots": sol.slots(), "labels": sol.slots().iter().map(|&p| inst.label(p)).collect::<Vec<_>>() })
}

fn opt_json(inst: &Instance, r: &OptResult) -> Value {
    json!({ "solution": slots_json(inst, &r.solution), "value": r.value, "method": r.method })
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        x.to_string()
    }
}

fn cmd_solve(source: &Source, objective: &str, out: &Output) -> Result<(), CliError> {
    let spec = parse_objective(objective)?;
    let (inst, origin) = load(source)?;
    let r = optimum(&inst, spec)?;
    let text = match out.format {
        Format::Text => format!(
            "objective: {spec}\nsolution: {}\nvalue: {}\nmethod: {}\n",
            inst.display_solution(&r.solution),
            r.value,
            r.method
        ),
        Format::Json => {
            let mut v = opt_json(&inst, &r);
            v["objective"] = json!(spec.to_string());
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Csv => csv_string(
            &SOLVE_CSV_HEADER,
            &[vec![
                origin.instance,
                origin.family,
                origin.seed,
                inst.k().to_string(),
                inst.total_weight().to_string(),
                spec.to_string(),
                slots_text(&r.solution),
                num(r.value),
                r.method.to_string(),
            ]],
        ),
    };
    emit(out.output.as_deref(), &text)
}

fn slots_text(sol: &Solution) -> String {
    sol.slots()
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Closed-form bound for the pair on this instance, if one is known.
fn pair_bound(an: &Analysis<'_>, pair: Pair) -> Result<Option<f64>, CliError> {
    let inst = an.instance();
    let d = if pair.first.aggregator == Aggregator::Max || pair.second.aggregator == Aggregator::Max
    {
        Some(an.duality()?)
    } else {
        None
    };
    let (k1, k2) = d.map_or((1.0, 1.0), |d| (d.k1, d.k2));
    match bound_value(
        &pair,
        BoundParams {
            k: inst.k(),
            k1,
            k2,
        },
    ) {
        Ok(b) => Ok(Some(b)),
        Err(CompatError::UnknownPair(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn report_json(inst: &Instance, r: &RatioReport) -> Value {
    json!({
        "source": r.source.to_string(),
        "candidate": slots_json(inst, &r.candidate),
        "alpha_1": r.alpha_1,
        "alpha_2": r.alpha_2,
        "simultaneous": r.simultaneous,
    })
}

fn cmd_pair(source: &Source, pair: &str, exhaustive: bool, out: &Output) -> Result<(), CliError> {
    let pair: Pair = pair
        .parse()
        .map_err(|e: ObjectiveError| CliError::Usage(format!("pair: {e}")))?;
    let (inst, origin) = load(source)?;
    for spec in [pair.first, pair.second] {
        spec.validate(&inst)
            .map_err(|e| CliError::Usage(format!("pair: {e}")))?;
    }
    let an = Analysis::new(&inst);
    let (best, considered) = if exhaustive {
        let r = an.exhaustive_best(pair)?;
        (r.clone(), vec![r])
    } else {
        let s = an.best_simultaneous(pair)?;
        (s.best, s.considered)
    };
    let bound = pair_bound(&an, pair)?;
    let slack = bound.map_or(f64::NAN, |b| b - best.simultaneous);
    let text = match out.format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "pair: {pair}").unwrap();
            writeln!(
                s,
                "opt_1: {} = {} ({})",
                inst.display_solution(&best.opt_1.solution),
                best.opt_1.value,
                best.opt_1.method
            )
            .unwrap();
            writeln!(
                s,
                "opt_2: {} = {} ({})",
                inst.display_solution(&best.opt_2.solution),
                best.opt_2.value,
                best.opt_2.method
            )
            .unwrap();
            for r in &considered {
                writeln!(
                    s,
                    "candidate {}: {} alpha_1={} alpha_2={} simultaneous={}",
                    r.source,
                    inst.display_solution(&r.candidate),
                    r.alpha_1,
                    r.alpha_2,
                    r.simultaneous
                )
                .unwrap();
            }
            writeln!(
                s,
                "best: {} {}",
                best.source,
                inst.display_solution(&best.candidate)
            )
            .unwrap();
            writeln!(
                s,
                "alpha_1: {}\nalpha_2: {}\nsimultaneous: {}",
                best.alpha_1, best.alpha_2, best.simultaneous
            )
            .unwrap();
            match bound {
                Some(b) => writeln!(s, "bound: {b}\nslack: {slack}").unwrap(),
                None => writeln!(s, "bound: none").unwrap(),
            }
            s
        }
        Format::Json => {
            let v = json!({
                "pair": pair.to_string(),
                "opt_1": opt_json(&inst, &best.opt_1),
                "opt_2": opt_json(&inst, &best.opt_2),
                "considered": considered.iter().map(|r| report_json(&inst, r)).collect::<Vec<_>>(),
                "best": report_json(&inst, &best),
                "bound": bound,
                "slack": bound.map(|_| slack),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Csv => csv_string(
            &PAIR_CSV_HEADER,
            &[vec![
                origin.instance,
                origin.family,
                origin.seed,
                inst.k().to_string(),
                inst.total_weight().to_string(),
                pair.to_string(),
                slots_text(&best.candidate),
                num(best.alpha_1),
                num(best.alpha_2),
                num(best.simultaneous),
                bound.map_or(String::new(), num),
                num(slack),
                best.opt_1.method.to_string(),
                best.opt_2.method.to_string(),
            ]],
        ),
    };
    emit(out.output.as_deref(), &text)
}

fn status_name(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::NotApplicable => "n/a",
    }
}

fn cmd_verify(
    trials: usize,
    seed: u64,
    suite: Suite,
    format: VerifyFormat,
    output: Option<&Path>,
    tol: f64,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("trials: must be at least 1".into()));
    }
    let random = matches!(suite, Suite::Random | Suite::All);
    let lower = matches!(suite, Suite::LowerBounds | Suite::All);

    let results: Vec<(Instance, Vec<Record>)> = if random {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let inst = trial_instance(seed, i);
                let recs = run_trial(&inst, seed ^ i as u64)?;
                Ok((inst, recs))
            })
            .collect::<Result<_, CompatError>>()?
    } else {
        Vec::new()
    };
    let bounds = if lower {
        run_lower_bounds(tol)?
    } else {
        Vec::new()
    };

    let failing: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, (_, recs))| recs.iter().any(|r| r.status == CheckStatus::Fail))
        .map(|(i, _)| i)
        .collect();
    let dir = output
        .and_then(Path::parent)
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
    let mut saved = Vec::new();
    for &i in &failing {
        let path = dir.join(format!("failing-{seed}-{i}.json"));
        std::fs::write(&path, serialize(&results[i].0)).map_err(|e| io_err(&path, e))?;
        saved.push(path.display().to_string());
    }

    let tallies = tally(results.iter().flat_map(|(_, r)| r));
    let text = match format {
        VerifyFormat::Table => {
            let mut s = String::new();
            if random {
                writeln!(s, "random trials: {trials} (seed {seed})").unwrap();
                writeln!(
                    s,
                    "{:<28} {:>6} {:>6} {:>6} {:>14}",
                    "check", "pass", "fail", "n/a", "worst_slack"
                )
                .unwrap();
                for (name, t) in &tallies {
                    let worst = if t.worst_slack.is_nan() {
                        "-".to_string()
                    } else {
                        format!("{:.6e}", t.worst_slack)
                    };
                    writeln!(
                        s,
                        "{:<28} {:>6} {:>6} {:>6} {:>14}",
                        name, t.pass, t.fail, t.not_applicable, worst
                    )
                    .unwrap();
                }
            }
            if lower {
                writeln!(s, "lower bounds (tolerance {tol:e})").unwrap();
                for b in &bounds {
                    writeln!(
                        s,
                        "{:<10} {:<18} limit={:.9} exhaustive={:.9} selected={:.9} {}",
                        b.name,
                        b.pair.to_string(),
                        b.limit,
                        b.exhaustive,
                        b.selected,
                        if b.passed { "pass" } else { "fail" }
                    )
                    .unwrap();
                }
            }
            for p in &saved {
                writeln!(s, "failing instance written to {p}").unwrap();
            }
            s
        }
        VerifyFormat::Json => {
            let checks: serde_json::Map<String, Value> = tallies
                .iter()
                .map(|(name, t)| {
                    let worst = if t.worst_slack.is_nan() { Value::Null } else { json!(t.worst_slack) };
                    (
                        name.clone(),
                        json!({ "pass": t.pass, "fail": t.fail, "not_applicable": t.not_applicable, "worst_slack": worst }),
                    )
                })
                .collect();
            let lb: Vec<Value> = bounds
                .iter()
                .map(|b| {
                    json!({
                        "case": b.name, "pair": b.pair.to_string(), "limit": b.limit,
                        "exhaustive": b.exhaustive, "selected": b.selected, "passed": b.passed,
                    })
                })
                .collect();
            let v = json!({
                "trials": if random { trials } else { 0 },
                "seed": seed,
                "checks": checks,
                "lower_bounds": lb,
                "failing_instances": saved,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        VerifyFormat::Csv => {
            let mut rows = Vec::new();
            for (i, (_, recs)) in results.iter().enumerate() {
                for r in recs {
                    rows.push(vec![
                        "random".into(),
                        i.to_string(),
                        r.name.clone(),
                        status_name(r.status).into(),
                        String::new(),
                        num(r.slack),
                    ]);
                }
            }
            for b in &bounds {
                rows.push(vec![
                    "lower-bounds".into(),
                    b.name.clone(),
                    b.pair.to_string(),
                    if b.passed { "pass" } else { "fail" }.into(),
                    num(b.exhaustive),
                    num(tol
                        - (b.exhaustive - b.limit)
                            .abs()
                            .max((b.selected - b.limit).abs())),
                ]);
            }
            csv_string(&VERIFY_CSV_HEADER, &rows)
        }
    };
    emit(output, &text)?;

    let lb_failed = bounds.iter().filter(|b| !b.passed).count();
    if !failing.is_empty() || lb_failed > 0 {
        return Err(CliError::Violation(format!(
            "{} failing trial(s), {} lower-bound case(s) outside tolerance",
            failing.len(),
            lb_failed
        )));
    }
    Ok(())
}

fn render_transcript(
    profile: &OrdinalProfile,
    t: &VetoTranscript,
    label: &dyn Fn(&Solution) -> String,
) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "voters: {}  candidates: {}",
        profile.voter_count(),
        profile.committees.len()
    )
    .unwrap();
    let supported: Vec<String> = t
        .initial_scores
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, c)| format!("{}x{c}", label(&profile.committees[i])))
        .collect();
    writeln!(s, "plurality: {}", supported.join(" ")).unwrap();
    let mut eliminated = Vec::new();
    for step in &t.steps {
        if step.scores[step.vetoed] == 0 {
            eliminated.push(label(&profile.committees[step.vetoed]));
        }
    }
    writeln!(
        s,
        "vetoes: {}  eliminated in order: {}",
        t.steps.len(),
        eliminated.join(" ")
    )
    .unwrap();
    writeln!(s, "winner: {}", label(&profile.committees[t.winner])).unwrap();
    s
}

fn cmd_vote(
    source: &Source,
    profile_path: Option<&Path>,
    cost: &str,
    ls: &[u64],
    order: Option<&[usize]>,
    order_seed: Option<u64>,
) -> Result<(), CliError> {
    let cost: ClientCost = cost
        .parse()
        .map_err(|e: ObjectiveError| CliError::Usage(format!("cost: {e}")))?;
    let (inst, profile) = match profile_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            (None, OrdinalProfile::from_json(&text)?)
        }
        None => {
            let (inst, _) = load(source)?;
            let p = induced_profile(&inst, cost)?;
            (Some(inst), p)
        }
    };
    let voters = profile.voter_count();
    let order: Vec<usize> = match (order, order_seed) {
        (Some(o), _) => o.to_vec(),
        (None, Some(seed)) => {
            let mut o: Vec<usize> = (0..voters).collect();
            o.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            o
        }
        (None, None) => (0..voters).collect(),
    };
    let t = plurality_veto(&profile, &order).map_err(|e| match e {
        VotingError::BadOrder { .. } => CliError::Usage(format!("order: {e}")),
        other => other.into(),
    })?;
    let label = |sol: &Solution| match &inst {
        Some(i) => i.display_solution(sol),
        None => format!("{:?}", sol.slots()),
    };
    let mut s = render_transcript(&profile, &t, &label);
    if let Some(inst) = &inst {
        let n = inst.total_weight();
        let ls: Vec<u64> = if ls.is_empty() {
            vec![1, n.div_ceil(2), n]
        } else {
            ls.to_vec()
        };
        let winner = &profile.committees[t.winner];
        for l in ls {
            let spec = ObjectiveSpec::new(Aggregator::LCentrum(l), cost);
            spec.validate(inst)
                .map_err(|e| CliError::Usage(format!("l: {e}")))?;
            writeln!(
                s,
                "distortion l={l}: {}",
                realized_distortion(inst, winner, spec)?
            )
            .unwrap();
        }
    }
    emit(None, &s)
}
