//! The `edi` command line: belief change, weight property checks, postulate
//! suites and the convergence experiment.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::belief::BeliefState;
use crate::classical::{dalal_revision, pma_update};
use crate::error::{EdiError, Result};
use crate::imaging::ChangeResult;
use crate::lab::{csv_string, emit_summary, run_convergence, ConvergenceTable, TrialConfig};
use crate::logic::{parse_formula, Vocabulary, World, WorldSet};
use crate::metric::PseudoDistance;
use crate::operators::{inner_weight, InnerKind, Operator, OperatorName};
use crate::postulates::{check_revision, check_update, PostulateReport, Status, SuiteConfig};
use crate::rational::{parse_rational, to_decimal_string, to_fraction_string, Rational};
use crate::weights::{
    bc_weight, check_weight_properties, cls_rev_weight, cls_upd_weight, dct_rev_weight, dct_upd_weight, gi_weight,
    li_weight, retentive_weight, zero_weight, Property, WeightFunction,
};

const DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "edi", version, about = "Expected distance imaging over propositional worlds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Human,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Revision,
    Update,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a belief change operator to a state file.
    Change {
        #[arg(long)]
        op: String,
        #[arg(long, default_value = "rcp")]
        inner: String,
        #[arg(long, default_value = "1")]
        eta: String,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        evidence: String,
        /// Apply the operator this many times and print every step.
        #[arg(long)]
        iterations: Option<usize>,
        /// Also print the normalizer γ.
        #[arg(long)]
        verbose: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        distance: Option<PathBuf>,
    },
    /// Check a weight function against the weight properties.
    CheckWeights {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value = "1")]
        eta: String,
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        /// Comma-separated properties that must hold.
        #[arg(long, value_delimiter = ',')]
        expect: Vec<String>,
        #[arg(long, default_value = "rcp")]
        inner: String,
        /// Priors are the grid with this denominator (default 2, or 1 at four atoms).
        #[arg(long)]
        grid: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        distance: Option<PathBuf>,
    },
    /// Check an operator against the revision or update postulates.
    Postulates {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        op: String,
        #[arg(long, default_value = "rcp")]
        inner: String,
        #[arg(long, default_value = "1")]
        eta: String,
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        /// Grid denominator (default 4 up to two atoms, else 2).
        #[arg(long)]
        grid: Option<u32>,
        /// Include witnesses and instance counts for every postulate.
        #[arg(long)]
        report_all: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        distance: Option<PathBuf>,
    },
    /// Run the convergence experiment and emit its CSV.
    Converge {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        eta: String,
        #[arg(long, default_value_t = 3)]
        atoms: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        iterations: usize,
        #[arg(long)]
        seed: u64,
        /// Write the CSV to this file.
        #[arg(long, conflicts_with = "out_dir")]
        out: Option<PathBuf>,
        /// Write the CSV into this directory under its canonical name.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn ok(stdout: String) -> Self {
        CommandOutcome { code: 0, stdout, stderr: String::new() }
    }

    fn error(e: &EdiError) -> Self {
        CommandOutcome { code: 1, stdout: String::new(), stderr: format!("error: {}: {e}\n", e.name()) }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                CommandOutcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                CommandOutcome::ok(text)
            }
        }
    }
}

pub fn execute(command: Command) -> CommandOutcome {
    let result = match command {
        Command::Change { op, inner, eta, state, evidence, iterations, verbose, format, distance } => {
            cmd_change(&op, &inner, &eta, &state, &evidence, iterations, verbose, format, distance.as_deref())
        }
        Command::CheckWeights { weight, eta, atoms, expect, inner, grid, format, distance } => {
            cmd_check_weights(&weight, &eta, atoms, &expect, &inner, grid, format, distance.as_deref())
        }
        Command::Postulates { suite, op, inner, eta, atoms, grid, report_all, format, distance } => {
            cmd_postulates(suite, &op, &inner, &eta, atoms, grid, report_all, format, distance.as_deref())
        }
        Command::Converge { weight, eta, atoms, trials, iterations, seed, out, out_dir } => {
            cmd_converge(&weight, &eta, atoms, trials, iterations, seed, out.as_deref(), out_dir.as_deref())
        }
    };
    result.unwrap_or_else(|e| CommandOutcome::error(&e))
}

fn load_distance(path: Option<&Path>, vocab: Option<&Vocabulary>, atoms: usize) -> Result<Arc<PseudoDistance>> {
    match path {
        None => Ok(Arc::new(PseudoDistance::hamming(atoms))),
        Some(p) => {
            let (dv, d) = PseudoDistance::load(p)?;
            let matches = match vocab {
                Some(v) => dv.atoms() == v.atoms(),
                None => dv.len() == atoms,
            };
            if !matches {
                return Err(EdiError::VocabularyMismatch(format!(
                    "distance file is over ⟨{}⟩",
                    dv.atoms().join(",")
                )));
            }
            Ok(Arc::new(d))
        }
    }
}

fn human_state(b: &BeliefState) -> String {
    (0..b.world_count())
        .map(|i| {
            let w = World::new(i, b.atoms()).expect("index in range");
            format!("{}  {}\n", w.truth_vector(b.atoms()), to_decimal_string(b.prob(w), DIGITS))
        })
        .collect()
}

fn step_json(r: &ChangeResult, verbose: bool) -> Value {
    if verbose {
        json!({
            "posterior": r.posterior.probabilities_json(),
            "gamma": to_fraction_string(&r.gamma),
            "operator": r.operator,
        })
    } else {
        r.posterior.probabilities_json()
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_change(
    op: &str,
    inner: &str,
    eta: &str,
    state: &Path,
    evidence: &str,
    iterations: Option<usize>,
    verbose: bool,
    format: Format,
    distance: Option<&Path>,
) -> Result<CommandOutcome> {
    let name: OperatorName = op.parse()?;
    let inner: InnerKind = inner.parse()?;
    let eta = parse_rational(eta)?;
    let (vocab, b) = BeliefState::load(state)?;
    let d = load_distance(distance, Some(&vocab), vocab.len())?;
    let alpha = parse_formula(evidence, &vocab)?.models(&vocab);
    let operator = Operator::build(name, inner, eta, d)?;
    let steps = match iterations {
        None => vec![operator.apply(&b, &alpha)?],
        Some(t) => operator.iterate(&b, &alpha, t)?,
    };
    let text = match format {
        Format::Json => {
            let v = if iterations.is_some() {
                Value::Array(steps.iter().map(|r| step_json(r, verbose)).collect())
            } else {
                step_json(&steps[0], verbose)
            };
            pretty(&v)
        }
        Format::Human => {
            let mut out = String::new();
            for (k, r) in steps.iter().enumerate() {
                if iterations.is_some() {
                    out.push_str(&format!("step {}\n", k + 1));
                }
                out.push_str(&human_state(&r.posterior));
                if verbose {
                    out.push_str(&format!("gamma  {}\n", to_decimal_string(&r.gamma, DIGITS)));
                }
            }
            out
        }
    };
    Ok(CommandOutcome::ok(text))
}

/// Builds a weight function by name. Composite weights wrap `--inner`.
pub fn weight_by_name(name: &str, inner: InnerKind, eta: &Rational, d: Arc<PseudoDistance>) -> Result<WeightFunction> {
    let inner_fn = || inner_weight(inner, d.clone(), eta.clone());
    Ok(match name {
        "rcp" => inner_weight(InnerKind::Rcp, d, eta.clone())?,
        "dfr" => inner_weight(InnerKind::Dfr, d, eta.clone())?,
        "bc" => bc_weight(d.atoms()),
        "li" => li_weight(d, num_traits::Zero::zero())?,
        "gi" => gi_weight(d),
        "zero" => zero_weight(inner_fn()?),
        "retentive" => retentive_weight(inner_fn()?),
        "dct-rev" => dct_rev_weight(inner_fn()?),
        "cls-rev" => cls_rev_weight(dalal_revision(d.clone()), retentive_weight(inner_fn()?)),
        "cls-upd" => cls_upd_weight(pma_update(d.clone()), inner_fn()?),
        "dct-upd" => dct_upd_weight(inner_fn()?)?,
        other => return Err(EdiError::UnknownOperator(format!("no weight function named `{other}`"))),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_check_weights(
    weight: &str,
    eta: &str,
    atoms: usize,
    expect: &[String],
    inner: &str,
    grid: Option<u32>,
    format: Format,
    distance: Option<&Path>,
) -> Result<CommandOutcome> {
    let expected: Vec<Property> = expect
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse())
        .collect::<Result<_>>()?;
    let inner: InnerKind = inner.parse()?;
    let eta = parse_rational(eta)?;
    if atoms > 4 {
        return Err(EdiError::SuiteTooLarge(format!(
            "property checks are exhaustive over world quadruples; {atoms} atoms exceeds the limit of 4"
        )));
    }
    let d = load_distance(distance, None, atoms)?;
    let f = weight_by_name(weight, inner, &eta, d.clone())?;
    let evidence: Vec<WorldSet> = WorldSet::non_empty_subsets(atoms)?.collect();
    let den = grid.unwrap_or(if atoms >= 4 { 1 } else { 2 });
    let priors = BeliefState::grid(atoms, den)?;
    let report = check_weight_properties(&f, &d, &evidence, &priors)?;
    let missing: Vec<Property> = expected.iter().copied().filter(|p| !report.holds(*p)).collect();
    let stdout = match format {
        Format::Json => pretty(&report.to_json()),
        Format::Human => report.to_string(),
    };
    if missing.is_empty() {
        return Ok(CommandOutcome::ok(stdout));
    }
    let mut stderr = String::new();
    for p in &missing {
        stderr.push_str(&format!("expected property {} does not hold", p.as_str()));
        if let Some(w) = report.witness(*p) {
            stderr.push_str(&format!(": {w}"));
        }
        stderr.push('\n');
    }
    Ok(CommandOutcome { code: 1, stdout, stderr })
}

fn human_postulates(report: &PostulateReport, report_all: bool) -> String {
    if report_all {
        return report.to_string();
    }
    let mut out = format!("{}\n", report.operator);
    for (p, v) in &report.verdicts {
        let core = if p.is_core() { " (core)" } else { "" };
        out.push_str(&format!("  {:<6} {}{core}\n", p.symbol(), v.status.as_str()));
        if p.is_core() && v.status == Status::Violated {
            if let Some(w) = &v.witness {
                out.push_str(&format!("         {w}\n"));
            }
        }
    }
    out
}

fn summary_json(report: &PostulateReport) -> Value {
    let mut postulates = Map::new();
    for (p, v) in &report.verdicts {
        postulates.insert(p.id().into(), Value::String(v.status.as_str().into()));
    }
    json!({ "operator": report.operator, "postulates": Value::Object(postulates) })
}

#[allow(clippy::too_many_arguments)]
fn cmd_postulates(
    suite: Suite,
    op: &str,
    inner: &str,
    eta: &str,
    atoms: usize,
    grid: Option<u32>,
    report_all: bool,
    format: Format,
    distance: Option<&Path>,
) -> Result<CommandOutcome> {
    let name: OperatorName = op.parse()?;
    let inner: InnerKind = inner.parse()?;
    let eta = parse_rational(eta)?;
    let vocab = Vocabulary::numbered(atoms)?;
    let d = load_distance(distance, None, atoms)?;
    let operator = Operator::build(name, inner, eta, d)?;
    let cfg = grid.map_or(SuiteConfig::default_for(atoms), |denominator| SuiteConfig { denominator });
    let report = match suite {
        Suite::Revision => check_revision(&operator, &vocab, &cfg)?,
        Suite::Update => check_update(&operator, &vocab, &cfg)?,
    };
    let stdout = match (format, report_all) {
        (Format::Json, true) => pretty(&report.to_json()),
        (Format::Json, false) => pretty(&summary_json(&report)),
        (Format::Human, all) => human_postulates(&report, all),
    };
    let violations = report.core_violations();
    if violations.is_empty() {
        return Ok(CommandOutcome::ok(stdout));
    }
    let mut stderr = String::new();
    for p in violations {
        stderr.push_str(&format!("core postulate {} violated", p.symbol()));
        if let Some(w) = report.witness(p) {
            stderr.push_str(&format!(": {w}"));
        }
        stderr.push('\n');
    }
    Ok(CommandOutcome { code: 1, stdout, stderr })
}

#[allow(clippy::too_many_arguments)]
fn cmd_converge(
    weight: &str,
    eta: &str,
    atoms: usize,
    trials: usize,
    iterations: usize,
    seed: u64,
    out: Option<&Path>,
    out_dir: Option<&Path>,
) -> Result<CommandOutcome> {
    let weight: InnerKind = weight.parse()?;
    let eta = parse_rational(eta)?;
    let cfg = TrialConfig::new(weight, eta, atoms, trials, iterations, seed);
    let table: ConvergenceTable = run_convergence(&cfg)?;
    let csv = csv_string(&table)?;
    let target = match (out, out_dir) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(cfg.file_name())),
        (None, None) => None,
    };
    match target {
        None => Ok(CommandOutcome::ok(csv)),
        Some(path) => {
            std::fs::write(&path, csv)?;
            let mut text = emit_summary(&table)?;
            text.push_str(&format!("wrote {}\n", path.display()));
            Ok(CommandOutcome::ok(text))
        }
    }
}
