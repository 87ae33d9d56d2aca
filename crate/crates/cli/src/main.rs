//! `qproj`: apply update rules, evaluate divergences, run entropic projections
//! and the verification harness from JSON inputs.
//!
//! Exit codes: 0 success, 2 invalid input, 3 solver did not converge,
//! 4 support violation (including an infinite divergence requested as finite).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qproj_core::json::{MatrixJson, ResolutionJson, StateJson};
use qproj_core::project::harness::classical_mre;
use qproj_core::specmat::c;
use qproj_core::{
    entropic_project, rules, sampling_oracle, verify, ClassicalEvidence, ConstraintSet, DensityOperator,
    DivergenceKind, Error, ExtendedReal, JeffreyWeights, JointTable, OrthogonalResolution, ProjectionResult,
    Projector, SolverConfig, TheoremId,
};

#[derive(Parser, Debug)]
#[command(name = "qproj", version, about = "Quantum update rules as entropic projections")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Read the input document from a file.
    #[arg(long, global = true, conflicts_with = "json")]
    input: Option<PathBuf>,

    /// Inline input document.
    #[arg(long, global = true)]
    json: Option<String>,

    /// Master seed.
    #[arg(long, global = true, env = "QEP_SEED", default_value_t = 0)]
    seed: u64,

    /// Stationarity tolerance of the solver.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Worker threads for harness trials.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the output document here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply an update rule to a state.
    Update {
        #[arg(long, value_enum)]
        rule: Rule,
        /// Jeffrey weights, comma separated (overrides the input's `weights`).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Evaluate a divergence between `first` and `second`.
    Distance {
        #[arg(long)]
        kind: DivergenceKind,
        /// Fail with exit code 4 instead of printing `inf`.
        #[arg(long)]
        require_finite: bool,
    },
    /// Minimize a divergence over a constraint set.
    Project {
        #[arg(long)]
        kind: DivergenceKind,
        #[arg(long, value_enum)]
        constraint: Constraint,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Number of solver restarts.
        #[arg(long, default_value_t = 1)]
        restarts: usize,
    },
    /// Run the randomized verification harness for one theorem.
    Verify {
        #[arg(long)]
        theorem: TheoremId,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Report::Csv)]
        report: Report,
    },
    /// Update a classical joint table by Bayes or Jeffrey and by minimum relative entropy.
    Classical {
        #[arg(long, value_enum)]
        evidence: Evidence,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Rule {
    WeakLueders,
    StrongLueders,
    SemiStrong,
    VonNeumann,
    QuantumJeffrey,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Constraint {
    /// Commutant of the resolution.
    Ql,
    /// Trace-pinned by the weights.
    Qj,
    /// Face of the projector.
    Sl,
    /// Positive operators supported in the projector.
    Block,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Report {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Evidence {
    Sharp,
    Soft,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SupportViolation(_)
            | Error::ZeroProbability(_)
            | Error::ZeroEvidence
            | Error::InfiniteDivergence(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Output document and exit code of a successful run (3 when the solver did
/// not converge but produced a result).
struct Output {
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.out.clone();
    match run(cli) {
        Ok(output) => {
            let written = match &out_path {
                Some(path) => fs::write(path, &output.text),
                None => {
                    print!("{}", output.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if output.code == 3 {
                eprintln!("warning: solver did not converge");
            }
            ExitCode::from(output.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let cfg = solver_config(&cli)?;
    match &cli.command {
        Command::Verify {
            theorem,
            dims,
            trials,
            report,
        } => {
            if *trials == 0 {
                return Err(invalid("--trials must be positive"));
            }
            let dims = dims.clone().unwrap_or_default();
            let r = verify(*theorem, &dims, *trials, cli.seed, &cfg, cli.jobs)?;
            if let Some(passed) = r.passed {
                eprintln!(
                    "{}: {} (max deviation {:e})",
                    r.theorem,
                    if passed { "pass" } else { "FAIL" },
                    r.max_deviation
                );
            }
            let text = match report {
                Report::Csv => r.to_csv()?,
                Report::Json => r.to_json()? + "\n",
            };
            Ok(Output { text, code: 0 })
        }
        command => {
            let input = read_input(&cli)?;
            let (value, code) = match command {
                Command::Update { rule, weights } => (update(&input, *rule, weights.as_deref())?, 0),
                Command::Distance { kind, require_finite } => distance(&input, *kind, *require_finite)?,
                Command::Project {
                    kind,
                    constraint,
                    weights,
                    restarts,
                } => {
                    let cfg = SolverConfig {
                        restarts: *restarts,
                        ..cfg
                    };
                    project(&input, *kind, *constraint, weights.as_deref(), &cfg)?
                }
                Command::Classical { evidence } => classical(&input, *evidence, &cfg)?,
                Command::Verify { .. } => unreachable!("handled above"),
            };
            let text = serde_json::to_string_pretty(&value).map_err(|e| invalid(e.to_string()))? + "\n";
            Ok(Output { text, code })
        }
    }
}

fn solver_config(cli: &Cli) -> Result<SolverConfig, Failure> {
    let mut cfg = SolverConfig {
        seed: cli.seed,
        ..SolverConfig::default()
    };
    if let Some(t) = cli.tol {
        cfg.grad_tol = t;
    }
    if let Some(m) = cli.max_iter {
        cfg.max_iter = m;
    }
    if cli.jobs == Some(0) {
        return Err(invalid("--jobs must be positive"));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn read_input(cli: &Cli) -> Result<Value, Failure> {
    let text = match (&cli.input, &cli.json) {
        (Some(path), None) => {
            fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?
        }
        (None, Some(s)) => s.clone(),
        _ => return Err(invalid("provide the input with --input PATH or --json TEXT")),
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("malformed JSON: {e}")))
}

fn field<T: serde::de::DeserializeOwned>(input: &Value, name: &str) -> Result<T, Failure> {
    let v = input
        .get(name)
        .ok_or_else(|| invalid(format!("input lacks `{name}`")))?;
    serde_json::from_value(v.clone()).map_err(|e| invalid(format!("bad `{name}`: {e}")))
}

fn optional<T: serde::de::DeserializeOwned>(input: &Value, name: &str) -> Result<Option<T>, Failure> {
    match input.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => field(input, name).map(Some),
    }
}

fn state(input: &Value, name: &str) -> Result<DensityOperator, Failure> {
    Ok(field::<StateJson>(input, name)?.to_state()?)
}

fn resolution(input: &Value) -> Result<OrthogonalResolution, Failure> {
    Ok(field::<ResolutionJson>(input, "resolution")?.to_resolution()?)
}

/// The event projector: an explicit `projector` matrix, or the 1-indexed
/// `event` member of `resolution`.
fn projector(input: &Value) -> Result<Projector, Failure> {
    if let Some(m) = optional::<MatrixJson>(input, "projector")? {
        return Ok(Projector::new(m.to_matrix()?)?);
    }
    let r = resolution(input)?;
    let k: usize = field(input, "event")?;
    r.members()
        .get(k.wrapping_sub(1))
        .cloned()
        .ok_or_else(|| invalid(format!("event {k} out of range 1..={}", r.len())))
}

fn weights(input: &Value, flag: Option<&[f64]>) -> Result<JeffreyWeights, Failure> {
    let w = match flag {
        Some(w) => w.to_vec(),
        None => field(input, "weights")?,
    };
    Ok(JeffreyWeights::new(w)?)
}

fn state_json(s: &DensityOperator) -> Result<Value, Failure> {
    serde_json::to_value(StateJson::from_state(s)).map_err(|e| invalid(e.to_string()))
}

fn update(input: &Value, rule: Rule, flag_weights: Option<&[f64]>) -> Result<Value, Failure> {
    if let Rule::VonNeumann = rule {
        let re: Vec<f64> = field(input, "vector_re")?;
        let im: Vec<f64> = optional(input, "vector_im")?.unwrap_or_else(|| vec![0.0; re.len()]);
        if im.len() != re.len() {
            return Err(invalid("vector_re and vector_im differ in length"));
        }
        let xi = qproj_core::DVector::from_iterator(re.len(), re.iter().zip(&im).map(|(&a, &b)| c(a, b)));
        let out = rules::strong_von_neumann(&xi, &projector(input)?)?;
        return Ok(json!({
            "vector_re": out.iter().map(|z| z.re).collect::<Vec<_>>(),
            "vector_im": out.iter().map(|z| z.im).collect::<Vec<_>>(),
        }));
    }
    let rho = state(input, "state")?;
    let out = match rule {
        Rule::WeakLueders => rules::weak_lueders(&rho, &resolution(input)?)?,
        Rule::StrongLueders => rules::strong_lueders(&rho, &projector(input)?)?,
        Rule::SemiStrong => {
            let subset: Vec<usize> = field(input, "subset")?;
            if subset.contains(&0) {
                return Err(invalid("subset indices are 1-indexed"));
            }
            let zero_based: Vec<usize> = subset.iter().map(|k| k - 1).collect();
            rules::semi_strong_lueders(&rho, &resolution(input)?, &zero_based)?
        }
        Rule::QuantumJeffrey => rules::quantum_jeffrey(&rho, &resolution(input)?, &weights(input, flag_weights)?)?,
        Rule::VonNeumann => unreachable!("handled above"),
    };
    state_json(&out)
}

fn distance(input: &Value, kind: DivergenceKind, require_finite: bool) -> Result<(Value, u8), Failure> {
    let first = state(input, "first")?;
    let second = state(input, "second")?;
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch(first.dim(), second.dim()).into());
    }
    let v = qproj_core::diverge::evaluate(kind, &first, &second);
    if require_finite && !v.is_finite() {
        return Err(Error::InfiniteDivergence(format!("{kind} is +inf for these arguments")).into());
    }
    Ok((extended(v), 0))
}

fn extended(v: ExtendedReal) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn constraint_set(input: &Value, c: Constraint, flag_weights: Option<&[f64]>) -> Result<ConstraintSet, Failure> {
    Ok(match c {
        Constraint::Ql => ConstraintSet::CommutantQL(resolution(input)?),
        Constraint::Qj => ConstraintSet::TracePinnedQqJ(resolution(input)?, weights(input, flag_weights)?),
        Constraint::Sl => ConstraintSet::FaceQsL(projector(input)?),
        Constraint::Block => ConstraintSet::SupportBlock(projector(input)?),
    })
}

/// Evaluation budget of the sampling oracle for non-smooth objectives.
const ORACLE_BUDGET: usize = 20_000;

fn project(
    input: &Value,
    kind: DivergenceKind,
    c: Constraint,
    flag_weights: Option<&[f64]>,
    cfg: &SolverConfig,
) -> Result<(Value, u8), Failure> {
    let psi = state(input, "state")?;
    let k = constraint_set(input, c, flag_weights)?;
    let (result, method) = if kind.is_smooth() {
        (entropic_project(kind, &psi, &k, cfg)?, "solver")
    } else {
        (sampling_oracle(kind, &psi, &k, ORACLE_BUDGET, cfg.seed)?, "sampling-oracle")
    };
    let code = if result.converged { 0 } else { 3 };
    Ok((projection_json(&result, method)?, code))
}

fn projection_json(r: &ProjectionResult, method: &str) -> Result<Value, Failure> {
    Ok(json!({
        "method": method,
        "minimizer": state_json(&r.minimizer)?,
        "objective": extended(r.objective),
        "grad_residual": r.grad_residual,
        "feas_residual": r.feas_residual,
        "iterations": r.iterations,
        "converged": r.converged,
    }))
}

fn classical(input: &Value, evidence: Evidence, cfg: &SolverConfig) -> Result<(Value, u8), Failure> {
    let rows: Vec<Vec<f64>> = field(input, "table")?;
    let table = JointTable::new(&rows)?;
    let ev = match evidence {
        Evidence::Sharp => {
            let b: usize = field(input, "observation")?;
            if b == 0 {
                return Err(invalid("observation is 1-indexed"));
            }
            ClassicalEvidence::Sharp(b - 1)
        }
        Evidence::Soft => ClassicalEvidence::Soft(field(input, "evidence")?),
    };
    let rule = rules::classical_update(&table, &ev)?;
    let (mre, run) = classical_mre(&table, &ev, cfg)?;
    let tv = 0.5 * rule.iter().zip(&mre).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let code = if run.converged { 0 } else { 3 };
    Ok((
        json!({
            "rule": match ev { ClassicalEvidence::Sharp(_) => "bayes", ClassicalEvidence::Soft(_) => "jeffrey" },
            "posterior": rule,
            "mre_posterior": mre,
            "total_variation": tv,
            "iterations": run.iterations,
            "converged": run.converged,
        }),
        code,
    ))
}
