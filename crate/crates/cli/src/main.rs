//! `onticlab` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain or input error,
//! 3 inconclusive witness under `--require-nonlocal`.

mod grid;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use onticlab::ensembles::{six_decompositions_with_phase, Decomposition};
use onticlab::onticmodel::{
    deficit_model, epistemicity_degree, find_omega, ontic_overlap, verify_born, OnticModel, OnticSpace,
    DEFAULT_POINTS,
};
use onticlab::pncheck::{build_lemma1_instance_with, Arithmetic, check, explain, FeasibilityReport, Verdict};
use onticlab::qstate::{schmidt, BipartiteState, BlochVector, PureState};
use onticlab::scalar::{format_rational, Scalar};
use onticlab::steering::{assemblage_checks, steer, witness_rank2, witness_rank_gt2, WitnessVerdict};
use onticlab::Rational;
use serde::Serialize;
use serde_json::{json, Value};

use grid::{Grid, Pair, RationalArg, Vec3};
use report::{csv, render, Fixtures};

#[derive(Parser)]
#[command(name = "onticlab", version, about = "Ontological-model toolkit: contextuality certificates, ψ-epistemic models, steering")]
struct Cli {
    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the six decompositions of ½(I + q n̂·σ)
    Decomp(DecompArgs),
    /// Decide preparation contextuality of the six-decomposition instance
    Pncheck(PncheckArgs),
    /// Ontological-model diagnostics
    #[command(subcommand)]
    Model(ModelCommand),
    /// Steer Bob's half of a shared state onto a target decomposition
    Steer(SteerArgs),
    /// Build a nonlocality witness for a shared pure state
    Witness(WitnessArgs),
    /// Run a command over a parameter grid and emit CSV
    #[command(subcommand)]
    Sweep(SweepCommand),
}

#[derive(Args, Serialize)]
struct QubitArgs {
    /// Mixedness |r| of the target Bloch vector
    #[arg(long)]
    q: RationalArg,
    /// Rotation of the equatorial triple, in radians
    #[arg(long, default_value_t = 0.0)]
    phase: f64,
    /// Bloch direction of the target
    #[arg(long, default_value = "0,0,1")]
    n_hat: Vec3,
}

#[derive(Args, Serialize)]
struct ArithmeticArgs {
    /// Exact rational arithmetic
    #[arg(long, conflicts_with = "eps")]
    rational: bool,
    /// Tolerance for float arithmetic
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
}

#[derive(Args, Serialize)]
struct DecompArgs {
    #[command(flatten)]
    #[serde(flatten)]
    qubit: QubitArgs,
    /// Emit exact rational weights
    #[arg(long)]
    rational: bool,
}

#[derive(Args, Serialize)]
struct PncheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    qubit: QubitArgs,
    #[command(flatten)]
    #[serde(flatten)]
    arithmetic: ArithmeticArgs,
    /// Print each branch's derivation instead of JSON
    #[arg(long)]
    #[serde(skip)]
    explain: bool,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModelArg {
    Ks,
    Deficit,
}

#[derive(Args, Serialize)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "ks")]
    model: ModelArg,
    /// Private-tag weight of the deficit model
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Quadrature size
    #[arg(long, env = "ONTICLAB_POINTS", default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Seeded Monte-Carlo points instead of the Fibonacci lattice
    #[arg(long)]
    monte_carlo: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Compare ∫ξμ with the Born rule on random pairs
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Ontic overlap, epistemicity and Ω for one pair of Bloch directions
    Overlap {
        #[command(flatten)]
        model: ModelArgs,
        /// `φ;ψ` as `x,y,z;x,y,z`
        #[arg(long, default_value = "1,0,0;0,0,1")]
        pair: Pair,
    },
}

#[derive(Args, Serialize)]
struct SteerArgs {
    /// Shared state JSON
    #[arg(long)]
    state: PathBuf,
    /// Target decomposition JSON
    #[arg(long)]
    target: PathBuf,
}

#[derive(Args, Serialize)]
struct WitnessArgs {
    /// Shared state JSON
    #[arg(long)]
    state: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    /// Weight of ψ_n in the second two-qubit preparation
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    /// First member of the range decomposition (Schmidt rank ≥ 3), as a pure-state JSON
    #[arg(long)]
    psi1: Option<PathBuf>,
    /// Exit with code 3 unless the verdict is Nonlocal
    #[arg(long)]
    require_nonlocal: bool,
}

#[derive(Subcommand)]
enum SweepCommand {
    /// Contextuality verdicts over a q grid
    Pncheck {
        /// Grid `start:stop:step` (inclusive) or a single value
        #[arg(long)]
        q: Grid,
        #[arg(long, default_value_t = 0.0)]
        phase: f64,
        #[arg(long, default_value = "0,0,1")]
        n_hat: Vec3,
        #[command(flatten)]
        arithmetic: ArithmeticArgs,
    },
    /// Deficit-model overlap and epistemicity over an ε grid
    ModelOverlap {
        #[arg(long)]
        epsilon: Grid,
        #[arg(long, default_value = "1,0,0;0,0,1")]
        pair: Pair,
        #[arg(long, env = "ONTICLAB_POINTS", default_value_t = DEFAULT_POINTS)]
        points: usize,
    },
}

enum Failure {
    Domain(String),
    Inconclusive,
}

impl From<onticlab::Error> for Failure {
    fn from(e: onticlab::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Domain(e)
    }
}

type Run<T> = Result<T, Failure>;

/// Output of one command, plus a deferred failure raised after emission.
struct Output {
    text: String,
    failure: Option<Failure>,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, failure: None }
    }
}

fn config<T: Serialize>(command: &str, args: &T) -> Value {
    let mut v = serde_json::to_value(args).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut v {
        m.insert("command".into(), json!(command));
    }
    v
}

fn bloch(v: Vec3) -> Run<BlochVector> {
    Ok(BlochVector::new(v.0)?)
}

fn space(args: &ModelArgs) -> Run<OnticSpace> {
    Ok(if args.monte_carlo {
        OnticSpace::monte_carlo(args.points, args.seed)?
    } else {
        OnticSpace::fibonacci(args.points)?
    })
}

fn model(args: &ModelArgs) -> Run<OnticModel> {
    let space = space(args)?;
    Ok(match args.model {
        ModelArg::Ks => onticlab::onticmodel::ks_model(space)?,
        ModelArg::Deficit => deficit_model(space, args.epsilon)?,
    })
}

fn decomp(args: &DecompArgs) -> Run<Output> {
    let n = bloch(args.qubit.n_hat)?;
    let result = if args.rational {
        serde_json::to_value(six_decompositions_with_phase(args.qubit.q.0.clone(), &n, args.qubit.phase)?)
    } else {
        serde_json::to_value(six_decompositions_with_phase(args.qubit.q.to_f64(), &n, args.qubit.phase)?)
    }
    .map_err(|e| e.to_string())?;
    Ok(Output::ok(render("decomp", &config("decomp", args), 0, &Fixtures::default(), &json!({ "decompositions": result }))))
}

fn lemma1_report<W: Scalar>(q: W, qubit: &QubitArgs, eps: f64) -> Run<FeasibilityReport<W>> {
    let mut instance = build_lemma1_instance_with(q, &bloch(qubit.n_hat)?, qubit.phase)?;
    if !W::EXACT {
        instance = instance.with_arithmetic(Arithmetic::Float { eps })?;
    }
    Ok(check(&instance))
}

fn pncheck(args: &PncheckArgs) -> Run<Output> {
    let (json, text) = if args.arithmetic.rational {
        let r = lemma1_report(args.qubit.q.0.clone(), &args.qubit, 0.0)?;
        (r.to_json(), explain(&r))
    } else {
        let r = lemma1_report(args.qubit.q.to_f64(), &args.qubit, args.arithmetic.eps)?;
        (r.to_json(), explain(&r))
    };
    if args.explain {
        return Ok(Output::ok(text));
    }
    Ok(Output::ok(render("pncheck", &config("pncheck", args), 0, &Fixtures::default(), &json)))
}

fn model_cmd(cmd: &ModelCommand) -> Run<Output> {
    match cmd {
        ModelCommand::Verify { model: args, trials } => {
            let m = model(args)?;
            let report = verify_born(&m, *trials, args.seed)?;
            let mut result = serde_json::to_value(&report).map_err(|e| e.to_string())?;
            result["tolerance"] = json!(m.born_tolerance());
            result["passed"] = json!(report.max_deviation <= m.born_tolerance());
            let mut cfg = config("model verify", args);
            cfg["trials"] = json!(trials);
            Ok(Output::ok(render("model-verify", &cfg, args.seed, &Fixtures::default(), &result)))
        }
        ModelCommand::Overlap { model: args, pair } => {
            let m = model(args)?;
            let result = overlap_row(&m, pair)?;
            let mut cfg = config("model overlap", args);
            cfg["pair"] = json!(pair);
            Ok(Output::ok(render("model-overlap", &cfg, args.seed, &Fixtures::default(), &result)))
        }
    }
}

fn overlap_row(m: &OnticModel, pair: &Pair) -> Run<Value> {
    let phi = PureState::from_bloch(&bloch(pair.0)?)?;
    let psi = PureState::from_bloch(&bloch(pair.1)?)?;
    let basis = [phi.clone(), phi.qubit_complement()?];
    let omega = find_omega(m, &phi, &psi, &basis)?;
    Ok(json!({
        "model": m.name(),
        "kind": m.kind(),
        "pair": [pair.0, pair.1],
        "born": phi.overlap(&psi),
        "overlap": ontic_overlap(m, &phi, &psi)?,
        "f": epistemicity_degree(m, &phi, &psi)?,
        "omega_measure": omega.set.measure(),
        "omega_mass": omega.checks.psi_mass,
        "omega_disjoint": omega.checks.disjoint_from_phi,
    }))
}

fn steer_cmd(args: &SteerArgs) -> Run<Output> {
    let mut fixtures = Fixtures::default();
    let state: BipartiteState = fixtures.read_json(&args.state)?;
    let target: Decomposition = fixtures.read_json(&args.target)?;
    let (povm, assemblage) = steer(&state, &target)?;
    let checks = assemblage_checks(&povm, &assemblage, &target);
    let result = json!({
        "povm": povm,
        "assemblage": assemblage,
        "checks": checks,
        "passed": checks.passes(),
    });
    Ok(Output::ok(render("steer", &config("steer", args), 0, &fixtures, &result)))
}

fn witness_cmd(args: &WitnessArgs) -> Run<Output> {
    let mut fixtures = Fixtures::default();
    let state: BipartiteState = fixtures.read_json(&args.state)?;
    let psi1: Option<PureState> = args.psi1.as_ref().map(|p| fixtures.read_json(p)).transpose()?;
    let witness = if schmidt(&state).rank() >= 3 {
        witness_rank_gt2(&state, psi1.as_ref())?
    } else {
        witness_rank2(&state, &model(&args.model)?, args.r)?
    };
    let result = serde_json::to_value(&witness).map_err(|e| e.to_string())?;
    let text = render("witness", &config("witness", args), args.model.seed, &fixtures, &result);
    let failure = (args.require_nonlocal && witness.verdict != WitnessVerdict::Nonlocal).then_some(Failure::Inconclusive);
    Ok(Output { text, failure })
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Contextual => "Contextual",
        Verdict::NotDecided => "NotDecided",
    }
}

fn sweep_cmd(cmd: &SweepCommand) -> Run<Output> {
    let version = report::VERSION;
    match cmd {
        SweepCommand::Pncheck {
            q,
            phase,
            n_hat,
            arithmetic,
        } => {
            let n = [n_hat.0[0], n_hat.0[1], n_hat.0[2]].map(|x| x.to_string()).join(" ");
            let mode = if arithmetic.rational { "exact".to_string() } else { format!("float:{}", arithmetic.eps) };
            let mut rows = Vec::new();
            for point in q.points() {
                let qubit = QubitArgs {
                    q: RationalArg(point.clone()),
                    phase: *phase,
                    n_hat: *n_hat,
                };
                let (verdict, infeasible, total) = if arithmetic.rational {
                    let r = lemma1_report::<Rational>(point.clone(), &qubit, 0.0)?;
                    (r.verdict, r.infeasible_count(), r.branches.len())
                } else {
                    let r = lemma1_report(qubit.q.to_f64(), &qubit, arithmetic.eps)?;
                    (r.verdict, r.infeasible_count(), r.branches.len())
                };
                rows.push(vec![
                    format_rational(point),
                    phase.to_string(),
                    n.clone(),
                    mode.clone(),
                    verdict_str(verdict).to_string(),
                    infeasible.to_string(),
                    total.to_string(),
                    version.to_string(),
                ]);
            }
            let header = ["q", "phase", "n_hat", "arithmetic", "verdict", "infeasible", "branches", "version"];
            Ok(Output::ok(csv(&header, &rows)))
        }
        SweepCommand::ModelOverlap { epsilon, pair, points } => {
            let base = OnticSpace::fibonacci(*points)?;
            let mut rows = Vec::new();
            for e in epsilon.points() {
                let eps = e.to_f64();
                let m = deficit_model(base.clone(), eps)?;
                let row = overlap_row(&m, pair)?;
                let f = row["f"].as_f64().map_or("undefined".to_string(), |f| f.to_string());
                rows.push(vec![
                    format_rational(e),
                    points.to_string(),
                    row["born"].to_string(),
                    row["overlap"].to_string(),
                    f,
                    row["omega_mass"].to_string(),
                    version.to_string(),
                ]);
            }
            let header = ["epsilon", "points", "born", "overlap", "f", "omega_mass", "version"];
            Ok(Output::ok(csv(&header, &rows)))
        }
    }
}

fn run(cli: &Cli) -> Run<Output> {
    match &cli.command {
        Command::Decomp(a) => decomp(a),
        Command::Pncheck(a) => pncheck(a),
        Command::Model(c) => model_cmd(c),
        Command::Steer(a) => steer_cmd(a),
        Command::Witness(a) => witness_cmd(a),
        Command::Sweep(c) => sweep_cmd(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = match run(&cli) {
        Ok(o) => o,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Inconclusive) => return ExitCode::from(3),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &output.text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", output.text),
    }
    match output.failure {
        Some(Failure::Inconclusive) => {
            eprintln!("verdict is not Nonlocal");
            ExitCode::from(3)
        }
        Some(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        None => ExitCode::SUCCESS,
    }
}
