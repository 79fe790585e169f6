//! Command-line front end: expression and identity-file input, JSON output
//! on stdout, diagnostics on stderr.
//!
//! Exit codes: 0 success; 1 an identity or precondition fails; 2 parse or
//! type errors in the input; 3 a theorem violation (the engine refuted an
//! identity that holds unconditionally - always a bug, never bad input).

mod elaborate;
mod expr;
mod fuzz;
mod identity_file;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fident_core::tracemaps::TraceMap;
use fident_core::{
    adjugate_solve, cayley_hamilton_check, fi_decompose, fi_decompose_oracle, fi_verify,
    generic_matrix, l2_reduce, standard_form, AdjugateOutcome, Error as CoreError,
};

use elaborate::{elaborate, Elaborated};
use fuzz::{FuzzParams, Suite};
use identity_file::{elaborate_family, parse_identity_file};

#[derive(Parser)]
#[command(
    name = "fident",
    version,
    about = "Exact symbolic engine for one-variable functional identities on matrix algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic polynomial, adjugate and determinant of the generic matrix
    Charpoly {
        /// Matrix size
        #[arg(long)]
        n: usize,
    },
    /// Check that an identity file's left side is central and print the scalar
    Verify {
        /// Matrix size; must match the file's `n` when given
        #[arg(long)]
        n: Option<usize>,
        /// Identity file (n, m, q0..qm bindings)
        #[arg(long)]
        file: PathBuf,
    },
    /// Standard form of a commuting map given as an expression
    StandardForm {
        #[arg(long)]
        n: usize,
        /// Map expression, e.g. "tr(x)*x - x^2"
        #[arg(long)]
        expr: String,
    },
    /// Reduce maps q, r with [q(x)x - x r(x), x] = 0 to p with [[q - x p, x], x] = 0
    L2 {
        #[arg(long)]
        n: usize,
        /// Left map expression
        #[arg(long)]
        q: String,
        /// Right map expression (same degree as q)
        #[arg(long)]
        r: String,
    },
    /// Solve q(x) x^m central: q = lambda adj(x^m) with central lambda
    AdjugateSolve {
        #[arg(long)]
        n: usize,
        /// Sandwich exponent m >= 1
        #[arg(long)]
        m: usize,
        #[arg(long)]
        expr: String,
    },
    /// Decompose a functional identity file, cross-checking with the oracle
    Decompose {
        /// Matrix size; must match the file's `n` when given
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        file: PathBuf,
        /// Skip the independent linear-algebra oracle
        #[arg(long)]
        no_oracle: bool,
    },
    /// Run a seeded deterministic fuzz suite and print a JSON report
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        cases: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// One of: ring, standard-form, engel, l2, adjugate, decompose
        #[arg(long, default_value = "decompose")]
        suite: String,
    },
}

/// Failure classes mapped onto exit codes.
enum Failure {
    /// Exit 1: the input is well-formed but is not an identity or violates
    /// an operation's precondition.
    Identity(String),
    /// Exit 2: unparseable or ill-typed input.
    Input(String),
    /// Exit 3: the engine contradicted a theorem; carries full state.
    Violation(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Identity(_) => 1,
            Failure::Input(_) => 2,
            Failure::Violation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Identity(m) | Failure::Input(m) | Failure::Violation(m) => m,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(err: CoreError) -> Failure {
        match err {
            CoreError::NotAnIdentity(_)
            | CoreError::NotCommuting
            | CoreError::PreconditionFailed(_)
            | CoreError::DegreeObstruction { .. } => Failure::Identity(err.to_string()),
            CoreError::TheoremViolation(_)
            | CoreError::InternalInconsistency(_)
            | CoreError::NoSolution(_) => Failure::Violation(err.to_string()),
            _ => Failure::Input(err.to_string()),
        }
    }
}

fn diag(message: &str) {
    let color = std::io::stderr().is_terminal() && std::env::var_os("NO_COLOR").is_none();
    if color {
        eprintln!("\x1b[31merror:\x1b[0m {message}");
    } else {
        eprintln!("error: {message}");
    }
}

fn emit(value: &Value) {
    use std::io::Write;
    let rendered = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{rendered}").is_err() {
        // Downstream closed the pipe; there is nothing left to report.
        std::process::exit(0);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            diag(failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Charpoly { n } => charpoly(n),
        Command::Verify { n, file } => verify(n, &file),
        Command::StandardForm { n, expr } => standard_form_cmd(n, &expr),
        Command::L2 { n, q, r } => l2_cmd(n, &q, &r),
        Command::AdjugateSolve { n, m, expr } => adjugate_solve_cmd(n, m, &expr),
        Command::Decompose { n, file, no_oracle } => decompose_cmd(n, &file, no_oracle),
        Command::Fuzz {
            seed,
            cases,
            n,
            d,
            suite,
        } => fuzz_cmd(seed, cases, n, d, &suite),
    }
}

fn parse_map(text: &str, n: usize, role: &str) -> Result<Elaborated, Failure> {
    let ast = expr::parse(text).map_err(|e| Failure::Input(format!("in {role}: {e}")))?;
    elaborate(&ast, n).map_err(|e| Failure::Input(format!("in {role}: {e}")))
}

fn charpoly(n: usize) -> Result<ExitCode, Failure> {
    let y = generic_matrix(n).map_err(Failure::from)?;
    let data = fident_core::faddeev_leverrier(&y);
    let report = json!({
        "command": "charpoly",
        "n": n,
        "coefficients": data.coefficients.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        "adjugate": data.adjugate.to_json(),
        "determinant": data.determinant.to_json(),
        "cayley_hamilton": cayley_hamilton_check(&y),
    });
    emit(&report);
    Ok(ExitCode::SUCCESS)
}

fn load_family(n: Option<usize>, path: &PathBuf) -> Result<(usize, usize, Vec<TraceMap>), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let file = parse_identity_file(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if let Some(n) = n {
        if n != file.n {
            return Err(Failure::Input(format!(
                "--n {n} conflicts with the file's n = {}",
                file.n
            )));
        }
    }
    let maps = elaborate_family(&file).map_err(Failure::Input)?;
    Ok((file.n, file.m, maps))
}

fn verify(n: Option<usize>, path: &PathBuf) -> Result<ExitCode, Failure> {
    let (n, m, maps) = load_family(n, path)?;
    let scalar = fi_verify(&maps).map_err(Failure::from)?;
    let d = maps[0].degree();
    match scalar {
        Some(alpha) => {
            emit(&json!({
                "command": "verify",
                "n": n,
                "m": m,
                "d": d,
                "central": true,
                "scalar": alpha.to_json(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        None => {
            emit(&json!({
                "command": "verify",
                "n": n,
                "m": m,
                "d": d,
                "central": false,
            }));
            diag("the identity's left side is not central");
            Ok(ExitCode::from(1))
        }
    }
}

fn standard_form_cmd(n: usize, expr_text: &str) -> Result<ExitCode, Failure> {
    let map = parse_map(expr_text, n, "--expr")?.into_trace_map();
    match standard_form(&map) {
        Ok(form) => {
            emit(&json!({
                "command": "standard-form",
                "n": n,
                "d": map.degree(),
                "commuting": true,
                "standard_form": form.to_json(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Err(CoreError::NotCommuting) => {
            emit(&json!({
                "command": "standard-form",
                "n": n,
                "d": map.degree(),
                "commuting": false,
            }));
            diag("the map does not commute with x");
            Ok(ExitCode::from(1))
        }
        Err(other) => Err(other.into()),
    }
}

fn l2_cmd(n: usize, q_text: &str, r_text: &str) -> Result<ExitCode, Failure> {
    let q = parse_map(q_text, n, "--q")?.into_trace_map();
    let r = parse_map(r_text, n, "--r")?.into_trace_map();
    if q.degree() != r.degree() {
        return Err(Failure::Input(format!(
            "q has degree {} but r has degree {}; the reduction needs equal degrees",
            q.degree(),
            r.degree()
        )));
    }
    let p = l2_reduce(&q, &r).map_err(Failure::from)?;
    emit(&json!({
        "command": "l2",
        "n": n,
        "d": q.degree(),
        "p": p.to_json(),
        "postcondition_verified": true,
    }));
    Ok(ExitCode::SUCCESS)
}

fn adjugate_solve_cmd(n: usize, m: usize, expr_text: &str) -> Result<ExitCode, Failure> {
    let map = parse_map(expr_text, n, "--expr")?.into_trace_map();
    match adjugate_solve(&map, m).map_err(Failure::from)? {
        AdjugateOutcome::Zero => {
            emit(&json!({
                "command": "adjugate-solve",
                "n": n,
                "m": m,
                "d": map.degree(),
                "result": "zero",
            }));
        }
        AdjugateOutcome::Lambda(lambda) => {
            emit(&json!({
                "command": "adjugate-solve",
                "n": n,
                "m": m,
                "d": map.degree(),
                "result": "lambda",
                "lambda": lambda.to_json(),
            }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn decompose_cmd(n: Option<usize>, path: &PathBuf, no_oracle: bool) -> Result<ExitCode, Failure> {
    let (n, m, maps) = load_family(n, path)?;
    let fid = fi_decompose(&maps).map_err(Failure::from)?;
    let oracle = if no_oracle {
        json!({"ran": false})
    } else {
        let oracle_fid = fi_decompose_oracle(&maps).map_err(Failure::from)?;
        if oracle_fid.lambda() != fid.lambda() {
            return Err(Failure::Violation(format!(
                "oracle lambda {} differs from the decomposition's {}",
                oracle_fid.lambda(),
                fid.lambda()
            )));
        }
        json!({"ran": true, "lambda_match": true})
    };
    emit(&json!({
        "command": "decompose",
        "n": n,
        "m": m,
        "d": fid.degree(),
        "decomposition": fid.to_json(),
        "oracle": oracle,
    }));
    Ok(ExitCode::SUCCESS)
}

fn fuzz_cmd(seed: u64, cases: u64, n: usize, d: u32, suite_name: &str) -> Result<ExitCode, Failure> {
    let suite = Suite::from_name(suite_name).ok_or_else(|| {
        Failure::Input(format!(
            "unknown suite '{suite_name}'; expected one of: {}",
            Suite::NAMES.join(", ")
        ))
    })?;
    if n < 1 {
        return Err(Failure::Input("n must be at least 1".into()));
    }
    let params = FuzzParams {
        suite,
        seed,
        cases,
        n,
        d,
    };
    let (report, all_passed) = fuzz::run(&params);
    emit(&report);
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        diag("fuzzing found failing cases; this refutes an identity that must hold");
        Ok(ExitCode::from(3))
    }
}
