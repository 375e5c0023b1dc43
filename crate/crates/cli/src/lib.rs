//! Command implementations behind the `eigconf` binary.
//!
//! Every command writes to the given sink and returns a process exit code:
//! 0 success/true, 1 false or mismatch, 2 genericity failure, 3 usage or
//! input error, 4 resource cap, 5 internal error.

pub mod condfile;
pub mod expr;
pub mod input;

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use eigconf::charpoly::SymMatrix;
use eigconf::ec::{
    condition_for_ec, ec_from_eigenvalues, ec_oracle_report, ec_via_theorem, evaluate_condition, targets_for,
    ConditionForm, ConditionOptions, ECVector, Outcome,
};
use eigconf::rational::parse_rational;
use eigconf::sample::sample_generic;
use eigconf::symmetric::DEGREE_CAP;
use eigconf::transform::{build_l, build_t_enum, build_u, det_t, invert_t, RatMatrix};
use eigconf::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::condfile::ConditionFile;
use crate::input::read_matrix_file;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_NON_GENERIC: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] eigconf::Error),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use eigconf::Error as E;
        match self {
            CliError::Input(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_INTERNAL,
            CliError::Core(e) => match e {
                E::Genericity { .. } => EXIT_NON_GENERIC,
                E::Resource { .. } => EXIT_RESOURCE,
                E::Assertion(_) => EXIT_INTERNAL,
                E::Structural(_) | E::Domain(_) | E::Validation(_) => EXIT_USAGE,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    /// One JSON document on stdout.
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "eigconf", version, about = "Exact eigenvalue configurations of symmetric matrix pairs")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalue configuration of a numeric pair, by root isolation and by sign variations.
    Ec { input: PathBuf },
    /// Quantifier-free condition on the parameters for a given configuration.
    Condition {
        input: PathBuf,
        /// Target configuration, e.g. `1,1,0,0`.
        #[arg(long = "ec", value_delimiter = ',', required = true)]
        ec: Vec<usize>,
        /// Where to write the condition file.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Write clause coefficients over the parameters instead of over a_k, b_k.
        #[arg(long)]
        expand: bool,
        /// Also list the admissible coefficient sign patterns (degree <= 8).
        #[arg(long)]
        sign_patterns: bool,
        #[arg(long, default_value_t = DEGREE_CAP)]
        degree_cap: usize,
    },
    /// Evaluate a condition file at a parameter point.
    Eval {
        condition: PathBuf,
        /// `name=value` bindings; values are rationals like `3`, `-1/2`, `0.25`.
        bindings: Vec<String>,
    },
    /// Print T_m, its LU factors, its inverse and determinant.
    Transform { m: usize },
    /// Random cross-check of the two EC routes.
    Verify {
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Run only this trial index (as printed for a failure).
        #[arg(long)]
        replay: Option<usize>,
    },
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let fmt = cli.format;
    let res = match &cli.command {
        Command::Ec { input } => cmd_ec(input, fmt, out),
        Command::Condition { input, ec, output, expand, sign_patterns, degree_cap } => {
            let opts = ConditionOptions {
                form: if *expand { ConditionForm::Expanded } else { ConditionForm::CharCoefficient },
                sign_patterns: *sign_patterns,
                degree_cap: *degree_cap,
            };
            cmd_condition(input, &ECVector(ec.clone()), output.as_deref(), &opts, fmt, out)
        }
        Command::Eval { condition, bindings } => cmd_eval(condition, bindings, fmt, out),
        Command::Transform { m } => cmd_transform(*m, fmt, out),
        Command::Verify { m_max, n_max, count, seed, replay } => {
            cmd_verify(&VerifyParams { m_max: *m_max, n_max: *n_max, count: *count, seed: *seed, replay: *replay }, fmt, out)
        }
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let code = e.exit_code();
            if fmt == Format::Machine {
                let _ = writeln!(out, "{}", json!({ "error": e.to_string(), "exit_code": code }));
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json value"))?;
    Ok(())
}

fn numeric_pair(input: &Path) -> Result<(SymMatrix, SymMatrix), CliError> {
    let mf = read_matrix_file(input)?;
    if !mf.is_numeric() {
        return Err(CliError::Input(format!(
            "`ec` needs numeric matrices; {} declares parameters {:?}",
            input.display(),
            mf.params.names()
        )));
    }
    Ok((mf.f, mf.g))
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Result of one EC route: the configuration, or the common factor that
/// made the pair non-generic.
enum Route<T> {
    Done(T),
    NonGeneric { gcd: String, gcd_degree: usize },
}

impl<T> Route<T> {
    fn witness(&self) -> Option<(&str, usize)> {
        match self {
            Route::NonGeneric { gcd, gcd_degree } => Some((gcd, *gcd_degree)),
            Route::Done(_) => None,
        }
    }

    fn witness_json(&self) -> Value {
        match self.witness() {
            Some((gcd, d)) => json!({ "gcd": gcd, "gcd_degree": d }),
            None => Value::Null,
        }
    }
}

fn route<T>(r: eigconf::Result<T>) -> Result<Route<T>, CliError> {
    match r {
        Ok(v) => Ok(Route::Done(v)),
        Err(eigconf::Error::Genericity { gcd, gcd_degree }) => Ok(Route::NonGeneric { gcd, gcd_degree }),
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_ec(input: &Path, fmt: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let (f, g) = numeric_pair(input)?;
    let oracle = route(ec_oracle_report(&f, &g))?;
    let theorem = route(ec_via_theorem(&f, &g))?;
    let (code, report) = match (&oracle, &theorem) {
        (Route::Done(o), Route::Done(t)) => {
            let agree = o.ec == t.ec;
            (
                if agree { EXIT_OK } else { EXIT_FALSE },
                json!({
                    "generic": true,
                    "oracle": { "ec": o.ec.0, "below_first": o.below_first },
                    "theorem": { "y": t.y, "ec": t.ec.0 },
                    "agree": agree,
                }),
            )
        }
        (Route::NonGeneric { .. }, Route::NonGeneric { .. }) => (
            EXIT_NON_GENERIC,
            json!({ "generic": false, "oracle": oracle.witness_json(), "theorem": theorem.witness_json() }),
        ),
        // One route accepted a pair the other rejected.
        _ => (
            EXIT_FALSE,
            json!({ "generic": Value::Null, "oracle": oracle.witness_json(), "theorem": theorem.witness_json(), "agree": false }),
        ),
    };
    if fmt == Format::Machine {
        emit(out, &report)?;
        return Ok(code);
    }
    for (name, w) in [("oracle", oracle.witness()), ("theorem", theorem.witness())] {
        if let Some((gcd, d)) = w {
            writeln!(out, "{name:<8} non-generic: eigen-polynomials share {gcd} (degree {d})")?;
        }
    }
    if let Route::Done(o) = &oracle {
        writeln!(out, "oracle   EC = {}", o.ec)?;
    }
    if let Route::Done(t) = &theorem {
        writeln!(out, "theorem  y = ({})", join(&t.y))?;
        writeln!(out, "theorem  EC = {}", t.ec)?;
    }
    match code {
        EXIT_OK => writeln!(out, "generic: yes; both routes agree")?,
        EXIT_NON_GENERIC => writeln!(out, "generic: no")?,
        _ => writeln!(out, "MISMATCH between the two routes")?,
    }
    Ok(code)
}

pub fn cmd_condition(
    input: &Path,
    c: &ECVector,
    output: Option<&Path>,
    opts: &ConditionOptions,
    fmt: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let mf = read_matrix_file(input)?;
    let cond = condition_for_ec(&mf.f, &mf.g, c, opts)?;
    let file = ConditionFile::from_condition(&cond);
    let text = file.to_json();
    if let Some(path) = output {
        std::fs::write(path, &text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let summary = cond
        .clauses
        .iter()
        .map(|cl| format!("v(d_{})={}", cl.r, cl.target))
        .collect::<Vec<_>>()
        .join(" ∧ ");
    if fmt == Format::Machine {
        let doc: Value = serde_json::from_str(&text).expect("own output");
        emit(out, &json!({ "summary": summary, "condition": doc }))?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "EC = {}  (m = {}, n = {})", cond.target, cond.m, cond.n)?;
    for cl in &cond.clauses {
        let terms: usize = cl.coeffs.iter().map(|p| p.len()).sum();
        write!(out, "d_{}: degree {} in x, {} terms, target {}", cl.r, cl.degree(), terms, cl.target)?;
        if let Some(p) = &cl.sign_patterns {
            write!(out, ", {} sign patterns", p.len())?;
        }
        writeln!(out)?;
    }
    for why in &cond.unsatisfiable {
        writeln!(out, "unsatisfiable: {why}")?;
    }
    writeln!(out, "{summary}")?;
    if let Some(path) = output {
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(EXIT_OK)
}

pub fn parse_bindings(bindings: &[String]) -> Result<HashMap<String, Rational>, CliError> {
    let mut point = HashMap::new();
    for b in bindings {
        let (name, value) = b
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("binding {b:?} is not of the form name=value")))?;
        let q = parse_rational(value).map_err(|e| CliError::Input(format!("binding {b:?}: {e}")))?;
        if point.insert(name.trim().to_string(), q).is_some() {
            return Err(CliError::Input(format!("parameter {name:?} bound twice")));
        }
    }
    Ok(point)
}

pub fn cmd_eval(condition: &Path, bindings: &[String], fmt: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let src = std::fs::read_to_string(condition)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", condition.display())))?;
    let cond = ConditionFile::from_json(&src)?.to_condition()?;
    let point = parse_bindings(bindings)?;
    if let Some(extra) = point.keys().find(|k| cond.params.index_of(k).is_none()) {
        return Err(CliError::Input(format!("{extra:?} is not a parameter of this condition")));
    }
    if let Some(missing) = cond.params.names().iter().find(|p| !point.contains_key(*p)) {
        return Err(CliError::Input(format!("parameter {missing:?} is unbound")));
    }
    let ev = evaluate_condition(&cond, &point)?;
    let (code, word) = match &ev.outcome {
        Outcome::True => (EXIT_OK, "true"),
        Outcome::False => (EXIT_FALSE, "false"),
        Outcome::NonGeneric { .. } => (EXIT_NON_GENERIC, "non-generic"),
    };
    if fmt == Format::Machine {
        let clauses: Vec<Value> = cond
            .clauses
            .iter()
            .zip(&ev.variations)
            .map(|(cl, v)| json!({ "r": cl.r, "target": cl.target, "variations": v }))
            .collect();
        let mut doc = json!({ "result": word, "clauses": clauses });
        if let Outcome::NonGeneric { gcd, gcd_degree } = &ev.outcome {
            doc["gcd"] = json!(gcd);
            doc["gcd_degree"] = json!(gcd_degree);
        }
        emit(out, &doc)?;
        return Ok(code);
    }
    for (cl, v) in cond.clauses.iter().zip(&ev.variations) {
        let mark = if *v == cl.target { "ok" } else { "--" };
        writeln!(out, "v(d_{}) = {v}  target {}  {mark}", cl.r, cl.target)?;
    }
    match &ev.outcome {
        Outcome::NonGeneric { gcd, gcd_degree } => {
            writeln!(out, "non-generic: eigen-polynomials share {gcd} (degree {gcd_degree})")?
        }
        _ => writeln!(out, "{word}")?,
    }
    Ok(code)
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(eigconf::rational::fmt_rational).collect())
        .collect()
}

pub fn cmd_transform(m: usize, fmt: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let t = build_t_enum(m)?;
    let l = build_l(m)?;
    let u = build_u(m)?;
    let c = invert_t(m)?;
    let det = det_t(m)?;
    if fmt == Format::Machine {
        emit(
            out,
            &json!({
                "m": m,
                "T": matrix_strings(&t),
                "L": matrix_strings(&l),
                "U": matrix_strings(&u),
                "C": matrix_strings(&c),
                "det": eigconf::rational::fmt_rational(&det),
            }),
        )?;
        return Ok(EXIT_OK);
    }
    for (name, mat) in [("T", &t), ("L", &l), ("U", &u), ("C", &c)] {
        writeln!(out, "{name}_{m} =\n{mat}")?;
    }
    writeln!(out, "det T_{m} = {}", eigconf::rational::fmt_rational(&det))?;
    Ok(EXIT_OK)
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyParams {
    pub m_max: usize,
    pub n_max: usize,
    pub count: usize,
    pub seed: u64,
    pub replay: Option<usize>,
}

#[derive(Clone, Debug)]
struct Trial {
    index: usize,
    m: usize,
    n: usize,
    skipped: usize,
    failure: Option<String>,
}

/// Trial `i` draws from its own ChaCha stream, so any trial can be replayed
/// alone and parallel scheduling cannot change the results.
fn run_trial(p: &VerifyParams, index: usize) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(index as u64);
    let m = rng.gen_range(1..=p.m_max);
    let n = rng.gen_range(1..=p.n_max);
    let (inst, skipped) = sample_generic(m, n, &mut rng);
    let check = || -> Result<Option<String>, eigconf::Error> {
        let oracle = ec_oracle_report(&inst.f, &inst.g)?;
        let theorem = ec_via_theorem(&inst.f, &inst.g)?;
        let truth = ec_from_eigenvalues(&inst.alpha, &inst.beta);
        if oracle.ec != truth {
            return Ok(Some(format!("oracle {} but eigenvalues give {truth}", oracle.ec)));
        }
        if theorem.ec != oracle.ec {
            return Ok(Some(format!("theorem {} but oracle {}", theorem.ec, oracle.ec)));
        }
        let y = targets_for(&oracle.ec)?;
        if theorem.y != y {
            return Ok(Some(format!("y = ({}) but T*c = ({})", join(&theorem.y), join(&y))));
        }
        Ok(None)
    };
    let failure = match check() {
        Ok(f) => f,
        Err(e) => Some(e.to_string()),
    };
    Trial { index, m, n, skipped, failure }
}

pub fn cmd_verify(p: &VerifyParams, fmt: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    if p.m_max == 0 || p.n_max == 0 {
        return Err(CliError::Input("--m-max and --n-max must be at least 1".into()));
    }
    let indices: Vec<usize> = match p.replay {
        Some(i) => vec![i],
        None => (0..p.count).collect(),
    };
    let trials: Vec<Trial> = indices.par_iter().map(|&i| run_trial(p, i)).collect();
    let failed: Vec<&Trial> = trials.iter().filter(|t| t.failure.is_some()).collect();
    let skipped: usize = trials.iter().map(|t| t.skipped).sum();
    let agree = trials.len() - failed.len();
    let code = if failed.is_empty() { EXIT_OK } else { EXIT_FALSE };
    if fmt == Format::Machine {
        let failures: Vec<Value> = failed
            .iter()
            .map(|t| {
                json!({ "trial": t.index, "m": t.m, "n": t.n, "seed": p.seed, "reason": t.failure })
            })
            .collect();
        emit(
            out,
            &json!({
                "trials": trials.len(),
                "agree": agree,
                "skipped_non_generic": skipped,
                "seed": p.seed,
                "failures": failures,
            }),
        )?;
        return Ok(code);
    }
    for t in &failed {
        writeln!(
            out,
            "FAIL trial {} (m = {}, n = {}): {}  [reproduce: verify --seed {} --m-max {} --n-max {} --replay {}]",
            t.index,
            t.m,
            t.n,
            t.failure.as_deref().unwrap_or(""),
            p.seed,
            p.m_max,
            p.n_max,
            t.index
        )?;
    }
    writeln!(out, "{agree}/{} agree (seed {})", trials.len(), p.seed)?;
    writeln!(out, "skipped {skipped} non-generic draws (resampled)")?;
    Ok(code)
}
