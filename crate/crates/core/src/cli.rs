//! Command-line front end. [`run`] parses one argument vector, executes the
//! command and returns the structured result plus the process exit code.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 numerical failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::calabi::{self, CalabiError, EinsteinProfile};
use crate::cr3::{self, ClassifyInput, SeifertData, Verdict};
use crate::exact_arith::{parse_rational, ArithError, BigRational};
use crate::hj::{self, QuotientData};
use crate::hypersurface::{self, BlowupFamily, HypersurfaceError};
use crate::ma_radial::{self, MaError};
use crate::numfmt::fmt12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    /// On error, an object with `code` and `message`.
    pub payload: Value,
    /// Warnings, one per line on stderr.
    pub diagnostics: Vec<String>,
    /// What the binary prints: JSON when `--json` was given, prose otherwise.
    pub text: String,
    pub json: bool,
}

#[derive(Parser, Debug)]
#[command(
    name = "ke-fillings",
    version,
    about = "Kähler-Einstein filling diagnostics for CR manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hirzebruch-Jung string of the cyclic quotient singularity of type (p; q)
    Hj(HjArgs),
    /// Calabi-ansatz Einstein profile on the resolution of ℂⁿ/ℤ_k
    Calabi(CalabiArgs),
    /// Radial Monge-Ampère solve on the unit ball
    Ma(MaArgs),
    /// Weighted hypersurface obstruction test or blow-up ledger
    Hypersurface(HypersurfaceArgs),
    /// Decide whether a CR 3-manifold bounds a Kähler-Einstein surface
    Classify(ClassifyArgs),
}

#[derive(Args, Debug)]
struct HjArgs {
    #[arg(long)]
    p: i64,
    #[arg(long)]
    q: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CalabiArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    /// Einstein constant as NUM/DEN (default 2 − n/k)
    #[arg(long, value_name = "NUM/DEN", allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Integration constant as NUM/DEN (default −(2n+k)/(n(n+1)))
    #[arg(long = "c", value_name = "NUM/DEN", allow_hyphen_values = true)]
    constant: Option<String>,
    /// Starting momentum (default s* − 1/2)
    #[arg(long, allow_hyphen_values = true)]
    tau0: Option<f64>,
    /// Points of the geometric momentum grid
    #[arg(long, default_value_t = calabi::DEFAULT_GRID_POINTS)]
    grid: usize,
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct MaArgs {
    #[arg(long)]
    n: u32,
    /// Number of grid intervals N
    #[arg(long)]
    grid: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    tol: f64,
    /// Solve for the manufactured solution (1 − ρ)^r / r instead of 1 − ρ
    #[arg(long, value_name = "ORDER")]
    manufacture: Option<f64>,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
    /// Per-iteration dump of (ρ, ψ, F, u, residual)
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct HypersurfaceArgs {
    /// ex1, ex2 or ex3
    #[arg(long, conflicts_with_all = ["weights", "exponents"], requires_all = ["n", "d", "k"])]
    family: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Comma-separated weights w0,..,wn
    #[arg(long, value_name = "W0,..,Wn", requires = "exponents")]
    weights: Option<String>,
    /// Monomial exponent vectors separated by ';', e.g. "2,0;0,3"
    #[arg(long, value_name = "LIST", requires = "weights")]
    exponents: Option<String>,
    /// Treat the singularity as not Gorenstein (quotient-type input)
    #[arg(long)]
    not_gorenstein: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(subcommand)]
    input: ClassifyCommand,
}

#[derive(Subcommand, Debug)]
enum ClassifyCommand {
    /// Seifert bundle over a base of genus ≥ 1
    Seifert {
        #[arg(long)]
        genus: u32,
        /// Multiple fiber (m; q), repeatable
        #[arg(long = "fiber", value_name = "M,Q")]
        fibers: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Cyclic quotient S³/ℤ_p of type (p; q)
    Quotient {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        json: bool,
    },
    /// Non-cyclic finite quotient (always out of scope)
    Polyhedral {
        #[arg(long)]
        json: bool,
    },
}

const HINTS: [(&str, &str); 5] = [
    ("hj", "usage: ke-fillings hj --p P --q Q [--json]"),
    (
        "calabi",
        "usage: ke-fillings calabi --n N --k K [--lambda NUM/DEN] [--c NUM/DEN] [--tau0 F] [--grid M] [--csv PATH] [--json]",
    ),
    (
        "ma",
        "usage: ke-fillings ma --n N --grid M --eps E --tol T [--manufacture ORDER] [--csv PATH] [--json]",
    ),
    (
        "hypersurface",
        "usage: ke-fillings hypersurface (--family ex1|ex2|ex3 --n N --d D --k K | --weights W0,..,Wn --exponents LIST) [--json]",
    ),
    (
        "classify",
        "usage: ke-fillings classify (seifert --genus G [--fiber M,Q]... | quotient --p P --q Q | polyhedral) [--json]",
    ),
];
const GENERAL_HINT: &str = "usage: ke-fillings <hj|calabi|ma|hypersurface|classify> [OPTIONS]; see --help";

fn hint_for(argv: &[String]) -> &'static str {
    argv.iter()
        .find_map(|a| HINTS.iter().find(|(name, _)| name == a).map(|(_, h)| *h))
        .unwrap_or(GENERAL_HINT)
}

/// Module failure, carried to the exit-code mapping.
#[derive(Debug)]
struct Failure {
    code: &'static str,
    message: String,
    numerical: bool,
}

impl Failure {
    fn validation(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            numerical: false,
        }
    }
}

impl From<hj::HjError> for Failure {
    fn from(e: hj::HjError) -> Self {
        Self::validation(e.code(), e.to_string())
    }
}

impl From<CalabiError> for Failure {
    fn from(e: CalabiError) -> Self {
        Self {
            code: e.code(),
            message: e.to_string(),
            numerical: e.is_numerical(),
        }
    }
}

impl From<MaError> for Failure {
    fn from(e: MaError) -> Self {
        Self {
            code: e.code(),
            message: e.to_string(),
            numerical: e.is_numerical(),
        }
    }
}

impl From<HypersurfaceError> for Failure {
    fn from(e: HypersurfaceError) -> Self {
        Self::validation(e.code(), e.to_string())
    }
}

impl From<cr3::Cr3Error> for Failure {
    fn from(e: cr3::Cr3Error) -> Self {
        Self::validation(e.code(), e.to_string())
    }
}

impl From<ArithError> for Failure {
    fn from(e: ArithError) -> Self {
        Self::validation(e.code(), e.to_string())
    }
}

/// Output of one successful command.
struct Outcome {
    payload: Value,
    text: String,
    diagnostics: Vec<String>,
}

/// Float as a JSON number with 12 significant digits; `null` when not finite.
pub fn float_value(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str(&fmt12(x)).expect("formatted float is valid JSON")
    } else {
        Value::Null
    }
}

fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float_value(x)).collect())
}

/// Execute one command. `argv` excludes the program name.
pub fn run<S: AsRef<str>>(argv: &[S]) -> (CommandResult, i32) {
    let argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let json = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(std::iter::once("ke-fillings".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (
                    CommandResult {
                        status: Status::Ok,
                        payload: Value::Null,
                        diagnostics: vec![],
                        text: e.render().to_string(),
                        json: false,
                    },
                    EXIT_OK,
                );
            }
            let rendered = e.render().to_string();
            let summary = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with("tip:"))
                .collect::<Vec<_>>()
                .join(" ");
            let failure = Failure::validation("UsageError", summary.trim_start_matches("error: "));
            return error_result(failure, Some(hint_for(&argv)), json);
        }
    };

    let outcome = match cli.command {
        Command::Hj(args) => run_hj(&args),
        Command::Calabi(args) => run_calabi(&args),
        Command::Ma(args) => run_ma(&args),
        Command::Hypersurface(args) => run_hypersurface(&args),
        Command::Classify(args) => run_classify(&args),
    };
    match outcome {
        Ok(out) => {
            let text = if json {
                format!("{}\n", serde_json::to_string(&out.payload).expect("serialisable"))
            } else {
                out.text
            };
            (
                CommandResult {
                    status: Status::Ok,
                    payload: out.payload,
                    diagnostics: out.diagnostics,
                    text,
                    json,
                },
                EXIT_OK,
            )
        }
        Err(failure) => error_result(failure, None, json),
    }
}

fn error_result(failure: Failure, hint: Option<&str>, json: bool) -> (CommandResult, i32) {
    let exit = if failure.numerical {
        EXIT_NUMERICAL
    } else {
        EXIT_VALIDATION
    };
    let mut payload = Map::new();
    payload.insert("code".into(), json!(failure.code));
    payload.insert("message".into(), json!(failure.message));
    if let Some(h) = hint {
        payload.insert("hint".into(), json!(h));
    }
    let payload = Value::Object(payload);
    let text = if json {
        format!("{}\n", serde_json::to_string(&payload).expect("serialisable"))
    } else {
        let mut t = format!("error[{}]: {}\n", failure.code, failure.message);
        if let Some(h) = hint {
            t.push_str(h);
            t.push('\n');
        }
        t
    };
    (
        CommandResult {
            status: Status::Error,
            payload,
            diagnostics: vec![],
            text,
            json,
        },
        exit,
    )
}

fn run_hj(args: &HjArgs) -> Result<Outcome, Failure> {
    let data = QuotientData::new(args.p, args.q)?;
    let s = hj::hj_expand(data);
    let admissible = s.ke_admissible();
    let stabilizers: Vec<[i64; 2]> = s.stabilizers.iter().map(|&(m, n)| [m, n]).collect();
    let payload = json!({
        "entries": s.entries,
        "admissible": admissible,
        "stabilizers": stabilizers,
    });
    let text = format!(
        "(p; q) = ({}; {})\nentries: {:?}\nstabilizers: {:?}\nall entries >= 3: {}\n",
        args.p, args.q, s.entries, s.stabilizers, admissible
    );
    Ok(Outcome {
        payload,
        text,
        diagnostics: vec![],
    })
}

fn rational_arg(text: &Option<String>) -> Result<Option<BigRational>, Failure> {
    text.as_deref().map(parse_rational).transpose().map_err(Failure::from)
}

fn run_calabi(args: &CalabiArgs) -> Result<Outcome, Failure> {
    let mut diagnostics = Vec::new();
    let (paper_lambda, paper_constant) = calabi::paper_parameters(args.n, args.k);
    let lambda = rational_arg(&args.lambda)?;
    let constant = rational_arg(&args.constant)?;
    let custom = lambda.is_some() || constant.is_some();
    if args.n >= 2 && args.k > 0 && args.k <= args.n {
        let warning = CalabiError::InadmissibleOrder {
            n: args.n,
            k: args.k,
        };
        diagnostics.push(format!("warning[{}]: {}", warning.code(), warning));
    }
    let profile: EinsteinProfile = calabi::solve_profile(
        args.n,
        args.k,
        lambda.unwrap_or(paper_lambda),
        constant.unwrap_or(paper_constant),
    )?;
    let identity = calabi::check_einstein_identity(&profile);
    let tau0 = match args.tau0 {
        Some(t) => t,
        None => calabi::default_tau0(&profile)?,
    };
    let taus = calabi::geometric_taus(tau0, calabi::DEFAULT_TAU_MAX, args.grid)?;
    let report = calabi::completeness_report_on(&profile, &taus)?;
    if let Some(path) = &args.csv {
        calabi::profile_table_on(&profile, &taus)?.write_csv(path)?;
    }
    let expected = profile.asymptotic_rate();

    let mut payload = Map::new();
    payload.insert("n".into(), json!(args.n));
    payload.insert("k".into(), json!(args.k));
    payload.insert("lambda".into(), json!(profile.lambda().to_string()));
    payload.insert("constant".into(), json!(profile.integration_constant().to_string()));
    payload.insert("phi".into(), json!(profile.phi().to_string()));
    payload.insert("identity".into(), json!(identity));
    payload.insert("paper_parameters".into(), json!(!custom));
    payload.insert("admissible_order".into(), json!(args.k > args.n));
    payload.insert("tau_star".into(), float_value(report.tau_star));
    payload.insert("tau0".into(), float_value(tau0));
    payload.insert("c".into(), float_value(report.c));
    payload.insert("c_finite".into(), json!(report.c.is_finite()));
    payload.insert("disc_radius".into(), float_value(report.disc_radius));
    payload.insert("arclength_divergent".into(), json!(report.arclength_divergent));
    payload.insert("remaining_monotone".into(), json!(report.remaining_monotone));
    payload.insert("fitted_rate".into(), report.fitted_rate.map_or(Value::Null, float_value));
    payload.insert("expected_rate".into(), expected.map_or(Value::Null, float_value));
    payload.insert("grid".into(), json!(args.grid));
    if let Some(path) = &args.csv {
        payload.insert("csv".into(), json!(path.display().to_string()));
    }

    let opt = |x: Option<f64>| x.map_or("n/a".to_string(), fmt12);
    let text = format!(
        "phi(s) = {}\nlambda = {}, C = {}\nEinstein identity: {}\ntau_* = {}\nc = {}\ndisc radius = {}\narclength divergent: {}\nfitted rate = {} (expected {})\n",
        profile.phi(),
        profile.lambda(),
        profile.integration_constant(),
        identity,
        fmt12(report.tau_star),
        fmt12(report.c),
        fmt12(report.disc_radius),
        report.arclength_divergent,
        opt(report.fitted_rate),
        opt(expected),
    );
    Ok(Outcome {
        payload: Value::Object(payload),
        text,
        diagnostics,
    })
}

fn run_ma(args: &MaArgs) -> Result<Outcome, Failure> {
    let (problem, exact): (_, Box<dyn Fn(f64) -> f64>) = match args.manufacture {
        Some(order) => (
            ma_radial::manufactured_problem(args.n, args.eps, args.grid, order)?,
            Box::new(move |r| ma_radial::manufactured_solution(order, r)),
        ),
        None => (
            ma_radial::hyperbolic_test_problem(args.n, args.eps, args.grid)?,
            Box::new(|r| 1.0 - r),
        ),
    };
    let (sol, trace) = ma_radial::newton_solve_traced(&problem, args.tol, args.max_iter)?;
    if let Some(path) = &args.csv {
        ma_radial::write_trace_csv(path, &problem, &trace)
            .map_err(|e| Failure::validation("Io", e.to_string()))?;
    }
    let error_sup = problem
        .grid()
        .iter()
        .zip(&sol.u)
        .fold(0.0f64, |m, (&r, &v)| m.max((v - exact(r)).abs()));
    let mut diagnostics = Vec::new();
    let order = match ma_radial::asymptotic_order_fit(&sol, &problem) {
        Ok(o) => Some(o),
        Err(e) => {
            diagnostics.push(format!("warning[{}]: {}", e.code(), e));
            None
        }
    };

    let mut payload = Map::new();
    payload.insert("n".into(), json!(args.n));
    payload.insert("grid".into(), json!(args.grid));
    payload.insert("eps".into(), float_value(args.eps));
    payload.insert("tol".into(), float_value(args.tol));
    payload.insert(
        "problem".into(),
        json!(if args.manufacture.is_some() { "manufactured" } else { "hyperbolic" }),
    );
    if let Some(r) = args.manufacture {
        payload.insert("manufactured_order".into(), float_value(r));
    }
    payload.insert("converged".into(), json!(sol.converged));
    payload.insert("iterations".into(), json!(sol.iterations));
    payload.insert("residual_sup".into(), float_value(sol.residual_sup));
    payload.insert("residual_history".into(), floats(&sol.residual_history));
    payload.insert("error_sup".into(), float_value(error_sup));
    payload.insert("fitted_order".into(), order.map_or(Value::Null, float_value));
    if let Some(path) = &args.csv {
        payload.insert("csv".into(), json!(path.display().to_string()));
    }

    let text = format!(
        "converged in {} iterations, residual {}\nsup error vs exact solution: {}\nfitted vanishing order: {}\n",
        sol.iterations,
        fmt12(sol.residual_sup),
        fmt12(error_sup),
        order.map_or("n/a".to_string(), fmt12),
    );
    Ok(Outcome {
        payload: Value::Object(payload),
        text,
        diagnostics,
    })
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::validation("UsageError", format!("bad {what} entry {t:?} in {text:?}")))
        })
        .collect()
}

/// `"2,0,0;0,2,0"` → `[[2,0,0],[0,2,0]]`.
pub fn parse_exponents(text: &str) -> Option<Vec<Vec<u32>>> {
    text.split(';')
        .filter(|m| !m.trim().is_empty())
        .map(|m| m.split(',').map(|e| e.trim().parse().ok()).collect())
        .collect()
}

fn run_hypersurface(args: &HypersurfaceArgs) -> Result<Outcome, Failure> {
    if let Some(name) = &args.family {
        let family = BlowupFamily::parse(name).ok_or_else(|| {
            Failure::validation("UsageError", format!("unknown family {name:?}; expected ex1, ex2 or ex3"))
        })?;
        let (n, d, k) = (args.n.unwrap_or(0), args.d.unwrap_or(0), args.k.unwrap_or(0));
        let l = hypersurface::blowup_ledger(family, n, d, k)?;
        let payload = json!({
            "family": family.as_str(),
            "n": n,
            "d": d,
            "k": k,
            "step_weights": l.step_weights,
            "step_degree": l.step_degree,
            "step_coefficient": l.step_coefficient,
            "steps": l.steps,
            "smooth_end": l.smooth_end,
            "discrepancies": l.discrepancies,
        });
        let text = format!(
            "{family} (n, d, k) = ({n}, {d}, {k})\nstep weights {:?}, per-step coefficient {}\nsteps: {}, smooth end: {}\ndiscrepancies: {:?}\n",
            l.step_weights, l.step_coefficient, l.steps, l.smooth_end, l.discrepancies
        );
        return Ok(Outcome {
            payload,
            text,
            diagnostics: vec![],
        });
    }

    let (Some(w), Some(e)) = (&args.weights, &args.exponents) else {
        return Err(Failure::validation(
            "UsageError",
            "give either --family with --n/--d/--k or --weights with --exponents",
        ));
    };
    let weights: Vec<i64> = parse_list(w, "weight")?;
    let monomials = parse_exponents(e)
        .ok_or_else(|| Failure::validation("UsageError", format!("bad exponent list {e:?}")))?;
    let gorenstein = !args.not_gorenstein;
    let degree = hypersurface::weighted_degree(&monomials, &weights)?;
    let homogeneous = hypersurface::WeightedHypersurface::new(weights.clone(), monomials.clone());
    let homogeneous = match homogeneous {
        Ok(_) => true,
        Err(HypersurfaceError::NotHomogeneous { .. }) => false,
        Err(other) => return Err(other.into()),
    };
    let report = hypersurface::ke_obstruction(&weights, degree, gorenstein);
    let mut diagnostics = vec!["note: the singularity is assumed isolated; this is not checked".to_string()];
    if !homogeneous {
        diagnostics.push("warning: f is not weighted homogeneous; deg(f) is the minimum weighted degree".into());
    }
    let payload = json!({
        "weights": weights,
        "exponents": monomials,
        "degree": degree,
        "homogeneous": homogeneous,
        "weight_sum": report.weight_sum,
        "se_property": report.se_property,
        "gorenstein": report.gorenstein,
        "verdict": report.verdict.as_str(),
        "isolated_singularity_assumed": report.isolated_singularity_assumed,
        "adjunction_coefficient": hypersurface::adjunction_coefficient(&weights, degree),
    });
    let text = format!(
        "weights {:?}, deg f = {}, |w| = {}\nproperty S-E: {}, Gorenstein: {}\nverdict: {} (isolated singularity assumed)\n",
        weights, degree, report.weight_sum, report.se_property, gorenstein, report.verdict
    );
    Ok(Outcome {
        payload,
        text,
        diagnostics,
    })
}

fn verdict_payload(v: &Verdict) -> Value {
    let fibers: Vec<Value> = v
        .per_fiber
        .iter()
        .map(|f| json!({"p": f.p, "q": f.q, "entries": f.entries, "admissible": f.admissible}))
        .collect();
    json!({
        "answer": v.answer.as_str(),
        "reasons": v.reasons,
        "per_fiber": fibers,
        "notes": v.notes,
    })
}

fn run_classify(args: &ClassifyArgs) -> Result<Outcome, Failure> {
    let input = match &args.input {
        ClassifyCommand::Seifert { genus, fibers, .. } => {
            let pairs = fibers
                .iter()
                .map(|f| match parse_list::<i64>(f, "fiber")?.as_slice() {
                    &[m, q] => Ok((m, q)),
                    _ => Err(Failure::validation("UsageError", format!("fiber {f:?} must be M,Q"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            ClassifyInput::Seifert(SeifertData::new(*genus, &pairs)?)
        }
        ClassifyCommand::Quotient { p, q, .. } => ClassifyInput::Quotient(QuotientData::new(*p, *q)?),
        ClassifyCommand::Polyhedral { .. } => ClassifyInput::Polyhedral,
    };
    let v = cr3::classify(&input)?;
    let mut text = format!("answer: {}\n", v.answer);
    for f in &v.per_fiber {
        text.push_str(&format!("  ({}; {}) entries {:?}\n", f.p, f.q, f.entries));
    }
    if !v.reasons.is_empty() {
        text.push_str(&format!("reasons: {}\n", v.reasons.join(", ")));
    }
    for n in &v.notes {
        text.push_str(&format!("note: {n}\n"));
    }
    Ok(Outcome {
        payload: verdict_payload(&v),
        text,
        diagnostics: vec![],
    })
}
