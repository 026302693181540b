//! Command-line frontend. Every command prints one JSON document (or a
//! text rendering of it) and returns an exit code:
//! `0` success, `1` identity failure, `2` parse error,
//! `3` invariant violation, `4` search exhausted.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cluster::{ExchangeMatrix, MutationSequence};
use crate::error::Error;
use crate::geometry::{
    b_from_triangulation, dilog_identity_check, gluing_system, phi_inverse, shape_angles,
    solve_gluing_complex, solve_gluing_positive, volume, DynkinSpec, DynkinType, Triangulation,
};
use crate::io::{read_matrix_source, read_sequence, read_triangulation, MatrixSource};
use crate::jacobian::{verify_det_formula, verify_tropical_limit, FDetContext, Mode};
use crate::matrix::IntMatrix;
use crate::network::build_network;
use crate::tropical::{
    all_sign_sequences, c_matrix_run, format_signs, is_maximal_green, is_reddening, parse_signs,
    search_reddening, SearchOutcome,
};

pub const SCHEMA_VERSION: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_EXHAUSTED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cluster-nz", version, about = "Mutation loops, Neumann-Zagier matrices and their determinant identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exact,
    Modular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Det,
    FDet,
    Tropical,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the Y-seed dynamics and print the trajectory.
    Run(RunArgs),
    /// Print the mutation network, its adjacency and Neumann-Zagier matrices.
    Network(FileArg),
    /// Verify the determinant identities.
    Verify(VerifyArgs),
    /// Print the C-matrices and tropical sign sequence.
    Tropical(FileArg),
    /// Search for a reddening sequence.
    Reddening(ReddeningArgs),
    /// Solve the gluing equations.
    Gluing(GluingArgs),
    /// Check the dilogarithm identity of a Dynkin diagram.
    Dynkin(DynkinArgs),
    /// Build the exchange matrix of an ideal triangulation.
    Triangulate(FileArg),
}

#[derive(Debug, Args)]
pub struct FileArg {
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub file: PathBuf,
    /// Skip the Y-dynamics and print only B(t).
    #[arg(long)]
    pub matrices_only: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Check::Det)]
    pub check: Check,
    /// Check the F-determinant identity for every sign sequence.
    #[arg(long)]
    pub all_signs: bool,
    /// Sign sequence for the F-determinant check, e.g. `+-0`.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ReddeningArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Only mutate green vertices.
    #[arg(long)]
    pub green_only: bool,
}

#[derive(Debug, Args)]
pub struct GluingArgs {
    pub file: PathBuf,
    /// Initial `z_{t,-}` as `re,im`; one value is used for every shape.
    #[arg(long, num_args = 1.., allow_hyphen_values = true)]
    pub init: Vec<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Use the positive solver for Dynkin-shaped systems.
    #[arg(long)]
    pub positive: bool,
}

#[derive(Debug, Args)]
pub struct DynkinArgs {
    #[arg(long = "type")]
    pub kind: String,
    #[arg(long)]
    pub rank: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

struct Outcome {
    value: Value,
    code: i32,
    dot: Option<String>,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, code: EXIT_OK, dot: None }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        _ => EXIT_INVARIANT,
    }
}

/// Parses `args` (including the program name), runs the command and
/// writes its output. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_PARSE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(outcome) => {
            let text = match (cli.output, &outcome.dot) {
                (OutputFormat::Dot, Some(dot)) => dot.clone(),
                (OutputFormat::Text, _) => render_text(&outcome.value),
                _ => to_json(&outcome.value),
            };
            let _ = out.write_all(text.as_bytes());
            outcome.code
        }
        Err(e) => {
            let code = exit_code(&e);
            let doc = json!({"schema": SCHEMA_VERSION, "error": e.to_string(), "exit_code": code});
            let _ = writeln!(err, "{}", serde_json::to_string(&doc).expect("serializable"));
            code
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cmd: &Command) -> crate::Result<Outcome> {
    match cmd {
        Command::Run(a) => cmd_run(a),
        Command::Network(a) => cmd_network(&a.file),
        Command::Verify(a) => cmd_verify(a),
        Command::Tropical(a) => cmd_tropical(&a.file),
        Command::Reddening(a) => cmd_reddening(a),
        Command::Gluing(a) => cmd_gluing(a),
        Command::Dynkin(a) => cmd_dynkin(a),
        Command::Triangulate(a) => cmd_triangulate(&a.file),
    }
}

fn envelope(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn rows(m: &IntMatrix) -> Value {
    to_value(&m.to_rows())
}

fn complex(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

fn sequence_value(g: &MutationSequence) -> Value {
    json!({
        "B": rows(g.b.matrix()),
        "m": g.m_one_based(),
        "sigma": g.sigma.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    })
}

fn cmd_run(a: &RunArgs) -> crate::Result<Outcome> {
    let g = read_sequence(&a.file)?;
    let traj = g.run(!a.matrices_only)?;
    let mut m = envelope("run");
    m.insert("n".into(), json!(g.n()));
    m.insert("T".into(), json!(g.len()));
    m.insert("m".into(), json!(g.m_one_based()));
    m.insert("is_loop".into(), json!(g.is_loop()?));
    m.insert("B".into(), Value::Array(traj.b.iter().map(|b| rows(b.matrix())).collect()));
    if let Some(ys) = &traj.y {
        let show = |v: &crate::ratfun::RatFun| v.simplify(crate::jacobian::DISPLAY_SIMPLIFY_CAP).to_string();
        m.insert(
            "Y".into(),
            Value::Array(ys.iter().map(|y| json!(y.iter().map(show).collect::<Vec<_>>())).collect()),
        );
        let last = ys.last().expect("Y(0) present");
        m.insert("cluster_transformation".into(), json!(last.iter().map(show).collect::<Vec<_>>()));
    }
    Ok(Outcome::ok(Value::Object(m)))
}

fn cmd_network(file: &Path) -> crate::Result<Outcome> {
    let g = read_sequence(file)?;
    let net = build_network(&g)?;
    let mut m = envelope("network");
    let classes: Vec<Vec<(usize, usize)>> = net.classes.iter().map(|c| c.members_one_based()).collect();
    m.insert("classes".into(), to_value(&classes));
    m.insert("fully_mutated".into(), json!(net.is_fully_mutated()));
    m.insert("N0".into(), rows(&net.n0));
    m.insert("N+".into(), rows(&net.nplus));
    m.insert("N-".into(), rows(&net.nminus));
    if net.is_fully_mutated() {
        let nz = net.nz_matrices()?;
        m.insert("A+".into(), rows(&nz.aplus));
        m.insert("A-".into(), rows(&nz.aminus));
    }
    let dot = net.to_dot();
    m.insert("dot".into(), json!(dot));
    Ok(Outcome { value: Value::Object(m), code: EXIT_OK, dot: Some(dot) })
}

fn verify_one(a: &VerifyArgs, file: &Path) -> crate::Result<(Value, bool)> {
    let g = read_sequence(file)?;
    let mut reports = Map::new();
    let mut all_equal = true;
    let wants = |c: Check| a.check == c || a.check == Check::All;
    if wants(Check::Det) {
        let mode = match a.mode {
            ModeArg::Auto => Mode::auto(&g),
            ModeArg::Exact => Mode::Exact,
            ModeArg::Modular => Mode::Modular,
        };
        let rep = verify_det_formula(&g, mode, a.trials, a.seed)?;
        all_equal &= rep.equal;
        reports.insert("det".into(), to_value(&rep));
    }
    if wants(Check::FDet) {
        let signs = if a.all_signs {
            all_sign_sequences(g.len())
        } else if let Some(e) = &a.eps {
            vec![parse_signs(e)?]
        } else {
            vec![c_matrix_run(&g)?.eps_trop]
        };
        let ctx = FDetContext::new(&g)?;
        let mut out = Vec::with_capacity(signs.len());
        for eps in &signs {
            let rep = ctx.check(eps)?;
            all_equal &= rep.equal;
            out.push(to_value(&rep));
        }
        reports.insert("f_det".into(), Value::Array(out));
    }
    if wants(Check::Tropical) {
        let rep = verify_tropical_limit(&g)?;
        all_equal &= rep.equal;
        reports.insert("tropical".into(), to_value(&rep));
    }
    let doc = json!({
        "file": file.display().to_string(),
        "all_equal": all_equal,
        "reports": reports,
    });
    Ok((doc, all_equal))
}

fn cmd_verify(a: &VerifyArgs) -> crate::Result<Outcome> {
    let jobs = a.jobs.max(1).min(a.files.len());
    let mut results: Vec<Option<crate::Result<(Value, bool)>>> = (0..a.files.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = a.files.len().div_ceil(jobs);
        let handles: Vec<_> = a
            .files
            .chunks(chunk)
            .map(|files| scope.spawn(move || files.iter().map(|f| verify_one(a, f)).collect::<Vec<_>>()))
            .collect();
        let mut i = 0;
        for h in handles {
            for r in h.join().expect("verification thread panicked") {
                results[i] = Some(r);
                i += 1;
            }
        }
    });
    let mut docs = Vec::with_capacity(results.len());
    let mut all_equal = true;
    for r in results {
        let (doc, eq) = r.expect("every file processed")?;
        all_equal &= eq;
        docs.push(doc);
    }
    let mut m = envelope("verify");
    m.insert("all_equal".into(), json!(all_equal));
    m.insert("results".into(), Value::Array(docs));
    let code = if all_equal { EXIT_OK } else { EXIT_IDENTITY_FAILURE };
    Ok(Outcome { value: Value::Object(m), code, dot: None })
}

fn cmd_tropical(file: &Path) -> crate::Result<Outcome> {
    let g = read_sequence(file)?;
    let trace = c_matrix_run(&g)?;
    let mut m = envelope("tropical");
    m.insert("C".into(), Value::Array(trace.c.iter().map(rows).collect()));
    m.insert("eps_trop".into(), json!(format_signs(&trace.eps_trop)));
    if g.b.is_skew_symmetric() {
        m.insert("reddening".into(), json!(is_reddening(&g)?));
        m.insert("maximal_green".into(), json!(is_maximal_green(&g)?));
    }
    let net = build_network(&g)?;
    if net.is_fully_mutated() {
        let rep = crate::jacobian::tropical_limit_exact(&g)?.1;
        m.insert("det_i_minus_c".into(), json!(rep.det_i_minus_c));
        m.insert("det_a_trop".into(), json!(rep.det_a_trop));
    }
    Ok(Outcome::ok(Value::Object(m)))
}

fn matrix_from_source(path: &Path) -> crate::Result<ExchangeMatrix> {
    match read_matrix_source(path)? {
        MatrixSource::Sequence(g) => Ok(g.b),
        MatrixSource::Triangulation(t) => b_from_triangulation(&Triangulation::from_file(&t)?),
    }
}

fn cmd_reddening(a: &ReddeningArgs) -> crate::Result<Outcome> {
    let b = matrix_from_source(&a.file)?;
    let mut m = envelope("reddening");
    m.insert("B".into(), rows(b.matrix()));
    m.insert("depth".into(), json!(a.depth));
    let code = match search_reddening(&b, a.depth, a.green_only)? {
        SearchOutcome::Found { sequence, maximal_green, visited } => {
            m.insert("found".into(), json!(true));
            m.insert("sequence".into(), sequence_value(&sequence));
            m.insert("maximal_green".into(), json!(maximal_green));
            m.insert("visited".into(), json!(visited));
            EXIT_OK
        }
        SearchOutcome::Exhausted { visited, balanced_rows, .. } => {
            m.insert("found".into(), json!(false));
            m.insert("message".into(), json!("no reddening sequence found"));
            m.insert("visited".into(), json!(visited));
            if balanced_rows {
                m.insert("certificate".into(), json!("all A_eps column sums 0"));
            }
            EXIT_EXHAUSTED
        }
    };
    Ok(Outcome { value: Value::Object(m), code, dot: None })
}

fn parse_complex(s: &str) -> crate::Result<Complex64> {
    let bad = || Error::Parse(format!("expected re,im but got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

/// Default starting shape, off the real axis so complex solutions are reachable.
pub const DEFAULT_INIT: Complex64 = Complex64::new(0.5, 0.8);

fn cmd_gluing(a: &GluingArgs) -> crate::Result<Outcome> {
    let g = read_sequence(&a.file)?;
    let sys = gluing_system(&g)?;
    let t = sys.size();
    let sol = if a.positive {
        solve_gluing_positive(&sys, a.tol, a.max_iter.max(100_000))?
    } else {
        let parsed = a.init.iter().map(|s| parse_complex(s)).collect::<crate::Result<Vec<_>>>()?;
        let init = match parsed.len() {
            0 => vec![DEFAULT_INIT; t],
            1 => vec![parsed[0]; t],
            _ => parsed,
        };
        solve_gluing_complex(&sys, &init, a.tol, a.max_iter)?
    };
    let mut m = envelope("gluing");
    m.insert("A+".into(), rows(&sys.aplus));
    m.insert("A-".into(), rows(&sys.aminus));
    m.insert("zminus".into(), Value::Array(sol.zminus.iter().map(complex).collect()));
    m.insert("zplus".into(), Value::Array(sol.zplus().iter().map(complex).collect()));
    m.insert("residual".into(), json!(sol.residual));
    m.insert("iterations".into(), json!(sol.iterations));
    m.insert("volume".into(), json!(volume(&sol)));
    m.insert("angles".into(), to_value(&shape_angles(&sol)));
    match phi_inverse(&sol, &g, a.tol.max(1e-9)) {
        Ok(eta) => {
            m.insert("fixed_point".into(), Value::Array(eta.eta.iter().map(complex).collect()));
        }
        Err(e) => {
            m.insert("fixed_point_error".into(), json!(e.to_string()));
        }
    }
    Ok(Outcome::ok(Value::Object(m)))
}

fn cmd_dynkin(a: &DynkinArgs) -> crate::Result<Outcome> {
    let kind: DynkinType = a.kind.parse()?;
    let spec = DynkinSpec::new(kind, a.rank)?;
    let rep = dilog_identity_check(&spec, a.tol)?;
    let mut m = envelope("dynkin");
    m.insert("cartan".into(), rows(&spec.cartan));
    m.insert("dim_g".into(), json!(spec.dim_g));
    m.insert("dual_coxeter".into(), json!(spec.dual_coxeter));
    m.insert("m".into(), json!(spec.mutation_loop().m_one_based()));
    if let Value::Object(r) = to_value(&rep) {
        m.extend(r);
    }
    let code = if rep.holds || rep.holds_complement { EXIT_OK } else { EXIT_IDENTITY_FAILURE };
    Ok(Outcome { value: Value::Object(m), code, dot: None })
}

fn cmd_triangulate(file: &Path) -> crate::Result<Outcome> {
    let t = Triangulation::from_file(&read_triangulation(file)?)?;
    let b = b_from_triangulation(&t)?;
    let mut m = envelope("triangulate");
    m.insert("edges".into(), json!(t.num_edges()));
    m.insert("triangles".into(), to_value(&t.to_file().triangles));
    m.insert("B".into(), rows(b.matrix()));
    Ok(Outcome::ok(Value::Object(m)))
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    let scalar_array = |items: &[Value]| items.iter().all(|x| !x.is_array() && !x.is_object());
    match v {
        Value::Array(items) if items.is_empty() || scalar_array(items) => {
            let cells: Vec<String> = items
                .iter()
                .map(|x| serde_json::to_string(x).expect("serializable"))
                .collect();
            out.push('[');
            out.push_str(&cells.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&" ".repeat(indent + 2));
                write_json(out, x, indent + 2);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&" ".repeat(indent + 2));
                out.push_str(&serde_json::to_string(k).expect("serializable"));
                out.push_str(": ");
                write_json(out, x, indent + 2);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("serializable")),
    }
}

/// Pretty JSON with arrays of scalars kept on one line.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_json(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_matrix(v: &Value) -> bool {
    matches!(v, Value::Array(rs) if !rs.is_empty()
        && rs.iter().all(|r| matches!(r, Value::Array(cs) if cs.iter().all(|c| c.is_number() || c.is_string()))))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_into(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in map {
                render_into(out, k, x, indent + 2);
            }
        }
        _ if is_matrix(v) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for r in v.as_array().expect("matrix") {
                let cells: Vec<String> = r.as_array().expect("row").iter().map(scalar).collect();
                out.push_str(&format!("{pad}  [{}]\n", cells.join(", ")));
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || is_matrix(x)) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in items.iter().enumerate() {
                render_into(out, &format!("[{i}]"), x, indent + 2);
            }
        }
        Value::String(s) if s.contains('\n') => {
            out.push_str(&format!("{pad}{key}:\n"));
            for line in s.lines() {
                out.push_str(&format!("{pad}  {line}\n"));
            }
        }
        _ => out.push_str(&format!("{pad}{key}: {}\n", scalar(v))),
    }
}

/// Indented `key: value` rendering with matrices printed row by row.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            if k != "schema" {
                render_into(&mut out, k, x, 0);
            }
        }
    } else {
        out.push_str(&scalar(v));
        out.push('\n');
    }
    out
}
