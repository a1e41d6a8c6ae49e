//! Command-line front end: file formats, subcommands and reports.

pub mod expr;
pub mod files;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use redform::diffsys::{check_gauge_identity, series_gauge_check, DiffSystem, Orientation};
use redform::liealgebra::{derived_series_dims, lie_dim};
use redform::linalg::RfMatrix;
use redform::ratsolve::{param_antiderivative, scalar_rational_solutions};
use redform::reducer::{
    adjoint_action, flag_filtration, flag_filtration_general, flag_on_subspace, independence_report, reduce_multi_block,
    BranchRule, DirectionStatus, Flag, FreeValues, IntegralVerdict, ReductionOptions, ReductionReport,
};
use redform::liealgebra::wei_norman_matrix;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use thiserror::Error;

use files::{print_matrix, print_qmatrix, Certificate, CertificateInput, RatsolveFile, SystemFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] redform::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use redform::Error as E;
        match self {
            CliError::Core(E::Unsupported(_)) => 3,
            CliError::Core(E::Assumption(_)) => 4,
            CliError::Core(E::Certificate(_)) => 5,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Lex,
}

#[derive(Debug, Parser)]
#[command(name = "redform", version, about = "Reduced forms of block-triangular linear differential systems over Q(x)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct JsonArg {
    /// Emit the JSON report, to the given path or to standard output.
    #[arg(long, num_args = 0..=1, value_name = "PATH")]
    pub json: Option<Option<PathBuf>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a block-triangular system and report the Lie algebra dimensions.
    Reduce {
        file: PathBuf,
        #[command(flatten)]
        json: JsonArg,
        /// Order of the series oracle; 0 skips it.
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, value_enum, default_value_t = BranchArg::Lex)]
        branch: BranchArg,
        /// Treat the diagonal blocks as reduced even if the file does not say so.
        #[arg(long)]
        assume_diag_reduced: bool,
        /// Give surviving free constants seeded random values instead of 0.
        #[arg(long, value_name = "SEED")]
        free_seed: Option<u64>,
    },
    /// Dimension of the Lie algebra of the Wei–Norman generators.
    LieDim {
        file: PathBuf,
        #[command(flatten)]
        json: JsonArg,
    },
    /// Adjoint action of the diagonal on the coupling block and its flag.
    Adjoint {
        file: PathBuf,
        #[command(flatten)]
        json: JsonArg,
        /// Reject actions that are not nilpotent modulo scalars.
        #[arg(long)]
        strict: bool,
    },
    /// Rational solutions of a parametrized scalar equation.
    Ratsolve {
        file: PathBuf,
        #[command(flatten)]
        json: JsonArg,
    },
    /// Verify `A_red = P[A]` exactly.
    Check {
        certificate: PathBuf,
        #[command(flatten)]
        json: JsonArg,
    },
    /// Verify a certificate against truncated power series solutions.
    SeriesCheck {
        certificate: PathBuf,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[command(flatten)]
        json: JsonArg,
    },
}

struct Output {
    text: String,
    json: Value,
    failure: Option<CliError>,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let raw = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Lower => "lower",
        Orientation::Upper => "upper",
    }
}

fn matrix_text(m: &RfMatrix, var: &str, indent: &str) -> String {
    let rows = print_matrix(m, var);
    rows.iter().map(|r| format!("{indent}[{}]\n", r.join(", "))).collect()
}

fn status_name(s: DirectionStatus) -> &'static str {
    match s {
        DirectionStatus::Absent => "absent",
        DirectionStatus::Removed => "removed",
        DirectionStatus::Obstructed => "obstructed",
        DirectionStatus::Skipped => "skipped",
    }
}

fn reduce_cmd(file: &Path, order: usize, assume: bool, free_seed: Option<u64>) -> Result<Output, CliError> {
    let sf: SystemFile = read_json(file)?;
    let var = sf.variable.clone();
    let sys = sf.system(assume)?;
    let opts = ReductionOptions {
        branch: BranchRule::Lex,
        free_values: free_seed.map_or(FreeValues::Zero, FreeValues::Seeded),
        summands: sf.summand_matrices()?,
        series_order: order,
        diag_galois_dim: sf.diag_galois_dim,
        ..Default::default()
    };
    let rep = reduce_multi_block(&sys, &opts)?;
    if !check_gauge_identity(&rep.gauge, &sys, &rep.reduced) {
        return Err(redform::Error::Certificate("gauge identity fails on the emitted certificate".into()).into());
    }
    Ok(reduce_output(&rep, &var))
}

fn reduce_output(rep: &ReductionReport, var: &str) -> Output {
    let ind = independence_report(rep);
    let sys = &rep.original;
    let mut t = String::new();
    let _ = writeln!(t, "system: {}x{}, blocks {:?}, {} orientation", sys.dim(), sys.dim(), sys.blocks(), orientation_name(sys.orientation()));
    let _ = writeln!(t, "verdict: {}", rep.verdict());
    let _ = writeln!(t, "lie_dim: {} -> {}", rep.lie_dim_before, rep.lie_dim_after);
    let _ = writeln!(t, "off-diagonal lie_dim: {} -> {}", rep.offdiag_dim_before, rep.offdiag_dim_after);
    let _ = writeln!(t, "removed: {}", rep.removed.join(" "));
    let _ = writeln!(t, "obstructed: {}", rep.obstructed.join(" "));
    if !rep.constraints_log.is_empty() {
        let _ = writeln!(t, "constraints:");
        for l in &rep.constraints_log {
            for r in &l.rows {
                let _ = writeln!(t, "  summand {} level {}: {}", l.summand + 1, l.level, r.display(&rep.params));
            }
        }
    }
    for b in &rep.branch_choices {
        let rows: Vec<String> = b.kept_rows.iter().map(|r| r.display(&rep.params)).collect();
        let _ = writeln!(t, "branch: removed {} ({}), left {}", b.kept, rows.join(", "), b.excluded);
    }
    if !rep.free_params.is_empty() {
        let v: Vec<String> =
            rep.free_params.iter().map(|p| format!("{} = {}", rep.params.label(*p), rep.assignment.get(p).cloned().unwrap_or_default())).collect();
        let _ = writeln!(t, "free constants: {}", v.join(", "));
    }
    let _ = writeln!(t, "gauge P:\n{}", matrix_text(rep.gauge.matrix(), var, "  "));
    let _ = writeln!(t, "reduced A:\n{}", matrix_text(rep.reduced.a(), var, "  "));
    if let Some(s) = &rep.series_check {
        let _ = writeln!(t, "series check: {} at {var} = {} to order {}", if s.ok { "ok" } else { "FAILED" }, s.point, s.order);
    }
    let _ = writeln!(t, "residual in diagonal span: {}", rep.residual_in_diag_span);
    let _ = writeln!(
        t,
        "assumption: diagonal blocks {}",
        if rep.diag_reduced_assumed { "asserted reduced" } else { "not asserted reduced" }
    );
    let _ = write!(t, "independence:\n{}", ind.to_string().lines().map(|l| format!("  {l}\n")).collect::<String>());

    let directions: Vec<Value> = rep
        .directions
        .iter()
        .map(|d| {
            json!({
                "name": d.name,
                "summand": d.summand + 1,
                "level": d.level,
                "position": d.position,
                "coupled": d.coupled,
                "matrix": print_qmatrix(&d.matrix),
                "status": status_name(d.status),
                "coupling": d.coupling.to_string_in(var),
                "family": d.family.display(&rep.params),
                "value": d.value.to_string_in(var),
                "residual": d.residual.to_string_in(var),
            })
        })
        .collect();
    let log: Vec<Value> = rep
        .constraints_log
        .iter()
        .map(|l| {
            json!({
                "step": l.step,
                "summand": l.summand + 1,
                "level": l.level,
                "coupled": l.coupled,
                "constraints": l.rows.iter().map(|r| r.display(&rep.params)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let branches: Vec<Value> = rep
        .branch_choices
        .iter()
        .map(|b| {
            json!({
                "removed": b.kept,
                "left": b.excluded,
                "constraints": b.kept_rows.iter().map(|r| r.display(&rep.params)).collect::<Vec<_>>(),
                "alternative": b.alternative_rows.iter().map(|r| r.display(&rep.params)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let steps: Vec<Value> = rep
        .steps
        .iter()
        .map(|s| json!({"offset": s.offset, "blocks": [s.blocks.0, s.blocks.1], "gauge_is_identity": s.gauge_is_identity, "removed": s.removed, "obstructed": s.obstructed}))
        .collect();
    let integrals = ind.integrals.as_ref().map(|v| match v {
        IntegralVerdict::Independent { count } => json!({"verdict": "independent", "count": count}),
        IntegralVerdict::Partial { independent, total } => json!({"verdict": "partial", "independent": independent, "total": total}),
        IntegralVerdict::Dependent { relations } => json!({
            "verdict": "dependent",
            "relations": relations.iter().map(|r| json!({
                "row": r.row + 1,
                "integrand": r.integrand.iter().map(|f| f.to_string_in(var)).collect::<Vec<_>>(),
                "coefficients": r.coefficients.iter().map(|f| f.to_string_in(var)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
    });
    let json = json!({
        "verdict": rep.verdict(),
        "orientation": orientation_name(sys.orientation()),
        "blocks": sys.blocks(),
        "lie_dim_before": rep.lie_dim_before,
        "lie_dim_after": rep.lie_dim_after,
        "offdiag_lie_dim_before": rep.offdiag_dim_before,
        "offdiag_lie_dim_after": rep.offdiag_dim_after,
        "diag_lie_dim": rep.diag_lie_dim,
        "diag_galois_dim": rep.diag_galois_dim,
        "envelope_certified": rep.envelope_certified(),
        "diag_reduced_assumed": rep.diag_reduced_assumed,
        "residual_in_diag_span": rep.residual_in_diag_span,
        "removed": rep.removed,
        "obstructed": rep.obstructed,
        "constraints_log": log,
        "branch_choices": branches,
        "free_constants": rep.free_params.iter().map(|p| json!({
            "name": rep.params.label(*p),
            "value": rep.assignment.get(p).cloned().unwrap_or_default().to_string(),
        })).collect::<Vec<_>>(),
        "directions": directions,
        "steps": steps,
        "series_check": rep.series_check.as_ref().map(|s| json!({"point": s.point.to_string(), "order": s.order, "ok": s.ok})),
        "certificate": Certificate::new(rep.original.a(), rep.gauge.matrix(), rep.reduced.a(), var),
        "independence": {
            "galois_dim": ind.galois_dim,
            "galois_dim_before": ind.galois_dim_before,
            "certified": ind.certified,
            "integrals": integrals,
            "generators": ind.generators,
            "statements": ind.statements,
            "caveats": ind.caveats,
        },
    });
    Output { text: t, json, failure: None }
}

fn lie_dim_cmd(file: &Path) -> Result<Output, CliError> {
    let sf: SystemFile = read_json(file)?;
    let sys = sf.system(false)?;
    let l = lie_dim(&sys);
    let chain = derived_series_dims(&l.basis.basis);
    let depth = (chain.last() == Some(&0)).then(|| chain.len() - 1);
    let mut t = String::new();
    let _ = writeln!(t, "lie_dim: {}", l.dim);
    let _ = writeln!(t, "derived series: {}", chain.iter().map(usize::to_string).collect::<Vec<_>>().join(", "));
    match depth {
        Some(d) => {
            let _ = writeln!(t, "solvable of depth {d}");
        }
        None => {
            let _ = writeln!(t, "not solvable");
        }
    }
    let _ = writeln!(t, "envelope certified: {}", l.basis.envelope_certified);
    let funcs: Vec<String> = l.decomp.funcs.iter().map(|f| f.to_string_in(&sf.variable)).collect();
    let _ = writeln!(t, "Wei-Norman functions: {}", funcs.join(", "));
    let json = json!({
        "lie_dim": l.dim,
        "derived_series": chain,
        "solvable_depth": depth,
        "envelope_certified": l.basis.envelope_certified,
        "functions": funcs,
        "generators": l.decomp.mats.iter().map(print_qmatrix).collect::<Vec<_>>(),
        "basis": l.basis.basis.iter().map(print_qmatrix).collect::<Vec<_>>(),
    });
    Ok(Output { text: t, json, failure: None })
}

fn flag_json(f: &Flag) -> Value {
    json!({
        "levels": f.levels.iter().map(|l| json!({
            "level": l.index,
            "coupled": l.coupled,
            "directions": (l.start..l.start + l.len).map(|k| json!({"name": f.names[k], "matrix": print_qmatrix(&f.basis[k])})).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "shift": f.shift_function().to_string(),
    })
}

fn adjoint_cmd(file: &Path, strict: bool) -> Result<Output, CliError> {
    let sf: SystemFile = read_json(file)?;
    let var = sf.variable.clone();
    let sys = sf.system(false)?;
    let low = sys.to_lower();
    let act = adjoint_action(&low)?;
    let decomp = wei_norman_matrix(&low.diag_part());
    let flags: Vec<Flag> = match sf.summand_matrices()? {
        Some(ss) => {
            let mut first = 1;
            let mut out = Vec::new();
            for s in &ss {
                out.push(flag_on_subspace(&act, &decomp, s, first)?);
                first += s.len();
            }
            out
        }
        None if strict => vec![flag_filtration(&act, &decomp)?],
        None => vec![flag_filtration_general(&act, &decomp)?],
    };
    let mut t = String::new();
    let _ = writeln!(t, "Psi ({}x{}):\n{}", act.dim(), act.dim(), matrix_text(&act.psi, &var, "  "));
    for (i, f) in flags.iter().enumerate() {
        let _ = writeln!(t, "flag {} (dimension {}), top level first:", i + 1, f.dim());
        for l in &f.levels {
            let names: Vec<&str> = (l.start..l.start + l.len).map(|k| f.names[k].as_str()).collect();
            let _ = writeln!(t, "  level {}{}: {}", l.index, if l.coupled { " (coupled)" } else { "" }, names.join(" "));
        }
        let shift = f.shift_function();
        if !shift.is_zero() {
            let _ = writeln!(t, "  scalar shift: {}", shift.to_string_in(&var));
        }
    }
    let json = json!({
        "psi": print_matrix(&act.psi, &var),
        "flags": flags.iter().map(flag_json).collect::<Vec<_>>(),
    });
    Ok(Output { text: t, json, failure: None })
}

fn ratsolve_cmd(file: &Path) -> Result<Output, CliError> {
    let rf: RatsolveFile = read_json(file)?;
    let mut parsed = rf.parse()?;
    let space = match &parsed.operator {
        Some(op) => scalar_rational_solutions(op, &parsed.rhs, &mut parsed.alloc)?,
        None => param_antiderivative(&parsed.rhs, &mut parsed.alloc),
    };
    let alloc = &parsed.alloc;
    let constraints: Vec<String> = space.constraints.rows().map(|r| r.display(alloc)).collect();
    let mut t = String::new();
    let json = if space.empty {
        let _ = writeln!(t, "no rational solution");
        json!({"empty": true, "constraints": constraints})
    } else {
        let sol: Vec<String> = space.particular.iter().map(|p| space.constraints.reduce(p).display(alloc)).collect();
        let free: Vec<&str> = parsed
            .given
            .iter()
            .chain(&space.new_params)
            .filter(|p| !space.constraints.is_pivot(**p))
            .map(|p| alloc.label(*p))
            .collect();
        let _ = writeln!(t, "y = {}", sol.join(", "));
        for c in &constraints {
            let _ = writeln!(t, "constraint: {c}");
        }
        let _ = writeln!(t, "free parameters: {}", free.join(", "));
        json!({"empty": false, "solution": sol, "constraints": constraints, "free_parameters": free})
    };
    Ok(Output { text: t, json, failure: None })
}

fn check_cmd(path: &Path) -> Result<Output, CliError> {
    let cert = read_json::<CertificateInput>(path)?.into_certificate().parse()?;
    let ok = check_gauge_identity(&cert.p, &cert.a, &cert.a_red);
    let text = if ok { "certificate verified: A_red = P[A]\n".to_string() } else { "certificate REJECTED: A_red != P[A]\n".to_string() };
    let failure = (!ok).then(|| redform::Error::Certificate("A_red differs from P[A]".into()).into());
    Ok(Output { text, json: json!({"verified": ok}), failure })
}

fn series_check_cmd(path: &Path, order: usize) -> Result<Output, CliError> {
    let cert = read_json::<CertificateInput>(path)?.into_certificate().parse()?;
    let (point, ok) = series_gauge_check(&cert.p, &cert.a, &cert.a_red, order)?;
    let text = format!("series check {} at x = {point} to order {order}\n", if ok { "passed" } else { "FAILED" });
    let failure = (!ok).then(|| redform::Error::Certificate(format!("series solutions disagree at x = {point}")).into());
    Ok(Output { text, json: json!({"ok": ok, "point": point.to_string(), "order": order}), failure })
}

fn emit(out: Output, json: &JsonArg, stdout: &mut dyn Write) -> Result<(), CliError> {
    let body = serde_json::to_string_pretty(&out.json).expect("serializable") + "\n";
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match &json.json {
        Some(None) => stdout.write_all(body.as_bytes()).map_err(io)?,
        Some(Some(p)) => {
            std::fs::write(p, body).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
            stdout.write_all(out.text.as_bytes()).map_err(io)?;
        }
        None => stdout.write_all(out.text.as_bytes()).map_err(io)?,
    }
    match out.failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

/// Runs one command; returns the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Reduce { file, json, order, branch: BranchArg::Lex, assume_diag_reduced, free_seed } => {
            reduce_cmd(&file, order, assume_diag_reduced, free_seed).and_then(|o| emit(o, &json, stdout))
        }
        Command::LieDim { file, json } => lie_dim_cmd(&file).and_then(|o| emit(o, &json, stdout)),
        Command::Adjoint { file, json, strict } => adjoint_cmd(&file, strict).and_then(|o| emit(o, &json, stdout)),
        Command::Ratsolve { file, json } => ratsolve_cmd(&file).and_then(|o| emit(o, &json, stdout)),
        Command::Check { certificate, json } => check_cmd(&certificate).and_then(|o| emit(o, &json, stdout)),
        Command::SeriesCheck { certificate, order, json } => series_check_cmd(&certificate, order).and_then(|o| emit(o, &json, stdout)),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{}", e.render()) } else { write!(stderr, "{}", e.render()) };
            code
        }
    }
}

/// System file for a reduced system, for round trips through `reduce`.
pub fn system_file(sys: &DiffSystem, var: &str) -> SystemFile {
    SystemFile::from_system(sys, var)
}
