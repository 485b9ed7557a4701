//! The `holocert` command line: argument parsing, report rendering and
//! the mapping from results to exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::casebook::{batch_report, parse_cases, CaseOptions};
use crate::certify::{assemble_theorem1, AssembleOptions, Certificate, Theorem1};
use crate::diffop::{
    good_primes, indicial_at_zero, is_mom, operator_from_json, p_curvature_of, singularities, Basis, DiffOp,
    InfinityKind,
};
use crate::error::{Error, Result};
use crate::exactfield::{factor_over_q, is_prime, BigRat, Field};
use crate::holoseries::{Catalog, TruncSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

pub const DEFAULT_T: usize = 512;
pub const MIN_T: usize = 64;
pub const DEFAULT_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "holocert", version, about = "Lucas-type certificates for holonomic series modulo primes")]
pub struct Cli {
    /// Truncation order
    #[arg(long = "T", global = true)]
    pub t: Option<usize>,
    /// Comma-separated primes; 2 is only used when listed explicitly
    #[arg(short = 'p', long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Extra catalog entries (JSON object or array)
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact coefficients of a catalog series
    Expand {
        series: String,
        /// Reduce modulo this prime
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Singularities, indicial polynomial, MOM verdict, good primes and p-curvature
    Opinfo {
        /// Operator JSON file
        file: Option<PathBuf>,
        /// Use the operator of a catalog series instead
        #[arg(long, conflicts_with = "file")]
        series: Option<String>,
        /// Search bound for good primes
        #[arg(long, default_value_t = 50)]
        bound: u64,
    },
    /// Assemble and verify certificates f|_p = A_p·f|_p(z^(p^l))
    Certify {
        #[arg(required = true)]
        series: Vec<String>,
    },
    /// Re-verify certificates emitted by `certify`
    Verify { file: PathBuf },
    /// Run worked examples: 210, 26, 2f1, independence, apery or all
    Casebook {
        #[arg(required = true)]
        cases: Vec<String>,
        /// Terms checked in case 210 [default: 40]
        #[arg(long)]
        jmax_210: Option<usize>,
        /// Terms checked in case 26 [default: 30]
        #[arg(long)]
        jmax_26: Option<usize>,
        /// Largest k for the B_k heights in case 2f1 [default: 2]
        #[arg(long)]
        kmax: Option<u32>,
        /// Indices checked for the Apéry Lucas property [default: 2000]
        #[arg(long)]
        lucas_bound: Option<usize>,
    },
    /// List catalog entries
    List,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::HeightBoundViolated { .. } => EXIT_BOUND,
        Error::VerificationFailed(_)
        | Error::ReconstructionFailed(_)
        | Error::NoCycleFound { .. }
        | Error::SylvesterSingular { .. } => EXIT_VERIFY,
        _ => EXIT_INPUT,
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    catalog: Catalog,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn primes(&self) -> Result<Vec<u64>> {
        let ps = self.cli.primes.clone().unwrap_or_else(|| DEFAULT_PRIMES.to_vec());
        if ps.is_empty() {
            return Err(Error::InvalidInput("empty prime list".into()));
        }
        match ps.iter().find(|&&p| !is_prime(p)) {
            Some(p) => Err(Error::InvalidInput(format!("{p} is not prime"))),
            None => Ok(ps),
        }
    }

    fn order(&self) -> Result<Option<usize>> {
        match self.cli.t {
            Some(t) if t < MIN_T => Err(Error::InvalidInput(format!("--T must be at least {MIN_T}"))),
            t => Ok(t),
        }
    }

    fn warn(&mut self, msg: &str) {
        let _ = writeln!(self.err, "warning: {msg}");
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

/// Output text and exit code.
type Outcome = (String, i32);

fn cmd_expand(ctx: &mut Ctx, series: &str, modulus: Option<u64>) -> Result<Outcome> {
    let t = ctx.cli.t.unwrap_or(DEFAULT_T);
    if t == 0 {
        return Err(Error::InvalidInput("--T must be positive".into()));
    }
    let g = ctx.catalog.get(series)?;
    let coeffs: Vec<String> = match modulus {
        Some(p) if !is_prime(p) => return Err(Error::InvalidInput(format!("{p} is not prime"))),
        Some(p) => g.terms_mod_p(t, p)?.coeffs().iter().map(|c| c.residue().to_string()).collect(),
        None => g.gen_terms(t)?.iter().map(|c| c.to_string()).collect(),
    };
    let text = match ctx.cli.format {
        Format::Json => pretty(&json!(coeffs)),
        Format::Csv => {
            let rows: Vec<Vec<String>> = coeffs.into_iter().enumerate().map(|(n, c)| vec![n.to_string(), c]).collect();
            csv_text(&["n", "coefficient"], &rows)
        }
    };
    Ok((text, EXIT_OK))
}

fn infinity_str(k: InfinityKind) -> &'static str {
    match k {
        InfinityKind::Nonsingular => "nonsingular",
        InfinityKind::Regular => "regular singular",
        InfinityKind::Irregular => "irregular singular",
    }
}

/// Report fields for `opinfo`, in display order.
pub fn operator_report(l: &DiffOp<BigRat>, primes: &[u64], bound: u64) -> Result<Value> {
    let sing = singularities(l)?;
    let factors: Vec<Value> = sing
        .finite_points
        .iter()
        .map(|s| json!({"factor": s.factor.display_desc("z"), "regular": s.regular}))
        .collect();
    let indicial = indicial_at_zero(l)?;
    let mut exponents = Vec::new();
    let mut other = Vec::new();
    for (q, m) in factor_over_q(&indicial)? {
        if q.deg() == 1 {
            let root = q.coeff(0).neg().div(&q.coeff(1)).expect("nonzero lead");
            exponents.extend(std::iter::repeat(root.to_string()).take(m));
        } else {
            other.push(json!({"factor": q.display_desc("x"), "multiplicity": m}));
        }
    }
    let curvature: Vec<Value> = primes
        .iter()
        .map(|&p| match p_curvature_of(l, p) {
            Ok(c) => json!({"p": p, "nilpotent": c.is_nilpotent}),
            Err(e) => json!({"p": p, "error": e.to_string()}),
        })
        .collect();
    Ok(json!({
        "basis": match l.basis() { Basis::D => "d", Basis::Delta => "delta" },
        "order": l.order(),
        "finite_singular_factors": factors,
        "singular_point_count": sing.count_r,
        "infinity": infinity_str(sing.infinity),
        "fuchsian": sing.is_fuchsian(),
        "indicial": indicial.display_desc("x"),
        "exponents_at_zero": exponents,
        "irrational_exponent_factors": other,
        "mom": is_mom(l),
        "good_primes_bound": bound,
        "good_primes": good_primes(l, bound)?,
        "p_curvature": curvature,
    }))
}

/// One-line summary, e.g. `MOM: yes; indicial: x^2; finite singular factors: z, z - 1/16`.
pub fn operator_summary(report: &Value) -> String {
    let factors: Vec<&str> = report["finite_singular_factors"]
        .as_array()
        .map(|a| a.iter().filter_map(|f| f["factor"].as_str()).collect())
        .unwrap_or_default();
    format!(
        "MOM: {}; indicial: {}; finite singular factors: {}",
        if report["mom"] == true { "yes" } else { "no" },
        report["indicial"].as_str().unwrap_or("?"),
        if factors.is_empty() { "none".to_string() } else { factors.join(", ") },
    )
}

fn cmd_opinfo(ctx: &mut Ctx, file: Option<&Path>, series: Option<&str>, bound: u64) -> Result<Outcome> {
    let l = match (file, series) {
        (Some(f), _) => operator_from_json(&read_file(f)?)?,
        (None, Some(s)) => ctx.catalog.get(s)?.operator()?,
        (None, None) => return Err(Error::InvalidInput("give an operator file or --series".into())),
    };
    let primes = ctx.primes()?;
    let report = operator_report(&l, &primes, bound)?;
    let _ = writeln!(ctx.err, "{}", operator_summary(&report));
    let text = match ctx.cli.format {
        Format::Json => pretty(&report),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .as_object()
                .expect("object")
                .iter()
                .map(|(k, v)| vec![k.clone(), v.as_str().map_or_else(|| v.to_string(), str::to_string)])
                .collect();
            csv_text(&["field", "value"], &rows)
        }
    };
    Ok((text, EXIT_OK))
}

fn theorem_json(series: &str, th: &Theorem1) -> Value {
    let mut v = th.primary().to_json(series);
    v["orbit"] = json!({"a": th.orbit.a, "b": th.orbit.b, "l": th.orbit.l});
    v["n"] = json!(th.n);
    v["r"] = json!(th.r);
    v["C"] = json!(th.c);
    v
}

fn cert_csv_row(v: &Value) -> Vec<String> {
    ["series", "p", "level", "height", "bound", "bound_kind", "verified_to", "A_num", "A_den"]
        .iter()
        .map(|k| v[*k].as_str().map_or_else(|| v[*k].to_string(), str::to_string))
        .collect()
}

const CERT_HEADER: [&str; 9] = ["series", "p", "level", "height", "bound", "bound_kind", "verified_to", "A_num", "A_den"];

fn cmd_certify(ctx: &mut Ctx, series: &[String]) -> Result<Outcome> {
    let primes = ctx.primes()?;
    let opts = AssembleOptions { t: ctx.order()?, ..AssembleOptions::default() };
    let mut jobs = Vec::new();
    for s in series {
        let g = ctx.catalog.get(s)?.clone();
        let op = g.operator()?;
        for &p in &primes {
            jobs.push((g.clone(), op.clone(), p));
        }
    }
    let results: Vec<(String, u64, Result<Theorem1>)> =
        jobs.par_iter().map(|(g, op, p)| (g.name.clone(), *p, assemble_theorem1(g, op, *p, &opts))).collect();
    let mut code = EXIT_OK;
    let mut out = Vec::new();
    for (name, p, r) in results {
        match r {
            Ok(th) => out.push(theorem_json(&name, &th)),
            Err(e) => {
                let _ = writeln!(ctx.err, "error: {name} at p = {p}: {e}");
                if code == EXIT_OK {
                    code = exit_code(&e);
                }
            }
        }
    }
    let text = match ctx.cli.format {
        Format::Json => pretty(&Value::Array(out)),
        Format::Csv => csv_text(&CERT_HEADER, &out.iter().map(cert_csv_row).collect::<Vec<_>>()),
    };
    Ok((text, code))
}

fn cmd_verify(ctx: &mut Ctx, file: &Path) -> Result<Outcome> {
    let v: Value = serde_json::from_str(&read_file(file)?)
        .map_err(|e| Error::Parse { location: format!("line {}", e.line()), message: e.to_string() })?;
    let items = match v {
        Value::Array(a) => a,
        other => vec![other],
    };
    let mut rows = Vec::new();
    let mut code = EXIT_OK;
    for (i, item) in items.iter().enumerate() {
        let (name, cert) = Certificate::from_json(item).map_err(|e| match e {
            Error::Parse { location, message } => {
                Error::Parse { location: location.replacen('$', &format!("$[{i}]"), 1), message }
            }
            other => other,
        })?;
        let f: TruncSeries<_> = ctx.catalog.get(&name)?.terms_mod_p(cert.verified_to, cert.p)?;
        let pass = cert.height as u64 <= cert.bound && cert.check(&f);
        if !pass {
            code = EXIT_VERIFY;
        }
        rows.push(json!({
            "series": name, "p": cert.p, "level": cert.level,
            "verified_to": cert.verified_to, "result": if pass { "pass" } else { "fail" },
        }));
    }
    let text = match ctx.cli.format {
        Format::Json => pretty(&Value::Array(rows)),
        Format::Csv => {
            let header = ["series", "p", "level", "verified_to", "result"];
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|v| header.iter().map(|k| v[*k].as_str().map_or_else(|| v[*k].to_string(), str::to_string)).collect())
                .collect();
            csv_text(&header, &rows)
        }
    };
    Ok((text, code))
}

fn cmd_casebook(ctx: &mut Ctx, cases: &[String], tweak: CaseOptions) -> Result<Outcome> {
    let ids = parse_cases(cases)?;
    let primes = ctx.primes()?;
    let report = batch_report(&primes, &ids, &tweak);
    for row in report.rows.iter().filter(|r| r.is_excluded()) {
        let msg = format!("case {} excluded at p = {}: {}", row.case_id, row.p, row.excluded.as_deref().unwrap_or(""));
        ctx.warn(&msg);
    }
    for row in &report.rows {
        for c in row.checks.iter().filter(|c| !c.pass) {
            let _ = writeln!(ctx.err, "fail: case {} at p = {}: {} ({})", row.case_id, row.p, c.label, c.detail);
        }
    }
    let text = match ctx.cli.format {
        Format::Json => pretty(&report.to_json()),
        Format::Csv => report.to_csv(),
    };
    Ok((text, if report.all_pass() { EXIT_OK } else { EXIT_VERIFY }))
}

fn dispatch(ctx: &mut Ctx) -> Result<Outcome> {
    let cli = ctx.cli;
    match &cli.command {
        Command::Expand { series, modulus } => cmd_expand(ctx, series, *modulus),
        Command::Opinfo { file, series, bound } => cmd_opinfo(ctx, file.as_deref(), series.as_deref(), *bound),
        Command::Certify { series } => cmd_certify(ctx, series),
        Command::Verify { file } => cmd_verify(ctx, file),
        Command::Casebook { cases, jmax_210, jmax_26, kmax, lucas_bound } => {
            let d = CaseOptions::default();
            let opts = CaseOptions {
                jmax_210: jmax_210.unwrap_or(d.jmax_210),
                jmax_26: jmax_26.unwrap_or(d.jmax_26),
                kmax: kmax.unwrap_or(d.kmax),
                t: ctx.order()?.unwrap_or(d.t),
                lucas_bound: lucas_bound.unwrap_or(d.lucas_bound),
            };
            cmd_casebook(ctx, cases, opts)
        }
        Command::List => {
            let rows: Vec<Value> = ctx.catalog.iter().map(|g| g.to_json()).collect();
            let text = match cli.format {
                Format::Json => pretty(&Value::Array(rows)),
                Format::Csv => csv_text(
                    &["name", "kind"],
                    &rows.iter().map(|v| vec![v["name"].as_str().unwrap_or("").into(), v["kind"].as_str().unwrap_or("").into()]).collect::<Vec<_>>(),
                ),
            };
            Ok((text, EXIT_OK))
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let mut catalog = Catalog::builtin();
    if let Some(path) = &cli.catalog {
        if let Err(e) = read_file(path).and_then(|text| catalog.extend_from_json(&text)) {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    }
    let mut ctx = Ctx { cli: &cli, catalog, err };
    match dispatch(&mut ctx) {
        Ok((text, code)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(ctx.err, "error: {msg}");
                return EXIT_INPUT;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            exit_code(&e)
        }
    }
}
