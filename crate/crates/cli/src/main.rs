//! `darboux` — exact audits of Darboux polynomials and polynomial first
//! integrals of the FitzHugh-Nagumo travelling-wave system.
//!
//! Exit codes: 0 success, 1 mathematical failure (invalid certificate, no
//! cofactor, failed identity), 2 usage error.

mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::Config;
use darboux_core::calculus::{appendix_suite, appendix_suite_from, IdentityOutcome, ManifestEntry};
use darboux_core::darboux::{
    self, default_fn_candidates, Cofactor, ParamConstraint, ParamPoint,
};
use darboux_core::expr::{parse_rational, Poly, Rational};
use darboux_core::graded::cascade;
use darboux_core::numeric::{self, State};
use darboux_core::{par, sample::SplitMix64};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "darboux",
    about = "Exact Darboux polynomial and first-integral computations for the FitzHugh-Nagumo travelling-wave system",
    version
)]
struct Cli {
    /// Emit JSON instead of human-readable tables.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel sweeps (default: DARBOUX_THREADS or the
    /// library default).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Optional key=value config file mirroring the flags; flags win.
    #[arg(long, global = true)]
    config: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    /// Parameter a as an exact rational `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Parameter b as an exact rational `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Parameter c (wave speed) as an exact rational `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Parameter d as an exact rational `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    /// Assistant-term coefficient m as an exact rational `p/q` (default 0).
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
}

/// Override the FitzHugh-Nagumo field with a user-supplied one; all three
/// components must be given together. Degree-bounded searches over custom
/// fields require an explicit --cofactor candidate list (the built-in list
/// is complete only for the FitzHugh-Nagumo family).
#[derive(Args, Clone, Default)]
struct FieldArgs {
    /// x' component as an expression.
    #[arg(long, requires = "field_q", requires = "field_r", allow_hyphen_values = true)]
    field_p: Option<String>,
    /// y' component as an expression.
    #[arg(long, requires = "field_p", requires = "field_r", allow_hyphen_values = true)]
    field_q: Option<String>,
    /// z' component as an expression.
    #[arg(long, requires = "field_p", requires = "field_q", allow_hyphen_values = true)]
    field_r: Option<String>,
}

impl FieldArgs {
    fn is_custom(&self) -> bool {
        self.field_p.is_some()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print its canonical form.
    Parse {
        /// Expression over x, y, z, a, b, c, d, m, alpha.
        expr: String,
    },
    /// Check X(f) = k f at a numeric parameter point.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Candidate Darboux polynomial.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Cofactor expression (state degree <= 2).
        #[arg(long, allow_hyphen_values = true)]
        cofactor: String,
    },
    /// Recover the cofactor of f by exact division.
    Cofactor {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Degree-bounded Darboux search over a cofactor candidate list.
    Search {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// State-degree bound.
        #[arg(long)]
        deg: Option<u32>,
        /// Cofactor candidate (repeatable); defaults to the complete
        /// FitzHugh-Nagumo list {0} U {(4/3) n c}. Required for custom
        /// fields.
        #[arg(long = "cofactor", allow_hyphen_values = true)]
        cofactors: Vec<String>,
    },
    /// Polynomial first integrals (zero cofactor, constants excluded).
    FirstIntegrals {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        deg: Option<u32>,
    },
    /// Run the weight cascade from a top component.
    Cascade {
        #[command(flatten)]
        params: ParamArgs,
        /// Top weight component F0 (weight homogeneous, in ker(L - k1 x)).
        #[arg(long, allow_hyphen_values = true)]
        f0: String,
        /// Constant cofactor part k0.
        #[arg(long, allow_hyphen_values = true)]
        k0: String,
        /// Linear cofactor part k1 (default 0).
        #[arg(long, allow_hyphen_values = true)]
        k1: Option<String>,
    },
    /// Verify the six generator certificates and adjudicate the two
    /// conflicting parameter conditions.
    Table1,
    /// Check the integral reduction identities by formal differentiation
    /// plus quadrature.
    Appendix {
        /// Alternative identity manifest (JSON).
        #[arg(long)]
        manifest: Option<String>,
    },
    /// Integrate the flow and export a CSV trajectory.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true)]
        y0: f64,
        #[arg(long, allow_hyphen_values = true)]
        z0: f64,
        /// Horizon (default 1.0).
        #[arg(long)]
        t_end: Option<f64>,
        /// Step size (default 1e-3).
        #[arg(long)]
        step: Option<f64>,
        /// Track this polynomial along the trajectory (adds f, predicted
        /// columns with cofactor 0).
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// Exponential-transport drift report for a Darboux pair.
    Drift {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        cofactor: String,
        /// Number of random starts in [-1, 1]^3 (default 5).
        #[arg(long)]
        starts: Option<usize>,
        /// Seed for the start sampler (default 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Horizon (default 0.5).
        #[arg(long)]
        t_end: Option<f64>,
        /// Step size (default 1e-4).
        #[arg(long)]
        step: Option<f64>,
        /// Write a CSV of the first start's trajectory here.
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.config.as_deref().map(Config::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let threads = cli
        .threads
        .or_else(|| config.get_parsed("threads"))
        .or_else(|| {
            std::env::var("DARBOUX_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    let json = cli.json || config.get_parsed("json").unwrap_or(false);
    match par::with_threads(threads, || run(cli.command, &config, json)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type CliResult = Result<ExitCode, Box<dyn std::error::Error + Send + Sync>>;

fn parse_poly(text: &str) -> Result<Poly, Box<dyn std::error::Error + Send + Sync>> {
    Poly::parse(text).map_err(|e| format!("in `{text}`: {e}").into())
}

fn rational_arg(
    name: &str,
    flag: &Option<String>,
    config: &Config,
    default: Option<Rational>,
) -> Result<Rational, Box<dyn std::error::Error + Send + Sync>> {
    let text = flag.clone().or_else(|| config.get(name));
    match text {
        Some(t) => parse_rational(&t).map_err(|e| format!("--{name}: {e}").into()),
        None => default.ok_or_else(|| format!("missing required parameter --{name} (exact rational p/q)").into()),
    }
}

fn param_point(args: &ParamArgs, config: &Config) -> Result<ParamPoint, Box<dyn std::error::Error + Send + Sync>> {
    Ok(ParamPoint::new(
        rational_arg("a", &args.a, config, None)?,
        rational_arg("b", &args.b, config, None)?,
        rational_arg("c", &args.c, config, None)?,
        rational_arg("d", &args.d, config, None)?,
        rational_arg("m", &args.m, config, Some(Rational::from_integer(0.into())))?,
    ))
}

/// The flow to audit: the FitzHugh-Nagumo field at the parameter point, or
/// a user-supplied one with the parameters substituted.
fn resolve_field(
    args: &FieldArgs,
    pt: &ParamPoint,
) -> Result<darboux_core::VectorField, Box<dyn std::error::Error + Send + Sync>> {
    if !args.is_custom() {
        return Ok(pt.fn_field());
    }
    Ok(darboux_core::VectorField::new(
        state_expr(args.field_p.as_deref().unwrap(), pt)?,
        state_expr(args.field_q.as_deref().unwrap(), pt)?,
        state_expr(args.field_r.as_deref().unwrap(), pt)?,
        "user",
    ))
}

/// Substitute the parameter point into an expression and require the result
/// to involve only state variables.
fn state_expr(text: &str, pt: &ParamPoint) -> Result<Poly, Box<dyn std::error::Error + Send + Sync>> {
    let p = parse_poly(text)?.substitute_values(&pt.values());
    for v in p.used_vars() {
        if v.kind() == darboux_core::expr::VarKind::Parameter {
            return Err(format!("`{text}` still contains the symbol `{v}` after substitution").into());
        }
    }
    Ok(p)
}

fn run(command: Command, config: &Config, json: bool) -> CliResult {
    match command {
        Command::Parse { expr } => {
            let p = parse_poly(&expr)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&p)?);
            } else {
                println!("{p}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { params, field, f, cofactor } => {
            let pt = param_point(&params, config)?;
            let v = resolve_field(&field, &pt)?;
            let f = state_expr(&f, &pt)?;
            let k = Cofactor::new(state_expr(&cofactor, &pt)?)?;
            let report = darboux::verify(&f, &k, &v, &ParamConstraint::empty())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else if report.valid {
                println!("valid: X(f) = k f exactly at {pt}");
            } else {
                println!("invalid: residual = {}", report.residual);
            }
            Ok(if report.valid { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Cofactor { params, field, f } => {
            let pt = param_point(&params, config)?;
            let v = resolve_field(&field, &pt)?;
            let f = state_expr(&f, &pt)?;
            match darboux::solve_cofactor(&f, &v) {
                Ok(k) => {
                    if json {
                        println!("{}", serde_json::to_string_pretty(&k)?);
                    } else {
                        println!("cofactor: {k}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    if json {
                        println!("{}", serde_json::json!({ "error": e.to_string() }));
                    } else {
                        println!("{e}");
                    }
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Search { params, field, deg, cofactors } => {
            let pt = param_point(&params, config)?;
            let v = resolve_field(&field, &pt)?;
            let deg = deg.or_else(|| config.get_parsed("deg")).unwrap_or(4);
            let candidates = if cofactors.is_empty() {
                if field.is_custom() {
                    return Err("custom fields need an explicit --cofactor candidate list \
                                (the built-in list is complete only for the FitzHugh-Nagumo family)"
                        .into());
                }
                default_fn_candidates(&pt.c, deg)
            } else {
                cofactors
                    .iter()
                    .map(|t| state_expr(t, &pt))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let hits = darboux::search(&v, deg, &candidates)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&hits)?);
            } else if hits.is_empty() {
                println!("no Darboux polynomials found (degree <= {deg}, {} cofactor candidates)", candidates.len());
            } else {
                for hit in &hits {
                    println!("cofactor {}:", hit.cofactor);
                    for f in &hit.basis {
                        println!("  {f}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::FirstIntegrals { params, field, deg } => {
            let pt = param_point(&params, config)?;
            let v = resolve_field(&field, &pt)?;
            let deg = deg.or_else(|| config.get_parsed("deg")).unwrap_or(4);
            let basis = darboux::first_integrals(&v, deg)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&basis)?);
            } else if basis.is_empty() {
                println!("no polynomial first integrals of degree <= {deg}");
            } else {
                println!("{} independent first integrals of degree <= {deg}:", basis.len());
                for f in &basis {
                    println!("  {f}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cascade { params, f0, k0, k1 } => {
            let pt = param_point(&params, config)?;
            let f0 = state_expr(&f0, &pt)?;
            let k0 = parse_rational(&k0)?;
            let k1 = k1.as_deref().map(parse_rational).transpose()?.unwrap_or_else(|| Rational::from_integer(0.into()));
            let weight = f0
                .weight_degree(&darboux_core::expr::WeightSpec::default())
                .ok_or("F0 must be weight homogeneous under (1,2,2)")?;
            let state = cascade(&f0, &pt, &k0, &k1, weight)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&state)?);
            } else {
                output::print_cascade(&state);
            }
            Ok(if state.obstruction.is_none() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Table1 => {
            let report = darboux::table1_certificates();
            let ok = report.certificates.iter().all(|c| c.residual_witness.is_zero());
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                output::print_table1(&report);
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Appendix { manifest } => {
            let report = match manifest {
                None => appendix_suite(),
                Some(path) => {
                    let text = std::fs::read_to_string(&path)?;
                    let entries: Vec<ManifestEntry> = serde_json::from_str(&text)?;
                    appendix_suite_from(&entries)
                }
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                for entry in &report.entries {
                    match &entry.outcome {
                        IdentityOutcome::Passed => {
                            let num = entry
                                .numeric
                                .as_ref()
                                .map(|n| format!(" (quadrature rel err {:.2e})", n.rel_err))
                                .unwrap_or_default();
                            println!("pass  {}{num}", entry.name);
                        }
                        IdentityOutcome::Failed { residual } => {
                            println!("FAIL  {}: residual {residual}", entry.name);
                        }
                        IdentityOutcome::Skipped { reason } => {
                            println!("skip  {}: {reason}", entry.name);
                        }
                        IdentityOutcome::Malformed { error } => {
                            println!("ERROR {}: {error}", entry.name);
                        }
                    }
                }
                println!(
                    "{} passed, {} skipped (elliptic closed forms){}",
                    report.passed,
                    report.skipped,
                    if report.failed > 0 {
                        format!(", {} FAILED", report.failed)
                    } else {
                        String::new()
                    }
                );
            }
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Simulate { params, x0, y0, z0, t_end, step, f, out } => {
            let pt = param_point(&params, config)?;
            let t_end = t_end.or_else(|| config.get_parsed("t-end")).unwrap_or(1.0);
            let step = step.or_else(|| config.get_parsed("step")).unwrap_or(1e-3);
            let csv = match f {
                Some(ftext) => {
                    let f = state_expr(&ftext, &pt)?;
                    numeric::drift_csv(&pt.fn_field(), &f, &Poly::zero(), State::new(0.0, x0, y0, z0), t_end, step)?
                }
                None => {
                    let field = numeric::CompiledField::new(&pt.fn_field());
                    let traj = numeric::integrate(&field, State::new(0.0, x0, y0, z0), t_end, step)?;
                    let mut s = String::from("t,x,y,z\n");
                    for st in &traj.states {
                        s.push_str(&format!("{},{},{},{}\n", st.t, st.x, st.y, st.z));
                    }
                    s
                }
            };
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Drift { params, f, cofactor, starts, seed, t_end, step, out } => {
            let pt = param_point(&params, config)?;
            let starts = starts.or_else(|| config.get_parsed("starts")).unwrap_or(5);
            let seed = seed.or_else(|| config.get_parsed("seed")).unwrap_or(0);
            let t_end = t_end.or_else(|| config.get_parsed("t-end")).unwrap_or(0.5);
            let step = step.or_else(|| config.get_parsed("step")).unwrap_or(1e-4);
            let f = state_expr(&f, &pt)?;
            let k = state_expr(&cofactor, &pt)?;
            let v = pt.fn_field();
            let reports = numeric::drift_multi(&v, &f, &k, starts, seed, t_end, step)?;
            if let Some(path) = out {
                let mut rng = SplitMix64::new(seed);
                let s0 = State::new(0.0, rng.f64_in(-1.0, 1.0), rng.f64_in(-1.0, 1.0), rng.f64_in(-1.0, 1.0));
                std::fs::write(path, numeric::drift_csv(&v, &f, &k, s0, t_end, step)?)?;
            }
            let worst = reports
                .iter()
                .map(|r| r.max_relative_error)
                .fold(0.0f64, f64::max);
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                for (i, r) in reports.iter().enumerate() {
                    println!(
                        "start {i}: max relative error {:.3e}{}",
                        r.max_relative_error,
                        if r.diverged { " (diverged)" } else { "" }
                    );
                }
                println!("worst: {worst:.3e}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
