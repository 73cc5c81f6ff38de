//! `cr-umbilic`: invariant fields, umbilical loci, traced varieties and the
//! verification suites, written as CSV or JSON.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 usage, parameter
//! or I/O error.

mod schema;

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cr_umbilic::ambient::Point4;
use cr_umbilic::ellipsoid::{locus_curves, torus_chart, CurveKind, EllipsoidParams, LocusCurve};
use cr_umbilic::invariants::invariants_at;
use cr_umbilic::tracer::{trace_variety, TraceConfig};
use cr_umbilic::verify::{run_suite, Suite, VerifyConfig};
use serde::Serialize;
use thiserror::Error;

use schema::*;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Params(#[from] cr_umbilic::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// The reader closed stdout early, as `| head` does.
    fn is_broken_pipe(&self) -> bool {
        let kind = match self {
            CliError::Output { source, .. } => Some(source.kind()),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(io) => Some(io.kind()),
                _ => None,
            },
            CliError::Json(e) => e.io_error_kind(),
            _ => None,
        };
        kind == Some(io::ErrorKind::BrokenPipe)
    }
}

impl From<io::Error> for CliError {
    fn from(source: io::Error) -> Self {
        CliError::Output {
            path: "output".into(),
            source,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "cr-umbilic", version, about = "CR umbilical points of real ellipsoids in C^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Ellipsoid parameter a, 0 <= b <= a < 1.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    a: f64,
    /// Ellipsoid parameter b.
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    b: f64,
    /// Output file; stdout when omitted or "-".
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// J, R, |A11| and Q11 on an N x N torus-chart grid of the ellipsoid.
    Invariants {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Closed-form umbilical curves (gamma, and the b = 0 / b = a loci).
    Locus {
        #[command(flatten)]
        common: Common,
        /// Samples per curve.
        #[arg(long, default_value_t = 720)]
        samples: usize,
    },
    /// Continuation of the variety V for 0 < b < a < 1.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Newton tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Angular resolution of the S^3 seed grid.
        #[arg(long, default_value_t = 16)]
        seed_grid: usize,
        /// Arc-length step.
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Run the verification suites; exit 1 if any fails.
    Verify {
        /// Run only this suite (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        /// Random points per parameter pair.
        #[arg(long)]
        samples: Option<usize>,
        /// Report file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Negative control: perturb the named suite's identity.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

fn params(c: &Common) -> Result<EllipsoidParams, CliError> {
    Ok(EllipsoidParams::new(c.a, c.b)?)
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let f = File::create(p).map_err(|source| CliError::Output {
                path: p.display().to_string(),
                source,
            })?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        _ => Ok(Box::new(io::BufWriter::new(io::stdout()))),
    }
}

fn write_csv<T: Serialize>(out: Box<dyn Write>, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(mut out: Box<dyn Write>, doc: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, doc)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn cmd_invariants(common: &Common, grid: usize) -> Result<(), CliError> {
    let pr = params(common)?;
    if grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let src = pr.poly();
    let mut rows = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let s = 2.0 * PI * i as f64 / grid as f64;
        for k in 0..grid {
            let t = 2.0 * PI * k as f64 / grid as f64;
            let p = torus_chart(&pr, s, t);
            let rep = invariants_at(&src, &p)?;
            let [x, y, u, v] = p.to_real();
            rows.push(InvariantRow {
                format_version: FORMAT_VERSION,
                s,
                t,
                x,
                y,
                u,
                v,
                j: rep.j,
                r: rep.r,
                abs_a11: rep.a11.norm(),
                re_q11: rep.q11.re,
                im_q11: rep.q11.im,
            });
        }
    }
    let out = open_out(&common.out)?;
    match common.format {
        Format::Csv => write_csv(out, &rows),
        Format::Json => write_json(
            out,
            &InvariantsDoc {
                format_version: FORMAT_VERSION,
                command: "invariants".into(),
                params: Params { a: pr.a(), b: pr.b() },
                grid,
                rows,
            },
        ),
    }
}

fn kind_label(c: &LocusCurve) -> String {
    match (c.kind, c.tau) {
        (CurveKind::SpecialBA, Some(t)) if t == 1.0 => "special_ba=gamma_plus".into(),
        (CurveKind::SpecialBA, Some(t)) if t == -1.0 => "special_ba=gamma_minus".into(),
        (k, _) => k.name().into(),
    }
}

fn locus_rows(idx: usize, c: &LocusCurve, samples: usize) -> Result<Vec<LocusRow>, CliError> {
    let src = c.params.poly();
    let kind = kind_label(c);
    (0..samples)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / samples as f64;
            let p: Point4 = c
                .point(t)
                .ok_or_else(|| CliError::Usage(format!("curve {kind} has no parametrization")))?;
            let q = invariants_at(&src, &p)?.q11;
            let [x, y, u, v] = p.to_real();
            Ok(LocusRow {
                format_version: FORMAT_VERSION,
                curve: idx,
                kind: kind.clone(),
                tau: c.tau,
                sign: c.sign,
                s0: c.s0,
                t,
                x,
                y,
                u,
                v,
                rho: c.params.rho(&p),
                defining_residual: c.defining_residual(&p)?,
                abs_q11: q.norm(),
            })
        })
        .collect()
}

fn cmd_locus(common: &Common, samples: usize) -> Result<(), CliError> {
    let pr = params(common)?;
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let curves = locus_curves(&pr)?;
    let notice = (pr.b() > 0.0 && pr.b() < pr.a()).then(|| {
        "for 0 < b < a the umbilical locus also contains the variety V, which has no closed form; run `cr-umbilic trace`".to_string()
    });
    if let Some(n) = &notice {
        eprintln!("notice: {n}");
    }
    let per_curve = curves
        .iter()
        .enumerate()
        .map(|(i, c)| locus_rows(i, c, samples))
        .collect::<Result<Vec<_>, _>>()?;
    let out = open_out(&common.out)?;
    match common.format {
        Format::Csv => write_csv(out, &per_curve.concat()),
        Format::Json => write_json(
            out,
            &LocusDoc {
                format_version: FORMAT_VERSION,
                command: "locus".into(),
                params: Params { a: pr.a(), b: pr.b() },
                notice,
                curves: curves
                    .iter()
                    .zip(per_curve)
                    .map(|(c, rows)| CurveDoc {
                        kind: kind_label(c),
                        tau: c.tau,
                        sign: c.sign,
                        s0: c.s0,
                        samples: rows,
                    })
                    .collect(),
            },
        ),
    }
}

fn cmd_trace(common: &Common, tol: f64, seed_grid: usize, step: f64) -> Result<(), CliError> {
    let pr = params(common)?;
    let cfg = TraceConfig {
        seed_grid,
        newton_tol: tol,
        step_len: step,
        ..TraceConfig::default()
    };
    let v = trace_variety(&pr, &cfg)?;
    let comps: Vec<ComponentDoc> = v
        .components
        .iter()
        .enumerate()
        .map(|(ci, c)| ComponentDoc {
            closed: c.closed,
            vertices: c
                .vertices
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    let [px, py, pu, pv] = x.point.to_real();
                    TraceRow {
                        format_version: FORMAT_VERSION,
                        component: ci,
                        closed: c.closed,
                        vertex: k,
                        x: px,
                        y: py,
                        u: pu,
                        v: pv,
                        rho_residual: x.rho_residual,
                        re_s: x.re_s,
                        im_s: x.im_s,
                        dist_gamma: x.dist_gamma,
                        singular: x.singular,
                    }
                })
                .collect(),
        })
        .collect();
    let out = open_out(&common.out)?;
    match common.format {
        Format::Csv => {
            let rows: Vec<TraceRow> = comps.into_iter().flat_map(|c| c.vertices).collect();
            write_csv(out, &rows)
        }
        Format::Json => write_json(
            out,
            &TraceDoc {
                format_version: FORMAT_VERSION,
                command: "trace".into(),
                params: Params { a: pr.a(), b: pr.b() },
                components: comps,
            },
        ),
    }
}

fn parse_suite(s: &str) -> Result<Suite, CliError> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        CliError::Usage(format!("unknown suite '{s}'; expected one of {}", names.join(", ")))
    })
}

fn cmd_verify(
    suites: &[String],
    samples: Option<usize>,
    out: &Option<PathBuf>,
    fault: &Option<String>,
) -> Result<bool, CliError> {
    let selected = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|s| parse_suite(s)).collect::<Result<Vec<_>, _>>()?
    };
    let mut cfg = VerifyConfig {
        fault: fault.as_deref().map(parse_suite).transpose()?,
        ..VerifyConfig::default()
    };
    if let Some(n) = samples {
        if n == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        cfg.samples = n;
    }
    let mut w = open_out(out)?;
    writeln!(w, "{:<14} {:<6} {:>8} {:>11} {:>8}  identity", "suite", "result", "checks", "worst", "seconds")?;
    let mut all = true;
    for s in selected {
        let r = run_suite(s, &cfg);
        all &= r.passed();
        writeln!(
            w,
            "{:<14} {:<6} {:>8} {:>11.3e} {:>8.2}  {}",
            s.name(),
            if r.passed() { "pass" } else { "FAIL" },
            r.stat.checks,
            r.stat.worst,
            r.seconds,
            s.description()
        )?;
        if !r.passed() {
            writeln!(w, "    {} failed checks", r.stat.failures)?;
            for e in r.stat.errors.iter().take(5) {
                writeln!(w, "    {e}")?;
            }
        }
    }
    writeln!(w, "{}", if all { "all suites passed" } else { "verification FAILED" })?;
    w.flush()?;
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Invariants { common, grid } => cmd_invariants(common, *grid).map(|_| true),
        Command::Locus { common, samples } => cmd_locus(common, *samples).map(|_| true),
        Command::Trace {
            common,
            tol,
            seed_grid,
            step,
        } => cmd_trace(common, *tol, *seed_grid, *step).map(|_| true),
        Command::Verify {
            suite,
            samples,
            out,
            inject_fault,
        } => cmd_verify(suite, *samples, out, inject_fault),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
