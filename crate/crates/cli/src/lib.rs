//! Command implementations behind the `sinc-nystrom` binary.
//!
//! Every command returns its standard output as a string so it can be
//! tested without spawning a process. Errors carry the process exit code.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sinc_nystrom::benchmarks::{self, BenchmarkCase};
use sinc_nystrom::convergence::{fit_rate, predicted_rate, RateAxis, ERROR_FLOOR};
use sinc_nystrom::solver::solve;
use sinc_nystrom::{Error as CoreError, Method, SincGrid};

pub const DEFAULT_N_LIST: [usize; 7] = [2, 4, 8, 16, 32, 64, 128];
pub const DEFAULT_EVAL_POINTS: usize = 999;
pub const CSV_HEADER: [&str; 9] = [
    "case",
    "method",
    "alpha",
    "d_used",
    "N",
    "h",
    "max_error",
    "residual",
    "solve_ms",
];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("solver failed: {0}")]
    Solver(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
}

impl CliError {
    /// 1 usage, 2 evaluation (including output I/O), 3 solver failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Evaluation(_) | CliError::Output { .. } => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_) | CoreError::Domain { .. } => {
                CliError::Usage(e.to_string())
            }
            CoreError::SolverFailed { .. } | CoreError::SingularMatrix { .. } => {
                CliError::Solver(e.to_string())
            }
            _ => CliError::Evaluation(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn case_by_name(name: &str) -> Result<BenchmarkCase> {
    benchmarks::lookup(name).ok_or_else(|| {
        let known: Vec<_> = benchmarks::registry().into_iter().map(|c| c.name).collect();
        CliError::Usage(format!(
            "unknown case '{name}' (known: {}, manufactured:<seed>)",
            known.join(", ")
        ))
    })
}

/// One registry line per case with `(α, d_sup)` for each method.
pub fn cmd_list() -> String {
    let mut out = String::new();
    for case in benchmarks::registry() {
        let _ = write!(out, "{:<14}", case.name);
        for m in Method::ALL {
            let r = case.recipe(m);
            let _ = write!(out, "  {m}(alpha={}, d_sup={:.6})", r.alpha, r.d_sup());
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub case: String,
    pub method: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub h: f64,
    pub max_error: f64,
    pub residual: f64,
    pub node_count: usize,
}

pub fn run_solve(
    case: &str,
    method: Method,
    n: usize,
    eps: f64,
    eval_points: usize,
) -> Result<SolveReport> {
    let case = case_by_name(case)?;
    if n == 0 {
        return Err(CliError::Usage("N must be at least 1".into()));
    }
    let params = case.params(method, eps)?;
    let grid = SincGrid::new(*case.problem.interval(), params, n)?;
    let sol = solve(&case.problem, &grid)?;
    let max_error = sol.max_error(|p| case.exact(p), eval_points);
    if !max_error.is_finite() {
        return Err(CliError::Evaluation(format!("max_error is {max_error}")));
    }
    Ok(SolveReport {
        case: case.name.clone(),
        method: method.to_string(),
        n,
        h: grid.h(),
        max_error,
        residual: sol.residual_inf(),
        node_count: grid.len(),
    })
}

/// Single solve, reported as one JSON object.
pub fn cmd_solve(
    case: &str,
    method: Method,
    n: usize,
    eps: f64,
    eval_points: usize,
) -> Result<String> {
    let report = run_solve(case, method, n, eps, eval_points)?;
    Ok(serde_json::to_string(&report).expect("report serializes") + "\n")
}

/// One `(method, N)` entry of a sweep. `max_error` and `residual` are `None`
/// when the linear system could not be solved.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub method: Method,
    pub alpha: f64,
    pub d_used: f64,
    pub n: usize,
    pub h: f64,
    pub max_error: Option<f64>,
    pub residual: Option<f64>,
    /// Wall-clock time; volatile, excluded from determinism checks.
    pub solve_ms: f64,
}

impl ReportRow {
    pub fn node_count(&self) -> usize {
        2 * self.n + 1
    }
}

/// Rows sorted by method (SE first) and then by N.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub case: String,
    pub epsilon: f64,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "fit", rename_all = "kebab-case")]
pub enum FitSummary {
    Ok {
        method: String,
        axis: String,
        c: f64,
        intercept: f64,
        r_squared: f64,
        points: usize,
        predicted_c: f64,
    },
    InsufficientData {
        method: String,
        axis: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSummary {
    pub case: String,
    pub epsilon: f64,
    pub fits: Vec<FitSummary>,
}

fn axis_label(axis: RateAxis) -> String {
    match axis {
        RateAxis::SqrtN => "sqrt(N)".into(),
        RateAxis::NOverLog { .. } => "N/log(2dN/alpha)".into(),
    }
}

impl ConvergenceReport {
    pub fn rows_for(&self, method: Method) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(move |r| r.method == method)
    }

    /// Fits each method on its natural axis, dropping failed and floored rows.
    pub fn summary(&self) -> ConvergenceSummary {
        let mut fits = Vec::new();
        for method in Method::ALL {
            let rows: Vec<_> = self.rows_for(method).collect();
            let Some(first) = rows.first() else { continue };
            let params = sinc_nystrom::RegularityParams::new(method, first.alpha, first.d_used);
            let Ok(params) = params else { continue };
            let axis = RateAxis::natural(&params);
            let samples: Vec<_> = rows
                .iter()
                .filter_map(|r| r.max_error.map(|e| (r.n, e)))
                .collect();
            fits.push(match fit_rate(&samples, axis, ERROR_FLOOR) {
                Some(f) => FitSummary::Ok {
                    method: method.to_string(),
                    axis: axis_label(axis),
                    c: f.rate,
                    intercept: f.intercept,
                    r_squared: f.r_squared,
                    points: f.points,
                    predicted_c: predicted_rate(&params),
                },
                None => FitSummary::InsufficientData {
                    method: method.to_string(),
                    axis: axis_label(axis),
                },
            });
        }
        ConvergenceSummary {
            case: self.case.clone(),
            epsilon: self.epsilon,
            fits,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        let io_err = |e: csv::Error| CliError::Evaluation(e.to_string());
        out.write_record(CSV_HEADER).map_err(io_err)?;
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), fmt_f64);
            out.write_record([
                self.case.clone(),
                r.method.to_string(),
                fmt_f64(r.alpha),
                fmt_f64(r.d_used),
                r.n.to_string(),
                fmt_f64(r.h),
                opt(r.max_error),
                opt(r.residual),
                format!("{:.3}", r.solve_ms),
            ])
            .map_err(io_err)?;
        }
        out.flush()
            .map_err(|e| CliError::Evaluation(e.to_string()))?;
        Ok(())
    }

    /// Parses a file produced by [`write_csv`](Self::write_csv). The
    /// epsilon is not part of the table and must be supplied.
    pub fn read_csv<R: Read>(r: R, epsilon: f64) -> Result<Self> {
        let bad = |msg: String| CliError::Evaluation(format!("malformed CSV: {msg}"));
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
        if header.iter().ne(CSV_HEADER) {
            return Err(bad(format!("unexpected header {header:?}")));
        }
        let mut case = None;
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let field = |i: usize| rec.get(i).unwrap_or_default();
            let num = |i: usize| -> Result<f64> {
                field(i)
                    .parse()
                    .map_err(|_| bad(format!("bad number '{}'", field(i))))
            };
            let opt = |i: usize| -> Result<Option<f64>> {
                if field(i) == "NA" {
                    Ok(None)
                } else {
                    num(i).map(Some)
                }
            };
            case.get_or_insert_with(|| field(0).to_string());
            rows.push(ReportRow {
                method: field(1)
                    .parse()
                    .map_err(|_| bad(format!("bad method '{}'", field(1))))?,
                alpha: num(2)?,
                d_used: num(3)?,
                n: field(4)
                    .parse()
                    .map_err(|_| bad(format!("bad N '{}'", field(4))))?,
                h: num(5)?,
                max_error: opt(6)?,
                residual: opt(7)?,
                solve_ms: num(8)?,
            });
        }
        Ok(Self {
            case: case.unwrap_or_default(),
            epsilon,
            rows,
        })
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Sweeps N for both methods. Entries run concurrently; rows come back in
/// (method, N) order.
pub fn run_converge(
    case: &str,
    n_list: &[usize],
    eps: f64,
    eval_points: usize,
) -> Result<ConvergenceReport> {
    let case = case_by_name(case)?;
    if n_list.is_empty() {
        return Err(CliError::Usage("N list is empty".into()));
    }
    if n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(
            "N list must be positive and strictly ascending".into(),
        ));
    }
    let jobs: Vec<(Method, usize)> = Method::ALL
        .iter()
        .flat_map(|&m| n_list.iter().map(move |&n| (m, n)))
        .collect();
    let rows: Vec<Result<ReportRow>> = jobs
        .par_iter()
        .map(|&(method, n)| sweep_entry(&case, method, n, eps, eval_points))
        .collect();
    Ok(ConvergenceReport {
        case: case.name.clone(),
        epsilon: eps,
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

fn sweep_entry(
    case: &BenchmarkCase,
    method: Method,
    n: usize,
    eps: f64,
    eval_points: usize,
) -> Result<ReportRow> {
    let params = case.params(method, eps)?;
    let grid = SincGrid::new(*case.problem.interval(), params, n)?;
    let start = Instant::now();
    let (max_error, residual) = match solve(&case.problem, &grid) {
        Ok(sol) => {
            let err = sol.max_error(|p| case.exact(p), eval_points);
            (Some(err), Some(sol.residual_inf()))
        }
        Err(CoreError::SolverFailed { .. }) => (None, None),
        Err(e) => return Err(e.into()),
    };
    Ok(ReportRow {
        method,
        alpha: params.alpha,
        d_used: params.d,
        n,
        h: grid.h(),
        max_error,
        residual,
        // Kept at the CSV's microsecond resolution so rows round-trip.
        solve_ms: (start.elapsed().as_secs_f64() * 1e6).round() / 1e3,
    })
}

/// Path of the JSON fit summary written next to a sweep CSV.
pub fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".fit.json");
    PathBuf::from(s)
}

/// Runs the sweep, writes the CSV to `out` and the fit summary to
/// `<out>.fit.json`, and returns the summary JSON for stdout.
pub fn cmd_converge(case: &str, n_list: &[usize], eps: f64, out: &Path) -> Result<String> {
    let output_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Output { path, source }
    };
    // Open first so an unwritable path fails before the sweep runs.
    let file = File::create(out).map_err(output_err(out))?;
    let report = run_converge(case, n_list, eps, DEFAULT_EVAL_POINTS)?;
    report.write_csv(io::BufWriter::new(file))?;
    let json = serde_json::to_string_pretty(&report.summary()).expect("summary serializes") + "\n";
    let side = summary_path(out);
    std::fs::write(&side, &json).map_err(output_err(&side))?;
    Ok(json)
}
