//! One function per subcommand. Each returns the JSON to print and the exit code.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twofold_core::diagnostics::{check_identities, check_strict_contraction, verify_solution};
use twofold_core::inversion::{build_m, build_omega, check_lemma_suite, verify_inverse, IDENTITY_NAMES};
use twofold_core::oracle::{random_fixture, synthesize_data, Fixture};
use twofold_core::solver::{self, solve_factorization, solve_polynomial, solve_truncated};
use twofold_core::{CheckReport, Error, LaurentPoly, MVariant, Method, SolveOptions, SolveReport, Verdict};

use crate::codec::{from_json, to_json, CheckReportJson, GFile, Metadata, ProblemFile, SolveReportJson};
use crate::{CliError, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_REFUSED};

/// What a command prints and how the process exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// JSON for standard output; empty when the result went to a file.
    pub stdout: String,
    pub code: u8,
    /// Human-readable lines for the error stream.
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Poly,
    Truncated,
    Factorization,
    All,
}

pub fn exit_code(report: &CheckReport) -> u8 {
    match report.verdict() {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(json: String, out: Option<&Path>) -> Result<String, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, json + "\n").map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(json),
    }
}

pub fn read_problem(path: &Path) -> Result<ProblemFile, CliError> {
    from_json(&path.display().to_string(), &read(path)?)
}

pub fn read_g(path: &Path) -> Result<LaurentPoly, CliError> {
    from_json::<GFile>(&path.display().to_string(), &read(path)?)?.decode()
}

fn check_outcome(report: &CheckReport, json: String) -> Outcome {
    let diagnostics = report
        .failures()
        .map(|e| format!("{}: {:?} {:.3e} (threshold {:.1e})", e.name, e.verdict, e.value, e.threshold))
        .collect();
    Outcome {
        stdout: json,
        code: exit_code(report),
        diagnostics,
    }
}

fn fixture_file(fx: &Fixture, seed: Option<u64>) -> ProblemFile {
    ProblemFile::new(
        &fx.data,
        Some(&fx.g),
        Metadata {
            seed,
            provenance: Some(fx.note.clone()),
        },
    )
}

fn synthesis_error(e: Error) -> CliError {
    match e {
        Error::SynthesisFailure(msg) => CliError::Synthesis(msg),
        Error::Degenerate(msg) => CliError::Parse(msg),
        other => CliError::Synthesis(other.to_string()),
    }
}

pub fn synthesize(g_file: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let g = read_g(g_file)?;
    let fx = synthesize_data(&g).map_err(synthesis_error)?;
    Ok(Outcome {
        stdout: emit(to_json(&fixture_file(&fx, None)), out)?,
        code: EXIT_OK,
        diagnostics: Vec::new(),
    })
}

pub fn random(p: usize, q: usize, m: usize, norm: f64, seed: u64, out: Option<&Path>) -> Result<Outcome, CliError> {
    let fx = random_fixture(p, q, m, norm, seed).map_err(synthesis_error)?;
    Ok(Outcome {
        stdout: emit(to_json(&fixture_file(&fx, Some(seed))), out)?,
        code: EXIT_OK,
        diagnostics: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refusal {
    pub method: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub status: String,
    pub reports: Vec<SolveReportJson>,
    pub refusals: Vec<Refusal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairwise_gap: Option<f64>,
}

/// Inclusion residuals above tolerance, by name.
fn unmet_inclusions(rep: &SolveReport) -> Vec<String> {
    twofold_core::inversion::INCLUSION_NAMES
        .iter()
        .zip(rep.inclusion_residuals)
        .filter(|(_, r)| !(*r <= rep.tol))
        .map(|(name, r)| format!("{}: inclusion {name} residual {r:.3e} exceeds {:.1e}", rep.method.name(), rep.tol))
        .collect()
}

pub fn solve(data_file: &Path, method: MethodArg, order: Option<usize>, tol: f64) -> Result<Outcome, CliError> {
    let (data, _) = read_problem(data_file)?.decode()?;
    let opts = SolveOptions { tol, order };
    let runs: Vec<(Method, twofold_core::Result<SolveReport>)> = match method {
        MethodArg::Poly => vec![(Method::Polynomial, solve_polynomial(&data, &opts))],
        MethodArg::Truncated => vec![(Method::Truncated, solve_truncated(&data, &opts))],
        MethodArg::Factorization => vec![(Method::Factorization, solve_factorization(&data, &opts))],
        MethodArg::All => solver::solve_all(&data, &opts),
    };

    let mut reports = Vec::new();
    let mut refusals = Vec::new();
    let mut diagnostics = Vec::new();
    let mut refused = false;
    let mut inconsistent = false;
    for (m, run) in runs {
        match run {
            Ok(rep) => {
                let unmet = unmet_inclusions(&rep);
                refused |= !unmet.is_empty();
                diagnostics.extend(unmet);
                diagnostics.extend(rep.warnings.iter().map(|w| format!("{}: {w}", m.name())));
                reports.push(rep);
            }
            Err(e) => {
                // with every method requested, an unavailable factorization is not a refusal
                let optional = method == MethodArg::All && matches!(e, Error::Unavailable(_));
                inconsistent |= matches!(e, Error::InvalidData { .. });
                refused |= !optional;
                diagnostics.push(format!("{}: {e}", m.name()));
                refusals.push(Refusal {
                    method: m.name().to_string(),
                    error: e.to_string(),
                });
            }
        }
    }
    refused |= reports.is_empty();
    if inconsistent {
        let threshold = solver::REFUSAL_FACTOR * tol;
        for (name, r) in IDENTITY_NAMES.iter().zip(data.identity_residuals()) {
            if !(r <= threshold) {
                diagnostics.push(format!("identity {name} violated: residual {r:.3e} exceeds {threshold:.1e}"));
            }
        }
    }
    let pairwise_gap = (reports.len() > 1).then(|| solver::pairwise_gap(&reports.iter().collect::<Vec<_>>()));
    let output = SolveOutput {
        status: if refused { "refused" } else { "accepted" }.to_string(),
        reports: reports.iter().map(SolveReportJson::from).collect(),
        refusals,
        pairwise_gap,
    };
    Ok(Outcome {
        stdout: to_json(&output),
        code: if refused { EXIT_REFUSED } else { EXIT_OK },
        diagnostics,
    })
}

pub fn check(data_file: &Path, tol: f64) -> Result<Outcome, CliError> {
    let (data, g) = read_problem(data_file)?.decode()?;
    let mut report = check_identities(&data, tol);
    let contraction = check_strict_contraction(&data, g.as_ref(), tol).map_err(|e| CliError::Refused(e.to_string()))?;
    for entry in contraction.entries {
        if report.get(&entry.name).is_none() {
            report.push(entry);
        }
    }
    Ok(check_outcome(&report, to_json(&CheckReportJson::from(&report))))
}

pub fn verify(data_file: &Path, g_file: Option<&Path>, tol: f64) -> Result<Outcome, CliError> {
    let (data, embedded) = read_problem(data_file)?.decode()?;
    let g = match g_file {
        Some(path) => read_g(path)?,
        None => embedded.ok_or_else(|| CliError::Parse("no g file given and the data file embeds no g".into()))?,
    };
    if g.shape() != (data.p(), data.q()) {
        return Err(CliError::Parse(format!(
            "g is {}x{}, data need {}x{}",
            g.rows(),
            g.cols(),
            data.p(),
            data.q()
        )));
    }
    let report = verify_solution(&data, &g, tol).map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(check_outcome(&report, to_json(&CheckReportJson::from(&report))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertOutput {
    pub order: usize,
    pub margin: usize,
    pub lemma_order: usize,
    pub report: CheckReportJson,
}

/// Inverse check of `Omega(g)` against `M` built from the data synthesized from
/// `g`, plus the operator identity suite on a window large enough to be exact.
pub fn invert(g_file: &Path, order: Option<usize>, tol: f64) -> Result<Outcome, CliError> {
    let g = read_g(g_file)?;
    let fx = synthesize_data(&g).map_err(synthesis_error)?;
    let m = fx.data.degree().max(g.reach());
    let n = order.unwrap_or(4 * m + 4);
    let wrap = |e: Error| CliError::Refused(e.to_string());
    let inv = verify_inverse(
        &build_omega(&g, n).map_err(wrap)?,
        &build_m(&fx.data, n, MVariant::default()).map_err(wrap)?,
    )
    .map_err(wrap)?;
    let mut report = CheckReport::new();
    report.residual_on_margin("M Omega - I", inv.left, tol, !inv.inconclusive);
    report.residual_on_margin("Omega M - I", inv.right, tol, !inv.inconclusive);
    let lemma_order = n.max(5 * m + 6);
    report.extend("lemma ", check_lemma_suite(&fx.data, lemma_order, tol).map_err(wrap)?);
    let out = InvertOutput {
        order: n,
        margin: inv.margin,
        lemma_order,
        report: CheckReportJson::from(&report),
    };
    Ok(check_outcome(&report, to_json(&out)))
}

/// Parsed command line.
#[derive(Debug, clap::Parser)]
#[command(name = "twofold", version, about = "Solve and check the twofold inverse problem for block Toeplitz/Hankel data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Subcommand)]
pub enum Command {
    /// Build the data set of a given g.
    Synthesize {
        g_file: PathBuf,
        out_file: Option<PathBuf>,
    },
    /// Generate a random fixture with a prescribed Hankel norm.
    Random {
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0.6)]
        norm: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Recover g from a data file.
    Solve {
        data_file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Window size for the truncated solve (default 4m+4).
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = solver::DEFAULT_TOL)]
        tol: f64,
    },
    /// Check the necessary identities and the strict contraction conditions.
    Check {
        data_file: PathBuf,
        #[arg(long, default_value_t = solver::DEFAULT_TOL)]
        tol: f64,
    },
    /// Check that g solves the problem for the data (g defaults to the embedded one).
    Verify {
        data_file: PathBuf,
        g_file: Option<PathBuf>,
        #[arg(long, default_value_t = solver::DEFAULT_TOL)]
        tol: f64,
    },
    /// Check the inverse formula and the operator identities for the data of g.
    Invert {
        g_file: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = solver::DEFAULT_TOL)]
        tol: f64,
    },
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Synthesize { g_file, out_file } => synthesize(g_file, out_file.as_deref()),
        Command::Random { p, q, m, norm, seed, out } => random(*p, *q, *m, *norm, *seed, out.as_deref()),
        Command::Solve { data_file, method, order, tol } => solve(data_file, *method, *order, *tol),
        Command::Check { data_file, tol } => check(data_file, *tol),
        Command::Verify { data_file, g_file, tol } => verify(data_file, g_file.as_deref(), *tol),
        Command::Invert { g_file, order, tol } => invert(g_file, *order, *tol),
    }
}
