mod input;

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::json;

use qg_spectra::bc::{self, BoundaryCondition, ScanOptions, Subspace};
use qg_spectra::export;
use qg_spectra::inverse::{self, RecoveredInvariants};
use qg_spectra::matrices::{self, default_cluster_tol, MatrixKind};
use qg_spectra::spectra::{self, default_match_tol, Condition};
use qg_spectra::{BcError, Graph, GraphError, GraphKind, InverseError, MatrixError, SpectrumError};

const TOL_ENV: &str = "QG_SPECTRA_TOL";

#[derive(Parser)]
#[command(name = "qg-spectra", version, about = "Spectra of Laplacians on equilateral metric graphs")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for scans (output does not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named graph.
    Gen {
        #[arg(long)]
        kind: GraphKind,
        /// Size parameter (ignored by fixed graphs).
        #[arg(long, default_value_t = 0)]
        size: usize,
        /// Emit the plain `n N` / `tail head` edge list instead of JSON.
        #[arg(long)]
        edge_list: bool,
    },
    /// Print graph matrices.
    Matrices {
        /// Graph file (JSON or edge list); `-` reads stdin.
        #[arg(long)]
        graph: PathBuf,
        /// One matrix kind, or `transition`; all of them when omitted.
        #[arg(long)]
        kind: Option<MatrixChoice>,
        /// Print the spectrum of the transition matrix instead.
        #[arg(long)]
        spectrum: bool,
    },
    /// Closed-form CK or KC spectrum on [0, lambda_max].
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        condition: Condition,
        #[arg(long)]
        lambda_max: f64,
        /// Emit plot data (lambda, cos_sqrt_lambda, condition, multiplicity) as CSV.
        #[arg(long)]
        plot: bool,
    },
    /// Eigenvalues of a general (Y, R) condition by secular scan.
    Scan(ScanArgs),
    /// Closed-form spectrum of the loop condition Y_alpha = span{(alpha, 1)}.
    Loop {
        #[arg(long, allow_negative_numbers = true)]
        alpha_re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha_im: f64,
        #[arg(long)]
        lambda_max: f64,
        /// Also run the secular scan and report disagreements.
        #[arg(long)]
        scan: bool,
    },
    /// Recover (n, N, c, c+, c-) from a spectrum.
    Recover {
        #[arg(long)]
        condition: Condition,
        /// Spectrum JSON (as written by `spectrum`) or a plain eigenvalue list; `-` reads stdin.
        #[arg(long = "in")]
        input: PathBuf,
        /// Window bound; required for a plain eigenvalue list.
        #[arg(long)]
        lambda_max: Option<f64>,
    },
    /// Compare CK and KC spectra of one graph, or two graphs under both conditions.
    Compare {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long, default_value_t = 4.0 * PI * PI + 1.0)]
        lambda_max: f64,
    },
    /// Derived reports.
    Report {
        #[command(subcommand)]
        which: ReportCommand,
    },
}

#[derive(clap::Args)]
struct ScanArgs {
    /// Graph whose CK or KC subspace is scanned (needs --bc).
    #[arg(long, conflicts_with = "subspace", requires = "bc")]
    graph: Option<PathBuf>,
    #[arg(long)]
    bc: Option<Condition>,
    /// Subspace Y as JSON spanning vectors of [re, im] pairs.
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// Hermitian R as JSON rows of [re, im] pairs.
    #[arg(long, conflicts_with = "r_scalar")]
    r: Option<PathBuf>,
    /// Use R = eps * I.
    #[arg(long, allow_negative_numbers = true)]
    r_scalar: Option<f64>,
    #[arg(long)]
    lambda_max: f64,
    #[arg(long)]
    grid_step: Option<f64>,
    #[arg(long)]
    tol_root: Option<f64>,
    #[arg(long)]
    tol_mult: Option<f64>,
    /// With --graph: compare against the closed-form spectrum (R must be 0).
    #[arg(long, requires = "graph")]
    compare_closed_form: bool,
}

#[derive(Subcommand)]
enum ReportCommand {
    /// What spectra do not determine: Butler-Grout pair, C4 vs K_{1,3}, regular graphs.
    NonRecoverability,
    /// dim Ker(KC) - dim Ker(CK) against N - n - c-.
    KernelIndex {
        #[arg(long)]
        graph: PathBuf,
    },
    /// lambda_k / k^2 against the limit pi^2 / N^2.
    Weyl {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        condition: Condition,
        #[arg(long)]
        k: usize,
    },
    /// Lowest CK eigenvalue before and after identifying vertices v and w.
    Contraction {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        w: usize,
    },
    /// Distinct eigenvalues in ((2k pi)^2, (2(k+1) pi)^2].
    Distinct {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        condition: Condition,
        #[arg(long, default_value_t = 0)]
        period: usize,
    },
    /// Check the Y / Y-perp reflection k -> |pi - k| for R = 0.
    Duality {
        #[arg(long)]
        subspace: PathBuf,
        #[arg(long, default_value_t = PI * PI + 1.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
}

#[derive(Clone, Copy)]
enum MatrixChoice {
    Kind(MatrixKind),
    Transition,
}

impl MatrixChoice {
    fn name(self) -> &'static str {
        match self {
            MatrixChoice::Kind(k) => k.name(),
            MatrixChoice::Transition => "transition",
        }
    }
}

impl FromStr for MatrixChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("transition") {
            Ok(MatrixChoice::Transition)
        } else {
            s.parse().map(MatrixChoice::Kind)
        }
    }
}

/// A flag combination that parsed but makes no sense; exits with code 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

enum Output {
    Json(String),
    Csv(String),
}

fn json_out<S: Serialize>(v: &S) -> Result<Output> {
    Ok(Output::Json(export::to_json(v)?))
}

struct Tolerances {
    global: Option<f64>,
}

impl Tolerances {
    fn from_env() -> Result<Self> {
        let global = match std::env::var(TOL_ENV) {
            Ok(s) => {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("{TOL_ENV}='{s}' is not a number")))?;
                if !(v > 0.0) {
                    return Err(usage(format!("{TOL_ENV} must be positive")));
                }
                Some(v)
            }
            Err(_) => None,
        };
        Ok(Self { global })
    }

    fn cluster(&self, n: usize) -> f64 {
        self.global.unwrap_or_else(|| default_cluster_tol(n))
    }

    fn matching(&self) -> f64 {
        self.global.unwrap_or_else(default_match_tol)
    }

    fn scan_compare(&self) -> f64 {
        self.global.unwrap_or(1e-7)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<UsageError>().is_some() {
                eprintln!("error: {e}");
                ExitCode::from(2)
            } else {
                match domain_case(&e) {
                    Some(case) => eprintln!("error: {case}: {e:#}"),
                    None => eprintln!("error: {e:#}"),
                }
                ExitCode::from(1)
            }
        }
    }
}

/// Innermost variant name of a library error, e.g. `WindowTooSmall`.
fn domain_case(e: &anyhow::Error) -> Option<String> {
    let dbg = if let Some(x) = e.downcast_ref::<BcError>() {
        format!("{x:?}")
    } else if let Some(x) = e.downcast_ref::<InverseError>() {
        format!("{x:?}")
    } else if let Some(x) = e.downcast_ref::<SpectrumError>() {
        format!("{x:?}")
    } else if let Some(x) = e.downcast_ref::<GraphError>() {
        format!("{x:?}")
    } else if let Some(x) = e.downcast_ref::<MatrixError>() {
        format!("{x:?}")
    } else {
        return None;
    };
    let mut rest = dbg.as_str();
    loop {
        let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
        let ident = &rest[..end];
        let tail = &rest[end..];
        match tail.strip_prefix('(') {
            Some(inner) if inner.starts_with(|c: char| c.is_ascii_uppercase()) => rest = inner,
            _ => return Some(ident.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring thread pool")?;
    }
    let tols = Tolerances::from_env()?;
    let output = execute(&cli, &tols)?;
    let text = match (output, cli.format) {
        (Output::Json(s), Format::Json) | (Output::Csv(s), Format::Csv) => s,
        (Output::Csv(s), Format::Json) => s,
        (Output::Json(_), Format::Csv) => {
            return Err(usage("--format csv is not available for this command"));
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout")?,
    }
    Ok(())
}

fn check_lambda_max(flag: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("{flag} must be positive and finite, got {v}")))
    }
}

fn execute(cli: &Cli, tols: &Tolerances) -> Result<Output> {
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Gen { kind, size, edge_list } => {
            let g = Graph::generate(*kind, *size)?;
            if *edge_list {
                Ok(Output::Csv(g.to_edge_list()))
            } else {
                json_out(&g)
            }
        }
        Command::Matrices { graph, kind, spectrum } => {
            let g = input::load_graph(graph)?;
            if *spectrum {
                let s = matrices::spectrum_of_transition::<f64>(&g, tols.cluster(g.n()))?;
                return json_out(&s);
            }
            let build = |choice: MatrixChoice| -> Result<DMatrix<f64>> {
                Ok(match choice {
                    MatrixChoice::Kind(k) => matrices::matrix(&g, k)?,
                    MatrixChoice::Transition => matrices::transition_matrix(&g)?,
                })
            };
            match kind {
                Some(choice) if csv => Ok(Output::Csv(export::matrix_csv(&build(*choice)?))),
                Some(choice) => json_out(&json!({ choice.name(): export::matrix_json(&build(*choice)?) })),
                None if csv => Err(usage("--format csv needs a single --kind")),
                None => {
                    let mut map = serde_json::Map::new();
                    let all = MatrixKind::ALL
                        .into_iter()
                        .map(MatrixChoice::Kind)
                        .chain([MatrixChoice::Transition]);
                    for choice in all {
                        map.insert(choice.name().into(), serde_json::to_value(export::matrix_json(&build(choice)?))?);
                    }
                    json_out(&map)
                }
            }
        }
        Command::Spectrum {
            graph,
            condition,
            lambda_max,
            plot,
        } => {
            check_lambda_max("--lambda-max", *lambda_max)?;
            let g = input::load_graph(graph)?;
            let w = spectra::spectrum(&g, *condition, *lambda_max, tols.cluster(g.n()))?;
            if *plot {
                Ok(Output::Csv(export::plotdata_csv(&w)))
            } else if csv {
                Ok(Output::Csv(export::window_csv(&w)))
            } else {
                json_out(&w)
            }
        }
        Command::Scan(args) => scan(args, tols, csv),
        Command::Loop {
            alpha_re,
            alpha_im,
            lambda_max,
            scan,
        } => {
            check_lambda_max("--lambda-max", *lambda_max)?;
            let alpha = nalgebra::Complex::new(*alpha_re, *alpha_im);
            let closed = bc::loop_spectrum(alpha, *lambda_max);
            let roots: Vec<_> = closed
                .iter()
                .map(|&(lambda, multiplicity)| json!({"lambda": lambda, "multiplicity": multiplicity}))
                .collect();
            if !*scan {
                return json_out(&json!({ "alpha": [alpha.re, alpha.im], "roots": roots }));
            }
            let bc = BoundaryCondition::unperturbed(Subspace::loop_alpha(alpha))?;
            let found = bc::scan_eigenvalues(&bc, &ScanOptions::new(*lambda_max))?;
            let mismatches = bc::match_roots(&found.roots, &closed, tols.scan_compare());
            json_out(&json!({
                "alpha": [alpha.re, alpha.im],
                "roots": roots,
                "scan": found,
                "agree": mismatches.is_empty(),
                "mismatches": mismatches,
            }))
        }
        Command::Recover {
            condition,
            input: path,
            lambda_max,
        } => {
            let text = input::read_source(path)?;
            let w = input::parse_window(&text, *condition, *lambda_max, tols.matching())?;
            let r = inverse::recover(&w)?;
            if csv {
                Ok(Output::Csv(format!(
                    "n,N,c,c_plus,c_minus,source_condition\n{},{},{},{},{},{}\n",
                    r.n, r.num_edges, r.c, r.c_plus, r.c_minus, r.source_condition
                )))
            } else {
                json_out(&r)
            }
        }
        Command::Compare {
            graph,
            other,
            lambda_max,
        } => {
            check_lambda_max("--lambda-max", *lambda_max)?;
            let g = input::load_graph(graph)?;
            match other {
                None => json_out(&spectra::compare_ck_kc::<f64>(&g, *lambda_max)?),
                Some(path) => {
                    let h = input::load_graph(path)?;
                    let mut result = serde_json::Map::new();
                    for cond in [Condition::Ck, Condition::Kc] {
                        let a = spectra::spectrum(&g, cond, *lambda_max, tols.cluster(g.n()))?;
                        let b = spectra::spectrum(&h, cond, *lambda_max, tols.cluster(h.n()))?;
                        let iso = inverse::isospectral(&a, &b, tols.matching())?;
                        result.insert(format!("{cond}_isospectral"), iso.into());
                    }
                    result.insert("isomorphic".into(), g.is_isomorphic(&h).into());
                    let invariants = |x: &Graph| RecoveredInvariants::of_graph(x, Condition::Ck);
                    result.insert("invariants".into(), serde_json::to_value([invariants(&g), invariants(&h)])?);
                    json_out(&result)
                }
            }
        }
        Command::Report { which } => report(which, tols),
    }
}

fn scan(args: &ScanArgs, tols: &Tolerances, csv: bool) -> Result<Output> {
    check_lambda_max("--lambda-max", args.lambda_max)?;
    let (y, graph) = match (&args.graph, &args.subspace) {
        (Some(path), None) => {
            let g = input::load_graph(path)?;
            let cond = args.bc.ok_or_else(|| usage("--graph needs --bc ck|kc"))?;
            let y = match cond {
                Condition::Ck => bc::ck_subspace(&g)?,
                Condition::Kc => bc::kc_subspace(&g)?,
            };
            (y, Some((g, cond)))
        }
        (None, Some(path)) => {
            if args.bc.is_some() {
                return Err(usage("--bc only applies with --graph"));
            }
            (input::parse_subspace(&input::read_source(path)?)?, None)
        }
        _ => return Err(usage("scan needs exactly one of --graph or --subspace")),
    };
    let dim = y.ambient_dim();
    let r = match (&args.r, args.r_scalar) {
        (Some(path), _) => input::parse_complex_matrix(&input::read_source(path)?)?,
        (None, Some(eps)) => bc::CMatrix::identity(dim, dim).map(|z| z * eps),
        (None, None) => bc::CMatrix::zeros(dim, dim),
    };
    let has_r = args.r.is_some() || args.r_scalar.is_some_and(|e| e != 0.0);
    let condition = BoundaryCondition::new(y, r)?;
    let mut opts = ScanOptions::new(args.lambda_max);
    if let Some(v) = args.grid_step {
        opts.grid_step = v;
    }
    if let Some(v) = args.tol_root {
        opts.tol_root = v;
    }
    if let Some(v) = args.tol_mult {
        opts.tol_mult = v;
    }
    let result = bc::scan_eigenvalues(&condition, &opts)?;
    if !args.compare_closed_form {
        return if csv {
            Ok(Output::Csv(export::scan_csv(&result)))
        } else {
            json_out(&result)
        };
    }
    if has_r {
        return Err(usage("--compare-closed-form needs R = 0 (drop --r / --r-scalar)"));
    }
    let (g, cond) = graph.expect("--compare-closed-form requires --graph");
    let closed = spectra::spectrum(&g, cond, args.lambda_max, tols.cluster(g.n()))?;
    let expected: Vec<(f64, usize)> = closed.entries.iter().map(|e| (e.lambda, e.multiplicity)).collect();
    let mismatches = bc::match_roots(&result.roots, &expected, tols.scan_compare());
    json_out(&json!({
        "scan": result,
        "closed_form": closed,
        "agree": mismatches.is_empty(),
        "mismatches": mismatches,
    }))
}

fn report(which: &ReportCommand, tols: &Tolerances) -> Result<Output> {
    match which {
        ReportCommand::NonRecoverability => json_out(&inverse::non_recoverability_report()?),
        ReportCommand::KernelIndex { graph } => {
            let g = input::load_graph(graph)?;
            let info = g.analyze();
            let window = 1.0;
            let ck = spectra::ck_spectrum(&g, window, tols.cluster(g.n()))?;
            let kc = spectra::kc_spectrum(&g, window, tols.cluster(g.n()))?;
            let ker_ck = ck.multiplicity_at(0.0, 1e-12) as i64;
            let ker_kc = kc.multiplicity_at(0.0, 1e-12) as i64;
            let expected = info.euler_characteristic() - info.c_minus as i64;
            json_out(&json!({
                "dim_ker_ck": ker_ck,
                "dim_ker_kc": ker_kc,
                "index": ker_kc - ker_ck,
                "n_edges_minus_n_minus_c_minus": expected,
                "holds": ker_kc - ker_ck == expected && spectra::kernel_index(&g) == expected,
            }))
        }
        ReportCommand::Weyl { graph, condition, k } => {
            let g = input::load_graph(graph)?;
            if *k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            let num_edges = g.num_edges().max(1) as f64;
            let s = (*k as f64 / num_edges + 2.0) * PI;
            let w = spectra::spectrum(&g, *condition, s * s, tols.cluster(g.n()))?;
            let ratio = spectra::weyl_ratio(&w, *k)?;
            let limit = PI * PI / (num_edges * num_edges);
            json_out(&json!({
                "k": k,
                "ratio": ratio,
                "limit": limit,
                "relative_deviation": (ratio - limit).abs() / limit,
            }))
        }
        ReportCommand::Contraction { graph, v, w } => {
            let g = input::load_graph(graph)?;
            json_out(&spectra::contraction_monotonicity::<f64>(&g, *v, *w)?)
        }
        ReportCommand::Distinct {
            graph,
            condition,
            period,
        } => {
            let g = input::load_graph(graph)?;
            let s = 2.0 * (*period as f64 + 1.0) * PI;
            let w = spectra::spectrum(&g, *condition, s * s + 1.0, tols.cluster(g.n()))?;
            let count = spectra::distinct_count_per_period(&w, *period)?;
            json_out(&json!({ "period": period, "distinct": count }))
        }
        ReportCommand::Duality {
            subspace,
            lambda_max,
            tol,
        } => {
            check_lambda_max("--lambda-max", *lambda_max)?;
            let y = input::parse_subspace(&input::read_source(subspace)?)?;
            let rep = bc::duality_check(&y, *lambda_max, *tol)?;
            json_out(&json!({ "checked": rep.checked, "holds": rep.holds(), "violations": rep.violations }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn innermost_case_names() {
        let e: anyhow::Error = InverseError::Spectrum(SpectrumError::IsolatedVertex(3)).into();
        assert_eq!(domain_case(&e).as_deref(), Some("IsolatedVertex"));
        let e: anyhow::Error = InverseError::WindowTooSmall {
            needed: 1.0,
            available: 0.5,
        }
        .into();
        assert_eq!(domain_case(&e).as_deref(), Some("WindowTooSmall"));
        let e: anyhow::Error = BcError::NonHermitianR(1.0).into();
        assert_eq!(domain_case(&e).as_deref(), Some("NonHermitianR"));
    }
}
