//! Recovering combinatorial invariants from a CK or KC spectrum, and the
//! limits of what a spectrum determines.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, GraphKind};
use crate::matrices::{default_cluster_tol, spectrum_of_transition, MatrixError};
use crate::scalar::Real;
use crate::spectra::{ck_spectrum, default_match_tol, entries_match, kc_spectrum, Condition, SpectrumError, SpectrumWindow};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InverseError {
    #[error("window [0, {available}] does not reach {needed}")]
    WindowTooSmall { needed: f64, available: f64 },
    #[error("spectrum is inconsistent with any graph: {0}")]
    InconsistentSpectrum(String),
    #[error("windows are not comparable: {0}")]
    WindowMismatch(String),
    #[error("recovered invariants do not describe a regular graph: 2N/n = {num_edges_twice}/{n}")]
    NotRegular { num_edges_twice: usize, n: usize },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Invariants readable from a spectrum: vertices, edges, components, and the
/// split of components into bipartite (`c⁺`) and non-bipartite (`c⁻`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveredInvariants {
    pub n: usize,
    #[serde(rename = "N")]
    pub num_edges: usize,
    pub c: usize,
    pub c_plus: usize,
    pub c_minus: usize,
    pub source_condition: Condition,
}

impl RecoveredInvariants {
    /// The true invariants of `g`, for comparison.
    pub fn of_graph(g: &Graph, condition: Condition) -> Self {
        let info = g.analyze();
        Self {
            n: info.n,
            num_edges: info.num_edges,
            c: info.c,
            c_plus: info.c_plus,
            c_minus: info.c_minus,
            source_condition: condition,
        }
    }

    /// Same invariants ignoring which condition they were read from.
    pub fn same_graph_invariants(&self, other: &Self) -> bool {
        (self.n, self.num_edges, self.c, self.c_plus, self.c_minus)
            == (other.n, other.num_edges, other.c, other.c_plus, other.c_minus)
    }
}

fn anchor_tol<T: Real>(lambda: T) -> T {
    T::tol_floor(1e-9, 1e2) * lambda.max(T::one())
}

fn multiplicity_near<T: Real>(spec: &SpectrumWindow<T>, lambda: T) -> i64 {
    spec.entries
        .iter()
        .filter(|e| (e.lambda - lambda).abs() <= anchor_tol(lambda))
        .map(|e| e.multiplicity as i64)
        .sum()
}

fn nonneg(name: &str, v: i64) -> Result<usize, InverseError> {
    usize::try_from(v).map_err(|_| InverseError::InconsistentSpectrum(format!("{name} = {v} is negative")))
}

fn half(name: &str, twice: i64) -> Result<i64, InverseError> {
    if twice % 2 != 0 {
        return Err(InverseError::InconsistentSpectrum(format!("{name} = {twice}/2 is not an integer")));
    }
    Ok(twice / 2)
}

/// Reads `(n, N, c, c⁺, c⁻)` off the multiplicities at `0`, `π²`, `4π²` and
/// the eigenvalue count in `(0, π²)`. Needs `lambda_max ≥ 4π²`.
pub fn recover<T: Real>(spec: &SpectrumWindow<T>) -> Result<RecoveredInvariants, InverseError> {
    let pi2 = T::pi() * T::pi();
    let four_pi2 = T::lit(4.0) * pi2;
    if spec.lambda_max < four_pi2 - anchor_tol(four_pi2) {
        return Err(InverseError::WindowTooSmall {
            needed: four_pi2.as_f64(),
            available: spec.lambda_max.as_f64(),
        });
    }
    let m0 = multiplicity_near(spec, T::zero());
    let m1 = multiplicity_near(spec, pi2);
    let m4 = multiplicity_near(spec, four_pi2);
    let below: i64 = spec
        .entries
        .iter()
        .filter(|e| e.lambda > anchor_tol(T::zero()) && e.lambda < pi2 - anchor_tol(pi2))
        .map(|e| e.multiplicity as i64)
        .sum();

    let (c, c_plus, c_minus) = match spec.condition {
        Condition::Ck => {
            let c_minus = half("c-", m4 - m1)?;
            (m0, m0 - c_minus, c_minus)
        }
        Condition::Kc => {
            let c_minus = half("c-", m1 - m4)?;
            let c_plus = m4 - m0;
            (c_plus + c_minus, c_plus, c_minus)
        }
    };
    let n = c + c_plus + below;
    let num_edges = match spec.condition {
        Condition::Ck => n - 2 * c + m4,
        Condition::Kc => m0 + n - c_plus,
    };

    let out = RecoveredInvariants {
        n: nonneg("n", n)?,
        num_edges: nonneg("N", num_edges)?,
        c: nonneg("c", c)?,
        c_plus: nonneg("c+", c_plus)?,
        c_minus: nonneg("c-", c_minus)?,
        source_condition: spec.condition,
    };
    if out.n == 0 || out.c == 0 {
        return Err(InverseError::InconsistentSpectrum("no vertices or no components".into()));
    }
    // every component has at least n_i - 1 edges
    if out.num_edges + out.c < out.n {
        return Err(InverseError::InconsistentSpectrum(format!(
            "N = {} is too small for n = {} and c = {}",
            out.num_edges, out.n, out.c
        )));
    }
    Ok(out)
}

/// True iff the two windows list the same eigenvalues (within `tol`,
/// relative above 1) with equal multiplicities. Both must use the same
/// condition and window.
pub fn isospectral<T: Real>(a: &SpectrumWindow<T>, b: &SpectrumWindow<T>, tol: T) -> Result<bool, InverseError> {
    if a.condition != b.condition {
        return Err(InverseError::WindowMismatch(format!(
            "conditions differ ({} vs {})",
            a.condition, b.condition
        )));
    }
    if (a.lambda_max - b.lambda_max).abs() > anchor_tol(a.lambda_max) {
        return Err(InverseError::WindowMismatch(format!(
            "lambda_max differs ({} vs {})",
            a.lambda_max, b.lambda_max
        )));
    }
    Ok(entries_match(&a.entries, &b.entries, tol))
}

/// Spanning-tree count of a connected regular graph read from its spectrum:
/// with degree `γ = 2N/n`, `κ = (1/n) ∏ γ(1 - μ)` over `μ ∈ σ(Z)` with one
/// copy of `μ = 1` removed. Every `μ ≠ ±1` shows up exactly once below `π²`;
/// `μ = -1` has multiplicity `c⁺`.
pub fn regular_complexity<T: Real>(spec: &SpectrumWindow<T>) -> Result<f64, InverseError> {
    let inv = recover(spec)?;
    if (2 * inv.num_edges) % inv.n != 0 {
        return Err(InverseError::NotRegular {
            num_edges_twice: 2 * inv.num_edges,
            n: inv.n,
        });
    }
    if inv.c > 1 {
        return Ok(0.0);
    }
    let gamma = (2 * inv.num_edges / inv.n) as f64;
    let pi2 = T::pi() * T::pi();
    let mut log_kappa = -(inv.n as f64).ln() + inv.c_plus as f64 * (2.0 * gamma).ln();
    for e in &spec.entries {
        if e.lambda > anchor_tol(T::zero()) && e.lambda < pi2 - anchor_tol(pi2) {
            let cos = e.sqrt_lambda().cos().as_f64();
            let mu = match spec.condition {
                Condition::Ck => cos,
                Condition::Kc => -cos,
            };
            log_kappa += e.multiplicity as f64 * (gamma * (1.0 - mu)).ln();
        }
    }
    Ok(log_kappa.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsospectralPairReport {
    pub graphs: [String; 2],
    pub ck_isospectral: bool,
    pub kc_isospectral: bool,
    pub isomorphic: bool,
    pub spanning_trees: [u64; 2],
    /// Sorted degree sequences.
    pub degree_multisets: [Vec<usize>; 2],
    pub degree_multisets_differ: bool,
    pub recovered: [RecoveredInvariants; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionPairReport {
    pub graphs: [String; 2],
    pub transition_spectra: [Vec<f64>; 2],
    pub transition_isospectral: bool,
    pub num_edges: [usize; 2],
    pub ck_isospectral: bool,
    pub kc_isospectral: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularRecoveryReport {
    pub graph: String,
    pub recovered: RecoveredInvariants,
    pub kappa_from_spectrum: f64,
    pub kappa_exact: u64,
    pub agrees: bool,
}

/// What the spectrum does and does not determine, on concrete graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonRecoverabilityReport {
    /// Isospectral under both conditions, yet different complexity and
    /// degrees.
    pub butler_grout: IsospectralPairReport,
    /// Same σ(Z) but different edge counts, so not isospectral.
    pub circuit_vs_star: TransitionPairReport,
    /// For regular graphs the complexity is a spectral invariant.
    pub regular: Vec<RegularRecoveryReport>,
}

fn report_window() -> f64 {
    4.0 * std::f64::consts::PI.powi(2) + 1.0
}

fn windows(g: &Graph) -> Result<(SpectrumWindow<f64>, SpectrumWindow<f64>), InverseError> {
    let tol = default_cluster_tol::<f64>(g.n());
    Ok((ck_spectrum(g, report_window(), tol)?, kc_spectrum(g, report_window(), tol)?))
}

fn kappa_u64(g: &Graph) -> Result<u64, InverseError> {
    Ok(g.spanning_tree_count()?.to_u64().unwrap_or(u64::MAX))
}

fn sorted_degrees(g: &Graph) -> Vec<usize> {
    let mut d = g.degrees();
    d.sort_unstable();
    d
}

pub fn isospectral_pair_report(a: (&str, &Graph), b: (&str, &Graph)) -> Result<IsospectralPairReport, InverseError> {
    let tol = default_match_tol::<f64>();
    let (ck_a, kc_a) = windows(a.1)?;
    let (ck_b, kc_b) = windows(b.1)?;
    let degrees = [sorted_degrees(a.1), sorted_degrees(b.1)];
    Ok(IsospectralPairReport {
        graphs: [a.0.to_string(), b.0.to_string()],
        ck_isospectral: isospectral(&ck_a, &ck_b, tol)?,
        kc_isospectral: isospectral(&kc_a, &kc_b, tol)?,
        isomorphic: a.1.is_isomorphic(b.1),
        spanning_trees: [kappa_u64(a.1)?, kappa_u64(b.1)?],
        degree_multisets_differ: degrees[0] != degrees[1],
        degree_multisets: degrees,
        recovered: [recover(&ck_a)?, recover(&ck_b)?],
    })
}

pub fn non_recoverability_report() -> Result<NonRecoverabilityReport, InverseError> {
    let bg1 = Graph::generate(GraphKind::ButlerGrout1, 0)?;
    let bg2 = Graph::generate(GraphKind::ButlerGrout2, 0)?;
    let butler_grout = isospectral_pair_report(("butler_grout_1", &bg1), ("butler_grout_2", &bg2))?;

    let c4 = Graph::generate(GraphKind::Circuit, 4)?;
    let star = Graph::generate(GraphKind::Star, 3)?;
    let z = |g: &Graph| -> Result<Vec<f64>, InverseError> {
        Ok(spectrum_of_transition::<f64>(g, default_cluster_tol(g.n()))?.expanded())
    };
    let (za, zb) = (z(&c4)?, z(&star)?);
    let z_iso = za.len() == zb.len() && za.iter().zip(&zb).all(|(x, y)| (x - y).abs() < 1e-10);
    let tol = default_match_tol::<f64>();
    let (ck_a, kc_a) = windows(&c4)?;
    let (ck_b, kc_b) = windows(&star)?;
    let circuit_vs_star = TransitionPairReport {
        graphs: ["circuit_4".into(), "star_3".into()],
        transition_spectra: [za, zb],
        transition_isospectral: z_iso,
        num_edges: [c4.num_edges(), star.num_edges()],
        ck_isospectral: isospectral(&ck_a, &ck_b, tol)?,
        kc_isospectral: isospectral(&kc_a, &kc_b, tol)?,
    };

    let mut regular = Vec::new();
    for (name, kind, size) in [
        ("complete_4", GraphKind::Complete, 4),
        ("petersen", GraphKind::Petersen, 0),
        ("cube_q3", GraphKind::CubeQ3, 0),
    ] {
        let g = Graph::generate(kind, size)?;
        let (ck, _) = windows(&g)?;
        let kappa_from_spectrum = regular_complexity(&ck)?;
        let kappa_exact = kappa_u64(&g)?;
        regular.push(RegularRecoveryReport {
            graph: name.into(),
            recovered: recover(&ck)?,
            kappa_from_spectrum,
            kappa_exact,
            agrees: (kappa_from_spectrum - kappa_exact as f64).abs() <= 1e-6 * kappa_exact as f64,
        });
    }
    Ok(NonRecoverabilityReport {
        butler_grout,
        circuit_vs_star,
        regular,
    })
}
