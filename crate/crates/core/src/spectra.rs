//! Closed-form spectra of `-Δ` on an equilateral metric graph under the
//! continuity–Kirchhoff (CK) and anti-Kirchhoff (KC) vertex conditions.
//!
//! Both spectra are generated from σ(Z), the spectrum of the transition
//! matrix `Z = D^{-1}A`:
//!
//! - every `μ ∈ σ(Z) \ {±1}` yields the *immanent* eigenvalues
//!   `λ = (2ℓπ ± arccos μ)²` (CK) or `λ = (2ℓπ ± arccos(-μ))²` (KC), each with
//!   multiplicity `m(μ; Z)`;
//! - the *singular* eigenvalues `λ = (kπ)²`, `k ≥ 1`, have multiplicities that
//!   depend only on `n`, `N`, `c`, `c⁺`;
//! - `λ = 0` has multiplicity `c` (CK) or `N - n + c⁺` (KC).
//!
//! | condition | `λ = 0`      | `cos√λ = 1, λ > 0` | `cos√λ = -1`   |
//! |-----------|--------------|--------------------|----------------|
//! | CK        | `c`          | `N - n + 2c`       | `N - n + 2c⁺`  |
//! | KC        | `N - n + c⁺` | `N - n + 2c⁺`      | `N - n + 2c`   |
//!
//! Entries whose multiplicity evaluates to zero are omitted.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ComponentInfo, Graph, GraphError};
use crate::matrices::{default_cluster_tol, spectrum_of_transition, MatrixError, RealSpectrum};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("vertex {0} is isolated (degree 0)")]
    IsolatedVertex(usize),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("window [0, {available}] does not reach {needed}")]
    WindowTooSmall { needed: f64, available: f64 },
    #[error("lambda_max must be positive, got {0}")]
    NonPositiveWindow(f64),
    #[error("transition spectrum inconsistent with graph structure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Matrix(MatrixError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<MatrixError> for SpectrumError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::IsolatedVertex(v) => SpectrumError::IsolatedVertex(v),
            other => SpectrumError::Matrix(other),
        }
    }
}

/// Vertex condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// Continuity of values, Kirchhoff balance of derivatives.
    Ck,
    /// Anti-Kirchhoff (δ′-coupling): Kirchhoff balance of values, continuity
    /// of signed derivatives.
    Kc,
}

impl Condition {
    pub fn dual(self) -> Self {
        match self {
            Condition::Ck => Condition::Kc,
            Condition::Kc => Condition::Ck,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Condition::Ck => "ck",
            Condition::Kc => "kc",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ck" => Ok(Condition::Ck),
            "kc" => Ok(Condition::Kc),
            _ => Err(format!("unknown condition '{s}' (expected ck or kc)")),
        }
    }
}

/// Classification of an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenClass {
    Zero,
    /// `sin√λ ≠ 0`; generated by some `μ ∈ σ(Z) \ {±1}`.
    Immanent,
    /// `√λ ∈ 2πℤ`, `λ > 0`.
    SingularCosPlusOne,
    /// `√λ ∈ π(2ℤ + 1)`.
    SingularCosMinusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EigenvalueEntry<T: Real> {
    pub lambda: T,
    pub multiplicity: usize,
    #[serde(rename = "class")]
    pub class: EigenClass,
    /// The transition-matrix eigenvalue behind an immanent entry: `cos√λ`
    /// under CK, `-cos√λ` under KC.
    pub source_mu: Option<T>,
}

impl<T: Real> EigenvalueEntry<T> {
    pub fn sqrt_lambda(&self) -> T {
        self.lambda.max(T::zero()).sqrt()
    }
}

/// All eigenvalues of one condition in `[0, lambda_max]`, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SpectrumWindow<T: Real> {
    pub condition: Condition,
    pub lambda_max: T,
    pub entries: Vec<EigenvalueEntry<T>>,
    #[serde(skip)]
    pub graph_info: Option<ComponentInfo>,
}

impl<T: Real> SpectrumWindow<T> {
    /// Multiplicity of the entry within `tol` of `lambda` (0 if absent).
    pub fn multiplicity_at(&self, lambda: T, tol: T) -> usize {
        self.entries
            .iter()
            .find(|e| (e.lambda - lambda).abs() <= tol)
            .map_or(0, |e| e.multiplicity)
    }

    /// Eigenvalue count with multiplicity.
    pub fn count(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Eigenvalues repeated by multiplicity.
    pub fn expanded(&self) -> Vec<T> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat(e.lambda).take(e.multiplicity))
            .collect()
    }

    /// Entries of the given class.
    pub fn of_class(&self, class: EigenClass) -> impl Iterator<Item = &EigenvalueEntry<T>> {
        self.entries.iter().filter(move |e| e.class == class)
    }

    /// Collates a plain list of eigenvalues (repeats allowed, any order) into a
    /// window: values closer than `tol` in `√λ` merge into one entry whose
    /// multiplicity is the group size. Classes are inferred from `√λ`.
    pub fn from_eigenvalue_list(condition: Condition, values: &[T], lambda_max: T, tol: T) -> Self {
        let roots: Vec<T> = values.iter().map(|v| v.max(T::zero()).sqrt()).collect();
        let grouped = RealSpectrum::from_eigenvalues(roots, tol);
        let entries = grouped
            .values
            .iter()
            .map(|g| classify(condition, g.value, g.multiplicity, tol))
            .collect();
        Self {
            condition,
            lambda_max,
            entries,
            graph_info: None,
        }
    }

    /// Re-derives classes for entries read from external data (whose class
    /// fields may be missing or untrusted).
    pub fn reclassified(&self, tol: T) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = classify(self.condition, e.sqrt_lambda(), e.multiplicity, tol);
        }
        out.entries
            .sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).expect("finite eigenvalues"));
        out
    }
}

fn classify<T: Real>(condition: Condition, s: T, multiplicity: usize, tol: T) -> EigenvalueEntry<T> {
    let pi = T::pi();
    let k = (s / pi).round();
    let (class, source_mu) = if s <= tol {
        (EigenClass::Zero, None)
    } else if (s - k * pi).abs() <= tol {
        let even = k.to_usize().is_some_and(|k| k % 2 == 0);
        if even {
            (EigenClass::SingularCosPlusOne, None)
        } else {
            (EigenClass::SingularCosMinusOne, None)
        }
    } else {
        let mu = match condition {
            Condition::Ck => s.cos(),
            Condition::Kc => -s.cos(),
        };
        (EigenClass::Immanent, Some(mu))
    };
    let lambda = if class == EigenClass::Zero { T::zero() } else { s * s };
    EigenvalueEntry {
        lambda,
        multiplicity,
        class,
        source_mu,
    }
}

/// Absolute slack on the window boundary `λ ≤ Λ`.
fn window_slack<T: Real>() -> T {
    T::tol_floor(1e-12, 4.0)
}

fn build_window<T: Real>(
    g: &Graph,
    condition: Condition,
    lambda_max: T,
    tol: T,
) -> Result<SpectrumWindow<T>, SpectrumError> {
    if g.num_edges() == 0 {
        return Err(SpectrumError::EmptyGraph);
    }
    if let Some(v) = g.isolated_vertex() {
        return Err(SpectrumError::IsolatedVertex(v));
    }
    if lambda_max <= T::zero() {
        return Err(SpectrumError::NonPositiveWindow(lambda_max.as_f64()));
    }
    let info = g.analyze();
    let z = spectrum_of_transition::<T>(g, tol)?;
    let m_plus = z.multiplicity_of(T::one());
    let m_minus = z.multiplicity_of(-T::one());
    if m_plus != info.c || m_minus != info.c_plus {
        return Err(SpectrumError::Inconsistent(format!(
            "m(1; Z) = {m_plus}, m(-1; Z) = {m_minus}, but c = {}, c+ = {}",
            info.c, info.c_plus
        )));
    }

    let euler = info.euler_characteristic();
    let (c, c_plus) = (info.c as i64, info.c_plus as i64);
    let (m_zero, m_even, m_odd) = match condition {
        Condition::Ck => (c, euler + 2 * c, euler + 2 * c_plus),
        Condition::Kc => (euler + c_plus, euler + 2 * c_plus, euler + 2 * c),
    };

    let limit = lambda_max + window_slack::<T>();
    let s_limit = limit.sqrt();
    let pi = T::pi();
    let two_pi = T::two_pi();
    let mut entries = Vec::new();
    let mut push = |s: T, multiplicity: i64, class: EigenClass, source_mu: Option<T>| {
        let lambda = s * s;
        if multiplicity > 0 && lambda <= limit {
            entries.push(EigenvalueEntry {
                lambda,
                multiplicity: multiplicity as usize,
                class,
                source_mu,
            });
        }
    };

    push(T::zero(), m_zero, EigenClass::Zero, None);
    let mut k = 1usize;
    while T::from_count(k) * pi <= s_limit {
        let s = T::from_count(k) * pi;
        if k % 2 == 0 {
            push(s, m_even, EigenClass::SingularCosPlusOne, None);
        } else {
            push(s, m_odd, EigenClass::SingularCosMinusOne, None);
        }
        k += 1;
    }

    for group in &z.values {
        let mu = group.value;
        if mu.abs() >= T::one() {
            continue;
        }
        let theta = match condition {
            Condition::Ck => mu.acos(),
            Condition::Kc => (-mu).acos(),
        };
        let m = group.multiplicity as i64;
        let mut ell = 0usize;
        loop {
            let base = T::from_count(ell) * two_pi;
            if base - theta > s_limit {
                break;
            }
            if ell > 0 {
                push(base - theta, m, EigenClass::Immanent, Some(mu));
            }
            push(base + theta, m, EigenClass::Immanent, Some(mu));
            ell += 1;
        }
    }

    entries.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).expect("finite eigenvalues"));
    Ok(SpectrumWindow {
        condition,
        lambda_max,
        entries,
        graph_info: Some(info),
    })
}

/// Spectrum of `-Δ^{CK}` on `[0, lambda_max]`. `tol` is the clustering
/// tolerance for σ(Z).
pub fn ck_spectrum<T: Real>(g: &Graph, lambda_max: T, tol: T) -> Result<SpectrumWindow<T>, SpectrumError> {
    build_window(g, Condition::Ck, lambda_max, tol)
}

/// Spectrum of `-Δ^{KC}` on `[0, lambda_max]`.
pub fn kc_spectrum<T: Real>(g: &Graph, lambda_max: T, tol: T) -> Result<SpectrumWindow<T>, SpectrumError> {
    build_window(g, Condition::Kc, lambda_max, tol)
}

pub fn spectrum<T: Real>(
    g: &Graph,
    condition: Condition,
    lambda_max: T,
    tol: T,
) -> Result<SpectrumWindow<T>, SpectrumError> {
    build_window(g, condition, lambda_max, tol)
}

/// Default matching tolerance for comparing closed-form windows.
pub fn default_match_tol<T: Real>() -> T {
    T::tol_floor(1e-9, 1e4)
}

/// Entry-wise comparison: same length, `|Δλ| ≤ tol · max(1, λ)` and equal
/// multiplicities.
pub fn entries_match<T: Real>(a: &[EigenvalueEntry<T>], b: &[EigenvalueEntry<T>], tol: T) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.multiplicity == y.multiplicity
                && (x.lambda - y.lambda).abs() <= tol * x.lambda.abs().max(T::one())
        })
}

/// Outcome of comparing the CK and KC spectra of one connected graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CkKcComparison {
    pub full_spectra_coincide: bool,
    pub immanent_parts_coincide: bool,
    pub unicyclic: bool,
    pub bipartite: bool,
    /// `full ⇔ unicyclic ∧ bipartite` and `immanent ⇔ bipartite`.
    pub equivalences_hold: bool,
}

pub fn compare_ck_kc<T: Real>(g: &Graph, lambda_max: T) -> Result<CkKcComparison, SpectrumError> {
    let info = g.analyze();
    if !info.is_connected() {
        return Err(SpectrumError::Disconnected);
    }
    let tol = default_cluster_tol::<T>(g.n());
    let ck = ck_spectrum(g, lambda_max, tol)?;
    let kc = kc_spectrum(g, lambda_max, tol)?;
    let mtol = default_match_tol::<T>();
    let full = entries_match(&ck.entries, &kc.entries, mtol);
    let imm = |w: &SpectrumWindow<T>| {
        w.of_class(EigenClass::Immanent)
            .copied()
            .collect::<Vec<_>>()
    };
    let immanent = entries_match(&imm(&ck), &imm(&kc), mtol);
    let unicyclic = info.is_unicyclic();
    let bipartite = info.is_bipartite();
    Ok(CkKcComparison {
        full_spectra_coincide: full,
        immanent_parts_coincide: immanent,
        unicyclic,
        bipartite,
        equivalences_hold: full == (unicyclic && bipartite) && immanent == bipartite,
    })
}

/// `dim Ker Δ^{KC} - dim Ker Δ^{CK} = (N - n + c⁺) - c`, which always equals
/// `N - n - c⁻`.
pub fn kernel_index(g: &Graph) -> i64 {
    let info = g.analyze();
    let index = info.euler_characteristic() + info.c_plus as i64 - info.c as i64;
    debug_assert_eq!(index, info.euler_characteristic() - info.c_minus as i64);
    index
}

/// `λ_k / k²` with eigenvalues repeated by multiplicity, `k` 1-based.
pub fn weyl_ratio<T: Real>(spec: &SpectrumWindow<T>, k: usize) -> Result<T, SpectrumError> {
    let too_small = || SpectrumError::WindowTooSmall {
        needed: k as f64,
        available: spec.count() as f64,
    };
    if k == 0 {
        return Err(too_small());
    }
    let mut seen = 0;
    for e in &spec.entries {
        seen += e.multiplicity;
        if seen >= k {
            let kk = T::from_count(k);
            return Ok(e.lambda / (kk * kk));
        }
    }
    Err(too_small())
}

/// Smallest positive eigenvalue of the window.
pub fn lowest_nontrivial<T: Real>(spec: &SpectrumWindow<T>) -> Option<T> {
    spec.entries
        .iter()
        .find(|e| e.class != EigenClass::Zero)
        .map(|e| e.lambda)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ContractionReport<T: Real> {
    pub lambda1_original: T,
    pub lambda1_contracted: T,
    pub holds: bool,
}

/// Compares the lowest nontrivial CK eigenvalue of a connected graph with
/// that of the graph obtained by identifying `v` and `w`.
pub fn contraction_monotonicity<T: Real>(
    g: &Graph,
    v: usize,
    w: usize,
) -> Result<ContractionReport<T>, SpectrumError> {
    if !g.analyze().is_connected() {
        return Err(SpectrumError::Disconnected);
    }
    let contracted = g.contract_vertices(v, w)?;
    // a connected graph always has (2π)² in its CK spectrum
    let window = T::lit(4.0) * T::pi() * T::pi() + T::one();
    let lowest = |h: &Graph| -> Result<T, SpectrumError> {
        let spec = ck_spectrum(h, window, default_cluster_tol::<T>(h.n()))?;
        lowest_nontrivial(&spec).ok_or(SpectrumError::WindowTooSmall {
            needed: f64::NAN,
            available: window.as_f64(),
        })
    };
    let lambda1_original = lowest(g)?;
    let lambda1_contracted = lowest(&contracted)?;
    let slack = T::tol_floor(1e-9, 1e4);
    Ok(ContractionReport {
        lambda1_original,
        lambda1_contracted,
        holds: lambda1_original <= lambda1_contracted + slack,
    })
}

/// Number of distinct eigenvalues in `((2kπ)², (2(k+1)π)²]`.
pub fn distinct_count_per_period<T: Real>(spec: &SpectrumWindow<T>, k: usize) -> Result<usize, SpectrumError> {
    let two_pi = T::two_pi();
    let lo = T::from_count(k) * two_pi;
    let hi = T::from_count(k + 1) * two_pi;
    let slack = T::tol_floor(1e-9, 1e4);
    if spec.lambda_max.sqrt() < hi - slack {
        return Err(SpectrumError::WindowTooSmall {
            needed: (hi * hi).as_f64(),
            available: spec.lambda_max.as_f64(),
        });
    }
    Ok(spec
        .entries
        .iter()
        .filter(|e| {
            let s = e.sqrt_lambda();
            s > lo + slack && s <= hi + slack
        })
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use std::f64::consts::PI;

    fn gen(kind: GraphKind, size: usize) -> Graph {
        Graph::generate(kind, size).unwrap()
    }

    fn summary(w: &SpectrumWindow<f64>) -> Vec<(f64, usize)> {
        w.entries.iter().map(|e| (e.lambda, e.multiplicity)).collect()
    }

    fn assert_entries(w: &SpectrumWindow<f64>, expected: &[(f64, usize)]) {
        let got = summary(w);
        assert_eq!(got.len(), expected.len(), "{got:?} vs {expected:?}");
        for (g, e) in got.iter().zip(expected) {
            assert!((g.0 - e.0).abs() < 1e-9, "{got:?} vs {expected:?}");
            assert_eq!(g.1, e.1, "{got:?} vs {expected:?}");
        }
    }

    #[test]
    fn triangle_ck_and_kc() {
        let c3 = gen(GraphKind::Circuit, 3);
        let lmax = 4.0 * PI * PI + 1.0;
        let ck = ck_spectrum(&c3, lmax, 1e-9).unwrap();
        let t = 2.0 * PI / 3.0;
        assert_entries(
            &ck,
            &[(0.0, 1), (t * t, 2), ((2.0 * t) * (2.0 * t), 2), (4.0 * PI * PI, 2)],
        );
        let kc = kc_spectrum(&c3, lmax, 1e-9).unwrap();
        assert_entries(
            &kc,
            &[((PI / 3.0).powi(2), 2), (PI * PI, 2), ((5.0 * PI / 3.0).powi(2), 2)],
        );
    }

    #[test]
    fn single_edge_is_neumann_and_dirichlet() {
        let p2 = gen(GraphKind::Path, 2);
        let lmax = 4.0 * PI * PI + 1.0;
        let ck = ck_spectrum(&p2, lmax, 1e-9).unwrap();
        assert_entries(&ck, &[(0.0, 1), (PI * PI, 1), (4.0 * PI * PI, 1)]);
        let kc = kc_spectrum(&p2, lmax, 1e-9).unwrap();
        assert_entries(&kc, &[(PI * PI, 1), (4.0 * PI * PI, 1)]);
    }

    #[test]
    fn k4_ck_and_kc_rows() {
        let k4 = gen(GraphKind::Complete, 4);
        let lmax = 9.0 * PI * PI;
        let ck = ck_spectrum(&k4, lmax, 1e-9).unwrap();
        let theta = (-1.0f64 / 3.0).acos();
        assert_eq!(ck.multiplicity_at(0.0, 1e-9), 1);
        assert_eq!(ck.multiplicity_at(theta * theta, 1e-9), 3);
        assert_eq!(ck.multiplicity_at(PI * PI, 1e-9), 2);
        assert_eq!(ck.multiplicity_at(4.0 * PI * PI, 1e-9), 4);
        assert_eq!(ck.multiplicity_at(9.0 * PI * PI, 1e-9), 2);
        let kc = kc_spectrum(&k4, lmax, 1e-9).unwrap();
        assert_eq!(kc.multiplicity_at(0.0, 1e-9), 2);
        let theta = (1.0f64 / 3.0).acos();
        assert_eq!(kc.multiplicity_at(theta * theta, 1e-9), 3);
        assert_eq!(kc.multiplicity_at(PI * PI, 1e-9), 4);
        assert_eq!(kc.multiplicity_at(4.0 * PI * PI, 1e-9), 2);
    }

    #[test]
    fn window_boundary_is_inclusive() {
        let p2 = gen(GraphKind::Path, 2);
        let ck = ck_spectrum(&p2, 4.0 * PI * PI, 1e-9).unwrap();
        assert_eq!(ck.entries.last().unwrap().multiplicity, 1);
        assert!((ck.entries.last().unwrap().lambda - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn classes_and_sources() {
        let c8 = gen(GraphKind::Circuit, 8);
        for cond in [Condition::Ck, Condition::Kc] {
            let w = spectrum::<f64>(&c8, cond, 200.0, 1e-9).unwrap();
            for e in &w.entries {
                let s = e.sqrt_lambda();
                match e.class {
                    EigenClass::Zero => assert_eq!(e.lambda, 0.0),
                    EigenClass::SingularCosPlusOne => assert!((s.cos() - 1.0).abs() < 1e-12),
                    EigenClass::SingularCosMinusOne => assert!((s.cos() + 1.0).abs() < 1e-12),
                    EigenClass::Immanent => {
                        let mu = e.source_mu.unwrap();
                        assert!(mu.abs() < 1.0 && s.sin().abs() > 1e-6);
                        let sign = if cond == Condition::Ck { 1.0 } else { -1.0 };
                        assert!((sign * s.cos() - mu).abs() < 1e-12);
                    }
                }
            }
            assert!(w.entries.windows(2).all(|p| p[0].lambda < p[1].lambda));
        }
    }

    #[test]
    fn errors() {
        let lonely = Graph::from_edge_list(3, vec![(0, 1)]).unwrap();
        assert_eq!(
            ck_spectrum(&lonely, 10.0, 1e-9),
            Err(SpectrumError::IsolatedVertex(2))
        );
        let empty = Graph::from_edge_list(1, vec![]).unwrap();
        assert_eq!(kc_spectrum(&empty, 10.0, 1e-9), Err(SpectrumError::EmptyGraph));
        let p2 = gen(GraphKind::Path, 2);
        assert!(matches!(
            ck_spectrum(&p2, -1.0, 1e-9),
            Err(SpectrumError::NonPositiveWindow(_))
        ));
    }

    #[test]
    fn comparisons() {
        let c8 = compare_ck_kc::<f64>(&gen(GraphKind::Circuit, 8), 200.0).unwrap();
        assert!(c8.full_spectra_coincide && c8.unicyclic && c8.bipartite && c8.equivalences_hold);
        let c3 = compare_ck_kc::<f64>(&gen(GraphKind::Circuit, 3), 200.0).unwrap();
        assert!(!c3.full_spectra_coincide && !c3.bipartite && c3.equivalences_hold);
        let claw = compare_ck_kc::<f64>(&gen(GraphKind::Star, 3), 200.0).unwrap();
        assert!(claw.immanent_parts_coincide && !claw.full_spectra_coincide);
        assert!(claw.equivalences_hold);
        let two = gen(GraphKind::Circuit, 3).disjoint_union(&gen(GraphKind::Circuit, 4));
        assert_eq!(compare_ck_kc::<f64>(&two, 50.0), Err(SpectrumError::Disconnected));
    }

    #[test]
    fn kernel_indices() {
        assert_eq!(kernel_index(&gen(GraphKind::Star, 4)), -1);
        assert_eq!(kernel_index(&gen(GraphKind::Path, 6)), -1);
        assert_eq!(kernel_index(&gen(GraphKind::Circuit, 4)), 0);
        assert_eq!(kernel_index(&gen(GraphKind::Circuit, 3)), -1);
    }

    #[test]
    fn weyl_on_single_edge() {
        // Neumann interval: λ_k = ((k-1)π)²
        let p2 = gen(GraphKind::Path, 2);
        let ck = ck_spectrum(&p2, (12.0 * PI).powi(2), 1e-9).unwrap();
        let r = weyl_ratio(&ck, 10).unwrap();
        assert!((r - (9.0 * PI).powi(2) / 100.0).abs() < 1e-12);
        assert!(weyl_ratio(&ck, 100).is_err());
        assert!(weyl_ratio(&ck, 0).is_err());
    }

    #[test]
    fn contraction_closing_a_path() {
        // P4 closes to C3, P5 to C4
        let p4 = gen(GraphKind::Path, 4);
        let report = contraction_monotonicity::<f64>(&p4, 0, 3).unwrap();
        assert!((report.lambda1_original - (PI / 3.0).powi(2)).abs() < 1e-12);
        assert!((report.lambda1_contracted - (2.0 * PI / 3.0).powi(2)).abs() < 1e-12);
        assert!(report.holds);
        let p5 = gen(GraphKind::Path, 5);
        let report = contraction_monotonicity::<f64>(&p5, 0, 4).unwrap();
        assert!((report.lambda1_original - (PI / 4.0).powi(2)).abs() < 1e-12);
        assert!((report.lambda1_contracted - (PI / 2.0).powi(2)).abs() < 1e-12);
        assert!(report.holds);
        let star = gen(GraphKind::Star, 4);
        assert!(matches!(
            contraction_monotonicity::<f64>(&star, 1, 2),
            Err(SpectrumError::Graph(GraphError::ContractionViolatesSimplicity { .. }))
        ));
        let two = gen(GraphKind::Circuit, 4).disjoint_union(&gen(GraphKind::Circuit, 4));
        assert_eq!(
            contraction_monotonicity::<f64>(&two, 0, 4),
            Err(SpectrumError::Disconnected)
        );
    }

    #[test]
    fn distinct_counts() {
        let lmax = (4.0 * PI).powi(2) + 1.0;
        let pet = gen(GraphKind::Petersen, 0);
        let ck = ck_spectrum(&pet, lmax, 1e-9).unwrap();
        assert_eq!(distinct_count_per_period(&ck, 0).unwrap(), 6);
        let k4 = gen(GraphKind::Complete, 4);
        let kc = kc_spectrum(&k4, lmax, 1e-9).unwrap();
        assert_eq!(distinct_count_per_period(&kc, 0).unwrap(), 4);
        // bipartite C4: σ(Z) = {1, 0, 0, -1}; only μ = 0 is immanent
        let c4 = ck_spectrum(&gen(GraphKind::Circuit, 4), lmax, 1e-9).unwrap();
        assert_eq!(distinct_count_per_period(&c4, 0).unwrap(), 4);
        assert!(distinct_count_per_period(&c4, 2).is_err());
    }

    #[test]
    fn collation_from_plain_list() {
        let c3 = gen(GraphKind::Circuit, 3);
        let lmax = 4.0 * PI * PI + 1.0;
        let kc = kc_spectrum(&c3, lmax, 1e-9).unwrap();
        let list = kc.expanded();
        let collated = SpectrumWindow::from_eigenvalue_list(Condition::Kc, &list, lmax, 1e-9);
        assert!(entries_match(&collated.entries, &kc.entries, 1e-12));
        assert_eq!(
            collated.entries.iter().map(|e| e.class).collect::<Vec<_>>(),
            kc.entries.iter().map(|e| e.class).collect::<Vec<_>>()
        );
    }

    #[test]
    fn json_shape() {
        let w = ck_spectrum(&gen(GraphKind::Path, 2), 10.0, 1e-9).unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["condition"], "ck");
        assert_eq!(json["entries"][0]["class"], "zero");
        assert!(json["entries"][0]["source_mu"].is_null());
        assert!(json.get("graph_info").is_none());
        let back: SpectrumWindow<f64> = serde_json::from_value(json).unwrap();
        assert_eq!(back.entries, w.entries);
    }
}
