//! Graph matrices and the real spectrum of the transition matrix.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("vertex {0} is isolated (degree 0)")]
    IsolatedVertex(usize),
    #[error("cluster tolerance must be positive")]
    NonPositiveTolerance,
}

/// The graph matrices exposed by [`matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Adjacency,
    Degree,
    SignedIncidence,
    UnsignedIncidence,
    CombinatorialLaplacian,
    NormalizedLaplacian,
    SignlessLaplacian,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 7] = [
        MatrixKind::Adjacency,
        MatrixKind::Degree,
        MatrixKind::SignedIncidence,
        MatrixKind::UnsignedIncidence,
        MatrixKind::CombinatorialLaplacian,
        MatrixKind::NormalizedLaplacian,
        MatrixKind::SignlessLaplacian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Degree => "degree",
            MatrixKind::SignedIncidence => "signed_incidence",
            MatrixKind::UnsignedIncidence => "unsigned_incidence",
            MatrixKind::CombinatorialLaplacian => "combinatorial_laplacian",
            MatrixKind::NormalizedLaplacian => "normalized_laplacian",
            MatrixKind::SignlessLaplacian => "signless_laplacian",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        MatrixKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| format!("unknown matrix kind '{s}'"))
    }
}

fn adjacency<T: Real>(g: &Graph) -> DMatrix<T> {
    let mut a = DMatrix::zeros(g.n(), g.n());
    for &(t, h) in g.edges() {
        a[(t, h)] = T::one();
        a[(h, t)] = T::one();
    }
    a
}

fn checked_degrees(g: &Graph) -> Result<Vec<usize>, MatrixError> {
    let deg = g.degrees();
    match deg.iter().position(|&d| d == 0) {
        Some(v) => Err(MatrixError::IsolatedVertex(v)),
        None => Ok(deg),
    }
}

/// Builds the requested matrix. Incidence matrices are `n × N` with
/// `d_ij = +1` at the head of edge `j` and `-1` at its tail.
pub fn matrix<T: Real>(g: &Graph, kind: MatrixKind) -> Result<DMatrix<T>, MatrixError> {
    let n = g.n();
    let deg = g.degrees();
    let degree = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        deg.iter().map(|&d| T::from_count(d)),
    ));
    let m = match kind {
        MatrixKind::Adjacency => adjacency(g),
        MatrixKind::Degree => degree,
        MatrixKind::SignedIncidence | MatrixKind::UnsignedIncidence => {
            let mut d = DMatrix::zeros(n, g.num_edges());
            let tail_sign = if kind == MatrixKind::SignedIncidence {
                -T::one()
            } else {
                T::one()
            };
            for (j, &(t, h)) in g.edges().iter().enumerate() {
                d[(h, j)] = T::one();
                d[(t, j)] = tail_sign;
            }
            d
        }
        MatrixKind::CombinatorialLaplacian => degree - adjacency::<T>(g),
        MatrixKind::SignlessLaplacian => degree + adjacency::<T>(g),
        MatrixKind::NormalizedLaplacian => {
            DMatrix::identity(n, n) - normalized_adjacency(g)?
        }
    };
    Ok(m)
}

/// `D^{-1/2} A D^{-1/2}`, the symmetric conjugate of the transition matrix.
pub fn normalized_adjacency<T: Real>(g: &Graph) -> Result<DMatrix<T>, MatrixError> {
    let deg = checked_degrees(g)?;
    let scale: Vec<T> = deg
        .iter()
        .map(|&d| T::one() / T::from_count(d).sqrt())
        .collect();
    let mut s = adjacency::<T>(g);
    for i in 0..g.n() {
        for j in 0..g.n() {
            s[(i, j)] *= scale[i] * scale[j];
        }
    }
    Ok(s)
}

/// Row-stochastic transition matrix `Z = D^{-1} A`.
pub fn transition_matrix<T: Real>(g: &Graph) -> Result<DMatrix<T>, MatrixError> {
    let deg = checked_degrees(g)?;
    let mut z = adjacency::<T>(g);
    for (i, &d) in deg.iter().enumerate() {
        let inv = T::one() / T::from_count(d);
        z.row_mut(i).scale_mut(inv);
    }
    Ok(z)
}

/// One eigenvalue together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SpectralValue<T: Real> {
    pub value: T,
    pub multiplicity: usize,
}

/// Sorted eigenvalues of a real symmetric (or symmetrisable) matrix with
/// multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RealSpectrum<T: Real> {
    pub values: Vec<SpectralValue<T>>,
    pub tol_cluster: T,
}

impl<T: Real> RealSpectrum<T> {
    /// Groups sorted-or-not raw eigenvalues: consecutive values closer than
    /// `tol` are merged and represented by their mean.
    pub fn from_eigenvalues(mut raw: Vec<T>, tol: T) -> Self {
        raw.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        let mut values: Vec<SpectralValue<T>> = Vec::new();
        let mut sum = T::zero();
        let mut last = T::zero();
        for x in raw {
            match values.last_mut() {
                Some(group) if x - last < tol => {
                    sum += x;
                    group.multiplicity += 1;
                    group.value = sum / T::from_count(group.multiplicity);
                }
                _ => {
                    sum = x;
                    values.push(SpectralValue {
                        value: x,
                        multiplicity: 1,
                    });
                }
            }
            last = x;
        }
        Self {
            values,
            tol_cluster: tol,
        }
    }

    /// Sum of multiplicities.
    pub fn dimension(&self) -> usize {
        self.values.iter().map(|v| v.multiplicity).sum()
    }

    /// Multiplicity of the cluster within `tol_cluster` of `x` (0 if absent).
    pub fn multiplicity_of(&self, x: T) -> usize {
        self.values
            .iter()
            .find(|v| (v.value - x).abs() < self.tol_cluster)
            .map_or(0, |v| v.multiplicity)
    }

    /// Eigenvalues repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<T> {
        self.values
            .iter()
            .flat_map(|v| std::iter::repeat(v.value).take(v.multiplicity))
            .collect()
    }
}

/// Default clustering tolerance `1e-9 · max(1, n)`, lifted for `f32`.
pub fn default_cluster_tol<T: Real>(n: usize) -> T {
    T::tol_floor(1e-9, 1e4) * T::from_count(n.max(1))
}

/// Spectrum of `Z = D^{-1}A`, computed from the similar symmetric matrix
/// `D^{-1/2} A D^{-1/2}` with a Hermitian eigensolver. Values within `tol` of
/// `±1` are snapped to `±1`.
pub fn spectrum_of_transition<T: Real>(g: &Graph, tol: T) -> Result<RealSpectrum<T>, MatrixError> {
    if tol <= T::zero() {
        return Err(MatrixError::NonPositiveTolerance);
    }
    let s = normalized_adjacency::<T>(g)?;
    let raw = SymmetricEigen::new(s).eigenvalues;
    let mut spec = RealSpectrum::from_eigenvalues(raw.iter().copied().collect(), tol);
    for v in &mut spec.values {
        if (v.value - T::one()).abs() < tol || v.value > T::one() {
            v.value = T::one();
        } else if (v.value + T::one()).abs() < tol || v.value < -T::one() {
            v.value = -T::one();
        }
    }
    Ok(spec)
}

/// Spectrum of an arbitrary symmetric matrix, clustered with `tol`.
pub fn symmetric_spectrum<T: Real>(m: DMatrix<T>, tol: T) -> RealSpectrum<T> {
    let raw = SymmetricEigen::new(m).eigenvalues;
    RealSpectrum::from_eigenvalues(raw.iter().copied().collect(), tol)
}

/// Kernel dimension `cols - rank`, the rank counting singular values
/// `≥ tol · σ_max`. A zero-size matrix has nullity 0; the zero matrix has
/// nullity `cols`.
pub fn nullity<T: Real>(m: &DMatrix<T>, tol: T) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().copied().fold(T::zero(), T::max);
    let rank = if smax == T::zero() {
        0
    } else {
        sv.iter().filter(|&&s| s >= tol * smax).count()
    };
    m.ncols() - rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use approx::assert_relative_eq;

    fn gen(kind: GraphKind, size: usize) -> Graph {
        Graph::generate(kind, size).unwrap()
    }

    #[test]
    fn transition_of_p3_k4_c4() {
        let z = transition_matrix::<f64>(&gen(GraphKind::Path, 3)).unwrap();
        let expected = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.5, 0.0, 0.5, 0.0, 1.0, 0.0]);
        assert_eq!(z, expected);

        let z = transition_matrix::<f64>(&gen(GraphKind::Complete, 4)).unwrap();
        let expected = (DMatrix::from_element(4, 4, 1.0) - DMatrix::identity(4, 4)) / 3.0;
        assert_relative_eq!(z, expected, epsilon = 1e-15);

        let z = transition_matrix::<f64>(&gen(GraphKind::Circuit, 4)).unwrap();
        for i in 0..4 {
            assert_eq!(z[(i, (i + 1) % 4)], 0.5);
            assert_eq!(z[(i, (i + 3) % 4)], 0.5);
            assert_eq!(z[(i, (i + 2) % 4)], 0.0);
            assert_relative_eq!(z.row(i).sum(), 1.0);
        }
    }

    #[test]
    fn isolated_vertex_is_rejected() {
        let g = Graph::from_edge_list(3, vec![(0, 1)]).unwrap();
        assert_eq!(transition_matrix::<f64>(&g), Err(MatrixError::IsolatedVertex(2)));
        assert_eq!(
            matrix::<f64>(&g, MatrixKind::NormalizedLaplacian),
            Err(MatrixError::IsolatedVertex(2))
        );
        assert!(matrix::<f64>(&g, MatrixKind::Adjacency).is_ok());
    }

    #[test]
    fn transition_spectra() {
        let tol = 1e-9;
        let p3 = spectrum_of_transition::<f64>(&gen(GraphKind::Path, 3), tol).unwrap();
        let vals: Vec<_> = p3.values.iter().map(|v| (v.value, v.multiplicity)).collect();
        assert_eq!(vals.len(), 3);
        assert_eq!(vals[0], (-1.0, 1));
        assert!(vals[1].0.abs() < 1e-12 && vals[1].1 == 1);
        assert_eq!(vals[2], (1.0, 1));

        for n in 3..8 {
            let s = spectrum_of_transition::<f64>(&gen(GraphKind::Complete, n), tol).unwrap();
            assert_eq!(s.values.len(), 2);
            assert_relative_eq!(s.values[0].value, -1.0 / (n as f64 - 1.0), epsilon = 1e-12);
            assert_eq!(s.values[0].multiplicity, n - 1);
            assert_eq!(s.values[1].value, 1.0);
        }
    }

    #[test]
    fn matrices_follow_conventions() {
        let p2 = gen(GraphKind::Path, 2);
        let d = matrix::<f64>(&p2, MatrixKind::SignedIncidence).unwrap();
        assert_eq!(d, DMatrix::from_column_slice(2, 1, &[-1.0, 1.0]));

        let c3 = gen(GraphKind::Circuit, 3);
        let a = matrix::<f64>(&c3, MatrixKind::Adjacency).unwrap();
        let q = matrix::<f64>(&c3, MatrixKind::SignlessLaplacian).unwrap();
        assert_eq!(q, DMatrix::identity(3, 3) * 2.0 + a);

        let c4 = gen(GraphKind::Circuit, 4);
        let l = matrix::<f64>(&c4, MatrixKind::CombinatorialLaplacian).unwrap();
        let spec = symmetric_spectrum(l, 1e-9);
        let got: Vec<_> = spec.expanded();
        for (x, want) in got.iter().zip([0.0, 2.0, 2.0, 4.0]) {
            assert!((x - want).abs() < 1e-12, "{got:?}");
        }
    }

    #[test]
    fn incidence_nullities() {
        let tol = 1e-10;
        let null = |kind, g: &Graph| nullity(&matrix::<f64>(g, kind).unwrap(), tol);
        let c3 = gen(GraphKind::Circuit, 3);
        let c4 = gen(GraphKind::Circuit, 4);
        assert_eq!(null(MatrixKind::UnsignedIncidence, &c4), 1);
        assert_eq!(null(MatrixKind::UnsignedIncidence, &c3), 0);
        assert_eq!(null(MatrixKind::SignedIncidence, &c3), 1);
        let k4 = gen(GraphKind::Complete, 4);
        assert_eq!(null(MatrixKind::SignedIncidence, &k4), 3);
        assert_eq!(nullity(&DMatrix::<f64>::zeros(0, 3), tol), 0);
        assert_eq!(nullity(&DMatrix::<f64>::zeros(2, 3), tol), 3);
    }

    #[test]
    fn clustering_merges_chains() {
        let s = RealSpectrum::from_eigenvalues(vec![0.3, 0.1, 0.1 + 1e-12, 0.1 + 2e-12, 0.5], 1e-9);
        assert_eq!(s.values.len(), 3);
        assert_eq!(s.values[0].multiplicity, 3);
        assert_eq!(s.dimension(), 5);
        assert_eq!(s.multiplicity_of(0.5), 1);
        assert_eq!(s.multiplicity_of(0.4), 0);
    }

    #[test]
    fn f32_transition_spectrum() {
        let s = spectrum_of_transition::<f32>(&gen(GraphKind::Complete, 4), default_cluster_tol(4))
            .unwrap();
        assert_eq!(s.values.len(), 2);
        assert_eq!(s.values[0].multiplicity, 3);
        assert!((s.values[0].value + 1.0 / 3.0).abs() < 1e-5);
    }
}
