use nalgebra::{Complex, ComplexField, DMatrix, DVector};

use super::BcError;
use crate::graph::Graph;
use crate::scalar::Real;

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Relative tolerance used for rank decisions when orthonormalising.
pub fn rank_tol<T: Real>() -> T {
    T::tol_floor(1e-10, 1e3)
}

/// A subspace `Y ⊂ ℂ^{2m}` stored as an orthonormal column frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T: Real> {
    basis: CMatrix<T>,
}

impl<T: Real> Subspace<T> {
    /// Orthonormalises spanning vectors with column-pivoted modified
    /// Gram–Schmidt; vectors whose residual falls below `1e-10` relative to
    /// the largest input norm are dropped.
    pub fn from_spanning_vectors(ambient_dim: usize, vectors: &[CVector<T>]) -> Result<Self, BcError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(BcError::DimensionMismatch {
                expected: ambient_dim,
                found: v.len(),
            });
        }
        let frame = orthonormal_frame(vectors.to_vec(), rank_tol::<T>(), ambient_dim);
        Ok(Self::from_frame(ambient_dim, &frame))
    }

    /// Subspace spanned by the columns of `m`.
    pub fn from_columns(m: &CMatrix<T>) -> Self {
        let cols: Vec<CVector<T>> = m.column_iter().map(|c| c.into_owned()).collect();
        let frame = orthonormal_frame(cols, rank_tol::<T>(), m.nrows());
        Self::from_frame(m.nrows(), &frame)
    }

    fn from_frame(ambient_dim: usize, frame: &[CVector<T>]) -> Self {
        let basis = if frame.is_empty() {
            CMatrix::zeros(ambient_dim, 0)
        } else {
            CMatrix::from_columns(frame)
        };
        Self { basis }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// `Y_α = span{(α, 1)} ⊂ ℂ²`, the loop boundary conditions.
    pub fn loop_alpha(alpha: Complex<T>) -> Self {
        let v = CVector::from_vec(vec![alpha, Complex::new(T::one(), T::zero())]);
        let norm = v.norm();
        Self {
            basis: CMatrix::from_columns(&[v.unscale(norm)]),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `2m × d` orthonormal frame.
    pub fn basis(&self) -> &CMatrix<T> {
        &self.basis
    }

    /// Orthogonal projector `P_Y = B Bᴴ`.
    pub fn projector(&self) -> CMatrix<T> {
        &self.basis * self.basis.adjoint()
    }

    /// `Y⊥`, of dimension `2m - d`.
    pub fn orthogonal_complement(&self) -> Self {
        let n = self.ambient_dim();
        let residual = CMatrix::identity(n, n) - self.projector();
        let cols: Vec<CVector<T>> = residual.column_iter().map(|c| c.into_owned()).collect();
        // the residual has rank exactly n - d; pivoting picks the best columns
        let frame = orthonormal_frame(cols, T::zero(), n - self.dim());
        Self::from_frame(n, &frame)
    }

    /// Largest deviation of `Bᴴ B` from the identity.
    pub fn orthonormality_defect(&self) -> T {
        let gram = self.basis.adjoint() * &self.basis;
        let eye = CMatrix::<T>::identity(self.dim(), self.dim());
        (gram - eye).iter().map(|z| z.modulus()).fold(T::zero(), T::max)
    }
}

/// Column-pivoted modified Gram–Schmidt with one re-orthogonalisation pass.
/// Stops when the largest remaining residual is `≤ rel_tol · max‖v‖` or when
/// `limit` vectors have been produced.
fn orthonormal_frame<T: Real>(mut cols: Vec<CVector<T>>, rel_tol: T, limit: usize) -> Vec<CVector<T>> {
    let scale = cols.iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let mut frame: Vec<CVector<T>> = Vec::new();
    if scale == T::zero() {
        return frame;
    }
    while frame.len() < limit && !cols.is_empty() {
        let (idx, norm) = cols
            .iter()
            .map(|c| c.norm())
            .enumerate()
            .fold((0, T::zero()), |best, (i, nrm)| if nrm > best.1 { (i, nrm) } else { best });
        if norm <= rel_tol * scale || norm == T::zero() {
            break;
        }
        let mut q = cols.swap_remove(idx).unscale(norm);
        for f in &frame {
            let proj = f.dotc(&q);
            q.axpy(-proj, f, Complex::new(T::one(), T::zero()));
        }
        let qn = q.norm();
        q.unscale_mut(qn);
        for c in &mut cols {
            let proj = q.dotc(c);
            c.axpy(-proj, &q, Complex::new(T::one(), T::zero()));
        }
        frame.push(q);
    }
    frame
}

/// Index of endpoint `0` (tail) of edge `j` in `ℂ^{2N}` is `j`; endpoint `1`
/// (head) is `N + j`.
fn endpoint_index(num_edges: usize, edge: usize, head: bool) -> usize {
    if head {
        num_edges + edge
    } else {
        edge
    }
}

/// The `2N × 2N` endpoint coupling matrix: entry `(a, b)` is 1 when endpoints
/// `a` and `b` sit at the same vertex. It is block diagonal (after sorting
/// endpoints by vertex) with one all-ones block per vertex; its range is the
/// continuity space.
pub fn endpoint_coupling_matrix<T: Real>(g: &Graph) -> DMatrix<T> {
    let num_edges = g.num_edges();
    let mut vertex_of = vec![0usize; 2 * num_edges];
    for (j, &(t, h)) in g.edges().iter().enumerate() {
        vertex_of[endpoint_index(num_edges, j, false)] = t;
        vertex_of[endpoint_index(num_edges, j, true)] = h;
    }
    DMatrix::from_fn(2 * num_edges, 2 * num_edges, |a, b| {
        if vertex_of[a] == vertex_of[b] {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// Continuity space of the CK condition: vectors `(u(0), u(1)) ∈ ℂ^{2N}`
/// that take one value per vertex. Has dimension `n`.
pub fn ck_subspace<T: Real>(g: &Graph) -> Result<Subspace<T>, BcError> {
    if let Some(v) = g.isolated_vertex() {
        return Err(BcError::IsolatedVertex(v));
    }
    let num_edges = g.num_edges();
    let deg = g.degrees();
    let mut basis = CMatrix::zeros(2 * num_edges, g.n());
    for (j, &(t, h)) in g.edges().iter().enumerate() {
        basis[(endpoint_index(num_edges, j, false), t)] =
            Complex::new(T::one() / T::from_count(deg[t]).sqrt(), T::zero());
        basis[(endpoint_index(num_edges, j, true), h)] =
            Complex::new(T::one() / T::from_count(deg[h]).sqrt(), T::zero());
    }
    Ok(Subspace { basis })
}

/// The KC (anti-Kirchhoff) space, the orthogonal complement of
/// [`ck_subspace`]. Has dimension `2N - n`.
pub fn kc_subspace<T: Real>(g: &Graph) -> Result<Subspace<T>, BcError> {
    Ok(ck_subspace::<T>(g)?.orthogonal_complement())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use crate::matrices::nullity;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn max_abs(m: &CMatrix<f64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_projector() {
        let y = Subspace::<f64>::from_spanning_vectors(2, &[CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)])])
            .unwrap();
        let p = y.projector();
        let expected = CMatrix::from_element(2, 2, c(0.5, 0.0));
        assert!(max_abs(&(p - expected)) < 1e-15);
        let full = Subspace::<f64>::full(4).projector();
        assert!(max_abs(&(full - CMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn loop_projector_for_imaginary_alpha() {
        let p = Subspace::loop_alpha(c(0.0, 1.0)).projector();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(0.5, 0.0)]);
        assert!(max_abs(&(p - expected)) < 1e-15);
    }

    #[test]
    fn complement_of_loop_ck_is_loop_kc() {
        let y1 = Subspace::loop_alpha(c(1.0, 0.0));
        let perp = y1.orthogonal_complement();
        let y_minus = Subspace::loop_alpha(c(-1.0, 0.0));
        assert!(max_abs(&(perp.projector() - y_minus.projector())) < 1e-14);
        // general α: Y_α⊥ = Y_{-1/ᾱ}
        let alpha = c(0.3, -1.7);
        let other = -(alpha.conj()).inv();
        let perp = Subspace::loop_alpha(alpha).orthogonal_complement();
        assert!(max_abs(&(perp.projector() - Subspace::loop_alpha(other).projector())) < 1e-14);
    }

    #[test]
    fn complement_of_zero_is_full() {
        let z = Subspace::<f64>::zero(4);
        let perp = z.orthogonal_complement();
        assert_eq!(perp.dim(), 4);
        assert!(max_abs(&(perp.projector() - CMatrix::identity(4, 4))) < 1e-15);
        assert_eq!(Subspace::<f64>::full(4).orthogonal_complement().dim(), 0);
    }

    #[test]
    fn rank_revealing_drops_dependent_vectors() {
        let a = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)]);
        let b = CVector::from_vec(vec![c(0.0, 1.0), c(1.0, 0.0), c(0.0, -1.0)]);
        let dep = &a * c(2.0, -1.0) + &b * c(0.5, 0.0);
        let y = Subspace::from_spanning_vectors(3, &[a, b, dep]).unwrap();
        assert_eq!(y.dim(), 2);
        assert!(y.orthonormality_defect() < 1e-12);
        assert!(Subspace::<f64>::from_spanning_vectors(3, &[CVector::zeros(2)]).is_err());
        assert_eq!(Subspace::<f64>::from_spanning_vectors(3, &[CVector::zeros(3)]).unwrap().dim(), 0);
    }

    #[test]
    fn graph_subspaces() {
        for (kind, size, ck_dim, kc_dim) in [
            (GraphKind::Path, 2, 2, 0),
            (GraphKind::Circuit, 3, 3, 3),
            (GraphKind::Complete, 4, 4, 8),
        ] {
            let g = Graph::generate(kind, size).unwrap();
            let ck = ck_subspace::<f64>(&g).unwrap();
            let kc = kc_subspace::<f64>(&g).unwrap();
            assert_eq!((ck.dim(), kc.dim()), (ck_dim, kc_dim), "{kind}");
            assert!(ck.orthonormality_defect() < 1e-12);
            assert!(kc.orthonormality_defect() < 1e-12);
            let sum = ck.projector() + kc.projector();
            let n2 = 2 * g.num_edges();
            assert!(max_abs(&(sum - CMatrix::identity(n2, n2))) < 1e-12);
        }
    }

    #[test]
    fn ck_subspace_is_range_of_endpoint_coupling() {
        let g = Graph::generate(GraphKind::ButlerGrout2, 0).unwrap();
        let s2 = endpoint_coupling_matrix::<f64>(&g);
        let n2 = s2.nrows();
        assert_eq!(n2 - nullity(&s2, 1e-10), g.n());
        let s2c = s2.map(|x| Complex::new(x, 0.0));
        let kc = kc_subspace::<f64>(&g).unwrap();
        // range(S2) ⊂ Y_CK  ⇔  P_KC S2 = 0
        assert!(max_abs(&(kc.projector() * s2c)) < 1e-12);
    }

    #[test]
    fn isolated_vertex_rejected() {
        let g = Graph::from_edge_list(3, vec![(0, 1)]).unwrap();
        assert_eq!(ck_subspace::<f64>(&g), Err(BcError::IsolatedVertex(2)));
    }
}
