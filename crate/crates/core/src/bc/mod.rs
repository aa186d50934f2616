//! General self-adjoint vertex conditions `(Y, R)` and the secular scanner.
//!
//! Boundary data of a graph with `m` unit edges lives in `ℂ^{2m}`: coordinate
//! `j` is the value at endpoint 0 (tail) of edge `j`, coordinate `m + j` the
//! value at endpoint 1 (head). A condition is a subspace `Y` together with a
//! Hermitian `R`; only `R_eff = P_Y R P_Y` matters.

mod scan;
mod subspace;

use nalgebra::{Complex, ComplexField, SymmetricEigen, SVD};
use thiserror::Error;

use crate::scalar::Real;

pub use scan::{
    duality_check, match_roots, scan_eigenvalues, DualityReport, DualityViolation, RootMismatch, ScanOptions, ScanRoot,
    SecularScan,
};
pub use subspace::{ck_subspace, endpoint_coupling_matrix, kc_subspace, rank_tol, CMatrix, CVector, Subspace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BcError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension {0} is odd; boundary data needs two endpoints per edge")]
    OddAmbientDimension(usize),
    #[error("R is not Hermitian (max |R - Rᴴ| = {0:e})")]
    NonHermitianR(f64),
    #[error("lambda must be positive, got {0}")]
    NonPositiveLambda(f64),
    #[error("grid too coarse: roots near lambda = {lambda_a} and {lambda_b} collided; reduce the grid step")]
    GridTooCoarse { lambda_a: f64, lambda_b: f64 },
    #[error("invalid scan option: {0}")]
    InvalidOption(String),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
}

/// A self-adjoint vertex condition `(Y, R)` on `m = ambient_dim / 2` edges.
#[derive(Debug, Clone)]
pub struct BoundaryCondition<T: Real> {
    y: Subspace<T>,
    r_eff: CMatrix<T>,
}

impl<T: Real> BoundaryCondition<T> {
    /// Checks dimensions and Hermiticity of `r` (tolerance `1e-12` relative to
    /// `max(1, max|r|)`).
    pub fn new(y: Subspace<T>, r: CMatrix<T>) -> Result<Self, BcError> {
        let dim = y.ambient_dim();
        if dim % 2 != 0 {
            return Err(BcError::OddAmbientDimension(dim));
        }
        if r.nrows() != dim || r.ncols() != dim {
            return Err(BcError::DimensionMismatch {
                expected: dim,
                found: if r.nrows() != dim { r.nrows() } else { r.ncols() },
            });
        }
        let scale = max_abs(&r).max(T::one());
        let asym = max_abs(&(&r - r.adjoint()));
        if asym > T::tol_floor(1e-12, 1e2) * scale {
            return Err(BcError::NonHermitianR(asym.as_f64()));
        }
        let p = y.projector();
        let r_eff = &p * r * &p;
        // symmetrise away rounding so later Hermitian routines see exact symmetry
        let r_eff = (&r_eff + r_eff.adjoint()).map(|z| z * Complex::new(T::lit(0.5), T::zero()));
        Ok(Self { y, r_eff })
    }

    /// The `R = 0` condition (`δ`-free: CK, KC, loops `Y_α`).
    pub fn unperturbed(y: Subspace<T>) -> Result<Self, BcError> {
        let dim = y.ambient_dim();
        Self::new(y, CMatrix::zeros(dim, dim))
    }

    /// Number of edges `m`.
    pub fn num_edges(&self) -> usize {
        self.y.ambient_dim() / 2
    }

    pub fn subspace(&self) -> &Subspace<T> {
        &self.y
    }

    /// `P_Y R P_Y`.
    pub fn r_eff(&self) -> &CMatrix<T> {
        &self.r_eff
    }

    /// Eigenvalues of `R_eff` in ascending order.
    pub fn r_eff_eigenvalues(&self) -> Vec<T> {
        let mut ev: Vec<T> = SymmetricEigen::new(self.r_eff.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        ev
    }

    /// `R_eff ⪰ 0`, the regime where no eigenvalue is negative and the
    /// positive-axis scan sees the whole spectrum.
    pub fn is_nonnegative(&self) -> bool {
        let scale = max_abs(&self.r_eff).max(T::one());
        self.r_eff_eigenvalues()
            .first()
            .map_or(true, |&e| e >= -T::tol_floor(1e-12, 1e2) * scale)
    }
}

pub(crate) fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().map(|z| z.modulus()).fold(T::zero(), T::max)
}

/// `[[I, 0], [cI, sI]]` and `[[0, I], [sI, -cI]]` (each `2m × 2m`) at
/// `k = √λ`, with `c = cos k`, `s = sin k`.
fn trig_blocks<T: Real>(m: usize, k: T) -> (CMatrix<T>, CMatrix<T>) {
    let (s, c) = (Complex::new(k.sin(), T::zero()), Complex::new(k.cos(), T::zero()));
    let one = Complex::new(T::one(), T::zero());
    let mut value_map = CMatrix::zeros(2 * m, 2 * m);
    let mut flux_map = CMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        value_map[(i, i)] = one;
        value_map[(m + i, i)] = c;
        value_map[(m + i, m + i)] = s;
        flux_map[(i, m + i)] = one;
        flux_map[(m + i, i)] = s;
        flux_map[(m + i, m + i)] = -c;
    }
    (value_map, flux_map)
}

/// Precomputed projector data for repeated secular evaluations.
pub(crate) struct SecularSystem<T: Real> {
    m: usize,
    p_y: CMatrix<T>,
    p_perp: CMatrix<T>,
    r_eff: CMatrix<T>,
}

impl<T: Real> SecularSystem<T> {
    pub(crate) fn new(bc: &BoundaryCondition<T>) -> Self {
        let p_y = bc.y.projector();
        let dim = p_y.nrows();
        Self {
            m: dim / 2,
            p_perp: CMatrix::identity(dim, dim) - &p_y,
            p_y,
            r_eff: bc.r_eff.clone(),
        }
    }

    /// The `4m × 2m` secular matrix at `k = √λ`, with the flux block divided
    /// by `bottom_scale`.
    pub(crate) fn matrix(&self, k: T, bottom_scale: T) -> CMatrix<T> {
        let m = self.m;
        let (value_map, flux_map) = trig_blocks(m, k);
        let top = &self.p_perp * &value_map;
        let flux = flux_map.map(|z| z * Complex::new(k, T::zero())) - &self.r_eff * &value_map;
        let bottom = (&self.p_y * flux).map(|z| z.unscale(bottom_scale));
        let mut out = CMatrix::zeros(4 * m, 2 * m);
        out.view_mut((0, 0), (2 * m, 2 * m)).copy_from(&top);
        out.view_mut((2 * m, 0), (2 * m, 2 * m)).copy_from(&bottom);
        out
    }

    /// Singular values in ascending order of the balanced matrix (flux block
    /// divided by `max(1, k)`, which leaves the kernel unchanged).
    pub(crate) fn singular_values(&self, k: T) -> Vec<T> {
        let mat = self.matrix(k, k.max(T::one()));
        let mut sv: Vec<T> = SVD::new(mat, false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| a.partial_cmp(b).expect("finite singular values"));
        sv
    }
}

/// The secular matrix `M(λ)`; `λ` is an eigenvalue of the `(Y, R)` Laplacian
/// iff `M(λ)` has a nontrivial kernel, and the multiplicity is its nullity.
pub fn secular_matrix<T: Real>(bc: &BoundaryCondition<T>, lambda: T) -> Result<CMatrix<T>, BcError> {
    if !(lambda > T::zero()) {
        return Err(BcError::NonPositiveLambda(lambda.as_f64()));
    }
    Ok(SecularSystem::new(bc).matrix(lambda.sqrt(), T::one()))
}

/// Multiplicity of `λ = 0`. Zero unless `R_eff` vanishes; then it is the
/// dimension of `Y ∩ {(a, a)}`, the constants on each edge that satisfy the
/// condition.
pub fn zero_multiplicity<T: Real>(bc: &BoundaryCondition<T>) -> usize {
    if max_abs(&bc.r_eff) > T::tol_floor(1e-12, 1e2) {
        return 0;
    }
    let m = bc.num_edges();
    let d = bc.y.dim();
    let diag = Complex::new(T::one() / T::lit(2.0).sqrt(), T::zero());
    let mut stacked = CMatrix::zeros(2 * m, m + d);
    for i in 0..m {
        stacked[(i, i)] = diag;
        stacked[(m + i, i)] = diag;
    }
    stacked.view_mut((0, m), (2 * m, d)).copy_from(bc.y.basis());
    m + d - complex_rank(&stacked, rank_tol::<T>())
}

/// Numerical rank with a tolerance relative to the largest singular value.
pub(crate) fn complex_rank<T: Real>(m: &CMatrix<T>, rel_tol: T) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = SVD::new(m.clone(), false, false).singular_values;
    let smax = sv.iter().copied().fold(T::zero(), T::max);
    if smax == T::zero() {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Closed-form spectrum of the loop with condition `Y_α = span{(α, 1)}`:
/// `cos √λ = 2 Re α / (1 + |α|²)`. Returns `(λ, multiplicity)` pairs with
/// `λ ≤ lambda_max`. The eigenvalues are double exactly when `α = ±1`, and
/// `λ = 0` occurs (simply) only for `α = 1`.
pub fn loop_spectrum<T: Real>(alpha: Complex<T>, lambda_max: T) -> Vec<(T, usize)> {
    let tol = T::tol_floor(1e-12, 1e2);
    let pi = T::pi();
    let two_pi = T::two_pi();
    let s_max = lambda_max.max(T::zero()).sqrt();
    let slack = T::tol_floor(1e-12, 1e2) * s_max.max(T::one());
    let mut out = Vec::new();
    let one = Complex::new(T::one(), T::zero());
    if (alpha - one).modulus() < tol || (alpha + one).modulus() < tol {
        let start = if (alpha - one).modulus() < tol {
            out.push((T::zero(), 1));
            two_pi
        } else {
            pi
        };
        let mut k = start;
        while k <= s_max + slack {
            out.push((k * k, 2));
            k += two_pi;
        }
        return out;
    }
    let cos_val = (T::lit(2.0) * alpha.re / (T::one() + alpha.norm_sqr())).clamp(-T::one(), T::one());
    let theta = cos_val.acos();
    let mut period = T::zero();
    loop {
        let lo = period + theta;
        if lo > s_max + slack {
            break;
        }
        out.push((lo * lo, 1));
        let hi = period + two_pi - theta;
        if hi <= s_max + slack {
            out.push((hi * hi, 1));
        }
        period += two_pi;
    }
    out
}
