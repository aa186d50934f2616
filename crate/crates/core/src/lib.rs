//! Spectra of `-d²/dx²` on equilateral metric graphs.
//!
//! - [`graph`]: simple graphs, generators, structural invariants, spanning
//!   trees.
//! - [`matrices`]: adjacency, incidence, Laplacians and the transition matrix
//!   `Z = D⁻¹A` with its spectrum.
//! - [`spectra`]: closed-form CK and KC spectra built from σ(Z).
//! - [`bc`]: arbitrary self-adjoint conditions `(Y, R)` solved by a secular
//!   singular-value scan.
//! - [`inverse`]: invariants recovered from a spectrum.
//! - [`export`]: stable JSON and CSV output.
//!
//! The numerical code is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below fix the usual choice.

pub mod bc;
pub mod exact;
pub mod export;
pub mod graph;
pub mod inverse;
pub mod matrices;
pub mod scalar;
pub mod spectra;

pub use bc::{
    ck_subspace, duality_check, kc_subspace, loop_spectrum, scan_eigenvalues, secular_matrix, zero_multiplicity,
    BcError, BoundaryCondition, ScanOptions, SecularScan, Subspace,
};
pub use graph::{ComponentInfo, Graph, GraphError, GraphKind};
pub use inverse::{isospectral, non_recoverability_report, recover, InverseError, RecoveredInvariants};
pub use matrices::{matrix, spectrum_of_transition, MatrixError, MatrixKind, RealSpectrum};
pub use scalar::Real;
pub use spectra::{
    ck_spectrum, kc_spectrum, spectrum, Condition, EigenClass, EigenvalueEntry, SpectrumError, SpectrumWindow,
};

pub type SpectrumWindowF64 = SpectrumWindow<f64>;
pub type SpectrumWindowF32 = SpectrumWindow<f32>;
pub type EigenvalueEntryF64 = EigenvalueEntry<f64>;
pub type RealSpectrumF64 = RealSpectrum<f64>;
pub type SubspaceF64 = Subspace<f64>;
pub type BoundaryConditionF64 = BoundaryCondition<f64>;
pub type SecularScanF64 = SecularScan<f64>;
pub type ScanOptionsF64 = ScanOptions<f64>;
