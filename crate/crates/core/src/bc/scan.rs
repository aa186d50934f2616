use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{zero_multiplicity, BcError, BoundaryCondition, SecularSystem, Subspace};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions<T: Real> {
    pub lambda_max: T,
    /// Grid spacing in `k = √λ`.
    pub grid_step: T,
    /// Absolute tolerance on `k` for root refinement.
    pub tol_root: T,
    /// Singular values below `tol_mult · max(1, σ_max)` count towards
    /// multiplicity.
    pub tol_mult: T,
}

impl<T: Real> ScanOptions<T> {
    pub fn new(lambda_max: T) -> Self {
        Self {
            lambda_max,
            grid_step: T::lit(0.01),
            tol_root: T::tol_floor(1e-10, 1e2),
            tol_mult: T::tol_floor(1e-8, 1e3),
        }
    }

    fn validate(&self) -> Result<(), BcError> {
        for (name, v) in [
            ("lambda_max", self.lambda_max),
            ("grid_step", self.grid_step),
            ("tol_root", self.tol_root),
            ("tol_mult", self.tol_mult),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(BcError::InvalidOption(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.tol_root >= self.grid_step {
            return Err(BcError::InvalidOption("tol_root must be smaller than grid_step".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ScanRoot<T: Real> {
    pub lambda: T,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SecularScan<T: Real> {
    pub roots: Vec<ScanRoot<T>>,
    /// True when `R_eff ⪰ 0`, so the spectrum is nonnegative and nothing
    /// below the scanned range was missed.
    pub regime_guaranteed: bool,
    #[serde(skip)]
    pub grid: Vec<T>,
    /// Ascending singular values of the balanced secular matrix at each grid
    /// point.
    #[serde(skip)]
    pub sigma: Vec<Vec<T>>,
}

impl<T: Real> SecularScan<T> {
    pub fn multiplicity_at(&self, lambda: T, tol: T) -> usize {
        self.roots
            .iter()
            .filter(|r| (r.lambda - lambda).abs() <= tol * lambda.abs().max(T::one()))
            .map(|r| r.multiplicity)
            .sum()
    }

    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

/// Golden-section minimisation of `f` on `[a, b]` down to width `tol`.
fn golden_min<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T, tol: T) -> T {
    let ratio = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// Finds the eigenvalues in `[0, Λ]` of the `(Y, R)` Laplacian by scanning the
/// smallest singular value of the secular matrix on a uniform grid in `√λ`,
/// refining each local minimum by golden section and reading the
/// multiplicity off the number of vanishing singular values.
///
/// Roots with `√λ` below `grid_step / 100` (other than `λ = 0` itself) are
/// not resolved. When `R_eff` has negative eigenvalues the operator may have
/// negative spectrum, which this scan does not see; `regime_guaranteed` is
/// then false.
pub fn scan_eigenvalues<T: Real>(bc: &BoundaryCondition<T>, opts: &ScanOptions<T>) -> Result<SecularScan<T>, BcError> {
    opts.validate()?;
    let sys = SecularSystem::new(bc);
    let step = opts.grid_step;
    let k_max = opts.lambda_max.sqrt();

    let mut grid = Vec::new();
    let mut i = 1usize;
    loop {
        let k = step * T::from_count(i);
        if k >= k_max {
            break;
        }
        grid.push(k);
        i += 1;
    }
    grid.push(k_max);
    // one guard point so a root at the top of the window is still a local minimum
    grid.push(k_max + step);

    let sigma: Vec<Vec<T>> = grid.par_iter().map(|&k| sys.singular_values(k)).collect();
    let f: Vec<T> = sigma.iter().map(|sv| sv[0]).collect();
    let last = grid.len() - 1;

    let candidates: Vec<usize> = (0..=last)
        .filter(|&i| (i == 0 || f[i] < f[i - 1]) && (i == last || f[i] <= f[i + 1]))
        .collect();

    let refined: Vec<Option<ScanRoot<T>>> = candidates
        .par_iter()
        .map(|&i| {
            let a = if i == 0 { grid[0] / T::lit(100.0) } else { grid[i - 1] };
            let b = if i == last { grid[i] + step } else { grid[i + 1] };
            let k = golden_min(|k| sys.singular_values(k)[0], a, b, opts.tol_root);
            // a minimum pinned to the bracket edge is the λ → 0 approach or a
            // root outside the bracket; neither is an interior root
            let edge = T::lit(4.0) * opts.tol_root;
            if k - a < edge || b - k < edge {
                return None;
            }
            if k > k_max + T::lit(2.0) * opts.tol_root {
                return None;
            }
            let sv = sys.singular_values(k);
            let smax = sv.last().expect("nonempty singular values").max(T::one());
            if !(sv[0] < T::lit(100.0) * opts.tol_mult * smax) {
                return None;
            }
            let mult = sv.iter().filter(|&&s| s < opts.tol_mult * smax).count().max(1);
            Some(ScanRoot {
                lambda: k * k,
                multiplicity: mult,
            })
        })
        .collect();

    let mut roots: Vec<ScanRoot<T>> = refined.into_iter().flatten().collect();
    roots.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).expect("finite roots"));
    for w in roots.windows(2) {
        let (ka, kb) = (w[0].lambda.sqrt(), w[1].lambda.sqrt());
        if kb - ka < T::lit(10.0) * opts.tol_root {
            return Err(BcError::GridTooCoarse {
                lambda_a: w[0].lambda.as_f64(),
                lambda_b: w[1].lambda.as_f64(),
            });
        }
    }
    let zero = zero_multiplicity(bc);
    if zero > 0 {
        roots.insert(
            0,
            ScanRoot {
                lambda: T::zero(),
                multiplicity: zero,
            },
        );
    }
    Ok(SecularScan {
        roots,
        regime_guaranteed: bc.is_nonnegative(),
        grid,
        sigma,
    })
}

/// One disagreement between scanned roots and a reference list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RootMismatch<T: Real> {
    pub expected_lambda: Option<T>,
    pub found_lambda: Option<T>,
    pub expected_multiplicity: usize,
    pub found_multiplicity: usize,
}

/// Pairs sorted `found` roots with sorted `(λ, multiplicity)` references
/// (`|Δλ| ≤ tol`) and lists every unmatched or multiplicity-disagreeing
/// entry. An empty result means the two lists agree.
pub fn match_roots<T: Real>(found: &[ScanRoot<T>], expected: &[(T, usize)], tol: T) -> Vec<RootMismatch<T>> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < found.len() || j < expected.len() {
        let f = found.get(i);
        let e = expected.get(j);
        match (f, e) {
            (Some(f), Some(&(el, em))) if (f.lambda - el).abs() <= tol => {
                if f.multiplicity != em {
                    out.push(RootMismatch {
                        expected_lambda: Some(el),
                        found_lambda: Some(f.lambda),
                        expected_multiplicity: em,
                        found_multiplicity: f.multiplicity,
                    });
                }
                i += 1;
                j += 1;
            }
            (Some(f), Some(&(el, _))) if f.lambda < el => {
                out.push(RootMismatch {
                    expected_lambda: None,
                    found_lambda: Some(f.lambda),
                    expected_multiplicity: 0,
                    found_multiplicity: f.multiplicity,
                });
                i += 1;
            }
            (_, Some(&(el, em))) => {
                out.push(RootMismatch {
                    expected_lambda: Some(el),
                    found_lambda: None,
                    expected_multiplicity: em,
                    found_multiplicity: 0,
                });
                j += 1;
            }
            (Some(f), None) => {
                out.push(RootMismatch {
                    expected_lambda: None,
                    found_lambda: Some(f.lambda),
                    expected_multiplicity: 0,
                    found_multiplicity: f.multiplicity,
                });
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DualityViolation<T: Real> {
    pub lambda: T,
    pub multiplicity: usize,
    pub partner_lambda: T,
    /// Multiplicity found in the complementary spectrum (0 if missing).
    pub partner_multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DualityReport<T: Real> {
    /// Number of eigenvalues of `Y` whose partner lies inside the window.
    pub checked: usize,
    pub violations: Vec<DualityViolation<T>>,
}

impl<T: Real> DualityReport<T> {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For `R = 0`, every eigenvalue `λ = k²` of `Y` with `k ≠ π` reappears in
/// the spectrum of `Y⊥` at `(π - k)²` with the same multiplicity. Scans both
/// conditions up to `lambda_max` and reports the pairs that fail to match
/// within `tol` (absolute, in `λ`). Partners beyond the window are skipped.
pub fn duality_check<T: Real>(y: &Subspace<T>, lambda_max: T, tol: T) -> Result<DualityReport<T>, BcError> {
    let opts = ScanOptions::new(lambda_max);
    let scan_y = scan_eigenvalues(&BoundaryCondition::unperturbed(y.clone())?, &opts)?;
    let scan_perp = scan_eigenvalues(&BoundaryCondition::unperturbed(y.orthogonal_complement())?, &opts)?;
    let pi = T::pi();
    let mut checked = 0;
    let mut violations = Vec::new();
    for root in &scan_y.roots {
        let k = root.lambda.sqrt();
        if (k - pi).abs() < T::lit(1e-6) {
            continue;
        }
        let partner = (pi - k) * (pi - k);
        if partner > lambda_max {
            continue;
        }
        checked += 1;
        let found: usize = scan_perp
            .roots
            .iter()
            .filter(|r| (r.lambda - partner).abs() <= tol)
            .map(|r| r.multiplicity)
            .sum();
        if found != root.multiplicity {
            violations.push(DualityViolation {
                lambda: root.lambda,
                multiplicity: root.multiplicity,
                partner_lambda: partner,
                partner_multiplicity: found,
            });
        }
    }
    Ok(DualityReport { checked, violations })
}

#[cfg(test)]
mod tests {
    use super::super::{ck_subspace, kc_subspace, CMatrix};
    use super::*;
    use crate::graph::{Graph, GraphKind};
    use crate::spectra::{ck_spectrum, kc_spectrum};
    use nalgebra::Complex;

    const PI: f64 = std::f64::consts::PI;

    fn loop_bc(re: f64, im: f64) -> BoundaryCondition<f64> {
        BoundaryCondition::unperturbed(Subspace::loop_alpha(Complex::new(re, im))).unwrap()
    }

    fn assert_roots(scan: &SecularScan<f64>, expected: &[(f64, usize)], tol: f64) {
        let got: Vec<(f64, usize)> = scan.roots.iter().map(|r| (r.lambda, r.multiplicity)).collect();
        assert_eq!(got.len(), expected.len(), "got {got:?}, expected {expected:?}");
        for (g, e) in got.iter().zip(expected) {
            assert!((g.0 - e.0).abs() < tol && g.1 == e.1, "got {got:?}, expected {expected:?}");
        }
    }

    #[test]
    fn loop_ck_and_kc() {
        let lam = 9.0 * PI * PI + 1.0;
        let ck = scan_eigenvalues(&loop_bc(1.0, 0.0), &ScanOptions::new(lam)).unwrap();
        assert_roots(&ck, &[(0.0, 1), (4.0 * PI * PI, 2)], 1e-8);
        assert!(ck.regime_guaranteed);
        let kc = scan_eigenvalues(&loop_bc(-1.0, 0.0), &ScanOptions::new(lam)).unwrap();
        assert_roots(&kc, &[(PI * PI, 2), (9.0 * PI * PI, 2)], 1e-8);
    }

    #[test]
    fn loop_generic_alpha_matches_closed_form() {
        let alpha = Complex::new(0.4, 0.9);
        let lam = 16.0 * PI * PI;
        let scan = scan_eigenvalues(&loop_bc(alpha.re, alpha.im), &ScanOptions::new(lam)).unwrap();
        let expected = super::super::loop_spectrum(alpha, lam);
        assert_roots(&scan, &expected, 1e-7);
    }

    #[test]
    fn root_on_window_edge_is_included() {
        let scan = scan_eigenvalues(&loop_bc(-1.0, 0.0), &ScanOptions::new(PI * PI)).unwrap();
        assert_roots(&scan, &[(PI * PI, 2)], 1e-8);
    }

    #[test]
    fn graph_scan_matches_closed_form() {
        let lam = 4.0 * PI * PI + 1.0;
        for kind in [GraphKind::Circuit, GraphKind::Star] {
            let g = Graph::generate(kind, 3).unwrap();
            for (sub, closed) in [
                (ck_subspace::<f64>(&g).unwrap(), ck_spectrum::<f64>(&g, lam, 1e-9).unwrap()),
                (kc_subspace::<f64>(&g).unwrap(), kc_spectrum::<f64>(&g, lam, 1e-9).unwrap()),
            ] {
                let scan = scan_eigenvalues(&BoundaryCondition::unperturbed(sub).unwrap(), &ScanOptions::new(lam)).unwrap();
                let expected: Vec<(f64, usize)> = closed.entries.iter().map(|e| (e.lambda, e.multiplicity)).collect();
                assert_roots(&scan, &expected, 1e-7);
            }
        }
    }

    #[test]
    fn robin_loop_shifts_spectrum_up() {
        // Y = ℂ² (two free ends joined by nothing): R = r·I is a Robin
        // condition at both ends of a unit interval
        let r = 1.0;
        let bc = BoundaryCondition::new(
            Subspace::<f64>::full(2),
            CMatrix::identity(2, 2).map(|z: Complex<f64>| z * r),
        )
        .unwrap();
        let scan = scan_eigenvalues(&bc, &ScanOptions::new(30.0)).unwrap();
        assert!(scan.regime_guaranteed);
        // Robin eigenvalues solve tan k = 2 r k / (k² - r²)
        for root in &scan.roots {
            let k: f64 = root.lambda.sqrt();
            let resid = (k * k - r * r) * k.sin() - 2.0 * r * k * k.cos();
            assert!(resid.abs() < 1e-7, "k = {k}, resid = {resid}");
        }
        assert!(scan.roots.len() >= 2);
        assert!(scan.roots[0].lambda > 0.0);
    }

    #[test]
    fn duality_on_loops_and_graphs() {
        let rep = duality_check(&Subspace::loop_alpha(Complex::new(0.3, -0.8)), PI * PI + 1.0, 1e-7).unwrap();
        assert!(rep.checked > 0 && rep.holds(), "{rep:?}");
        let g = Graph::generate(GraphKind::Star, 3).unwrap();
        let rep = duality_check(&ck_subspace::<f64>(&g).unwrap(), PI * PI + 1.0, 1e-7).unwrap();
        assert!(rep.holds(), "{rep:?}");
    }

    #[test]
    fn root_matching() {
        let found = vec![
            ScanRoot { lambda: 1.0, multiplicity: 1 },
            ScanRoot { lambda: 2.0, multiplicity: 2 },
            ScanRoot { lambda: 5.0, multiplicity: 1 },
        ];
        assert!(match_roots(&found, &[(1.0, 1), (2.0 + 1e-9, 2), (5.0, 1)], 1e-7).is_empty());
        let bad = match_roots(&found, &[(1.0, 1), (2.0, 1), (3.0, 1)], 1e-7);
        assert_eq!(bad.len(), 3);
        assert_eq!(bad[0].found_multiplicity, 2);
        assert_eq!(bad[1].found_lambda, None);
        assert_eq!(bad[2].expected_lambda, None);
    }

    #[test]
    fn rejects_bad_options() {
        let mut opts = ScanOptions::new(10.0);
        opts.grid_step = 0.0;
        assert!(matches!(scan_eigenvalues(&loop_bc(1.0, 0.0), &opts), Err(BcError::InvalidOption(_))));
    }

    #[test]
    fn json_shape() {
        let scan = scan_eigenvalues(&loop_bc(-1.0, 0.0), &ScanOptions::new(10.0)).unwrap();
        let v = serde_json::to_value(&scan).unwrap();
        assert_eq!(v["roots"][0]["multiplicity"], 2);
        assert_eq!(v["regime_guaranteed"], true);
        assert!(v.get("grid").is_none());
    }
}
