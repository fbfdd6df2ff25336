//! Symplectic linear algebra: compatible complex structures, the restricted
//! norm, and the Hilbert–Schmidt equivalence identity, all with respect to a
//! documented reference metric `g = ΩJ`.

mod interpolate;
mod retraction;

pub use interpolate::{interpolate_cs, metric_isometry, InterpolationStep, MetricPair};
pub use retraction::{polar_retraction, RetractionPath};

use crate::linalg::{frob, max_abs, op_norm, spd_inv_sqrt, spd_sqrt, sym_eigen, RMat};
use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymplinError {
    #[error("matrix is not a complex structure: ‖J² + I‖ = {0:.3e}")]
    NotComplexStructure(f64),
    #[error("form is not antisymmetric or not invertible: {0}")]
    BadForm(String),
    #[error("matrix is not symplectic: ‖AᵀΩA − Ω‖ = {0:.3e}")]
    NotSymplectic(f64),
    #[error("operator has non-positive spectrum (min eigenvalue {0:.3e})")]
    NonPositiveSpectrum(f64),
    #[error("interpolation spectrum off the imaginary axis: {0}")]
    SpectrumViolation(String),
    #[error("complex structure is not ω-compatible: {0}")]
    NotCompatible(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A strongly symplectic bilinear form `ω(v,w) = vᵀΩw`.
#[derive(Clone, Debug)]
pub struct SymplecticForm {
    matrix: RMat,
}

impl SymplecticForm {
    pub fn new(matrix: RMat) -> Result<Self, SymplinError> {
        let n = matrix.nrows();
        if n != matrix.ncols() || n % 2 != 0 || n == 0 {
            return Err(SymplinError::BadForm(format!(
                "expected even square dimension, got {}×{}",
                n,
                matrix.ncols()
            )));
        }
        let asym = frob(&(&matrix + matrix.transpose()));
        if asym > 1e-12 * (1.0 + frob(&matrix)) {
            return Err(SymplinError::BadForm(format!(
                "antisymmetry defect {asym:.3e}"
            )));
        }
        let min_sv = matrix.clone().singular_values().min();
        if min_sv <= 1e-12 {
            return Err(SymplinError::BadForm(format!(
                "nearly singular (min singular value {min_sv:.3e})"
            )));
        }
        Ok(SymplecticForm { matrix })
    }

    /// The standard form on `R^{2m}`: `ω(e_{2k}, e_{2k+1}) = 1`.
    pub fn standard(dim: usize) -> Self {
        assert!(dim % 2 == 0 && dim > 0);
        let mut m = RMat::zeros(dim, dim);
        for k in 0..dim / 2 {
            m[(2 * k, 2 * k + 1)] = 1.0;
            m[(2 * k + 1, 2 * k)] = -1.0;
        }
        SymplecticForm { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn eval(&self, v: &DVector<f64>, w: &DVector<f64>) -> f64 {
        (v.transpose() * &self.matrix * w)[(0, 0)]
    }
}

/// The standard complex structure paired with [`SymplecticForm::standard`]:
/// `J e_{2k} = e_{2k+1}`, `J e_{2k+1} = −e_{2k}`, so that `ΩJ = I`.
pub fn standard_complex_structure(dim: usize) -> RMat {
    assert!(dim % 2 == 0 && dim > 0);
    let mut j = RMat::zeros(dim, dim);
    for k in 0..dim / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

pub(crate) fn check_square_root_of_minus_one(j: &RMat) -> Result<(), SymplinError> {
    let n = j.nrows();
    let defect = max_abs(&(j * j + RMat::identity(n, n)));
    let gate = 1e-12 * n as f64 * (1.0 + max_abs(j) * max_abs(j));
    if defect > gate {
        return Err(SymplinError::NotComplexStructure(defect));
    }
    Ok(())
}

/// Result of the compatibility test `g(v,w) = ω(v,Jw)`.
#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub compatible: bool,
    /// The bilinear form `ΩJ`, whatever its signature.
    pub metric: RMat,
    pub symmetry_defect: f64,
    pub min_eigenvalue: f64,
}

/// Check whether `J` is an `ω`-compatible complex structure and return the
/// candidate metric `g = ΩJ`.
pub fn check_compatible(
    omega: &SymplecticForm,
    j: &RMat,
) -> Result<CompatibilityReport, SymplinError> {
    if j.nrows() != omega.dim() || j.ncols() != omega.dim() {
        return Err(SymplinError::DimensionMismatch(format!(
            "J is {}×{}, form dim {}",
            j.nrows(),
            j.ncols(),
            omega.dim()
        )));
    }
    check_square_root_of_minus_one(j)?;
    let metric = omega.matrix() * j;
    let symmetry_defect = frob(&(&metric - metric.transpose()));
    let min_eigenvalue = sym_eigen(&metric).0.min();
    let compatible =
        symmetry_defect <= 1e-10 * (1.0 + frob(&metric)) && min_eigenvalue > 0.0;
    Ok(CompatibilityReport {
        compatible,
        metric,
        symmetry_defect,
        min_eigenvalue,
    })
}

pub(crate) fn compatible_metric(
    omega: &SymplecticForm,
    j: &RMat,
) -> Result<RMat, SymplinError> {
    let report = check_compatible(omega, j)?;
    if !report.compatible {
        return Err(SymplinError::NotCompatible(format!(
            "symmetry defect {:.3e}, min eigenvalue {:.3e}",
            report.symmetry_defect, report.min_eigenvalue
        )));
    }
    Ok(report.metric)
}

/// The three pieces of the restricted norm `‖A‖_J = ‖A‖ + ‖[J,A]‖_HS`,
/// measured with respect to `reference_metric`.
#[derive(Clone, Debug)]
pub struct RestrictedNorm {
    pub op_norm: f64,
    pub hs_commutator: f64,
    pub total: f64,
}

/// Operator norm plus Hilbert–Schmidt norm of `[J,A]`, both in the geometry
/// of `reference_metric` (a symmetric positive-definite matrix).
pub fn restricted_norm(a: &RMat, j: &RMat, reference_metric: &RMat) -> RestrictedNorm {
    let s = spd_sqrt(reference_metric);
    let si = spd_inv_sqrt(reference_metric);
    let conj = |m: &RMat| &s * m * &si;
    let op = op_norm(&conj(a));
    let comm = j * a - a * j;
    let hs = frob(&conj(&comm));
    RestrictedNorm {
        op_norm: op,
        hs_commutator: hs,
        total: op + hs,
    }
}

/// Both routes of the identity `g₁♯ ∘ g₀♭ = J₁⁻¹ ∘ J₀` for compatible pairs.
#[derive(Clone, Debug)]
pub struct HsEquivalenceReport {
    pub lhs: RMat,
    pub rhs: RMat,
    pub residual: f64,
}

/// Evaluate `g₁⁻¹g₀` against `J₁⁻¹J₀ = −J₁J₀` and report the Frobenius
/// residual; in finite dimensions the two sides agree identically.
pub fn hs_equivalence_identity(
    omega: &SymplecticForm,
    j0: &RMat,
    j1: &RMat,
) -> Result<HsEquivalenceReport, SymplinError> {
    let g0 = compatible_metric(omega, j0)?;
    let g1 = compatible_metric(omega, j1)?;
    let lhs = g1
        .clone()
        .lu()
        .solve(&g0)
        .ok_or_else(|| SymplinError::NonPositiveSpectrum(0.0))?;
    let rhs = -(j1 * j0);
    let residual = frob(&(&lhs - &rhs));
    Ok(HsEquivalenceReport { lhs, rhs, residual })
}

/// Random symmetric matrix with entries of the given scale.
pub fn random_symmetric(dim: usize, scale: f64, rng: &mut ChaCha8Rng) -> RMat {
    let mut m = RMat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..=i {
            let x = rng.gen_range(-scale..scale);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// Random element of the symplectic group for the standard form, built as
/// `exp(X)` with `ΩX` symmetric.
pub fn random_symplectic(dim: usize, scale: f64, rng: &mut ChaCha8Rng) -> RMat {
    let omega = SymplecticForm::standard(dim);
    let sym = random_symmetric(dim, scale, rng);
    // X = Ω⁻¹ S; for the standard form Ω⁻¹ = −Ω = Ωᵀ.
    let x = omega.matrix().transpose() * sym;
    x.exp()
}

/// Random `ω`-compatible complex structure for the standard form, as a
/// symplectic conjugate of the standard one.
pub fn random_compatible_structure(dim: usize, scale: f64, rng: &mut ChaCha8Rng) -> RMat {
    let p = random_symplectic(dim, scale, rng);
    let pinv = p.clone().try_inverse().expect("symplectic matrices are invertible");
    &p * standard_complex_structure(dim) * pinv
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn standard_pair_gives_identity_metric() {
        let omega = SymplecticForm::standard(2);
        let j = standard_complex_structure(2);
        let report = check_compatible(&omega, &j).unwrap();
        assert!(report.compatible);
        assert!(frob(&(&report.metric - RMat::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn rescaled_structure_metric() {
        let omega = SymplecticForm::standard(2);
        let j = RMat::from_row_slice(2, 2, &[0.0, -2.0, 0.5, 0.0]);
        let report = check_compatible(&omega, &j).unwrap();
        assert!(report.compatible);
        let expected = RMat::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 2.0]);
        assert!(frob(&(&report.metric - &expected)) < 1e-15);
    }

    #[test]
    fn reversed_structure_is_incompatible() {
        let omega = SymplecticForm::standard(2);
        let j = -standard_complex_structure(2);
        let report = check_compatible(&omega, &j).unwrap();
        assert!(!report.compatible);
        assert!(report.min_eigenvalue < 0.0);
    }

    #[test]
    fn non_complex_structure_rejected() {
        let omega = SymplecticForm::standard(2);
        let j = RMat::identity(2, 2);
        assert!(matches!(
            check_compatible(&omega, &j),
            Err(SymplinError::NotComplexStructure(_))
        ));
    }

    #[test]
    fn restricted_norm_of_j_itself() {
        let dim = 6;
        let j = standard_complex_structure(dim);
        let g = RMat::identity(dim, dim);
        let n = restricted_norm(&j, &j, &g);
        assert!((n.op_norm - 1.0).abs() < 1e-12);
        assert!(n.hs_commutator < 1e-14);
        assert!((n.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn restricted_norm_commuting_operator() {
        // A = aI + bJ commutes with J.
        let dim = 4;
        let j = standard_complex_structure(dim);
        let a = RMat::identity(dim, dim) * 0.7 + &j * 1.3;
        let n = restricted_norm(&a, &j, &RMat::identity(dim, dim));
        assert!(n.hs_commutator < 1e-13);
    }

    #[test]
    fn restricted_norm_matches_two_term_recomputation() {
        let dim = 6;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_symmetric(dim, 1.0, &mut rng);
        let j = random_compatible_structure(dim, 0.3, &mut rng);
        let g = compatible_metric(&SymplecticForm::standard(dim), &j).unwrap();
        let n = restricted_norm(&a, &j, &g);

        // Independent evaluation: singular values via eigenvalues of MᵀM,
        // Frobenius via the trace.
        let s = spd_sqrt(&g);
        let si = spd_inv_sqrt(&g);
        let m = &s * &a * &si;
        let op = sym_eigen(&(m.transpose() * &m)).0.max().sqrt();
        let comm = &s * (&j * &a - &a * &j) * &si;
        let hs = (comm.transpose() * &comm).trace().sqrt();
        assert!((n.total - (op + hs)).abs() < 1e-12 * (1.0 + n.total));
    }

    #[test]
    fn hs_identity_trivial_pair() {
        let omega = SymplecticForm::standard(4);
        let j = standard_complex_structure(4);
        let report = hs_equivalence_identity(&omega, &j, &j).unwrap();
        assert!(frob(&(&report.lhs - RMat::identity(4, 4))) < 1e-12);
        assert!(report.residual < 1e-12);
    }

    #[test]
    fn hs_identity_random_r8() {
        let omega = SymplecticForm::standard(8);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let j0 = random_compatible_structure(8, 0.4, &mut rng);
        let j1 = random_compatible_structure(8, 0.4, &mut rng);
        let report = hs_equivalence_identity(&omega, &j0, &j1).unwrap();
        assert!(report.residual < 1e-10, "residual {}", report.residual);
    }

    #[test]
    fn random_symplectic_preserves_form() {
        let omega = SymplecticForm::standard(10);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let a = random_symplectic(10, 0.3, &mut rng);
            let defect = frob(&(a.transpose() * omega.matrix() * &a - omega.matrix()));
            assert!(defect < 1e-11, "symplectic defect {defect}");
        }
    }
}
