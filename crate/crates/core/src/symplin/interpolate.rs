//! Metric isometries and the interpolation `J_t = K_t(−K_t²)^{−1/2}` between
//! compatible complex structures.
//!
//! Matrix square roots are taken by eigendecomposition after symmetrizing
//! with a metric congruence; the branch is fixed to the positive spectrum.

use super::{compatible_metric, SymplecticForm, SymplinError};
use crate::linalg::{frob, spd_inv_sqrt, spd_sqrt, sym_eigen, sym_map, RMat};

/// Two Riemannian metrics on the same space, as symmetric positive-definite
/// matrices.
#[derive(Clone, Debug)]
pub struct MetricPair {
    pub g0: RMat,
    pub g1: RMat,
}

impl MetricPair {
    pub fn new(g0: RMat, g1: RMat) -> Result<Self, SymplinError> {
        for (name, g) in [("g0", &g0), ("g1", &g1)] {
            let min = sym_eigen(g).0.min();
            if min <= 0.0 {
                return Err(SymplinError::NonPositiveSpectrum(min));
            }
            let asym = frob(&(g - g.transpose()));
            if asym > 1e-12 * (1.0 + frob(g)) {
                return Err(SymplinError::BadForm(format!(
                    "{name} not symmetric (defect {asym:.3e})"
                )));
            }
        }
        Ok(MetricPair { g0, g1 })
    }
}

/// The isometry `A = (g₁♯ g₀♭)^{1/2}` with `g₁(Av, Aw) = g₀(v, w)`.
///
/// `C = g₁⁻¹g₀` is symmetric with respect to `g₁`; its spectrum is verified
/// to be positive before the square root is taken.
pub fn metric_isometry(pair: &MetricPair) -> Result<RMat, SymplinError> {
    let s1 = spd_sqrt(&pair.g1);
    let s1i = spd_inv_sqrt(&pair.g1);
    // Congruent symmetric form of C = g₁⁻¹ g₀: M = S₁⁻¹ g₀ S₁⁻¹.
    let m = &s1i * &pair.g0 * &s1i;
    let (vals, _) = sym_eigen(&m);
    let min = vals.min();
    if min <= 0.0 {
        return Err(SymplinError::NonPositiveSpectrum(min));
    }
    let a = &s1i * sym_map(&m, f64::sqrt) * &s1;
    Ok(a)
}

/// One grid point of the interpolation, with its verification data.
#[derive(Clone, Debug)]
pub struct InterpolationStep {
    pub t: f64,
    pub j: RMat,
    /// Largest `|Re λ|` over the spectrum of `K_t`, before scaling.
    pub max_real_part: f64,
    /// Smallest `|λ|` over the spectrum of `K_t`.
    pub min_modulus: f64,
    pub square_defect: f64,
}

/// Interpolate between two `ω`-compatible complex structures along
/// `K_t = (1−t)J₀ + tJ₁`, verifying at every grid point that the spectrum of
/// `K_t` is purely imaginary and bounded away from zero.
///
/// The imaginary-axis gate is scaled: `|Re λ| ≤ 1e−10·‖K_t‖`.
pub fn interpolate_cs(
    omega: &SymplecticForm,
    j0: &RMat,
    j1: &RMat,
    t_grid: &[f64],
) -> Result<Vec<InterpolationStep>, SymplinError> {
    let g0 = compatible_metric(omega, j0)?;
    let g1 = compatible_metric(omega, j1)?;
    let n = omega.dim();
    let omega_inv = omega
        .matrix()
        .clone()
        .try_inverse()
        .ok_or_else(|| SymplinError::BadForm("singular form".into()))?;

    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let k = (1.0 - t) * j0 + t * j1;
        let g_t = (1.0 - t) * &g0 + t * &g1;
        let min_metric = sym_eigen(&g_t).0.min();
        if min_metric <= 0.0 {
            return Err(SymplinError::NonPositiveSpectrum(min_metric));
        }

        // Direct spectral verification on K_t itself.
        let spectrum = k.clone().complex_eigenvalues();
        let k_norm = crate::linalg::op_norm(&k);
        let max_real_part = spectrum.iter().fold(0.0f64, |a, z| a.max(z.re.abs()));
        let min_modulus = spectrum.iter().fold(f64::INFINITY, |a, z| a.min(z.norm()));
        if max_real_part > 1e-10 * k_norm.max(1.0) || min_modulus <= 1e-10 {
            return Err(SymplinError::SpectrumViolation(format!(
                "t = {t}: max |Re λ| = {max_real_part:.3e}, min |λ| = {min_modulus:.3e}"
            )));
        }

        // Congruence to an antisymmetric matrix: S K_t S⁻¹ = S Ω⁻¹ S with
        // S = G_t^{1/2}; then J_t = S⁻¹ A(−A²)^{−1/2} S.
        let s = spd_sqrt(&g_t);
        let si = spd_inv_sqrt(&g_t);
        let mut anti = &s * &omega_inv * &s;
        anti = (&anti - anti.transpose()) * 0.5;
        let minus_sq = -(&anti * &anti);
        let j_t = &si * (&anti * sym_map(&minus_sq, |x| 1.0 / x.max(f64::MIN_POSITIVE).sqrt())) * &s;

        let square_defect = frob(&(&j_t * &j_t + RMat::identity(n, n)));
        if square_defect > 1e-10 * n as f64 {
            return Err(SymplinError::SpectrumViolation(format!(
                "t = {t}: J_t² defect {square_defect:.3e}"
            )));
        }
        compatible_metric(omega, &j_t)?;
        out.push(InterpolationStep {
            t,
            j: j_t,
            max_real_part,
            min_modulus,
            square_defect,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::symplin::{random_compatible_structure, standard_complex_structure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn isometry_identity_case() {
        let g = RMat::identity(3, 3);
        let pair = MetricPair::new(g.clone(), g).unwrap();
        let a = metric_isometry(&pair).unwrap();
        assert!(frob(&(&a - RMat::identity(3, 3))) < 1e-13);
    }

    #[test]
    fn isometry_diagonal_case() {
        // g0 = I, g1 = diag(4,1): C = diag(1/4, 1), A = diag(1/2, 1).
        let pair = MetricPair::new(
            RMat::identity(2, 2),
            RMat::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]),
        )
        .unwrap();
        let a = metric_isometry(&pair).unwrap();
        let expected = RMat::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 1.0]);
        assert!(frob(&(&a - &expected)) < 1e-13);
    }

    #[test]
    fn isometry_intertwines_metrics() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let base = crate::symplin::random_symmetric(6, 0.4, &mut rng);
        let g0 = &base * base.transpose() + RMat::identity(6, 6);
        let base = crate::symplin::random_symmetric(6, 0.4, &mut rng);
        let g1 = &base * base.transpose() + RMat::identity(6, 6) * 0.5;
        let pair = MetricPair::new(g0.clone(), g1.clone()).unwrap();
        let a = metric_isometry(&pair).unwrap();
        let defect = frob(&(a.transpose() * &g1 * &a - &g0));
        assert!(defect < 1e-10, "isometry defect {defect}");
    }

    #[test]
    fn c_is_g1_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let base = crate::symplin::random_symmetric(4, 0.3, &mut rng);
        let g0 = &base * base.transpose() + RMat::identity(4, 4);
        let base = crate::symplin::random_symmetric(4, 0.3, &mut rng);
        let g1 = &base * base.transpose() + RMat::identity(4, 4);
        let c = g1.clone().lu().solve(&g0).unwrap();
        let defect = frob(&(c.transpose() * &g1 - &g1 * &c));
        assert!(defect < 1e-12 * (1.0 + frob(&g1)), "defect {defect}");
    }

    #[test]
    fn constant_interpolation() {
        let omega = SymplecticForm::standard(4);
        let j = standard_complex_structure(4);
        let steps = interpolate_cs(&omega, &j, &j, &grid(5)).unwrap();
        for step in steps {
            assert!(frob(&(&step.j - &j)) < 1e-12);
        }
    }

    #[test]
    fn hand_computed_midpoint() {
        // J1 = S J0 S⁻¹ with S = diag(2, 1/2): K_{1/2} = [[0,-5/2],[5/8,0]],
        // −K² = (25/16) I, J_{1/2} = [[0,-2],[1/2,0]].
        let omega = SymplecticForm::standard(2);
        let j0 = standard_complex_structure(2);
        let j1 = RMat::from_row_slice(2, 2, &[0.0, -4.0, 0.25, 0.0]);
        let steps = interpolate_cs(&omega, &j0, &j1, &[0.0, 0.5, 1.0]).unwrap();
        let expected = RMat::from_row_slice(2, 2, &[0.0, -2.0, 0.5, 0.0]);
        assert!(frob(&(&steps[1].j - &expected)) < 1e-12);
        // endpoints reproduce the inputs
        assert!(frob(&(&steps[0].j - &j0)) < 1e-10);
        assert!(frob(&(&steps[2].j - &j1)) < 1e-10);
    }

    #[test]
    fn midpoint_k_matrix_matches_hand_value() {
        let j0 = standard_complex_structure(2);
        let j1 = RMat::from_row_slice(2, 2, &[0.0, -4.0, 0.25, 0.0]);
        let k = 0.5 * &j0 + 0.5 * &j1;
        let expected = RMat::from_row_slice(2, 2, &[0.0, -2.5, 0.625, 0.0]);
        assert!(frob(&(&k - &expected)) < 1e-15);
        let minus_sq = -(&k * &k);
        assert!(frob(&(&minus_sq - RMat::identity(2, 2) * (25.0 / 16.0))) < 1e-14);
    }

    #[test]
    fn random_pairs_stay_compatible_on_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for &dim in &[2usize, 6, 12] {
            let omega = SymplecticForm::standard(dim);
            let j0 = random_compatible_structure(dim, 0.35, &mut rng);
            let j1 = random_compatible_structure(dim, 0.35, &mut rng);
            let steps = interpolate_cs(&omega, &j0, &j1, &grid(11)).unwrap();
            assert!(frob(&(&steps[0].j - &j0)) < 1e-10);
            assert!(frob(&(&steps[10].j - &j1)) < 1e-10);
            // grid continuity
            for w in steps.windows(2) {
                let step_gap = frob(&(&w[1].j - &w[0].j));
                assert!(step_gap < 2.0, "J_t jumped by {step_gap}");
            }
        }
    }

    #[test]
    fn series_cross_check_small_dimension() {
        // (−K²)^{−1/2} − I = R·f(R) with R = I + K², f(x) = (1/x)(1/√(1−x) − 1),
        // evaluated as a power series. Valid when ‖R‖ < 1, so take J1 near J0.
        let omega = SymplecticForm::standard(4);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let j0 = standard_complex_structure(4);
        let j1 = random_compatible_structure(4, 0.05, &mut rng);
        let k = 0.5 * &j0 + 0.5 * &j1;

        let g = 0.5 * RMat::identity(4, 4) + 0.5 * (omega.matrix() * &j1);
        let s = spd_sqrt(&g);
        let si = spd_inv_sqrt(&g);
        let anti = &s * omega.matrix().clone().try_inverse().unwrap() * &s;
        let minus_sq = -(&anti * &anti);
        let lhs = &si * sym_map(&minus_sq, |x| 1.0 / x.sqrt()) * &s - RMat::identity(4, 4);

        let r = RMat::identity(4, 4) + &k * &k;
        assert!(max_abs(&r) < 0.5, "series hypothesis violated");
        // f(x) = Σ_{m≥0} c_{m+1} x^m with c_m the coefficients of (1−x)^{−1/2}.
        let mut series = RMat::zeros(4, 4);
        let mut power = RMat::identity(4, 4);
        let mut coeff = 1.0; // binom(2m, m)/4^m at m = 0
        for m in 0..60 {
            let next_coeff = coeff * (2.0 * m as f64 + 1.0) / (2.0 * m as f64 + 2.0);
            series += &power * next_coeff;
            power = &power * &r;
            coeff = next_coeff;
        }
        let rhs = &r * series;
        assert!(
            frob(&(&lhs - &rhs)) < 1e-12,
            "series route disagrees: {}",
            frob(&(&lhs - &rhs))
        );
    }

    #[test]
    fn incompatible_inputs_rejected() {
        let omega = SymplecticForm::standard(2);
        let j0 = standard_complex_structure(2);
        let j1 = -standard_complex_structure(2);
        assert!(interpolate_cs(&omega, &j0, &j1, &[0.5]).is_err());
    }
}
