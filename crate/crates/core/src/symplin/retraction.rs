//! Polar retraction `A_t = R P^t` of the symplectic group onto the unitary
//! group `U_J = O(g) ∩ Sp(Ω)`, with `g = ΩJ` the reference metric.

use super::{compatible_metric, SymplecticForm, SymplinError};
use crate::linalg::{frob, spd_inv_sqrt, spd_sqrt, sym_map, RMat};

/// A sampled retraction path `t ↦ A_t = R P^t`.
#[derive(Clone, Debug)]
pub struct RetractionPath {
    pub base: RMat,
    pub grid: Vec<f64>,
    pub samples: Vec<RMat>,
    /// `‖A_tᵀ Ω A_t − Ω‖_F` per grid point.
    pub symplectic_residuals: Vec<f64>,
    /// `max_t ‖[J, A_t]‖_HS / ‖[J, A]‖_HS` (1 when the base commutator
    /// vanishes).
    pub commutator_ratio: f64,
}

impl RetractionPath {
    pub fn endpoint(&self) -> &RMat {
        self.samples.last().expect("non-empty grid")
    }
}

/// Polar-decompose `A = R P` with respect to `g = ΩJ` and sample `A_t = R P^t`
/// on the grid. The input must be symplectic to `1e−10`; every sample is
/// verified symplectic to `1e−9`, and `A_0 = R` additionally `g`-orthogonal.
pub fn polar_retraction(
    a: &RMat,
    omega: &SymplecticForm,
    j: &RMat,
    t_grid: &[f64],
) -> Result<RetractionPath, SymplinError> {
    let n = omega.dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(SymplinError::DimensionMismatch(format!(
            "A is {}×{}, form dim {}",
            a.nrows(),
            a.ncols(),
            n
        )));
    }
    let g = compatible_metric(omega, j)?;
    let symplectic_defect = frob(&(a.transpose() * omega.matrix() * a - omega.matrix()));
    if symplectic_defect > 1e-10 * (1.0 + frob(omega.matrix())) {
        return Err(SymplinError::NotSymplectic(symplectic_defect));
    }

    let s = spd_sqrt(&g);
    let si = spd_inv_sqrt(&g);
    // B = S A S⁻¹; BᵀB is the congruent symmetric form of the g-adjoint
    // product A*A, so P^t = S⁻¹ (BᵀB)^{t/2} S.
    let b = &s * a * &si;
    let btb = b.transpose() * &b;
    let p_power = |t: f64| -> RMat { &si * sym_map(&btb, |x| x.max(0.0).powf(t / 2.0)) * &s };
    let r = a * p_power(-1.0);

    let base_comm = frob(&(&s * (j * a - a * j) * &si));
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut symplectic_residuals = Vec::with_capacity(t_grid.len());
    let mut worst_ratio: f64 = if base_comm > 0.0 { 0.0 } else { 1.0 };
    for &t in t_grid {
        let a_t = &r * p_power(t);
        let defect = frob(&(a_t.transpose() * omega.matrix() * &a_t - omega.matrix()));
        if defect > 1e-9 * (1.0 + frob(omega.matrix())) {
            return Err(SymplinError::NotSymplectic(defect));
        }
        if base_comm > 0.0 {
            let c = frob(&(&s * (j * &a_t - &a_t * j) * &si));
            worst_ratio = worst_ratio.max(c / base_comm);
        }
        samples.push(a_t);
        symplectic_residuals.push(defect);
    }

    // A_0 = R must preserve both structures.
    if let Some(first) = t_grid.iter().position(|&t| t == 0.0) {
        let a0 = &samples[first];
        let ortho = frob(&(a0.transpose() * &g * a0 - &g));
        if ortho > 1e-9 * (1.0 + frob(&g)) {
            return Err(SymplinError::NotSymplectic(ortho));
        }
    }

    Ok(RetractionPath {
        base: a.clone(),
        grid: t_grid.to_vec(),
        samples,
        symplectic_residuals,
        commutator_ratio: worst_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplin::{random_symplectic, standard_complex_structure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid11() -> Vec<f64> {
        (0..11).map(|k| k as f64 / 10.0).collect()
    }

    #[test]
    fn unitary_input_gives_constant_path() {
        // exp(θJ) on R² is both orthogonal and symplectic.
        let omega = SymplecticForm::standard(2);
        let j = standard_complex_structure(2);
        let a = (0.7 * &j).exp();
        let path = polar_retraction(&a, &omega, &j, &grid11()).unwrap();
        for sample in &path.samples {
            assert!(frob(&(sample - &a)) < 1e-12);
        }
    }

    #[test]
    fn diagonal_example() {
        // A = diag(2, 1/2): R = I and A_t = diag(2^t, 2^{-t}).
        let omega = SymplecticForm::standard(2);
        let j = standard_complex_structure(2);
        let a = RMat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let path = polar_retraction(&a, &omega, &j, &grid11()).unwrap();
        for (t, sample) in path.grid.iter().zip(&path.samples) {
            let expected =
                RMat::from_row_slice(2, 2, &[2f64.powf(*t), 0.0, 0.0, 2f64.powf(-*t)]);
            assert!(frob(&(sample - &expected)) < 1e-12, "t = {t}");
        }
        assert!(frob(&(&path.samples[0] - RMat::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn endpoint_reproduces_input() {
        let omega = SymplecticForm::standard(8);
        let j = standard_complex_structure(8);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_symplectic(8, 0.4, &mut rng);
        let path = polar_retraction(&a, &omega, &j, &grid11()).unwrap();
        assert!(frob(&(path.endpoint() - &a)) < 1e-12 * (1.0 + frob(&a)));
    }

    #[test]
    fn retraction_is_idempotent() {
        let omega = SymplecticForm::standard(6);
        let j = standard_complex_structure(6);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_symplectic(6, 0.5, &mut rng);
        let path = polar_retraction(&a, &omega, &j, &grid11()).unwrap();
        let a0 = path.samples[0].clone();
        let again = polar_retraction(&a0, &omega, &j, &grid11()).unwrap();
        for sample in &again.samples {
            assert!(frob(&(sample - &a0)) < 1e-10);
        }
    }

    #[test]
    fn non_symplectic_input_rejected() {
        let omega = SymplecticForm::standard(2);
        let j = standard_complex_structure(2);
        let a = RMat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!(matches!(
            polar_retraction(&a, &omega, &j, &grid11()),
            Err(SymplinError::NotSymplectic(_))
        ));
    }
}
