//! The coadjoint 2-form `ω_μ(ξ,ζ) = ∫ ∂_μξ·ζ`, Sobolev-weighted norms, and
//! the weak/strong transition report for `ω♭` across truncation levels.

use super::operators::{covariant_derivative, SpectralData, KERNEL_TOL};
use super::{CompactLieAlgebra, LoopModelError, TruncatedLoop};
use crate::linalg::{CMat, C64};
use nalgebra::DVector;
use serde::Serialize;

/// `∫ a·b` for real loops in Fourier coordinates:
/// `Σ_n Σ_comp a_{c,n} · conj(b_{c,n})`.
pub fn l2_pairing(a: &TruncatedLoop, b: &TruncatedLoop) -> C64 {
    assert_eq!(a.cutoff(), b.cutoff());
    a.coeffs()
        .iter()
        .zip(b.coeffs().iter())
        .map(|(x, y)| x * y.conj())
        .sum()
}

/// The coadjoint orbit form `ω((ξ)_O, (ζ)_O)|_μ = ∫ ∂_μ ξ · ζ`, assembled
/// antisymmetrically so `ω(ξ,ξ) = 0` holds identically.
pub fn coadjoint_form(
    alg: &CompactLieAlgebra,
    mu: &DVector<f64>,
    xi: &TruncatedLoop,
    zeta: &TruncatedLoop,
) -> Result<f64, LoopModelError> {
    xi.require_real()?;
    zeta.require_real()?;
    if xi.cutoff() != zeta.cutoff() {
        return Err(LoopModelError::CutoffMismatch(format!(
            "{} vs {}",
            xi.cutoff(),
            zeta.cutoff()
        )));
    }
    let del = covariant_derivative(alg, mu, xi.cutoff())?;
    let raw_xz = l2_pairing(&del.apply(xi), zeta).re;
    let raw_zx = l2_pairing(&del.apply(zeta), xi).re;
    Ok(0.5 * (raw_xz - raw_zx))
}

/// Sobolev weight rule `n ↦ (1 + (2πn)²)^{s/2}`; `s = 0` is the L² norm.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SobolevWeight {
    pub s: f64,
}

impl SobolevWeight {
    pub fn new(s: f64) -> Self {
        SobolevWeight { s }
    }

    pub fn weight(&self, n: i64) -> f64 {
        let w = std::f64::consts::TAU * n as f64;
        (1.0 + w * w).powf(self.s / 2.0)
    }
}

/// Gram matrix of the s-weighted inner product on the truncated coefficient
/// space (diagonal in the Fourier basis).
pub fn sobolev_gram(alg: &CompactLieAlgebra, cutoff: usize, s: f64) -> CMat {
    let w = SobolevWeight::new(s);
    let d = alg.dim();
    let total = (2 * cutoff + 1) * d;
    CMat::from_fn(total, total, |r, c| {
        if r == c {
            let n = (r / d) as i64 - cutoff as i64;
            let wn = w.weight(n);
            C64::new(wn * wn, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn sobolev_norm(xi: &TruncatedLoop, s: f64) -> f64 {
    let w = SobolevWeight::new(s);
    let mut acc = 0.0;
    for n in -(xi.cutoff() as i64)..=(xi.cutoff() as i64) {
        let wn = w.weight(n);
        acc += wn * wn * xi.mode(n).norm_squared();
    }
    acc.sqrt()
}

/// Extreme normalized singular values of `ω♭` at one truncation level.
#[derive(Clone, Debug, Serialize)]
pub struct TrendRow {
    pub cutoff: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub ratio: f64,
}

/// Trend of `ω♭: H_s → (H_s)*` as the truncation grows: per level, the
/// extreme singular values `|λ_{n,k}| / w_s(n)²` over the kernel complement.
///
/// At `s = 1/2` the band ratio stays bounded across levels (strong form on
/// the Sobolev-1/2 completion); at `s > 1/2` the smallest value decays like
/// `N^{1−2s}` (the form is only weakly symplectic).
#[derive(Clone, Debug, Serialize)]
pub struct TrendReport {
    pub s: f64,
    pub rows: Vec<TrendRow>,
}

pub fn weak_strong_report(
    alg: &CompactLieAlgebra,
    mu: &DVector<f64>,
    s: f64,
    cutoffs: &[usize],
) -> Result<TrendReport, LoopModelError> {
    let w = SobolevWeight::new(s);
    let mut rows = Vec::with_capacity(cutoffs.len());
    for &n in cutoffs {
        let spec = SpectralData::new(alg, mu, n)?;
        let mut sigma_min = f64::INFINITY;
        let mut sigma_max = 0.0f64;
        for (mode, _, l) in spec.eigenvalues() {
            if l.abs() <= KERNEL_TOL {
                continue;
            }
            let wn = w.weight(mode);
            let sigma = l.abs() / (wn * wn);
            sigma_min = sigma_min.min(sigma);
            sigma_max = sigma_max.max(sigma);
        }
        rows.push(TrendRow {
            cutoff: n,
            sigma_min,
            sigma_max,
            ratio: sigma_max / sigma_min,
        });
    }
    Ok(TrendReport { s, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVec;
    use crate::loopmodel::operators::{dmu, jmu};
    use crate::loopmodel::compact_lie_algebra;
    use crate::rootsys::LieType;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn su2() -> CompactLieAlgebra {
        compact_lie_algebra(LieType::A, 1).unwrap()
    }

    fn unit_x(alg: &CompactLieAlgebra) -> CVec {
        CVec::from_fn(alg.dim(), |a, _| {
            if a == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn cosine_sine_pairing() {
        // ξ = X cos(2πnt), ζ = X sin(2πnt) at μ = 0 → ω = −πn⟨X,X⟩.
        let alg = su2();
        let cutoff = 6;
        let x = unit_x(&alg);
        for mode in 1..=3i64 {
            let mut xi = TruncatedLoop::zeros(&alg, cutoff);
            let half = &x * C64::new(0.5, 0.0);
            xi.set_mode(mode, &half);
            xi.set_mode(-mode, &half);
            let mut zeta = TruncatedLoop::zeros(&alg, cutoff);
            let half_i = &x * C64::new(0.0, -0.5);
            zeta.set_mode(mode, &half_i);
            zeta.set_mode(-mode, &half_i.map(|z| z.conj()));
            let value =
                coadjoint_form(&alg, &DVector::zeros(3), &xi, &zeta).unwrap();
            let expected = -std::f64::consts::PI * mode as f64;
            assert!(
                (value - expected).abs() < 1e-12,
                "mode {mode}: {value} vs {expected}"
            );
        }
    }

    #[test]
    fn antisymmetry_is_exact() {
        let alg = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mu = alg.cartan_element(&[0.27]);
        let xi = TruncatedLoop::random_real(&alg, 5, 5, 1.0, &mut rng);
        let zeta = TruncatedLoop::random_real(&alg, 5, 5, 1.0, &mut rng);
        let a = coadjoint_form(&alg, &mu, &xi, &zeta).unwrap();
        let b = coadjoint_form(&alg, &mu, &zeta, &xi).unwrap();
        assert_eq!(a, -b);
        assert_eq!(coadjoint_form(&alg, &mu, &xi, &xi).unwrap(), 0.0);
    }

    #[test]
    fn compatibility_with_dmu_metric() {
        // ω(ξ, J_μ ζ) = ∫ D_μ ξ · ζ on the kernel complement.
        let alg = su2();
        let mu = alg.cartan_element(&[0.31]);
        let cutoff = 6;
        let j = jmu(&alg, &mu, cutoff).unwrap();
        let d = dmu(&alg, &mu, cutoff).unwrap();
        let spec = SpectralData::new(&alg, &mu, cutoff).unwrap();
        let complement = spec.operator("complement", |l| {
            if l.abs() <= KERNEL_TOL {
                C64::new(0.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            }
        });
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let xi_raw = TruncatedLoop::random_real(&alg, cutoff, cutoff, 1.0, &mut rng);
            let zeta_raw = TruncatedLoop::random_real(&alg, cutoff, cutoff, 1.0, &mut rng);
            let xi = complement.apply(&xi_raw);
            let zeta = complement.apply(&zeta_raw);
            let lhs = coadjoint_form(&alg, &mu, &xi, &j.apply(&zeta)).unwrap();
            let rhs = l2_pairing(&d.apply(&xi), &zeta).re;
            assert!(
                (lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()),
                "{lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn dmu_metric_positive_semidefinite_with_kernel() {
        let alg = su2();
        let mu = alg.cartan_element(&[0.31]);
        let cutoff = 5;
        let j = jmu(&alg, &mu, cutoff).unwrap();
        let spec = SpectralData::new(&alg, &mu, cutoff).unwrap();
        // g_μ(ξ,ξ) = ω(ξ, J_μξ) ≥ 0 with kernel exactly ker ∂_μ: check on
        // realified spectral basis vectors.
        for (mode, k, l) in spec.eigenvalues() {
            let u = spec.basis.column(k).into_owned();
            let mut xi = TruncatedLoop::zeros(&alg, cutoff);
            xi.set_mode(mode, &u);
            let minus = xi.mode(-mode) + u.map(|z| z.conj());
            xi.set_mode(-mode, &minus);
            let value = coadjoint_form(&alg, &mu, &xi, &j.apply(&xi)).unwrap();
            if l.abs() <= KERNEL_TOL {
                assert!(value.abs() < 1e-10, "kernel vector got g = {value}");
            } else {
                assert!(value > 1e-10, "complement vector got g = {value}");
            }
        }
    }

    #[test]
    fn sobolev_weight_basics() {
        let w = SobolevWeight::new(0.0);
        for n in -3..=3 {
            assert_eq!(w.weight(n), 1.0);
        }
        assert_eq!(SobolevWeight::new(1.7).weight(0), 1.0);
        // constant loop has norm |X| at every s
        let alg = su2();
        let mut xi = TruncatedLoop::zeros(&alg, 4);
        let x = unit_x(&alg) * C64::new(2.5, 0.0);
        xi.set_mode(0, &x);
        for s in [0.0, 0.5, 1.0, 2.3] {
            assert!((sobolev_norm(&xi, s) - 2.5).abs() < 1e-14);
        }
    }

    #[test]
    fn cosine_norm_convention() {
        // ‖X cos(2πnt)‖_s = (1+(2πn)²)^{s/2} |X| / √2.
        let alg = su2();
        let cutoff = 6;
        let x = unit_x(&alg);
        let mode = 2i64;
        let mut xi = TruncatedLoop::zeros(&alg, cutoff);
        let half = &x * C64::new(0.5, 0.0);
        xi.set_mode(mode, &half);
        xi.set_mode(-mode, &half);
        for s in [0.0, 0.5, 1.0] {
            let expected = SobolevWeight::new(s).weight(mode) / std::f64::consts::SQRT_2;
            assert!((sobolev_norm(&xi, s) - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn gram_matrix_is_diagonal_weighted() {
        let alg = su2();
        let g = sobolev_gram(&alg, 2, 0.5);
        let w = SobolevWeight::new(0.5);
        for n in -2i64..=2 {
            let idx = ((n + 2) as usize) * 3;
            let expect = w.weight(n) * w.weight(n);
            assert!((g[(idx, idx)].re - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn half_sobolev_band_is_flat_and_s1_decays() {
        let alg = su2();
        let mu = alg.cartan_element(&[0.3]);
        let cutoffs = [8usize, 16, 32, 64];
        let half = weak_strong_report(&alg, &mu, 0.5, &cutoffs).unwrap();
        for pair in half.rows.windows(2) {
            let rel = (pair[1].ratio / pair[0].ratio - 1.0).abs();
            assert!(rel < 0.2, "band ratio moved by {rel}");
        }
        let one = weak_strong_report(&alg, &mu, 1.0, &cutoffs).unwrap();
        for pair in one.rows.windows(2) {
            assert!(pair[1].sigma_min < pair[0].sigma_min);
            let rate = pair[0].sigma_min / pair[1].sigma_min;
            // N^{1−2s} = N^{−1}: doubling N should halve σ_min within ×2.
            assert!(rate > 1.0 && rate < 4.0, "rate {rate}");
        }
    }
}
