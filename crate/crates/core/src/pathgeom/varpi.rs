//! Quadrature evaluation of the 2-form
//! `ϖ = ½∫(ev_t*θ^R · (∂/∂t)ev_t*θ^R)∂t + ½ ev₀*θ^L · ev₁*θ^L`,
//! its κ-twisted variant, and the Cartan 3-form.

use super::{Automorphism, DiscretePath, MatrixGroup, PathGeomError, TangentVariation};
use crate::linalg::{CMat, C64};

/// Sampled time derivative: central differences inside, second-order
/// one-sided stencils at the ends.
pub(crate) fn time_derivative(samples: &[CMat], intervals: usize) -> Vec<CMat> {
    let m = intervals as f64;
    let last = intervals;
    (0..=last)
        .map(|j| {
            if j == 0 {
                (samples[0].clone() * C64::new(-3.0, 0.0) + &samples[1] * C64::new(4.0, 0.0)
                    - &samples[2])
                    * C64::new(m / 2.0, 0.0)
            } else if j == last {
                (samples[last].clone() * C64::new(3.0, 0.0)
                    - &samples[last - 1] * C64::new(4.0, 0.0)
                    + &samples[last - 2])
                    * C64::new(m / 2.0, 0.0)
            } else {
                (samples[j + 1].clone() - &samples[j - 1]) * C64::new(m / 2.0, 0.0)
            }
        })
        .collect()
}

fn trapezoid(values: &[f64]) -> f64 {
    let m = values.len() - 1;
    let mut acc = 0.5 * (values[0] + values[m]);
    for v in &values[1..m] {
        acc += v;
    }
    acc / m as f64
}

fn check_grids(
    path: &DiscretePath,
    v: &TangentVariation,
    w: &TangentVariation,
) -> Result<(), PathGeomError> {
    if v.intervals() != path.intervals() || w.intervals() != path.intervals() {
        return Err(PathGeomError::GridMismatch(format!(
            "path has {} intervals, variations have {} and {}",
            path.intervals(),
            v.intervals(),
            w.intervals()
        )));
    }
    Ok(())
}

/// Evaluate `ϖ(v, w)` on right-trivialized variations: the integral term is
/// `½∫(v·ẇ − w·v̇)` by the trapezoid rule with difference stencils, and the
/// boundary term pairs `θ^L(v)|₀ = Ad_{γ₀⁻¹}v₀` with `θ^L(w)|₁`.
pub fn varpi_eval(
    path: &DiscretePath,
    v: &TangentVariation,
    w: &TangentVariation,
) -> Result<f64, PathGeomError> {
    varpi_twisted(path, &Automorphism::Identity, v, w)
}

/// The κ-twisted form: same integral term, boundary term
/// `½ ev₀*κ(θ^L) · ev₁*θ^L`. With `κ = id` this is `ϖ` exactly.
pub fn varpi_twisted(
    path: &DiscretePath,
    kappa: &Automorphism,
    v: &TangentVariation,
    w: &TangentVariation,
) -> Result<f64, PathGeomError> {
    check_grids(path, v, w)?;
    let group = path.group();
    let intervals = path.intervals();
    let v_dot = time_derivative(v.samples(), intervals);
    let w_dot = time_derivative(w.samples(), intervals);
    let integrand: Vec<f64> = (0..=intervals)
        .map(|j| {
            0.5 * (group.inner(v.sample(j), &w_dot[j]) - group.inner(w.sample(j), &v_dot[j]))
        })
        .collect();
    let integral = trapezoid(&integrand);

    let left = |x: &TangentVariation, j: usize| -> CMat {
        let g = path.sample(j);
        g.adjoint() * x.sample(j) * g
    };
    let v0 = kappa.apply_algebra(&left(v, 0));
    let w0 = kappa.apply_algebra(&left(w, 0));
    let v1 = left(v, intervals);
    let w1 = left(w, intervals);
    let boundary = 0.5 * (group.inner(&v0, &w1) - group.inner(&w0, &v1));
    Ok(integral + boundary)
}

/// Coefficient in `η(u,v,w) = c·⟨u,[v,w]⟩`, frozen from expanding
/// `(1/12)θ^L·[θ^L,θ^L]` over the six permutations: each signed term equals
/// `⟨u,[v,w]⟩`, so `c = 6/12`. [`eta_triple_expansion`] recomputes it.
pub const CARTAN_ETA_COEFF: f64 = 0.5;

/// The bi-invariant Cartan 3-form on left-trivialized tangent vectors.
pub fn cartan_eta(group: &MatrixGroup, u: &CMat, v: &CMat, w: &CMat) -> f64 {
    CARTAN_ETA_COEFF * group.inner(u, &group.bracket(v, w))
}

/// Direct expansion of `(1/12)θ^L·[θ^L,θ^L]` on constant fields: the
/// alternating sum over all argument permutations. Kept as the one-time
/// oracle fixing [`CARTAN_ETA_COEFF`].
pub fn eta_triple_expansion(group: &MatrixGroup, u: &CMat, v: &CMat, w: &CMat) -> f64 {
    let args = [u, v, w];
    // (perm, sign)
    let perms: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([1, 0, 2], -1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
    ];
    let mut acc = 0.0;
    for (p, sign) in perms {
        acc += sign * group.inner(args[p[0]], &group.bracket(args[p[1]], args[p[2]]));
    }
    acc / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathgeom::{PathFamily, VariationFamily};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn su2() -> MatrixGroup {
        MatrixGroup::special_unitary(2).unwrap()
    }

    #[test]
    fn antisymmetry_is_exact() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let path = PathFamily::random(&g, 3, 0.4, &mut rng).sample(50);
        let v = VariationFamily::random(&g, 3, 0.5, &mut rng).sample(50);
        let w = VariationFamily::random(&g, 3, 0.5, &mut rng).sample(50);
        let a = varpi_eval(&path, &v, &w).unwrap();
        let b = varpi_eval(&path, &w, &v).unwrap();
        assert_eq!(a, -b);
        assert_eq!(varpi_eval(&path, &v, &v).unwrap(), 0.0);
    }

    #[test]
    fn hand_integral_on_constant_path() {
        // γ ≡ e, v(t) = tX, w(t) = Y: ϖ(v,w) = −⟨X,Y⟩, exactly reproduced by
        // the quadrature because all stencils are exact on linear data.
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let x = g.random_algebra_element(1.0, &mut rng);
        let y = g.random_algebra_element(1.0, &mut rng);
        let m = 24;
        let path = PathFamily::constant_identity(&g).sample(m);
        let v = TangentVariation::new(
            (0..=m)
                .map(|j| &x * C64::new(j as f64 / m as f64, 0.0))
                .collect(),
        );
        let w = TangentVariation::constant(&g, &y, m);
        let value = varpi_eval(&path, &v, &w).unwrap();
        let expected = -g.inner(&x, &y);
        assert!((value - expected).abs() < 1e-12, "{value} vs {expected}");
    }

    #[test]
    fn quadrature_order_two() {
        // error vs a fine reference drops by ≈ 4 when M doubles
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let pf = PathFamily::random(&g, 2, 0.4, &mut rng);
        let vf = VariationFamily::random(&g, 2, 0.6, &mut rng);
        let wf = VariationFamily::random(&g, 2, 0.6, &mut rng);
        let eval = |m: usize| {
            varpi_eval(&pf.sample(m), &vf.sample(m), &wf.sample(m)).unwrap()
        };
        let reference = eval(6400);
        let e1 = (eval(50) - reference).abs();
        let e2 = (eval(100) - reference).abs();
        let order = (e1 / e2).log2();
        assert!(
            (1.7..=2.3).contains(&order),
            "order {order} (errors {e1:.3e}, {e2:.3e})"
        );
    }

    #[test]
    fn grid_mismatch_rejected() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let path = PathFamily::random(&g, 2, 0.3, &mut rng).sample(10);
        let v = VariationFamily::random(&g, 2, 0.3, &mut rng).sample(10);
        let w = VariationFamily::random(&g, 2, 0.3, &mut rng).sample(20);
        assert!(matches!(
            varpi_eval(&path, &v, &w),
            Err(PathGeomError::GridMismatch(_))
        ));
    }

    #[test]
    fn eta_constant_matches_expansion() {
        for n in [2usize, 3] {
            let g = MatrixGroup::special_unitary(n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(64 + n as u64);
            for _ in 0..5 {
                let u = g.random_algebra_element(1.0, &mut rng);
                let v = g.random_algebra_element(1.0, &mut rng);
                let w = g.random_algebra_element(1.0, &mut rng);
                let direct = cartan_eta(&g, &u, &v, &w);
                let expanded = eta_triple_expansion(&g, &u, &v, &w);
                assert!((direct - expanded).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eta_is_alternating_and_ad_invariant() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        let u = g.random_algebra_element(1.0, &mut rng);
        let v = g.random_algebra_element(1.0, &mut rng);
        let w = g.random_algebra_element(1.0, &mut rng);
        assert!(cartan_eta(&g, &u, &u, &w).abs() < 1e-13);
        assert!((cartan_eta(&g, &u, &v, &w) + cartan_eta(&g, &v, &u, &w)).abs() < 1e-12);
        let h = g.exp(&g.random_algebra_element(0.7, &mut rng));
        let ad = |x: &CMat| &h * x * h.adjoint();
        let moved = cartan_eta(&g, &ad(&u), &ad(&v), &ad(&w));
        assert!((moved - cartan_eta(&g, &u, &v, &w)).abs() < 1e-12);
    }

    #[test]
    fn eta_su2_orthonormal_triple() {
        let g = su2();
        let value = cartan_eta(&g, &g.basis()[0], &g.basis()[1], &g.basis()[2]);
        let expected =
            CARTAN_ETA_COEFF * g.inner(&g.basis()[0], &g.bracket(&g.basis()[1], &g.basis()[2]));
        assert_eq!(value, expected);
        assert!(value.abs() > 1.0, "structure constant should be 2√2π-sized");
    }

    #[test]
    fn identity_twist_is_bit_identical() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let path = PathFamily::random(&g, 3, 0.4, &mut rng).sample(40);
        let v = VariationFamily::random(&g, 3, 0.5, &mut rng).sample(40);
        let w = VariationFamily::random(&g, 3, 0.5, &mut rng).sample(40);
        let twisted = varpi_twisted(&path, &Automorphism::Identity, &v, &w).unwrap();
        let plain = varpi_eval(&path, &v, &w).unwrap();
        assert_eq!(twisted.to_bits(), plain.to_bits());
    }

    #[test]
    fn inner_twist_matches_path_correspondence() {
        // For κ̃ = Ad_h and σ a path with holonomy h, the map γ ↦ γσ⁻¹
        // intertwines ϖ with ϖ^(κ̃): variations are untouched by right
        // multiplication.
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(68);
        let m = 60;
        let path = PathFamily::random(&g, 2, 0.4, &mut rng).sample(m);
        let v = VariationFamily::random(&g, 2, 0.5, &mut rng).sample(m);
        let w = VariationFamily::random(&g, 2, 0.5, &mut rng).sample(m);

        let y = g.random_algebra_element(0.5, &mut rng);
        let h = g.exp(&y);
        let kappa = Automorphism::inner(&g, h.clone()).unwrap();
        // σ(t) = exp(tY) has holonomy h
        let sigma: Vec<CMat> = (0..=m)
            .map(|j| g.exp(&(&y * C64::new(j as f64 / m as f64, 0.0))))
            .collect();
        let moved = path.transport(&sigma, &g.identity()).unwrap();

        let untwisted = varpi_eval(&path, &v, &w).unwrap();
        let twisted = varpi_twisted(&moved, &kappa, &v, &w).unwrap();
        assert!(
            (untwisted - twisted).abs() < 1e-10,
            "{untwisted} vs {twisted}"
        );
    }
}
