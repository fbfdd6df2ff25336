//! Finite-difference verification of the structure identities of `ϖ`:
//! `dϖ = −q*η`, the two contraction formulas, and the twisted moment
//! condition.
//!
//! The exterior derivative uses the three-term formula on chart-coordinate
//! vector-field extensions (made `t`-constant in the exponential chart, so
//! their pairwise brackets vanish); directional derivatives are central
//! differences of step `h` along `γ ↦ exp(±h·u)γ`, with the chart
//! differential `φ(ad_x) = (e^{ad_x} − 1)/ad_x` applied to the carried
//! variations.

use super::varpi::{cartan_eta, time_derivative, varpi_eval, varpi_twisted};
use super::{
    Automorphism, DiscretePath, PathFamily, PathGeomError, TangentVariation, VariationFamily,
};
use crate::linalg::{CMat, C64};
use serde::Serialize;

/// `φ(ad_{s·dir})v` truncated at fourth order; for steps `s ≤ 1e−2` the
/// truncation sits far below the difference-scheme error.
fn chart_pushforward(dir: &TangentVariation, x: &TangentVariation, s: f64) -> TangentVariation {
    let samples = dir
        .samples()
        .iter()
        .zip(x.samples())
        .map(|(d, v)| {
            let sd = d * C64::new(s, 0.0);
            let mut term = v.clone();
            let mut acc = v.clone();
            for k in 1..=4usize {
                term = (&sd * &term - &term * &sd) * C64::new(1.0 / (k as f64 + 1.0), 0.0);
                acc += &term;
            }
            acc
        })
        .collect();
    TangentVariation::new(samples)
}

/// One directional derivative `D_a[ϖ(B, C)]` at the base path, by central
/// differences along the exponential chart.
fn directional_derivative(
    path: &DiscretePath,
    a: &TangentVariation,
    b: &TangentVariation,
    c: &TangentVariation,
    h: f64,
) -> Result<f64, PathGeomError> {
    let plus = varpi_eval(
        &path.deform(a, h),
        &chart_pushforward(a, b, h),
        &chart_pushforward(a, c, h),
    )?;
    let minus = varpi_eval(
        &path.deform(a, -h),
        &chart_pushforward(a, b, -h),
        &chart_pushforward(a, c, -h),
    )?;
    Ok((plus - minus) / (2.0 * h))
}

#[derive(Clone, Debug, Serialize)]
pub struct DvarpiReport {
    pub dvarpi: f64,
    pub eta_term: f64,
    pub residual: f64,
}

/// Verify `dϖ(u,v,w) = −q*η(u,v,w)` at the sampled path: the left side by
/// finite differences, the right side from the exact tangent map of
/// `q(γ) = γ(1)γ(0)⁻¹`.
pub fn check_dvarpi(
    path: &DiscretePath,
    u: &TangentVariation,
    v: &TangentVariation,
    w: &TangentVariation,
    h: f64,
) -> Result<DvarpiReport, PathGeomError> {
    if h <= 0.0 {
        return Err(PathGeomError::Degenerate("fd step must be positive".into()));
    }
    let dvarpi = directional_derivative(path, u, v, w, h)?
        - directional_derivative(path, v, u, w, h)?
        + directional_derivative(path, w, u, v, h)?;

    let m = path.intervals();
    let a = path.holonomy();
    let pulled = |x: &TangentVariation| -> CMat {
        // θ^L(Tq·x) = Ad_{a⁻¹} x(1) − x(0)
        a.adjoint() * x.sample(m) * &a - x.sample(0)
    };
    let eta_term = cartan_eta(path.group(), &pulled(u), &pulled(v), &pulled(w));
    let residual = (dvarpi + eta_term).abs();
    Ok(DvarpiReport {
        dvarpi,
        eta_term,
        residual,
    })
}

/// The discrete connection `μ_j = γ_j⁻¹ γ̇_j`, projected back onto the
/// algebra to discard the O(M⁻²) stencil noise.
pub fn discrete_connection(path: &DiscretePath) -> Vec<CMat> {
    let derivative = time_derivative(path.samples(), path.intervals());
    path.samples()
        .iter()
        .zip(&derivative)
        .map(|(g, gd)| path.group().project_algebra(&(g.adjoint() * gd)))
        .collect()
}

/// `⟨μ, ξ⟩ = ∫ μ(t)·ξ(t) dt` by the trapezoid rule.
pub fn pairing_with_connection(path: &DiscretePath, xi: &TangentVariation) -> f64 {
    let mu = discrete_connection(path);
    let group = path.group();
    let m = path.intervals();
    let mut acc = 0.5 * (group.inner(&mu[0], xi.sample(0)) + group.inner(&mu[m], xi.sample(m)));
    for j in 1..m {
        acc += group.inner(&mu[j], xi.sample(j));
    }
    acc / m as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Verify `ι(ξ_P)ϖ = p*d⟨μ,ξ⟩` for a periodic gauge parameter `ξ`: the left
/// side is `ϖ(ξ_P, w)` with `ξ_P = +Ad_γ ξ`, the right side the `w`-derivative
/// of `⟨μ, ξ⟩` by central differences along the deformation `exp(s·w)γ`.
pub fn check_contraction_loop(
    path: &DiscretePath,
    xi: &TangentVariation,
    w: &TangentVariation,
    h: f64,
) -> Result<ContractionReport, PathGeomError> {
    let field = TangentVariation::gauge_field(path, xi)?;
    let lhs = varpi_eval(path, &field, w)?;
    let plus = pairing_with_connection(&path.deform(w, h), xi);
    let minus = pairing_with_connection(&path.deform(w, -h), xi);
    let rhs = (plus - minus) / (2.0 * h);
    Ok(ContractionReport {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// Verify the twisted moment condition
/// `ι(X_P)ϖ^{(κ)} = −½ q*(θ^L·κ(X) + θ^R·X)`, with `X_P = −X` constant in
/// right trivialization and `q(γ) = γ(1)κ(γ(0))⁻¹` differentiated by central
/// differences.
pub fn check_contraction_group_twisted(
    path: &DiscretePath,
    kappa: &Automorphism,
    x: &CMat,
    w: &TangentVariation,
    h: f64,
) -> Result<ContractionReport, PathGeomError> {
    let group = path.group();
    kappa.verify(group)?;
    let m = path.intervals();
    let x_field = TangentVariation::constant(group, &(-x), m);
    let lhs = varpi_twisted(path, kappa, &x_field, w)?;

    let a = path.twisted_holonomy(kappa);
    let q_plus = path.deform(w, h).twisted_holonomy(kappa);
    let q_minus = path.deform(w, -h).twisted_holonomy(kappa);
    let tau = (q_plus - q_minus) * C64::new(1.0 / (2.0 * h), 0.0);
    let theta_l = group.project_algebra(&(a.adjoint() * &tau));
    let theta_r = group.project_algebra(&(&tau * a.adjoint()));
    let rhs = -0.5 * (group.inner(&theta_l, &kappa.apply_algebra(x)) + group.inner(&theta_r, x));
    Ok(ContractionReport {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// The untwisted group contraction `ι(X_P)ϖ = −q*(½(θ^L+θ^R)·X)`.
pub fn check_contraction_group(
    path: &DiscretePath,
    x: &CMat,
    w: &TangentVariation,
    h: f64,
) -> Result<ContractionReport, PathGeomError> {
    check_contraction_group_twisted(path, &Automorphism::Identity, x, w, h)
}

/// Residuals at `(M, h)` and `(2M, h/2)` with the implied convergence order.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub coarse: f64,
    pub fine: f64,
    pub order: f64,
}

impl ConvergenceReport {
    fn new(coarse: f64, fine: f64) -> Self {
        ConvergenceReport {
            coarse,
            fine,
            order: (coarse / fine).log2(),
        }
    }
}

pub fn dvarpi_convergence(
    pf: &PathFamily,
    uf: &VariationFamily,
    vf: &VariationFamily,
    wf: &VariationFamily,
    intervals: usize,
    h: f64,
) -> Result<ConvergenceReport, PathGeomError> {
    let run = |m: usize, step: f64| -> Result<f64, PathGeomError> {
        Ok(check_dvarpi(
            &pf.sample(m),
            &uf.sample(m),
            &vf.sample(m),
            &wf.sample(m),
            step,
        )?
        .residual)
    };
    Ok(ConvergenceReport::new(
        run(intervals, h)?,
        run(2 * intervals, h / 2.0)?,
    ))
}

pub fn contraction_loop_convergence(
    pf: &PathFamily,
    xif: &VariationFamily,
    wf: &VariationFamily,
    intervals: usize,
    h: f64,
) -> Result<ConvergenceReport, PathGeomError> {
    let run = |m: usize, step: f64| -> Result<f64, PathGeomError> {
        Ok(
            check_contraction_loop(&pf.sample(m), &xif.sample(m), &wf.sample(m), step)?
                .residual,
        )
    };
    Ok(ConvergenceReport::new(
        run(intervals, h)?,
        run(2 * intervals, h / 2.0)?,
    ))
}

pub fn contraction_group_convergence(
    pf: &PathFamily,
    x: &CMat,
    wf: &VariationFamily,
    intervals: usize,
    h: f64,
) -> Result<ConvergenceReport, PathGeomError> {
    twisted_convergence(pf, &Automorphism::Identity, x, wf, intervals, h)
}

pub fn twisted_convergence(
    pf: &PathFamily,
    kappa: &Automorphism,
    x: &CMat,
    wf: &VariationFamily,
    intervals: usize,
    h: f64,
) -> Result<ConvergenceReport, PathGeomError> {
    let run = |m: usize, step: f64| -> Result<f64, PathGeomError> {
        Ok(check_contraction_group_twisted(
            &pf.sample(m),
            kappa,
            x,
            &wf.sample(m),
            step,
        )?
        .residual)
    };
    Ok(ConvergenceReport::new(
        run(intervals, h)?,
        run(2 * intervals, h / 2.0)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathgeom::MatrixGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn su2() -> MatrixGroup {
        MatrixGroup::special_unitary(2).unwrap()
    }

    #[test]
    fn dvarpi_orthogonal_constant_case() {
        // constant path, constant independent u,v,w with [v,w] ⊥ u: the η
        // side vanishes by orthogonality and dϖ numerically agrees.
        let g3 = MatrixGroup::special_unitary(3).unwrap();
        let v = &g3.basis()[0]; // pair (0,1) symmetric
        let w = &g3.basis()[1]; // pair (0,1) antisymmetric
        let u = &g3.basis()[2]; // pair (0,2): orthogonal to [v,w] ∝ diag
        assert!(g3.inner(u, &g3.bracket(v, w)).abs() < 1e-12);
        let m = 100;
        let path = PathFamily::constant_identity(&g3).sample(m);
        let uu = TangentVariation::constant(&g3, u, m);
        let vv = TangentVariation::constant(&g3, v, m);
        let ww = TangentVariation::constant(&g3, w, m);
        let report = check_dvarpi(&path, &uu, &vv, &ww, 1e-3).unwrap();
        assert!(report.eta_term.abs() < 1e-12);
        assert!(report.residual < 1e-6, "residual {}", report.residual);
    }

    #[test]
    fn dvarpi_su2_convergence_order() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let pf = PathFamily::random(&g, 2, 0.35, &mut rng);
        let uf = VariationFamily::random(&g, 2, 0.4, &mut rng);
        let vf = VariationFamily::random(&g, 2, 0.4, &mut rng);
        let wf = VariationFamily::random(&g, 2, 0.4, &mut rng);
        let report = dvarpi_convergence(&pf, &uf, &vf, &wf, 200, 1e-3).unwrap();
        assert!(
            (1.7..=2.3).contains(&report.order),
            "order {} (residuals {:.3e} → {:.3e})",
            report.order,
            report.coarse,
            report.fine
        );
    }

    #[test]
    fn contraction_loop_constant_case() {
        // constant path, constant ξ = X, arbitrary w: both sides computed
        // independently and equal to quadrature tolerance.
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let x = g.random_algebra_element(0.8, &mut rng);
        let m = 200;
        let path = PathFamily::constant_identity(&g).sample(m);
        let xi = TangentVariation::constant(&g, &x, m);
        let wf = VariationFamily::random(&g, 2, 0.5, &mut rng);
        let report = check_contraction_loop(&path, &xi, &wf.sample(m), 1e-3).unwrap();
        assert!(report.residual < 1e-4, "residual {}", report.residual);
    }

    #[test]
    fn contraction_loop_zero_parameter() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let m = 50;
        let path = PathFamily::random(&g, 2, 0.4, &mut rng).sample(m);
        let xi = TangentVariation::constant(&g, &CMat::zeros(2, 2), m);
        let wf = VariationFamily::random(&g, 2, 0.5, &mut rng);
        let report = check_contraction_loop(&path, &xi, &wf.sample(m), 1e-3).unwrap();
        assert_eq!(report.lhs, 0.0);
        assert!(report.rhs.abs() < 1e-12);
    }

    #[test]
    fn contraction_loop_convergence_order() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let pf = PathFamily::random(&g, 2, 0.35, &mut rng);
        let xif = VariationFamily::random_periodic(&g, 2, 0.45, &mut rng);
        let wf = VariationFamily::random(&g, 2, 0.45, &mut rng);
        let report = contraction_loop_convergence(&pf, &xif, &wf, 200, 1e-3).unwrap();
        assert!(
            (1.7..=2.3).contains(&report.order),
            "order {} (residuals {:.3e} → {:.3e})",
            report.order,
            report.coarse,
            report.fine
        );
    }

    #[test]
    fn contraction_group_identity_path() {
        // γ ≡ e: both sides reduce to ∓⟨X, w₁ − w₀⟩; checked independently.
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let x = g.random_algebra_element(0.7, &mut rng);
        let m = 200;
        let path = PathFamily::constant_identity(&g).sample(m);
        let wf = VariationFamily::random(&g, 2, 0.5, &mut rng);
        let w = wf.sample(m);
        let report = check_contraction_group(&path, &x, &w, 1e-3).unwrap();
        assert!(report.residual < 1e-4, "residual {}", report.residual);
        let direct = -g.inner(&x, &(w.sample(m).clone() - w.sample(0)));
        assert!((report.lhs - direct).abs() < 1e-4);
    }

    #[test]
    fn contraction_group_zero_vector() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(75);
        let m = 40;
        let path = PathFamily::random(&g, 2, 0.4, &mut rng).sample(m);
        let wf = VariationFamily::random(&g, 2, 0.5, &mut rng);
        let report =
            check_contraction_group(&path, &CMat::zeros(2, 2), &wf.sample(m), 1e-3).unwrap();
        assert_eq!(report.lhs, 0.0);
        assert!(report.rhs.abs() < 1e-14);
    }

    #[test]
    fn contraction_group_convergence_order() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(76);
        let pf = PathFamily::random(&g, 2, 0.35, &mut rng);
        let x = g.random_algebra_element(0.6, &mut rng);
        let wf = VariationFamily::random(&g, 2, 0.45, &mut rng);
        // Run in the h-dominated regime: the M-dependent part of this
        // residual superconverges for band-limited data, so the order is
        // read off the finite-difference step.
        let report = contraction_group_convergence(&pf, &x, &wf, 200, 1e-2).unwrap();
        assert!(
            (1.7..=2.3).contains(&report.order),
            "order {} (residuals {:.3e} → {:.3e})",
            report.order,
            report.coarse,
            report.fine
        );
    }

    #[test]
    fn twisted_inner_and_outer_convergence() {
        let g3 = MatrixGroup::special_unitary(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let pf = PathFamily::random(&g3, 2, 0.3, &mut rng);
        let x = g3.random_algebra_element(0.5, &mut rng);
        let wf = VariationFamily::random(&g3, 2, 0.4, &mut rng);
        let h_elt = g3.exp(&g3.random_algebra_element(0.5, &mut rng));
        for kappa in [
            Automorphism::inner(&g3, h_elt).unwrap(),
            Automorphism::ComplexConjugation,
        ] {
            let report = twisted_convergence(&pf, &kappa, &x, &wf, 150, 1e-3).unwrap();
            assert!(
                report.order >= 1.7,
                "twisted order {} (residuals {:.3e} → {:.3e})",
                report.order,
                report.coarse,
                report.fine
            );
        }
    }

    #[test]
    fn lg_times_g_invariance() {
        // Transport the whole picture by a gauge loop λ and a left
        // translation g: ϖ is unchanged up to quadrature-scale roundoff.
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        let m = 80;
        let path = PathFamily::random(&g, 2, 0.4, &mut rng).sample(m);
        let v = VariationFamily::random(&g, 2, 0.5, &mut rng).sample(m);
        let w = VariationFamily::random(&g, 2, 0.5, &mut rng).sample(m);
        let lambda_profile = VariationFamily::random_periodic(&g, 2, 0.4, &mut rng);
        let lambda: Vec<CMat> = (0..=m)
            .map(|j| g.exp(&lambda_profile.eval(j as f64 / m as f64)))
            .collect();
        let left = g.exp(&g.random_algebra_element(0.7, &mut rng));

        let base = varpi_eval(&path, &v, &w).unwrap();
        let moved_path = path.transport(&lambda, &left).unwrap();
        let moved = varpi_eval(&moved_path, &v.conjugate(&left), &w.conjugate(&left)).unwrap();
        assert!((base - moved).abs() < 1e-10, "{base} vs {moved}");
    }
}
