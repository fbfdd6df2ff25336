//! The Kac–Peterson cocycle `ψ(ξ,ζ) = (1/4πi)∫ B^kil(dξ, ζ)`, the central
//! extension bracket, and the level relation `B^kil = −8π² h∨ B^basic`.
//!
//! Cocycle-identity checks use a mode budget (inputs supported in
//! `|n| ≤ N/3`) so that brackets stay inside the truncation and the identity
//! is exact rather than truncation-polluted.

use super::{CompactLieAlgebra, LoopModelError, TruncatedLoop};
use crate::linalg::{RMat, C64};
use crate::rootsys::dual_coxeter;
use serde::Serialize;

/// Pointwise bracket of truncated loops by Fourier convolution. Errors if
/// the product would overflow the cutoff.
pub fn loop_bracket(
    alg: &CompactLieAlgebra,
    xi: &TruncatedLoop,
    zeta: &TruncatedLoop,
) -> Result<TruncatedLoop, LoopModelError> {
    if xi.cutoff() != zeta.cutoff() {
        return Err(LoopModelError::CutoffMismatch(format!(
            "{} vs {}",
            xi.cutoff(),
            zeta.cutoff()
        )));
    }
    let n = xi.cutoff() as i64;
    let max_total = xi.max_mode() + zeta.max_mode();
    if max_total > n {
        return Err(LoopModelError::ModeBudget {
            mode: max_total,
            budget: n,
        });
    }
    let mut out = TruncatedLoop::zeros(alg, xi.cutoff());
    for p in -n..=n {
        let xp = xi.mode(p);
        if xp.iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        for q in -n..=n {
            let total = p + q;
            if total.abs() > n {
                continue;
            }
            let zq = zeta.mode(q);
            if zq.iter().all(|z| z.norm() == 0.0) {
                continue;
            }
            let bracket = alg.bracket_coeffs(&xp, &zq);
            let acc = out.mode(total) + bracket;
            out.set_mode(total, &acc);
        }
    }
    Ok(out)
}

fn killing_bilinear(k: &RMat, u: &crate::linalg::CVec, v: &crate::linalg::CVec) -> C64 {
    let d = u.len();
    let mut acc = C64::new(0.0, 0.0);
    for a in 0..d {
        if u[a].norm() == 0.0 {
            continue;
        }
        for b in 0..d {
            if k[(a, b)] != 0.0 {
                acc += u[a] * v[b] * k[(a, b)];
            }
        }
    }
    acc
}

fn kp_raw(k: &RMat, xi: &TruncatedLoop, zeta: &TruncatedLoop) -> C64 {
    let n = xi.cutoff() as i64;
    let mut acc = C64::new(0.0, 0.0);
    for mode in -n..=n {
        let x = xi.mode(mode);
        if x.iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        let z = zeta.mode(-mode);
        acc += killing_bilinear(k, &x, &z) * C64::new(0.5 * mode as f64, 0.0);
    }
    acc
}

/// The Kac–Peterson cocycle
/// `ψ(ξ,ζ) = ½ Res_{z=0} B^kil(∂ξ/∂z, ζ) = (1/4πi) ∫ B^kil(dξ, ζ)`,
/// evaluated as the Fourier sum `½ Σ_n n · B^kil(ξ_n, ζ_{−n})` and assembled
/// antisymmetrically so `ψ(ξ,ζ) = −ψ(ζ,ξ)` holds bit-exactly.
pub fn kp_cocycle(
    alg: &CompactLieAlgebra,
    xi: &TruncatedLoop,
    zeta: &TruncatedLoop,
) -> Result<C64, LoopModelError> {
    if xi.cutoff() != zeta.cutoff() {
        return Err(LoopModelError::CutoffMismatch(format!(
            "{} vs {}",
            xi.cutoff(),
            zeta.cutoff()
        )));
    }
    let k = alg.killing_form();
    let forward = kp_raw(&k, xi, zeta);
    let backward = kp_raw(&k, zeta, xi);
    Ok((forward - backward) * C64::new(0.5, 0.0))
}

/// Enforce the mode budget `|n| ≤ N/3` for identity checks.
fn require_budget(xi: &TruncatedLoop) -> Result<(), LoopModelError> {
    let budget = (xi.cutoff() / 3) as i64;
    let max = xi.max_mode();
    if max > budget {
        return Err(LoopModelError::ModeBudget { mode: max, budget });
    }
    Ok(())
}

/// Residual of the 2-cocycle identity
/// `ψ([ξ₁,ξ₂],ξ₃) + ψ([ξ₂,ξ₃],ξ₁) + ψ([ξ₃,ξ₁],ξ₂)` on mode-budgeted loops.
pub fn cocycle_identity_check(
    alg: &CompactLieAlgebra,
    x1: &TruncatedLoop,
    x2: &TruncatedLoop,
    x3: &TruncatedLoop,
) -> Result<f64, LoopModelError> {
    for x in [x1, x2, x3] {
        require_budget(x)?;
    }
    let b12 = loop_bracket(alg, x1, x2)?;
    let b23 = loop_bracket(alg, x2, x3)?;
    let b31 = loop_bracket(alg, x3, x1)?;
    let total = kp_cocycle(alg, &b12, x3)? + kp_cocycle(alg, &b23, x1)? + kp_cocycle(alg, &b31, x2)?;
    Ok(total.norm())
}

/// The central-extension bracket at level one:
/// `[(ξ₁,t₁),(ξ₂,t₂)] = ([ξ₁,ξ₂], 2πi ∫ dξ₁·ξ₂)` with `·` the basic inner
/// product.
pub fn central_bracket(
    alg: &CompactLieAlgebra,
    x1: &(TruncatedLoop, C64),
    x2: &(TruncatedLoop, C64),
) -> Result<(TruncatedLoop, C64), LoopModelError> {
    let bracket = loop_bracket(alg, &x1.0, &x2.0)?;
    // 2πi ∫ B(dξ₁, ξ₂) = 2πi Σ_n 2πin B(ξ_n, ζ_{−n}) = −4π² Σ_n n ξ_n·ζ_{−n}
    let n = x1.0.cutoff() as i64;
    let mut acc = C64::new(0.0, 0.0);
    for mode in -n..=n {
        let a = x1.0.mode(mode);
        let b = x2.0.mode(-mode);
        let dot: C64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
        acc += dot * C64::new(mode as f64, 0.0);
    }
    let four_pi_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    Ok((bracket, acc * C64::new(-four_pi_sq, 0.0)))
}

/// Entrywise comparison of the Killing form from structure constants against
/// `−8π² h∨ B^basic`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub dual_coxeter: i64,
    pub max_entry_defect: f64,
    pub pass: bool,
}

pub fn level_check(alg: &CompactLieAlgebra) -> Result<LevelReport, LoopModelError> {
    let k = alg.killing_form();
    let hv = dual_coxeter(alg.root_system())?;
    let expected = -8.0 * std::f64::consts::PI.powi(2) * hv as f64;
    let d = alg.dim();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { expected } else { 0.0 };
            worst = worst.max((k[(i, j)] - target).abs());
        }
    }
    Ok(LevelReport {
        dual_coxeter: hv,
        max_entry_defect: worst,
        pass: worst <= 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVec;
    use crate::loopmodel::compact_lie_algebra;
    use crate::rootsys::LieType;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn su2() -> CompactLieAlgebra {
        compact_lie_algebra(LieType::A, 1).unwrap()
    }

    fn random_complex_vec(dim: usize, rng: &mut ChaCha8Rng) -> CVec {
        CVec::from_fn(dim, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn paired_mode_value() {
        // ψ(X z^n, Y z^{−n}) = −4π² n h∨ B(X,Y).
        let alg = su2();
        let hv = dual_coxeter(alg.root_system()).unwrap() as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let cutoff = 10;
        for n in 1..=8i64 {
            let x = random_complex_vec(3, &mut rng);
            let y = random_complex_vec(3, &mut rng);
            let xi = TruncatedLoop::monomial(&alg, cutoff, n, &x);
            let zeta = TruncatedLoop::monomial(&alg, cutoff, -n, &y);
            let psi = kp_cocycle(&alg, &xi, &zeta).unwrap();
            let b: C64 = x.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
            let expected = b * C64::new(-4.0 * std::f64::consts::PI.powi(2) * n as f64 * hv, 0.0);
            assert!(
                (psi - expected).norm() < 1e-10 * (1.0 + expected.norm()),
                "n = {n}: {psi} vs {expected}"
            );
        }
    }

    #[test]
    fn antisymmetry_bit_exact() {
        let alg = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let xi = TruncatedLoop::random_real(&alg, 9, 9, 1.0, &mut rng);
        let zeta = TruncatedLoop::random_real(&alg, 9, 9, 1.0, &mut rng);
        let a = kp_cocycle(&alg, &xi, &zeta).unwrap();
        let b = kp_cocycle(&alg, &zeta, &xi).unwrap();
        assert_eq!(a, -b);
        assert_eq!(kp_cocycle(&alg, &xi, &xi).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn bilinearity() {
        let alg = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let x1 = TruncatedLoop::random_real(&alg, 6, 6, 1.0, &mut rng);
        let x2 = TruncatedLoop::random_real(&alg, 6, 6, 1.0, &mut rng);
        let z = TruncatedLoop::random_real(&alg, 6, 6, 1.0, &mut rng);
        let sum = TruncatedLoop::from_coeffs(&alg, 6, x1.coeffs() + x2.coeffs());
        let lhs = kp_cocycle(&alg, &sum, &z).unwrap();
        let rhs = kp_cocycle(&alg, &x1, &z).unwrap() + kp_cocycle(&alg, &x2, &z).unwrap();
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn cocycle_identity_on_budgeted_triples() {
        for rank in 1..=2usize {
            let alg = compact_lie_algebra(LieType::A, rank).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(34 + rank as u64);
            let cutoff = 24;
            for _ in 0..10 {
                let x1 = TruncatedLoop::random_real(&alg, cutoff, cutoff / 3, 0.3, &mut rng);
                let x2 = TruncatedLoop::random_real(&alg, cutoff, cutoff / 3, 0.3, &mut rng);
                let x3 = TruncatedLoop::random_real(&alg, cutoff, cutoff / 3, 0.3, &mut rng);
                let residual = cocycle_identity_check(&alg, &x1, &x2, &x3).unwrap();
                assert!(residual < 1e-10, "residual {residual}");
            }
        }
    }

    #[test]
    fn budget_violation_rejected() {
        let alg = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let x = TruncatedLoop::random_real(&alg, 9, 9, 1.0, &mut rng);
        let y = TruncatedLoop::random_real(&alg, 9, 3, 1.0, &mut rng);
        assert!(matches!(
            cocycle_identity_check(&alg, &x, &y, &y),
            Err(LoopModelError::ModeBudget { .. })
        ));
    }

    #[test]
    fn level_relation_su2_su3() {
        for rank in 1..=2usize {
            let alg = compact_lie_algebra(LieType::A, rank).unwrap();
            let report = level_check(&alg).unwrap();
            assert_eq!(report.dual_coxeter, rank as i64 + 1);
            assert!(report.pass, "defect {}", report.max_entry_defect);
        }
    }

    #[test]
    fn central_bracket_jacobi() {
        let alg = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let cutoff = 24;
        for _ in 0..5 {
            let xs: Vec<(TruncatedLoop, C64)> = (0..3)
                .map(|_| {
                    (
                        TruncatedLoop::random_real(&alg, cutoff, cutoff / 3, 1.0, &mut rng),
                        C64::new(rng.gen_range(-1.0..1.0), 0.0),
                    )
                })
                .collect();
            // [[x,y],z] + [[y,z],x] + [[z,x],y] = 0 in both components.
            let xy = central_bracket(&alg, &xs[0], &xs[1]).unwrap();
            let yz = central_bracket(&alg, &xs[1], &xs[2]).unwrap();
            let zx = central_bracket(&alg, &xs[2], &xs[0]).unwrap();
            let t1 = central_bracket(&alg, &xy, &xs[2]).unwrap();
            let t2 = central_bracket(&alg, &yz, &xs[0]).unwrap();
            let t3 = central_bracket(&alg, &zx, &xs[1]).unwrap();
            let loop_residual = (t1.0.coeffs() + t2.0.coeffs() + t3.0.coeffs()).norm();
            let center_residual = (t1.1 + t2.1 + t3.1).norm();
            assert!(loop_residual < 1e-10, "loop part {loop_residual}");
            assert!(center_residual < 1e-10, "center part {center_residual}");
        }
    }
}
