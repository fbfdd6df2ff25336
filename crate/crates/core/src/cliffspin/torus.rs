//! Torus weights on spinor modules, graded characters, and the commutation
//! relation `ĝ⁻¹ t ĝ = t^{ρ−wρ} w⁻¹(t)` for lifted Weyl elements.

use super::{implementer, spinor_module, CliffSpinError, ComplexStructureOperator,
    EuclideanSpace, SpinorModule};
use crate::linalg::{cmax_abs, CMat, RMat, C64};
use crate::rootsys::{RootSystem, Weight, WeylElement};
use std::f64::consts::TAU;

/// A weight assignment to the `H⁺` basis vectors of a spinor module: the
/// torus element `t = exp(ξ)` acts on `ε_k` by `e^{2πi B(λ_k, ξ)}` and
/// diagonally on the Fock basis, with subset weights adding.
#[derive(Clone, Debug)]
pub struct TorusAction {
    weights: Vec<Weight>,
}

impl TorusAction {
    pub fn new(module: &SpinorModule, weights: Vec<Weight>) -> Result<Self, CliffSpinError> {
        if weights.len() != module.half_dim() {
            return Err(CliffSpinError::DimensionMismatch(format!(
                "{} weights for {} pairs",
                weights.len(),
                module.half_dim()
            )));
        }
        Ok(TorusAction { weights })
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Rotation angles `2π B(λ_k, ξ)` of each adapted pair.
    pub fn angles(&self, rs: &RootSystem, xi: &Weight) -> Vec<f64> {
        self.weights
            .iter()
            .map(|lambda| TAU * rs.pairing_f64(lambda, xi))
            .collect()
    }

    /// The diagonal action on the Fock basis.
    pub fn fock_matrix(&self, module: &SpinorModule, rs: &RootSystem, xi: &Weight) -> CMat {
        let angles = self.angles(rs, xi);
        let f = module.fock_dim();
        let mut m = CMat::zeros(f, f);
        for (idx, subset) in module.subsets().iter().enumerate() {
            let theta: f64 = subset.iter().map(|&k| angles[k]).sum();
            m[(idx, idx)] = C64::new(theta.cos(), theta.sin());
        }
        m
    }

    /// The orthogonal rotation on `H` realizing the torus element in the
    /// adapted frame: angle `θ_k` on the pair `(e_k, f_k)`.
    pub fn rotation_matrix(&self, module: &SpinorModule, rs: &RootSystem, xi: &Weight) -> RMat {
        let angles = self.angles(rs, xi);
        let d = module.space().dim();
        let g = module.space().metric();
        let mut rot = RMat::zeros(d, d);
        for (k, (e, f)) in module.pairs().iter().enumerate() {
            let (s, c) = angles[k].sin_cos();
            let e_dual = (g * e).transpose();
            let f_dual = (g * f).transpose();
            rot += (e * c + f * s) * e_dual + (e * (-s) + f * c) * f_dual;
        }
        rot
    }
}

/// The Z₂-graded character `Δ(t) = tr(t|S^ev) − tr(t|S^odd)`.
pub fn graded_character(
    module: &SpinorModule,
    torus: &TorusAction,
    rs: &RootSystem,
    xi: &Weight,
) -> C64 {
    let fock = torus.fock_matrix(module, rs, xi);
    let grading = module.grading();
    let mut acc = C64::new(0.0, 0.0);
    for (idx, &sign) in grading.iter().enumerate() {
        acc += fock[(idx, idx)] * C64::new(sign as f64, 0.0);
    }
    acc
}

/// Spinor module of `𝔤/𝔱` built from the positive roots: one oriented plane
/// per positive root, `𝔫₊` spanned by the `+i` eigenvectors, and the torus
/// rotating the `α`-plane by angle `2π B(α, ξ)`.
pub fn root_space_module(
    rs: &RootSystem,
) -> Result<(SpinorModule, TorusAction), CliffSpinError> {
    let p = rs.positive_roots().len();
    let dim = 2 * p;
    let space = EuclideanSpace::standard(dim)?;
    let j = ComplexStructureOperator::new(crate::symplin::standard_complex_structure(dim))?;
    let module = spinor_module(&space, &j)?;
    let torus = TorusAction::new(&module, rs.positive_roots().to_vec())?;
    Ok((module, torus))
}

/// Orthogonal lift of a Weyl element to `𝔤/𝔱`: permutes the root planes,
/// reversing orientation where the root changes sign.
pub fn weyl_lift_matrix(rs: &RootSystem, w: &WeylElement) -> Result<RMat, CliffSpinError> {
    let positives = rs.positive_roots();
    let p = positives.len();
    let mut a = RMat::zeros(2 * p, 2 * p);
    for (idx, alpha) in positives.iter().enumerate() {
        let image = w.apply(alpha);
        if let Some(target) = positives.iter().position(|r| r == &image) {
            a[(2 * target, 2 * idx)] = 1.0;
            a[(2 * target + 1, 2 * idx + 1)] = 1.0;
        } else if let Some(target) = positives.iter().position(|r| *r == -&image) {
            a[(2 * target, 2 * idx)] = 1.0;
            a[(2 * target + 1, 2 * idx + 1)] = -1.0;
        } else {
            return Err(CliffSpinError::Degenerate(format!(
                "image of root {alpha:?} is not a root"
            )));
        }
    }
    Ok(a)
}

/// Result of the lifted-Weyl commutation check.
#[derive(Clone, Debug)]
pub struct CommWeilReport {
    pub scalar: C64,
    pub expected: C64,
    /// Deviation of `ĝ⁻¹ T(t) ĝ T(w⁻¹t)⁻¹` from a scalar matrix.
    pub scalar_defect: f64,
    pub pass: bool,
}

/// Verify `ĝ⁻¹ t ĝ = t^{ρ−wρ} · w⁻¹(t)` on the spinor module of `𝔤/𝔱`:
/// conjugating the torus action by the implementer of the lifted Weyl
/// element produces the torus action of `w⁻¹(t)` times the scalar
/// `t^{ρ−wρ}`.
pub fn commweil_check(
    rs: &RootSystem,
    w: &WeylElement,
    xi: &Weight,
) -> Result<CommWeilReport, CliffSpinError> {
    let (module, torus) = root_space_module(rs)?;
    let lift = weyl_lift_matrix(rs, w)?;
    let u = implementer(&lift, &module)?;

    let t_mat = torus.fock_matrix(&module, rs, xi);
    let w_inv_xi = w.apply_inverse(xi);
    let t_winv = torus.fock_matrix(&module, rs, &w_inv_xi);

    let op = u.adjoint() * &t_mat * &u * t_winv.adjoint();
    let f = module.fock_dim();
    let scalar = op.trace() / C64::new(f as f64, 0.0);
    let scalar_defect = cmax_abs(&(&op - CMat::identity(f, f) * scalar));
    if scalar_defect > 1e-8 {
        return Err(CliffSpinError::NonScalar(scalar_defect));
    }

    let shift = rs.rho() - &w.apply(rs.rho());
    let angle = TAU * rs.pairing_f64(&shift, xi);
    let expected = C64::new(angle.cos(), angle.sin());
    let pass = (scalar - expected).norm() <= 1e-10;
    Ok(CommWeilReport {
        scalar,
        expected,
        scalar_defect,
        pass,
    })
}
