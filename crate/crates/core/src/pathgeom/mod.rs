//! Discretized path spaces over SU(2) and SU(3).
//!
//! Paths are sampled at `t_j = j/M`, tangent data in the right
//! trivialization `v = δγ·γ⁻¹`, and the circle carries total measure 1.
//! Generating vector fields follow the convention `ξ_P|_γ = d/ds|₀ exp(−sξ)·γ`
//! (the one that makes `ξ ↦ ξ_P` a homomorphism): in right trivialization
//! the gauge field of `ξ ∈ L𝔤` is `+Ad_{γ_t}ξ_t` and the field of `X ∈ 𝔤`
//! is the constant `−X`.

mod identities;
mod varpi;

pub use identities::{
    check_contraction_group, check_contraction_group_twisted, check_contraction_loop,
    check_dvarpi, contraction_group_convergence, contraction_loop_convergence,
    discrete_connection, dvarpi_convergence, pairing_with_connection, twisted_convergence,
    ContractionReport, ConvergenceReport, DvarpiReport,
};
pub use varpi::{
    cartan_eta, eta_triple_expansion, varpi_eval, varpi_twisted, CARTAN_ETA_COEFF,
};

use crate::linalg::{cmax_abs, exp_antihermitian, gell_mann_basis, CMat, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PathGeomError {
    #[error("unsupported group SU({0}); only SU(2) and SU(3) are modeled")]
    Unsupported(usize),
    #[error("sample is not special-unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("gauge parameter is not periodic (defect {0:.3e})")]
    NotPeriodic(f64),
    #[error("automorphism checks failed: {0}")]
    BadAutomorphism(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

/// SU(2) or SU(3) with a Lie algebra basis orthonormal for the basic inner
/// product `B(X,Y) = −tr(XY)/(4π²)`.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    name: String,
    n: usize,
    basis: Vec<CMat>,
}

impl MatrixGroup {
    pub fn special_unitary(n: usize) -> Result<Self, PathGeomError> {
        if !(2..=3).contains(&n) {
            return Err(PathGeomError::Unsupported(n));
        }
        let (lambdas, _) = gell_mann_basis(n);
        let scale = std::f64::consts::PI * std::f64::consts::SQRT_2;
        let basis = lambdas
            .iter()
            .map(|l| l * C64::new(0.0, -scale))
            .collect();
        Ok(MatrixGroup {
            name: format!("SU{n}"),
            n,
            basis,
        })
    }

    pub fn parse(label: &str) -> Result<Self, PathGeomError> {
        match label.to_ascii_uppercase().as_str() {
            "SU2" | "SU(2)" => Self::special_unitary(2),
            "SU3" | "SU(3)" => Self::special_unitary(3),
            _ => Err(PathGeomError::Unsupported(0)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.n, self.n)
    }

    /// Basic inner product on the algebra.
    pub fn inner(&self, x: &CMat, y: &CMat) -> f64 {
        let t = (x * y).trace();
        -t.re / (4.0 * std::f64::consts::PI * std::f64::consts::PI)
    }

    pub fn bracket(&self, x: &CMat, y: &CMat) -> CMat {
        x * y - y * x
    }

    /// Orthogonal projection of an arbitrary matrix onto the traceless
    /// anti-hermitian subspace.
    pub fn project_algebra(&self, m: &CMat) -> CMat {
        let anti = (m - m.adjoint()) * C64::new(0.5, 0.0);
        let trace = anti.trace() / C64::new(self.n as f64, 0.0);
        anti - CMat::identity(self.n, self.n) * trace
    }

    pub fn exp(&self, x: &CMat) -> CMat {
        exp_antihermitian(x)
    }

    pub fn random_algebra_element(&self, scale: f64, rng: &mut ChaCha8Rng) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for b in &self.basis {
            out += b * C64::new(rng.gen_range(-scale..scale), 0.0);
        }
        out
    }

    fn check_special_unitary(&self, g: &CMat) -> Result<(), PathGeomError> {
        let unit = cmax_abs(&(g * g.adjoint() - self.identity()));
        let det = g.determinant();
        let defect = unit.max((det - C64::new(1.0, 0.0)).norm());
        if defect > 1e-10 {
            return Err(PathGeomError::NotUnitary(defect));
        }
        Ok(())
    }
}

/// A sampled path `γ_0, …, γ_M` at `t_j = j/M`.
#[derive(Clone, Debug)]
pub struct DiscretePath {
    group: MatrixGroup,
    samples: Vec<CMat>,
}

impl DiscretePath {
    pub fn new(group: MatrixGroup, samples: Vec<CMat>) -> Result<Self, PathGeomError> {
        if samples.len() < 3 {
            return Err(PathGeomError::Degenerate(
                "need at least 3 samples".into(),
            ));
        }
        for g in &samples {
            group.check_special_unitary(g)?;
        }
        Ok(DiscretePath { group, samples })
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    /// Number of intervals `M`; there are `M + 1` samples.
    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn sample(&self, j: usize) -> &CMat {
        &self.samples[j]
    }

    pub fn samples(&self) -> &[CMat] {
        &self.samples
    }

    /// Holonomy `a = γ(1)γ(0)⁻¹`.
    pub fn holonomy(&self) -> CMat {
        self.samples[self.intervals()].clone() * self.samples[0].adjoint()
    }

    /// Twisted holonomy `γ(1)κ(γ(0))⁻¹`.
    pub fn twisted_holonomy(&self, kappa: &Automorphism) -> CMat {
        let k0 = kappa.apply_group(&self.samples[0]);
        self.samples[self.intervals()].clone() * k0.adjoint()
    }

    /// Deform by `γ_j ↦ exp(s·dir_j)·γ_j`.
    pub fn deform(&self, dir: &TangentVariation, s: f64) -> DiscretePath {
        let samples = self
            .samples
            .iter()
            .zip(dir.samples())
            .map(|(g, v)| self.group.exp(&(v * C64::new(s, 0.0))) * g)
            .collect();
        DiscretePath {
            group: self.group.clone(),
            samples,
        }
    }

    /// Transport by a gauge pair: `γ_j ↦ g·γ_j·λ_j⁻¹`.
    pub fn transport(&self, lambda: &[CMat], g: &CMat) -> Result<DiscretePath, PathGeomError> {
        if lambda.len() != self.samples.len() {
            return Err(PathGeomError::GridMismatch(format!(
                "gauge has {} samples, path has {}",
                lambda.len(),
                self.samples.len()
            )));
        }
        let samples = self
            .samples
            .iter()
            .zip(lambda)
            .map(|(gamma, l)| g * gamma * l.adjoint())
            .collect();
        Ok(DiscretePath {
            group: self.group.clone(),
            samples,
        })
    }
}

/// Lie-algebra-valued samples `v_j` on the same grid as a path, representing
/// `δγ(t)γ(t)⁻¹`.
#[derive(Clone, Debug)]
pub struct TangentVariation {
    samples: Vec<CMat>,
}

impl TangentVariation {
    pub fn new(samples: Vec<CMat>) -> Self {
        TangentVariation { samples }
    }

    pub fn constant(group: &MatrixGroup, x: &CMat, intervals: usize) -> Self {
        assert_eq!(x.nrows(), group.matrix_size());
        TangentVariation {
            samples: vec![x.clone(); intervals + 1],
        }
    }

    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn sample(&self, j: usize) -> &CMat {
        &self.samples[j]
    }

    pub fn samples(&self) -> &[CMat] {
        &self.samples
    }

    pub fn scale(&self, c: f64) -> TangentVariation {
        TangentVariation {
            samples: self.samples.iter().map(|v| v * C64::new(c, 0.0)).collect(),
        }
    }

    pub fn periodicity_defect(&self) -> f64 {
        cmax_abs(&(self.samples[self.intervals()].clone() - self.samples[0].clone()))
    }

    /// Conjugate every sample: `v_j ↦ g v_j g⁻¹` (the pushforward of a
    /// variation under left translation).
    pub fn conjugate(&self, g: &CMat) -> TangentVariation {
        TangentVariation {
            samples: self.samples.iter().map(|v| g * v * g.adjoint()).collect(),
        }
    }

    /// The gauge generating field `ξ_P = +Ad_{γ_t} ξ_t` of a periodic loop
    /// parameter.
    pub fn gauge_field(path: &DiscretePath, xi: &TangentVariation) -> Result<Self, PathGeomError> {
        if xi.intervals() != path.intervals() {
            return Err(PathGeomError::GridMismatch(
                "gauge parameter grid differs from path grid".into(),
            ));
        }
        let defect = xi.periodicity_defect();
        if defect > 1e-10 {
            return Err(PathGeomError::NotPeriodic(defect));
        }
        let samples = path
            .samples()
            .iter()
            .zip(xi.samples())
            .map(|(g, x)| g * x * g.adjoint())
            .collect();
        Ok(TangentVariation { samples })
    }
}

/// A group automorphism with exact group- and algebra-level action.
#[derive(Clone, Debug)]
pub enum Automorphism {
    Identity,
    /// Conjugation by a fixed special-unitary element.
    Inner(CMat),
    /// Entrywise complex conjugation; outer for SU(n ≥ 3).
    ComplexConjugation,
}

impl Automorphism {
    pub fn inner(group: &MatrixGroup, h: CMat) -> Result<Self, PathGeomError> {
        group.check_special_unitary(&h)?;
        Ok(Automorphism::Inner(h))
    }

    pub fn apply_group(&self, g: &CMat) -> CMat {
        match self {
            Automorphism::Identity => g.clone(),
            Automorphism::Inner(h) => h * g * h.adjoint(),
            Automorphism::ComplexConjugation => g.map(|z| z.conj()),
        }
    }

    pub fn apply_algebra(&self, x: &CMat) -> CMat {
        match self {
            Automorphism::Identity => x.clone(),
            Automorphism::Inner(h) => h * x * h.adjoint(),
            Automorphism::ComplexConjugation => x.map(|z| z.conj()),
        }
    }

    /// Verify the inner-product and bracket invariants on the basis.
    pub fn verify(&self, group: &MatrixGroup) -> Result<(), PathGeomError> {
        let d = group.dim();
        let images: Vec<CMat> = group.basis().iter().map(|x| self.apply_algebra(x)).collect();
        let mut ortho = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                let target = if a == b { 1.0 } else { 0.0 };
                ortho = ortho.max((group.inner(&images[a], &images[b]) - target).abs());
            }
        }
        if ortho > 1e-12 {
            return Err(PathGeomError::BadAutomorphism(format!(
                "κ* not orthogonal (defect {ortho:.3e})"
            )));
        }
        let mut bracket = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                let lhs = self.apply_algebra(&group.bracket(&group.basis()[a], &group.basis()[b]));
                let rhs = group.bracket(&images[a], &images[b]);
                bracket = bracket.max(cmax_abs(&(lhs - rhs)));
            }
        }
        if bracket > 1e-10 {
            return Err(PathGeomError::BadAutomorphism(format!(
                "κ* not bracket-preserving (defect {bracket:.3e})"
            )));
        }
        Ok(())
    }
}

/// Band-limited generator of smooth quasi-periodic paths
/// `γ(t) = exp(tZ)·exp(L(t))` with `L` a trigonometric polynomial; the
/// holonomy is `exp(Z)` for every sample density.
#[derive(Clone, Debug)]
pub struct PathFamily {
    group: MatrixGroup,
    log_holonomy: CMat,
    profile: VariationFamily,
}

impl PathFamily {
    pub fn random(group: &MatrixGroup, degree: usize, scale: f64, rng: &mut ChaCha8Rng) -> Self {
        PathFamily {
            group: group.clone(),
            log_holonomy: group.random_algebra_element(scale, rng),
            profile: VariationFamily::random_periodic(group, degree, scale, rng),
        }
    }

    pub fn constant_identity(group: &MatrixGroup) -> Self {
        PathFamily {
            group: group.clone(),
            log_holonomy: CMat::zeros(group.matrix_size(), group.matrix_size()),
            profile: VariationFamily::zero(group),
        }
    }

    pub fn sample(&self, intervals: usize) -> DiscretePath {
        let samples = (0..=intervals)
            .map(|j| {
                let t = j as f64 / intervals as f64;
                let drift = self.group.exp(&(&self.log_holonomy * C64::new(t, 0.0)));
                drift * self.group.exp(&self.profile.eval(t))
            })
            .collect();
        DiscretePath {
            group: self.group.clone(),
            samples,
        }
    }
}

/// Band-limited Lie-algebra profile
/// `v(t) = C + D·t + E·t³ + Σ_k (A_k cos 2πkt + B_k sin 2πkt)`.
///
/// The polynomial drift makes generic (non-periodic) variations available —
/// including ones whose derivatives do not match at the interval ends, so
/// the difference schemes see their true order — and is zero for loop
/// parameters.
#[derive(Clone, Debug)]
pub struct VariationFamily {
    group: MatrixGroup,
    constant: CMat,
    linear: CMat,
    cubic: CMat,
    cosines: Vec<CMat>,
    sines: Vec<CMat>,
}

impl VariationFamily {
    pub fn zero(group: &MatrixGroup) -> Self {
        let z = CMat::zeros(group.matrix_size(), group.matrix_size());
        VariationFamily {
            group: group.clone(),
            constant: z.clone(),
            linear: z.clone(),
            cubic: z,
            cosines: Vec::new(),
            sines: Vec::new(),
        }
    }

    pub fn constant(group: &MatrixGroup, x: CMat) -> Self {
        let mut out = Self::zero(group);
        out.constant = x;
        out
    }

    pub fn random(group: &MatrixGroup, degree: usize, scale: f64, rng: &mut ChaCha8Rng) -> Self {
        let mut out = Self::random_periodic(group, degree, scale, rng);
        out.linear = group.random_algebra_element(scale, rng);
        out.cubic = group.random_algebra_element(scale, rng);
        out
    }

    pub fn random_periodic(
        group: &MatrixGroup,
        degree: usize,
        scale: f64,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let z = CMat::zeros(group.matrix_size(), group.matrix_size());
        VariationFamily {
            group: group.clone(),
            constant: group.random_algebra_element(scale, rng),
            linear: z.clone(),
            cubic: z,
            cosines: (0..degree)
                .map(|_| group.random_algebra_element(scale, rng))
                .collect(),
            sines: (0..degree)
                .map(|_| group.random_algebra_element(scale, rng))
                .collect(),
        }
    }

    pub fn eval(&self, t: f64) -> CMat {
        let mut out = self.constant.clone()
            + &self.linear * C64::new(t, 0.0)
            + &self.cubic * C64::new(t * t * t, 0.0);
        for (k, (a, b)) in self.cosines.iter().zip(&self.sines).enumerate() {
            let phase = std::f64::consts::TAU * (k + 1) as f64 * t;
            out += a * C64::new(phase.cos(), 0.0) + b * C64::new(phase.sin(), 0.0);
        }
        out
    }

    pub fn sample(&self, intervals: usize) -> TangentVariation {
        TangentVariation {
            samples: (0..=intervals)
                .map(|j| self.eval(j as f64 / intervals as f64))
                .collect(),
        }
    }
}
