//! Fourier-truncated model of the loop algebra of a compact simple Lie
//! algebra.
//!
//! Loops are stored as complex coefficient vectors `X_n ∈ 𝔤 ⊗ C` for
//! `|n| ≤ N`, with `z^n = e^{2πint}` and the circle carrying total measure 1.
//! The basis of `𝔤` is orthonormal for the basic inner product (the invariant
//! form with `B(θ,θ) = 2` in the weight normalization), which on `su(n)`
//! matrices reads `B(X,Y) = −tr(XY)/(4π²)`. With that scale the Killing form
//! computed from the structure constants satisfies
//! `B^kil = −8π² h∨ B^basic` on the nose.

mod cocycle;
mod forms;
mod operators;

pub use cocycle::{
    central_bracket, cocycle_identity_check, kp_cocycle, level_check, loop_bracket,
    LevelReport,
};
pub use forms::{
    coadjoint_form, l2_pairing, sobolev_gram, sobolev_norm, weak_strong_report, SobolevWeight,
    TrendReport, TrendRow,
};
pub use operators::{
    chi_cutoff, covariant_derivative, dmu, jmu, rmu_smu, ChiCutoff, ChiProfile, LoopOperator,
    Projections, SpectralData, KERNEL_TOL,
};

use crate::linalg::{CMat, CVec, C64};
use crate::rootsys::{build_root_system, LieType, RootSystem};
use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoopModelError {
    #[error("unsupported algebra for the matrix model: {0}")]
    Unsupported(String),
    #[error("connection not in the Cartan subalgebra (component {index} = {value:.3e})")]
    NotCartan { index: usize, value: f64 },
    #[error("structure constants failed {check} at {defect:.3e}")]
    BadStructure { check: &'static str, defect: f64 },
    #[error("mode budget violated: mode {mode} exceeds N/3 = {budget}")]
    ModeBudget { mode: i64, budget: i64 },
    #[error("cutoff mismatch: {0}")]
    CutoffMismatch(String),
    #[error("loop is not real (defect {0:.3e})")]
    NotReal(f64),
    #[error("cutoff function not strictly positive on the spectrum (χ({t:.3e}) = {value:.3e})")]
    ChiNotPositive { t: f64, value: f64 },
    #[error(transparent)]
    Root(#[from] crate::rootsys::RootSysError),
}

/// A compact simple Lie algebra in an orthonormal basis for the basic inner
/// product, with its structure constants and root-system link.
#[derive(Clone, Debug)]
pub struct CompactLieAlgebra {
    label: String,
    dim: usize,
    rank: usize,
    /// Totally antisymmetric structure constants, flattened `f[a][b][c]`.
    structure: Vec<f64>,
    /// Indices of the Cartan basis elements.
    cartan: Vec<usize>,
    root_system: RootSystem,
}

/// Build the truncated-loop model for `su(2)` (A1), `su(3)` (A2) or
/// `su(4)` (A3), via generalized Gell-Mann matrices scaled to the basic
/// normalization.
pub fn compact_lie_algebra(lie_type: LieType, rank: usize) -> Result<CompactLieAlgebra, LoopModelError> {
    if lie_type != LieType::A || !(1..=3).contains(&rank) {
        return Err(LoopModelError::Unsupported(format!(
            "{lie_type}{rank} (matrix model covers A1..A3)"
        )));
    }
    let n = rank + 1;
    let root_system = build_root_system(lie_type, rank)?;
    let (lambdas, cartan) = crate::linalg::gell_mann_basis(n);
    let dim = lambdas.len();

    // X_a = −√2 π i λ_a is orthonormal for B(X,Y) = −tr(XY)/(4π²).
    let scale = std::f64::consts::PI * std::f64::consts::SQRT_2;
    let rep: Vec<CMat> = lambdas
        .iter()
        .map(|l| l * C64::new(0.0, -scale))
        .collect();

    let four_pi_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let basic = |x: &CMat, y: &CMat| -> f64 {
        let t = (x * y).trace();
        -t.re / four_pi_sq
    };
    let mut structure = vec![0.0f64; dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let comm = &rep[a] * &rep[b] - &rep[b] * &rep[a];
            for c in 0..dim {
                structure[(a * dim + b) * dim + c] = basic(&comm, &rep[c]);
            }
        }
    }
    // Enforce exact total antisymmetry by averaging the signed permutations.
    let raw = structure.clone();
    let get = |a: usize, b: usize, c: usize| raw[(a * dim + b) * dim + c];
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                structure[(a * dim + b) * dim + c] = (get(a, b, c) - get(b, a, c)
                    + get(b, c, a)
                    - get(c, b, a)
                    + get(c, a, b)
                    - get(a, c, b))
                    / 6.0;
            }
        }
    }

    let alg = CompactLieAlgebra {
        label: format!("{lie_type}{rank}"),
        dim,
        rank,
        structure,
        cartan,
        root_system,
    };
    alg.verify()?;
    Ok(alg)
}

impl CompactLieAlgebra {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan_indices(&self) -> &[usize] {
        &self.cartan
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> f64 {
        self.structure[(a * self.dim + b) * self.dim + c]
    }

    /// `[x, y]` for coefficient vectors on the orthonormal basis.
    pub fn bracket_coeffs(&self, x: &CVec, y: &CVec) -> CVec {
        let d = self.dim;
        let mut out = CVec::zeros(d);
        for a in 0..d {
            if x[a] == C64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..d {
                if y[b] == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    let f = self.structure_constant(a, b, c);
                    if f != 0.0 {
                        out[c] += x[a] * y[b] * f;
                    }
                }
            }
        }
        out
    }

    /// The matrix of `ad_μ` on the coefficient space.
    pub fn ad_matrix(&self, mu: &DVector<f64>) -> CMat {
        let d = self.dim;
        let mut m = CMat::zeros(d, d);
        for a in 0..d {
            if mu[a] == 0.0 {
                continue;
            }
            for c in 0..d {
                for b in 0..d {
                    let f = self.structure_constant(a, c, b);
                    if f != 0.0 {
                        m[(b, c)] += C64::new(mu[a] * f, 0.0);
                    }
                }
            }
        }
        m
    }

    /// Element of the Cartan subalgebra from coordinates on the Cartan basis.
    pub fn cartan_element(&self, coords: &[f64]) -> DVector<f64> {
        assert_eq!(coords.len(), self.rank);
        let mut v = DVector::zeros(self.dim);
        for (k, &idx) in self.cartan.iter().enumerate() {
            v[idx] = coords[k];
        }
        v
    }

    pub(crate) fn require_cartan(&self, mu: &DVector<f64>) -> Result<(), LoopModelError> {
        for i in 0..self.dim {
            if !self.cartan.contains(&i) && mu[i].abs() > 0.0 {
                return Err(LoopModelError::NotCartan {
                    index: i,
                    value: mu[i],
                });
            }
        }
        Ok(())
    }

    /// Killing form `K_ab = Σ f_acd f_bdc` from the structure constants.
    pub fn killing_form(&self) -> crate::linalg::RMat {
        let d = self.dim;
        let mut k = crate::linalg::RMat::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                let mut acc = 0.0;
                for c in 0..d {
                    for e in 0..d {
                        acc += self.structure_constant(a, c, e) * self.structure_constant(b, e, c);
                    }
                }
                k[(a, b)] = acc;
            }
        }
        // symmetrize: the two index orders are equal in exact arithmetic
        let kt = k.transpose();
        (k + kt) * 0.5
    }

    fn verify(&self) -> Result<(), LoopModelError> {
        let d = self.dim;
        let mut worst_anti = 0.0f64;
        let mut worst_inv = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let f = self.structure_constant(a, b, c);
                    worst_anti = worst_anti.max((f + self.structure_constant(b, a, c)).abs());
                    // invariance ⟨[a,b],c⟩ + ⟨b,[a,c]⟩ = 0 is total antisymmetry
                    worst_inv = worst_inv.max((f + self.structure_constant(a, c, b)).abs());
                }
            }
        }
        if worst_anti > 1e-12 {
            return Err(LoopModelError::BadStructure {
                check: "antisymmetry",
                defect: worst_anti,
            });
        }
        if worst_inv > 1e-12 {
            return Err(LoopModelError::BadStructure {
                check: "invariance",
                defect: worst_inv,
            });
        }
        let mut worst_jacobi = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut acc = 0.0;
                        for m in 0..d {
                            acc += self.structure_constant(a, b, m) * self.structure_constant(m, c, e)
                                + self.structure_constant(b, c, m) * self.structure_constant(m, a, e)
                                + self.structure_constant(c, a, m) * self.structure_constant(m, b, e);
                        }
                        worst_jacobi = worst_jacobi.max(acc.abs());
                    }
                }
            }
        }
        if worst_jacobi > 1e-12 * (1.0 + self.structure.iter().fold(0.0f64, |m, x| m.max(x.abs())).powi(2)) {
            return Err(LoopModelError::BadStructure {
                check: "Jacobi",
                defect: worst_jacobi,
            });
        }
        Ok(())
    }
}

/// A Fourier-truncated loop: coefficients `X_n` for `|n| ≤ N`, flattened
/// mode-major (`n = −N..N`), each mode a coefficient vector on the
/// orthonormal basis of `𝔤`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedLoop {
    cutoff: usize,
    dim: usize,
    coeffs: CVec,
}

impl TruncatedLoop {
    pub fn zeros(alg: &CompactLieAlgebra, cutoff: usize) -> Self {
        TruncatedLoop {
            cutoff,
            dim: alg.dim(),
            coeffs: CVec::zeros((2 * cutoff + 1) * alg.dim()),
        }
    }

    pub fn from_coeffs(alg: &CompactLieAlgebra, cutoff: usize, coeffs: CVec) -> Self {
        assert_eq!(coeffs.len(), (2 * cutoff + 1) * alg.dim());
        TruncatedLoop {
            cutoff,
            dim: alg.dim(),
            coeffs,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &CVec {
        &self.coeffs
    }

    pub fn flat_index(&self, n: i64, a: usize) -> usize {
        debug_assert!(n.unsigned_abs() as usize <= self.cutoff);
        ((n + self.cutoff as i64) as usize) * self.dim + a
    }

    pub fn mode(&self, n: i64) -> CVec {
        let start = self.flat_index(n, 0);
        CVec::from_fn(self.dim, |a, _| self.coeffs[start + a])
    }

    pub fn set_mode(&mut self, n: i64, value: &CVec) {
        let start = self.flat_index(n, 0);
        for a in 0..self.dim {
            self.coeffs[start + a] = value[a];
        }
    }

    /// Largest |n| with a nonzero coefficient.
    pub fn max_mode(&self) -> i64 {
        let mut max = 0i64;
        for n in -(self.cutoff as i64)..=(self.cutoff as i64) {
            if self.mode(n).iter().any(|z| z.norm() > 0.0) {
                max = max.max(n.abs());
            }
        }
        max
    }

    /// Reality defect `max_n |X_{−n} − conj(X_n)|`.
    pub fn reality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..=(self.cutoff as i64) {
            let plus = self.mode(n);
            let minus = self.mode(-n);
            for a in 0..self.dim {
                worst = worst.max((minus[a] - plus[a].conj()).norm());
            }
        }
        worst
    }

    pub fn require_real(&self) -> Result<(), LoopModelError> {
        let defect = self.reality_defect();
        if defect > 1e-12 {
            return Err(LoopModelError::NotReal(defect));
        }
        Ok(())
    }

    /// The single complex mode `X ⊗ z^n`.
    pub fn monomial(alg: &CompactLieAlgebra, cutoff: usize, n: i64, x: &CVec) -> Self {
        let mut out = Self::zeros(alg, cutoff);
        out.set_mode(n, x);
        out
    }

    /// Random real loop with modes supported in `|n| ≤ max_mode`.
    pub fn random_real(
        alg: &CompactLieAlgebra,
        cutoff: usize,
        max_mode: usize,
        scale: f64,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        assert!(max_mode <= cutoff);
        let mut out = Self::zeros(alg, cutoff);
        let d = alg.dim();
        let zero_mode = CVec::from_fn(d, |_, _| C64::new(rng.gen_range(-scale..scale), 0.0));
        out.set_mode(0, &zero_mode);
        for n in 1..=(max_mode as i64) {
            let plus = CVec::from_fn(d, |_, _| {
                C64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
            });
            let minus = plus.map(|z| z.conj());
            out.set_mode(n, &plus);
            out.set_mode(-n, &minus);
        }
        out
    }
}
