//! Finite-dimensional Clifford algebras and their spinor modules.
//!
//! A spinor module is realized on the exterior algebra of the `+i` eigenspace
//! `H⁺` of an orthogonal complex structure: elements of `H⁺` act by exterior
//! multiplication (creation), elements of `H⁻` by contraction (annihilation),
//! scaled so that `ρ(v)ρ(w) + ρ(w)ρ(v) = 2 g(v,w)`.

mod implement;
mod torus;

pub use implement::{
    implementer, intertwiner_space, subspace_factorization, IntertwinerSpace, Parity,
    SubspaceFactorization,
};
pub use torus::{
    commweil_check, graded_character, root_space_module, weyl_lift_matrix, CommWeilReport,
    TorusAction,
};

use crate::linalg::{cmax_abs, frob, max_abs, sym_eigen, CMat, CVec, RMat, C64};
use nalgebra::DVector;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliffSpinError {
    #[error("dimension {0} is not even and positive")]
    OddDimension(usize),
    #[error("metric is not symmetric positive definite (min eigenvalue {0:.3e})")]
    BadMetric(f64),
    #[error("operator is not a complex structure: ‖J² + I‖ = {0:.3e}")]
    NotComplexStructure(f64),
    #[error("operator not orthogonal for the metric: ‖AᵀgA − g‖ = {0:.3e}")]
    NotOrthogonal(f64),
    #[error("intertwiner space has dimension {got}, expected {expected}")]
    IntertwinerDimension { expected: usize, got: usize },
    #[error("operator is not scalar (defect {0:.3e})")]
    NonScalar(f64),
    #[error("intertwiner has no definite parity (defect {0:.3e})")]
    IndefiniteParity(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

/// An even-dimensional real vector space with an inner product.
#[derive(Clone, Debug)]
pub struct EuclideanSpace {
    dim: usize,
    metric: RMat,
}

impl EuclideanSpace {
    pub fn new(metric: RMat) -> Result<Self, CliffSpinError> {
        let dim = metric.nrows();
        if dim == 0 || dim % 2 != 0 || metric.ncols() != dim {
            return Err(CliffSpinError::OddDimension(dim));
        }
        let min = sym_eigen(&metric).0.min();
        if min <= 0.0 {
            return Err(CliffSpinError::BadMetric(min));
        }
        Ok(EuclideanSpace { dim, metric })
    }

    pub fn standard(dim: usize) -> Result<Self, CliffSpinError> {
        Self::new(RMat::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> &RMat {
        &self.metric
    }

    pub fn inner(&self, v: &DVector<f64>, w: &DVector<f64>) -> f64 {
        (v.transpose() * &self.metric * w)[(0, 0)]
    }
}

/// A complex structure with optional verified flags.
#[derive(Clone, Debug)]
pub struct ComplexStructureOperator {
    matrix: RMat,
    orthogonal_wrt: Option<RMat>,
    compatible_with: Option<RMat>,
}

impl ComplexStructureOperator {
    pub fn new(matrix: RMat) -> Result<Self, CliffSpinError> {
        let n = matrix.nrows();
        let defect = max_abs(&(&matrix * &matrix + RMat::identity(n, n)));
        if defect > 1e-12 * n as f64 * (1.0 + max_abs(&matrix) * max_abs(&matrix)) {
            return Err(CliffSpinError::NotComplexStructure(defect));
        }
        Ok(ComplexStructureOperator {
            matrix,
            orthogonal_wrt: None,
            compatible_with: None,
        })
    }

    /// Verify and record orthogonality with respect to `g`.
    pub fn orthogonal_for(mut self, g: &RMat) -> Result<Self, CliffSpinError> {
        check_orthogonal(&self.matrix, g)?;
        self.orthogonal_wrt = Some(g.clone());
        Ok(self)
    }

    /// Verify and record compatibility with a symplectic form matrix
    /// (`ΩJ` symmetric positive definite).
    pub fn compatible_for(mut self, omega: &RMat) -> Result<Self, CliffSpinError> {
        let gj = omega * &self.matrix;
        let asym = frob(&(&gj - gj.transpose()));
        let min = sym_eigen(&gj).0.min();
        if asym > 1e-10 * (1.0 + frob(&gj)) || min <= 0.0 {
            return Err(CliffSpinError::BadMetric(min));
        }
        self.compatible_with = Some(omega.clone());
        Ok(self)
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn orthogonal_wrt(&self) -> Option<&RMat> {
        self.orthogonal_wrt.as_ref()
    }

    pub fn compatible_with(&self) -> Option<&RMat> {
        self.compatible_with.as_ref()
    }
}

pub(crate) fn check_orthogonal(a: &RMat, g: &RMat) -> Result<(), CliffSpinError> {
    let defect = frob(&(a.transpose() * g * a - g));
    if defect > 1e-10 * (1.0 + frob(g)) {
        return Err(CliffSpinError::NotOrthogonal(defect));
    }
    Ok(())
}

/// Z₂-graded spinor module over `Cl(H, g)`, concretely `∧H⁺` in an adapted
/// orthonormal basis.
#[derive(Clone, Debug)]
pub struct SpinorModule {
    space: EuclideanSpace,
    j: RMat,
    /// Adapted g-orthonormal pairs `(e_k, f_k = J e_k)`.
    pairs: Vec<(DVector<f64>, DVector<f64>)>,
    /// `ε_k = (e_k − i f_k)/√2`, a basis of `H⁺`.
    plus_basis: Vec<CVec>,
    /// Index subsets of the Fock basis in lexicographic order; the empty
    /// subset (the vacuum) comes first.
    subsets: Vec<Vec<usize>>,
    /// `ρ(u_a)` for each standard basis vector of `H`.
    clifford: Vec<CMat>,
}

/// Build the spinor module of `(H, g)` defined by an orthogonal complex
/// structure `J`.
pub fn spinor_module(
    space: &EuclideanSpace,
    j: &ComplexStructureOperator,
) -> Result<SpinorModule, CliffSpinError> {
    let d = space.dim();
    if j.matrix().nrows() != d {
        return Err(CliffSpinError::DimensionMismatch(format!(
            "J is {}×{}, space dim {}",
            j.matrix().nrows(),
            j.matrix().ncols(),
            d
        )));
    }
    check_orthogonal(j.matrix(), space.metric())?;
    let m = d / 2;

    // Adapted basis: greedy Gram-Schmidt over the standard basis, closing
    // each accepted vector under J. Two orthogonalization passes keep the
    // pairs orthonormal to machine precision even when J itself is only
    // orthogonal to the admission tolerance.
    let mut pairs: Vec<(DVector<f64>, DVector<f64>)> = Vec::with_capacity(m);
    let mut frame: Vec<DVector<f64>> = Vec::with_capacity(d);
    let project_out = |v: &mut DVector<f64>, frame: &[DVector<f64>], space: &EuclideanSpace| {
        for _ in 0..2 {
            for b in frame {
                let c = space.inner(b, v);
                *v -= b * c;
            }
        }
    };
    for a in 0..d {
        if pairs.len() == m {
            break;
        }
        let mut v = DVector::zeros(d);
        v[a] = 1.0;
        project_out(&mut v, &frame, space);
        let norm = space.inner(&v, &v).sqrt();
        if norm < 1e-8 {
            continue;
        }
        let e = &v / norm;
        let mut f = j.matrix() * &e;
        project_out(&mut f, &frame, space);
        let fe = space.inner(&e, &f);
        f -= &e * fe;
        let fnorm = space.inner(&f, &f).sqrt();
        if fnorm < 1e-8 {
            return Err(CliffSpinError::Degenerate(
                "J failed to produce an independent partner vector".into(),
            ));
        }
        f /= fnorm;
        frame.push(e.clone());
        frame.push(f.clone());
        pairs.push((e, f));
    }
    if pairs.len() != m {
        return Err(CliffSpinError::Degenerate(
            "could not complete an adapted basis".into(),
        ));
    }

    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let plus_basis: Vec<CVec> = pairs
        .iter()
        .map(|(e, f)| {
            CVec::from_fn(d, |r, _| C64::new(e[r] * inv_sqrt2, -f[r] * inv_sqrt2))
        })
        .collect();

    let mut subsets: Vec<Vec<usize>> = (0u32..(1 << m))
        .map(|mask| (0..m).filter(|k| mask & (1 << k) != 0).collect())
        .collect();
    subsets.sort();

    let fock = subsets.len();
    let mut creation = Vec::with_capacity(m);
    for k in 0..m {
        let mut c = CMat::zeros(fock, fock);
        for (col, s) in subsets.iter().enumerate() {
            if s.contains(&k) {
                continue;
            }
            let below = s.iter().filter(|&&x| x < k).count();
            let mut target = s.clone();
            target.push(k);
            target.sort_unstable();
            let row = subsets.binary_search(&target).expect("subset present");
            c[(row, col)] = C64::new(if below % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        }
        creation.push(c);
    }
    let annihilation: Vec<CMat> = creation.iter().map(|c| c.adjoint()).collect();

    // ρ(u) = Σ_k (P_k c_k + P̄_k a_k) with P_k = √2⟨ε_k, u⟩_g; the scaled
    // coefficient is computed straight from the pair vectors,
    // P_k = g(e_k, u) + i g(f_k, u), so no √2 round trip enters.
    let g = space.metric();
    let mut clifford = Vec::with_capacity(d);
    for a in 0..d {
        let mut u = DVector::zeros(d);
        u[a] = 1.0;
        let gu = g * &u;
        let mut rho = CMat::zeros(fock, fock);
        for k in 0..m {
            let (e, f) = &pairs[k];
            let p = C64::new(e.dot(&gu), f.dot(&gu));
            rho += &creation[k] * p + &annihilation[k] * p.conj();
        }
        clifford.push(rho);
    }

    let module = SpinorModule {
        space: space.clone(),
        j: j.matrix().clone(),
        pairs,
        plus_basis,
        subsets,
        clifford,
    };
    module.verify_relations()?;
    Ok(module)
}

impl SpinorModule {
    pub fn space(&self) -> &EuclideanSpace {
        &self.space
    }

    pub fn complex_structure(&self) -> &RMat {
        &self.j
    }

    pub fn half_dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn fock_dim(&self) -> usize {
        self.subsets.len()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn pairs(&self) -> &[(DVector<f64>, DVector<f64>)] {
        &self.pairs
    }

    /// The adapted g-orthonormal frame `e_1, f_1, e_2, f_2, …` as a flat list.
    pub fn frame(&self) -> Vec<DVector<f64>> {
        self.pairs
            .iter()
            .flat_map(|(e, f)| [e.clone(), f.clone()])
            .collect()
    }

    pub fn plus_basis(&self) -> &[CVec] {
        &self.plus_basis
    }

    /// `ρ` of the `a`-th standard basis vector of `H`.
    pub fn action(&self, a: usize) -> &CMat {
        &self.clifford[a]
    }

    /// `ρ(v)` for a real vector.
    pub fn apply(&self, v: &DVector<f64>) -> CMat {
        let f = self.fock_dim();
        let mut out = CMat::zeros(f, f);
        for (a, rho) in self.clifford.iter().enumerate() {
            if v[a] != 0.0 {
                out += rho * C64::new(v[a], 0.0);
            }
        }
        out
    }

    /// Complex-linear extension of `ρ` to `H ⊗ C`.
    pub fn apply_complex(&self, v: &CVec) -> CMat {
        let f = self.fock_dim();
        let mut out = CMat::zeros(f, f);
        for (a, rho) in self.clifford.iter().enumerate() {
            if v[a] != C64::new(0.0, 0.0) {
                out += rho * v[a];
            }
        }
        out
    }

    /// Parity of each Fock basis vector: `+1` even, `-1` odd.
    pub fn grading(&self) -> Vec<i8> {
        self.subsets
            .iter()
            .map(|s| if s.len() % 2 == 0 { 1 } else { -1 })
            .collect()
    }

    pub fn grading_operator(&self) -> CMat {
        let gr = self.grading();
        CMat::from_fn(gr.len(), gr.len(), |r, c| {
            if r == c {
                C64::new(gr[r] as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Index of the vacuum (empty subset) in the Fock basis.
    pub fn vacuum_index(&self) -> usize {
        0
    }

    fn verify_relations(&self) -> Result<(), CliffSpinError> {
        let d = self.space.dim();
        let f = self.fock_dim();
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in a..d {
                let anti = &self.clifford[a] * &self.clifford[b]
                    + &self.clifford[b] * &self.clifford[a];
                let expected = CMat::identity(f, f)
                    * C64::new(2.0 * self.space.metric()[(a, b)], 0.0);
                worst = worst.max(cmax_abs(&(anti - expected)));
            }
        }
        if worst > 1e-12 * (1.0 + max_abs(self.space.metric())) * d as f64 {
            return Err(CliffSpinError::Degenerate(format!(
                "Clifford relations violated at {worst:.3e}"
            )));
        }
        Ok(())
    }

    /// Clifford action matrices as JSON (row-major `[re, im]` pairs), for
    /// golden tests and external consumers.
    pub fn clifford_json(&self) -> serde_json::Value {
        let matrices: Vec<Vec<Vec<[f64; 2]>>> = self
            .clifford
            .iter()
            .map(|m| {
                (0..m.nrows())
                    .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                    .collect()
            })
            .collect();
        json!({
            "dim": self.space.dim(),
            "fock_dim": self.fock_dim(),
            "matrices": matrices,
        })
    }
}

/// Random g-orthogonal matrix `exp(S)` with `S` g-skew, for test sweeps.
pub fn random_orthogonal(
    g: &RMat,
    scale: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> RMat {
    use rand::Rng;
    let d = g.nrows();
    let mut anti = RMat::zeros(d, d);
    for i in 0..d {
        for j in 0..i {
            let x = rng.gen_range(-scale..scale);
            anti[(i, j)] = x;
            anti[(j, i)] = -x;
        }
    }
    // S = g⁻¹ K with K antisymmetric is g-skew, so exp(S) is g-orthogonal.
    let s = g
        .clone()
        .try_inverse()
        .expect("metric is positive definite")
        * anti;
    s.exp()
}
