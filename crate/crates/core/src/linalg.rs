//! Dense-matrix helpers shared by the numerical modules: symmetric/hermitian
//! functional calculus, metric-congruence square roots, and norms.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = Complex::new(0.0, 1.0);

pub fn frob(m: &RMat) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn cfrob(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn cmax_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

/// Largest singular value.
pub fn op_norm(m: &RMat) -> f64 {
    m.clone().singular_values().max()
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

/// Eigendecomposition of a real symmetric matrix (symmetrized first to damp
/// roundoff asymmetry).
pub fn sym_eigen(m: &RMat) -> (DVector<f64>, RMat) {
    let s = (m + m.transpose()) * 0.5;
    let e = s.symmetric_eigen();
    (e.eigenvalues, e.eigenvectors)
}

/// Apply `f` to the spectrum of a symmetric matrix: `V f(Λ) Vᵀ`.
pub fn sym_map(m: &RMat, f: impl Fn(f64) -> f64) -> RMat {
    let (vals, vecs) = sym_eigen(m);
    let d = DMatrix::from_diagonal(&vals.map(f));
    &vecs * d * vecs.transpose()
}

pub fn spd_sqrt(m: &RMat) -> RMat {
    sym_map(m, |x| x.max(0.0).sqrt())
}

pub fn spd_inv_sqrt(m: &RMat) -> RMat {
    sym_map(m, |x| 1.0 / x.max(f64::MIN_POSITIVE).sqrt())
}

pub fn min_sym_eigenvalue(m: &RMat) -> f64 {
    sym_eigen(m).0.min()
}

/// Eigendecomposition of a complex hermitian matrix.
pub fn herm_eigen(m: &CMat) -> (DVector<f64>, CMat) {
    let s = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let e = s.symmetric_eigen();
    (e.eigenvalues, e.eigenvectors)
}

/// Apply a complex-valued `f` to the spectrum of a hermitian matrix:
/// `U f(Λ) U^H`.
pub fn herm_map(m: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let (vals, vecs) = herm_eigen(m);
    let d = CMat::from_diagonal(&vals.map(f));
    &vecs * d * vecs.adjoint()
}

/// Exponential of an anti-hermitian matrix, computed through the hermitian
/// eigendecomposition of `iX` so the result is unitary to machine precision.
pub fn exp_antihermitian(x: &CMat) -> CMat {
    let h = x * I; // hermitian when x is anti-hermitian
    herm_map(&h, |lambda| (-I * lambda).exp())
}

/// Nullspace dimension and an orthonormal nullspace basis of a hermitian
/// positive semidefinite matrix, using an absolute eigenvalue threshold.
pub fn psd_nullspace(m: &CMat, tol: f64) -> (usize, Vec<CVec>) {
    let (vals, vecs) = herm_eigen(m);
    let mut basis = Vec::new();
    for (k, &v) in vals.iter().enumerate() {
        if v.abs() <= tol {
            basis.push(vecs.column(k).into_owned());
        }
    }
    (basis.len(), basis)
}

/// Generalized Gell-Mann matrices for `su(n)`: hermitian, traceless, with
/// `tr(λ_a λ_b) = 2δ_ab`. Pair matrices come first (symmetric then
/// antisymmetric per index pair), diagonal ones last; the returned indices
/// point at the diagonal (Cartan) members.
pub fn gell_mann_basis(n: usize) -> (Vec<CMat>, Vec<usize>) {
    let mut out: Vec<CMat> = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut sym = CMat::zeros(n, n);
            sym[(i, j)] = C64::new(1.0, 0.0);
            sym[(j, i)] = C64::new(1.0, 0.0);
            out.push(sym);
            let mut anti = CMat::zeros(n, n);
            anti[(i, j)] = C64::new(0.0, -1.0);
            anti[(j, i)] = C64::new(0.0, 1.0);
            out.push(anti);
        }
    }
    let mut cartan = Vec::with_capacity(n - 1);
    for l in 1..n {
        let norm = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
        let mut d = CMat::zeros(n, n);
        for k in 0..l {
            d[(k, k)] = C64::new(norm, 0.0);
        }
        d[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        cartan.push(out.len());
        out.push(d);
    }
    (out, cartan)
}
