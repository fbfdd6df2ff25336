//! The loop-algebra operators `∂_μ`, `J_μ = ∂_μ/|∂_μ|`, `D_μ`, smoothed
//! cutoffs `χ(∂_μ)`, and the projections `R_μ`, `S_μ` onto the stabilizer.
//!
//! For a constant connection `μ ∈ 𝔱` everything is block-diagonal across
//! Fourier modes: on mode `n` the covariant derivative is `2πin + ad_μ`, and
//! with `H = i·ad_μ` hermitian its spectrum is `{i(2πn − a_k)}` over the
//! eigenvalues `a_k` of `H`. The sign convention follows `J₀`: `−i` on
//! negative Fourier modes, `+i` on positive ones, `0` on the kernel.

use super::{CompactLieAlgebra, LoopModelError, TruncatedLoop};
use crate::linalg::{herm_eigen, CMat, CVec, C64, I};
use nalgebra::DVector;

/// Eigenvalues below this bound count as the kernel of `∂_μ`.
pub const KERNEL_TOL: f64 = 1e-9;

/// A dense operator on the truncated coefficient space, block-diagonal
/// across Fourier modes.
#[derive(Clone, Debug)]
pub struct LoopOperator {
    pub label: String,
    cutoff: usize,
    dim: usize,
    matrix: CMat,
}

impl LoopOperator {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn total_dim(&self) -> usize {
        (2 * self.cutoff + 1) * self.dim
    }

    pub fn apply(&self, xi: &TruncatedLoop) -> TruncatedLoop {
        assert_eq!(xi.cutoff(), self.cutoff, "cutoff mismatch");
        TruncatedLoop::from_coeffs_raw(self.cutoff, self.dim, &self.matrix * xi.coeffs())
    }

    pub fn block(&self, n: i64) -> CMat {
        let start = ((n + self.cutoff as i64) as usize) * self.dim;
        self.matrix.view((start, start), (self.dim, self.dim)).into_owned()
    }
}

impl TruncatedLoop {
    pub(crate) fn from_coeffs_raw(cutoff: usize, dim: usize, coeffs: CVec) -> Self {
        TruncatedLoop {
            cutoff,
            dim,
            coeffs,
        }
    }
}

/// Per-mode spectral data of `∂_μ`: the hermitian eigendecomposition of
/// `H = i·ad_μ` shared by all modes.
#[derive(Clone, Debug)]
pub struct SpectralData {
    cutoff: usize,
    dim: usize,
    /// Eigenvalues of `H = i·ad_μ`.
    pub ad_eigenvalues: Vec<f64>,
    /// Unitary of eigenvectors.
    pub basis: CMat,
}

impl SpectralData {
    pub fn new(
        alg: &CompactLieAlgebra,
        mu: &DVector<f64>,
        cutoff: usize,
    ) -> Result<Self, LoopModelError> {
        alg.require_cartan(mu)?;
        let d = alg.dim();
        if mu.iter().all(|&x| x == 0.0) {
            // Exact data at μ = 0: the Fourier basis itself diagonalizes.
            return Ok(SpectralData {
                cutoff,
                dim: d,
                ad_eigenvalues: vec![0.0; d],
                basis: CMat::identity(d, d),
            });
        }
        let h = alg.ad_matrix(mu) * I;
        let (vals, vecs) = herm_eigen(&h);
        Ok(SpectralData {
            cutoff,
            dim: d,
            ad_eigenvalues: vals.iter().copied().collect(),
            basis: vecs,
        })
    }

    /// `λ_{n,k} = 2πn − a_k`; the eigenvalue of `∂_μ` on the corresponding
    /// eigenvector is `iλ_{n,k}`.
    pub fn lambda(&self, n: i64, k: usize) -> f64 {
        std::f64::consts::TAU * n as f64 - self.ad_eigenvalues[k]
    }

    /// All `(n, k, λ_{n,k})` triples.
    pub fn eigenvalues(&self) -> Vec<(i64, usize, f64)> {
        let mut out = Vec::with_capacity((2 * self.cutoff + 1) * self.dim);
        for n in -(self.cutoff as i64)..=(self.cutoff as i64) {
            for k in 0..self.dim {
                out.push((n, k, self.lambda(n, k)));
            }
        }
        out
    }

    pub fn kernel_pairs(&self) -> Vec<(i64, usize)> {
        self.eigenvalues()
            .into_iter()
            .filter(|&(_, _, l)| l.abs() <= KERNEL_TOL)
            .map(|(n, k, _)| (n, k))
            .collect()
    }

    /// Assemble the block-diagonal operator `f(∂_μ)` acting as
    /// `f(λ_{n,k})` on each eigenvector.
    pub fn operator(&self, label: &str, f: impl Fn(f64) -> C64) -> LoopOperator {
        let d = self.dim;
        let total = (2 * self.cutoff + 1) * d;
        let mut matrix = CMat::zeros(total, total);
        for n in -(self.cutoff as i64)..=(self.cutoff as i64) {
            let diag = CMat::from_fn(d, d, |r, c| {
                if r == c {
                    f(self.lambda(n, r))
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let block = &self.basis * diag * self.basis.adjoint();
            let start = ((n + self.cutoff as i64) as usize) * d;
            for r in 0..d {
                for c in 0..d {
                    matrix[(start + r, start + c)] = block[(r, c)];
                }
            }
        }
        LoopOperator {
            label: label.to_string(),
            cutoff: self.cutoff,
            dim: d,
            matrix,
        }
    }
}

/// The covariant derivative `∂_μ = ∂ + ad_μ`, assembled directly so that at
/// `μ = 0` the Fourier diagonal is exactly `2πin`.
pub fn covariant_derivative(
    alg: &CompactLieAlgebra,
    mu: &DVector<f64>,
    cutoff: usize,
) -> Result<LoopOperator, LoopModelError> {
    alg.require_cartan(mu)?;
    let d = alg.dim();
    let total = (2 * cutoff + 1) * d;
    let ad = alg.ad_matrix(mu);
    let mut matrix = CMat::zeros(total, total);
    for n in -(cutoff as i64)..=(cutoff as i64) {
        let start = ((n + cutoff as i64) as usize) * d;
        let omega_n = std::f64::consts::TAU * n as f64;
        for r in 0..d {
            matrix[(start + r, start + r)] = C64::new(0.0, omega_n);
            for c in 0..d {
                matrix[(start + r, start + c)] += ad[(r, c)];
            }
        }
    }
    Ok(LoopOperator {
        label: format!("covariant_derivative(μ, N={cutoff})"),
        cutoff,
        dim: d,
        matrix,
    })
}

/// `J_μ = ∂_μ/|∂_μ|`: `±i` by the sign of `λ`, zero on the kernel.
pub fn jmu(
    alg: &CompactLieAlgebra,
    mu: &DVector<f64>,
    cutoff: usize,
) -> Result<LoopOperator, LoopModelError> {
    let spec = SpectralData::new(alg, mu, cutoff)?;
    Ok(spec.operator("J_mu", |l| {
        if l.abs() <= KERNEL_TOL {
            C64::new(0.0, 0.0)
        } else {
            C64::new(0.0, l.signum())
        }
    }))
}

/// `D_μ`: `|∂_μ|` off the kernel, the identity on it.
pub fn dmu(
    alg: &CompactLieAlgebra,
    mu: &DVector<f64>,
    cutoff: usize,
) -> Result<LoopOperator, LoopModelError> {
    let spec = SpectralData::new(alg, mu, cutoff)?;
    Ok(spec.operator("D_mu", |l| {
        if l.abs() <= KERNEL_TOL {
            C64::new(1.0, 0.0)
        } else {
            C64::new(l.abs(), 0.0)
        }
    }))
}

/// Smoothing profile for the cutoff operator: strictly positive, equal to
/// `|t|` outside `(−ε, ε)`. The default blend is `χ(t) = (t² + ε²)/(2ε)`
/// inside the window, so `χ(0) = ε/2`.
#[derive(Clone, Copy)]
pub struct ChiProfile {
    pub eps: f64,
    blend: fn(f64, f64) -> f64,
}

impl ChiProfile {
    pub fn quadratic(eps: f64) -> Self {
        assert!(eps > 0.0);
        ChiProfile {
            eps,
            blend: |t, eps| (t * t + eps * eps) / (2.0 * eps),
        }
    }

    /// Custom profile inside the window; the caller promises `χ = |t|`
    /// outside, strict positivity is checked against the sampled spectrum.
    pub fn custom(eps: f64, blend: fn(f64, f64) -> f64) -> Self {
        assert!(eps > 0.0);
        ChiProfile { eps, blend }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t.abs() >= self.eps {
            t.abs()
        } else {
            (self.blend)(t, self.eps)
        }
    }
}

impl std::fmt::Debug for ChiProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChiProfile {{ eps: {} }}", self.eps)
    }
}

/// The cutoff operator `χ(∂_μ)`, its square root, and the rank of its
/// difference from `D_μ`.
#[derive(Debug)]
pub struct ChiCutoff {
    pub op: LoopOperator,
    pub sqrt_op: LoopOperator,
    /// Rank of `χ(∂_μ) − D_μ` by spectral count (threshold `1e−8`).
    pub finite_rank_diff: usize,
    /// The spectral prediction: kernel modes with `χ(0) ≠ 1` plus nonzero
    /// eigenvalues inside the window with `χ(λ) ≠ |λ|`.
    pub predicted_rank: usize,
}

pub fn chi_cutoff(
    alg: &CompactLieAlgebra,
    mu: &DVector<f64>,
    cutoff: usize,
    chi: &ChiProfile,
) -> Result<ChiCutoff, LoopModelError> {
    let spec = SpectralData::new(alg, mu, cutoff)?;
    for (_, _, l) in spec.eigenvalues() {
        let v = chi.eval(l);
        if v <= 0.0 {
            return Err(LoopModelError::ChiNotPositive { t: l, value: v });
        }
    }
    let op = spec.operator("chi(d_mu)", |l| C64::new(chi.eval(l), 0.0));
    let sqrt_op = spec.operator("chi(d_mu)^1/2", |l| C64::new(chi.eval(l).sqrt(), 0.0));
    let mut finite_rank_diff = 0usize;
    let mut predicted = 0usize;
    for (_, _, l) in spec.eigenvalues() {
        let d_val = if l.abs() <= KERNEL_TOL { 1.0 } else { l.abs() };
        if (chi.eval(l) - d_val).abs() > 1e-8 {
            finite_rank_diff += 1;
        }
        let in_kernel = l.abs() <= KERNEL_TOL;
        if (in_kernel && (chi.eval(0.0) - 1.0).abs() > 1e-8)
            || (!in_kernel && l.abs() < chi.eps && (chi.eval(l) - l.abs()).abs() > 1e-8)
        {
            predicted += 1;
        }
    }
    Ok(ChiCutoff {
        op,
        sqrt_op,
        finite_rank_diff,
        predicted_rank: predicted,
    })
}

/// The projections of the connection construction over orbits:
/// `R: loops → 𝔤` evaluates kernel loops at `t = 0`; `S: 𝔤 → loops` embeds
/// the stabilizer `𝔤_a` as twisted-constant loops `Ad_{exp(−tμ)}X`.
#[derive(Clone, Debug)]
pub struct Projections {
    /// `dim × total` matrix.
    pub r: CMat,
    /// `total × dim` matrix.
    pub s: CMat,
    pub kernel_dim: usize,
}

pub fn rmu_smu(
    alg: &CompactLieAlgebra,
    mu: &DVector<f64>,
    cutoff: usize,
) -> Result<Projections, LoopModelError> {
    let spec = SpectralData::new(alg, mu, cutoff)?;
    let d = alg.dim();
    let total = (2 * cutoff + 1) * d;
    let kernel = spec.kernel_pairs();
    let mut s = CMat::zeros(total, d);
    for &(n, k) in &kernel {
        let u = spec.basis.column(k);
        let start = ((n + cutoff as i64) as usize) * d;
        for b in 0..d {
            for a in 0..d {
                s[(start + b, a)] += u[b] * u[a].conj();
            }
        }
    }
    let r = s.adjoint();
    Ok(Projections {
        r,
        s,
        kernel_dim: kernel.len(),
    })
}
