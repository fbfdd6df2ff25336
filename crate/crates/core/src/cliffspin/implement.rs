//! Intertwiners between spinor modules, unitary implementers of orthogonal
//! maps, and the subspace factorization `S_H ≅ S_W ⊗̂ S_{H'}`.

use super::{check_orthogonal, CliffSpinError, EuclideanSpace, SpinorModule};
use crate::linalg::{cfrob, cmax_abs, CMat, RMat, C64};
use nalgebra::DVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// The solution space of `T ρ₀(v) = ρ₁(v) T` over a basis of `H`.
#[derive(Clone, Debug)]
pub struct IntertwinerSpace {
    pub dimension: usize,
    pub parity: Parity,
    /// A Frobenius-normalized basis element with a fixed phase.
    pub basis: CMat,
    /// Dimension of `ker(J₀ + J₁)`.
    pub kernel_dim: usize,
}

/// Products `ρ(e_{i₁})···ρ(e_{i_k})` over all index subsets, ascending order
/// (or descending when `reverse`, which yields the inverses for unit-square
/// generators). Table is indexed by bitmask.
fn subset_products(gens: &[CMat], reverse: bool) -> Vec<CMat> {
    let d = gens.len();
    let f = gens[0].nrows();
    let mut table: Vec<CMat> = Vec::with_capacity(1 << d);
    table.push(CMat::identity(f, f));
    for mask in 1usize..(1 << d) {
        let high = (usize::BITS - 1 - mask.leading_zeros()) as usize;
        let rest = mask & !(1 << high);
        let m = if reverse {
            &gens[high] * &table[rest]
        } else {
            &table[rest] * &gens[high]
        };
        table.push(m);
    }
    table
}

/// Projector onto the solution space of the intertwining system
/// `T a_k = b_k T`, where `a_k, b_k` are the Clifford actions of a common
/// g-orthonormal frame in the source and target modules.
///
/// Averaging conjugation over the finite group of Clifford monomials
/// `T ↦ 2^{-d} Σ_S b(e_S) · T · a(e_S)^{-1}` solves the linear system
/// exactly: its fixed points are precisely the intertwiners, and the
/// average is the orthogonal projection onto them.
struct IntertwinerProjector {
    forward: Vec<CMat>,
    inverse: Vec<CMat>,
}

impl IntertwinerProjector {
    fn new(a_ops: &[CMat], b_ops: &[CMat]) -> Self {
        IntertwinerProjector {
            forward: subset_products(b_ops, false),
            inverse: subset_products(a_ops, true),
        }
    }

    fn project(&self, x: &CMat) -> CMat {
        let rows = self.forward[0].nrows();
        let cols = self.inverse[0].ncols();
        let mut acc = CMat::zeros(rows, cols);
        for (f, i) in self.forward.iter().zip(&self.inverse) {
            acc += f * x * i;
        }
        acc / C64::new(self.forward.len() as f64, 0.0)
    }

    /// Rank of the projector: `2^{-d} Σ_S tr b(e_S) · tr a(e_S)^{-1}`.
    fn rank(&self) -> Result<usize, CliffSpinError> {
        let total: C64 = self
            .forward
            .iter()
            .zip(&self.inverse)
            .map(|(f, i)| f.trace() * i.trace())
            .sum();
        let value = total / C64::new(self.forward.len() as f64, 0.0);
        let rounded = value.re.round();
        if (value.re - rounded).abs() > 1e-6 || value.im.abs() > 1e-6 || rounded < 0.0 {
            return Err(CliffSpinError::Degenerate(format!(
                "intertwiner projector trace {value} is not a nonnegative integer"
            )));
        }
        Ok(rounded as usize)
    }

    /// Orthonormal basis of the image, found by projecting matrix units.
    fn image_basis(&self, rank: usize) -> Result<Vec<CMat>, CliffSpinError> {
        let rows = self.forward[0].nrows();
        let cols = self.inverse[0].ncols();
        let mut basis: Vec<CMat> = Vec::with_capacity(rank);
        'probe: for r in 0..rows {
            for c in 0..cols {
                if basis.len() == rank {
                    break 'probe;
                }
                let mut probe = CMat::zeros(rows, cols);
                probe[(r, c)] = C64::new(1.0, 0.0);
                let mut t = self.project(&probe);
                for b in &basis {
                    let coeff: C64 = b.iter().zip(t.iter()).map(|(x, y)| x.conj() * y).sum();
                    t -= b * coeff;
                }
                let norm = cfrob(&t);
                if norm > 1e-6 {
                    basis.push(t / C64::new(norm, 0.0));
                }
            }
        }
        if basis.len() != rank {
            return Err(CliffSpinError::Degenerate(format!(
                "found {} independent intertwiners, expected {}",
                basis.len(),
                rank
            )));
        }
        Ok(basis)
    }
}

/// Solve `T a_k = b_k T` over a common orthonormal frame: returns the
/// solution-space dimension and an orthonormal basis.
fn solve_intertwiners(
    a_ops: &[CMat],
    b_ops: &[CMat],
) -> Result<(usize, Vec<CMat>), CliffSpinError> {
    let projector = IntertwinerProjector::new(a_ops, b_ops);
    let rank = projector.rank()?;
    let basis = projector.image_basis(rank)?;
    Ok((rank, basis))
}

/// Fix a deterministic representative: Frobenius norm 1, first entry of
/// significant modulus made real positive.
fn normalize_phase(t: &CMat) -> CMat {
    let norm = cfrob(t);
    let t = t / C64::new(norm, 0.0);
    let lead = t
        .iter()
        .find(|z| z.norm() > 1e-8)
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    t * phase
}

fn parity_of(t: &CMat, s0: &SpinorModule, s1: &SpinorModule) -> Result<Parity, CliffSpinError> {
    let g1 = s1.grading_operator();
    let g0 = s0.grading_operator();
    let conj = &g1 * t * &g0;
    let even = cfrob(&(&conj - t));
    let odd = cfrob(&(&conj + t));
    let scale = cfrob(t).max(1e-12);
    if even <= 1e-8 * scale {
        Ok(Parity::Even)
    } else if odd <= 1e-8 * scale {
        Ok(Parity::Odd)
    } else {
        Err(CliffSpinError::IndefiniteParity(even.min(odd)))
    }
}

/// The space `Hom_{Cl(H)}(S₀, S₁)` for two spinor modules over the same
/// Euclidean space. In finite dimensions it is one-dimensional, and its
/// parity equals the parity of `½ dim ker(J₀ + J₁)`.
pub fn intertwiner_space(
    s0: &SpinorModule,
    s1: &SpinorModule,
) -> Result<IntertwinerSpace, CliffSpinError> {
    let d = s0.space().dim();
    if d != s1.space().dim() {
        return Err(CliffSpinError::DimensionMismatch(format!(
            "module spaces have dims {} and {}",
            d,
            s1.space().dim()
        )));
    }
    let frame = s0.frame();
    let a_ops: Vec<CMat> = frame.iter().map(|v| s0.apply(v)).collect();
    let b_ops: Vec<CMat> = frame.iter().map(|v| s1.apply(v)).collect();
    let (dimension, basis) = solve_intertwiners(&a_ops, &b_ops)?;
    if dimension != 1 {
        return Err(CliffSpinError::IntertwinerDimension {
            expected: 1,
            got: dimension,
        });
    }
    let t = normalize_phase(&basis[0]);
    let parity = parity_of(&t, s0, s1)?;

    let jsum = s0.complex_structure() + s1.complex_structure();
    let kernel_dim = jsum
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s < 1e-9)
        .count();
    Ok(IntertwinerSpace {
        dimension,
        parity,
        basis: t,
        kernel_dim,
    })
}

/// Unitary implementer of a g-orthogonal map: `Û ρ(v) Û⁻¹ = ρ(Av)`.
///
/// The phase is fixed by making the first significant entry of `Û·vacuum`
/// real positive.
pub fn implementer(a: &RMat, s: &SpinorModule) -> Result<CMat, CliffSpinError> {
    let d = s.space().dim();
    if a.nrows() != d || a.ncols() != d {
        return Err(CliffSpinError::DimensionMismatch(format!(
            "A is {}×{}, space dim {}",
            a.nrows(),
            a.ncols(),
            d
        )));
    }
    check_orthogonal(a, s.space().metric())?;
    let frame = s.frame();
    let a_ops: Vec<CMat> = frame.iter().map(|v| s.apply(v)).collect();
    let b_ops: Vec<CMat> = frame.iter().map(|v| s.apply(&(a * v))).collect();
    let (dimension, basis) = solve_intertwiners(&a_ops, &b_ops)?;
    if dimension != 1 {
        return Err(CliffSpinError::IntertwinerDimension {
            expected: 1,
            got: dimension,
        });
    }
    let t = &basis[0];

    // Scale to a unitary: TᴴT must already be scalar.
    let tht = t.adjoint() * t;
    let c = tht.trace() / C64::new(s.fock_dim() as f64, 0.0);
    let defect = cmax_abs(&(&tht - CMat::identity(s.fock_dim(), s.fock_dim()) * c));
    if defect > 1e-8 * c.norm().max(1e-12) {
        return Err(CliffSpinError::NonScalar(defect));
    }
    let u = t / C64::new(c.re.sqrt(), 0.0);

    let vac = u.column(s.vacuum_index());
    let lead = vac
        .iter()
        .find(|z| z.norm() > 1e-8)
        .copied()
        .expect("unitary column cannot vanish");
    let phase = lead.conj() / lead.norm();
    let u = u * phase;

    // Final guard on the defining property at the stated tolerance.
    let mut worst = 0.0f64;
    for k in 0..d {
        let lhs = &u * s.action(k) * u.adjoint();
        let rhs = s.apply(&a.column(k).into_owned());
        worst = worst.max(cmax_abs(&(lhs - rhs)));
    }
    if worst > 1e-10 * (1.0 + crate::linalg::max_abs(a)) * d as f64 {
        return Err(CliffSpinError::NotOrthogonal(worst));
    }
    Ok(u)
}

/// The factorization data for an even-dimensional subspace `W ⊂ H`:
/// `S_W = Hom_{Cl(H')}(S_{H'}, S_H)` with the residual `Cl(W)` action.
#[derive(Clone, Debug)]
pub struct SubspaceFactorization {
    /// Orthonormal basis of the Hom space (each element maps `S_{H'} → S_H`).
    pub hom_basis: Vec<CMat>,
    /// Clifford action of each supplied `W`-basis vector on the Hom space.
    pub clifford_w: Vec<CMat>,
    /// Gram matrix of the supplied `W` basis.
    pub metric_w: RMat,
}

/// Compute `S_W = Hom_{Cl(H')}(S_{H'}, S_H)` for a `g`-orthogonal splitting
/// `H = W ⊕ H'` and verify it is a spinor module over `Cl(W)`.
///
/// `j` is an orthogonal complex structure on `H`; `j_prime` one on `H'`,
/// given as an operator on `H` that annihilates `W`. The residual action of
/// `u ∈ W` on a hom element `T` is `ρ_H(u) ∘ T ∘ Γ'`, with `Γ'` the grading
/// of `S_{H'}`.
pub fn subspace_factorization(
    space: &EuclideanSpace,
    w_basis: &[DVector<f64>],
    j: &super::ComplexStructureOperator,
    j_prime: &RMat,
) -> Result<SubspaceFactorization, CliffSpinError> {
    let d = space.dim();
    let wdim = w_basis.len();
    if wdim == 0 || wdim % 2 != 0 || wdim >= d {
        return Err(CliffSpinError::OddDimension(wdim));
    }

    let s_h = super::spinor_module(space, j)?;

    // Orthonormal basis of H' = W^⊥ by projecting the standard basis.
    let mut frame: Vec<DVector<f64>> = Vec::new();
    // First orthonormalize W itself to project against it.
    let mut w_frame: Vec<DVector<f64>> = Vec::new();
    for w in w_basis {
        let mut v = w.clone();
        for b in &w_frame {
            let c = space.inner(b, &v);
            v -= b * c;
        }
        let n = space.inner(&v, &v).sqrt();
        if n < 1e-10 {
            return Err(CliffSpinError::Degenerate("W basis is dependent".into()));
        }
        w_frame.push(v / n);
    }
    for a in 0..d {
        if frame.len() == d - wdim {
            break;
        }
        let mut v = DVector::zeros(d);
        v[a] = 1.0;
        for _ in 0..2 {
            for b in w_frame.iter().chain(frame.iter()) {
                let c = space.inner(b, &v);
                v -= b * c;
            }
        }
        let n = space.inner(&v, &v).sqrt();
        if n > 1e-8 {
            frame.push(v / n);
        }
    }
    if frame.len() != d - wdim {
        return Err(CliffSpinError::Degenerate(
            "could not complete a basis of W^⊥".into(),
        ));
    }

    // j_prime must annihilate W and restrict to a complex structure on H'.
    for w in &w_frame {
        if (j_prime * w).norm() > 1e-10 {
            return Err(CliffSpinError::Degenerate(
                "J' does not annihilate W".into(),
            ));
        }
    }
    let dprime = d - wdim;
    let jp_restricted = RMat::from_fn(dprime, dprime, |r, c| {
        space.inner(&frame[r], &(j_prime * &frame[c]))
    });
    let space_prime = EuclideanSpace::standard(dprime)?;
    let jp = super::ComplexStructureOperator::new(jp_restricted)?;
    let s_hp = super::spinor_module(&space_prime, &jp)?;

    // Intertwining over H': T ρ'(v') = ρ_H(v) T for v running over the
    // orthonormal frame of H'.
    let a_ops: Vec<CMat> = (0..dprime)
        .map(|k| s_hp.action(k).clone())
        .collect();
    let b_ops: Vec<CMat> = frame.iter().map(|v| s_h.apply(v)).collect();
    let (dimension, mut basis) = solve_intertwiners(&a_ops, &b_ops)?;
    let expected = 1usize << (wdim / 2);
    if dimension != expected {
        return Err(CliffSpinError::IntertwinerDimension {
            expected,
            got: dimension,
        });
    }
    for t in basis.iter_mut() {
        *t = normalize_phase(t);
    }

    // Residual Cl(W) action in the hom basis.
    let gamma_prime = s_hp.grading_operator();
    let act = |u: &DVector<f64>, t: &CMat| -> CMat { s_h.apply(u) * t * &gamma_prime };
    let dim_hom = basis.len();
    let mut clifford_w = Vec::with_capacity(wdim);
    let metric_w = RMat::from_fn(wdim, wdim, |r, c| space.inner(&w_basis[r], &w_basis[c]));
    for u in w_basis {
        let mut m = CMat::zeros(dim_hom, dim_hom);
        for (col, t) in basis.iter().enumerate() {
            let image = act(u, t);
            for (row, tb) in basis.iter().enumerate() {
                // ⟨T_row, image⟩ with the Frobenius hermitian product
                let coeff: C64 = tb
                    .iter()
                    .zip(image.iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                m[(row, col)] = coeff;
            }
        }
        clifford_w.push(m);
    }

    // Clifford relations for the W action.
    let mut worst = 0.0f64;
    for a in 0..wdim {
        for b in a..wdim {
            let anti = &clifford_w[a] * &clifford_w[b] + &clifford_w[b] * &clifford_w[a];
            let expected =
                CMat::identity(dim_hom, dim_hom) * C64::new(2.0 * metric_w[(a, b)], 0.0);
            worst = worst.max(cmax_abs(&(anti - expected)));
        }
    }
    if worst > 1e-10 {
        return Err(CliffSpinError::Degenerate(format!(
            "residual Cl(W) relations violated at {worst:.3e}"
        )));
    }

    Ok(SubspaceFactorization {
        hom_basis: basis,
        clifford_w,
        metric_w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliffspin::{spinor_module, ComplexStructureOperator, random_orthogonal};
    use crate::linalg::frob;
    use crate::symplin::standard_complex_structure;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn standard_module(dim: usize) -> SpinorModule {
        let space = EuclideanSpace::standard(dim).unwrap();
        let j = ComplexStructureOperator::new(standard_complex_structure(dim)).unwrap();
        spinor_module(&space, &j).unwrap()
    }

    #[test]
    fn self_intertwiner_is_identity() {
        let s = standard_module(4);
        let space = intertwiner_space(&s, &s).unwrap();
        assert_eq!(space.dimension, 1);
        assert_eq!(space.parity, Parity::Even);
        assert_eq!(space.kernel_dim, 0);
        // basis ∝ identity
        let t = &space.basis;
        let scaled = t / t[(0, 0)];
        assert!(cmax_abs(&(&scaled - CMat::identity(4, 4))) < 1e-9);
    }

    #[test]
    fn reversed_block_gives_odd_parity() {
        // dim 4; J1 reverses J0 on one invariant 2-plane: ker(J0+J1) has
        // dimension 2, so the intertwiner parity is odd.
        let space = EuclideanSpace::standard(4).unwrap();
        let j0m = standard_complex_structure(4);
        let mut j1m = j0m.clone();
        j1m[(0, 1)] = 1.0;
        j1m[(1, 0)] = -1.0;
        let j0 = ComplexStructureOperator::new(j0m).unwrap();
        let j1 = ComplexStructureOperator::new(j1m).unwrap();
        let s0 = spinor_module(&space, &j0).unwrap();
        let s1 = spinor_module(&space, &j1).unwrap();
        let iw = intertwiner_space(&s0, &s1).unwrap();
        assert_eq!(iw.kernel_dim, 2);
        assert_eq!(iw.parity, Parity::Odd);
    }

    #[test]
    fn fully_reversed_structure_dim2() {
        let space = EuclideanSpace::standard(2).unwrap();
        let j0 = ComplexStructureOperator::new(standard_complex_structure(2)).unwrap();
        let j1 = ComplexStructureOperator::new(-standard_complex_structure(2)).unwrap();
        let s0 = spinor_module(&space, &j0).unwrap();
        let s1 = spinor_module(&space, &j1).unwrap();
        let iw = intertwiner_space(&s0, &s1).unwrap();
        assert_eq!(iw.kernel_dim, 2);
        assert_eq!(iw.parity, Parity::Odd);
    }

    #[test]
    fn parity_matches_kernel_rule_on_family() {
        // Flip k of the m complex planes: ker(J0+J1) has dim 2k.
        for dim in [4usize, 6, 8] {
            let space = EuclideanSpace::standard(dim).unwrap();
            let j0m = standard_complex_structure(dim);
            for k in 0..=dim / 2 {
                let mut j1m = j0m.clone();
                for p in 0..k {
                    j1m[(2 * p, 2 * p + 1)] = 1.0;
                    j1m[(2 * p + 1, 2 * p)] = -1.0;
                }
                let s0 = spinor_module(
                    &space,
                    &ComplexStructureOperator::new(j0m.clone()).unwrap(),
                )
                .unwrap();
                let s1 =
                    spinor_module(&space, &ComplexStructureOperator::new(j1m).unwrap()).unwrap();
                let iw = intertwiner_space(&s0, &s1).unwrap();
                assert_eq!(iw.kernel_dim, 2 * k);
                let expected = if k % 2 == 0 { Parity::Even } else { Parity::Odd };
                assert_eq!(iw.parity, expected, "dim {dim}, k {k}");
            }
        }
    }

    #[test]
    fn implementer_of_identity() {
        let s = standard_module(4);
        let u = implementer(&RMat::identity(4, 4), &s).unwrap();
        assert!(cmax_abs(&(&u - CMat::identity(4, 4))) < 1e-10);
    }

    #[test]
    fn implementer_of_j_is_degree_phase() {
        let s = standard_module(4);
        let u = implementer(&standard_complex_structure(4), &s).unwrap();
        // diagonal with entries i^{|S|} up to a global phase; normalize by
        // the vacuum entry.
        let u0 = u[(0, 0)];
        for (k, subset) in s.subsets().iter().enumerate() {
            let expected = C64::new(0.0, 1.0).powu(subset.len() as u32) * u0;
            assert!((u[(k, k)] - expected).norm() < 1e-9);
            for l in 0..s.fock_dim() {
                if l != k {
                    assert!(u[(k, l)].norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn implementer_of_reflection_is_odd() {
        let s = standard_module(2);
        let a = RMat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let u = implementer(&a, &s).unwrap();
        let gamma = s.grading_operator();
        // odd: Γ U Γ = −U
        assert!(cmax_abs(&(&gamma * &u * &gamma + &u)) < 1e-10);
    }

    #[test]
    fn implementer_property_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for dim in [2usize, 4, 6] {
            let s = standard_module(dim);
            let g = RMat::identity(dim, dim);
            for _ in 0..4 {
                let a = random_orthogonal(&g, 0.8, &mut rng);
                let u = implementer(&a, &s).unwrap();
                let unit = cmax_abs(&(u.adjoint() * &u - CMat::identity(s.fock_dim(), s.fock_dim())));
                assert!(unit < 1e-10, "unitarity defect {unit}");
            }
        }
    }

    #[test]
    fn implementer_is_projective_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        let s = standard_module(4);
        let g = RMat::identity(4, 4);
        let a = random_orthogonal(&g, 0.5, &mut rng);
        let b = random_orthogonal(&g, 0.5, &mut rng);
        let ua = implementer(&a, &s).unwrap();
        let ub = implementer(&b, &s).unwrap();
        let uab = implementer(&(&a * &b), &s).unwrap();
        let prod = &ua * &ub;
        // equal up to a unit scalar
        let ratio = (uab.adjoint() * &prod).trace() / C64::new(s.fock_dim() as f64, 0.0);
        assert!((ratio.norm() - 1.0).abs() < 1e-9, "|λ| = {}", ratio.norm());
        assert!(cmax_abs(&(&prod - &uab * ratio)) < 1e-9);
    }

    #[test]
    fn non_orthogonal_map_rejected() {
        let s = standard_module(2);
        let a = RMat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!(matches!(
            implementer(&a, &s),
            Err(CliffSpinError::NotOrthogonal(_))
        ));
    }

    #[test]
    fn subspace_factorization_r4() {
        let space = EuclideanSpace::standard(4).unwrap();
        let j = ComplexStructureOperator::new(standard_complex_structure(4)).unwrap();
        // W = span(e0, e1), H' = span(e2, e3), J' standard on H'.
        let mut w0 = DVector::zeros(4);
        w0[0] = 1.0;
        let mut w1 = DVector::zeros(4);
        w1[1] = 1.0;
        let mut jp = RMat::zeros(4, 4);
        jp[(3, 2)] = 1.0;
        jp[(2, 3)] = -1.0;
        let fact = subspace_factorization(&space, &[w0, w1], &j, &jp).unwrap();
        // dim S_W = 2^{|W|/2} = 2, and 4 = 2 · 2 counts S_H ≅ S_W ⊗ S_{H'}.
        assert_eq!(fact.hom_basis.len(), 2);
        assert_eq!(fact.hom_basis.len() * 2, 4);
        assert_eq!(fact.clifford_w.len(), 2);
        assert!(frob(&(&fact.metric_w - RMat::identity(2, 2))) < 1e-12);
        // Clifford squares on S_W.
        for (a, m) in fact.clifford_w.iter().enumerate() {
            let sq = m * m;
            let expected = CMat::identity(2, 2) * C64::new(fact.metric_w[(a, a)], 0.0);
            assert!(cmax_abs(&(sq - expected)) < 1e-12);
        }
    }
}
