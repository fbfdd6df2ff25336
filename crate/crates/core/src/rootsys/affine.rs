//! Affine roots and the affine Weyl group at level `h∨`.
//!
//! Affine Weyl elements are stored as `(translation, finite part)` pairs with
//! the level-`h∨` action baked in: the group is generated by the finite
//! simple reflections together with the reflection in the affine hyperplane
//! `h∨·H_{(-θ,1)}`, where `H_{(α,n)} = {ξ ∈ t* | B(α,ξ) + n = 0}`.

use super::weyl::{lookup_by_matrix, mat_inverse, mat_mul, WeylElement};
use super::{dual_coxeter, rat, Rat, RootSysError, RootSystem, Weight};
use num::{Signed, ToPrimitive, Zero};

/// A weight of the `T × S¹` action on the complexified loop algebra:
/// a pair `(α, n)` with `α` a root or zero, excluding `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRoot {
    /// A root of the finite system, or the zero vector.
    pub finite_part: Weight,
    /// Fourier mode.
    pub mode: i64,
    /// Weight multiplicity: 1 for real roots, `rank` for `(0, n)`.
    pub multiplicity: usize,
}

impl AffineRoot {
    pub fn is_positive(&self) -> bool {
        self.mode > 0 || (self.mode == 0 && self.finite_part.is_positive_root_vector())
    }
}

/// All affine roots with `|n| ≤ n_max`, with positivity read off from
/// `n > 0`, or `n = 0` and the finite part positive.
pub fn affine_roots(rs: &RootSystem, n_max: i64) -> Vec<AffineRoot> {
    let mut out = Vec::new();
    for n in -n_max..=n_max {
        for alpha in rs.roots() {
            out.push(AffineRoot {
                finite_part: alpha,
                mode: n,
                multiplicity: 1,
            });
        }
        if n != 0 {
            out.push(AffineRoot {
                finite_part: Weight::zero(rs.rank()),
                mode: n,
                multiplicity: rs.rank(),
            });
        }
    }
    out
}

/// Total multiplicity of positive affine roots with `1 ≤ n ≤ n_max`;
/// equals `n_max · (|roots| + rank)`.
pub fn positive_affine_count(rs: &RootSystem, n_max: i64) -> usize {
    affine_roots(rs, n_max)
        .iter()
        .filter(|a| a.is_positive() && a.mode >= 1)
        .map(|a| a.multiplicity)
        .sum()
}

/// An element of the affine Weyl group at level `h∨`, acting on `t*` by
/// `ξ ↦ w_f(ξ) + τ` with `τ ∈ h∨ · B♭(coroot lattice)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineWeylElement {
    pub translation: Weight,
    pub finite_part: WeylElement,
    /// Size of the affine inversion set.
    pub length: usize,
}

/// Cap on the mode range explored when enumerating inversion sets.
const INVERSION_MODE_CAP: i64 = 100_000;

impl AffineWeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        AffineWeylElement {
            translation: Weight::zero(rs.rank()),
            finite_part: WeylElement::identity(rs.rank()),
            length: 0,
        }
    }

    /// Apply to a point of `t*`.
    pub fn apply(&self, xi: &Weight) -> Weight {
        &self.finite_part.apply(xi) + &self.translation
    }

    /// Action on affine roots: `(α, n) ↦ (w_f α, n − B(w_f α, τ)/h∨)`.
    pub fn apply_affine_root(
        &self,
        rs: &RootSystem,
        a: &AffineRoot,
    ) -> Result<AffineRoot, RootSysError> {
        let hv = rat(dual_coxeter(rs)?);
        let alpha = self.finite_part.apply(&a.finite_part);
        let shift = rs.pairing(&alpha, &self.translation) / hv;
        let n = rat(a.mode) - shift;
        if !n.is_integer() {
            return Err(RootSysError::Inconsistent(
                "affine root mode left the integers; translation not in h∨·B♭(coroot lattice)"
                    .into(),
            ));
        }
        let mode = n
            .to_integer()
            .to_i64()
            .ok_or_else(|| RootSysError::Inconsistent("affine mode overflow".into()))?;
        Ok(AffineRoot {
            finite_part: alpha,
            mode,
            multiplicity: a.multiplicity,
        })
    }
}

/// Generators of the affine Weyl group: the finite simple reflections
/// followed by the reflection in `h∨·H_{(-θ,1)}`.
pub fn affine_generators(rs: &RootSystem) -> Result<Vec<AffineWeylElement>, RootSysError> {
    let group = super::weyl_group(rs)?;
    let mut gens = Vec::with_capacity(rs.rank() + 1);
    for i in 0..rs.rank() {
        let m = super::weyl::simple_reflection_matrix(rs, i);
        let finite = lookup_by_matrix(&group, &m)?.clone();
        let mut g = AffineWeylElement {
            translation: Weight::zero(rs.rank()),
            finite_part: finite,
            length: 0,
        };
        g.length = inversion_set(rs, &g)?.len();
        gens.push(g);
    }
    gens.push(affine_theta_reflection(rs, &group)?);
    Ok(gens)
}

/// The reflection in the affine hyperplane `h∨·H_{(-θ,1)}`:
/// `ξ ↦ s_θ(ξ) + h∨·θ`.
pub fn affine_theta_reflection(
    rs: &RootSystem,
    group: &[WeylElement],
) -> Result<AffineWeylElement, RootSysError> {
    let hv = dual_coxeter(rs)?;
    let rank = rs.rank();
    // Matrix of s_θ, column by column.
    let mut m = vec![vec![Rat::zero(); rank]; rank];
    for j in 0..rank {
        let col = rs.reflect(rs.theta(), &rs.simple_roots()[j]);
        for (k, row) in m.iter_mut().enumerate() {
            row[j] = col.0[k].clone();
        }
    }
    let finite = lookup_by_matrix(group, &m)?.clone();
    let mut g = AffineWeylElement {
        translation: rs.theta().scale(&rat(hv)),
        finite_part: finite,
        length: 0,
    };
    g.length = inversion_set(rs, &g)?.len();
    Ok(g)
}

/// Compose two affine elements: `(τ₁,w₁)(τ₂,w₂) = (τ₁ + w₁τ₂, w₁w₂)`.
/// The finite part is canonicalized against the enumerated Weyl group so its
/// word stays reduced.
pub fn affine_compose(
    rs: &RootSystem,
    group: &[WeylElement],
    a: &AffineWeylElement,
    b: &AffineWeylElement,
) -> Result<AffineWeylElement, RootSysError> {
    let translation = &a.translation + &a.finite_part.apply(&b.translation);
    let m = mat_mul(&a.finite_part.matrix, &b.finite_part.matrix);
    let finite = lookup_by_matrix(group, &m)?.clone();
    let mut out = AffineWeylElement {
        translation,
        finite_part: finite,
        length: 0,
    };
    out.length = inversion_set(rs, &out)?.len();
    Ok(out)
}

pub fn affine_inverse(
    rs: &RootSystem,
    group: &[WeylElement],
    w: &AffineWeylElement,
) -> Result<AffineWeylElement, RootSysError> {
    let inv_matrix = mat_inverse(&w.finite_part.matrix)?;
    let finite = lookup_by_matrix(group, &inv_matrix)?.clone();
    let translation = -&finite.apply(&w.translation);
    let mut out = AffineWeylElement {
        translation,
        finite_part: finite,
        length: 0,
    };
    out.length = inversion_set(rs, &out)?.len();
    Ok(out)
}

/// The inversion set `𝔯_aff,+ ∩ w·𝔯_aff,−`: positive affine roots that are
/// images of negative ones. The mode range is grown from the translation
/// part, so the enumeration is complete.
pub fn inversion_set(
    rs: &RootSystem,
    w: &AffineWeylElement,
) -> Result<Vec<AffineRoot>, RootSysError> {
    let hv = rat(dual_coxeter(rs)?);
    // For a negative affine root (β, m), the image mode is m − B(w β, τ)/h∨;
    // it can only become positive for |m| within the pairing range.
    let mut bound = rat(0);
    for alpha in rs.roots() {
        let p = (rs.pairing(&alpha, &w.translation) / &hv).abs();
        if p > bound {
            bound = p;
        }
    }
    let n_max = bound
        .ceil()
        .to_integer()
        .to_i64()
        .ok_or_else(|| RootSysError::Inconsistent("inversion bound overflow".into()))?
        + 1;
    if n_max > INVERSION_MODE_CAP {
        return Err(RootSysError::InversionCapExceeded(n_max));
    }
    let mut out = Vec::new();
    for neg in affine_roots(rs, n_max).iter().filter(|a| !a.is_positive()) {
        let image = w.apply_affine_root(rs, neg)?;
        if image.is_positive() {
            out.push(image);
        }
    }
    Ok(out)
}

/// The shifted weight sum `Σ'α` over the inversion set of `w`.
///
/// For the simple types supported here this equals `ρ − w·ρ` exactly (with
/// `w` acting affinely at level `h∨`); the equality is asserted.
pub fn shifted_weight_sum(
    rs: &RootSystem,
    w: &AffineWeylElement,
) -> Result<Weight, RootSysError> {
    let sum = inversion_set(rs, w)?
        .iter()
        .fold(Weight::zero(rs.rank()), |acc, a| &acc + &a.finite_part);
    let expected = rs.rho() - &w.apply(rs.rho());
    if sum != expected {
        return Err(RootSysError::Inconsistent(format!(
            "Σ'α = {:?} differs from ρ − wρ = {:?}",
            sum, expected
        )));
    }
    Ok(sum)
}

/// Breadth-first enumeration of all affine Weyl elements of length ≤ `max_len`.
pub fn affine_elements_up_to_length(
    rs: &RootSystem,
    max_len: usize,
) -> Result<Vec<AffineWeylElement>, RootSysError> {
    let group = super::weyl_group(rs)?;
    let gens = affine_generators(rs)?;
    let mut elements = vec![AffineWeylElement::identity(rs)];
    let mut seen: Vec<AffineWeylElement> = elements.clone();
    let mut frontier = elements.clone();
    for depth in 1..=max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let prod = affine_compose(rs, &group, w, g)?;
                if seen.iter().any(|e| e == &prod) {
                    continue;
                }
                if prod.length != depth {
                    return Err(RootSysError::Inconsistent(format!(
                        "BFS depth {} disagrees with inversion length {}",
                        depth, prod.length
                    )));
                }
                seen.push(prod.clone());
                next.push(prod);
            }
        }
        elements.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(elements)
}
