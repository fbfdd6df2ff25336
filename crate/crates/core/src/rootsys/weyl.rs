//! Finite Weyl groups: enumeration with reduced words, exact matrices on `t*`.

use super::{rat, Rat, RootSysError, RootSystem, Weight};
use num::{One, Zero};
use std::collections::BTreeMap;

/// Exact `rank × rank` rational matrix acting on simple-root coordinates.
pub(crate) type RatMatrix = Vec<Vec<Rat>>;

pub(crate) fn mat_identity(rank: usize) -> RatMatrix {
    (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

pub(crate) fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

pub(crate) fn mat_apply(m: &RatMatrix, w: &Weight) -> Weight {
    let n = m.len();
    let mut out = vec![Rat::zero(); n];
    for i in 0..n {
        for j in 0..n {
            if !m[i][j].is_zero() && !w.0[j].is_zero() {
                out[i] += &m[i][j] * &w.0[j];
            }
        }
    }
    Weight(out)
}

/// Gauss–Jordan inverse; the matrices here are tiny (rank ≤ 3) and exact.
pub(crate) fn mat_inverse(m: &RatMatrix) -> Result<RatMatrix, RootSysError> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = mat_identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| RootSysError::Inconsistent("singular Weyl matrix".into()))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Ok(inv)
}

/// Matrix of the simple reflection `s_i`: column `j` holds the coordinates
/// of `s_i(α_j) = α_j − C_ji α_i`.
pub(crate) fn simple_reflection_matrix(rs: &RootSystem, i: usize) -> RatMatrix {
    let rank = rs.rank();
    let mut m = mat_identity(rank);
    for j in 0..rank {
        if i == j {
            m[i][j] = -Rat::one();
        } else {
            m[i][j] = m[i][j].clone() - rat(rs.cartan_matrix()[j][i]);
        }
    }
    m
}

/// An element of the finite Weyl group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// A reduced word in simple-reflection indices.
    pub word: Vec<usize>,
    /// Exact matrix of the action on simple-root coordinates of `t*`.
    pub matrix: RatMatrix,
    pub length: usize,
    /// `(-1)^length`.
    pub sign: i8,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            word: Vec::new(),
            matrix: mat_identity(rank),
            length: 0,
            sign: 1,
        }
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        mat_apply(&self.matrix, w)
    }

    /// `w⁻¹(x)`, through the exact inverse of the stored matrix.
    pub fn apply_inverse(&self, w: &Weight) -> Weight {
        let inv = mat_inverse(&self.matrix).expect("Weyl matrices are invertible");
        mat_apply(&inv, w)
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }
}

/// Default cap on the enumeration; every supported group is far smaller.
pub const WEYL_GROUP_CAP: usize = 10_000;

/// Enumerate the full Weyl group by breadth-first products of simple
/// reflections. Each element carries a reduced word (BFS depth realizes the
/// Coxeter length), its exact matrix, and its sign.
pub fn weyl_group(rs: &RootSystem) -> Result<Vec<WeylElement>, RootSysError> {
    weyl_group_capped(rs, WEYL_GROUP_CAP)
}

pub fn weyl_group_capped(
    rs: &RootSystem,
    cap: usize,
) -> Result<Vec<WeylElement>, RootSysError> {
    let rank = rs.rank();
    let generators: Vec<RatMatrix> = (0..rank)
        .map(|i| simple_reflection_matrix(rs, i))
        .collect();

    let mut seen: BTreeMap<RatMatrix, usize> = BTreeMap::new();
    let identity = WeylElement::identity(rank);
    seen.insert(identity.matrix.clone(), 0);
    let mut elements = vec![identity];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &idx in &frontier {
            let (base_word, base_matrix, base_len) = {
                let e = &elements[idx];
                (e.word.clone(), e.matrix.clone(), e.length)
            };
            for (i, gen) in generators.iter().enumerate() {
                let m = mat_mul(&base_matrix, gen);
                if seen.contains_key(&m) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(RootSysError::WeylCapExceeded(cap));
                }
                let mut word = base_word.clone();
                word.push(i);
                let length = base_len + 1;
                seen.insert(m.clone(), elements.len());
                elements.push(WeylElement {
                    word,
                    matrix: m,
                    length,
                    sign: if length % 2 == 0 { 1 } else { -1 },
                });
                next.push(elements.len() - 1);
            }
        }
        frontier = next;
    }
    Ok(elements)
}

/// Locate the enumerated element with the given matrix (canonical reduced
/// word and length). Used when composing elements.
pub(crate) fn lookup_by_matrix<'a>(
    group: &'a [WeylElement],
    m: &RatMatrix,
) -> Result<&'a WeylElement, RootSysError> {
    group
        .iter()
        .find(|e| &e.matrix == m)
        .ok_or_else(|| RootSysError::Inconsistent("matrix not in Weyl group".into()))
}

/// Number of positive roots sent to negatives: the inversion count.
pub fn inversion_count(rs: &RootSystem, w: &WeylElement) -> usize {
    rs.positive_roots()
        .iter()
        .filter(|r| {
            let image = w.apply(r);
            !image.is_positive_root_vector()
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, LieType};

    fn group_for(label: &str) -> (RootSystem, Vec<WeylElement>) {
        let (ty, rank) = LieType::parse(label).unwrap();
        let rs = build_root_system(ty, rank).unwrap();
        let w = weyl_group(&rs).unwrap();
        (rs, w)
    }

    #[test]
    fn orders_match_closed_forms() {
        // |W(A_n)| = (n+1)!, |W(B_n)| = 2^n n!, |W(G_2)| = 12.
        for (label, order) in [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("B3", 48), ("G2", 12)]
        {
            let (_, group) = group_for(label);
            assert_eq!(group.len(), order, "order of W({label})");
        }
    }

    #[test]
    fn a1_lengths() {
        let (_, group) = group_for("A1");
        let mut lengths: Vec<usize> = group.iter().map(|e| e.length).collect();
        lengths.sort_unstable();
        assert_eq!(lengths, vec![0, 1]);
    }

    #[test]
    fn a2_longest_element() {
        let (_, group) = group_for("A2");
        assert_eq!(group.iter().map(|e| e.length).max(), Some(3));
    }

    #[test]
    fn length_equals_inversion_count() {
        for label in ["A2", "B2", "G2"] {
            let (rs, group) = group_for(label);
            for e in &group {
                assert_eq!(e.length, inversion_count(&rs, e), "{label}: {:?}", e.word);
                assert_eq!(e.sign as i64, if e.length % 2 == 0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn matrices_preserve_pairing() {
        let (rs, group) = group_for("G2");
        let x = Weight::from_ints(&[1, 2]);
        let y = Weight::from_ints(&[-3, 1]);
        for e in &group {
            assert_eq!(
                rs.pairing(&e.apply(&x), &e.apply(&y)),
                rs.pairing(&x, &y),
                "B not preserved by {:?}",
                e.word
            );
        }
    }

    #[test]
    fn word_recomputes_matrix() {
        let (rs, group) = group_for("B2");
        for e in &group {
            let mut m = mat_identity(rs.rank());
            for &i in &e.word {
                m = mat_mul(&m, &simple_reflection_matrix(&rs, i));
            }
            assert_eq!(m, e.matrix);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let (_, group) = group_for("G2");
        for e in group.iter().take(6) {
            let inv = mat_inverse(&e.matrix).unwrap();
            assert_eq!(mat_mul(&inv, &e.matrix), mat_identity(2));
        }
    }
}
