//! Exact root-system combinatorics for the supported simple types.
//!
//! Everything in this module uses arbitrary-precision rational arithmetic;
//! floating point is deliberately absent. Weights are stored as coordinate
//! vectors in the simple-root basis, and the inner product is the basic one,
//! normalized so the highest root `θ` satisfies `B(θ,θ) = 2`.

mod affine;
mod character;
mod weyl;

pub use affine::{
    affine_compose, affine_elements_up_to_length, affine_generators, affine_inverse,
    affine_roots, affine_theta_reflection, inversion_set, positive_affine_count,
    shifted_weight_sum, AffineRoot, AffineWeylElement,
};
pub use character::{weyl_denominator_identity, DenominatorReport, LaurentCharacter};
pub use weyl::{inversion_count, weyl_group, weyl_group_capped, WeylElement};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use thiserror::Error;

/// Exact rational scalar used throughout the module.
pub type Rat = BigRational;

pub(crate) fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error)]
pub enum RootSysError {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("Weyl group enumeration exceeded cap of {0} elements")]
    WeylCapExceeded(usize),
    #[error("affine inversion enumeration exceeded mode cap {0}")]
    InversionCapExceeded(i64),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// Supported simple Lie types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LieType {
    A,
    B,
    G,
}

impl LieType {
    /// Parse labels like `"A2"`, `"B2"`, `"G2"`.
    pub fn parse(label: &str) -> Result<(LieType, usize), RootSysError> {
        let err = || RootSysError::UnsupportedAlgebra(label.to_string());
        let mut chars = label.chars();
        let ty = match chars.next().ok_or_else(err)? {
            'A' | 'a' => LieType::A,
            'B' | 'b' => LieType::B,
            'G' | 'g' => LieType::G,
            _ => return Err(err()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| err())?;
        Ok((ty, rank))
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieType::A => write!(f, "A"),
            LieType::B => write!(f, "B"),
            LieType::G => write!(f, "G"),
        }
    }
}

/// A vector in `t*`, stored as exact coordinates in the simple-root basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weight(pub Vec<Rat>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Rat::zero(); rank])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &Rat) -> Weight {
        Weight(self.0.iter().map(|c| c * s).collect())
    }

    /// Coordinates as integers, if the weight lies in the root lattice.
    pub fn integer_coords(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().try_into().ok()
                } else {
                    None
                }
            })
            .collect()
    }

    /// All coordinates nonnegative (and not all zero): the positivity test
    /// for root vectors in the simple-root basis.
    pub fn is_positive_root_vector(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|c| !c.is_negative())
    }

    /// Sum of coordinates; the height of a root.
    pub fn height(&self) -> Rat {
        self.0.iter().fold(Rat::zero(), |acc, c| acc + c)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

/// Root datum of a simple Lie algebra in the basic normalization.
#[derive(Clone, Debug)]
pub struct RootSystem {
    lie_type: LieType,
    rank: usize,
    cartan_matrix: Vec<Vec<i64>>,
    /// Gram matrix of the basic inner product on the simple roots.
    gram: Vec<Vec<Rat>>,
    simple_roots: Vec<Weight>,
    positive_roots: Vec<Weight>,
    rho: Weight,
    theta: Weight,
}

/// Build the root system for a supported `(type, rank)` pair.
///
/// The basic inner product is fixed by `B(θ,θ) = 2`; simple-root lengths are
/// set from the standard length ratios of each type.
pub fn build_root_system(lie_type: LieType, rank: usize) -> Result<RootSystem, RootSysError> {
    let (cartan, half_lengths) = cartan_data(lie_type, rank)?;

    // Gram matrix: B(α_i, α_j) = C_ij · (α_j,α_j)/2.
    let gram: Vec<Vec<Rat>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| rat(cartan[i][j]) * &half_lengths[j])
                .collect()
        })
        .collect();
    for i in 0..rank {
        for j in 0..rank {
            if gram[i][j] != gram[j][i] {
                return Err(RootSysError::Inconsistent(
                    "Cartan data produced an asymmetric Gram matrix".into(),
                ));
            }
        }
    }

    let simple_roots: Vec<Weight> = (0..rank)
        .map(|i| {
            let mut coords = vec![Rat::zero(); rank];
            coords[i] = Rat::one();
            Weight(coords)
        })
        .collect();

    let mut rs = RootSystem {
        lie_type,
        rank,
        cartan_matrix: cartan,
        gram,
        simple_roots: simple_roots.clone(),
        positive_roots: Vec::new(),
        rho: Weight::zero(rank),
        theta: Weight::zero(rank),
    };

    // Close the simple roots under the simple reflections; keep positives.
    let mut found: std::collections::BTreeSet<Weight> =
        simple_roots.iter().cloned().collect();
    let mut frontier: Vec<Weight> = simple_roots;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for i in 0..rank {
                let image = rs.simple_reflection_apply(i, beta);
                if image.is_positive_root_vector() && found.insert(image.clone()) {
                    next.push(image);
                }
            }
        }
        frontier = next;
    }
    let mut positive_roots: Vec<Weight> = found.into_iter().collect();
    positive_roots.sort_by_key(|r| (r.height(), r.clone()));
    rs.positive_roots = positive_roots;

    let sum = rs
        .positive_roots
        .iter()
        .fold(Weight::zero(rank), |acc, r| &acc + r);
    rs.rho = sum.scale(&ratio(1, 2));
    rs.theta = rs
        .positive_roots
        .last()
        .cloned()
        .ok_or_else(|| RootSysError::Inconsistent("no positive roots".into()))?;

    rs.verify()?;
    Ok(rs)
}

fn cartan_data(
    lie_type: LieType,
    rank: usize,
) -> Result<(Vec<Vec<i64>>, Vec<Rat>), RootSysError> {
    let unsupported =
        || RootSysError::UnsupportedAlgebra(format!("{}{}", lie_type, rank));
    match lie_type {
        LieType::A => {
            if !(1..=3).contains(&rank) {
                return Err(unsupported());
            }
            let mut c = vec![vec![0i64; rank]; rank];
            for i in 0..rank {
                c[i][i] = 2;
                if i + 1 < rank {
                    c[i][i + 1] = -1;
                    c[i + 1][i] = -1;
                }
            }
            Ok((c, vec![Rat::one(); rank]))
        }
        LieType::B => {
            if !(2..=3).contains(&rank) {
                return Err(unsupported());
            }
            // α_1..α_{rank-1} long, α_rank short with (α,α) = 1.
            let mut c = vec![vec![0i64; rank]; rank];
            for i in 0..rank {
                c[i][i] = 2;
            }
            for i in 0..rank - 1 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            c[rank - 2][rank - 1] = -2;
            let mut hl = vec![Rat::one(); rank];
            hl[rank - 1] = ratio(1, 2);
            Ok((c, hl))
        }
        LieType::G => {
            if rank != 2 {
                return Err(unsupported());
            }
            // α_1 short with (α,α) = 2/3, α_2 long.
            let c = vec![vec![2, -1], vec![-3, 2]];
            Ok((c, vec![ratio(1, 3), Rat::one()]))
        }
    }
}

impl RootSystem {
    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.lie_type, self.rank)
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan_matrix
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    /// All roots, positive then negative.
    pub fn roots(&self) -> Vec<Weight> {
        self.positive_roots
            .iter()
            .cloned()
            .chain(self.positive_roots.iter().map(|r| -r))
            .collect()
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn theta(&self) -> &Weight {
        &self.theta
    }

    /// The basic inner product as a float, for the numerical modules.
    pub fn pairing_f64(&self, a: &Weight, b: &Weight) -> f64 {
        use num::ToPrimitive;
        self.pairing(a, b)
            .to_f64()
            .expect("desk-scale rationals convert to f64")
    }

    /// The basic inner product `B` on `t*`.
    pub fn pairing(&self, a: &Weight, b: &Weight) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            if a.0[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if !b.0[j].is_zero() {
                    acc += &a.0[i] * &self.gram[i][j] * &b.0[j];
                }
            }
        }
        acc
    }

    pub fn is_root(&self, w: &Weight) -> bool {
        self.positive_roots.iter().any(|r| r == w || &(-r) == w)
    }

    pub fn is_positive_root(&self, w: &Weight) -> bool {
        self.positive_roots.iter().any(|r| r == w)
    }

    /// Reflection in the root `alpha` (linear, through the origin).
    pub fn reflect(&self, alpha: &Weight, x: &Weight) -> Weight {
        let coeff = rat(2) * self.pairing(x, alpha) / self.pairing(alpha, alpha);
        x - &alpha.scale(&coeff)
    }

    pub(crate) fn simple_reflection_apply(&self, i: usize, x: &Weight) -> Weight {
        self.reflect(&self.simple_roots[i], x)
    }

    fn verify(&self) -> Result<(), RootSysError> {
        let two = rat(2);
        if self.pairing(&self.theta, &self.theta) != two {
            return Err(RootSysError::Inconsistent(
                "basic normalization violated: B(θ,θ) ≠ 2".into(),
            ));
        }
        let sum = self
            .positive_roots
            .iter()
            .fold(Weight::zero(self.rank), |acc, r| &acc + r);
        if sum.scale(&ratio(1, 2)) != self.rho {
            return Err(RootSysError::Inconsistent("ρ ≠ half-sum".into()));
        }
        for (i, ai) in self.simple_roots.iter().enumerate() {
            for (j, aj) in self.simple_roots.iter().enumerate() {
                let c = rat(2) * self.pairing(ai, aj) / self.pairing(aj, aj);
                if c != rat(self.cartan_matrix[i][j]) {
                    return Err(RootSysError::Inconsistent(
                        "Cartan integers disagree with Gram matrix".into(),
                    ));
                }
            }
        }
        for r in &self.positive_roots {
            if r.integer_coords().is_none() || !r.is_positive_root_vector() {
                return Err(RootSysError::Inconsistent(
                    "positive root with non-integral or negative coordinates".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Dual Coxeter number `h∨ = 1 + B(ρ,θ)`.
///
/// The result is asserted to be a positive integer; a fractional value would
/// signal a broken normalization.
pub fn dual_coxeter(rs: &RootSystem) -> Result<i64, RootSysError> {
    let v = rat(1) + rs.pairing(rs.rho(), rs.theta());
    if !v.is_integer() || !v.is_positive() {
        return Err(RootSysError::Inconsistent(format!(
            "1 + B(ρ,θ) = {} is not a positive integer",
            v
        )));
    }
    v.to_integer()
        .try_into()
        .map_err(|_| RootSysError::Inconsistent("dual Coxeter number overflow".into()))
}

pub(crate) fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

impl Serialize for RootSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // Documented JSON shape: roots as integer coordinate arrays in the
        // simple-root basis; ρ and the Gram matrix as exact rational strings.
        let mut st = serializer.serialize_struct("RootSystem", 7)?;
        st.serialize_field("lie_type", &self.label())?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("cartan_matrix", &self.cartan_matrix)?;
        let positive: Vec<Vec<i64>> = self
            .positive_roots
            .iter()
            .map(|r| r.integer_coords().expect("roots lie in the root lattice"))
            .collect();
        st.serialize_field("positive_roots", &positive)?;
        let rho: Vec<String> = self.rho.0.iter().map(rat_to_string).collect();
        st.serialize_field("rho", &rho)?;
        st.serialize_field(
            "theta",
            &self.theta.integer_coords().expect("θ lies in the root lattice"),
        )?;
        let gram: Vec<Vec<String>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(rat_to_string).collect())
            .collect();
        st.serialize_field("gram", &gram)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_hand_construction() {
        let rs = build_root_system(LieType::A, 1).unwrap();
        assert_eq!(rs.positive_roots().len(), 1);
        let alpha = &rs.positive_roots()[0];
        assert_eq!(rs.rho(), &alpha.scale(&ratio(1, 2)));
        assert_eq!(rs.theta(), alpha);
        assert_eq!(rs.pairing(alpha, alpha), rat(2));
    }

    #[test]
    fn a2_rho_equals_theta() {
        let rs = build_root_system(LieType::A, 2).unwrap();
        assert_eq!(rs.positive_roots().len(), 3);
        let expected = Weight::from_ints(&[1, 1]);
        assert_eq!(rs.rho(), &expected);
        assert_eq!(rs.theta(), &expected);
    }

    #[test]
    fn g2_root_lengths() {
        let rs = build_root_system(LieType::G, 2).unwrap();
        assert_eq!(rs.positive_roots().len(), 6);
        let mut lengths: Vec<Rat> = rs
            .positive_roots()
            .iter()
            .map(|r| rs.pairing(r, r))
            .collect();
        lengths.sort();
        lengths.dedup();
        assert_eq!(lengths, vec![ratio(2, 3), rat(2)]);
        // length ratio squared = 3
        assert_eq!(&lengths[1] / &lengths[0], rat(3));
    }

    #[test]
    fn b2_positive_roots() {
        let rs = build_root_system(LieType::B, 2).unwrap();
        assert_eq!(rs.positive_roots().len(), 4);
        assert_eq!(rs.theta(), &Weight::from_ints(&[1, 2]));
    }

    #[test]
    fn dual_coxeter_values() {
        for (label, expected) in [("A1", 2), ("A2", 3), ("A3", 4), ("B2", 3), ("B3", 5), ("G2", 4)]
        {
            let (ty, rank) = LieType::parse(label).unwrap();
            let rs = build_root_system(ty, rank).unwrap();
            assert_eq!(dual_coxeter(&rs).unwrap(), expected, "h∨ for {label}");
        }
    }

    #[test]
    fn unsupported_algebra_rejected() {
        assert!(matches!(
            build_root_system(LieType::A, 9),
            Err(RootSysError::UnsupportedAlgebra(_))
        ));
        assert!(matches!(
            build_root_system(LieType::G, 3),
            Err(RootSysError::UnsupportedAlgebra(_))
        ));
        assert!(LieType::parse("E8").is_err());
    }

    #[test]
    fn json_shape_is_stable() {
        let rs = build_root_system(LieType::A, 1).unwrap();
        let json = serde_json::to_string(&rs).unwrap();
        assert_eq!(
            json,
            r#"{"lie_type":"A1","rank":1,"cartan_matrix":[[2]],"positive_roots":[[1]],"rho":["1/2"],"theta":[1],"gram":[["2"]]}"#
        );
    }
}
