//! Formal Laurent characters on the root lattice, and the Weyl denominator
//! identity `∏_{α>0}(1 − t^{−α}) = Σ_w (−1)^{l(w)} t^{wρ−ρ}`.

use super::weyl::weyl_group;
use super::{RootSysError, RootSystem, Weight};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

/// A finitely supported integer combination of lattice weights `t^λ`,
/// with `λ` stored as integer coordinates in the simple-root basis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentCharacter {
    terms: BTreeMap<Vec<i64>, i64>,
}

impl LaurentCharacter {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], 1)
    }

    pub fn monomial(weight: Vec<i64>, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(weight, coeff);
        }
        LaurentCharacter { terms }
    }

    /// `t^λ` for a root-lattice weight; errors if `λ` has fractional
    /// coordinates.
    pub fn from_weight(w: &Weight, coeff: i64) -> Result<Self, RootSysError> {
        let coords = w.integer_coords().ok_or_else(|| {
            RootSysError::Inconsistent(format!(
                "weight {:?} does not lie in the root lattice",
                w
            ))
        })?;
        Ok(Self::monomial(coords, coeff))
    }

    pub fn coeff(&self, weight: &[i64]) -> i64 {
        self.terms.get(weight).copied().unwrap_or(0)
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &i64)> {
        self.terms.iter()
    }

    fn insert(&mut self, weight: Vec<i64>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(weight) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }
}

impl Add for &LaurentCharacter {
    type Output = LaurentCharacter;
    fn add(self, rhs: &LaurentCharacter) -> LaurentCharacter {
        let mut out = self.clone();
        for (w, &c) in rhs.terms.iter() {
            out.insert(w.clone(), c);
        }
        out
    }
}

impl Sub for &LaurentCharacter {
    type Output = LaurentCharacter;
    fn sub(self, rhs: &LaurentCharacter) -> LaurentCharacter {
        let mut out = self.clone();
        for (w, &c) in rhs.terms.iter() {
            out.insert(w.clone(), -c);
        }
        out
    }
}

impl Mul for &LaurentCharacter {
    type Output = LaurentCharacter;
    fn mul(self, rhs: &LaurentCharacter) -> LaurentCharacter {
        let mut out = LaurentCharacter::zero();
        for (a, &ca) in self.terms.iter() {
            for (b, &cb) in rhs.terms.iter() {
                let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.insert(sum, ca * cb);
            }
        }
        out
    }
}

impl Serialize for LaurentCharacter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            weight: &'a [i64],
            coeff: i64,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(w, &c)| Term { weight: w, coeff: c })
            .collect();
        let mut st = serializer.serialize_struct("LaurentCharacter", 1)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Both sides of the Weyl denominator identity, expanded exactly.
#[derive(Clone, Debug, Serialize)]
pub struct DenominatorReport {
    pub lhs: LaurentCharacter,
    pub rhs: LaurentCharacter,
    pub equal: bool,
}

pub fn weyl_denominator_identity(rs: &RootSystem) -> Result<DenominatorReport, RootSysError> {
    let rank = rs.rank();
    let mut lhs = LaurentCharacter::one(rank);
    for alpha in rs.positive_roots() {
        let factor =
            &LaurentCharacter::one(rank) - &LaurentCharacter::from_weight(&(-alpha), 1)?;
        lhs = &lhs * &factor;
    }
    let mut rhs = LaurentCharacter::zero();
    for w in weyl_group(rs)? {
        let shift = &w.apply(rs.rho()) - rs.rho();
        let term = LaurentCharacter::from_weight(&shift, w.sign as i64)?;
        rhs = &rhs + &term;
    }
    let equal = lhs == rhs;
    Ok(DenominatorReport { lhs, rhs, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, LieType};

    #[test]
    fn a1_expansion_by_hand() {
        // lhs = 1 − t^{−α}; rhs has the same two monomials since sρ − ρ = −α.
        let rs = build_root_system(LieType::A, 1).unwrap();
        let report = weyl_denominator_identity(&rs).unwrap();
        assert!(report.equal);
        assert_eq!(report.lhs.coeff(&[0]), 1);
        assert_eq!(report.lhs.coeff(&[-1]), -1);
        assert_eq!(report.lhs.support_len(), 2);
    }

    #[test]
    fn a2_six_monomials() {
        let rs = build_root_system(LieType::A, 2).unwrap();
        let report = weyl_denominator_identity(&rs).unwrap();
        assert!(report.equal);
        assert_eq!(report.rhs.support_len(), 6);
        // coefficient of t^0 comes from w = e alone
        assert_eq!(report.rhs.coeff(&[0, 0]), 1);
    }

    #[test]
    fn holds_for_all_supported_types() {
        for label in ["A1", "A2", "A3", "B2", "B3", "G2"] {
            let (ty, rank) = LieType::parse(label).unwrap();
            let rs = build_root_system(ty, rank).unwrap();
            assert!(
                weyl_denominator_identity(&rs).unwrap().equal,
                "denominator identity failed for {label}"
            );
        }
    }

    #[test]
    fn ring_ops_are_exact() {
        let a = LaurentCharacter::monomial(vec![1, 0], 2);
        let b = LaurentCharacter::monomial(vec![-1, 3], 5);
        let prod = &a * &b;
        assert_eq!(prod.coeff(&[0, 3]), 10);
        let cancel = &a - &a;
        assert_eq!(cancel, LaurentCharacter::zero());
        assert_eq!(cancel.support_len(), 0);
    }

    #[test]
    fn json_terms_are_sorted() {
        let c = &LaurentCharacter::monomial(vec![1], 1) + &LaurentCharacter::monomial(vec![-2], 3);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(
            json,
            r#"{"terms":[{"weight":[-2],"coeff":3},{"weight":[1],"coeff":1}]}"#
        );
    }
}
