//! Permutation characters and Brauer relations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactla::{hermite_normal_form, integer_kernel, IntMatrix};
use crate::groups::{FiniteGroup, Subgroup};
use crate::int::Int;

/// Fixed-coset counts: rows are subgroup classes, columns element classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermCharMatrix {
    pub subgroups: Vec<Subgroup>,
    /// Element conjugacy classes ordered by minimal element.
    pub classes: Vec<Vec<usize>>,
    pub entries: Vec<Vec<usize>>,
}

/// Number of cosets `xH` fixed by `g`.
pub fn fixed_cosets(group: &FiniteGroup, h: &Subgroup, g: usize) -> usize {
    // x H is fixed by g iff x⁻¹ g x ∈ H; each coset is counted |H| times
    let hits = group.elements().filter(|&x| h.contains(group.conjugate(group.inv(x), g))).count();
    hits / h.order()
}

pub fn perm_char_matrix(group: &FiniteGroup) -> Result<PermCharMatrix> {
    let subgroups: Vec<Subgroup> = group.subgroup_classes()?.into_iter().map(|c| c.representative).collect();
    let classes = group.conjugacy_classes();
    let entries = subgroups
        .iter()
        .map(|h| classes.iter().map(|c| fixed_cosets(group, h, c[0])).collect())
        .collect();
    Ok(PermCharMatrix { subgroups, classes, entries })
}

/// `Σ n_H H` over subgroup class representatives, sorted, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerRelation {
    group: FiniteGroup,
    terms: Vec<(Subgroup, i64)>,
}

impl BrauerRelation {
    /// Canonicalizes: conjugates are merged onto class representatives.
    /// Does not check the character condition.
    pub fn new(group: &FiniteGroup, terms: &[(Subgroup, i64)]) -> Result<Self> {
        let mut acc: BTreeMap<(usize, Subgroup), i64> = BTreeMap::new();
        for (h, c) in terms {
            let h = group.subgroup(h.elements())?;
            let rep = group.canonical_subgroup(&h)?;
            *acc.entry((rep.order(), rep)).or_insert(0) += c;
        }
        let terms = acc.into_iter().filter(|(_, c)| *c != 0).map(|((_, h), c)| (h, c)).collect();
        Ok(BrauerRelation { group: group.clone(), terms })
    }

    /// Like [`BrauerRelation::new`] but fails when the characters do not cancel.
    pub fn checked(group: &FiniteGroup, terms: &[(Subgroup, i64)]) -> Result<Self> {
        let r = Self::new(group, terms)?;
        match r.check() {
            BrauerCheck::Relation => Ok(r),
            BrauerCheck::Witness { class_rep, value } => Err(Error::NotBrauerRelation(format!(
                "character sum is {value} at element {class_rep}"
            ))),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn terms(&self) -> &[(Subgroup, i64)] {
        &self.terms
    }

    /// Coefficient of the conjugacy class of `h`.
    pub fn coefficient(&self, h: &Subgroup) -> i64 {
        let Ok(rep) = self.group.canonical_subgroup(h) else { return 0 };
        self.terms.iter().find(|(s, _)| *s == rep).map_or(0, |(_, c)| *c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn negate(&self) -> BrauerRelation {
        BrauerRelation { group: self.group.clone(), terms: self.terms.iter().map(|(h, c)| (h.clone(), -c)).collect() }
    }

    /// Signed character sum on every element class.
    pub fn check(&self) -> BrauerCheck {
        for c in self.group.conjugacy_classes() {
            let g = c[0];
            let value: i64 = self.terms.iter().map(|(h, n)| n * fixed_cosets(&self.group, h, g) as i64).sum();
            if value != 0 {
                return BrauerCheck::Witness { class_rep: g, value };
            }
        }
        BrauerCheck::Relation
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BrauerCheck {
    Relation,
    /// First element class (by minimal element) where the characters disagree.
    Witness { class_rep: usize, value: i64 },
}

pub fn is_brauer_relation(r: &BrauerRelation) -> BrauerCheck {
    r.check()
}

/// HNF basis of all Brauer relations of `group`.
pub fn relation_lattice(group: &FiniteGroup) -> Result<Vec<BrauerRelation>> {
    let pc = perm_char_matrix(group)?;
    let k = pc.subgroups.len();
    let m = IntMatrix::from_rows(
        k,
        (0..pc.classes.len()).map(|j| (0..k).map(|i| Int::from(pc.entries[i][j])).collect()).collect(),
    );
    let ker = integer_kernel(&m);
    if ker.is_zero() {
        return Ok(Vec::new());
    }
    let hnf = hermite_normal_form(&IntMatrix::from_rows(k, ker.basis_vectors().to_vec()));
    let mut out = Vec::new();
    for row in hnf.to_rows() {
        if row.iter().all(Int::is_zero) {
            continue;
        }
        let terms: Vec<(Subgroup, i64)> = row
            .iter()
            .zip(&pc.subgroups)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, h)| (h.clone(), c.to_i64().expect("small coefficient")))
            .collect();
        out.push(BrauerRelation::new(group, &terms)?);
    }
    Ok(out)
}

/// `1 + 2D − Ρ − 2Σ` in the dihedral group `D_q`.
pub fn dihedral_relation(q: usize) -> Result<BrauerRelation> {
    let g = FiniteGroup::dihedral(q)?;
    dihedral_relation_in(&g)
}

/// The dihedral relation on an existing dihedral group.
pub fn dihedral_relation_in(g: &FiniteGroup) -> Result<BrauerRelation> {
    let (rho, sigma) = g
        .dihedral_subgroups()
        .ok_or_else(|| Error::InvalidArgument("group has no designated dihedral generators".into()))?;
    BrauerRelation::checked(g, &[(g.trivial_subgroup(), 1), (g.whole(), 2), (rho, -1), (sigma, -2)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_rows() {
        let g = FiniteGroup::dihedral(3).unwrap();
        let pc = perm_char_matrix(&g).unwrap();
        let sigma_row = pc.subgroups.iter().position(|h| h.order() == 2).unwrap();
        assert_eq!(pc.entries[sigma_row], [3, 0, 1]);
        assert_eq!(pc.entries[0], [6, 0, 0]);
        assert_eq!(*pc.entries.last().unwrap(), [1, 1, 1]);
    }

    #[test]
    fn checks() {
        assert_eq!(dihedral_relation(3).unwrap().check(), BrauerCheck::Relation);
        assert_eq!(dihedral_relation(15).unwrap().check(), BrauerCheck::Relation);
        assert!(dihedral_relation(2).is_err());
        let g = FiniteGroup::cyclic(3).unwrap();
        let zero = BrauerRelation::new(&g, &[]).unwrap();
        assert_eq!(zero.check(), BrauerCheck::Relation);
        let bad = BrauerRelation::new(&g, &[(g.trivial_subgroup(), 1), (g.whole(), -1)]).unwrap();
        assert!(matches!(bad.check(), BrauerCheck::Witness { class_rep: 0, .. }));
    }

    #[test]
    fn lattices() {
        for p in [2, 3, 5] {
            assert!(relation_lattice(&FiniteGroup::cyclic(p).unwrap()).unwrap().is_empty());
        }
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v4 = FiniteGroup::product(&[c2.clone(), c2]).unwrap();
        let b = relation_lattice(&v4).unwrap();
        assert_eq!(b.len(), 1);
        let coeffs: Vec<i64> = b[0].terms().iter().map(|t| t.1).collect();
        assert!(coeffs == [1, -1, -1, -1, 2] || coeffs == [-1, 1, 1, 1, -2]);
        for q in [3, 5] {
            let g = FiniteGroup::dihedral(q).unwrap();
            let b = relation_lattice(&g).unwrap();
            assert_eq!(b.len(), 1);
            let theta = dihedral_relation_in(&g).unwrap();
            assert!(b[0] == theta || b[0] == theta.negate());
        }
    }

    #[test]
    fn conjugates_merge() {
        let g = FiniteGroup::dihedral(3).unwrap();
        let s1 = g.generate(&[3]);
        let s2 = g.generate(&[4]);
        let r = BrauerRelation::new(&g, &[(s1.clone(), 1), (s2, 1)]).unwrap();
        assert_eq!(r.terms(), &[(g.min_conjugate(&s1), 2)]);
    }
}
