//! Finitely presented abelian groups, subquotients of lattices, and the
//! q-index of homomorphisms between them.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::smith::{smith_normal_form, SmithForm};
use crate::error::{Error, Result};
use crate::int::Int;

/// `Z^k / span(columns of relations)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PresentedAbelianGroup {
    generators: usize,
    relations: IntMatrix,
    smith: SmithForm,
}

impl PresentedAbelianGroup {
    pub fn new(relations: IntMatrix) -> Self {
        let smith = smith_normal_form(&relations);
        PresentedAbelianGroup { generators: relations.rows(), relations, smith }
    }

    pub fn free(rank: usize) -> Self {
        Self::new(IntMatrix::zeros(rank, 0))
    }

    /// `Z/d_1 ⊕ ... ⊕ Z/d_k`.
    pub fn cyclic_sum(orders: &[Int]) -> Self {
        Self::new(IntMatrix::diagonal(orders))
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn relation_lattice(&self) -> Lattice {
        Lattice::column_span(&self.relations)
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn free_rank(&self) -> usize {
        self.generators - self.smith.rank()
    }

    /// Elementary divisors greater than one.
    pub fn torsion_divisors(&self) -> Vec<Int> {
        self.smith.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn torsion_order(&self) -> Int {
        self.smith.divisors.iter().cloned().product()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.is_finite() && self.torsion_order().is_one()
    }

    /// Group order, `None` if infinite.
    pub fn order(&self) -> Option<Int> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Whether the element with coordinates `x` is zero.
    pub fn is_zero_element(&self, x: &[Int]) -> bool {
        let y = self.smith.u.mul_vec(x);
        y.iter().enumerate().all(|(i, yi)| match self.smith.divisors.get(i) {
            Some(d) => d.divides(yi),
            None => yi.is_zero(),
        })
    }

    /// Direct sum with block-diagonal relations.
    pub fn direct_sum(parts: &[&PresentedAbelianGroup]) -> Self {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|p| &p.relations).collect();
        Self::new(IntMatrix::block_diag(&blocks))
    }

    /// Canonical invariants `(free rank, divisors > 1)`.
    pub fn invariants(&self) -> (usize, Vec<Int>) {
        (self.free_rank(), self.torsion_divisors())
    }

    /// The torsion subgroup, presented on a basis of the saturated relation lattice.
    /// Returns the group and the matrix whose columns are the generator lifts in `Z^k`.
    pub fn torsion_subgroup(&self) -> (PresentedAbelianGroup, IntMatrix) {
        let rel = self.relation_lattice();
        let sat = rel.saturate();
        let sq = Subquotient::new(sat.clone(), rel).expect("relations lie in their saturation");
        (sq.group, sat.basis_matrix())
    }

    /// Coordinates adapted to `Z^k / sat(relations)`: returns `(s, U, U^-1)` where
    /// `U` is unimodular, `U * sat = span(e_1..e_s)`, and the torsion-free
    /// quotient is read off the trailing `k - s` coordinates of `U x`.
    pub fn free_quotient_coordinates(&self) -> (usize, IntMatrix, IntMatrix) {
        let sat = self.relation_lattice().saturate();
        let f = smith_normal_form(&sat.basis_matrix());
        debug_assert!(f.divisors.iter().all(Int::is_one));
        (f.rank(), f.u, f.u_inv)
    }
}

impl fmt::Debug for PresentedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, d) = self.invariants();
        write!(f, "Z^{} ⊕ {:?}", r, d)
    }
}

/// A subquotient `U/V` of `Z^n` with its abstract presentation on the HNF basis of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    pub top: Lattice,
    pub bottom: Lattice,
    pub group: PresentedAbelianGroup,
}

impl Subquotient {
    pub fn new(top: Lattice, bottom: Lattice) -> Result<Self> {
        let group = subquotient_group(&top, &bottom)?;
        Ok(Subquotient { top, bottom, group })
    }

    pub fn order(&self) -> Option<Int> {
        self.group.order()
    }

    /// Coordinates of an element of `top` on the generators of `group`.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        self.top.coordinates(v)
    }

    /// Order of the kernel of the map `U/V -> U'/V'` induced by `m`, `None` if infinite.
    /// Errors if `m` does not map the pair into the target pair.
    pub fn induced_kernel_order(&self, m: &IntMatrix, target: &Subquotient) -> Result<Option<Int>> {
        for b in self.top.basis_vectors() {
            if !target.top.contains(&m.mul_vec(b)) {
                return Err(Error::Internal("induced map does not preserve the top lattice".into()));
            }
        }
        for b in self.bottom.basis_vectors() {
            if !target.bottom.contains(&m.mul_vec(b)) {
                return Err(Error::Internal("induced map does not preserve the bottom lattice".into()));
            }
        }
        let pre = Lattice::preimage(m, &target.bottom).intersection(&self.top);
        Ok(pre.index_of(&self.bottom))
    }
}

/// `U/V` as an abstract group presented on a basis of `U`.
pub fn subquotient_group(u: &Lattice, v: &Lattice) -> Result<PresentedAbelianGroup> {
    if u.ambient_rank() != v.ambient_rank() {
        return Err(Error::Shape("subquotient lattices live in different ambient spaces".into()));
    }
    let mut cols = Vec::with_capacity(v.rank());
    for b in v.basis_vectors() {
        cols.push(u.coordinates(b).ok_or(Error::NotASubquotient)?);
    }
    Ok(PresentedAbelianGroup::new(IntMatrix::from_columns(u.rank(), &cols)))
}

/// Result of a q-index computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QIndex {
    Finite(BigRational),
    Infinite,
}

impl QIndex {
    pub fn finite(self) -> Option<BigRational> {
        match self {
            QIndex::Finite(q) => Some(q),
            QIndex::Infinite => None,
        }
    }
}

/// A homomorphism of presented abelian groups given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: PresentedAbelianGroup,
    pub target: PresentedAbelianGroup,
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: PresentedAbelianGroup, target: PresentedAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count() {
            return Err(Error::Shape(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generator_count(),
                source.generator_count()
            )));
        }
        let trel = target.relation_lattice();
        for j in 0..source.relations().cols() {
            let img = matrix.mul_vec(&source.relations().column(j));
            if !trel.contains(&img) {
                return Err(Error::InvalidArgument(format!(
                    "source relation {j} is not mapped into the target relations"
                )));
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn compose(&self, after: &GroupHom) -> Result<GroupHom> {
        GroupHom::new(self.source.clone(), after.target.clone(), after.matrix.mul(&self.matrix))
    }

    /// Kernel as a lattice of source coordinates (contains the source relations).
    pub fn kernel_lattice(&self) -> Lattice {
        Lattice::preimage(&self.matrix, &self.target.relation_lattice())
    }

    /// `|ker f|`, `None` if infinite.
    pub fn kernel_order(&self) -> Option<Int> {
        self.kernel_lattice().index_of(&self.source.relation_lattice())
    }

    /// `|coker f|`, `None` if infinite.
    pub fn cokernel_order(&self) -> Option<Int> {
        let k = self.target.generator_count();
        let image = Lattice::from_generators(k, self.matrix.columns().into_iter().chain(self.target.relations().columns()));
        image.covolume()
    }

    pub fn qindex(&self) -> QIndex {
        match (self.cokernel_order(), self.kernel_order()) {
            (Some(c), Some(k)) => QIndex::Finite(BigRational::new(c.to_bigint(), k.to_bigint())),
            _ => QIndex::Infinite,
        }
    }

    /// Restriction to torsion subgroups.
    pub fn torsion_part(&self) -> Result<GroupHom> {
        let (ts, lift_s) = self.source.torsion_subgroup();
        let (tt, lift_t) = self.target.torsion_subgroup();
        let tlat = Lattice::column_span(&lift_t);
        let mut cols = Vec::with_capacity(lift_s.cols());
        for j in 0..lift_s.cols() {
            let img = self.matrix.mul_vec(&lift_s.column(j));
            cols.push(tlat.coordinates(&img).ok_or_else(|| {
                Error::Internal("torsion is not mapped into torsion".into())
            })?);
        }
        GroupHom::new(ts, tt, IntMatrix::from_columns(lift_t.cols(), &cols))
    }

    /// Induced map on torsion-free quotients, as a matrix between free groups.
    pub fn free_part(&self) -> GroupHom {
        let (ss, _us, us_inv) = self.source.free_quotient_coordinates();
        let (st, ut, _) = self.target.free_quotient_coordinates();
        let rs = self.source.generator_count() - ss;
        let rt = self.target.generator_count() - st;
        let mut m = IntMatrix::zeros(rt, rs);
        for j in 0..rs {
            let lift = us_inv.column(ss + j);
            let img = ut.mul_vec(&self.matrix.mul_vec(&lift));
            for i in 0..rt {
                m[(i, j)] = img[st + i].clone();
            }
        }
        GroupHom {
            source: PresentedAbelianGroup::free(rs),
            target: PresentedAbelianGroup::free(rt),
            matrix: m,
        }
    }

    /// `Hom(-, Z)` dual: the transpose of the free part.
    pub fn dual(&self) -> GroupHom {
        let f = self.free_part();
        GroupHom { source: f.target, target: f.source, matrix: f.matrix.transpose() }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_data(rows, cols, (0..rows * cols).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect())
}

/// A random homomorphism with finite q-index into `target` (or into a random
/// group). The source relations are scaled multiples of the full preimage
/// of the target relations, so the kernel is finite and usually nontrivial.
pub fn random_hom(seed: u64, target: Option<&PresentedAbelianGroup>) -> GroupHom {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let b = match target {
            Some(t) => t.clone(),
            None => {
                let k = rng.gen_range(1..5);
                let r = rng.gen_range(0..=k);
                PresentedAbelianGroup::new(random_matrix(&mut rng, k, r, 4))
            }
        };
        let ka = rng.gen_range(1..5);
        let f = random_matrix(&mut rng, b.generator_count(), ka, 3);
        let pre = Lattice::preimage(&f, &b.relation_lattice());
        let rels: Vec<Vec<Int>> = pre
            .basis_vectors()
            .iter()
            .map(|v| {
                let c = Int::from(rng.gen_range(1..=3i64));
                v.iter().map(|x| x * &c).collect()
            })
            .collect();
        let a = PresentedAbelianGroup::new(IntMatrix::from_columns(ka, &rels));
        let hom = GroupHom::new(a, b, f).expect("relations map into relations");
        if hom.qindex() != QIndex::Infinite {
            return hom;
        }
    }
}

/// q-index `|coker f| / |ker f|` of a homomorphism.
pub fn qindex(f: &GroupHom) -> QIndex {
    f.qindex()
}

pub(crate) fn ratio(num: &Int, den: &Int) -> BigRational {
    BigRational::new(num.to_bigint(), den.to_bigint())
}

pub(crate) fn int_ratio(x: &Int) -> BigRational {
    BigRational::from_integer(x.to_bigint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn i(x: i64) -> Int {
        Int::from(x)
    }

    #[test]
    fn subquotient_examples() {
        let z2 = Lattice::full(2);
        let v = Lattice::from_generators(2, [vec![i(2), i(0)], vec![i(0), i(3)]]);
        let g = subquotient_group(&z2, &v).unwrap();
        assert_eq!(g.torsion_divisors(), [i(6)]);
        assert_eq!(g.order(), Some(i(6)));
        let g = subquotient_group(&z2, &Lattice::zero(2)).unwrap();
        assert_eq!(g.free_rank(), 2);
        let u = Lattice::from_generators(2, [vec![i(1), i(1)], vec![i(2), i(0)]]);
        let v = Lattice::from_generators(2, [vec![i(2), i(2)], vec![i(4), i(0)]]);
        let g = subquotient_group(&u, &v).unwrap();
        assert_eq!(g.torsion_divisors(), [i(2), i(2)]);
        assert_eq!(subquotient_group(&v, &u), Err(Error::NotASubquotient));
    }

    #[test]
    fn qindex_examples() {
        let z = PresentedAbelianGroup::free(1);
        let six = GroupHom::new(z.clone(), z.clone(), IntMatrix::from_i64_rows(&[&[6]])).unwrap();
        assert_eq!(six.qindex(), QIndex::Finite(ratio(&i(6), &i(1))));
        let z2 = PresentedAbelianGroup::free(2);
        let d = GroupHom::new(z2.clone(), z2.clone(), IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(d.qindex(), QIndex::Finite(ratio(&i(6), &i(1))));
        let proj = GroupHom::new(z2, z, IntMatrix::from_i64_rows(&[&[1, 0]])).unwrap();
        assert_eq!(proj.qindex(), QIndex::Infinite);
        let z4 = PresentedAbelianGroup::cyclic_sum(&[i(4)]);
        let z2c = PresentedAbelianGroup::cyclic_sum(&[i(2)]);
        let s = GroupHom::new(z4, z2c, IntMatrix::from_i64_rows(&[&[1]])).unwrap();
        assert_eq!(s.qindex(), QIndex::Finite(ratio(&i(1), &i(2))));
    }

    #[test]
    fn dual_split_on_torsion() {
        let z2 = PresentedAbelianGroup::cyclic_sum(&[i(2)]);
        let f = GroupHom::new(z2, PresentedAbelianGroup::free(0), IntMatrix::zeros(0, 1)).unwrap();
        let q = |g: &GroupHom| match g.qindex() {
            QIndex::Finite(x) => x,
            QIndex::Infinite => panic!("infinite"),
        };
        let t = q(&f.torsion_part().unwrap());
        assert_eq!(q(&f), ratio(&i(1), &i(2)));
        assert_eq!(q(&f), q(&f.dual()) * &t);
        assert_ne!(q(&f), q(&f.dual()) / &t);
    }

    #[test]
    fn hom_must_respect_relations() {
        let z4 = PresentedAbelianGroup::cyclic_sum(&[i(4)]);
        let z3 = PresentedAbelianGroup::cyclic_sum(&[i(3)]);
        assert!(GroupHom::new(z4, z3, IntMatrix::from_i64_rows(&[&[1]])).is_err());
    }
}
