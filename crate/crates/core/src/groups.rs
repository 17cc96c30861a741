//! Finite groups given by multiplication tables.
//!
//! Element `0` is always the identity. Dihedral groups `D_q` index `ρ^a σ^b`
//! as `a + q·b`, so `ρ = 1` and `σ = q`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Default bound on `|G|` for subgroup enumeration.
pub const SUBGROUP_LIMIT: usize = 48;

/// How a group was built; kept for serialization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Dihedral(usize),
    Cyclic(usize),
    Product(Vec<GroupDescriptor>),
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DihedralGenerators {
    pub q: usize,
    pub rho: usize,
    pub sigma: usize,
}

/// A subgroup as a strictly increasing list of element indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    /// Sort key used everywhere subgroups are listed.
    fn key(&self) -> (usize, &[usize]) {
        (self.elements.len(), &self.elements)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elements)
    }
}

/// A conjugacy class of subgroups; `representative` is the lexicographically smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub members: Vec<Subgroup>,
}

struct Inner {
    n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    descriptor: GroupDescriptor,
    dihedral: Option<DihedralGenerators>,
    classes: Option<Vec<SubgroupClass>>,
}

/// A finite group. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteGroup(Arc<Inner>);

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.n == other.0.n && self.0.mul == other.0.mul)
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({:?}, order {})", self.0.descriptor, self.0.n)
    }
}

impl FiniteGroup {
    /// Validates a table and builds the group.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("entry {x} in row {i} is out of range")));
            }
        }
        for i in 0..n {
            if mul[0][i] != i || mul[i][0] != i {
                return Err(Error::InvalidGroup(format!("element 0 is not an identity for {i}")));
            }
        }
        for i in 0..n {
            let mut seen_r = vec![false; n];
            let mut seen_c = vec![false; n];
            for j in 0..n {
                if core::mem::replace(&mut seen_r[mul[i][j]], true) {
                    return Err(Error::InvalidGroup(format!("row {i} is not a permutation")));
                }
                if core::mem::replace(&mut seen_c[mul[j][i]], true) {
                    return Err(Error::InvalidGroup(format!("column {i} is not a permutation")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails for ({a},{b},{c})")));
                    }
                }
            }
        }
        let flat: Vec<usize> = mul.into_iter().flatten().collect();
        Ok(Self::build(n, flat, GroupDescriptor::Table, None))
    }

    fn build(n: usize, mul: Vec<usize>, descriptor: GroupDescriptor, dihedral: Option<DihedralGenerators>) -> Self {
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
        }
        let mut g = Inner { n, mul, inv, descriptor, dihedral, classes: None };
        if n <= SUBGROUP_LIMIT {
            let classes = compute_subgroup_classes(&FiniteGroup(Arc::new(Inner {
                n,
                mul: g.mul.clone(),
                inv: g.inv.clone(),
                descriptor: GroupDescriptor::Table,
                dihedral: None,
                classes: None,
            })));
            g.classes = Some(classes);
        }
        FiniteGroup(Arc::new(g))
    }

    /// `D_q` of order `2q`, `q` odd and greater than one.
    pub fn dihedral(q: usize) -> Result<Self> {
        if q < 3 || q.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("dihedral group needs odd q > 1, got {q}")));
        }
        let n = 2 * q;
        let mut mul = vec![0; n * n];
        for x in 0..n {
            let (a, b) = (x % q, x / q);
            for y in 0..n {
                let (c, d) = (y % q, y / q);
                let e = if b == 0 { (a + c) % q } else { (a + q - c) % q };
                mul[x * n + y] = e + q * ((b + d) % 2);
            }
        }
        let gens = DihedralGenerators { q, rho: 1, sigma: q };
        Ok(Self::build(n, mul, GroupDescriptor::Dihedral(q), Some(gens)))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic group of order 0".into()));
        }
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = (a + b) % n;
            }
        }
        Ok(Self::build(n, mul, GroupDescriptor::Cyclic(n), None))
    }

    /// Direct product; the first factor's index varies fastest.
    pub fn product(factors: &[FiniteGroup]) -> Result<Self> {
        if factors.is_empty() {
            return Self::cyclic(1);
        }
        let orders: Vec<usize> = factors.iter().map(|f| f.order()).collect();
        let n: usize = orders.iter().product();
        let split = |mut x: usize| -> Vec<usize> {
            orders
                .iter()
                .map(|&m| {
                    let r = x % m;
                    x /= m;
                    r
                })
                .collect()
        };
        let mut mul = vec![0; n * n];
        for x in 0..n {
            let xs = split(x);
            for y in 0..n {
                let ys = split(y);
                let mut z = 0;
                for k in (0..factors.len()).rev() {
                    z = z * orders[k] + factors[k].mul(xs[k], ys[k]);
                }
                mul[x * n + y] = z;
            }
        }
        let desc = GroupDescriptor::Product(factors.iter().map(|f| f.descriptor().clone()).collect());
        Ok(Self::build(n, mul, desc, None))
    }

    pub fn order(&self) -> usize {
        self.0.n
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.0.descriptor
    }

    pub fn dihedral_generators(&self) -> Option<DihedralGenerators> {
        self.0.dihedral
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul[a * self.0.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inv[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.0.mul.chunks(self.0.n).map(|r| r.to_vec()).collect()
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, g);
        }
        r
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// `g h g⁻¹`
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.0.n
    }

    /// Element conjugacy classes, each sorted, ordered by minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|g| self.conjugate(g, x)).collect();
            for &y in &class {
                seen[y] = true;
            }
            out.push(class.into_iter().collect());
        }
        out
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: self.elements().collect() }
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    stack.push(y);
                }
            }
        }
        Subgroup { elements: (0..self.order()).filter(|&i| mask[i]).collect() }
    }

    /// Validates a list of elements as a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut e: Vec<usize> = elements.to_vec();
        e.sort_unstable();
        e.dedup();
        if let Some(&x) = e.iter().find(|&&x| x >= self.order()) {
            return Err(Error::InvalidSubgroup(format!("element {x} out of range")));
        }
        if e.first() != Some(&0) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        let s = Subgroup { elements: e };
        for &a in s.elements() {
            for &b in s.elements() {
                if !s.contains(self.mul(a, b)) {
                    return Err(Error::InvalidSubgroup(format!("not closed: {a}*{b} = {}", self.mul(a, b))));
                }
            }
        }
        Ok(s)
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut e: Vec<usize> = h.elements().iter().map(|&x| self.conjugate(g, x)).collect();
        e.sort_unstable();
        Subgroup { elements: e }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements().all(|g| self.conjugate_subgroup(g, h) == *h)
    }

    /// Conjugacy classes of subgroups, sorted by order and then elements of the representative.
    pub fn subgroup_classes(&self) -> Result<Vec<SubgroupClass>> {
        self.subgroup_classes_with_limit(SUBGROUP_LIMIT)
    }

    pub fn subgroup_classes_with_limit(&self, limit: usize) -> Result<Vec<SubgroupClass>> {
        if self.order() > limit {
            return Err(Error::ResourceLimit(format!(
                "subgroup enumeration limited to order {limit}, group has order {}",
                self.order()
            )));
        }
        Ok(match &self.0.classes {
            Some(c) => c.clone(),
            None => compute_subgroup_classes(self),
        })
    }

    /// All subgroups, sorted by order then elements.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        let mut v: Vec<Subgroup> = self.subgroup_classes()?.into_iter().flat_map(|c| c.members).collect();
        v.sort_by(|a, b| a.key().cmp(&b.key()));
        Ok(v)
    }

    /// Class representative of a subgroup.
    pub fn canonical_subgroup(&self, h: &Subgroup) -> Result<Subgroup> {
        self.subgroup_classes()?
            .into_iter()
            .find(|c| c.members.contains(h))
            .map(|c| c.representative)
            .ok_or_else(|| Error::InvalidSubgroup(format!("{h:?} is not a subgroup")))
    }

    /// Lexicographically smallest conjugate, computed without enumeration.
    pub fn min_conjugate(&self, h: &Subgroup) -> Subgroup {
        self.elements().map(|g| self.conjugate_subgroup(g, h)).min().expect("nonempty group")
    }

    /// Smallest generator if `h` is cyclic.
    pub fn cyclic_generator(&self, h: &Subgroup) -> Option<usize> {
        h.elements().iter().copied().find(|&x| self.element_order(x) == h.order())
    }

    /// Whether `h` is dihedral of order `2m` with `m` odd and at least 3.
    pub fn is_dihedral_2odd(&self, h: &Subgroup) -> bool {
        let n = h.order();
        if n < 6 || n % 4 != 2 {
            return false;
        }
        let m = n / 2;
        let Some(r) = h.elements().iter().copied().find(|&x| self.element_order(x) == m) else {
            return false;
        };
        let rot = self.generate(&[r]);
        h.elements().iter().all(|&x| rot.contains(x) || self.element_order(x) == 2)
    }

    /// A small generating set, chosen greedily by largest closure then smallest index.
    pub fn generating_set(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = self.trivial_subgroup();
        while cur.order() < h.order() {
            let mut best: Option<(usize, usize)> = None;
            for &x in h.elements() {
                if cur.contains(x) {
                    continue;
                }
                let mut g = gens.clone();
                g.push(x);
                let size = self.generate(&g).order();
                if best.is_none_or(|(_, s)| size > s) {
                    best = Some((x, size));
                }
            }
            let (x, _) = best.expect("proper subgroup leaves an element");
            gens.push(x);
            cur = self.generate(&gens);
        }
        gens
    }

    /// Left cosets of `h`.
    pub fn coset_space(&self, h: &Subgroup) -> Result<CosetSpace> {
        let h = self.subgroup(h.elements())?;
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &x in h.elements() {
                coset_of[self.mul(g, x)] = idx;
            }
        }
        let action: Vec<Vec<usize>> =
            (0..n).map(|g| reps.iter().map(|&r| coset_of[self.mul(g, r)]).collect()).collect();
        Ok(CosetSpace { subgroup: h, reps, coset_of, action })
    }

    /// `Ρ = ⟨ρ⟩` and `Σ = ⟨σ⟩` of a dihedral group.
    pub fn dihedral_subgroups(&self) -> Option<(Subgroup, Subgroup)> {
        let d = self.0.dihedral?;
        Some((self.generate(&[d.rho]), self.generate(&[d.sigma])))
    }
}

/// Left cosets `gH` ordered by minimal representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSpace {
    pub subgroup: Subgroup,
    /// Minimal element of each coset.
    pub reps: Vec<usize>,
    /// Coset index of each element.
    pub coset_of: Vec<usize>,
    /// `action[g][i]` is the coset `g · reps[i] H`.
    pub action: Vec<Vec<usize>>,
}

impl CosetSpace {
    pub fn points(&self) -> usize {
        self.reps.len()
    }
}

fn compute_subgroup_classes(g: &FiniteGroup) -> Vec<SubgroupClass> {
    let n = g.order();
    let cyclic: BTreeSet<Subgroup> = (0..n).map(|x| g.generate(&[x])).collect();
    let cyclic: Vec<Subgroup> = cyclic.into_iter().collect();
    // every subgroup is a join of cyclic subgroups
    let mut known: BTreeSet<Subgroup> = cyclic.iter().cloned().collect();
    let mut frontier: Vec<Subgroup> = cyclic.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for c in &cyclic {
                if c.is_subgroup_of(s) {
                    continue;
                }
                let mut gens = g.generating_set_fast(s);
                gens.push(g.cyclic_generator(c).expect("cyclic"));
                let j = g.generate(&gens);
                if known.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut classes: BTreeMap<Subgroup, Vec<Subgroup>> = BTreeMap::new();
    let mut assigned: BTreeSet<Subgroup> = BTreeSet::new();
    for s in &known {
        if assigned.contains(s) {
            continue;
        }
        let members: BTreeSet<Subgroup> = (0..n).map(|x| g.conjugate_subgroup(x, s)).collect();
        let members: Vec<Subgroup> = members.into_iter().collect();
        assigned.extend(members.iter().cloned());
        classes.insert(members[0].clone(), members);
    }
    let mut out: Vec<SubgroupClass> =
        classes.into_iter().map(|(representative, members)| SubgroupClass { representative, members }).collect();
    out.sort_by(|a, b| a.representative.key().cmp(&b.representative.key()));
    out
}

impl FiniteGroup {
    /// Cheap generating set: elements added in index order whenever they enlarge the span.
    fn generating_set_fast(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = self.trivial_subgroup();
        for &x in h.elements() {
            if !cur.contains(x) {
                gens.push(x);
                cur = self.generate(&gens);
            }
        }
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_relation() {
        let g = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(g.order(), 6);
        let d = g.dihedral_generators().unwrap();
        assert_eq!(g.element_order(d.rho), 3);
        assert_eq!(g.element_order(d.sigma), 2);
        assert_eq!(g.conjugate(d.sigma, d.rho), g.inv(d.rho));
        assert!(FiniteGroup::dihedral(4).is_err());
        assert!(FiniteGroup::dihedral(1).is_err());
    }

    #[test]
    fn broken_table() {
        assert_eq!(FiniteGroup::cyclic(1).unwrap().order(), 1);
        // a loop that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table(t) {
            Err(Error::InvalidGroup(m)) => assert!(m.contains("associativity")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn subgroup_classes_small() {
        let g = FiniteGroup::dihedral(3).unwrap();
        let c = g.subgroup_classes().unwrap();
        let sizes: Vec<(usize, usize)> = c.iter().map(|c| (c.representative.order(), c.members.len())).collect();
        assert_eq!(sizes, [(1, 1), (2, 3), (3, 1), (6, 1)]);
        let c4 = FiniteGroup::cyclic(4).unwrap().subgroup_classes().unwrap();
        assert_eq!(c4.len(), 3);
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v4 = FiniteGroup::product(&[c2.clone(), c2]).unwrap();
        let s = v4.all_subgroups().unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.iter().all(|h| v4.is_normal(h)));
    }

    #[test]
    fn elementary_abelian_needs_three_generators() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroup::product(&[c2.clone(), c2.clone(), c2]).unwrap();
        // 1 + 7 + 7 + 1 subgroups of (Z/2)^3
        assert_eq!(g.all_subgroups().unwrap().len(), 16);
    }

    #[test]
    fn coset_spaces() {
        let g = FiniteGroup::dihedral(3).unwrap();
        let (rho, sigma) = g.dihedral_subgroups().unwrap();
        assert_eq!(rho.order(), 3);
        let x = g.coset_space(&sigma).unwrap();
        assert_eq!(x.points(), 3);
        let p = &x.action[1];
        assert!((0..3).all(|i| p[i] != i));
        let whole = g.coset_space(&g.whole()).unwrap();
        assert_eq!(whole.points(), 1);
        let reg = g.coset_space(&g.trivial_subgroup()).unwrap();
        assert_eq!(reg.points(), 6);
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for i in 0..3 {
                    assert_eq!(x.action[ab][i], x.action[a][x.action[b][i]]);
                }
            }
        }
    }

    #[test]
    fn detection() {
        let g = FiniteGroup::dihedral(5).unwrap();
        assert!(g.is_dihedral_2odd(&g.whole()));
        let (rho, sigma) = g.dihedral_subgroups().unwrap();
        assert_eq!(g.cyclic_generator(&rho), Some(1));
        assert!(g.cyclic_generator(&g.whole()).is_none());
        assert_eq!(g.cyclic_generator(&sigma), Some(5));
        assert_eq!(g.generating_set(&g.whole()).len(), 2);
    }

    #[test]
    fn limit() {
        let g = FiniteGroup::cyclic(50).unwrap();
        assert!(matches!(g.subgroup_classes(), Err(Error::ResourceLimit(_))));
        assert_eq!(g.subgroup_classes_with_limit(64).unwrap().len(), 6);
    }
}
