//! Finitely generated `Z[G]`-modules presented as `Z^n / L` with an explicit
//! matrix for every group element.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{smith_normal_form, IntMatrix, Lattice, PresentedAbelianGroup};
use crate::groups::{FiniteGroup, Subgroup};
use crate::int::Int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    group: FiniteGroup,
    rank: usize,
    relations: Lattice,
    action: Vec<IntMatrix>,
}

impl GModule {
    /// Builds and validates a module.
    pub fn new(group: FiniteGroup, rank: usize, relations: Lattice, action: Vec<IntMatrix>) -> Result<Self> {
        let m = GModule { group, rank, relations, action };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(group: FiniteGroup, rank: usize, relations: Lattice, action: Vec<IntMatrix>) -> Self {
        debug_assert_eq!(action.len(), group.order());
        GModule { group, rank, relations, action }
    }

    /// Expands an action given on generators along the multiplication table,
    /// using `A_{gx} = A_g A_x`, then validates.
    pub fn from_generators(
        group: FiniteGroup,
        rank: usize,
        relations: Lattice,
        generators: &[(usize, IntMatrix)],
    ) -> Result<Self> {
        let n = group.order();
        for (g, a) in generators {
            if *g >= n {
                return Err(Error::InvalidModule(format!("generator {g} is not a group element")));
            }
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::InvalidModule(format!("matrix for generator {g} is not {rank}x{rank}")));
            }
        }
        let mut action: Vec<Option<IntMatrix>> = vec![None; n];
        action[0] = Some(IntMatrix::identity(rank));
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for (x, ax) in generators {
                let gx = group.mul(g, *x);
                if action[gx].is_none() {
                    action[gx] = Some(action[g].as_ref().expect("visited").mul(ax));
                    queue.push_back(gx);
                }
            }
        }
        if let Some(g) = action.iter().position(Option::is_none) {
            return Err(Error::InvalidModule(format!("the given generators do not reach element {g}")));
        }
        Self::new(group, rank, relations, action.into_iter().map(|a| a.expect("checked")).collect())
    }

    /// `Z^k` with trivial action.
    pub fn trivial(group: &FiniteGroup, k: usize) -> Self {
        let action = vec![IntMatrix::identity(k); group.order()];
        Self::new_unchecked(group.clone(), k, Lattice::zero(k), action)
    }

    /// `Z/d` with trivial action.
    pub fn trivial_cyclic(group: &FiniteGroup, d: &Int) -> Self {
        let action = vec![IntMatrix::identity(1); group.order()];
        Self::new_unchecked(group.clone(), 1, Lattice::scaled_full(1, d), action)
    }

    /// `Z[G]` with left multiplication.
    pub fn regular(group: &FiniteGroup) -> Self {
        permutation_module(group, &group.trivial_subgroup()).expect("trivial subgroup")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Rank of the ambient lattice `Z^n`.
    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    /// `Z`-rank of `M`.
    pub fn free_rank(&self) -> usize {
        self.rank - self.relations.rank()
    }

    pub fn is_finite(&self) -> bool {
        self.relations.is_full_rank()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.relations.is_saturated()
    }

    pub fn is_zero(&self) -> bool {
        self.is_finite() && self.relations.covolume().is_some_and(|c| c.is_one())
    }

    /// Order of a finite module.
    pub fn order(&self) -> Option<Int> {
        self.relations.covolume()
    }

    pub fn as_abelian_group(&self) -> PresentedAbelianGroup {
        PresentedAbelianGroup::new(self.relations.basis_matrix())
    }

    /// Checks every module axiom over the whole multiplication table.
    pub fn validate(&self) -> Result<()> {
        let (n, k) = (self.group.order(), self.rank);
        if self.relations.ambient_rank() != k {
            return Err(Error::InvalidModule(format!(
                "relations live in Z^{}, module rank is {k}",
                self.relations.ambient_rank()
            )));
        }
        if self.action.len() != n {
            return Err(Error::InvalidModule(format!(
                "action has {} matrices, group has {n} elements",
                self.action.len()
            )));
        }
        for (g, a) in self.action.iter().enumerate() {
            if a.rows() != k || a.cols() != k {
                return Err(Error::InvalidModule(format!("matrix of element {g} is not {k}x{k}")));
            }
        }
        if !self.matrix_vanishes(&self.action[0].minus_identity()) {
            return Err(Error::InvalidModule("element 0 does not act as the identity".into()));
        }
        for g in 0..n {
            for b in self.relations.basis_vectors() {
                if !self.relations.contains(&self.action[g].mul_vec(b)) {
                    return Err(Error::InvalidModule(format!(
                        "relation lattice is not stable under element {g}: image of {:?} leaves it",
                        b.iter().map(|x| x.to_string_radix10()).collect::<Vec<_>>()
                    )));
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                let d = self.action[g].mul(&self.action[h]).sub(&self.action[self.group.mul(g, h)]);
                if !self.matrix_vanishes(&d) {
                    return Err(Error::InvalidModule(format!("A_{g} A_{h} differs from A_{}", self.group.mul(g, h))));
                }
            }
        }
        Ok(())
    }

    /// Whether every column of `m` lies in `L`.
    fn matrix_vanishes(&self, m: &IntMatrix) -> bool {
        (0..m.cols()).all(|j| self.relations.contains(&m.column(j)))
    }

    /// `N_H = Σ_{h ∈ H} A_h`.
    pub fn norm_matrix(&self, h: &Subgroup) -> IntMatrix {
        let mut s = IntMatrix::zeros(self.rank, self.rank);
        for &x in h.elements() {
            s.add_assign(&self.action[x]);
        }
        s
    }

    /// `(A_{h_1} - I; ...; A_{h_k} - I)` over a generating set of `H`.
    pub fn augmentation_stack(&self, h: &Subgroup) -> (Vec<usize>, IntMatrix) {
        let gens = self.group.generating_set(h);
        let blocks: Vec<IntMatrix> = gens.iter().map(|&x| self.action[x].minus_identity()).collect();
        let refs: Vec<&IntMatrix> = blocks.iter().collect();
        (gens, IntMatrix::vstack_or_empty(&refs, self.rank))
    }

    /// `I_H M + L` as a lattice.
    pub fn augmentation_lattice(&self, h: &Subgroup) -> Lattice {
        let gens = self.group.generating_set(h);
        let mut vs: Vec<Vec<Int>> = Vec::new();
        for &x in &gens {
            let d = self.action[x].minus_identity();
            vs.extend(d.columns());
        }
        Lattice::from_generators(self.rank, vs).sum(&self.relations)
    }

    /// `F = {x : (A_h - I) x ∈ L for all h ∈ H}`, so that `F/L = M^H`.
    pub fn fixed_lattice(&self, h: &Subgroup) -> Lattice {
        let (gens, stack) = self.augmentation_stack(h);
        if gens.is_empty() {
            return Lattice::full(self.rank);
        }
        Lattice::preimage(&stack, &self.relations.power(gens.len()))
    }

    pub fn fixed_points(&self, h: &Subgroup) -> Result<FixedPointData> {
        let lattice = self.fixed_lattice(h);
        let norms = Lattice::column_span(&self.norm_matrix(h));
        if !lattice.contains_lattice(&norms) {
            return Err(Error::Internal("norms are not fixed".into()));
        }
        let group = crate::exactla::subquotient_group(&lattice, &self.relations)?;
        Ok(FixedPointData { subgroup: h.clone(), lattice, group })
    }

    /// Free rank of `M^H`.
    pub fn fixed_rank(&self, h: &Subgroup) -> usize {
        self.fixed_lattice(h).rank() - self.relations.rank()
    }

    /// Re-expresses the action on a `G`-stable sublattice of `Z^n` (relations must be zero).
    pub fn sublattice_module(&self, lat: &Lattice) -> Result<GModule> {
        if !self.relations.is_zero() {
            return Err(Error::InvalidArgument("sublattice modules need a lattice module".into()));
        }
        let basis = lat.basis_vectors();
        let r = basis.len();
        let mut action = Vec::with_capacity(self.group.order());
        for a in &self.action {
            let mut cols = Vec::with_capacity(r);
            for b in basis {
                cols.push(
                    lat.coordinates(&a.mul_vec(b))
                        .ok_or_else(|| Error::InvalidModule("sublattice is not G-stable".into()))?,
                );
            }
            action.push(IntMatrix::from_columns(r, &cols));
        }
        Ok(GModule::new_unchecked(self.group.clone(), r, Lattice::zero(r), action))
    }

    /// Quotient by a larger `G`-stable lattice.
    pub fn quotient(&self, lat: &Lattice) -> Result<GModule> {
        if !lat.contains_lattice(&self.relations) {
            return Err(Error::NotASubquotient);
        }
        for a in &self.action {
            for b in lat.basis_vectors() {
                if !lat.contains(&a.mul_vec(b)) {
                    return Err(Error::InvalidModule("quotient lattice is not G-stable".into()));
                }
            }
        }
        Ok(GModule::new_unchecked(self.group.clone(), self.rank, lat.clone(), self.action.clone()))
    }

    /// The same module on new coordinates `y = P x` for unimodular `P`.
    pub fn change_coordinates(&self, p: &IntMatrix, p_inv: &IntMatrix) -> GModule {
        let rel = self.relations.image(p);
        let action = self.action.iter().map(|a| p.mul(a).mul(p_inv)).collect();
        GModule::new_unchecked(self.group.clone(), self.rank, rel, action)
    }
}

impl IntMatrix {
    /// `vstack` that returns a `0 x cols` matrix on empty input.
    pub(crate) fn vstack_or_empty(blocks: &[&IntMatrix], cols: usize) -> IntMatrix {
        if blocks.is_empty() {
            IntMatrix::zeros(0, cols)
        } else {
            IntMatrix::vstack(blocks)
        }
    }
}

/// `M^H` as a lattice `F` with `L ⊆ F ⊆ Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointData {
    pub subgroup: Subgroup,
    pub lattice: Lattice,
    pub group: PresentedAbelianGroup,
}

/// `Z[G/H]` on the left cosets of `H`.
pub fn permutation_module(group: &FiniteGroup, h: &Subgroup) -> Result<GModule> {
    let cs = group.coset_space(h)?;
    let k = cs.points();
    let action = cs
        .action
        .iter()
        .map(|perm| {
            let mut m = IntMatrix::zeros(k, k);
            for (i, &j) in perm.iter().enumerate() {
                m[(j, i)] = Int::ONE;
            }
            m
        })
        .collect();
    Ok(GModule::new_unchecked(group.clone(), k, Lattice::zero(k), action))
}

/// A `Z[G]`-linear map given by a matrix on ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    pub source: GModule,
    pub target: GModule,
    pub matrix: IntMatrix,
}

impl ModuleHom {
    pub fn new(source: GModule, target: GModule, matrix: IntMatrix) -> Result<Self> {
        if source.group() != target.group() {
            return Err(Error::InvalidArgument("modules over different groups".into()));
        }
        if matrix.rows() != target.ambient_rank() || matrix.cols() != source.ambient_rank() {
            return Err(Error::Shape(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ambient_rank(),
                source.ambient_rank()
            )));
        }
        for b in source.relations().basis_vectors() {
            if !target.relations().contains(&matrix.mul_vec(b)) {
                return Err(Error::InvalidArgument("map does not respect relations".into()));
            }
        }
        for g in source.group().elements() {
            let d = target.action(g).mul(&matrix).sub(&matrix.mul(source.action(g)));
            if !target.matrix_vanishes(&d) {
                return Err(Error::InvalidArgument(format!("map does not commute with element {g}")));
            }
        }
        Ok(ModuleHom { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: GModule, target: GModule, matrix: IntMatrix) -> Self {
        ModuleHom { source, target, matrix }
    }

    pub fn identity(m: &GModule) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), IntMatrix::identity(m.ambient_rank()))
    }

    pub fn zero(source: &GModule, target: &GModule) -> Self {
        Self::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.ambient_rank(), source.ambient_rank()),
        )
    }

    pub fn scalar(m: &GModule, c: &Int) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), IntMatrix::scalar(m.ambient_rank(), c))
    }

    pub fn compose(&self, after: &ModuleHom) -> ModuleHom {
        ModuleHom::new_unchecked(self.source.clone(), after.target.clone(), after.matrix.mul(&self.matrix))
    }
}

/// `0 → tors M → M → mt(M) → 0`.
#[derive(Clone, Debug)]
pub struct TorsionDecomposition {
    pub tors: GModule,
    pub mt: GModule,
    pub inclusion: ModuleHom,
    pub projection: ModuleHom,
}

pub fn torsion_decomposition(m: &GModule) -> TorsionDecomposition {
    let group = m.group().clone();
    let n = m.ambient_rank();
    let rel = m.relations();
    if rel.is_zero() {
        let tors = GModule::trivial(&group, 0);
        return TorsionDecomposition {
            inclusion: ModuleHom::zero(&tors, m),
            projection: ModuleHom::identity(m),
            tors,
            mt: m.clone(),
        };
    }
    let sat = rel.saturate();
    let s = sat.rank();
    let basis = sat.basis_vectors();
    let coords: Vec<Vec<Int>> =
        rel.basis_vectors().iter().map(|b| sat.coordinates(b).expect("relations in saturation")).collect();
    let tors_action: Vec<IntMatrix> = m
        .actions()
        .iter()
        .map(|a| {
            let cols: Vec<Vec<Int>> =
                basis.iter().map(|b| sat.coordinates(&a.mul_vec(b)).expect("saturation is stable")).collect();
            IntMatrix::from_columns(s, &cols)
        })
        .collect();
    let tors = GModule::new_unchecked(group.clone(), s, Lattice::from_generators(s, coords), tors_action);
    let inclusion = ModuleHom::new_unchecked(tors.clone(), m.clone(), sat.basis_matrix());

    let f = smith_normal_form(&sat.basis_matrix());
    let r = n - s;
    let mt_action: Vec<IntMatrix> =
        m.actions().iter().map(|a| f.u.mul(a).mul(&f.u_inv).submatrix(s..n, s..n)).collect();
    let mt = GModule::new_unchecked(group, r, Lattice::zero(r), mt_action);
    let projection = ModuleHom::new_unchecked(m.clone(), mt.clone(), f.u.submatrix(s..n, 0..n));
    TorsionDecomposition { tors, mt, inclusion, projection }
}

/// `Hom(M, Z)` with `(g f)(m) = f(g⁻¹ m)`, for torsion-free `M`.
pub fn z_dual(m: &GModule) -> Result<GModule> {
    if !m.is_torsion_free() {
        return Err(Error::HasTorsion);
    }
    let base = torsion_decomposition(m).mt;
    let g = base.group();
    let action = g.elements().map(|x| base.action(g.inv(x)).transpose()).collect();
    Ok(GModule::new_unchecked(g.clone(), base.ambient_rank(), Lattice::zero(base.ambient_rank()), action))
}

/// `Hom(M, Q/Z)` for finite `M`, presented on the dual of a Smith basis.
pub fn finite_dual(m: &GModule) -> Result<GModule> {
    if !m.is_finite() {
        return Err(Error::NotFinite);
    }
    let f = smith_normal_form(&m.relations().basis_matrix());
    let keep: Vec<usize> = (0..f.divisors.len()).filter(|&i| !f.divisors[i].is_one()).collect();
    let k = keep.len();
    let d: Vec<Int> = keep.iter().map(|&i| f.divisors[i].clone()).collect();
    let g = m.group();
    let mut action = Vec::with_capacity(g.order());
    for x in g.elements() {
        let a = f.u.mul(m.action(g.inv(x))).mul(&f.u_inv);
        let mut c = IntMatrix::zeros(k, k);
        for (kk, &ck) in keep.iter().enumerate() {
            for (ii, &ci) in keep.iter().enumerate() {
                // C[k, i] = A'[i, k] d_k / d_i
                let v = (&a[(ci, ck)] * &d[kk]).div_exact(&d[ii]);
                c[(kk, ii)] = v.mod_floor_pos(&d[kk]);
            }
        }
        action.push(c);
    }
    Ok(GModule::new_unchecked(g.clone(), k, Lattice::from_generators(k, (0..k).map(|i| {
        let mut v = vec![Int::ZERO; k];
        v[i] = d[i].clone();
        v
    })), action))
}

/// Which dual to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualKind {
    Integral,
    Finite,
}

pub fn dual_module(m: &GModule, kind: DualKind) -> Result<GModule> {
    match kind {
        DualKind::Integral => z_dual(m),
        DualKind::Finite => finite_dual(m),
    }
}

pub fn direct_sum(parts: &[&GModule]) -> Result<GModule> {
    let Some(first) = parts.first() else {
        return Err(Error::InvalidArgument("empty direct sum".into()));
    };
    let group = first.group().clone();
    if parts.iter().any(|p| *p.group() != group) {
        return Err(Error::InvalidArgument("modules over different groups".into()));
    }
    let rank: usize = parts.iter().map(|p| p.ambient_rank()).sum();
    let mut rel = Lattice::zero(0);
    for p in parts {
        rel = rel.direct_sum(p.relations());
    }
    let action = group
        .elements()
        .map(|g| {
            let blocks: Vec<&IntMatrix> = parts.iter().map(|p| p.action(g)).collect();
            IntMatrix::block_diag(&blocks)
        })
        .collect();
    Ok(GModule::new_unchecked(group, rank, rel, action))
}

/// `M ⊗ N` with the diagonal action.
pub fn tensor_product(m: &GModule, n: &GModule) -> Result<GModule> {
    if m.group() != n.group() {
        return Err(Error::InvalidArgument("modules over different groups".into()));
    }
    let (a, b) = (m.ambient_rank(), n.ambient_rank());
    let kron_vec = |x: &[Int], y: &[Int]| -> Vec<Int> {
        let mut v = Vec::with_capacity(x.len() * y.len());
        for xi in x {
            for yj in y {
                v.push(xi * yj);
            }
        }
        v
    };
    let mut gens = Vec::new();
    for l in m.relations().basis_vectors() {
        for j in 0..b {
            gens.push(kron_vec(l, &crate::exactla::unit(b, j)));
        }
    }
    for l in n.relations().basis_vectors() {
        for i in 0..a {
            gens.push(kron_vec(&crate::exactla::unit(a, i), l));
        }
    }
    let action = m.group().elements().map(|g| m.action(g).kron(n.action(g))).collect();
    Ok(GModule::new_unchecked(m.group().clone(), a * b, Lattice::from_generators(a * b, gens), action))
}

/// Shape of a random module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Profile {
    TorsionFree,
    Finite,
    Mixed,
}

impl core::str::FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torsion_free" => Ok(Profile::TorsionFree),
            "finite" => Ok(Profile::Finite),
            "mixed" => Ok(Profile::Mixed),
            _ => Err(Error::InvalidArgument(format!("unknown profile {s:?}"))),
        }
    }
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::TorsionFree => "torsion_free",
            Profile::Finite => "finite",
            Profile::Mixed => "mixed",
        }
    }
}

/// Size knobs for [`random_module_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    /// Upper bound on the rank of the ambient permutation module.
    pub max_ambient_rank: usize,
    pub max_summands: usize,
    pub max_orbit_vectors: usize,
    pub entry_bound: i64,
    /// Moduli used by the finite profile.
    pub moduli: Vec<i64>,
    pub retries: usize,
}

impl RandomParams {
    pub fn for_group(g: &FiniteGroup) -> Self {
        RandomParams {
            max_ambient_rank: (2 * g.order()).clamp(4, 24),
            max_summands: 3,
            max_orbit_vectors: 3,
            entry_bound: 2,
            moduli: vec![2, 3, 4, 5, 6, 9, 10, 15],
            retries: 64,
        }
    }
}

pub fn random_module(group: &FiniteGroup, profile: Profile, seed: u64) -> Result<GModule> {
    random_module_with(group, profile, &RandomParams::for_group(group), seed)
}

pub fn random_module_with(group: &FiniteGroup, profile: Profile, params: &RandomParams, seed: u64) -> Result<GModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subgroups = match group.all_subgroups() {
        Ok(s) => s,
        Err(_) => vec![group.trivial_subgroup(), group.whole()],
    };
    for _ in 0..params.retries {
        let m = draw(group, &subgroups, profile, params, &mut rng)?;
        if !m.is_zero() {
            return Ok(m);
        }
    }
    Err(Error::InvalidArgument(format!("random module draw stayed zero after {} retries", params.retries)))
}

fn draw(
    group: &FiniteGroup,
    subgroups: &[Subgroup],
    profile: Profile,
    p: &RandomParams,
    rng: &mut ChaCha8Rng,
) -> Result<GModule> {
    let ambient = random_permutation_sum(group, subgroups, p, rng)?;
    let n = ambient.ambient_rank();
    let orbit = random_orbit_lattice(&ambient, p, rng);
    match profile {
        Profile::TorsionFree => {
            let lat = if rng.gen_bool(0.5) { orbit.saturate() } else { orbit };
            if lat.is_zero() {
                return Ok(GModule::trivial(group, 0));
            }
            ambient.sublattice_module(&lat)
        }
        Profile::Finite => {
            let d = Int::from(*p.moduli.choose(rng).expect("nonempty moduli"));
            let lat = orbit.sum(&Lattice::scaled_full(n, &d));
            ambient.quotient(&lat)
        }
        Profile::Mixed => {
            let c = Int::from(rng.gen_range(1..=3i64));
            let gens: Vec<Vec<Int>> =
                orbit.basis_vectors().iter().map(|b| b.iter().map(|x| x * &c).collect()).collect();
            ambient.quotient(&Lattice::from_generators(n, gens))
        }
    }
}

fn random_permutation_sum(
    group: &FiniteGroup,
    subgroups: &[Subgroup],
    p: &RandomParams,
    rng: &mut ChaCha8Rng,
) -> Result<GModule> {
    let count = rng.gen_range(1..=p.max_summands);
    let mut parts = Vec::new();
    let mut total = 0;
    for _ in 0..count {
        let mut h = subgroups.choose(rng).expect("subgroups").clone();
        if total + group.order() / h.order() > p.max_ambient_rank {
            if parts.is_empty() {
                h = group.whole();
            } else {
                continue;
            }
        }
        total += group.order() / h.order();
        parts.push(permutation_module(group, &h)?);
    }
    let refs: Vec<&GModule> = parts.iter().collect();
    direct_sum(&refs)
}

fn random_orbit_lattice(ambient: &GModule, p: &RandomParams, rng: &mut ChaCha8Rng) -> Lattice {
    let n = ambient.ambient_rank();
    let k = rng.gen_range(1..=p.max_orbit_vectors);
    let mut gens = Vec::new();
    for _ in 0..k {
        let v: Vec<Int> = (0..n).map(|_| Int::from(rng.gen_range(-p.entry_bound..=p.entry_bound))).collect();
        for a in ambient.actions() {
            gens.push(a.mul_vec(&v));
        }
    }
    Lattice::from_generators(n, gens)
}

/// A random module homomorphism out of or into `m`.
pub fn random_module_hom(m: &GModule, seed: u64) -> Result<ModuleHom> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = m.group().clone();
    match rng.gen_range(0..5) {
        0 => {
            // central element of Z[G]
            let classes = g.conjugacy_classes();
            let mut a = IntMatrix::zeros(m.ambient_rank(), m.ambient_rank());
            for c in &classes {
                let coeff = Int::from(rng.gen_range(-2..=2i64));
                for &x in c {
                    a.add_scaled(&coeff, m.action(x));
                }
            }
            Ok(ModuleHom::new_unchecked(m.clone(), m.clone(), a))
        }
        1 => Ok(torsion_decomposition(m).inclusion),
        2 => Ok(torsion_decomposition(m).projection),
        3 => Ok(ModuleHom::scalar(m, &Int::from(rng.gen_range(-3..=3i64)))),
        _ => {
            // Z[G/H] → M, gH ↦ g·v for some v ∈ M^H
            let subgroups = g.all_subgroups()?;
            let h = subgroups.choose(&mut rng).expect("subgroups").clone();
            let f = m.fixed_lattice(&h);
            let mut v = vec![Int::ZERO; m.ambient_rank()];
            for b in f.basis_vectors() {
                let c = Int::from(rng.gen_range(-2..=2i64));
                for (vi, bi) in v.iter_mut().zip(b) {
                    vi.add_mul(&c, bi);
                }
            }
            let src = permutation_module(&g, &h)?;
            let cs = g.coset_space(&h)?;
            let cols: Vec<Vec<Int>> = cs.reps.iter().map(|&r| m.action(r).mul_vec(&v)).collect();
            Ok(ModuleHom::new_unchecked(src, m.clone(), IntMatrix::from_columns(m.ambient_rank(), &cols)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2_sign() -> GModule {
        let g = FiniteGroup::cyclic(2).unwrap();
        GModule::new(g, 1, Lattice::zero(1), vec![IntMatrix::identity(1), IntMatrix::from_i64_rows(&[&[-1]])]).unwrap()
    }

    #[test]
    fn validation() {
        let d3 = FiniteGroup::dihedral(3).unwrap();
        GModule::regular(&d3).validate().unwrap();
        let g = FiniteGroup::cyclic(2).unwrap();
        let bad = GModule::new(g.clone(), 1, Lattice::zero(1), vec![IntMatrix::identity(1), IntMatrix::from_i64_rows(&[&[2]])]);
        match bad {
            Err(Error::InvalidModule(m)) => assert!(m.contains("A_1 A_1"), "{m}"),
            other => panic!("{other:?}"),
        }
        let swap = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let rel = Lattice::from_generators(2, [vec![Int::from(1), Int::from(0)]]);
        let bad = GModule::new(g, 2, rel, vec![IntMatrix::identity(2), swap]);
        match bad {
            Err(Error::InvalidModule(m)) => assert!(m.contains("element 1"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn permutation_modules() {
        let d3 = FiniteGroup::dihedral(3).unwrap();
        let (rho, sigma) = d3.dihedral_subgroups().unwrap();
        let m = permutation_module(&d3, &sigma).unwrap();
        m.validate().unwrap();
        assert_eq!(m.ambient_rank(), 3);
        assert_eq!(m.action(1).trace(), Int::ZERO);
        let f = m.fixed_lattice(&rho);
        assert_eq!(f.basis_vectors(), [vec![Int::ONE; 3]]);
        assert_eq!(permutation_module(&d3, &d3.whole()).unwrap(), GModule::trivial(&d3, 1));
        let reg = GModule::regular(&d3);
        let f = reg.fixed_points(&d3.whole()).unwrap();
        assert_eq!(f.lattice.rank(), 1);
    }

    #[test]
    fn fixed_points_examples() {
        let m = c2_sign();
        assert!(m.fixed_lattice(&m.group().whole()).is_zero());
        let g = FiniteGroup::cyclic(2).unwrap();
        let z2 = GModule::trivial_cyclic(&g, &Int::from(2));
        let f = z2.fixed_points(&g.whole()).unwrap();
        assert_eq!(f.group.order(), Some(Int::from(2)));
    }

    #[test]
    fn torsion_split() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let t = GModule::trivial(&g, 2);
        let m = t.quotient(&Lattice::from_generators(2, [vec![Int::from(2), Int::ZERO]])).unwrap();
        let d = torsion_decomposition(&m);
        assert_eq!(d.tors.order(), Some(Int::from(2)));
        assert_eq!(d.mt.ambient_rank(), 1);
        d.tors.validate().unwrap();
        d.mt.validate().unwrap();
        ModuleHom::new(d.tors.clone(), m.clone(), d.inclusion.matrix.clone()).unwrap();
        ModuleHom::new(m.clone(), d.mt.clone(), d.projection.matrix.clone()).unwrap();
        let free = GModule::regular(&g);
        assert_eq!(torsion_decomposition(&free).tors.ambient_rank(), 0);
        let fin = GModule::trivial_cyclic(&g, &Int::from(5));
        assert_eq!(torsion_decomposition(&fin).mt.ambient_rank(), 0);
    }

    #[test]
    fn duals() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let s = c2_sign();
        assert_eq!(z_dual(&s).unwrap(), s);
        let t = GModule::trivial(&g, 1);
        assert_eq!(z_dual(&t).unwrap(), t);
        assert_eq!(z_dual(&GModule::trivial_cyclic(&g, &Int::from(2))), Err(Error::HasTorsion));
        let fin = GModule::trivial_cyclic(&g, &Int::from(4));
        let d = finite_dual(&fin).unwrap();
        d.validate().unwrap();
        assert_eq!(d.order(), Some(Int::from(4)));
    }

    #[test]
    fn tensor_examples() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let reg = GModule::regular(&g);
        let t = tensor_product(&reg, &c2_sign()).unwrap();
        t.validate().unwrap();
        assert_eq!(t.ambient_rank(), 2);
        assert_eq!(t.fixed_rank(&g.whole()), 1);
        let a = GModule::trivial_cyclic(&g, &Int::from(2));
        let b = GModule::trivial_cyclic(&g, &Int::from(3));
        assert!(tensor_product(&a, &b).unwrap().is_zero());
        let one = tensor_product(&reg, &GModule::trivial(&g, 1)).unwrap();
        assert_eq!(one, reg);
    }

    #[test]
    fn random_modules_are_valid_and_deterministic() {
        let g = FiniteGroup::dihedral(3).unwrap();
        for seed in 0..30 {
            for p in [Profile::TorsionFree, Profile::Finite, Profile::Mixed] {
                let m = random_module(&g, p, seed).unwrap();
                m.validate().unwrap();
                assert!(!m.is_zero());
                assert_eq!(m, random_module(&g, p, seed).unwrap());
                match p {
                    Profile::Finite => assert!(m.is_finite()),
                    Profile::TorsionFree => assert!(m.is_torsion_free()),
                    Profile::Mixed => {}
                }
                let f = random_module_hom(&m, seed).unwrap();
                ModuleHom::new(f.source.clone(), f.target.clone(), f.matrix.clone()).unwrap();
            }
        }
    }
}
