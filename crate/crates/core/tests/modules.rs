use proptest::prelude::*;
use reglab_core::exactla::{IntMatrix, Lattice};
use reglab_core::gmodules::{
    direct_sum, finite_dual, permutation_module, random_module, random_module_hom, tensor_product, torsion_decomposition,
    z_dual, GModule, ModuleHom, Profile,
};
use reglab_core::groups::FiniteGroup;
use reglab_core::{Error, Int};

fn groups() -> Vec<FiniteGroup> {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    vec![
        FiniteGroup::cyclic(4).unwrap(),
        FiniteGroup::product(&[c2.clone(), c2]).unwrap(),
        FiniteGroup::dihedral(3).unwrap(),
        FiniteGroup::dihedral(5).unwrap(),
        FiniteGroup::cyclic(6).unwrap(),
    ]
}

fn profile(i: u8) -> Profile {
    [Profile::TorsionFree, Profile::Finite, Profile::Mixed][i as usize % 3]
}

fn module() -> impl Strategy<Value = GModule> {
    (0usize..5, 0u8..3, any::<u64>()).prop_map(|(g, p, s)| random_module(&groups()[g], profile(p), s).unwrap())
}

#[test]
fn random_modules_validate_and_are_deterministic() {
    for g in groups() {
        for s in 0..200u64 {
            let p = profile(s as u8);
            let m = random_module(&g, p, s).unwrap();
            m.validate().unwrap();
            assert!(!m.is_zero());
            assert_eq!(m, random_module(&g, p, s).unwrap());
            match p {
                Profile::TorsionFree => assert!(m.is_torsion_free()),
                Profile::Finite => assert!(m.relations().is_full_rank()),
                Profile::Mixed => {}
            }
        }
    }
}

#[test]
fn validator_reports_witnesses() {
    let g = FiniteGroup::dihedral(3).unwrap();
    let reg = GModule::regular(&g);
    let mut action = reg.actions().to_vec();
    action[1] = IntMatrix::identity(6);
    match GModule::new(g.clone(), 6, Lattice::zero(6), action) {
        Err(Error::InvalidModule(msg)) => assert!(msg.contains("differs")),
        other => panic!("{other:?}"),
    }
    let unstable = Lattice::from_generators(6, [vec![Int::from(2), Int::ZERO, Int::ZERO, Int::ZERO, Int::ZERO, Int::ZERO]]);
    match GModule::new(g, 6, unstable, reg.actions().to_vec()) {
        Err(Error::InvalidModule(msg)) => assert!(msg.contains("not stable")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn permutation_module_examples() {
    let g = FiniteGroup::dihedral(3).unwrap();
    let (rho, sigma) = g.dihedral_subgroups().unwrap();
    let m = permutation_module(&g, &sigma).unwrap();
    assert_eq!(m.ambient_rank(), 3);
    let r = m.action(1);
    assert_eq!(r.mul(r).mul(r), IntMatrix::identity(3));
    assert!(!r.is_identity());
    let f = m.fixed_lattice(&rho);
    assert_eq!(f, Lattice::from_generators(3, [vec![Int::ONE; 3]]));
    assert_eq!(permutation_module(&g, &g.whole()).unwrap(), GModule::trivial(&g, 1));
    assert_eq!(permutation_module(&g, &g.trivial_subgroup()).unwrap(), GModule::regular(&g));
    let reg = GModule::regular(&g);
    assert_eq!(reg.fixed_lattice(&g.whole()), Lattice::from_generators(6, [vec![Int::ONE; 6]]));
}

#[test]
fn tensor_examples() {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let sign = GModule::new(c2.clone(), 1, Lattice::zero(1), vec![IntMatrix::identity(1), IntMatrix::from_i64_rows(&[&[-1]])]).unwrap();
    assert!(sign.fixed_lattice(&c2.whole()).is_zero());
    let reg = GModule::regular(&c2);
    let t = tensor_product(&reg, &sign).unwrap();
    let p = IntMatrix::from_i64_rows(&[&[1, 0], &[0, -1]]);
    assert_eq!(t.change_coordinates(&p, &p), reg);
    let z = GModule::trivial(&c2, 1);
    assert_eq!(tensor_product(&reg, &z).unwrap(), reg);
    let a = GModule::trivial_cyclic(&c2, &Int::from(2));
    let b = GModule::trivial_cyclic(&c2, &Int::from(3));
    assert!(tensor_product(&a, &b).unwrap().is_zero());
    assert_eq!(z_dual(&sign).unwrap(), sign);
    assert!(matches!(z_dual(&a), Err(Error::HasTorsion)));
}

#[test]
fn torsion_decomposition_examples() {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let m = GModule::new(
        c2.clone(),
        2,
        Lattice::from_generators(2, [vec![Int::from(2), Int::ZERO]]),
        vec![IntMatrix::identity(2); 2],
    )
    .unwrap();
    let d = torsion_decomposition(&m);
    assert_eq!(d.tors.order(), Some(Int::from(2)));
    assert_eq!((d.mt.ambient_rank(), d.mt.is_torsion_free()), (1, true));
    let reg = GModule::regular(&c2);
    assert!(torsion_decomposition(&reg).tors.is_zero());
    let fin = GModule::trivial_cyclic(&c2, &Int::from(5));
    assert_eq!(torsion_decomposition(&fin).mt.ambient_rank(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn norms_land_in_fixed_points(m in module()) {
        for h in m.group().all_subgroups().unwrap() {
            let f = m.fixed_lattice(&h);
            prop_assert!(f.contains_lattice(m.relations()));
            prop_assert!(f.contains_lattice(&Lattice::column_span(&m.norm_matrix(&h))));
            let data = m.fixed_points(&h).unwrap();
            prop_assert_eq!(data.group.free_rank(), m.fixed_rank(&h));
        }
    }

    #[test]
    fn torsion_of_fixed_points_is_fixed_torsion(m in module()) {
        let d = torsion_decomposition(&m);
        d.tors.validate().unwrap();
        d.mt.validate().unwrap();
        let sat = m.relations().saturate();
        for h in m.group().all_subgroups().unwrap() {
            let lhs = m.fixed_lattice(&h).intersection(&sat);
            let rhs = d.tors.fixed_lattice(&h).image(&d.inclusion.matrix).sum(m.relations());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn duals_are_involutions(m in module()) {
        let d = torsion_decomposition(&m);
        let mt = d.mt;
        prop_assert_eq!(z_dual(&z_dual(&mt).unwrap()).unwrap(), mt.clone());
        if d.tors.is_zero() {
            return Ok(());
        }
        let t = d.tors;
        let tt = finite_dual(&finite_dual(&t).unwrap()).unwrap();
        let td = finite_dual(&t).unwrap();
        td.validate().unwrap();
        prop_assert_eq!(td.order(), t.order());
        prop_assert_eq!(td.as_abelian_group().torsion_divisors(), t.as_abelian_group().torsion_divisors());
        for h in m.group().all_subgroups().unwrap() {
            let count = |x: &GModule| x.fixed_lattice(&h).index_of(x.relations());
            prop_assert_eq!(count(&tt), count(&t));
            // |M^H| = |(M^)^H| since (M^)^H is dual to the coinvariants M_H
            let coinv = Lattice::full(t.ambient_rank()).index_of(&t.augmentation_lattice(&h));
            prop_assert_eq!(count(&td), coinv);
        }
    }

    #[test]
    fn homs_are_equivariant(m in module(), seed in any::<u64>()) {
        let f = random_module_hom(&m, seed).unwrap();
        let checked = ModuleHom::new(f.source.clone(), f.target.clone(), f.matrix.clone());
        prop_assert!(checked.is_ok());
        let id = ModuleHom::identity(&f.source);
        prop_assert_eq!(id.compose(&f).matrix, f.matrix.clone());
    }

    #[test]
    fn restriction_of_permutation_modules(g in 0usize..5, a in 0usize..64, b in 0usize..64) {
        let g = &groups()[g];
        let subs = g.all_subgroups().unwrap();
        let u = &subs[a % subs.len()];
        let h = &subs[b % subs.len()];
        let cs = g.coset_space(u).unwrap();
        let mut seen = vec![false; cs.points()];
        let mut total = 0;
        for start in 0..cs.points() {
            if seen[start] {
                continue;
            }
            let mut size = 0;
            for i in 0..cs.points() {
                if h.elements().iter().any(|&x| cs.action[x][start] == i) {
                    seen[i] = true;
                    size += 1;
                }
            }
            // orbit of x U under H has size [H : H ∩ xUx⁻¹]
            let x = cs.reps[start];
            let conj = g.conjugate_subgroup(x, u);
            let meet = h.elements().iter().filter(|e| conj.contains(**e)).count();
            prop_assert_eq!(size * meet, h.order());
            total += size;
        }
        prop_assert_eq!(total, g.order() / u.order());
    }

    #[test]
    fn direct_sums_add_fixed_ranks(m in module(), s in any::<u64>()) {
        let n = random_module(m.group(), Profile::Mixed, s).unwrap();
        let sum = direct_sum(&[&m, &n]).unwrap();
        sum.validate().unwrap();
        for h in m.group().all_subgroups().unwrap() {
            prop_assert_eq!(sum.fixed_rank(&h), m.fixed_rank(&h) + n.fixed_rank(&h));
        }
    }
}
