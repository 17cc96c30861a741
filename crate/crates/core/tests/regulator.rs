use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use reglab_core::brauer::{dihedral_relation_in, relation_lattice, BrauerRelation};
use reglab_core::gmodules::{
    direct_sum, permutation_module, random_module, torsion_decomposition, GModule, ModuleHom, Profile,
};
use reglab_core::groups::FiniteGroup;
use reglab_core::regulator::{
    build_phi, invariant_pairing, rc_pairing, rc_pairing_scaled, rc_qindex, rc_qindex_tensor, regulator_constant,
    RegulatorConstant,
};
use reglab_core::Int;

fn cases() -> Vec<(FiniteGroup, BrauerRelation)> {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let v4 = FiniteGroup::product(&[c2.clone(), c2]).unwrap();
    let mut out = vec![(v4.clone(), relation_lattice(&v4).unwrap().remove(0))];
    for q in [3, 5] {
        let g = FiniteGroup::dihedral(q).unwrap();
        let t = dihedral_relation_in(&g).unwrap();
        out.push((g, t));
    }
    out
}

fn profile(i: u8) -> Profile {
    [Profile::TorsionFree, Profile::Finite, Profile::Mixed][i as usize % 3]
}

fn reproduce(c: &RegulatorConstant) -> BigRational {
    let mut x = BigRational::one();
    for (p, e) in &c.factorization {
        let b = BigRational::from_integer(p.to_bigint());
        x *= if *e >= 0 { b.pow(*e as i32) } else { b.pow(-*e as i32).recip() };
    }
    x
}

#[test]
fn trivial_module_gives_inverse_q() {
    for q in [3usize, 5, 9, 15] {
        let g = FiniteGroup::dihedral(q).unwrap();
        let theta = dihedral_relation_in(&g).unwrap();
        let z = GModule::trivial(&g, 1);
        let expected = BigRational::new(BigInt::from(1), BigInt::from(q));
        assert_eq!(rc_pairing(&z, &theta).unwrap().value, expected);
        assert_eq!(rc_qindex(&z, &build_phi(&theta, 0).unwrap()).unwrap().value, expected);
        assert_eq!(regulator_constant(&z, &theta).unwrap().value, expected);
    }
}

#[test]
fn phi_maps() {
    for (g, theta) in cases() {
        let phi = build_phi(&theta, 11).unwrap();
        assert_eq!(phi, build_phi(&theta, 11).unwrap());
        assert!(!phi.matrix.det().is_zero());
        let sum = |s: &[reglab_core::groups::Subgroup]| {
            let parts: Vec<GModule> = s.iter().map(|h| permutation_module(&g, h).unwrap()).collect();
            direct_sum(&parts.iter().collect::<Vec<_>>()).unwrap()
        };
        let (p1, p2) = (sum(&phi.p1), sum(&phi.p2));
        assert_eq!(p1.ambient_rank(), p2.ambient_rank());
        assert!(ModuleHom::new(p1.clone(), p2.clone(), phi.matrix.clone()).is_ok());
        assert!(ModuleHom::new(p2, p1, phi.matrix.transpose()).is_ok());
    }
    let g = FiniteGroup::dihedral(3).unwrap();
    let phi = build_phi(&dihedral_relation_in(&g).unwrap(), 0).unwrap();
    assert_eq!(phi.matrix.rows(), 8);
}

#[test]
fn permutation_modules_agree_across_routes() {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let e8 = FiniteGroup::product(&[c2.clone(), c2.clone(), c2]).unwrap();
    for g in [e8, FiniteGroup::dihedral(3).unwrap(), FiniteGroup::dihedral(5).unwrap()] {
        for theta in relation_lattice(&g).unwrap() {
            for h in g.all_subgroups().unwrap() {
                let m = permutation_module(&g, &h).unwrap();
                let c = regulator_constant(&m, &theta).unwrap();
                assert!(c.value.is_positive());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pairing_is_invariant_and_definite(case in 0usize..3, seed in any::<u64>()) {
        let (g, _) = &cases()[case];
        let m = random_module(g, Profile::Mixed, seed).unwrap();
        let mt = torsion_decomposition(&m).mt;
        let gram = invariant_pairing(&mt).unwrap();
        prop_assert_eq!(gram.transpose(), gram.clone());
        for a in mt.actions() {
            prop_assert_eq!(a.transpose().mul(&gram).mul(a), gram.clone());
        }
        for k in 1..=gram.rows() {
            prop_assert!(gram.submatrix(0..k, 0..k).det().is_positive());
        }
    }

    #[test]
    fn routes_agree_and_ignore_choices(case in 0usize..3, prof in 0u8..3, seed in any::<u64>(), scale in 2i64..7) {
        let (g, theta) = &cases()[case];
        let m = random_module(g, profile(prof), seed).unwrap();
        let c = rc_pairing(&m, theta).unwrap();
        prop_assert_eq!(&rc_pairing_scaled(&m, theta, &Int::from(scale)).unwrap(), &c);
        for s in [seed, seed.wrapping_add(1)] {
            prop_assert_eq!(&rc_qindex(&m, &build_phi(theta, s).unwrap()).unwrap(), &c);
        }
        prop_assert_eq!(reproduce(&c), c.value.clone());
        if g.dihedral_generators().is_some() {
            let q = g.order() / 2;
            for p in c.factorization.keys() {
                prop_assert!(p.divides(&Int::from(q)));
            }
        }
    }

    #[test]
    fn multiplicative_on_direct_sums(case in 0usize..3, a in 0u8..3, b in 0u8..3, seed in any::<u64>()) {
        let (g, theta) = &cases()[case];
        let m = random_module(g, profile(a), seed).unwrap();
        let n = random_module(g, profile(b), seed ^ 0x5555).unwrap();
        let s = direct_sum(&[&m, &n]).unwrap();
        let lhs = regulator_constant(&s, theta).unwrap().value;
        let rhs = regulator_constant(&m, theta).unwrap().value * regulator_constant(&n, theta).unwrap().value;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn finite_modules_count_fixed_points(case in 0usize..3, seed in any::<u64>()) {
        let (g, theta) = &cases()[case];
        let m = random_module(g, Profile::Finite, seed).unwrap();
        let mut expected = BigRational::one();
        for (h, n) in theta.terms() {
            let size = BigRational::from_integer(m.fixed_lattice(h).index_of(m.relations()).unwrap().to_bigint());
            let f = size.pow(2 * *n as i32);
            expected /= f;
        }
        prop_assert_eq!(regulator_constant(&m, theta).unwrap().value, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_reference(prof in 0u8..3, seed in any::<u64>()) {
        let (g, theta) = &cases()[1];
        let mut params = reglab_core::gmodules::RandomParams::for_group(g);
        params.max_ambient_rank = 6;
        let m = reglab_core::gmodules::random_module_with(g, profile(prof), &params, seed).unwrap();
        let phi = build_phi(theta, seed).unwrap();
        prop_assert_eq!(rc_qindex_tensor(&m, &phi).unwrap(), rc_qindex(&m, &phi).unwrap());
    }
}
