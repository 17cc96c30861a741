//! Tate cohomology `Ĥⁱ(H, M)` for `i ∈ {-1, 0, 1, 2}`, extended by periodicity
//! for cyclic subgroups (period 2) and dihedral subgroups of order `2·odd`
//! (period 4).

mod resolution;
pub mod routes;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use resolution::{Resolution, RingElement};

use crate::brauer::BrauerRelation;
use crate::error::{Error, Result};
use crate::exactla::{int_ratio, ratio, IntMatrix, Lattice, Subquotient};
use crate::gmodules::{GModule, ModuleHom};
use crate::groups::{FiniteGroup, Subgroup};
use crate::int::Int;

/// `Ĥⁱ(H, M)` with its lattice realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateGroup {
    pub degree: i64,
    pub subgroup: Subgroup,
    /// Elementary divisors greater than one.
    pub divisors: Vec<Int>,
    pub order: Int,
    /// Degree in `-1..=2` actually computed.
    pub window_degree: i64,
    pub subquotient: Subquotient,
}

/// Periodicity of Tate cohomology for `h`, if any.
pub fn period(group: &FiniteGroup, h: &Subgroup) -> Option<i64> {
    if group.cyclic_generator(h).is_some() {
        Some(2)
    } else if group.is_dihedral_2odd(h) {
        Some(4)
    } else {
        None
    }
}

/// The degree in `-1..=2` that computes `Ĥⁱ`.
pub fn window_degree(group: &FiniteGroup, h: &Subgroup, i: i64) -> Result<i64> {
    if (-1..=2).contains(&i) {
        return Ok(i);
    }
    match period(group, h) {
        Some(p) => Ok((i + 1).rem_euclid(p) - 1),
        None => Err(Error::DegreeOutOfWindow(i)),
    }
}

/// The lattice pair `(top, bottom)` with `Ĥⁱ = top / bottom`, in the cochain
/// coordinates of the window degree.
fn cochain_pair(m: &GModule, h: &Subgroup, w: i64, res: Option<&Resolution>) -> Result<(Lattice, Lattice)> {
    let l = m.relations();
    match w {
        0 => {
            let top = m.fixed_lattice(h);
            let bottom = Lattice::column_span(&m.norm_matrix(h)).sum(l);
            Ok((top, bottom))
        }
        -1 => {
            let top = Lattice::preimage(&m.norm_matrix(h), l);
            let bottom = m.augmentation_lattice(h);
            Ok((top, bottom))
        }
        1 | 2 => {
            let owned;
            let res = match res {
                Some(r) => r,
                None => {
                    owned = Resolution::new(m.group(), h)?;
                    &owned
                }
            };
            let nx = res.generators().len();
            let nr = res.relator_count();
            let nk = res.kernel_generator_count();
            if w == 1 {
                let d1 = res.delta1(m);
                let d2 = res.delta2(m);
                let top = Lattice::preimage(&d2, &l.power(nr));
                let bottom = Lattice::column_span(&d1).sum(&l.power(nx));
                Ok((top, bottom))
            } else {
                let d2 = res.delta2(m);
                let d3 = res.delta3(m);
                let top = Lattice::preimage(&d3, &l.power(nk));
                let bottom = Lattice::column_span(&d2).sum(&l.power(nr));
                Ok((top, bottom))
            }
        }
        _ => Err(Error::DegreeOutOfWindow(w)),
    }
}

/// `Ĥⁱ(H, M)`.
pub fn tate(m: &GModule, h: &Subgroup, i: i64) -> Result<TateGroup> {
    tate_with(m, h, i, None)
}

/// As [`tate`], reusing a resolution of `h`.
pub fn tate_with(m: &GModule, h: &Subgroup, i: i64, res: Option<&Resolution>) -> Result<TateGroup> {
    let h = m.group().subgroup(h.elements())?;
    let w = window_degree(m.group(), &h, i)?;
    if h.is_trivial() {
        let z = Lattice::zero(0);
        let sq = Subquotient::new(z.clone(), z)?;
        return Ok(TateGroup { degree: i, subgroup: h, divisors: Vec::new(), order: Int::ONE, window_degree: w, subquotient: sq });
    }
    let (top, bottom) = cochain_pair(m, &h, w, res)?;
    let sq = Subquotient::new(top, bottom)?;
    let order = sq.order().ok_or_else(|| Error::Internal("Tate cohomology group is infinite".into()))?;
    Ok(TateGroup {
        degree: i,
        subgroup: h,
        divisors: sq.group.torsion_divisors(),
        order,
        window_degree: w,
        subquotient: sq,
    })
}

/// `|ker Ĥⁱ(H, f)|`.
pub fn induced_kernel_order(f: &ModuleHom, h: &Subgroup, i: i64) -> Result<Int> {
    induced_kernel_order_with(f, h, i, None)
}

pub fn induced_kernel_order_with(f: &ModuleHom, h: &Subgroup, i: i64, res: Option<&Resolution>) -> Result<Int> {
    let owned;
    let res = match res {
        Some(r) => Some(r),
        None => {
            let w = window_degree(f.source.group(), h, i)?;
            if (w == 1 || w == 2) && !h.is_trivial() {
                owned = Resolution::new(f.source.group(), h)?;
                Some(&owned)
            } else {
                None
            }
        }
    };
    let s = tate_with(&f.source, h, i, res)?;
    let t = tate_with(&f.target, h, i, res)?;
    if h.is_trivial() {
        return Ok(Int::ONE);
    }
    let copies = match s.window_degree {
        -1 | 0 => 1,
        1 => res.expect("resolution").generators().len(),
        _ => res.expect("resolution").relator_count(),
    };
    let blocks: Vec<&IntMatrix> = (0..copies).map(|_| &f.matrix).collect();
    let map = IntMatrix::block_diag(&blocks);
    s.subquotient
        .induced_kernel_order(&map, &t.subquotient)?
        .ok_or_else(|| Error::Internal("kernel of a map of finite groups is infinite".into()))
}

/// `ĥ⁰ / ĥ⁻¹` for cyclic `c`.
pub fn herbrand(m: &GModule, c: &Subgroup) -> Result<BigRational> {
    if m.group().cyclic_generator(c).is_none() {
        return Err(Error::NotCyclic);
    }
    let h0 = tate(m, c, 0)?;
    let hm1 = tate(m, c, -1)?;
    Ok(ratio(&h0.order, &hm1.order))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `v_ℓ(h(M))` for the cyclic subgroup `c` of order `q`, from fixed-point ranks alone:
/// `t·r(q) − Σ_{i=1..t} (r(q/ℓⁱ) − r(q/ℓ^{i−1})) / φ(ℓⁱ)` where `ℓ^t ∥ q` and
/// `r(d)` is the rank of the fixed points of the subgroup of order `d`.
pub fn rosen_valuation(m: &GModule, c: &Subgroup, l: u64) -> Result<i64> {
    let g = m.group();
    let gen = g.cyclic_generator(c).ok_or(Error::NotCyclic)?;
    if !is_prime(l) {
        return Err(Error::InvalidArgument(alloc::format!("{l} is not prime")));
    }
    let q = c.order() as u64;
    let mut t = 0u32;
    while q.is_multiple_of(l.pow(t + 1)) {
        t += 1;
    }
    if t == 0 {
        return Ok(0);
    }
    let r = |d: u64| -> i64 {
        let sub = g.generate(&[g.pow(gen, (q / d) as usize)]);
        m.fixed_rank(&sub) as i64
    };
    let mut v = t as i64 * r(q);
    for i in 1..=t {
        let num = r(q / l.pow(i)) - r(q / l.pow(i - 1));
        let phi = (l.pow(i) - l.pow(i - 1)) as i64;
        if num % phi != 0 {
            return Err(Error::Internal(alloc::format!(
                "rank difference {num} not divisible by φ({l}^{i}) = {phi}"
            )));
        }
        v -= num / phi;
    }
    Ok(v)
}

/// `ĥⁱ(Θ, M) = Π_H ĥⁱ(H, M)^{n_H}`.
pub fn theta_product(m: &GModule, theta: &BrauerRelation, i: i64) -> Result<BigRational> {
    let mut cache = ResolutionCache::default();
    theta_product_cached(m, theta, i, &mut cache)
}

pub fn theta_product_cached(
    m: &GModule,
    theta: &BrauerRelation,
    i: i64,
    cache: &mut ResolutionCache,
) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for (h, n) in theta.terms() {
        let res = cache.get(m.group(), h, i)?;
        let t = tate_with(m, h, i, res)?;
        acc *= pow_rational(&int_ratio(&t.order), *n);
    }
    Ok(acc)
}

/// `kⁱ(Θ, f) = Π_H |ker Ĥⁱ(H, f)|^{n_H}`.
pub fn theta_kernel_product(f: &ModuleHom, theta: &BrauerRelation, i: i64, cache: &mut ResolutionCache) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for (h, n) in theta.terms() {
        let res = cache.get(f.source.group(), h, i)?;
        let k = induced_kernel_order_with(f, h, i, res)?;
        acc *= pow_rational(&int_ratio(&k), *n);
    }
    Ok(acc)
}

pub(crate) fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Resolutions keyed by subgroup, for repeated computations over one group.
#[derive(Default)]
pub struct ResolutionCache {
    map: BTreeMap<Subgroup, Resolution>,
}

impl ResolutionCache {
    /// A resolution when degree `i` needs one.
    pub fn get(&mut self, group: &FiniteGroup, h: &Subgroup, i: i64) -> Result<Option<&Resolution>> {
        let w = window_degree(group, h, i)?;
        if !(w == 1 || w == 2) || h.is_trivial() {
            return Ok(None);
        }
        if let Some(r) = self.map.get(h) {
            if r.group() != group {
                return Err(Error::InvalidArgument("resolution cache used with another group".into()));
            }
        } else {
            self.map.insert(h.clone(), Resolution::new(group, h)?);
        }
        Ok(self.map.get(h))
    }
}

/// `v_ℓ` of a nonzero rational.
pub fn valuation(x: &BigRational, l: u64) -> i64 {
    fn v(n: &num_bigint::BigInt, l: u64) -> i64 {
        let l = num_bigint::BigInt::from(l);
        let mut n = n.abs();
        let mut k = 0;
        while !n.is_zero() && (&n % &l).is_zero() {
            n /= &l;
            k += 1;
        }
        k
    }
    v(x.numer(), l) - v(x.denom(), l)
}

/// Small helper used in reports: the rational as `i64` pair when it fits.
pub fn as_fraction(x: &BigRational) -> Option<(i64, i64)> {
    Some((x.numer().to_i64()?, x.denom().to_i64()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brauer::dihedral_relation_in;
    use crate::gmodules::permutation_module;

    fn sign() -> GModule {
        let g = FiniteGroup::cyclic(2).unwrap();
        GModule::new(g, 1, Lattice::zero(1), alloc::vec![IntMatrix::identity(1), IntMatrix::from_i64_rows(&[&[-1]])])
            .unwrap()
    }

    #[test]
    fn trivial_module() {
        for g in [FiniteGroup::cyclic(4).unwrap(), FiniteGroup::dihedral(3).unwrap()] {
            let z = GModule::trivial(&g, 1);
            let h = g.whole();
            assert_eq!(tate(&z, &h, 0).unwrap().order, Int::from(g.order()));
            assert_eq!(tate(&z, &h, -1).unwrap().order, Int::ONE);
            assert_eq!(tate(&z, &h, 1).unwrap().order, Int::ONE);
        }
        let g = FiniteGroup::cyclic(4).unwrap();
        let z = GModule::trivial(&g, 1);
        assert_eq!(tate(&z, &g.whole(), 2).unwrap().divisors, [Int::from(4)]);
        let d = FiniteGroup::dihedral(3).unwrap();
        let z = GModule::trivial(&d, 1);
        // H^2(D_3, Z) = Hom(D_3, Q/Z) = Z/2
        assert_eq!(tate(&z, &d.whole(), 2).unwrap().divisors, [Int::from(2)]);
    }

    #[test]
    fn sign_module() {
        let m = sign();
        let h = m.group().whole();
        assert_eq!(tate(&m, &h, 0).unwrap().order, Int::ONE);
        assert_eq!(tate(&m, &h, -1).unwrap().divisors, [Int::from(2)]);
        assert_eq!(tate(&m, &h, 1).unwrap().divisors, [Int::from(2)]);
        assert_eq!(tate(&m, &h, 2).unwrap().order, Int::ONE);
        assert_eq!(tate(&m, &h, 7).unwrap().window_degree, -1);
    }

    #[test]
    fn free_modules_vanish() {
        let g = FiniteGroup::dihedral(3).unwrap();
        let m = GModule::regular(&g);
        for i in -1..=2 {
            for h in g.all_subgroups().unwrap() {
                assert_eq!(tate(&m, &h, i).unwrap().order, Int::ONE, "{h:?} {i}");
            }
        }
    }

    #[test]
    fn shapiro_example() {
        let g = FiniteGroup::dihedral(3).unwrap();
        let (_, sigma) = g.dihedral_subgroups().unwrap();
        let m = permutation_module(&g, &sigma).unwrap();
        assert_eq!(tate(&m, &g.whole(), 0).unwrap().divisors, [Int::from(2)]);
    }

    #[test]
    fn window() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v4 = FiniteGroup::product(&[c2.clone(), c2]).unwrap();
        let z = GModule::trivial(&v4, 1);
        assert_eq!(tate(&z, &v4.whole(), 3), Err(Error::DegreeOutOfWindow(3)));
        let d = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(window_degree(&d, &d.whole(), -2).unwrap(), 2);
        assert_eq!(window_degree(&d, &d.whole(), 5).unwrap(), 1);
    }

    #[test]
    fn kernel_orders() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let z = GModule::trivial(&g, 1);
        let h = g.whole();
        assert_eq!(induced_kernel_order(&ModuleHom::identity(&z), &h, 0).unwrap(), Int::ONE);
        assert_eq!(induced_kernel_order(&ModuleHom::zero(&z, &z), &h, 0).unwrap(), Int::from(2));
        assert_eq!(induced_kernel_order(&ModuleHom::scalar(&z, &Int::from(2)), &h, 0).unwrap(), Int::from(2));
        let s = sign();
        assert_eq!(induced_kernel_order(&ModuleHom::zero(&s, &s), &h, 1).unwrap(), Int::from(2));
    }

    #[test]
    fn herbrand_and_rosen() {
        for q in [3usize, 9, 15] {
            let g = FiniteGroup::dihedral(q).unwrap();
            let (rho, _) = g.dihedral_subgroups().unwrap();
            let z = GModule::trivial(&g, 1);
            assert_eq!(herbrand(&z, &rho).unwrap(), int_ratio(&Int::from(q)));
            for l in [3u64, 5] {
                assert_eq!(rosen_valuation(&z, &rho, l).unwrap(), valuation(&int_ratio(&Int::from(q)), l));
            }
            let reg = permutation_module(&g, &g.dihedral_subgroups().unwrap().1).unwrap();
            assert_eq!(herbrand(&reg, &rho).unwrap(), BigRational::one());
            assert_eq!(rosen_valuation(&reg, &rho, 3).unwrap(), 0);
            assert_eq!(herbrand(&z, &g.whole()), Err(Error::NotCyclic));
        }
        let g = FiniteGroup::cyclic(3).unwrap();
        let fin = GModule::trivial_cyclic(&g, &Int::from(9));
        assert_eq!(herbrand(&fin, &g.whole()).unwrap(), BigRational::one());
    }

    #[test]
    fn theta_products() {
        for q in [3usize, 5] {
            let g = FiniteGroup::dihedral(q).unwrap();
            let theta = dihedral_relation_in(&g).unwrap();
            let z = GModule::trivial(&g, 1);
            assert_eq!(theta_product(&z, &theta, 0).unwrap(), int_ratio(&Int::from(q)));
            assert_eq!(theta_product(&z, &theta, 1).unwrap(), BigRational::one());
            let reg = GModule::regular(&g);
            for i in -1..=2 {
                assert_eq!(theta_product(&reg, &theta, i).unwrap(), BigRational::one());
            }
            for i in [-1, 0] {
                let a = theta_product(&z, &theta, i).unwrap();
                let b = theta_product(&z, &theta, i + 2).unwrap();
                assert!((a * b).is_one());
            }
        }
    }

    #[test]
    fn valuations() {
        let x = ratio(&Int::from(18), &Int::from(5));
        assert_eq!(valuation(&x, 3), 2);
        assert_eq!(valuation(&x, 5), -1);
        assert!(x.is_positive());
    }
}
