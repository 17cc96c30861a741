//! Independent realizations of `Ĥ¹` and `Ĥ²`, used to cross-check the
//! resolution-based computation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactla::{IntMatrix, Lattice, Subquotient};
use crate::gmodules::{tensor_product, GModule};
use crate::groups::Subgroup;
use crate::int::Int;

/// `Ĥ¹(H, M)` as normalized inhomogeneous cocycles `f: H \ {1} → M` modulo coboundaries.
/// Returns the elementary divisors.
pub fn h1_cocycles(m: &GModule, h: &Subgroup) -> Result<Vec<Int>> {
    Ok(h1_cocycle_subquotient(m, h)?.group.torsion_divisors())
}

pub fn h1_cocycle_subquotient(m: &GModule, h: &Subgroup) -> Result<Subquotient> {
    let g = m.group();
    let h = g.subgroup(h.elements())?;
    let n = m.ambient_rank();
    let others: Vec<usize> = h.elements().iter().copied().filter(|&x| x != 0).collect();
    let k = others.len();
    let slot = |x: usize| others.iter().position(|&y| y == x);
    // f(ab) - f(a) - a f(b) ∈ L for all non-identity a, b
    let mut rows: Vec<IntMatrix> = Vec::with_capacity(k * k);
    for &a in &others {
        for &b in &others {
            let mut block = IntMatrix::zeros(n, n * k);
            let mut put = |s: usize, mat: &IntMatrix, sign: i64| {
                for i in 0..n {
                    for j in 0..n {
                        let v = &mat[(i, j)];
                        if !v.is_zero() {
                            block[(i, s * n + j)].add_mul(&Int::from(sign), v);
                        }
                    }
                }
            };
            let id = IntMatrix::identity(n);
            if let Some(s) = slot(g.mul(a, b)) {
                put(s, &id, 1);
            }
            put(slot(a).expect("non-identity"), &id, -1);
            put(slot(b).expect("non-identity"), m.action(a), -1);
            rows.push(block);
        }
    }
    let refs: Vec<&IntMatrix> = rows.iter().collect();
    let cond = IntMatrix::vstack_or_empty(&refs, n * k);
    let top = Lattice::preimage(&cond, &m.relations().power(k * k));
    let blocks: Vec<IntMatrix> = others.iter().map(|&x| m.action(x).minus_identity()).collect();
    let brefs: Vec<&IntMatrix> = blocks.iter().collect();
    let delta = IntMatrix::vstack_or_empty(&brefs, n);
    let bottom = Lattice::column_span(&delta).sum(&m.relations().power(k));
    Subquotient::new(top, bottom)
}

/// `0 → M → Z[G] ⊗ M → Q → 0` with `m ↦ Σ_g g ⊗ m`; the middle term is
/// cohomologically trivial for every subgroup, so `Ĥ^{i+1}(H, M) ≅ Ĥⁱ(H, Q)`.
pub fn dimension_shift(m: &GModule) -> Result<GModule> {
    let g = m.group();
    let reg = GModule::regular(g);
    let t = tensor_product(&reg, m)?;
    let n = m.ambient_rank();
    let size = g.order();
    let diag: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            let mut v = vec![Int::ZERO; size * n];
            for b in 0..size {
                v[b * n + j] = Int::ONE;
            }
            v
        })
        .collect();
    let lat = t.relations().sum(&Lattice::from_generators(size * n, diag));
    t.quotient(&lat)
}

/// `Ĥ²(H, M)` as `Ĥ¹(H, Q)` by the dimension shift, via cocycles.
pub fn h2_dimension_shift(m: &GModule, h: &Subgroup) -> Result<Vec<Int>> {
    let q = dimension_shift(m)?;
    if q.group() != m.group() {
        return Err(Error::Internal("shifted module lives over another group".into()));
    }
    h1_cocycles(&q, h)
}
