//! The first terms of a free `Z[H]`-resolution of `Z`, built from a
//! presentation of `H` by Fox calculus:
//!
//! `Z[H]^K --d3--> Z[H]^R --d2--> Z[H]^X --d1--> Z[H] --> Z --> 0`
//!
//! with `d1(e_x) = x - 1`, `d2(e_r) = Σ_x (∂r/∂x) e_x` and `d3` given by
//! `Z[H]`-module generators of `ker d2`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactla::{integer_kernel, IntMatrix, Lattice};
use crate::gmodules::GModule;
use crate::groups::{FiniteGroup, Subgroup};
use crate::int::Int;

/// Sparse element of `Z[G]` supported on `H`: `(element, coefficient)`.
pub type RingElement = Vec<(usize, Int)>;

/// A letter of a word: generator index and whether it is inverted.
type Letter = (usize, bool);

#[derive(Clone, Debug)]
pub struct Resolution {
    group: FiniteGroup,
    subgroup: Subgroup,
    generators: Vec<usize>,
    relators: Vec<Vec<Letter>>,
    /// `fox[r][x] = ∂r/∂x`
    fox: Vec<Vec<RingElement>>,
    /// `kappa[k][r]`: the `r`-th component of the `k`-th generator of `ker d2`.
    kappa: Vec<Vec<RingElement>>,
}

impl Resolution {
    pub fn new(group: &FiniteGroup, h: &Subgroup) -> Result<Self> {
        let h = group.subgroup(h.elements())?;
        let generators = group.generating_set(&h);
        let ctx = Ctx::new(group, &h);
        let nx = generators.len();
        let size = h.order();

        // d1 as a Z-linear map Z^{|H| |X|} -> Z^{|H|}
        let mut d1 = IntMatrix::zeros(size, size * nx);
        for (xi, &x) in generators.iter().enumerate() {
            for (p, &e) in h.elements().iter().enumerate() {
                let col = xi * size + p;
                d1[(ctx.pos(group.mul(e, x)), col)] += Int::ONE;
                d1[(p, col)] -= Int::ONE;
            }
        }
        let ker_d1 = integer_kernel(&d1);

        let mut candidates = schreier_relators(group, &h, &generators);
        candidates.sort_by_key(|w| w.len());
        let mut relators = Vec::new();
        let mut fox = Vec::new();
        let mut span = Lattice::zero(size * nx);
        for w in candidates {
            if span == ker_d1 {
                break;
            }
            let f: Vec<RingElement> = (0..nx).map(|xi| fox_derivative(group, &generators, &w, xi)).collect();
            let cols = ctx.translates(&f, nx);
            let next = span.sum(&Lattice::from_generators(size * nx, cols));
            if next != span {
                span = next;
                relators.push(w);
                fox.push(f);
            }
        }
        if span != ker_d1 {
            return Err(Error::Internal("relators do not present the subgroup".into()));
        }

        // d2 as a Z-linear map and generators of its kernel
        let nr = relators.len();
        let mut cols = Vec::with_capacity(size * nr);
        for f in &fox {
            cols.extend(ctx.translates(f, nx));
        }
        let d2 = IntMatrix::from_columns(size * nx, &cols);
        let ker_d2 = integer_kernel(&d2);
        let mut kappa = Vec::new();
        let mut acc = Lattice::zero(size * nr);
        for b in ker_d2.basis_vectors() {
            if acc == ker_d2 {
                break;
            }
            if acc.contains(b) {
                continue;
            }
            let elt: Vec<RingElement> = (0..nr).map(|r| ctx.ring_element(&b[r * size..(r + 1) * size])).collect();
            acc = acc.sum(&Lattice::from_generators(size * nr, ctx.translates(&elt, nr)));
            kappa.push(elt);
        }
        if acc != ker_d2 {
            return Err(Error::Internal("kernel generators incomplete".into()));
        }
        Ok(Resolution { group: group.clone(), subgroup: h, generators, relators, fox, kappa })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn kernel_generator_count(&self) -> usize {
        self.kappa.len()
    }

    /// Relators as words `(generator index, inverted)`.
    pub fn relators(&self) -> &[Vec<(usize, bool)>] {
        &self.relators
    }

    /// `δ¹: M → M^X`, `m ↦ ((x - 1) m)_x`.
    pub fn delta1(&self, m: &GModule) -> IntMatrix {
        let blocks: Vec<IntMatrix> = self.generators.iter().map(|&x| m.action(x).minus_identity()).collect();
        let refs: Vec<&IntMatrix> = blocks.iter().collect();
        IntMatrix::vstack_or_empty(&refs, m.ambient_rank())
    }

    /// `δ²: M^X → M^R`.
    pub fn delta2(&self, m: &GModule) -> IntMatrix {
        block_matrix(m, &self.fox, self.generators.len())
    }

    /// `δ³: M^R → M^K`.
    pub fn delta3(&self, m: &GModule) -> IntMatrix {
        block_matrix(m, &self.kappa, self.relators.len())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
}

/// Rows indexed by `rows`, each a list of `cols` ring elements acting on `M`.
fn block_matrix(m: &GModule, entries: &[Vec<RingElement>], cols: usize) -> IntMatrix {
    let n = m.ambient_rank();
    let mut out = IntMatrix::zeros(n * entries.len(), n * cols);
    for (r, row) in entries.iter().enumerate() {
        for (c, elt) in row.iter().enumerate() {
            for (g, coeff) in elt {
                let a = m.action(*g);
                for i in 0..n {
                    for j in 0..n {
                        let v = &a[(i, j)];
                        if !v.is_zero() {
                            out[(r * n + i, c * n + j)].add_mul(coeff, v);
                        }
                    }
                }
            }
        }
    }
    out
}

struct Ctx<'a> {
    group: &'a FiniteGroup,
    h: &'a Subgroup,
    pos: Vec<usize>,
}

impl<'a> Ctx<'a> {
    fn new(group: &'a FiniteGroup, h: &'a Subgroup) -> Self {
        let mut pos = vec![usize::MAX; group.order()];
        for (p, &e) in h.elements().iter().enumerate() {
            pos[e] = p;
        }
        Ctx { group, h, pos }
    }

    fn pos(&self, g: usize) -> usize {
        self.pos[g]
    }

    fn ring_element(&self, coeffs: &[Int]) -> RingElement {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (self.h.elements()[p], c.clone()))
            .collect()
    }

    /// All left translates `h · v` of a vector `v ∈ Z[H]^k`, as Z-vectors.
    fn translates(&self, v: &[RingElement], k: usize) -> Vec<Vec<Int>> {
        let size = self.h.order();
        self.h
            .elements()
            .iter()
            .map(|&t| {
                let mut out = vec![Int::ZERO; size * k];
                for (b, elt) in v.iter().enumerate() {
                    for (g, c) in elt {
                        out[b * size + self.pos(self.group.mul(t, *g))] += c;
                    }
                }
                out
            })
            .collect()
    }
}

/// One relator per non-tree edge of a BFS spanning tree of the Cayley graph.
fn schreier_relators(group: &FiniteGroup, h: &Subgroup, gens: &[usize]) -> Vec<Vec<Letter>> {
    let n = group.order();
    let mut word: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut parent_edge: Vec<Option<(usize, usize)>> = vec![None; n];
    word[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (xi, &x) in gens.iter().enumerate() {
            let f = group.mul(e, x);
            if word[f].is_none() {
                let mut w = word[e].clone().expect("visited");
                w.push(xi);
                word[f] = Some(w);
                parent_edge[f] = Some((e, xi));
                queue.push_back(f);
            }
        }
    }
    let mut out = Vec::new();
    for &e in h.elements() {
        for (xi, &x) in gens.iter().enumerate() {
            let f = group.mul(e, x);
            if parent_edge[f] == Some((e, xi)) {
                continue;
            }
            let mut w: Vec<Letter> = word[e].as_ref().expect("connected").iter().map(|&i| (i, false)).collect();
            w.push((xi, false));
            w.extend(word[f].as_ref().expect("connected").iter().rev().map(|&i| (i, true)));
            let w = free_reduce(w);
            if !w.is_empty() {
                out.push(w);
            }
        }
    }
    out
}

fn free_reduce(w: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for l in w {
        if let Some(&last) = out.last() {
            if last.0 == l.0 && last.1 != l.1 {
                out.pop();
                continue;
            }
        }
        out.push(l);
    }
    out
}

/// `∂w/∂x` with `∂(uv) = ∂u + u ∂v`, `∂x/∂x = 1`, `∂x⁻¹/∂x = -x⁻¹`.
fn fox_derivative(group: &FiniteGroup, gens: &[usize], w: &[Letter], xi: usize) -> RingElement {
    let mut acc: Vec<(usize, Int)> = Vec::new();
    let mut prefix = 0usize;
    for &(i, inv) in w {
        let g = if inv { group.inv(gens[i]) } else { gens[i] };
        if i == xi {
            if inv {
                acc.push((group.mul(prefix, g), Int::from(-1)));
            } else {
                acc.push((prefix, Int::ONE));
            }
        }
        prefix = group.mul(prefix, g);
    }
    acc.sort_by_key(|t| t.0);
    let mut merged: RingElement = Vec::new();
    for (g, c) in acc {
        match merged.last_mut() {
            Some((h, d)) if *h == g => *d += c,
            _ => merged.push((g, c)),
        }
    }
    merged.retain(|(_, c)| !c.is_zero());
    merged
}
