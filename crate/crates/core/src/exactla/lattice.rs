//! Sublattices of `Z^n` in Hermite normal form.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::matrix::IntMatrix;
use crate::int::Int;

/// `rows[dst] -= q * rows[src]`, touching only columns `from..`.
fn row_sub_mul(rows: &mut [Vec<Int>], dst: usize, src: usize, q: &Int, from: usize) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (a, b) = rows.split_at_mut(src);
        (&mut a[dst], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(dst);
        (&mut b[0], &a[src])
    };
    for (x, y) in d[from..].iter_mut().zip(&s[from..]) {
        if !y.is_zero() {
            x.sub_mul(q, y);
        }
    }
}

/// Row-echelon reduction of `rows` on the leading `ncols` columns using only
/// unimodular row operations. Returns the pivot columns; rows `0..pivots.len()`
/// are the echelon rows with positive pivots and the remaining rows vanish on
/// the leading columns. With `reduce_above` the echelon part is the Hermite
/// normal form (entries above a pivot lie in `[0, pivot)`).
pub(crate) fn echelonize(rows: &mut [Vec<Int>], ncols: usize, reduce_above: bool) -> Vec<usize> {
    let m = rows.len();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                let x = &rows[i][col];
                if !x.is_zero()
                    && best.is_none_or(|b| x.cmp_abs(&rows[b][col]) == Ordering::Less)
                {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            rows.swap(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_round(&rows[r][col]);
                row_sub_mul(rows, i, r, &q, col);
                if !rows[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                if rows[r][col].is_negative() {
                    for x in rows[r][col..].iter_mut() {
                        *x = -&*x;
                    }
                }
                if reduce_above {
                    for i in 0..r {
                        if rows[i][col].is_zero() {
                            continue;
                        }
                        let q = rows[i][col].div_floor(&rows[r][col]);
                        row_sub_mul(rows, i, r, &q, col);
                    }
                }
                pivots.push(col);
                r += 1;
                break;
            }
        }
    }
    pivots
}

/// A sublattice of `Z^n`, stored by its Hermite normal form basis.
///
/// Two lattices are equal iff their stored bases coincide.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<Int>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_generators(ambient, (0..ambient).map(|i| unit(ambient, i)))
    }

    /// `c * Z^n`.
    pub fn scaled_full(ambient: usize, c: &Int) -> Self {
        Self::from_generators(
            ambient,
            (0..ambient).map(|i| {
                let mut v = vec![Int::ZERO; ambient];
                v[i] = c.clone();
                v
            }),
        )
    }

    pub fn from_generators<I>(ambient: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = Vec<Int>>,
    {
        let mut rows: Vec<Vec<Int>> = gens
            .into_iter()
            .inspect(|g| assert_eq!(g.len(), ambient, "generator length mismatch"))
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .collect();
        let pivots = echelonize(&mut rows, ambient, true);
        rows.truncate(pivots.len());
        Lattice { ambient, basis: rows, pivots }
    }

    /// Lattice spanned by the columns of `m`.
    pub fn column_span(m: &IntMatrix) -> Self {
        Self::from_generators(m.rows(), m.columns())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full_rank(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Basis vectors (HNF rows).
    pub fn basis_vectors(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis as the columns of an `n x rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient, &self.basis)
    }

    /// Coefficients `c` with `v = sum c_i b_i`, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut v = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        let mut next = 0;
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if v[next..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = v[p].div_mod_floor(&b[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, y) in v[p..].iter_mut().zip(&b[p..]) {
                    if !y.is_zero() {
                        x.sub_mul(&q, y);
                    }
                }
            }
            coeffs.push(q);
            next = p + 1;
        }
        if v.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coeffs)
    }

    /// Reduces `v` modulo the lattice to a canonical representative.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        let mut v = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let q = v[p].div_floor(&b[p]);
            if !q.is_zero() {
                for (x, y) in v[p..].iter_mut().zip(&b[p..]) {
                    x.sub_mul(&q, y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.ambient == self.ambient && other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient, other.ambient);
        Self::from_generators(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersection(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient, other.ambient);
        let n = self.ambient;
        let mut rows: Vec<Vec<Int>> = Vec::with_capacity(self.rank() + other.rank());
        for b in &self.basis {
            let mut r = b.clone();
            r.extend(b.iter().cloned());
            rows.push(r);
        }
        for b in &other.basis {
            let mut r = b.clone();
            r.extend(core::iter::repeat_n(Int::ZERO, n));
            rows.push(r);
        }
        let piv = echelonize(&mut rows, n, false);
        Self::from_generators(n, rows.drain(piv.len()..).map(|r| r[n..].to_vec()))
    }

    /// Image under `m` (an `k x n` matrix), as a sublattice of `Z^k`.
    pub fn image(&self, m: &IntMatrix) -> Lattice {
        assert_eq!(m.cols(), self.ambient);
        Self::from_generators(m.rows(), self.basis.iter().map(|b| m.mul_vec(b)))
    }

    /// `{x in Z^n : m x in target}` for an `k x n` matrix `m`.
    pub fn preimage(m: &IntMatrix, target: &Lattice) -> Lattice {
        assert_eq!(m.rows(), target.ambient);
        let (k, n) = (m.rows(), m.cols());
        let mut rows: Vec<Vec<Int>> = Vec::with_capacity(n + target.rank());
        for j in 0..n {
            let mut r = m.column(j);
            r.extend((0..n).map(|i| if i == j { Int::ONE } else { Int::ZERO }));
            rows.push(r);
        }
        for b in &target.basis {
            let mut r = b.clone();
            r.extend(core::iter::repeat_n(Int::ZERO, n));
            rows.push(r);
        }
        let piv = echelonize(&mut rows, k, false);
        Self::from_generators(n, rows.drain(piv.len()..).map(|r| r[k..].to_vec()))
    }

    /// `(L ⊗ Q) ∩ Z^n`.
    pub fn saturate(&self) -> Lattice {
        if self.is_zero() {
            return self.clone();
        }
        if self.is_full_rank() {
            return Lattice::full(self.ambient);
        }
        let b = IntMatrix::from_rows(self.ambient, self.basis.clone());
        let ortho = integer_kernel(&b);
        if ortho.is_zero() {
            return Lattice::full(self.ambient);
        }
        let o = IntMatrix::from_rows(self.ambient, ortho.basis.clone());
        integer_kernel(&o)
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    /// `[self : sub]` when `sub` has the same rank; `None` when the index is infinite.
    /// Panics if `sub` is not contained in `self`.
    pub fn index_of(&self, sub: &Lattice) -> Option<Int> {
        if sub.rank() != self.rank() {
            assert!(sub.rank() < self.rank(), "sublattice has larger rank");
            return None;
        }
        let coords: Vec<Vec<Int>> = sub
            .basis
            .iter()
            .map(|b| self.coordinates(b).expect("index_of: not a sublattice"))
            .collect();
        let m = IntMatrix::from_rows(self.rank(), coords);
        Some(m.det().abs())
    }

    /// Index of a full-rank lattice in `Z^n`: the product of its HNF pivots.
    pub fn covolume(&self) -> Option<Int> {
        if !self.is_full_rank() {
            return None;
        }
        Some(self.basis.iter().zip(&self.pivots).map(|(b, &p)| b[p].clone()).product())
    }

    /// Embeds `Z^n` into `Z^(n + extra)` at coordinate offset `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> Lattice {
        assert!(offset + self.ambient <= total);
        let basis: Vec<Vec<Int>> = self
            .basis
            .iter()
            .map(|b| {
                let mut v = vec![Int::ZERO; total];
                v[offset..offset + self.ambient].clone_from_slice(b);
                v
            })
            .collect();
        Lattice::from_generators(total, basis)
    }

    /// Direct sum `self ⊕ other` in `Z^(n+m)`.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let total = self.ambient + other.ambient;
        self.embed(total, 0).sum(&other.embed(total, self.ambient))
    }

    /// `L^k` inside `Z^(n k)`.
    pub fn power(&self, k: usize) -> Lattice {
        let total = self.ambient * k;
        let mut gens = Vec::with_capacity(self.rank() * k);
        for block in 0..k {
            for b in &self.basis {
                let mut v = vec![Int::ZERO; total];
                v[block * self.ambient..(block + 1) * self.ambient].clone_from_slice(b);
                gens.push(v);
            }
        }
        Lattice::from_generators(total, gens)
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Int> {
    let mut v = vec![Int::ZERO; n];
    v[i] = Int::ONE;
    v
}

/// Saturated kernel `{x in Z^n : A x = 0}` of an `m x n` matrix.
pub fn integer_kernel(a: &IntMatrix) -> Lattice {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            let mut r = a.column(j);
            r.extend((0..n).map(|i| if i == j { Int::ONE } else { Int::ZERO }));
            r
        })
        .collect();
    let piv = echelonize(&mut rows, m, false);
    Lattice::from_generators(n, rows.drain(piv.len()..).map(|r| r[m..].to_vec()))
}

/// Free rank of the column span.
pub fn rank(a: &IntMatrix) -> usize {
    let mut rows = a.to_rows();
    echelonize(&mut rows, a.cols(), false).len()
}

/// Row Hermite normal form of `a` with zero rows removed.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let l = Lattice::from_generators(a.cols(), a.to_rows());
    IntMatrix::from_rows(a.cols(), l.basis)
}
