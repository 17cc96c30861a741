//! Smith normal form with unimodular transforms.
//!
//! Pivoting is deterministic: at every step the nonzero entry of smallest
//! absolute value in the active submatrix is chosen, ties broken by lowest
//! row and then lowest column.

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::matrix::IntMatrix;
use crate::int::Int;

/// `U * A * V = S` with `S` diagonal and `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero diagonal entries of `S`, each dividing the next.
    pub divisors: Vec<Int>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

struct Transforms {
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

struct Reducer {
    a: IntMatrix,
    t: Option<Transforms>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(t) = &mut self.t {
            t.u.swap_rows(i, j);
            t.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(t) = &mut self.t {
            t.v.swap_cols(i, j);
            t.v_inv.swap_rows(i, j);
        }
    }

    /// row_dst -= q row_src
    fn row_op(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        self.a.row_sub_mul(dst, src, q);
        if let Some(t) = &mut self.t {
            t.u.row_sub_mul(dst, src, q);
            t.u_inv.col_sub_mul(src, dst, &-q);
        }
    }

    /// col_dst -= q col_src
    fn col_op(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        self.a.col_sub_mul(dst, src, q);
        if let Some(t) = &mut self.t {
            t.v.col_sub_mul(dst, src, q);
            t.v_inv.row_sub_mul(src, dst, &-q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(t) = &mut self.t {
            t.u.negate_row(i);
            t.u_inv.negate_col(i);
        }
    }

    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if x.cmp_abs(&self.a[(bi, bj)]) == Ordering::Less {
                            best = Some((i, j));
                        }
                    }
                }
                if let Some(b) = best {
                    // a unit cannot be beaten; the scan order honours the tie rule
                    if self.a[b].abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> Vec<Int> {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut divisors = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            let mut found = false;
            loop {
                let Some((p, q)) = self.smallest(t) else { break };
                found = true;
                self.swap_rows(t, p);
                self.swap_cols(t, q);
                let piv = self.a[(t, t)].clone();
                let mut dirty = false;
                for i in t + 1..m {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let f = self.a[(i, t)].div_floor(&piv);
                    self.row_op(i, t, &f);
                    dirty |= !self.a[(i, t)].is_zero();
                }
                for j in t + 1..n {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let f = self.a[(t, j)].div_floor(&piv);
                    self.col_op(j, t, &f);
                    dirty |= !self.a[(t, j)].is_zero();
                }
                if dirty {
                    continue;
                }
                // divisibility of the remaining block
                let mut offender = None;
                'scan: for i in t + 1..m {
                    for j in t + 1..n {
                        if !piv.divides(&self.a[(i, j)]) {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        // row_t += row_i
                        self.row_op(t, i, &Int::from(-1));
                    }
                    None => break,
                }
            }
            if !found {
                break;
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            divisors.push(self.a[(t, t)].clone());
            t += 1;
        }
        divisors
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer {
        a: a.clone(),
        t: Some(Transforms {
            u: IntMatrix::identity(m),
            u_inv: IntMatrix::identity(m),
            v: IntMatrix::identity(n),
            v_inv: IntMatrix::identity(n),
        }),
    };
    let divisors = r.run();
    let t = r.t.expect("transforms tracked");
    SmithForm { s: r.a, u: t.u, v: t.v, u_inv: t.u_inv, v_inv: t.v_inv, divisors }
}

/// Nonzero elementary divisors only, without transforms.
pub fn elementary_divisors(a: &IntMatrix) -> Vec<Int> {
    // shrink to the HNF first; the divisors are unchanged
    let h = super::lattice::hermite_normal_form(&a.transpose());
    let mut r = Reducer { a: h, t: None };
    r.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).mul(&f.v), f.s);
        assert!(f.u.mul(&f.u_inv).is_identity());
        assert!(f.v.mul(&f.v_inv).is_identity());
        assert_eq!(f.u.det().abs(), Int::ONE);
        assert_eq!(f.v.det().abs(), Int::ONE);
        for w in f.divisors.windows(2) {
            assert!(w[0].divides(&w[1]));
        }
        assert_eq!(elementary_divisors(a), f.divisors);
        f
    }

    #[test]
    fn small_examples() {
        let f = check(&IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]));
        assert_eq!(f.divisors, [Int::from(2), Int::from(4)]);
        let f = check(&IntMatrix::identity(3));
        assert_eq!(f.s, IntMatrix::identity(3));
        let f = check(&IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]));
        assert_eq!(f.divisors, [Int::from(1), Int::from(6)]);
    }

    #[test]
    fn rectangular_and_zero() {
        let f = check(&IntMatrix::from_i64_rows(&[&[0, 0, 0], &[0, 4, 6]]));
        assert_eq!(f.divisors, [Int::from(2)]);
        let f = check(&IntMatrix::zeros(2, 3));
        assert!(f.divisors.is_empty());
        check(&IntMatrix::zeros(0, 3));
    }
}
