//! Exact integer linear algebra.

mod abelian;
mod lattice;
mod matrix;
mod smith;

pub use abelian::{qindex, random_hom, subquotient_group, GroupHom, PresentedAbelianGroup, QIndex, Subquotient};
pub(crate) use abelian::{int_ratio, ratio};
pub(crate) use lattice::unit;
pub use lattice::{hermite_normal_form, integer_kernel, rank, Lattice};
pub use matrix::IntMatrix;
pub use smith::{elementary_divisors, smith_normal_form, SmithForm};
