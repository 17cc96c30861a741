//! Exact computations with integral representations of finite groups:
//! Tate cohomology, Brauer relations and regulator constants.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod brauer;
pub mod cohomology;
pub mod error;
pub mod exactla;
pub mod gmodules;
pub mod groups;
pub mod int;
pub mod regulator;

pub use error::{Error, Result};
pub use int::Int;
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
