use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A multiplication table failed a group axiom.
    InvalidGroup(String),
    /// A set of elements is not a subgroup of the ambient group.
    InvalidSubgroup(String),
    /// A module presentation violates one of the module invariants.
    InvalidModule(String),
    /// `V` is not contained in `U` when forming `U/V`.
    NotASubquotient,
    /// Matrix shapes do not fit together.
    Shape(String),
    /// Tate cohomology requested outside the supported degree window.
    DegreeOutOfWindow(i64),
    /// An operation needs a cyclic subgroup.
    NotCyclic,
    /// The Z-dual was requested on a module with torsion.
    HasTorsion,
    /// The finite dual was requested on an infinite module.
    NotFinite,
    /// A q-index needed to be finite but was not.
    InfiniteQIndex(String),
    /// A formal sum of subgroups is not a Brauer relation.
    NotBrauerRelation(String),
    /// A configured size limit was exceeded.
    ResourceLimit(String),
    /// Bad argument value (parity of q, profile parameters, prime, ...).
    InvalidArgument(String),
    /// Two independent computations disagreed, or a should-be-impossible state was reached.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGroup(s) => write!(f, "invalid group: {s}"),
            Error::InvalidSubgroup(s) => write!(f, "invalid subgroup: {s}"),
            Error::InvalidModule(s) => write!(f, "invalid module: {s}"),
            Error::NotASubquotient => write!(f, "not a subquotient"),
            Error::Shape(s) => write!(f, "shape mismatch: {s}"),
            Error::DegreeOutOfWindow(i) => {
                write!(f, "degree out of supported window: {i}")
            }
            Error::NotCyclic => write!(f, "subgroup is not cyclic"),
            Error::HasTorsion => write!(f, "module has Z-torsion; take the torsion-free quotient first"),
            Error::NotFinite => write!(f, "module is not finite"),
            Error::InfiniteQIndex(s) => write!(f, "infinite q-index: {s}"),
            Error::NotBrauerRelation(s) => write!(f, "not a Brauer relation: {s}"),
            Error::ResourceLimit(s) => write!(f, "resource limit exceeded: {s}"),
            Error::InvalidArgument(s) => write!(f, "invalid argument: {s}"),
            Error::Internal(s) => write!(f, "internal consistency failure: {s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
