use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: bad JSON, a non-primitive normal, a non-positive offset.
    #[error("parse error: {0}")]
    Parse(String),

    /// The input is well formed but the requested operation does not apply.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polyhedron has no vertex (normals span a rank {rank} sublattice of Z^{dim})")]
    NoVertex { rank: usize, dim: usize },

    #[error("polyhedron is not monotone: no translation makes all offsets equal")]
    NotMonotone,

    #[error("polyhedron is not compact: toric divisors have no inverse certificate")]
    NonCompact,

    #[error("element {0} does not lie in the cone")]
    NotInCone(String),

    /// A decomposition that must be integral is not; only non-Delzant data can cause this.
    #[error("lattice failure: {0}")]
    Lattice(String),

    #[error("degree {degree} exceeds the presentation bound {bound}")]
    DegreeOverflow { degree: i64, bound: i64 },

    /// A property the theory guarantees failed to verify.
    #[error("verified property failed: {0}")]
    Property(String),
}

impl Error {
    /// Process exit code used by the command line front-end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Property(_) | Error::Lattice(_) => 4,
            _ => 3,
        }
    }
}
