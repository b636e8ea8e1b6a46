use thiserror::Error;

/// Errors shared across the symbolic and numeric engines.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: n={0} vs n={1}")]
    DimensionMismatch(u8, u8),
    #[error("generator index [{mu},{nu}] out of range 1..={n}")]
    IndexOutOfRange { mu: u8, nu: u8, n: u8 },
    #[error("expected a coordinate-only polynomial")]
    NotCoordPoly,
    #[error("expected a momentum-only element")]
    NotMomentumPoly,
    #[error("principal matrix logarithm undefined: I + u*k has an eigenvalue on the closed negative real axis")]
    SingularBranch,
    #[error("degree guard exceeded: required p-degree {required} > maxPDegree {guard}")]
    DegreeGuardExceeded { required: u32, guard: u32 },
    #[error("invalid similarity spec: {0}")]
    InvalidSpec(String),
    #[error("tensor leg count mismatch: {0} vs {1}")]
    LegMismatch(usize, usize),
}
