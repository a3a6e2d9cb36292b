use crate::fock::MultiIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("basis of {requested} states exceeds the dimension cap of {cap}")]
    Capacity { requested: u128, cap: usize },

    #[error("kappa = 0 is singular: the shift nu = 1 - 1/kappa is undefined")]
    SingularParameter,

    /// At least one squared ladder amplitude is negative.
    #[error("non-unitary representation: {} negative radicand(s), first at mode {} state {}",
        .offending.len(), .offending[0].0 + 1, .offending[0].1)]
    NonUnitary {
        offending: Vec<(usize, MultiIndex, f64)>,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unknown relation tag `{0}`")]
    UnknownRelation(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
