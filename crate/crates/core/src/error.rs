use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Coxeter matrix: {0}")]
    MatrixShape(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("elements belong to different Coxeter systems")]
    SystemMismatch,
    #[error("resource limit exceeded: {what} > {limit}")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("radius {radius} is too small (need at least {min})")]
    RadiusTooSmall { radius: usize, min: usize },
    #[error("special subgroup is not finite")]
    NotFinite,
    #[error("rank {0} is not 2 or 3")]
    BadRank(usize),
    #[error("unknown cellulation `{0}`")]
    UnknownCellulation(String),
    #[error("angle {0} is outside (0, π/2]")]
    AngleRange(String),
    #[error("k = {0} must be even")]
    OddK(u32),
    #[error("k = {0} must be at least 4")]
    KTooSmall(u32),
    #[error("p = {0} must be even")]
    OddP(u32),
    #[error("not a star-fixing witness: {0}")]
    NotAWitness(String),
    #[error("invalid link graph: {0}")]
    InvalidGraph(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
