use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {index} out of range for graph of order {n}")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("weight {0} is not one of 0 (green), 1 (blue), 2 (red)")]
    InvalidWeight(u8),

    #[error("pair ({0}, {0}) is a diagonal entry; the diagonal is fixed at 0")]
    DiagonalPair(usize),

    #[error("minimum degree of the empty graph is undefined")]
    EmptyGraph,

    #[error("graph order {n} exceeds the supported maximum of {max}")]
    OrderTooLarge { n: usize, max: usize },

    #[error("{what}: n = {n} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        n: usize,
        bound: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("input graph is not free of the family (member {member} embeds)")]
    NotFamilyFree { member: usize },

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("vertex set is not a red clique: pair ({0}, {1}) has weight below 2")]
    NotRedClique(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
