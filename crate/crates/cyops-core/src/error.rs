use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyError {
    #[error("pole in hypergeometric coefficient: lower parameter {param} at index {index}")]
    PoleInCoefficient { param: String, index: usize },
    #[error("inner series has nonzero constant term")]
    NonzeroConstantTerm,
    #[error("unsupported specification: {0}")]
    UnsupportedSpec(String),
    #[error("no linear dependence found up to order {0}")]
    DegenerateElimination(usize),
    #[error("operator is not self-dual")]
    NotSelfDual,
    #[error("unknown surface {0:?}")]
    UnknownSurface(String),
    #[error("discriminant vanishes identically")]
    IdenticallySingular,
    #[error("model is not minimal at {0}")]
    NonMinimalAtLocus(String),
    #[error("substitution leaves a denominator")]
    NonPolynomialResult,
    #[error("series division by a non-unit leaves a pole at index {0}")]
    SeriesDivisionPole(usize),
    #[error("unknown table {0:?}")]
    UnknownTable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CyError>;
