use thiserror::Error;

use crate::dist::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no entries given")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("masses sum to 1 - ({deficit}), expected exactly 1")]
    MassNotOne { deficit: Rational },
    #[error("negative mass {mass}")]
    NegativeMass { mass: Rational },
    #[error("weight at position {index} is zero")]
    ZeroWeight { index: usize },
    #[error("alpha = {0} is outside (0, 1)")]
    AlphaOutOfRange(Rational),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("support set has {found} points, need {expected}")]
    WrongSupportSize { expected: usize, found: usize },
    #[error("remainder point y lies in A")]
    YInA,
    #[error("sequence has no symmetric decreasing rearrangement (value {value} is unpaired)")]
    NotSymmetrizable { value: Rational },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("n = {0} is odd, an even number of summands is required")]
    OddN(usize),
    #[error("n = {0} is even, an odd number of summands is required")]
    EvenN(usize),
    #[error("concentration {q} exceeds alpha = {alpha}")]
    QTooLarge { q: Box<Rational>, alpha: Box<Rational> },
    #[error("search space too large: {size} > cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("lattice coordinate overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
