use thiserror::Error;

use crate::model::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("vertex {0} is its own parent")]
    SelfParent(Vertex),
    #[error("parent mapping contains a cycle through vertex {0}")]
    CycleDetected(Vertex),
    #[error("parent value {value} of vertex {vertex} is outside 0..={n}")]
    OutOfRange { vertex: Vertex, value: i64, n: usize },
    #[error("root label {root} is not the maximum label {max}")]
    RootNotMaximum { root: Vertex, max: Vertex },
    #[error("declared vertex count {declared} does not match {actual} parent entries")]
    LengthMismatch { declared: usize, actual: usize },
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("could not parse input: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("vertex {vertex} is not in 1..={n}")]
    UnknownVertex { vertex: Vertex, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParkingError {
    #[error("preference {value} of car {car} is not a positive integer")]
    NonPositivePreference { car: usize, value: i64 },
    #[error("not a parking function: car {car} parks at space {space} > {n}")]
    NotParkingFunction { car: usize, space: usize, n: usize },
    #[error("could not parse input: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("malformed space word: {0}")]
    MalformedWord(String),
    #[error("inversion value {value} at vertex {vertex} exceeds subtree size {size} minus one")]
    InvalidInversionValue {
        vertex: Vertex,
        value: usize,
        size: usize,
    },
    #[error("processing order is not a permutation of the vertices")]
    InvalidOrder,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("n = {n} exceeds the enumeration budget of {max}")]
    BudgetExceeded { n: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenFuncError {
    #[error(transparent)]
    Budget(#[from] EnumerateError),
    #[error("product formula needs n >= 1")]
    EmptyProduct,
    #[error("coefficient overflow")]
    Overflow,
    #[error("statistics disagree while assembling polynomial: {0}")]
    InconsistentStatistics(String),
}
