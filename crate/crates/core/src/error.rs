use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VarCountMismatch { expected: usize, found: usize },

    #[error("matrix is not invertible")]
    NonInvertible,

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("cone direction lies on the hyperplane of {form}")]
    InvalidCone { form: String },

    #[error("basis is not adapted to the cone direction: {0}")]
    InvalidBasis(String),

    #[error("Gram determinant {0} is not the square of a rational number")]
    IrrationalNormalization(String),

    #[error("denominator factor is identically zero")]
    ZeroDenominator,

    #[error("residue left a non-scalar remainder")]
    NonScalarResidue,

    #[error("fixed-point list is empty")]
    EmptyFixedPoints,

    #[error("no fixed-point component is flagged minimal")]
    NoMinimalComponent,

    #[error("minimality flags disagree with lambda weights at component {0}")]
    InconsistentMinimality(String),

    #[error("class is not invariant under Weyl generator {generator}")]
    NotWeylInvariant { generator: usize },

    #[error("polynomial is not symmetric under the transposition ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("at least two distinct weights are required")]
    TooFewWeights,

    #[error("weight list is empty")]
    EmptyWeights,

    #[error("expected a positive fibre dimension, got d = {0}")]
    NonPositiveFibreDimension(i64),

    #[error("coefficient {0} is not an integer")]
    NonIntegerCoefficient(String),

    #[error("series is not divisible by 1+t (remainder {0})")]
    NotDivisibleByOnePlusT(String),

    #[error("series has a negative coefficient {value} at t^{exponent}")]
    NegativeCoefficient { exponent: usize, value: String },

    #[error("element is not homogeneous")]
    Inhomogeneous,

    #[error("element cannot be expressed in the ring: {0}")]
    NotExpressible(String),

    #[error("graded piece of degree {0} does not vanish above the top degree")]
    NonFinite(usize),

    #[error("Weyl generators produce a group of order {found}, declared {declared}")]
    WeylOrderMismatch { declared: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero vector")]
    ZeroVector,

    #[error("tangent vector is not orthogonal to the point (|<x, v>| = {0:e})")]
    NonTangent(f64),
}
