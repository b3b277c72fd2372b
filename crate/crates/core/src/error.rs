use thiserror::Error;

use crate::scalar::ScalarField;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(ScalarField, ScalarField),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("invalid algebra: {axiom} fails at {indices:?}")]
    InvalidAlgebra { axiom: String, indices: Vec<usize> },
    #[error("factor {factor} is not local with residue field k: {reason}")]
    NotLocalFactor { factor: usize, reason: String },
    #[error("factor {factor}: element {element} of the maximal ideal is not nilpotent")]
    NotNilpotent { factor: usize, element: String },
    #[error("bad idempotents: {0}")]
    BadIdempotents(String),
    #[error("basis is not stratified: {reason}")]
    StrataMismatch {
        reason: String,
        /// A stratified basis, each vector given in coordinates of the supplied basis.
        corrected: Vec<Vec<String>>,
    },
    #[error("structure not well defined: coordinate {coordinate} of the image of relation {relation} is nonzero")]
    NotWellDefined { relation: String, coordinate: usize },
    #[error("structure does not extend the base structure at generator {generator}")]
    BaseMismatch { generator: String },
    #[error("not a D-ideal: coordinate {coordinate} of the image of {generator} leaves the ideal")]
    NotDIdeal { generator: String, coordinate: usize },
    #[error("truncation exceeded: {variable} sits at the maximal depth {depth}")]
    TruncationExceeded { variable: String, depth: usize },
    #[error("variable clash: {0}")]
    VariableClash(String),
    #[error("non-invertible matrix: {witness} ({reason})")]
    NonInvertibleMatrix { witness: String, reason: String },
    #[error("singular change of basis")]
    SingularBasisChange,
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not a D-homomorphism: {0}")]
    NotADHomomorphism(String),
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("not finite dimensional: {0}")]
    NotFiniteDimensional(String),
    #[error("combinatorial budget exceeded: {candidates} candidates, budget {budget}")]
    CombinatorialBudgetExceeded { candidates: String, budget: u64 },
    #[error("parse error in {context} at line {line}, column {column}: {message}")]
    Parse {
        context: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    /// Short, stable name of the variant, used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::NotAUnit(_) => "NotAUnit",
            Error::ResourceLimit(_) => "ResourceLimit",
            Error::InvalidAlgebra { .. } => "InvalidAlgebra",
            Error::NotLocalFactor { .. } => "NotLocalFactor",
            Error::NotNilpotent { .. } => "NotNilpotent",
            Error::BadIdempotents(_) => "BadIdempotents",
            Error::StrataMismatch { .. } => "StrataMismatch",
            Error::NotWellDefined { .. } => "NotWellDefined",
            Error::BaseMismatch { .. } => "BaseMismatch",
            Error::NotDIdeal { .. } => "NotDIdeal",
            Error::TruncationExceeded { .. } => "TruncationExceeded",
            Error::VariableClash(_) => "VariableClash",
            Error::NonInvertibleMatrix { .. } => "NonInvertibleMatrix",
            Error::SingularBasisChange => "SingularBasisChange",
            Error::NotAHomomorphism(_) => "NotAHomomorphism",
            Error::NotADHomomorphism(_) => "NotADHomomorphism",
            Error::CarrierMismatch(_) => "CarrierMismatch",
            Error::NotFiniteDimensional(_) => "NotFiniteDimensional",
            Error::CombinatorialBudgetExceeded { .. } => "CombinatorialBudgetExceeded",
            Error::Parse { .. } => "ParseError",
            Error::Input(_) => "InputError",
        }
    }

    /// Malformed or invalid input, as opposed to a mathematical obstruction.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Input(_)
                | Error::FieldMismatch(..)
                | Error::InvalidAlgebra { .. }
                | Error::NotLocalFactor { .. }
                | Error::NotNilpotent { .. }
                | Error::BadIdempotents(_)
                | Error::StrataMismatch { .. }
                | Error::NotWellDefined { .. }
                | Error::BaseMismatch { .. }
                | Error::VariableClash(_)
                | Error::CarrierMismatch(_)
                | Error::SingularBasisChange
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
