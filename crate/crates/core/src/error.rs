use thiserror::Error;

/// Errors raised by validation, construction and enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate object id `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism id `{0}`")]
    DuplicateMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("object `{0}` has no identity morphism")]
    MissingIdentity(String),
    #[error("identity law violated: {identity} composed with {morphism} gives {composite}")]
    IdentityLawViolation {
        identity: String,
        morphism: String,
        composite: String,
    },
    #[error("composite of ({g}, {f}) is ill-typed: {reason}")]
    IllTypedComposition { g: String, f: String, reason: String },
    #[error("composable pair ({g}, {f}) has no composite")]
    MissingComposite { g: String, f: String },
    #[error("associativity violated on ({h}, {g}, {f})")]
    AssociativityViolation { h: String, g: String, f: String },

    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid natural transformation: {0}")]
    InvalidNatTransformation(String),

    #[error("generator pair ({0}, {1}) is not parallel")]
    NonParallelGenerator(String, String),
    #[error("invalid congruence: {0}")]
    InvalidCongruence(String),

    #[error("search space exceeded the limit of {limit} candidates while {context}")]
    SizeLimitExceeded { limit: u64, context: String },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("malformed term: {0}")]
    MalformedTerm(String),
    #[error("malformed two-cell expression: {0}")]
    MalformedExpression(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("generator `{generator}` has a non-invertible component at {tuple}")]
    NonInvertibleComponent { generator: String, tuple: String },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("not an algebra homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("functor is not faithful: {0}")]
    NotFaithful(String),
    #[error("operation `{operation}` escapes the subcategory at {tuple}")]
    NotClosedUnderOperations { operation: String, tuple: String },
    #[error("component of generator `{generator}` at {tuple} is not in the subcategory")]
    GeneratorComponentEscapes { generator: String, tuple: String },
    #[error("congruence is not closed under operation `{operation}`: {detail}")]
    NotOperationClosed { operation: String, detail: String },
    #[error("structure failed to lift along the coequifier: {0}")]
    LiftFailure(String),
    #[error("probe `{0}` does not satisfy the extension")]
    ProbeViolatesExtension(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
