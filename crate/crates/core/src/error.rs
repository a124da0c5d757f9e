use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    Field(String),
    #[error("polynomial is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("Hensel criterion fails: {0}")]
    HenselFails(String),
    #[error("not an Eisenstein polynomial: {0}")]
    NotEisenstein(String),
    #[error("polynomial does not split in its own stem field: {0}")]
    NotSplit(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("extension is tame: no wild ramification break")]
    TameExtension,
    #[error("map is not additive: {0}")]
    NotAdditive(String),
    #[error("Moore matrix is singular: sample points are F_p-dependent")]
    SingularMoore,
    #[error("extension has more than one lower ramification break")]
    NotSingleBreak,
    #[error("diagram does not commute: {0}")]
    DiagramMismatch(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("character is unramified")]
    UnramifiedCharacter,
    #[error("character is fierce: the totally ramified engine path is unavailable")]
    FierceCharacter,
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("embedding is ramified (e = {0})")]
    RamifiedEmbedding(i64),
    #[error("unsupported residue field presentation: {0}")]
    UnsupportedResiduePresentation(String),
    #[error("element does not lie in the base field: {0}")]
    NotInBase(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::InsufficientPrecision(_))
    }
}
