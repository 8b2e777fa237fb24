use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("denominator reduces to zero modulo sin^2 + cos^2 - 1")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("denominator magnitude below tolerance at the evaluation point")]
    PoleNearPoint,
    #[error("intermediate polynomial has {terms} terms, budget is {budget}")]
    ReductionOverflow { terms: usize, budget: usize },
    #[error("monomial degree exceeds the packed exponent range")]
    ExponentOverflow,
    #[error("series truncation order exhausted by repeated differentiation")]
    SeriesOrderExhausted,
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("syntax error at byte {offset}: expected one of {}", expected.join(", "))]
    Syntax { offset: usize, expected: Vec<String> },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported symbol `{0}` at this rewrite level")]
    UnsupportedSymbol(String),
    #[error("leading cubic coefficient is below tolerance")]
    DegenerateLeadingCoefficient,
    #[error("all cubic roots are real")]
    AllRootsReal,
    #[error("derivative denominator 3*p16*P^2 + 2*p20*P + p21 vanishes")]
    DerivativeDenominatorZero,
    #[error("pole encountered while integrating; last good alpha = {alpha}")]
    PoleEncountered { alpha: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl EngineError {
    /// True for the errors that indicate a bad evaluation point rather than a bad expression.
    pub fn is_pole(&self) -> bool {
        matches!(
            self,
            EngineError::PoleAtPoint | EngineError::PoleNearPoint | EngineError::ZeroDenominator
        )
    }

    pub fn is_overflow(&self) -> bool {
        matches!(
            self,
            EngineError::ReductionOverflow { .. } | EngineError::ExponentOverflow
        )
    }
}

impl From<std::io::Error> for EngineError {
    fn from(e: std::io::Error) -> Self {
        EngineError::Io(e.to_string())
    }
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;
