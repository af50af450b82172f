use alloc::string::String;

/// Errors raised by the numerical layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),
    #[error("matrix is exactly singular (zero pivot at column {0})")]
    Singular(usize),
    #[error("matrix is nearly singular (pivot ratio {0:.3e})")]
    NearSingular(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parameters outside the strip |Re(alpha +- beta)| < 1: {0}")]
    ParameterStrip(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("symbol is singular at this point")]
    SingularPoint,
    #[error("operation not defined for this symbol variant: {0}")]
    WrongVariant(&'static str),
    #[error("truncation budget of {budget} terms cannot certify a tail below {tol:.1e}")]
    TruncationBudget { budget: usize, tol: f64 },
    #[error("E constant diverges for this symbol")]
    DivergentE,
    #[error("log of the symbol is not integrable")]
    NonIntegrableLog,
    #[error("kernel has a jump at u = 0; use one-sided limits")]
    EvaluationAtJump,
    #[error("symbol determinant vanishes on the real line")]
    ZeroDeterminantSymbol,
    #[error("refinement budget exhausted: best log value {best_re} + {best_im}i, estimate {estimate:.3e}")]
    BudgetExhausted {
        best_re: f64,
        best_im: f64,
        estimate: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Stable kebab-case code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::GammaPole(_) => "gamma-pole",
            Error::Singular(_) => "singular",
            Error::NearSingular(_) => "near-singular",
            Error::Dimension(_) => "dimension",
            Error::ParameterStrip(_) => "parameter-strip",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::SingularPoint => "singular-point",
            Error::WrongVariant(_) => "wrong-variant",
            Error::TruncationBudget { .. } => "truncation-budget",
            Error::DivergentE => "divergent-e",
            Error::NonIntegrableLog => "non-integrable-log",
            Error::EvaluationAtJump => "evaluation-at-jump",
            Error::ZeroDeterminantSymbol => "zero-determinant-symbol",
            Error::BudgetExhausted { .. } => "budget-exhausted",
        }
    }
}
