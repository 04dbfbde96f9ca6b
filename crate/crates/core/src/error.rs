use crate::formula::VarId;
use crate::smtlib::SourceSpan;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unbound variable `{0}`")]
    UnboundVariable(VarId),

    #[error("{span}: syntax error: expected {expected}, found {found}")]
    Syntax {
        span: SourceSpan,
        expected: String,
        found: String,
    },

    #[error("{span}: nonlinear term (variable multiplied by variable)")]
    NonlinearTerm { span: SourceSpan },

    #[error("{span}: unsupported sort `{sort}`")]
    UnsupportedSort { span: SourceSpan, sort: String },

    #[error("{span}: unsupported construct: {message}")]
    Unsupported { span: SourceSpan, message: String },

    #[error("variable `{var}` would need the negative value {value}; variables range over naturals")]
    NegativeLiteralVariableDomain { var: String, value: String },

    #[error("backend failure: {0}")]
    BackendFailure(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("not decomposable on {target}")]
    NotDecomposable { target: String },

    #[error("decomposition failed its equivalence check: {0}")]
    EquivalenceCheckFailed(String),

    #[error("too many propositional variables: {given} (limit {limit})")]
    TooManyVariables { given: usize, limit: usize },

    #[error("formula is not monadic: free variables {0:?}")]
    NotMonadic(Vec<String>),

    #[error("too many linear functions over the block: {count} (limit {limit})")]
    TooManyFunctions { count: usize, limit: usize },

    #[error("estimated output of {estimated} disjuncts exceeds the cap of {cap}")]
    TooLarge { estimated: String, cap: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn not_decomposable(vars: &[VarId]) -> Self {
        let names: Vec<&str> = vars.iter().map(VarId::name).collect();
        Error::NotDecomposable {
            target: format!("{{{}}}", names.join(", ")),
        }
    }
}
