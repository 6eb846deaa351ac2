use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self { line, column, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticError {
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error("`{0}` must not be empty")]
    Empty(&'static str),
    #[error("too many symbols or states")]
    TooLarge,
    #[error("duplicate {0} name `{1}`")]
    DuplicateName(&'static str, String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate transition for ({0}, {1})")]
    DuplicateDelta(String, String),
    #[error("transition out of the halting state `{0}`")]
    DeltaFromHalt(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TmError {
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Semantic(#[from] SemanticError),
    #[error("line {line}: {source}")]
    SemanticAt { line: usize, source: SemanticError },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("point ({x}, {y}) is not in any Cantor block")]
    NotInCantorSet { x: String, y: String },
    #[error("invalid twist radii: need 0 < r_in < r_out, got {r_in} and {r_out}")]
    InvalidRadii { r_in: f64, r_out: f64 },
    #[error("twist annulus of outer radius {r_out} about ({cx}, {cy}) leaves the unit disc")]
    AnnulusOutsideDisc { cx: f64, cy: f64, r_out: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PoissonError {
    #[error("k vanishes at sample point {0:?}")]
    VanishingK([f64; 4]),
    #[error("point {0:?} lies on the singular circle")]
    OnSingularSet([f64; 4]),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("time step must be positive, got {0}")]
    BadStep(f64),
    #[error("implicit solve did not converge at step {step} from state {state:?}")]
    NonConvergence { step: usize, state: [f64; 4] },
    #[error("field is not divergence free: max |div| = {0:e}")]
    NotDivergenceFree(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("reachability verdict {verdict} disagrees with the machine run {run}")]
    Disagreement { verdict: String, run: String },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}
