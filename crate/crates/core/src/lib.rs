//! Turing machines compiled to area-preserving Cantor-square dynamics, lifted
//! to volume-preserving flows on a product chart `D × F`, together with
//! numerical checks of the Poisson geometry behind the construction.
//!
//! The pipeline runs
//! [`tm`] → [`shift`] → [`cantor`] → [`lift`], and every stage is checked
//! against the previous one exactly. [`poisson`] holds the chart-level
//! Poisson calculus and [`verify`] collects every check into named suites.

pub mod cantor;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod lift;
pub mod poisson;
pub mod sampling;
pub mod shift;
pub mod tm;
pub mod verify;

pub use error::{DynamicsError, FlowError, ParseError, PipelineError, PoissonError, SemanticError, TmError};
pub use exec::Execution;
