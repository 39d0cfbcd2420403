use std::fmt;

use thiserror::Error;

use crate::machine::MachineError;
use crate::qcond::MAX_FORK_PATHS;
use crate::syntax::{Pos, SyntaxError};
use crate::tape::TapeError;

use super::check::StaticError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Fault {
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Tape(#[from] TapeError),
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("for-loop step is zero")]
    ZeroStep,
    #[error("more than {MAX_FORK_PATHS} classical paths through forking if-statements")]
    TooManyPaths,
    #[error("{0}")]
    Type(String),
    #[error("`{0}` is not defined")]
    Undefined(String),
    #[error("function `{0}` ended without returning a value")]
    NoReturn(String),
}

impl Fault {
    pub fn at(self, pos: Pos) -> RuntimeError {
        RuntimeError { pos, fault: self }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("runtime error at {pos}: {fault}")]
pub struct RuntimeError {
    pub pos: Pos,
    pub fault: Fault,
}

/// Static-check diagnostics for one program or input line.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticErrors(pub Vec<StaticError>);

impl fmt::Display for StaticErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for StaticErrors {}

/// Any failure while loading or running a program.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Static(#[from] StaticErrors),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Static diagnostics, if this is a static-check failure.
    pub fn static_errors(&self) -> &[StaticError] {
        match self {
            Error::Static(s) => &s.0,
            _ => &[],
        }
    }
}
