use thiserror::Error;

use crate::task::Fact;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("operator `{operator}` is not applicable")]
pub struct ApplyError {
    pub operator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("step {step}: unknown operator `{name}`")]
    UnknownOperator { step: usize, name: String },
    #[error("step {step}: operator `{name}` is not applicable")]
    InapplicableAtStep { step: usize, name: String },
    #[error("goal fact {name} ({fact}) does not hold at the end of the plan")]
    GoalNotSatisfied { fact: Fact, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: index out of range: {msg}")]
    IndexOutOfRange { line: usize, msg: String },
    #[error("line {line}: variable {var} assigned twice")]
    DuplicateVariable { line: usize, var: usize },
    #[error("line {line}: duplicate fact name `{name}`")]
    DuplicateFactName { line: usize, name: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::IndexOutOfRange { line, .. }
            | ParseError::DuplicateVariable { line, .. }
            | ParseError::DuplicateFactName { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("reference cost must be positive, got {0}")]
    NonPositiveBest(u64),
}
