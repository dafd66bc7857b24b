use crate::error::ScoreError;

/// Score of one task: `best / found`, at most 1, and 0 when unsolved.
pub fn ipc_score(found: Option<u64>, best: u64) -> Result<f64, ScoreError> {
    if best == 0 {
        return Err(ScoreError::NonPositiveBest(best));
    }
    Ok(match found {
        None => 0.0,
        Some(found) if found <= best => 1.0,
        Some(found) => best as f64 / found as f64,
    })
}

/// Four fractional digits.
pub fn format_score(score: f64) -> String {
    format!("{score:.4}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoreRecord {
    pub task: String,
    pub found: Option<u64>,
    pub best: u64,
    pub score: f64,
}

impl ScoreRecord {
    pub fn new(task: impl Into<String>, found: Option<u64>, best: u64) -> Result<Self, ScoreError> {
        Ok(Self {
            task: task.into(),
            found,
            best,
            score: ipc_score(found, best)?,
        })
    }
}
