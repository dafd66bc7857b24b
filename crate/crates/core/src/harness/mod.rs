//! Scoring, DOT export and brute-force oracles.

mod dot;
mod oracle;
mod score;

pub use dot::export_dot;
pub use oracle::{brute_force_landmark_oracle, greedy_necessary_oracle, shortest_plan, Verdict};
pub use score::{format_score, ipc_score, ScoreRecord};
