use alloc::string::String;
use core::fmt;

use crate::model::Player;

/// Errors returned by the analytic engine and the game simulator.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// The primitive distribution (or one of its laws) is malformed.
    InvalidModel(String),
    /// Preset parameters outside their admissible range.
    InvalidPreset(String),
    /// Fixed-point search ran out of iterations without bracketing a root.
    NoConvergence {
        max_iter: usize,
        bracket: (f64, f64),
    },
    /// Conditional probability given the root player is undefined when `q_i = 0`.
    UndefinedConditional(Player),
    /// An operation's hypotheses do not hold for this model.
    NotApplicable(String),
    /// Hypotheses of the atom check fail at the requested `k`.
    HypothesisFailed(String),
    /// Conditioning on `{v >= k}` when `beta(k) = 0`.
    DegenerateConditioning { k: f64 },
    /// Exact pmf of the conditional law needs a finite-support base.
    UnsupportedBase(String),
    /// Sampling stopped after touching this many nodes.
    BudgetExceeded(usize),
    /// A strategy has no choice at a decision node it must cover.
    IncompleteStrategy(usize),
    /// Root value of the game lies below the threshold.
    ValueBelowK { root_value: f64, k: f64 },
    /// A closed form was evaluated outside the regime where it applies.
    OutOfRegime(String),
    /// A node list does not describe a well-formed game arena.
    MalformedGame(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidModel(why) => write!(f, "invalid model: {why}"),
            Error::InvalidPreset(why) => write!(f, "invalid preset: {why}"),
            Error::NoConvergence { max_iter, bracket } => write!(
                f,
                "no convergence after {max_iter} iterations (best bracket [{}, {}])",
                bracket.0, bracket.1
            ),
            Error::UndefinedConditional(i) => {
                write!(
                    f,
                    "conditional on player {i} undefined: activation probability is 0"
                )
            }
            Error::NotApplicable(why) => write!(f, "not applicable: {why}"),
            Error::HypothesisFailed(why) => write!(f, "hypothesis failed: {why}"),
            Error::DegenerateConditioning { k } => {
                write!(f, "degenerate conditioning: P(v >= {k}) = 0")
            }
            Error::UnsupportedBase(why) => write!(f, "unsupported base distribution: {why}"),
            Error::BudgetExceeded(n) => write!(f, "node budget exceeded after {n} nodes"),
            Error::IncompleteStrategy(node) => {
                write!(f, "strategy has no choice at decision node {node}")
            }
            Error::ValueBelowK { root_value, k } => {
                write!(f, "root value {root_value} is below k = {k}")
            }
            Error::OutOfRegime(why) => write!(f, "formula out of regime: {why}"),
            Error::MalformedGame(why) => write!(f, "malformed game: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
