use thiserror::Error;

use crate::weights::Side;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{side} weight {index} is negative ({value})")]
    NegativeWeight { side: Side, index: usize, value: f64 },
    #[error("{side} weight {index} is not finite")]
    NonFiniteWeight { side: Side, index: usize },
    #[error("all weights are zero")]
    AllZero,
    #[error("weights are not balanced: sum(alpha) = {alpha_sum}, sum(beta) = {beta_sum}")]
    BalanceViolated { alpha_sum: f64, beta_sum: f64 },
    #[error("expected {expected} {side} weights, got {got}")]
    LengthMismatch { side: Side, expected: usize, got: usize },
    #[error("weight index {0} is out of range (indices start at 1)")]
    IndexOutOfRange(i64),
    #[error("expected {expected} expansion factors (lcm(l, m)), got {got}")]
    RhoLength { expected: usize, got: usize },
    #[error("expansion factor rho_{index} = {value} must be a finite number > 1")]
    RhoNotExpanding { index: usize, value: f64 },
    #[error("invalid power form for rho_{index}: {reason}")]
    InvalidPowerForm { index: usize, reason: String },
    #[error("l = {l} and m = {m} are not coprime")]
    NotCoprime { l: usize, m: usize },
    #[error("linear system for the node slopes is singular")]
    SingularSystem,
    #[error("abscissa {0} is negative")]
    NegativeAbscissa(f64),
    #[error("window t_min = {t_min} exceeds t_max = {t_max}")]
    EmptyWindow { t_min: i64, t_max: i64 },
}
