//! Weight data `(l, m, α, β)` and the derived constants.
//!
//! Indices in the public contracts are 1-based: `alpha_at(r)` returns `α_i`
//! with `i ≡ r (mod l)` and `1 ≤ i ≤ l`. The order of the weights is kept as
//! given, since the construction depends on it.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::{Error, Result};

/// Default absolute tolerance on `|Σα − Σβ|`.
pub const BALANCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alpha,
    Beta,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Alpha => f.write_str("alpha"),
            Side::Beta => f.write_str("beta"),
        }
    }
}

/// Symbolic name of a slope: `Alpha(i)` is `+α_i`, `Beta(j)` is `−β_j` (1-based).
///
/// Slope multisets are compared on labels, never on floats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SlopeLabel {
    Alpha(usize),
    Beta(usize),
}

impl fmt::Display for SlopeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeLabel::Alpha(i) => write!(f, "alpha_{i}"),
            SlopeLabel::Beta(j) => write!(f, "-beta_{j}"),
        }
    }
}

/// Validated, balanced weights together with `n`, `k`, `d`, `Ω` and `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    k: usize,
    d: usize,
    max_pair_sum: f64,
    min_pair_sum: f64,
}

impl Weights {
    /// Validates with the default balance tolerance.
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let (l, m) = (alpha.len(), beta.len());
        Self::validate(l, m, alpha, beta, BALANCE_TOLERANCE)
    }

    /// Checks lengths, signs, "not all zero" and `|Σα − Σβ| ≤ tol`.
    pub fn validate(l: usize, m: usize, alpha: Vec<f64>, beta: Vec<f64>, tol: f64) -> Result<Self> {
        if l == 0 || alpha.len() != l {
            return Err(Error::LengthMismatch { side: Side::Alpha, expected: l, got: alpha.len() });
        }
        if m == 0 || beta.len() != m {
            return Err(Error::LengthMismatch { side: Side::Beta, expected: m, got: beta.len() });
        }
        for (side, list) in [(Side::Alpha, &alpha), (Side::Beta, &beta)] {
            for (i, &w) in list.iter().enumerate() {
                if !w.is_finite() {
                    return Err(Error::NonFiniteWeight { side, index: i + 1 });
                }
                if w < 0.0 {
                    return Err(Error::NegativeWeight { side, index: i + 1, value: w });
                }
            }
        }
        if alpha.iter().chain(&beta).all(|&w| w == 0.0) {
            return Err(Error::AllZero);
        }
        let alpha_sum: f64 = alpha.iter().sum();
        let beta_sum: f64 = beta.iter().sum();
        if !((alpha_sum - beta_sum).abs() <= tol) {
            return Err(Error::BalanceViolated { alpha_sum, beta_sum });
        }

        let pair_sums = || alpha.iter().flat_map(|a| beta.iter().map(move |b| a + b));
        let max_pair_sum = pair_sums().fold(f64::NEG_INFINITY, f64::max);
        let min_pair_sum = pair_sums().fold(f64::INFINITY, f64::min);

        Ok(Weights { k: l.lcm(&m), d: l.gcd(&m), alpha, beta, max_pair_sum, min_pair_sum })
    }

    pub fn l(&self) -> usize {
        self.alpha.len()
    }

    pub fn m(&self) -> usize {
        self.beta.len()
    }

    pub fn n(&self) -> usize {
        self.l() + self.m()
    }

    /// `lcm(l, m)`, the length of the expansion schedule.
    pub fn k(&self) -> usize {
        self.k
    }

    /// `gcd(l, m)`, the number of residue-class subgraphs.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_prime(&self) -> usize {
        self.n() / self.d
    }

    pub fn k_prime(&self) -> usize {
        self.k / self.d
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// `Ω = max_{i,j} (α_i + β_j)`.
    pub fn max_pair_sum(&self) -> f64 {
        self.max_pair_sum
    }

    /// `ω = min_{i,j} (α_i + β_j)`.
    pub fn min_pair_sum(&self) -> f64 {
        self.min_pair_sum
    }

    /// `α_r` for `r ≥ 1`, read cyclically with period `l`.
    pub fn alpha_at(&self, r: i64) -> Result<f64> {
        if r < 1 {
            return Err(Error::IndexOutOfRange(r));
        }
        Ok(self.alpha_cyclic(r))
    }

    /// `β_r` for `r ≥ 1`, read cyclically with period `m`.
    pub fn beta_at(&self, r: i64) -> Result<f64> {
        if r < 1 {
            return Err(Error::IndexOutOfRange(r));
        }
        Ok(self.beta_cyclic(r))
    }

    /// 1-based position of `α_r` in `alpha`, for any integer `r`.
    pub(crate) fn alpha_index(&self, r: i64) -> usize {
        (r - 1).rem_euclid(self.l() as i64) as usize + 1
    }

    pub(crate) fn beta_index(&self, r: i64) -> usize {
        (r - 1).rem_euclid(self.m() as i64) as usize + 1
    }

    /// Cyclic `α_r` for any integer `r` (including `r ≤ 0`).
    pub(crate) fn alpha_cyclic(&self, r: i64) -> f64 {
        self.alpha[self.alpha_index(r) - 1]
    }

    pub(crate) fn beta_cyclic(&self, r: i64) -> f64 {
        self.beta[self.beta_index(r) - 1]
    }

    /// Numeric value of a slope label.
    pub fn slope_of(&self, label: SlopeLabel) -> f64 {
        match label {
            SlopeLabel::Alpha(i) => self.alpha[i - 1],
            SlopeLabel::Beta(j) => -self.beta[j - 1],
        }
    }

    pub fn nu_vector(&self) -> NuVector {
        let labels = (1..=self.l())
            .map(SlopeLabel::Alpha)
            .chain((1..=self.m()).map(SlopeLabel::Beta))
            .collect::<Vec<_>>();
        let components = labels.iter().map(|&s| self.slope_of(s)).collect();
        NuVector { components, labels }
    }
}

/// `ν = (α_1, …, α_l, −β_1, …, −β_m)` with the matching slope labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuVector {
    components: Vec<f64>,
    labels: Vec<SlopeLabel>,
}

impl NuVector {
    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn labels(&self) -> &[SlopeLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.components.iter().sum()
    }

    /// Largest `|ν_i|`, the Lipschitz bound of every `P_i`.
    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }
}
