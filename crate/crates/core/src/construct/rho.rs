use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `base^(num/den)`, kept alongside the float so that `σ_r` and `τ` can be
/// evaluated from a summed exponent instead of a running product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerForm {
    pub base: f64,
    pub num: i64,
    pub den: i64,
}

impl PowerForm {
    pub fn value(&self) -> f64 {
        self.base.powf(self.num as f64 / self.den as f64)
    }

    fn exponent(&self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }
}

/// One expansion factor `ρ_r > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rho {
    value: f64,
    power: Option<PowerForm>,
}

impl Rho {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn power(&self) -> Option<PowerForm> {
        self.power
    }

    pub fn from_value(value: f64) -> Self {
        Rho { value, power: None }
    }

    pub fn from_power(power: PowerForm) -> Self {
        Rho { value: power.value(), power: Some(power) }
    }
}

impl From<f64> for Rho {
    fn from(value: f64) -> Self {
        Rho::from_value(value)
    }
}

/// The factors `ρ_1..ρ_k` with partial products `σ_0 = 1, σ_r = ρ_1⋯ρ_r` and
/// period ratio `τ = σ_k`.
///
/// Indices beyond one period follow `σ_{sk+h} = τ^s σ_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoSchedule {
    rho: Vec<Rho>,
    sigma: Vec<f64>,
}

impl RhoSchedule {
    pub fn new(rho: Vec<Rho>) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::RhoLength { expected: 1, got: 0 });
        }
        for (i, r) in rho.iter().enumerate() {
            let index = i + 1;
            if let Some(p) = r.power {
                if p.den == 0 {
                    return Err(Error::InvalidPowerForm { index, reason: "den must be non-zero".into() });
                }
                if !(p.base > 0.0) || !p.base.is_finite() {
                    return Err(Error::InvalidPowerForm { index, reason: "base must be a finite number > 0".into() });
                }
            }
            if !(r.value > 1.0) || !r.value.is_finite() {
                return Err(Error::RhoNotExpanding { index, value: r.value });
            }
        }
        let sigma = exact_partial_products(&rho).unwrap_or_else(|| {
            std::iter::once(1.0)
                .chain(rho.iter().scan(1.0, |acc, r| {
                    *acc *= r.value;
                    Some(*acc)
                }))
                .collect()
        });
        Ok(RhoSchedule { rho, sigma })
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().copied().map(Rho::from_value).collect())
    }

    /// `k` copies of `base^(num/den)`.
    pub fn uniform_power(k: usize, base: f64, num: i64, den: i64) -> Result<Self> {
        Self::new(vec![Rho::from_power(PowerForm { base, num, den }); k])
    }

    pub fn k(&self) -> usize {
        self.rho.len()
    }

    pub fn entries(&self) -> &[Rho] {
        &self.rho
    }

    pub fn values(&self) -> Vec<f64> {
        self.rho.iter().map(Rho::value).collect()
    }

    /// `σ_0..σ_k`.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn tau(&self) -> f64 {
        self.sigma[self.k()]
    }

    /// `ρ_j` for any integer `j`, read with period `k` (`ρ_0 = ρ_k`).
    pub fn rho_at(&self, j: i64) -> f64 {
        self.rho[(j - 1).rem_euclid(self.k() as i64) as usize].value
    }

    /// `σ_r` under the periodic extension, for any integer `r`.
    pub fn sigma_at(&self, r: i64) -> f64 {
        let k = self.k() as i64;
        let s = r.div_euclid(k);
        let h = r.rem_euclid(k) as usize;
        self.tau().powi(s as i32) * self.sigma[h]
    }

    /// `ψ_r^s = ρ_{r+1}⋯ρ_{r+s}`; full periods contribute a factor `τ` each.
    pub fn psi(&self, r: i64, s: usize) -> f64 {
        let k = self.k();
        let partial: f64 = (1..=(s % k) as i64).map(|i| self.rho_at(r + i)).product();
        self.tau().powi((s / k) as i32) * partial
    }
}

/// When every factor is a power of one common base, `σ_r` is `base` raised to a
/// summed rational exponent.
fn exact_partial_products(rho: &[Rho]) -> Option<Vec<f64>> {
    let base = rho.first()?.power?.base;
    let mut exponent = Ratio::from_integer(0i64);
    let mut sigma = vec![1.0];
    for r in rho {
        let p = r.power?;
        if p.base != base {
            return None;
        }
        exponent += p.exponent();
        sigma.push(base.powf(*exponent.numer() as f64 / *exponent.denom() as f64));
    }
    Some(sigma)
}
