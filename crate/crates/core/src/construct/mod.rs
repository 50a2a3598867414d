//! Node slopes of the regular graph.
//!
//! The graph has nodes `a_r^t = τ^t σ_r (1, u_r)` and `b_r^t = τ^t σ_r (1, v_r)`.
//! Segment `A_r^t` joins `a_r^t` to `b_{r+l}^t` with slope `α_{r+1}`, segment
//! `B_r^t` joins `b_r^t` to `a_{r+m}^t` with slope `−β_{r+1}`. Following an `A`
//! then a `B` segment gives the cyclic relations
//!
//! ```text
//! u_r − χ_r u_{r+n} = −U_r,    v_r − χ_r v_{r+n} = −V_r,    χ_r = ψ_r^n,
//! ```
//!
//! with subscripts modulo `k`. The map `r ↦ r + n` splits `Z/k` into `d`
//! cycles of length `k' = k/d` (the residue classes modulo `d`), and
//! telescoping one cycle gives `(τ^{n'} − 1) u_r = Σ_j (χ_r⋯χ_{r+(j−1)n}) U_{r+jn}`.
//!
//! Three routes produce `u`, `v`:
//! * [`solve_uv_coprime`]: expanded closed form, `d = 1` only;
//! * [`solve_uv_telescoped`]: telescoped sums per residue class, any `d`;
//! * [`oracle::solve_uv_oracle`]: dense LU solve of the `k × k` system, for tests.

pub mod oracle;
mod rho;

use serde::Serialize;

pub use rho::{PowerForm, Rho, RhoSchedule};

use crate::weights::{SlopeLabel, Weights};
use crate::{Error, Result};

/// `U_r = α_{r+1}(ψ_r^l − 1) − β_{r+l+1}(ψ_r^n − ψ_r^l)`.
pub fn compute_u(w: &Weights, rho: &RhoSchedule, r: i64) -> f64 {
    let (l, n) = (w.l(), w.n());
    let psi_l = rho.psi(r, l);
    w.alpha_cyclic(r + 1) * (psi_l - 1.0) - w.beta_cyclic(r + l as i64 + 1) * (rho.psi(r, n) - psi_l)
}

/// `V_r = −β_{r+1}(ψ_r^m − 1) + α_{r+m+1}(ψ_r^n − ψ_r^m)`.
pub fn compute_v(w: &Weights, rho: &RhoSchedule, r: i64) -> f64 {
    let (m, n) = (w.m(), w.n());
    let psi_m = rho.psi(r, m);
    -w.beta_cyclic(r + 1) * (psi_m - 1.0) + w.alpha_cyclic(r + m as i64 + 1) * (rho.psi(r, n) - psi_m)
}

/// `χ_r = ψ_r^n`.
pub fn chi(w: &Weights, rho: &RhoSchedule, r: i64) -> f64 {
    rho.psi(r, w.n())
}

/// `χ_r χ_{r+n} ⋯ χ_{r+(len−1)n}`. Over one cycle (`len = k'`) this is `τ^{n'}`.
pub fn chi_cycle_product(w: &Weights, rho: &RhoSchedule, r: i64, len: usize) -> f64 {
    let n = w.n() as i64;
    (0..len as i64).map(|j| chi(w, rho, r + j * n)).product()
}

fn check_lengths(w: &Weights, rho: &RhoSchedule) -> Result<()> {
    if rho.k() != w.k() {
        return Err(Error::RhoLength { expected: w.k(), got: rho.k() });
    }
    Ok(())
}

/// Expanded closed forms for `u_r` and `v_r` when `gcd(l, m) = 1`.
pub fn solve_uv_coprime(w: &Weights, rho: &RhoSchedule) -> Result<(Vec<f64>, Vec<f64>)> {
    check_lengths(w, rho)?;
    if w.d() != 1 {
        return Err(Error::NotCoprime { l: w.l(), m: w.m() });
    }
    let (l, m, n, k) = (w.l(), w.m(), w.n(), w.k());
    let denom = rho.tau().powi(n as i32) - 1.0;
    let mut u = Vec::with_capacity(k);
    let mut v = Vec::with_capacity(k);
    for r in 0..k as i64 {
        let psi = |s: usize| rho.psi(r, s);
        let (mut su, mut sv) = (0.0, 0.0);
        for j in 0..k {
            let jn = j * n;
            let shift = r + 1 + jn as i64;
            su += w.alpha_cyclic(shift) * (psi(jn + l) - psi(jn))
                - w.beta_cyclic(shift + l as i64) * (psi(jn + n) - psi(jn + l));
            sv += w.alpha_cyclic(shift + m as i64) * (psi(jn + n) - psi(jn + m))
                - w.beta_cyclic(shift) * (psi(jn + m) - psi(jn));
        }
        u.push(su / denom);
        v.push(sv / denom);
    }
    Ok((u, v))
}

/// Solves `x_r − χ_r x_{r+n} = −rhs_r` by telescoping each cycle of `r ↦ r + n`.
fn telescope(w: &Weights, rho: &RhoSchedule, rhs: &[f64]) -> Vec<f64> {
    let (n, k) = (w.n() as i64, w.k() as i64);
    let denom = rho.tau().powi(w.n_prime() as i32) - 1.0;
    (0..k)
        .map(|r| {
            let mut acc = 0.0;
            let mut coeff = 1.0;
            for j in 0..w.k_prime() as i64 {
                let idx = (r + j * n).rem_euclid(k);
                acc += coeff * rhs[idx as usize];
                coeff *= chi(w, rho, idx);
            }
            acc / denom
        })
        .collect()
}

/// Telescoped sums over the residue classes modulo `d`; reduces to the
/// coprime telescoping when `d = 1`.
pub fn solve_uv_telescoped(w: &Weights, rho: &RhoSchedule) -> Result<(Vec<f64>, Vec<f64>)> {
    check_lengths(w, rho)?;
    let k = w.k() as i64;
    let big_u: Vec<f64> = (0..k).map(|r| compute_u(w, rho, r)).collect();
    let big_v: Vec<f64> = (0..k).map(|r| compute_v(w, rho, r)).collect();
    Ok((telescope(w, rho, &big_u), telescope(w, rho, &big_v)))
}

/// Builds the regular graph: closed form when `gcd(l, m) = 1`, residue-class
/// telescoping otherwise.
pub fn solve_uv_general(w: &Weights, rho: &RhoSchedule) -> Result<RegularGraph> {
    let (u, v) = if w.d() == 1 { solve_uv_coprime(w, rho)? } else { solve_uv_telescoped(w, rho)? };
    let subgraphs = if w.d() > 1 { subgraph_components(w, &u, &v) } else { Vec::new() };
    Ok(RegularGraph { weights: w.clone(), rho: rho.clone(), u, v, subgraphs })
}

/// Recovers `v` from `u` through the `A`-segment slopes:
/// `ψ_r^l v_{r+l} = u_r + α_{r+1}(ψ_r^l − 1)`.
pub fn recover_v_from_u(w: &Weights, rho: &RhoSchedule, u: &[f64]) -> Vec<f64> {
    let k = w.k();
    let mut v = vec![0.0; k];
    for (r, &ur) in u.iter().enumerate() {
        let psi_l = rho.psi(r as i64, w.l());
        v[(r + w.l()) % k] = (ur + w.alpha_cyclic(r as i64 + 1) * (psi_l - 1.0)) / psi_l;
    }
    v
}

fn subgraph_components(w: &Weights, u: &[f64], v: &[f64]) -> Vec<SubgraphComponent> {
    let d = w.d();
    (0..d)
        .map(|f| {
            let labels: Vec<SlopeLabel> = (1..=w.l())
                .filter(|i| (i - 1) % d == f)
                .map(SlopeLabel::Alpha)
                .chain((1..=w.m()).filter(|j| (j - 1) % d == f).map(SlopeLabel::Beta))
                .collect();
            let nu: Vec<f64> = labels.iter().map(|&s| w.slope_of(s)).collect();
            let members = || (0..w.k_prime()).map(move |h| f + d * h);
            SubgraphComponent {
                f,
                gamma: nu.iter().sum(),
                nu,
                labels,
                u: members().map(|r| u[r]).collect(),
                v: members().map(|r| v[r]).collect(),
            }
        })
        .collect()
}

/// Subgraph `G^f` made of the segments `A_r^t`, `B_r^t` with `r ≡ f (mod d)`.
///
/// Its slopes are the `α_i`, `−β_j` with `i ≡ j ≡ f + 1 (mod d)` and its
/// component functions sum to `γ^f q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgraphComponent {
    pub f: usize,
    pub labels: Vec<SlopeLabel>,
    pub nu: Vec<f64>,
    pub gamma: f64,
    /// `u_h^f = u_{f + d h}`, `0 ≤ h < k'`.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// The solved graph `G(ν, ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularGraph {
    weights: Weights,
    rho: RhoSchedule,
    u: Vec<f64>,
    v: Vec<f64>,
    subgraphs: Vec<SubgraphComponent>,
}

impl RegularGraph {
    pub fn build(weights: Weights, rho: RhoSchedule) -> Result<Self> {
        solve_uv_general(&weights, &rho)
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn rho(&self) -> &RhoSchedule {
        &self.rho
    }

    pub fn tau(&self) -> f64 {
        self.rho.tau()
    }

    /// Slopes of the rays `L_r` carrying `a_r^t`.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Slopes of the rays `M_r` carrying `b_r^t`.
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Empty when `gcd(l, m) = 1`.
    pub fn subgraphs(&self) -> &[SubgraphComponent] {
        &self.subgraphs
    }

    pub(crate) fn u_cyclic(&self, r: i64) -> f64 {
        self.u[r.rem_euclid(self.u.len() as i64) as usize]
    }

    pub(crate) fn v_cyclic(&self, r: i64) -> f64 {
        self.v[r.rem_euclid(self.v.len() as i64) as usize]
    }

    /// Worst residuals of the cyclic relations for `u` and for `v`.
    pub fn recurrence_residuals(&self) -> (f64, f64) {
        let (w, rho) = (&self.weights, &self.rho);
        let n = w.n() as i64;
        let mut worst = (0.0f64, 0.0f64);
        for r in 0..w.k() as i64 {
            let c = chi(w, rho, r);
            let ru = self.u_cyclic(r) - c * self.u_cyclic(r + n) + compute_u(w, rho, r);
            let rv = self.v_cyclic(r) - c * self.v_cyclic(r + n) + compute_v(w, rho, r);
            worst = (worst.0.max(ru.abs()), worst.1.max(rv.abs()));
        }
        worst
    }

    /// Worst mismatch, relative to `σ_r`, between the rise of `A_r` (resp. `B_r`)
    /// and `α_{r+1}` (resp. `−β_{r+1}`) times its run.
    pub fn slope_residuals(&self) -> (f64, f64) {
        let (w, rho) = (&self.weights, &self.rho);
        let (l, m) = (w.l() as i64, w.m() as i64);
        let mut worst = (0.0f64, 0.0f64);
        for r in 0..w.k() as i64 {
            let s = rho.sigma_at(r);
            let (sl, sm) = (rho.sigma_at(r + l), rho.sigma_at(r + m));
            let a = (sl * self.v_cyclic(r + l) - s * self.u_cyclic(r)) - w.alpha_cyclic(r + 1) * (sl - s);
            let b = (sm * self.u_cyclic(r + m) - s * self.v_cyclic(r)) + w.beta_cyclic(r + 1) * (sm - s);
            worst = (worst.0.max((a / s).abs()), worst.1.max((b / s).abs()));
        }
        worst
    }
}
