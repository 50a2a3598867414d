//! Direct solve of the cyclic relations as a dense `k × k` system.
//!
//! Used to cross-check the closed forms; no telescoping is involved here.

use nalgebra::{DMatrix, DVector};

use super::{check_lengths, chi, compute_u, compute_v, RhoSchedule};
use crate::weights::Weights;
use crate::{Error, Result};

/// `(I − C) x = −rhs` where `C` has `χ_r` at `(r, (r + n) mod k)`.
fn solve_cyclic(w: &Weights, rho: &RhoSchedule, rhs: &[f64]) -> Result<Vec<f64>> {
    let k = w.k();
    let mut matrix = DMatrix::<f64>::identity(k, k);
    for r in 0..k {
        matrix[(r, (r + w.n()) % k)] -= chi(w, rho, r as i64);
    }
    let b = DVector::from_iterator(k, rhs.iter().map(|x| -x));
    matrix.lu().solve(&b).map(|x| x.iter().copied().collect()).ok_or(Error::SingularSystem)
}

pub fn solve_uv_oracle(w: &Weights, rho: &RhoSchedule) -> Result<(Vec<f64>, Vec<f64>)> {
    check_lengths(w, rho)?;
    let k = w.k() as i64;
    let big_u: Vec<f64> = (0..k).map(|r| compute_u(w, rho, r)).collect();
    let big_v: Vec<f64> = (0..k).map(|r| compute_v(w, rho, r)).collect();
    Ok((solve_cyclic(w, rho, &big_u)?, solve_cyclic(w, rho, &big_v)?))
}
