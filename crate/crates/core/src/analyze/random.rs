//! Random instance generators for the randomized checks.

use rand::Rng;

use crate::construct::RhoSchedule;
use crate::weights::Weights;

/// Positive weights with `l ≤ max_l`, `m ≤ max_m`, drawn from `[0.2, 2)` and
/// rescaled so that `Σβ = Σα`.
pub fn balanced_weights<R: Rng>(rng: &mut R, max_l: usize, max_m: usize) -> Weights {
    loop {
        let l = rng.gen_range(1..=max_l);
        let m = rng.gen_range(1..=max_m);
        let alpha: Vec<f64> = (0..l).map(|_| rng.gen_range(0.2..2.0)).collect();
        let beta: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..2.0)).collect();
        let scale = alpha.iter().sum::<f64>() / beta.iter().sum::<f64>();
        let beta = beta.into_iter().map(|b| b * scale).collect();
        if let Ok(w) = Weights::new(alpha, beta) {
            return w;
        }
    }
}

/// `k` factors drawn uniformly from `range`.
pub fn rho_schedule<R: Rng>(rng: &mut R, k: usize, range: std::ops::Range<f64>) -> RhoSchedule {
    let values: Vec<f64> = (0..k).map(|_| rng.gen_range(range.clone())).collect();
    RhoSchedule::from_values(&values).expect("factors drawn above 1")
}

/// Random weights and `ρ ∈ (1.05, 3)`.
pub fn instance<R: Rng>(rng: &mut R, max_l: usize, max_m: usize) -> (Weights, RhoSchedule) {
    let w = balanced_weights(rng, max_l, max_m);
    let rho = rho_schedule(rng, w.k(), 1.05..3.0);
    (w, rho)
}

/// Random instance whose `ρ` has been enlarged (every factor raised to the
/// same power) until the ratio criterion holds for all `r`.
pub fn instance_with_ratio_criterion<R: Rng>(rng: &mut R, max_l: usize, max_m: usize) -> (Weights, RhoSchedule) {
    let (w, rho) = instance(rng, max_l, max_m);
    let mut values = rho.values();
    loop {
        let rho = RhoSchedule::from_values(&values).expect("factors above 1");
        if super::check_proper_sufficient(&w, &rho).ratio.passed() {
            return (w, rho);
        }
        values.iter_mut().for_each(|v| *v = v.powf(1.25));
    }
}

/// Weights with `m = 1`, `β_1 = l` and positive random `α`.
pub fn single_output_weights<R: Rng>(rng: &mut R, l: usize) -> Weights {
    loop {
        let raw: Vec<f64> = (0..l).map(|_| rng.gen_range(0.1..2.0)).collect();
        let scale = l as f64 / raw.iter().sum::<f64>();
        let alpha = raw.into_iter().map(|a| a * scale).collect();
        if let Ok(w) = Weights::new(alpha, vec![l as f64]) {
            return w;
        }
    }
}
