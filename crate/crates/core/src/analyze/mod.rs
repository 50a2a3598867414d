//! Checks for the defining properties of a regular ν-graph.
//!
//! Every check returns a [`CheckEntry`]; failures are data, not errors.
//! Sufficient conditions for properness report [`Outcome::NotSufficient`]
//! when they do not hold, since that says nothing about the graph itself.

pub mod random;

use serde::Serialize;

use crate::construct::{compute_u, compute_v, RegularGraph, RhoSchedule};
use crate::graph::PiecewiseLinearSystem;
use crate::weights::{NuVector, SlopeLabel, Weights};

/// Default tolerance for the invariant checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// A sufficient condition that does not hold.
    NotSufficient,
    /// The hypothesis of the check is not met.
    NotApplicable,
    /// The system covers fewer than two periods.
    InsufficientWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum Witness {
    /// 0-based node index `r` (1-based for the single-output corollary).
    Index { r: usize },
    Piece { index: usize, q: f64 },
    /// 1-based component index `i` at abscissa `q`.
    Component { i: usize, q: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: &'static str,
    pub outcome: Outcome,
    pub tolerance: f64,
    /// Worst residual for invariants, smallest slack for inequalities.
    pub margin: f64,
    pub witness: Option<Witness>,
    /// Extreme observed value of the tested quantity, when meaningful.
    pub observed: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl CheckEntry {
    fn new(name: &'static str, outcome: Outcome, tolerance: f64, margin: f64) -> Self {
        CheckEntry {
            name,
            outcome,
            tolerance,
            margin,
            witness: None,
            observed: None,
            threshold: None,
            detail: String::new(),
        }
    }

    fn with_witness(mut self, witness: Option<Witness>) -> Self {
        self.witness = witness;
        self
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// Counts against the exit status: a violated invariant or an unusable window.
    pub fn is_failure(&self) -> bool {
        matches!(self.outcome, Outcome::Fail | Outcome::InsufficientWindow)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
    /// Seed of randomized checks, when any ran.
    pub seed: Option<u64>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        !self.entries.iter().any(CheckEntry::is_failure)
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

/// Cyclic relations and segment slopes of the solved graph.
pub fn check_node_relations(g: &RegularGraph, tol: f64) -> CheckEntry {
    let scale = g.u().iter().chain(g.v()).fold(1.0f64, |acc, x| acc.max(x.abs()));
    let (ru, rv) = g.recurrence_residuals();
    let (ra, rb) = g.slope_residuals();
    let worst = ru.max(rv).max(ra).max(rb);
    CheckEntry::new("node_relations", outcome(worst <= tol * scale), tol, worst)
        .with_detail(format!("recurrence u {ru:.3e}, v {rv:.3e}; slope A {ra:.3e}, B {rb:.3e}"))
}

/// ν-system properties on every piece: slope labels form a permutation of
/// `ν`, `Σ P_i = 0`, continuity across breakpoints, and `|P_i(q)| ≤ max|ν|·q`
/// (compatibility with `P_i(0) = 0`). Sums and the origin bound are measured
/// relative to `max(1, q)`, continuity relative to `max(1, |P_i|)`.
pub fn check_nu_graph(sys: &PiecewiseLinearSystem, nu: &NuVector, tol: f64) -> CheckEntry {
    let mut expected: Vec<SlopeLabel> = nu.labels().to_vec();
    expected.sort();
    let lipschitz = nu.max_abs();
    let mut worst = 0.0f64;
    let mut failure: Option<(String, Witness)> = None;
    let mut record = |residual: f64, bound: f64, what: &str, witness: Witness| {
        let normalized = residual / bound;
        worst = worst.max(normalized);
        if normalized > tol && failure.is_none() {
            failure = Some((format!("{what} residual {residual:.3e}"), witness));
        }
    };

    for (index, piece) in sys.pieces.iter().enumerate() {
        let at = Witness::Piece { index, q: piece.q_lo };
        let mut labels: Vec<SlopeLabel> = piece.components.iter().map(|c| c.label).collect();
        labels.sort();
        if labels != expected {
            record(f64::INFINITY, 1.0, "slope multiset", at);
        }
        for (q, values) in [(piece.q_lo, piece.start_values()), (piece.q_hi, piece.end_values())] {
            record(values.iter().sum::<f64>().abs(), q.max(1.0), "sum", at);
            for v in &values {
                record((v.abs() - lipschitz * q).max(0.0), q.max(1.0), "origin bound", at);
            }
        }
        if let Some(next) = sys.pieces.get(index + 1) {
            for (i, (a, b)) in piece.end_values().iter().zip(next.start_values()).enumerate() {
                let w = Witness::Component { i: i + 1, q: next.q_lo };
                record((a - b).abs(), b.abs().max(1.0), "continuity", w);
            }
        }
    }
    let margin = if worst.is_finite() { worst } else { f64::MAX };
    let (detail, witness) = failure.map_or((String::new(), None), |(d, w)| (d, Some(w)));
    CheckEntry::new("nu_graph", outcome(witness.is_none()), tol, margin).with_witness(witness).with_detail(detail)
}

/// Period `t + 1` must be period `t` scaled by `τ`: breakpoints and values
/// within `tol` relative, slope labels identical.
pub fn check_regular(g: &RegularGraph, sys: &PiecewiseLinearSystem, tol: f64) -> CheckEntry {
    if sys.periods() < 2 {
        return CheckEntry::new("regular", Outcome::InsufficientWindow, tol, 0.0)
            .with_detail("regularity needs a window of at least two periods");
    }
    let tau = g.tau();
    let mut worst = 0.0f64;
    let mut failure = None;
    let base_index = |t: i64| sys.pieces.partition_point(|p| p.t < t);
    for t in sys.t_lo..sys.t_hi {
        let (here, next) = (sys.period_pieces(t), sys.period_pieces(t + 1));
        if here.len() != next.len() {
            failure.get_or_insert((
                format!("period {t} has {} pieces, period {} has {}", here.len(), t + 1, next.len()),
                Witness::Piece { index: base_index(t + 1), q: next.first().map_or(0.0, |p| p.q_lo) },
            ));
            worst = f64::MAX;
            continue;
        }
        for (offset, (a, b)) in here.iter().zip(next).enumerate() {
            let at = Witness::Piece { index: base_index(t + 1) + offset, q: b.q_lo };
            let mut residuals = vec![
                (b.q_lo - tau * a.q_lo).abs() / b.q_lo,
                (b.q_hi - tau * a.q_hi).abs() / b.q_hi,
            ];
            for (ca, cb) in a.components.iter().zip(&b.components) {
                residuals.push((cb.value - tau * ca.value).abs() / cb.value.abs().max(1.0));
                if ca.label != cb.label {
                    residuals.push(f64::MAX);
                }
            }
            let r = residuals.into_iter().fold(0.0, f64::max);
            worst = worst.max(r);
            if r > tol {
                failure.get_or_insert((format!("scaled mismatch {r:.3e}"), at));
            }
        }
    }
    let (detail, witness) = failure.map_or((String::new(), None), |(d, w)| (d, Some(w)));
    CheckEntry::new("regular", outcome(witness.is_none()), tol, worst).with_witness(witness).with_detail(detail)
}

/// Slope sums of the bottom `i` components on either side of `q`
/// (`i` is 1-based). Inside a piece both sums coincide.
pub fn slope_sums_at(sys: &PiecewiseLinearSystem, q: f64, i: usize) -> Option<(f64, f64)> {
    let right = sys.pieces.iter().position(|p| q >= p.q_lo && q < p.q_hi)?;
    let left = if q == sys.pieces[right].q_lo { right.checked_sub(1)? } else { right };
    let sum = |p: usize| sys.pieces[p].components[..i].iter().map(|c| c.slope).sum::<f64>();
    Some((sum(left), sum(right)))
}

/// Properness from the definition: at every interior breakpoint `q` and every
/// `i` with `P_i(q) < P_{i+1}(q)`, the slopes of `P_1..P_i` to the left of `q`
/// sum to at most their slopes to the right. Gaps below `tol·max(1, |P_{i+1}(q)|)`
/// count as ties.
pub fn check_proper_direct(sys: &PiecewiseLinearSystem, tol: f64) -> CheckEntry {
    let slope_scale = sys.pieces.first().map_or(1.0, |p| p.slopes().iter().map(|s| s.abs()).sum::<f64>().max(1.0));
    let mut margin = f64::MAX;
    let mut witness = None;
    let mut tested = 0usize;
    for pair in sys.pieces.windows(2) {
        let (left, right) = (&pair[0], &pair[1]);
        let q = right.q_lo;
        let values = right.start_values();
        let (mut left_sum, mut right_sum) = (0.0, 0.0);
        for i in 0..values.len() - 1 {
            left_sum += left.components[i].slope;
            right_sum += right.components[i].slope;
            if values[i + 1] - values[i] <= tol * values[i + 1].abs().max(1.0) {
                continue;
            }
            tested += 1;
            let slack = right_sum - left_sum;
            if slack < margin {
                margin = slack;
                if slack < -tol * slope_scale {
                    witness = Some(Witness::Component { i: i + 1, q });
                }
            }
        }
    }
    if tested == 0 {
        margin = 0.0;
    }
    let detail = match witness {
        Some(Witness::Component { i, q }) => format!("slope sum of P_1..P_{i} drops at q = {q}"),
        _ => format!("{tested} gap conditions checked"),
    };
    CheckEntry::new("proper_direct", outcome(witness.is_none()), tol, margin).with_witness(witness).with_detail(detail)
}

/// `v_r ≥ u_r` for every `r` (up to `tol·max(1, |u_r|, |v_r|)`).
pub fn check_proper_vu(g: &RegularGraph, tol: f64) -> CheckEntry {
    let (r, gap) = g
        .u()
        .iter()
        .zip(g.v())
        .map(|(u, v)| v - u)
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("k >= 1");
    let scale = g.u()[r].abs().max(g.v()[r].abs()).max(1.0);
    let ok = gap >= -tol * scale;
    let mut entry = CheckEntry::new("proper_vu", outcome(ok), tol, gap).with_witness((!ok).then_some(Witness::Index { r }));
    entry.observed = Some(gap);
    entry.threshold = Some(0.0);
    entry.detail = format!("min over r of v_r - u_r = {gap:.6} at r = {r}");
    entry
}

/// Outcome of the ratio criterion `(ψ_r^n + 1)/(ψ_r^l + ψ_r^m) ≥ Ω/ω` together
/// with the per-index inequality it is derived from, which is `V_r − U_r ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SufficientConditions {
    pub ratio: CheckEntry,
    pub per_index: CheckEntry,
    pub ratios: Vec<f64>,
    /// `Ω/ω`, absent when `ω ≤ 0`.
    pub threshold: Option<f64>,
    pub slacks: Vec<f64>,
}

pub fn check_proper_sufficient(w: &Weights, rho: &RhoSchedule) -> SufficientConditions {
    let (l, m, n, k) = (w.l(), w.m(), w.n(), w.k() as i64);
    let ratios: Vec<f64> = (0..k).map(|r| (rho.psi(r, n) + 1.0) / (rho.psi(r, l) + rho.psi(r, m))).collect();
    let slacks: Vec<f64> = (0..k).map(|r| compute_v(w, rho, r) - compute_u(w, rho, r)).collect();
    let argmin = |xs: &[f64]| xs.iter().copied().enumerate().min_by(|a, b| a.1.total_cmp(&b.1)).expect("k >= 1");

    let omega = w.min_pair_sum();
    let (ratio, threshold) = if omega > 0.0 {
        let threshold = w.max_pair_sum() / omega;
        let (r, lowest) = argmin(&ratios);
        let ok = lowest >= threshold;
        let mut e = CheckEntry::new(
            "sufficient_ratio",
            if ok { Outcome::Pass } else { Outcome::NotSufficient },
            0.0,
            lowest - threshold,
        )
        .with_witness((!ok).then_some(Witness::Index { r }))
        .with_detail(format!("min ratio {lowest:.6} vs Omega/omega {threshold:.6}"));
        e.observed = Some(lowest);
        e.threshold = Some(threshold);
        (e, Some(threshold))
    } else {
        let e = CheckEntry::new("sufficient_ratio", Outcome::NotApplicable, 0.0, 0.0)
            .with_detail(format!("omega = {omega} is not positive"));
        (e, None)
    };

    let (r, lowest) = argmin(&slacks);
    // the slack is a difference of terms of size ~ψ^n; judge its sign on that scale
    let scale = (0..k).map(|r| rho.psi(r, n)).fold(1.0, f64::max) * w.max_pair_sum().max(1.0);
    let tol = 1e-12 * scale;
    let ok = lowest >= -tol;
    let mut per_index = CheckEntry::new(
        "sufficient_per_index",
        if ok { Outcome::Pass } else { Outcome::NotSufficient },
        tol,
        lowest,
    )
    .with_witness((!ok).then_some(Witness::Index { r }))
    .with_detail(format!("min over r of V_r - U_r = {lowest:.6}"));
    per_index.observed = Some(lowest);
    per_index.threshold = Some(0.0);

    SufficientConditions { ratio, per_index, ratios, threshold, slacks }
}

/// For `m = 1`, `β_1 = l`: `ρ_r ≥ (α_r + l)/(α_{r+1} + l)` for `r = 1..l`.
pub fn check_m1_condition(w: &Weights, rho: &RhoSchedule) -> CheckEntry {
    let l = w.l() as f64;
    if w.m() != 1 || (w.beta()[0] - l).abs() > crate::weights::BALANCE_TOLERANCE {
        return CheckEntry::new("m1_condition", Outcome::NotApplicable, 0.0, 0.0)
            .with_detail("requires m = 1 and beta_1 = l");
    }
    let (r, slack) = (1..=w.l() as i64)
        .map(|r| {
            let bound = (w.alpha_cyclic(r) + l) / (w.alpha_cyclic(r + 1) + l);
            (r as usize, rho.rho_at(r) - bound)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("l >= 1");
    let ok = slack >= 0.0;
    CheckEntry::new("m1_condition", if ok { Outcome::Pass } else { Outcome::NotSufficient }, 0.0, slack)
        .with_witness((!ok).then_some(Witness::Index { r }))
        .with_detail(format!("min over r of rho_r - bound_r = {slack:.6} at r = {r}"))
}

/// Runs every check on `g` over periods `t_lo..=max(t_hi, t_lo + 1)`.
pub fn run_suite(g: &RegularGraph, t_lo: i64, t_hi: i64, tol: f64) -> crate::Result<CheckReport> {
    let sys = g.component_functions(t_lo, t_hi.max(t_lo + 1))?;
    let (w, rho) = (g.weights(), g.rho());
    let sufficient = check_proper_sufficient(w, rho);
    let entries = vec![
        check_node_relations(g, tol),
        check_cycle_products(g, 1e-12),
        check_nu_graph(&sys, &w.nu_vector(), tol),
        check_regular(g, &sys, tol),
        check_proper_direct(&sys, tol),
        check_proper_vu(g, tol),
        sufficient.ratio,
        sufficient.per_index,
        check_m1_condition(w, rho),
    ];
    Ok(CheckReport { entries, seed: None })
}

/// `χ_r χ_{r+n} ⋯` over one cycle of `r ↦ r + n` equals `τ^{n'}`.
pub fn check_cycle_products(g: &RegularGraph, tol: f64) -> CheckEntry {
    let (w, rho) = (g.weights(), g.rho());
    let expected = rho.tau().powi(w.n_prime() as i32);
    let (r, worst) = (0..w.k())
        .map(|r| {
            let p = crate::construct::chi_cycle_product(w, rho, r as i64, w.k_prime());
            (r, ((p - expected) / expected).abs())
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("k >= 1");
    let ok = worst <= tol;
    CheckEntry::new("cycle_products", outcome(ok), tol, worst).with_witness((!ok).then_some(Witness::Index { r }))
}

/// Outcome of the randomized implication test
/// ratio criterion ⟹ `v ≥ u` ⟹ direct properness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub trials: usize,
    pub counterexamples: Vec<String>,
}

/// Draws `trials` instances with `ω > 0`, enlarges `ρ` until the ratio
/// criterion holds, and checks that both properness tests pass.
pub fn sufficiency_sweep(seed: u64, trials: usize, tol: f64) -> SweepReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();
    for trial in 0..trials {
        let (w, rho) = random::instance_with_ratio_criterion(&mut rng, 4, 4);
        let g = RegularGraph::build(w, rho).expect("valid random instance");
        let vu = check_proper_vu(&g, tol);
        let direct = g.component_functions(0, 1).map(|sys| check_proper_direct(&sys, tol));
        let direct_ok = direct.as_ref().is_ok_and(|e| e.passed());
        if !vu.passed() || !direct_ok {
            counterexamples.push(format!(
                "trial {trial}: alpha {:?} beta {:?} rho {:?}: proper_vu {:?}, proper_direct {:?}",
                g.weights().alpha(),
                g.weights().beta(),
                g.rho().values(),
                vu.outcome,
                direct.map(|e| e.outcome)
            ));
        }
    }
    SweepReport { seed, trials, counterexamples }
}
