//! Segments of the regular graph and its component functions `P_1 ≤ … ≤ P_n`.
//!
//! Nodes and segments are addressed by a global index `R = t·k + r`, so that
//! `σ_R = τ^t σ_r`, `a_R = a_r^t` and `A_R = A_r^t`. The grid subinterval
//! `[σ_J, σ_{J+1}]` is crossed by `A_R` for `J − l < R ≤ J` and by `B_R` for
//! `J − m < R ≤ J`: exactly `l + m` lines, one per component of `ν`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::construct::RegularGraph;
use crate::weights::SlopeLabel;
use crate::{Error, Result};

/// Relative tolerance used to snap abscissae onto grid nodes and to discard
/// crossings that sit on a subinterval boundary.
pub const ABSCISSA_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SegmentKind {
    A,
    B,
}

/// `(kind, r, t)` names `A_r^t` or `B_r^t`; the derived order is the stable
/// tie-break between coincident components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SegmentId {
    pub kind: SegmentKind,
    pub r: usize,
    pub t: i64,
}

impl SegmentId {
    fn from_global(kind: SegmentKind, index: i64, k: usize) -> Self {
        let k = k as i64;
        SegmentId { kind, r: index.rem_euclid(k) as usize, t: index.div_euclid(k) }
    }

    pub fn global_index(&self, k: usize) -> i64 {
        self.t * k as i64 + self.r as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub q: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub id: SegmentId,
    pub start: Point,
    pub end: Point,
    pub label: SlopeLabel,
    /// Value of `label`: `α_{r+1}` for `A`, `−β_{r+1}` for `B`.
    pub slope: f64,
    /// True when the segment was cut at a window boundary.
    pub clipped: bool,
}

impl Segment {
    pub fn geometric_slope(&self) -> f64 {
        (self.end.y - self.start.y) / (self.end.q - self.start.q)
    }
}

#[derive(Debug, Clone, Copy)]
struct Line {
    id: SegmentId,
    label: SlopeLabel,
    slope: f64,
    anchor: Point,
}

impl Line {
    fn at(&self, q: f64) -> f64 {
        self.anchor.y + self.slope * (q - self.anchor.q)
    }
}

/// One linear piece of the component functions: `components[i]` is `P_{i+1}`
/// on `[q_lo, q_hi]`, with its value at `q_lo`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Piece {
    pub q_lo: f64,
    pub q_hi: f64,
    /// Period index: the piece lies in `[τ^t, τ^{t+1}]`.
    pub t: i64,
    /// Grid subinterval `[τ^t σ_j, τ^t σ_{j+1}]` containing the piece.
    pub subinterval: usize,
    pub components: Vec<ComponentPiece>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentPiece {
    pub value: f64,
    pub slope: f64,
    pub label: SlopeLabel,
    pub segment: SegmentId,
}

impl Piece {
    pub fn values_at(&self, q: f64) -> Vec<f64> {
        self.components.iter().map(|c| c.value + c.slope * (q - self.q_lo)).collect()
    }

    pub fn start_values(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.value).collect()
    }

    pub fn end_values(&self) -> Vec<f64> {
        self.values_at(self.q_hi)
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.slope).collect()
    }
}

/// The component functions over the periods `t_lo..=t_hi`, i.e. over
/// `[τ^{t_lo}, τ^{t_hi+1}]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinearSystem {
    pub tau: f64,
    pub t_lo: i64,
    pub t_hi: i64,
    /// `pieces.len() + 1` increasing abscissae: grid nodes and crossings.
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Piece>,
}

impl PiecewiseLinearSystem {
    pub fn n(&self) -> usize {
        self.pieces.first().map_or(0, |p| p.components.len())
    }

    pub fn window(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn periods(&self) -> usize {
        (self.t_hi - self.t_lo + 1) as usize
    }

    /// Pieces of period `t`, in order.
    pub fn period_pieces(&self, t: i64) -> &[Piece] {
        let start = self.pieces.partition_point(|p| p.t < t);
        let end = self.pieces.partition_point(|p| p.t <= t);
        &self.pieces[start..end]
    }

    /// `P_1(q), …, P_n(q)`; at a breakpoint the piece to the right is used.
    pub fn values_at(&self, q: f64) -> Option<Vec<f64>> {
        let (lo, hi) = self.window();
        if q < lo || q > hi {
            return None;
        }
        let idx = self.pieces.partition_point(|p| p.q_hi <= q).min(self.pieces.len() - 1);
        Some(self.pieces[idx].values_at(q))
    }

    /// Every breakpoint followed by `samples_per_piece` equally spaced interior
    /// points of the piece that starts there; the window end closes the list.
    pub fn sample_points(&self, samples_per_piece: usize) -> Vec<(f64, Vec<f64>)> {
        let mut rows = Vec::with_capacity(self.pieces.len() * (samples_per_piece + 1) + 1);
        for piece in &self.pieces {
            rows.push((piece.q_lo, piece.start_values()));
            for s in 1..=samples_per_piece {
                let q = piece.q_lo + (piece.q_hi - piece.q_lo) * s as f64 / (samples_per_piece + 1) as f64;
                rows.push((q, piece.values_at(q)));
            }
        }
        if let Some(last) = self.pieces.last() {
            rows.push((last.q_hi, last.end_values()));
        }
        rows
    }
}

impl RegularGraph {
    fn k_i64(&self) -> i64 {
        self.weights().k() as i64
    }

    /// `a_R = σ_R (1, u_R)`.
    pub fn node_a(&self, index: i64) -> Point {
        let s = self.rho().sigma_at(index);
        Point { q: s, y: s * self.u_cyclic(index) }
    }

    /// `b_R = σ_R (1, v_R)`.
    pub fn node_b(&self, index: i64) -> Point {
        let s = self.rho().sigma_at(index);
        Point { q: s, y: s * self.v_cyclic(index) }
    }

    fn line(&self, kind: SegmentKind, index: i64) -> Line {
        let w = self.weights();
        let id = SegmentId::from_global(kind, index, w.k());
        match kind {
            SegmentKind::A => Line {
                id,
                label: SlopeLabel::Alpha(w.alpha_index(index + 1)),
                slope: w.alpha_cyclic(index + 1),
                anchor: self.node_a(index),
            },
            SegmentKind::B => Line {
                id,
                label: SlopeLabel::Beta(w.beta_index(index + 1)),
                slope: -w.beta_cyclic(index + 1),
                anchor: self.node_b(index),
            },
        }
    }

    fn span(&self, kind: SegmentKind) -> i64 {
        match kind {
            SegmentKind::A => self.weights().l() as i64,
            SegmentKind::B => self.weights().m() as i64,
        }
    }

    /// The full segment `A_R = [a_R, b_{R+l}]` or `B_R = [b_R, a_{R+m}]`.
    pub fn segment(&self, kind: SegmentKind, index: i64) -> Segment {
        let line = self.line(kind, index);
        let end_index = index + self.span(kind);
        let end = match kind {
            SegmentKind::A => self.node_b(end_index),
            SegmentKind::B => self.node_a(end_index),
        };
        Segment { id: line.id, start: line.anchor, end, label: line.label, slope: line.slope, clipped: false }
    }

    /// Lines crossing grid subinterval `J`, optionally restricted to the
    /// residue class `f` modulo `d`.
    fn active_lines(&self, subinterval: i64, class: Option<usize>) -> Vec<Line> {
        let d = self.weights().d() as i64;
        [SegmentKind::A, SegmentKind::B]
            .into_iter()
            .flat_map(|kind| {
                let span = self.span(kind);
                (subinterval - span + 1..=subinterval).map(move |index| (kind, index))
            })
            .filter(|&(_, index)| class.is_none_or(|f| index.rem_euclid(d) == f as i64))
            .map(|(kind, index)| self.line(kind, index))
            .collect()
    }

    /// Every `A_r^t`, `B_r^t` meeting `[τ^{t_lo}, τ^{t_hi+1}]`, clipped to it.
    /// Segments of period `t_lo − 1` protruding into the window are included.
    pub fn segments_in_window(&self, t_lo: i64, t_hi: i64) -> Result<Vec<Segment>> {
        check_window(t_lo, t_hi)?;
        let k = self.k_i64();
        let (first, last) = (t_lo * k, (t_hi + 1) * k);
        let mut out = Vec::new();
        for kind in [SegmentKind::A, SegmentKind::B] {
            let span = self.span(kind);
            for index in first - span + 1..last {
                let mut seg = self.segment(kind, index);
                let line = self.line(kind, index);
                if index < first {
                    let q = self.rho().sigma_at(first);
                    seg.start = Point { q, y: line.at(q) };
                    seg.clipped = true;
                }
                if index + span > last {
                    let q = self.rho().sigma_at(last);
                    seg.end = Point { q, y: line.at(q) };
                    seg.clipped = true;
                }
                out.push(seg);
            }
        }
        Ok(out)
    }

    /// Grid nodes `τ^t σ_j` of the window, including both ends.
    pub fn grid_breakpoints(&self, t_lo: i64, t_hi: i64) -> Result<Vec<f64>> {
        check_window(t_lo, t_hi)?;
        let k = self.k_i64();
        Ok((t_lo * k..=(t_hi + 1) * k).map(|j| self.rho().sigma_at(j)).collect())
    }

    /// Global index `J` of the grid subinterval `[σ_J, σ_{J+1})` holding `q > 0`.
    fn locate(&self, q: f64) -> i64 {
        let rho = self.rho();
        let k = self.k_i64();
        let near = |a: f64, b: f64| ((a - b) / b).abs() <= ABSCISSA_TOLERANCE;
        let mut t = (q.ln() / self.tau().ln()).floor() as i64;
        while q < rho.sigma_at(t * k) && !near(q, rho.sigma_at(t * k)) {
            t -= 1;
        }
        while q >= rho.sigma_at((t + 1) * k) || near(q, rho.sigma_at((t + 1) * k)) {
            t += 1;
        }
        let mut j = t * k;
        while j + 1 < (t + 1) * k && (q >= rho.sigma_at(j + 1) || near(q, rho.sigma_at(j + 1))) {
            j += 1;
        }
        j
    }

    fn evaluate_lines(&self, q: f64, class: Option<usize>) -> Result<Vec<f64>> {
        if q < 0.0 || q.is_nan() {
            return Err(Error::NegativeAbscissa(q));
        }
        let count = match class {
            None => self.weights().n(),
            Some(_) => self.weights().n_prime(),
        };
        if q == 0.0 {
            return Ok(vec![0.0; count]);
        }
        let mut values: Vec<f64> = self.active_lines(self.locate(q), class).iter().map(|l| l.at(q)).collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// The `n` ordinates of the graph above `q ≥ 0`, ascending.
    pub fn evaluate(&self, q: f64) -> Result<Vec<f64>> {
        self.evaluate_lines(q, None)
    }

    /// The `n'` ordinates of the subgraph `G^f` above `q ≥ 0`, ascending.
    pub fn evaluate_subgraph(&self, f: usize, q: f64) -> Result<Vec<f64>> {
        self.evaluate_lines(q, Some(f % self.weights().d()))
    }

    /// Extracts `P_1 ≤ … ≤ P_n` over the periods `t_lo..=t_hi`.
    ///
    /// Each grid subinterval is cut at every interior crossing of two of its
    /// lines; on each resulting piece the lines are ranked by their value at the
    /// piece midpoint, then by slope, then by segment identity.
    pub fn component_functions(&self, t_lo: i64, t_hi: i64) -> Result<PiecewiseLinearSystem> {
        check_window(t_lo, t_hi)?;
        let k = self.k_i64();
        let mut breakpoints = Vec::new();
        let mut pieces = Vec::new();
        for subinterval in t_lo * k..(t_hi + 1) * k {
            let q0 = self.rho().sigma_at(subinterval);
            let q1 = self.rho().sigma_at(subinterval + 1);
            let lines = self.active_lines(subinterval, None);
            let mut cuts = vec![q0];
            cuts.extend(interior_crossings(&lines, q0, q1));
            cuts.push(q1);
            for pair in cuts.windows(2) {
                let (lo, hi) = (pair[0], pair[1]);
                let mid = 0.5 * (lo + hi);
                let mut ranked = lines.clone();
                ranked.sort_by(|a, b| {
                    a.at(mid)
                        .total_cmp(&b.at(mid))
                        .then(a.slope.total_cmp(&b.slope))
                        .then(a.id.cmp(&b.id))
                });
                breakpoints.push(lo);
                pieces.push(Piece {
                    q_lo: lo,
                    q_hi: hi,
                    t: subinterval.div_euclid(k),
                    subinterval: subinterval.rem_euclid(k) as usize,
                    components: ranked
                        .iter()
                        .map(|l| ComponentPiece { value: l.at(lo), slope: l.slope, label: l.label, segment: l.id })
                        .collect(),
                });
            }
        }
        breakpoints.push(self.rho().sigma_at((t_hi + 1) * k));
        Ok(PiecewiseLinearSystem { tau: self.tau(), t_lo, t_hi, breakpoints, pieces })
    }
}

fn check_window(t_lo: i64, t_hi: i64) -> Result<()> {
    if t_lo > t_hi {
        return Err(Error::EmptyWindow { t_min: t_lo, t_max: t_hi });
    }
    Ok(())
}

/// Abscissae strictly inside `(q0, q1)` where two lines meet, ascending and
/// merged within [`ABSCISSA_TOLERANCE`].
fn interior_crossings(lines: &[Line], q0: f64, q1: f64) -> Vec<f64> {
    let mut crossings = Vec::new();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            let ds = a.slope - b.slope;
            if ds == 0.0 {
                continue;
            }
            let q = q0 - (a.at(q0) - b.at(q0)) / ds;
            if q > q0 * (1.0 + ABSCISSA_TOLERANCE) && q < q1 * (1.0 - ABSCISSA_TOLERANCE) {
                crossings.push(q);
            }
        }
    }
    crossings.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    crossings.dedup_by(|next, prev| (*next - *prev) <= ABSCISSA_TOLERANCE * *prev);
    crossings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::RhoSchedule;
    use crate::weights::Weights;

    fn three_by_two() -> RegularGraph {
        RegularGraph::build(
            Weights::new(vec![0.5, 1.0, 1.5], vec![2.0, 1.0]).unwrap(),
            RhoSchedule::uniform_power(6, 2.0, 1, 3).unwrap(),
        )
        .unwrap()
    }

    fn classical() -> RegularGraph {
        RegularGraph::build(Weights::new(vec![1.0], vec![1.0]).unwrap(), RhoSchedule::from_values(&[3.0]).unwrap())
            .unwrap()
    }

    #[test]
    fn three_by_two_window_segments() {
        let g = three_by_two();
        let segs = g.segments_in_window(0, 0).unwrap();
        let current = segs.iter().filter(|s| s.id.t == 0).count();
        let protruding: Vec<_> = segs.iter().filter(|s| s.id.t == -1).collect();
        assert_eq!(current, 12);
        assert_eq!(protruding.len(), 3);
        assert_eq!(protruding.iter().filter(|s| s.id.kind == SegmentKind::A).count(), 2);
        assert!(protruding.iter().all(|s| s.clipped && s.start.q == 1.0));
        for s in &segs {
            assert!((s.geometric_slope() - s.slope).abs() < 1e-9, "{s:?}");
            assert!(s.start.q >= 1.0 && s.end.q <= 4.0);
        }
    }

    #[test]
    fn segments_are_joined_at_nodes() {
        let g = three_by_two();
        let (l, m) = (3, 2);
        for index in -6..12 {
            let a = g.segment(SegmentKind::A, index);
            let b = g.segment(SegmentKind::B, index + l);
            assert!((a.end.q - b.start.q).abs() < 1e-9 && (a.end.y - b.start.y).abs() < 1e-9);
            let b = g.segment(SegmentKind::B, index);
            let a = g.segment(SegmentKind::A, index + m);
            assert!((b.end.q - a.start.q).abs() < 1e-9 && (b.end.y - a.start.y).abs() < 1e-9);
        }
    }

    #[test]
    fn coverage_per_subinterval() {
        let g = three_by_two();
        let segs = g.segments_in_window(0, 1).unwrap();
        let grid = g.grid_breakpoints(0, 1).unwrap();
        for pair in grid.windows(2) {
            let mid = 0.5 * (pair[0] + pair[1]);
            let over = |kind| segs.iter().filter(|s| s.id.kind == kind && s.start.q < mid && s.end.q > mid).count();
            assert_eq!(over(SegmentKind::A), 3);
            assert_eq!(over(SegmentKind::B), 2);
        }
    }

    #[test]
    fn window_scaling() {
        let g = three_by_two();
        let base = g.segments_in_window(0, 0).unwrap();
        let next = g.segments_in_window(1, 1).unwrap();
        assert_eq!(base.len(), next.len());
        for (a, b) in base.iter().zip(&next) {
            assert_eq!((a.id.kind, a.id.r, a.id.t + 1), (b.id.kind, b.id.r, b.id.t));
            assert!((4.0 * a.start.q - b.start.q).abs() < 1e-12 && (4.0 * a.end.y - b.end.y).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluate_origin_and_negative() {
        let g = three_by_two();
        assert_eq!(g.evaluate(0.0).unwrap(), vec![0.0; 5]);
        assert_eq!(g.evaluate(-1.0), Err(Error::NegativeAbscissa(-1.0)));
    }

    #[test]
    fn evaluate_at_one_contains_nodes() {
        let g = three_by_two();
        let values = g.evaluate(1.0).unwrap();
        let contains = |y: f64| values.iter().any(|v| (v - y).abs() < 1e-12);
        assert!(contains(g.u()[0]) && contains(g.v()[0]));
        assert!(values.iter().sum::<f64>().abs() < 1e-9);
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn evaluate_scales_with_tau() {
        let g = three_by_two();
        for q in [0.3, 1.0, 1.7, 2.0, 3.99, 4.0, 11.0] {
            let a = g.evaluate(q).unwrap();
            let b = g.evaluate(4.0 * q).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((4.0 * x - y).abs() <= 1e-9 * y.abs().max(1.0));
            }
        }
    }

    #[test]
    fn evaluate_is_continuous_across_nodes() {
        let g = three_by_two();
        for j in 0..7 {
            let q = g.rho().sigma_at(j);
            let left = g.evaluate(q * (1.0 - 1e-10)).unwrap();
            let right = g.evaluate(q).unwrap();
            for (a, b) in left.iter().zip(&right) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn three_by_two_grid() {
        let g = three_by_two();
        let grid = g.grid_breakpoints(0, 0).unwrap();
        let c = 2f64.cbrt();
        let expected = [1.0, c, c * c, 2.0, 2.0 * c, 2.0 * c * c, 4.0];
        for (a, b) in grid.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        let sys = g.component_functions(0, 0).unwrap();
        for node in &grid {
            assert!(sys.breakpoints.iter().any(|b| (b - node).abs() < 1e-14));
        }
        assert!(sys.breakpoints.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn classical_components() {
        let g = classical();
        let sys = g.component_functions(0, 0).unwrap();
        // a_0 → b_1 (slope +1) and b_0 → a_1 (slope −1) meet at q = 3/2
        assert_eq!(sys.pieces.len(), 2);
        assert!((sys.breakpoints[1] - 1.5).abs() < 1e-12);
        for piece in &sys.pieces {
            let vals = piece.start_values();
            assert!((vals[0] + vals[1]).abs() < 1e-12);
        }
        assert_eq!(sys.pieces[0].slopes(), vec![1.0, -1.0]);
        assert_eq!(sys.pieces[1].slopes(), vec![-1.0, 1.0]);
    }

    #[test]
    fn period_slices() {
        let sys = three_by_two().component_functions(-1, 1).unwrap();
        let total: usize = (-1..=1).map(|t| sys.period_pieces(t).len()).sum();
        assert_eq!(total, sys.pieces.len());
        assert_eq!(sys.period_pieces(0).len(), sys.period_pieces(1).len());
        assert!(sys.period_pieces(5).is_empty());
    }

    #[test]
    fn empty_window_rejected() {
        assert!(matches!(three_by_two().component_functions(1, 0), Err(Error::EmptyWindow { .. })));
    }
}
