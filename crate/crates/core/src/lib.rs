//! Regular ν-graphs for weighted parametric geometry of numbers.
//!
//! Given balanced weights `α_1..α_l`, `β_1..β_m` and a schedule of `k = lcm(l, m)`
//! expansion factors `ρ_r > 1`, this crate builds the self-similar piecewise-linear
//! graph whose `n = l + m` component functions `P_1 ≤ … ≤ P_n` have slopes drawn
//! from `ν = (α_1, …, α_l, −β_1, …, −β_m)` and which is invariant under
//! `(q, y) ↦ (τq, τy)` with `τ = ρ_1⋯ρ_k`.
//!
//! The modules follow the pipeline:
//!
//! * [`weights`]: validated weight data and cyclic index arithmetic.
//! * [`construct`]: the expansion schedule and the unique node slopes `u`, `v`.
//! * [`graph`]: segments, pointwise evaluation, extraction of the `P_i`.
//! * [`analyze`]: checks for ν-graph validity, regularity and properness.
//! * [`config`], [`export`], [`svg`]: instance files, CSV export and SVG plots
//!   used by the `nugraph` command line tool.
//!
//! ```
//! use nugraph::{RegularGraph, RhoSchedule, Weights};
//!
//! let weights = Weights::new(vec![1.0], vec![1.0]).unwrap();
//! let rho = RhoSchedule::from_values(&[3.0]).unwrap();
//! let graph = RegularGraph::build(weights, rho).unwrap();
//! assert!((graph.u()[0] + 0.5).abs() < 1e-12);
//! assert!((graph.v()[0] - 0.5).abs() < 1e-12);
//! ```

pub mod analyze;
pub mod config;
pub mod construct;
mod error;
pub mod export;
pub mod graph;
pub mod svg;
pub mod weights;

pub use analyze::{CheckEntry, CheckReport, Outcome};
pub use construct::{PowerForm, Rho, RhoSchedule, RegularGraph, SubgraphComponent};
pub use error::Error;
pub use graph::{PiecewiseLinearSystem, Point, Segment, SegmentId, SegmentKind};
pub use weights::{NuVector, SlopeLabel, Weights};

pub type Result<T, E = Error> = std::result::Result<T, E>;
