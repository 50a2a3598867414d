//! Self-contained SVG rendering of a window of the graph.
//!
//! Linear axes; one `<g class="period">` per period index so the
//! self-similarity is visible; `a`-nodes and `b`-nodes marked; a tick at
//! every grid node `τ^t σ_j`; the rays of slopes `u_0` and `v_0` dashed.

use std::fmt::Write;

use crate::construct::RegularGraph;
use crate::graph::{Segment, SegmentKind};
use crate::Result;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;

const STYLE: &str = "\
.axis{stroke:#000;stroke-width:1}\
.tick{stroke:#000;stroke-width:1}\
.tick-label{font:11px sans-serif;text-anchor:middle}\
.segment{stroke-width:1.6;fill:none}\
.seg-a{stroke:#1f4e9c}\
.seg-b{stroke:#b8322a}\
.ray{stroke:#777;stroke-width:0.8;stroke-dasharray:5 4}\
.ray-label{font:12px sans-serif;fill:#555}\
.node-a{fill:#1f4e9c}\
.node-b{fill:#b8322a}\
.period-boundary{stroke:#ccc;stroke-width:0.8}";

struct Frame {
    q: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn x(&self, q: f64) -> f64 {
        MARGIN + (q - self.q.0) / (self.q.1 - self.q.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn short(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Renders periods `t_lo..=t_hi`, i.e. abscissae `[τ^{t_lo}, τ^{t_hi+1}]`.
pub fn render(g: &RegularGraph, t_lo: i64, t_hi: i64) -> Result<String> {
    let segments = g.segments_in_window(t_lo, t_hi)?;
    let grid = g.grid_breakpoints(t_lo, t_hi)?;
    let q_range = (grid[0], *grid.last().expect("non-empty grid"));
    let ray_slopes = [g.u()[0], g.v()[0]];
    let ys = segments
        .iter()
        .flat_map(|s| [s.start.y, s.end.y])
        .chain(ray_slopes.iter().flat_map(|s| [s * q_range.0, s * q_range.1]))
        .chain([0.0]);
    let (lo, hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
    let pad = 0.05 * (hi - lo).max(1e-12);
    let frame = Frame { q: q_range, y: (lo - pad, hi + pad) };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(out, "<style>{STYLE}</style>").unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    let y0 = frame.y(0.0);
    writeln!(
        out,
        r#"<line class="axis" x1="{:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}"/>"#,
        frame.x(q_range.0),
        frame.x(q_range.1)
    )
    .unwrap();
    writeln!(
        out,
        r#"<line class="axis" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
        frame.y(frame.y.0),
        frame.y(frame.y.1),
        x = frame.x(q_range.0)
    )
    .unwrap();
    for &q in &grid {
        let x = frame.x(q);
        writeln!(out, r#"<line class="tick" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#, y0 - 4.0, y0 + 4.0)
            .unwrap();
        writeln!(out, r#"<text class="tick-label" x="{x:.2}" y="{:.2}">{}</text>"#, y0 + 18.0, short(q)).unwrap();
    }
    for t in t_lo..=t_hi + 1 {
        let x = frame.x(g.rho().sigma_at(t * g.weights().k() as i64));
        writeln!(
            out,
            r#"<line class="period-boundary" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
            frame.y(frame.y.0),
            frame.y(frame.y.1)
        )
        .unwrap();
    }
    for (name, slope) in [("u_0", ray_slopes[0]), ("v_0", ray_slopes[1])] {
        let (qa, qb) = q_range;
        writeln!(
            out,
            r#"<line class="ray" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            frame.x(qa),
            frame.y(slope * qa),
            frame.x(qb),
            frame.y(slope * qb)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text class="ray-label" x="{:.2}" y="{:.2}">slope {name}</text>"#,
            frame.x(qb) - 70.0,
            frame.y(slope * qb) - 6.0
        )
        .unwrap();
    }

    let mut periods: Vec<i64> = segments.iter().map(|s| s.id.t).collect();
    periods.sort_unstable();
    periods.dedup();
    for t in periods {
        writeln!(out, r#"<g class="period" data-t="{t}">"#).unwrap();
        for s in segments.iter().filter(|s| s.id.t == t) {
            write_segment(&mut out, &frame, s);
        }
        out.push_str("</g>\n");
    }

    let k = g.weights().k() as i64;
    for index in t_lo * k..=(t_hi + 1) * k {
        for (class, p) in [("node-a", g.node_a(index)), ("node-b", g.node_b(index))] {
            writeln!(out, r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="3"/>"#, frame.x(p.q), frame.y(p.y))
                .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn write_segment(out: &mut String, frame: &Frame, s: &Segment) {
    let (kind, class) = match s.id.kind {
        SegmentKind::A => ("A", "seg-a"),
        SegmentKind::B => ("B", "seg-b"),
    };
    writeln!(
        out,
        r#"<line class="segment {class}" data-id="{kind}_{}^{}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        s.id.r,
        s.id.t,
        frame.x(s.start.q),
        frame.y(s.start.y),
        frame.x(s.end.q),
        frame.y(s.end.y)
    )
    .unwrap();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::RhoSchedule;
    use crate::weights::Weights;

    #[test]
    fn three_by_two_counts() {
        let g = RegularGraph::build(
            Weights::new(vec![0.5, 1.0, 1.5], vec![2.0, 1.0]).unwrap(),
            RhoSchedule::uniform_power(6, 2.0, 1, 3).unwrap(),
        )
        .unwrap();
        let svg = render(&g, 0, 0).unwrap();
        assert_eq!(svg.matches(r#"class="segment "#).count(), g.segments_in_window(0, 0).unwrap().len());
        assert_eq!(svg.matches(r#"class="tick""#).count(), 7);
        assert_eq!(svg.matches(r#"<g class="period""#).count(), 2);
        assert_eq!(svg.matches("node-a\" cx").count(), 7);
        assert!(svg.contains(">1.2599<"));
        assert!(!svg.contains("href"));
    }
}
