//! CSV export of the component functions.
//!
//! Header `q,P_1,…,P_n`, one row per breakpoint plus interior samples, values
//! rounded to 12 significant digits, `,` separators and LF line endings.

use std::io::{self, Write};

use crate::graph::PiecewiseLinearSystem;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Shortest decimal that round-trips the value rounded to 12 significant digits.
pub fn format_value(x: f64) -> String {
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        rounded.to_string()
    }
}

pub fn write_csv<W: Write>(sys: &PiecewiseLinearSystem, samples_per_piece: usize, mut out: W) -> io::Result<usize> {
    let header: Vec<String> = std::iter::once("q".to_string()).chain((1..=sys.n()).map(|i| format!("P_{i}"))).collect();
    out.write_all(header.join(",").as_bytes())?;
    out.write_all(b"\n")?;
    let mut last_q: Option<String> = None;
    let mut rows = 0;
    for (q, values) in sys.sample_points(samples_per_piece) {
        let q_text = format_value(q);
        // pieces shorter than the rounding step would repeat an abscissa
        if last_q.as_deref() == Some(q_text.as_str()) {
            continue;
        }
        let line: Vec<String> = std::iter::once(q_text.clone()).chain(values.iter().map(|&v| format_value(v))).collect();
        out.write_all(line.join(",").as_bytes())?;
        out.write_all(b"\n")?;
        last_q = Some(q_text);
        rows += 1;
    }
    Ok(rows)
}

pub fn to_csv_string(sys: &PiecewiseLinearSystem, samples_per_piece: usize) -> String {
    let mut buf = Vec::new();
    write_csv(sys, samples_per_piece, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Parses a file written by [`write_csv`] into `(q, values)` rows.
pub fn parse_csv(text: &str) -> Result<Vec<(f64, Vec<f64>)>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    let columns = header.split(',').count();
    lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.parse::<f64>().map_err(|e| format!("row {}: {e}", i + 1)))
                .collect::<Result<_, _>>()?;
            if fields.len() != columns {
                return Err(format!("row {}: expected {columns} fields, got {}", i + 1, fields.len()));
            }
            Ok((fields[0], fields[1..].to_vec()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{RegularGraph, RhoSchedule};
    use crate::weights::Weights;
    use proptest::prelude::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(format_value(2f64.cbrt()), "1.25992104989");
        assert_eq!(format_value(4.0), "4");
        assert_eq!(format_value(-0.0), "0");
        assert_eq!(format_value(-1.0 / 3.0), "-0.333333333333");
    }

    #[test]
    fn three_by_two_round_trip() {
        let g = RegularGraph::build(
            Weights::new(vec![0.5, 1.0, 1.5], vec![2.0, 1.0]).unwrap(),
            RhoSchedule::uniform_power(6, 2.0, 1, 3).unwrap(),
        )
        .unwrap();
        let sys = g.component_functions(0, 0).unwrap();
        let text = to_csv_string(&sys, 3);
        assert!(text.starts_with("q,P_1,P_2,P_3,P_4,P_5\n"));
        assert!(!text.contains('\r'));
        let rows = parse_csv(&text).unwrap();
        assert_eq!(rows.len(), sys.pieces.len() * 4 + 1);
        assert!(rows.windows(2).all(|w| w[0].0 < w[1].0));
        for (q, values) in &rows {
            assert!(values.iter().sum::<f64>().abs() < 1e-9, "{q}");
        }
    }

    proptest! {
        #[test]
        fn formatted_values_keep_twelve_digits(x in -1e6f64..1e6) {
            let back: f64 = format_value(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 5e-12 * x.abs());
        }
    }
}
