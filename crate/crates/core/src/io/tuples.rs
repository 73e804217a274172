//! Tuple export: CSV with header `i,j,d,theta,phi,tau,flags` and a JSON
//! array of tuple records. Angles are in radians.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{EdgeFlags, EdgeTuple};

pub const CSV_HEADER: &str = "i,j,d,theta,phi,tau,flags";

/// CSV text, 17 significant digits per float.
pub fn tuples_to_csv(tuples: &[EdgeTuple]) -> String {
    let mut out = String::with_capacity(32 + tuples.len() * 110);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for t in tuples {
        let _ = writeln!(
            out,
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            t.i, t.j, t.d, t.theta, t.phi, t.tau, t.flags
        );
    }
    out
}

/// Parses CSV written by [`tuples_to_csv`]. Reference nodes are not part of
/// the CSV and come back as `None`.
pub fn tuples_from_csv(text: &str) -> Result<Vec<EdgeTuple>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(Error::parse(
                1,
                format!("expected header `{CSV_HEADER}`, found `{}`", header.trim()),
            ))
        }
        None => return Err(Error::parse(1, "empty tuple file")),
    }
    let mut tuples = Vec::new();
    for (k, line) in lines {
        let line_no = k + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 7 {
            return Err(Error::parse(
                line_no,
                format!("expected 7 fields, found {}", fields.len()),
            ));
        }
        let index = |k: usize, name: &str| -> Result<usize> {
            fields[k]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid {name} `{}`", fields[k])))
        };
        let real = |k: usize, name: &str| -> Result<f64> {
            fields[k]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(line_no, format!("invalid {name} `{}`", fields[k])))
        };
        let flags: EdgeFlags = fields[6].parse().map_err(|e: String| Error::parse(line_no, e))?;
        tuples.push(EdgeTuple {
            i: index(0, "i")?,
            j: index(1, "j")?,
            d: real(2, "d")?,
            theta: real(3, "theta")?,
            phi: real(4, "phi")?,
            tau: real(5, "tau")?,
            flags,
            refs: Default::default(),
        });
    }
    Ok(tuples)
}

pub fn tuples_to_json(tuples: &[EdgeTuple]) -> Result<String> {
    Ok(serde_json::to_string_pretty(tuples)?)
}

pub fn tuples_from_json(text: &str) -> Result<Vec<EdgeTuple>> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::transform;
    use crate::graph::{build_radius_graph, Vec3};

    fn sample() -> Vec<EdgeTuple> {
        let positions = vec![
            Vec3::zeros(),
            Vec3::new(0.97, 0.01, 0.0),
            Vec3::new(-0.2, 0.93, 0.11),
            Vec3::new(0.3, -0.4, 1.2),
        ];
        transform(&build_radius_graph(vec![8, 1, 1, 6], positions, 2.0).unwrap())
            .unwrap()
            .tuples
    }

    #[test]
    fn csv_is_lossless_for_values() {
        let tuples = sample();
        let back = tuples_from_csv(&tuples_to_csv(&tuples)).unwrap();
        assert_eq!(back.len(), tuples.len());
        for (a, b) in tuples.iter().zip(&back) {
            assert_eq!(
                (a.i, a.j, a.d, a.theta, a.phi, a.tau, a.flags),
                (b.i, b.j, b.d, b.theta, b.phi, b.tau, b.flags)
            );
        }
    }

    #[test]
    fn json_is_lossless() {
        let tuples = sample();
        assert_eq!(tuples_from_json(&tuples_to_json(&tuples).unwrap()).unwrap(), tuples);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let text = format!("{CSV_HEADER}\n0,1,1.0,0,0,0,\n1,0,abc,0,0,0,\n");
        assert!(matches!(tuples_from_csv(&text), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(tuples_from_csv("a,b\n"), Err(Error::Parse { line: 1, .. })));
        let text = format!("{CSV_HEADER}\n0,1,1.0,0,0\n");
        assert!(matches!(tuples_from_csv(&text), Err(Error::Parse { line: 2, .. })));
    }
}
