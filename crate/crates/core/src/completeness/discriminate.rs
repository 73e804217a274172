//! Structure comparison through the tuple representation.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{angular_distance, transform, EdgeFlags, TupleSet};
use crate::graph::Graph3D;

pub const DISCRIMINATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Equivalent,
    Distinct,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "EQUIVALENT",
            Verdict::Distinct => "DISTINCT",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TupleField {
    D,
    Theta,
    Phi,
    Tau,
    Flags,
}

impl fmt::Display for TupleField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TupleField::D => "d",
            TupleField::Theta => "theta",
            TupleField::Phi => "phi",
            TupleField::Tau => "tau",
            TupleField::Flags => "flags",
        })
    }
}

/// The largest single-field difference found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviation {
    pub i: usize,
    pub j: usize,
    pub field: TupleField,
    /// Absolute difference; angles use the circular distance. A flag
    /// mismatch is reported as infinite.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub verdict: Verdict,
    pub max_deviation: f64,
    pub worst: Option<Deviation>,
}

/// Compares two tuple sets edge by edge in `(i, j)` order.
pub fn compare_tuples(a: &TupleSet, b: &TupleSet, use_tau: bool, tolerance: f64) -> Result<Comparison> {
    if a.len() != b.len() {
        return Err(Error::TopologyMismatch(format!("{} vs {} tuples", a.len(), b.len())));
    }
    let mut worst: Option<Deviation> = None;
    let mut note = |i, j, field, value: f64| {
        if worst.is_none_or(|w| value > w.value) {
            worst = Some(Deviation { i, j, field, value });
        }
    };
    for (s, t) in a.iter().zip(b.iter()) {
        if (s.i, s.j) != (t.i, t.j) {
            return Err(Error::TopologyMismatch(format!(
                "edge ({}, {}) vs ({}, {})",
                s.i, s.j, t.i, t.j
            )));
        }
        let (mut fs, mut ft) = (s.flags, t.flags);
        if !use_tau {
            fs = strip_tau(fs);
            ft = strip_tau(ft);
        }
        if fs != ft {
            note(s.i, s.j, TupleField::Flags, f64::INFINITY);
        }
        note(s.i, s.j, TupleField::D, (s.d - t.d).abs());
        note(s.i, s.j, TupleField::Theta, (s.theta - t.theta).abs());
        note(s.i, s.j, TupleField::Phi, angular_distance(s.phi, t.phi));
        if use_tau {
            note(s.i, s.j, TupleField::Tau, angular_distance(s.tau, t.tau));
        }
    }
    let max_deviation = worst.map_or(0.0, |w| w.value);
    Ok(Comparison {
        verdict: if max_deviation > tolerance {
            Verdict::Distinct
        } else {
            Verdict::Equivalent
        },
        max_deviation,
        worst,
    })
}

fn strip_tau(flags: EdgeFlags) -> EdgeFlags {
    EdgeFlags::from_bits(flags.bits() & !EdgeFlags::TAU_DEGENERATE.bits()).unwrap_or(EdgeFlags::NONE)
}

/// Full comparison of two graphs with identical topology and species.
pub fn compare_graphs(g1: &Graph3D, g2: &Graph3D, use_tau: bool, tolerance: f64) -> Result<Comparison> {
    let (t1, t2) = (g1.topology(), g2.topology());
    if t1.species != t2.species {
        return Err(Error::TopologyMismatch("species differ".into()));
    }
    if t1.edges != t2.edges {
        return Err(Error::TopologyMismatch("edge sets differ".into()));
    }
    compare_tuples(&transform(g1)?, &transform(g2)?, use_tau, tolerance)
}

/// `EQUIVALENT` iff every tuple field agrees within 1e-6. With `use_tau`
/// off the rotation angles are ignored.
pub fn discriminate(g1: &Graph3D, g2: &Graph3D, use_tau: bool) -> Result<Verdict> {
    Ok(compare_graphs(g1, g2, use_tau, DISCRIMINATION_TOLERANCE)?.verdict)
}
