//! Seeded graph families with a controlled mean degree.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_radius_graph, Graph3D, Vec3};

/// Allowed relative miss between achieved and target mean degree.
pub const DEGREE_BAND: f64 = 0.2;

const BOX_ATTEMPTS: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// Uniform points in a cube sized for the target density.
    RandomBox,
    /// A closed, gently wavy ring where every node reaches its `k/2`
    /// nearest ring neighbors on each side: exactly `k`-regular.
    Chain,
    /// A jittered simple cubic lattice with a calibrated cutoff.
    Lattice,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::RandomBox => "random-box",
            Generator::Chain => "chain",
            Generator::Lattice => "lattice",
        })
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "random-box" => Ok(Generator::RandomBox),
            "chain" => Ok(Generator::Chain),
            "lattice" => Ok(Generator::Lattice),
            other => Err(format!(
                "unknown generator `{other}` (expected random-box, chain or lattice)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchScenario {
    pub generator: Generator,
    pub n: usize,
    pub target_degree: usize,
    pub seed: u64,
    pub repetitions: usize,
}

impl BenchScenario {
    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::invalid("n", format!("must be at least 4, got {}", self.n)));
        }
        if self.target_degree < 2 {
            return Err(Error::invalid(
                "k",
                format!("must be at least 2, got {}", self.target_degree),
            ));
        }
        if self.target_degree >= self.n {
            return Err(Error::invalid("k", format!("must be below n = {}", self.n)));
        }
        Ok(())
    }

    /// Builds the graph and checks its mean degree against the target band.
    pub fn generate(&self) -> Result<Graph3D> {
        self.validate()?;
        match self.generator {
            Generator::Chain => ring(self.n, self.target_degree, self.seed),
            Generator::Lattice => lattice(self.n, self.target_degree, self.seed),
            Generator::RandomBox => random_box(self.n, self.target_degree, self.seed),
        }
    }
}

pub fn mean_degree(g: &Graph3D) -> f64 {
    g.num_edges() as f64 / g.num_nodes() as f64
}

fn check_band(g: &Graph3D, k: usize, what: &str) -> Result<()> {
    let achieved = mean_degree(g);
    if (achieved - k as f64).abs() > DEGREE_BAND * k as f64 {
        return Err(Error::CalibrationFailure(format!(
            "{what}: mean degree {achieved:.2} is outside 20% of {k}"
        )));
    }
    Ok(())
}

fn ring(n: usize, k: usize, seed: u64) -> Result<Graph3D> {
    if !k.is_multiple_of(2) {
        return Err(Error::invalid("k", "the chain generator needs an even degree"));
    }
    let half = k / 2;
    if n < 2 * half + 3 {
        return Err(Error::invalid(
            "n",
            format!("a {k}-regular ring needs at least {} nodes", 2 * half + 3),
        ));
    }
    let radius = 1.0 / (2.0 * (PI / n as f64).sin());
    let chord = |m: usize| 2.0 * radius * (PI * m as f64 / n as f64).sin();
    let cutoff = 0.5 * (chord(half) + chord(half + 1));
    let phase = ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..2.0 * PI);
    let positions = (0..n)
        .map(|t| {
            let a = 2.0 * PI * t as f64 / n as f64;
            Vec3::new(radius * a.cos(), radius * a.sin(), 0.1 * (2.4 * t as f64 + phase).sin())
        })
        .collect();
    let g = build_radius_graph(vec![6; n], positions, cutoff)?;
    if (0..n).any(|i| g.degree(i) != k) {
        return Err(Error::CalibrationFailure(format!("ring of {n} is not {k}-regular")));
    }
    Ok(g)
}

fn lattice(n: usize, k: usize, seed: u64) -> Result<Graph3D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = (n as f64).cbrt().ceil() as usize;
    let positions: Vec<Vec3> = (0..n)
        .map(|t| {
            let (x, y, z) = (t % side, (t / side) % side, t / (side * side));
            let jitter = Vec3::new(
                rng.gen_range(-0.15..0.15),
                rng.gen_range(-0.15..0.15),
                rng.gen_range(-0.15..0.15),
            );
            Vec3::new(x as f64, y as f64, z as f64) + jitter
        })
        .collect();
    let wanted_pairs = n * k / 2;
    let mut reach = 1.5;
    let distances = loop {
        let probe = build_radius_graph(vec![6; n], positions.clone(), reach)?;
        if probe.num_edges() / 2 >= wanted_pairs {
            let mut d: Vec<f64> = probe
                .edges()
                .filter(|(i, j)| i < j)
                .map(|(i, j)| probe.distance(i, j))
                .collect();
            d.sort_unstable_by(f64::total_cmp);
            break d;
        }
        reach += 0.5;
    };
    let cutoff = distances[wanted_pairs - 1];
    let g = build_radius_graph(vec![6; n], positions, cutoff)?;
    check_band(&g, k, "lattice")?;
    Ok(g)
}

/// Box side for `n` uniform points whose mean count of neighbors within
/// `r` is `k`, including the first-order loss near the faces.
fn box_side(n: usize, k: usize, r: f64) -> f64 {
    let ball = 4.0 / 3.0 * PI * r.powi(3);
    let bulk = (n - 1) as f64 * ball / k as f64;
    let mut side = bulk.cbrt();
    for _ in 0..100 {
        side = (bulk * (1.0 - 9.0 * r / (8.0 * side)).max(0.05)).cbrt();
    }
    side
}

fn random_box(n: usize, k: usize, seed: u64) -> Result<Graph3D> {
    let cutoff = 2.0;
    let side = box_side(n, k, cutoff);
    let mut last = None;
    for attempt in 0..BOX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let positions = (0..n)
            .map(|_| {
                Vec3::new(
                    rng.gen_range(0.0..side),
                    rng.gen_range(0.0..side),
                    rng.gen_range(0.0..side),
                )
            })
            .collect();
        let g = build_radius_graph(vec![6; n], positions, cutoff)?;
        match check_band(&g, k, "random-box") {
            Ok(()) => return Ok(g),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}
