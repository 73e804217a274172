//! Bundled molecules, butane conformers and seeded random graphs.

use nalgebra::{Rotation3, Unit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::dihedral;
use crate::graph::{build_radius_graph, Graph3D, Vec3};
use crate::io::{parse_xyz, XyzFrame};

/// A bundled XYZ structure with its bond cutoff in Å.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub cutoff: f64,
    text: &'static str,
}

impl Fixture {
    pub fn xyz(&self) -> &'static str {
        self.text
    }

    pub fn frame(&self) -> XyzFrame {
        parse_xyz(self.text).expect("bundled fixture parses").remove(0)
    }

    pub fn graph(&self) -> Graph3D {
        let frame = self.frame();
        build_radius_graph(frame.species, frame.positions, self.cutoff).expect("bundled fixture is valid")
    }
}

macro_rules! fixture {
    ($name:literal, $cutoff:expr) => {
        Fixture {
            name: $name,
            cutoff: $cutoff,
            text: include_str!(concat!("../fixtures/", $name, ".xyz")),
        }
    };
}

pub const FIXTURES: [Fixture; 8] = [
    fixture!("alanine", 1.6),
    fixture!("ammonia", 1.3),
    fixture!("benzene", 1.6),
    fixture!("bromochlorofluoromethane", 1.95),
    fixture!("butane", 1.6),
    fixture!("ethanol", 1.6),
    fixture!("methane", 1.6),
    fixture!("water", 1.2),
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// The chiral fixture (CHFClBr).
pub fn chiral() -> Graph3D {
    fixture("bromochlorofluoromethane").expect("bundled").graph()
}

/// Butane carbon indices, C1..C4.
pub const BUTANE_CARBONS: [usize; 4] = [0, 1, 2, 3];

/// Atoms rotated together about the C2–C3 bond: C1, its hydrogens and the
/// hydrogens on C2.
pub const BUTANE_ROTOR: [usize; 6] = [0, 4, 5, 6, 7, 8];

pub const CONFORMER_ANGLES: [f64; 4] = [0.0, 60.0, 180.0, 300.0];

/// Butane with the C1–C2–C3–C4 dihedral set to `omega_deg` by rotating the
/// C1 side rigidly about the central bond.
pub fn butane_conformer(omega_deg: f64) -> Graph3D {
    let anti = fixture("butane").expect("bundled");
    let frame = anti.frame();
    let p = &frame.positions;
    let [c1, c2, c3, c4] = BUTANE_CARBONS;
    let current = dihedral(&p[c1], &p[c2], &p[c3], &p[c4]).expect("anti butane is not collinear");
    // right-hand rotation about c3 → c2 raises the dihedral
    let axis = Unit::new_normalize(p[c2] - p[c3]);
    let rotation = Rotation3::from_axis_angle(&axis, omega_deg.to_radians() - current);
    let mut positions = p.clone();
    for &k in &BUTANE_ROTOR {
        positions[k] = p[c2] + rotation * (p[k] - p[c2]);
    }
    build_radius_graph(frame.species, positions, anti.cutoff).expect("rotation keeps atoms apart")
}

/// A connected cloud grown one point at a time: each new point lands 0.9 to
/// 1.4 from a random earlier point and at least 0.7 from all others. The
/// cutoff is the smallest that keeps the growth tree and gives an average
/// degree of about `mean_degree`.
pub fn random_connected_graph(n: usize, mean_degree: f64, seed: u64) -> Result<Graph3D> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(mean_degree >= 0.0 && mean_degree.is_finite()) {
        return Err(Error::invalid(
            "mean_degree",
            format!("must be finite and non-negative, got {mean_degree}"),
        ));
    }
    const ELEMENTS: [u32; 4] = [1, 6, 7, 8];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = vec![Vec3::zeros()];
    let mut tree_max: f64 = 0.0;
    while positions.len() < n {
        let parent = positions[rng.gen_range(0..positions.len())];
        let direction = loop {
            let v = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let norm = v.norm();
            if norm > 0.1 && norm <= 1.0 {
                break v / norm;
            }
        };
        let step = rng.gen_range(0.9..1.4);
        let candidate = parent + direction * step;
        if positions.iter().all(|p| (p - candidate).norm() >= 0.7) {
            positions.push(candidate);
            tree_max = tree_max.max(step);
        }
    }
    let mut distances: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            distances.push((positions[a] - positions[b]).norm());
        }
    }
    distances.sort_unstable_by(f64::total_cmp);
    let wanted = ((n as f64 * mean_degree / 2.0).round() as usize).min(distances.len());
    let by_degree = wanted.checked_sub(1).map_or(0.0, |k| distances[k]);
    let cutoff = tree_max.max(by_degree).max(1.0) * (1.0 + 1e-12);
    let species = (0..n).map(|_| ELEMENTS[rng.gen_range(0..ELEMENTS.len())]).collect();
    build_radius_graph(species, positions, cutoff)
}
