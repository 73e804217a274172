//! 3D graphs, radius-cutoff adjacency, sorted neighbor tables and rigid
//! transforms.

use std::collections::{HashMap, VecDeque};

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Minimum separation between two nodes, in Å.
pub const MIN_SEPARATION: f64 = 1e-8;

/// Below this node count the radius graph is built by all-pairs search.
const BRUTE_FORCE_LIMIT: usize = 256;

const ROTATION_TOLERANCE: f64 = 1e-12;

/// A graph with per-node species codes, Cartesian positions in Å and a
/// symmetric edge set without self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph3D {
    species: Vec<u32>,
    positions: Vec<Vec3>,
    cutoff: f64,
    /// Neighbor indices per node, ascending.
    adjacency: Vec<Vec<usize>>,
}

impl Graph3D {
    /// Builds a graph from an explicit edge list. Each pair is inserted in
    /// both directions; duplicates are merged.
    pub fn from_edges(
        species: Vec<u32>,
        positions: Vec<Vec3>,
        cutoff: f64,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        validate_nodes(&species, &positions)?;
        let n = positions.len();
        let mut adjacency = vec![Vec::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::TopologyMismatch(format!(
                    "edge ({i}, {j}) references a node outside 0..{n}"
                )));
            }
            if i == j {
                return Err(Error::TopologyMismatch(format!("self-loop on node {i}")));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        check_separation_brute(&positions)?;
        Ok(Self {
            species,
            positions,
            cutoff,
            adjacency,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.positions.len()
    }

    /// Number of directed edges `m`.
    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn species(&self) -> &[u32] {
        &self.species
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn position(&self, i: usize) -> Vec3 {
        self.positions[i]
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i).is_some_and(|list| list.binary_search(&j).is_ok())
    }

    /// Directed edges in `(i, j)` lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&j| (i, j)))
    }

    /// `‖p_j − p_i‖`. Bitwise symmetric in `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (self.positions[j] - self.positions[i]).norm()
    }

    /// Number of nodes reachable from node 0.
    fn reachable_from_first(&self) -> usize {
        let n = self.num_nodes();
        if n == 0 {
            return 0;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for &j in &self.adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.reachable_from_first() == self.num_nodes()
    }

    pub fn ensure_connected(&self) -> Result<()> {
        let reached = self.reachable_from_first();
        if reached == self.num_nodes() {
            Ok(())
        } else {
            Err(Error::DisconnectedGraph {
                reached,
                total: self.num_nodes(),
            })
        }
    }

    pub fn topology(&self) -> Topology {
        Topology {
            species: self.species.clone(),
            edges: self.edges().collect(),
        }
    }

    /// Copy with positions replaced; the edge set is kept as is.
    pub fn with_positions(&self, positions: Vec<Vec3>) -> Result<Self> {
        if positions.len() != self.num_nodes() {
            return Err(Error::LengthMismatch {
                left: self.num_nodes(),
                right: positions.len(),
            });
        }
        Ok(Self {
            positions,
            ..self.clone()
        })
    }

    /// Reflection through the xy-plane. Not an SE(3) operation.
    pub fn mirrored(&self) -> Self {
        let positions = self.positions.iter().map(|p| Vec3::new(p.x, p.y, -p.z)).collect();
        Self {
            positions,
            ..self.clone()
        }
    }

    /// Relabels nodes so that old node `i` becomes node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_nodes();
        if perm.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid("perm", "not a permutation"));
            }
        }
        let mut species = vec![0; n];
        let mut positions = vec![Vec3::zeros(); n];
        for (old, &new) in perm.iter().enumerate() {
            species[new] = self.species[old];
            positions[new] = self.positions[old];
        }
        let edges: Vec<_> = self.edges().map(|(i, j)| (perm[i], perm[j])).collect();
        Self::from_edges(species, positions, self.cutoff, edges)
    }
}

fn validate_nodes(species: &[u32], positions: &[Vec3]) -> Result<()> {
    if positions.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if species.len() != positions.len() {
        return Err(Error::LengthMismatch {
            left: species.len(),
            right: positions.len(),
        });
    }
    if let Some(i) = positions.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
        return Err(Error::invalid(
            "positions",
            format!("node {i} has a non-finite coordinate"),
        ));
    }
    Ok(())
}

fn check_separation_brute(positions: &[Vec3]) -> Result<()> {
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let distance = (positions[j] - positions[i]).norm();
            if distance < MIN_SEPARATION {
                return Err(Error::DuplicatePositions {
                    first: i,
                    second: j,
                    distance,
                });
            }
        }
    }
    Ok(())
}

/// Connects every pair of nodes with `‖p_i − p_j‖ ≤ cutoff`.
pub fn build_radius_graph(species: Vec<u32>, positions: Vec<Vec3>, cutoff: f64) -> Result<Graph3D> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::invalid(
            "cutoff",
            format!("must be positive and finite, got {cutoff}"),
        ));
    }
    validate_nodes(&species, &positions)?;
    let pairs = if positions.len() < BRUTE_FORCE_LIMIT {
        pairs_brute_force(&positions, cutoff)?
    } else {
        pairs_cell_list(&positions, cutoff)?
    };
    let mut adjacency = vec![Vec::new(); positions.len()];
    for (i, j) in pairs {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(Graph3D {
        species,
        positions,
        cutoff,
        adjacency,
    })
}

fn pairs_brute_force(positions: &[Vec3], cutoff: f64) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let distance = (positions[j] - positions[i]).norm();
            if distance < MIN_SEPARATION {
                return Err(Error::DuplicatePositions {
                    first: i,
                    second: j,
                    distance,
                });
            }
            if distance <= cutoff {
                pairs.push((i, j));
            }
        }
    }
    Ok(pairs)
}

type Cell = (i64, i64, i64);

fn pairs_cell_list(positions: &[Vec3], cutoff: f64) -> Result<Vec<(usize, usize)>> {
    let side = cutoff.max(MIN_SEPARATION);
    let origin = positions.iter().fold(Vec3::repeat(f64::INFINITY), |acc, p| acc.inf(p));
    let cell_of = |p: &Vec3| -> Cell {
        let r = (p - origin) / side;
        (r.x.floor() as i64, r.y.floor() as i64, r.z.floor() as i64)
    };

    let mut cells: HashMap<Cell, Vec<usize>> = HashMap::new();
    for (i, p) in positions.iter().enumerate() {
        cells.entry(cell_of(p)).or_default().push(i);
    }

    let mut pairs = Vec::new();
    for (i, p) in positions.iter().enumerate() {
        let (cx, cy, cz) = cell_of(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(members) = cells.get(&(cx + dx, cy + dy, cz + dz)) else {
                        continue;
                    };
                    for &j in members {
                        if j <= i {
                            continue;
                        }
                        let distance = (positions[j] - p).norm();
                        if distance < MIN_SEPARATION {
                            return Err(Error::DuplicatePositions {
                                first: i,
                                second: j,
                                distance,
                            });
                        }
                        if distance <= cutoff {
                            pairs.push((i, j));
                        }
                    }
                }
            }
        }
    }
    Ok(pairs)
}

/// Node species plus the directed edge list, without coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub species: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

impl Topology {
    pub fn num_nodes(&self) -> usize {
        self.species.len()
    }

    /// Hex SHA-256 over the node count, species and sorted directed edges.
    pub fn digest(&self) -> String {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        let mut hasher = Sha256::new();
        hasher.update((self.species.len() as u64).to_le_bytes());
        for s in &self.species {
            hasher.update(s.to_le_bytes());
        }
        for (i, j) in edges {
            hasher.update((i as u64).to_le_bytes());
            hasher.update((j as u64).to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// Neighbor lists, ascending, after symmetrising the edge set.
    pub fn adjacency(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.num_nodes();
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &self.edges {
            if i >= n || j >= n || i == j {
                return Err(Error::TopologyMismatch(format!("invalid edge ({i}, {j})")));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(adjacency)
    }
}

/// A neighbor and its distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// Per-node neighbor lists sorted by ascending distance, ties broken by the
/// smaller node index, with the nearest (`first`) and second-nearest
/// (`second`) neighbors cached.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    lists: Vec<Vec<Neighbor>>,
}

impl NeighborTable {
    /// Builds the table from `(i, j, d_ij)` triples. Each directed edge must
    /// appear once.
    pub fn from_distances(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut lists = vec![Vec::new(); n];
        for (i, j, distance) in entries {
            lists[i].push(Neighbor { index: j, distance });
        }
        for list in &mut lists {
            list.sort_unstable_by(|a, b| a.distance.total_cmp(&b.distance).then(a.index.cmp(&b.index)));
        }
        Self { lists }
    }

    pub fn num_nodes(&self) -> usize {
        self.lists.len()
    }

    pub fn neighbors(&self, i: usize) -> &[Neighbor] {
        &self.lists[i]
    }

    /// Nearest neighbor `f_i`.
    pub fn first(&self, i: usize) -> Option<usize> {
        self.lists[i].first().map(|nb| nb.index)
    }

    /// Second-nearest neighbor `s_i`.
    pub fn second(&self, i: usize) -> Option<usize> {
        self.lists[i].get(1).map(|nb| nb.index)
    }

    pub fn distance(&self, i: usize, j: usize) -> Option<f64> {
        self.lists[i].iter().find(|nb| nb.index == j).map(|nb| nb.distance)
    }
}

pub fn build_neighbor_table(g: &Graph3D) -> NeighborTable {
    let mut lists: Vec<Vec<Neighbor>> = Vec::with_capacity(g.num_nodes());
    for i in 0..g.num_nodes() {
        let mut list: Vec<Neighbor> = g
            .neighbors(i)
            .iter()
            .map(|&j| Neighbor {
                index: j,
                distance: g.distance(i, j),
            })
            .collect();
        list.sort_unstable_by(|a, b| a.distance.total_cmp(&b.distance).then(a.index.cmp(&b.index)));
        lists.push(list);
    }
    NeighborTable { lists }
}

/// A proper rigid motion `p ↦ R p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SE3Transform {
    rotation: Matrix3<f64>,
    translation: Vec3,
}

impl SE3Transform {
    pub fn new(rotation: Matrix3<f64>, translation: Vec3) -> Result<Self> {
        check_rotation(&rotation)?;
        if !translation.iter().all(|c| c.is_finite()) {
            return Err(Error::invalid("translation", "non-finite component"));
        }
        Ok(Self { rotation, translation })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn translation_only(translation: Vec3) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation,
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vec3 {
        &self.translation
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    /// Homogeneous 4×4 form, row-major.
    pub fn to_homogeneous(&self) -> [[f64; 4]; 4] {
        let r = &self.rotation;
        let t = &self.translation;
        [
            [r[(0, 0)], r[(0, 1)], r[(0, 2)], t.x],
            [r[(1, 0)], r[(1, 1)], r[(1, 2)], t.y],
            [r[(2, 0)], r[(2, 1)], r[(2, 2)], t.z],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }
}

fn check_rotation(rotation: &Matrix3<f64>) -> Result<()> {
    if !rotation.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidRotation("non-finite entry".into()));
    }
    let deviation = (rotation.transpose() * rotation - Matrix3::identity()).abs().max();
    if deviation > ROTATION_TOLERANCE {
        return Err(Error::InvalidRotation(format!("‖RᵀR − I‖∞ = {deviation:e}")));
    }
    let det = rotation.determinant();
    if (det - 1.0).abs() > ROTATION_TOLERANCE {
        return Err(Error::InvalidRotation(format!("det = {det}")));
    }
    Ok(())
}

/// Applies `t` to every position; species and edges are unchanged.
pub fn apply_se3(g: &Graph3D, t: &SE3Transform) -> Result<Graph3D> {
    check_rotation(&t.rotation)?;
    let positions = g.positions.iter().map(|p| t.apply(p)).collect();
    Ok(Graph3D { positions, ..g.clone() })
}

/// Uniform random rotation (Shoemake's unit-quaternion construction) and a
/// translation uniform in `[-10, 10]³`. Deterministic per seed.
pub fn random_se3(seed: u64) -> SE3Transform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let tau = std::f64::consts::TAU;
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let q = Quaternion::new(
        b * (tau * u3).cos(),
        a * (tau * u2).sin(),
        a * (tau * u2).cos(),
        b * (tau * u3).sin(),
    );
    let rotation = UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner();
    let translation = Vec3::new(
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
    );
    SE3Transform { rotation, translation }
}
