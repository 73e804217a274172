use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::angles::{angle_between, dihedral};
use crate::error::{Error, Result};
use crate::graph::{build_neighbor_table, Graph3D, NeighborTable, Topology};

/// Degeneracy markers for the sentinel-filled angles of an edge.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct EdgeFlags(u8);

impl EdgeFlags {
    pub const NONE: Self = Self(0);
    /// `φ` is a sentinel: `s_i` is absent or a plane about `i → f_i` collapsed.
    pub const PHI_DEGENERATE: Self = Self(1);
    /// `τ` is a sentinel: `f_{i\j}` or `f_{j\i}` is absent or collinear.
    pub const TAU_DEGENERATE: Self = Self(2);

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn from_bits(bits: u8) -> Option<Self> {
        (bits & !3 == 0).then_some(Self(bits))
    }

    pub fn contains(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Self) {
        self.0 |= other.0;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for EdgeFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.contains(Self::PHI_DEGENERATE), self.contains(Self::TAU_DEGENERATE)) {
            (false, false) => Ok(()),
            (true, false) => f.write_str("phi"),
            (false, true) => f.write_str("tau"),
            (true, true) => f.write_str("phi|tau"),
        }
    }
}

impl FromStr for EdgeFlags {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut flags = Self::NONE;
        for token in s.split('|').map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "phi" => flags.insert(Self::PHI_DEGENERATE),
                "tau" => flags.insert(Self::TAU_DEGENERATE),
                other => return Err(format!("unknown flag `{other}`")),
            }
        }
        Ok(flags)
    }
}

impl Serialize for EdgeFlags {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeFlags {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reference nodes used for one edge. `None` marks an absent reference.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleRefs {
    /// `f_i`
    pub first: Option<usize>,
    /// `s_i`
    pub second: Option<usize>,
    /// `f_{i\j}`
    pub source_excluding: Option<usize>,
    /// `f_{j\i}`
    pub target_excluding: Option<usize>,
}

/// The complete descriptor of the directed edge `i → j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeTuple {
    pub i: usize,
    pub j: usize,
    pub d: f64,
    pub theta: f64,
    pub phi: f64,
    pub tau: f64,
    #[serde(default)]
    pub flags: EdgeFlags,
    #[serde(default)]
    pub refs: TupleRefs,
}

impl EdgeTuple {
    pub fn phi_valid(&self) -> bool {
        !self.flags.contains(EdgeFlags::PHI_DEGENERATE)
    }

    pub fn tau_valid(&self) -> bool {
        !self.flags.contains(EdgeFlags::TAU_DEGENERATE)
    }
}

/// Counts of primitive evaluations performed by the tuple loop.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCount {
    pub distances: u64,
    pub angles: u64,
    pub dihedrals: u64,
}

impl OpCount {
    /// Floating-point operations, using fixed per-primitive costs
    /// (distance 8, angle 20, dihedral 40).
    pub fn flops(&self) -> u64 {
        8 * self.distances + 20 * self.angles + 40 * self.dihedrals
    }
}

/// Every directed edge's tuple, ordered by `(i, j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleSet {
    pub num_nodes: usize,
    pub graph_hash: String,
    pub tuples: Vec<EdgeTuple>,
}

impl TupleSet {
    /// Wraps tuples read back from a file, checking they cover `topology`
    /// exactly once per directed edge.
    pub fn from_tuples(topology: &Topology, mut tuples: Vec<EdgeTuple>) -> Result<Self> {
        tuples.sort_by_key(|t| (t.i, t.j));
        let set = Self {
            num_nodes: topology.num_nodes(),
            graph_hash: topology.digest(),
            tuples,
        };
        set.check_covers(topology)?;
        Ok(set)
    }

    /// Checks that there is exactly one tuple per directed edge of
    /// `topology`, in `(i, j)` order.
    pub fn check_covers(&self, topology: &Topology) -> Result<()> {
        let mut expected = topology.edges.clone();
        expected.sort_unstable();
        expected.dedup();
        let got: Vec<_> = self.tuples.iter().map(|t| (t.i, t.j)).collect();
        if got == expected {
            return Ok(());
        }
        let missing = expected.iter().find(|e| got.binary_search(e).is_err());
        let extra = got.iter().find(|e| expected.binary_search(e).is_err());
        let detail = match (missing, extra) {
            (Some(e), _) => format!("no tuple for edge {e:?}"),
            (None, Some(e)) => format!("tuple for {e:?} is not an edge (or duplicated)"),
            (None, None) => "duplicated or unordered tuples".to_string(),
        };
        Err(Error::TopologyMismatch(detail))
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EdgeTuple> {
        self.tuples.iter()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&EdgeTuple> {
        self.tuples
            .binary_search_by_key(&(i, j), |t| (t.i, t.j))
            .ok()
            .map(|k| &self.tuples[k])
    }

    pub fn degenerate_count(&self) -> usize {
        self.tuples.iter().filter(|t| !t.flags.is_empty()).count()
    }

    /// Copy with every `τ` set to 0 (the rotation-angle ablation).
    pub fn without_tau(&self) -> Self {
        let mut out = self.clone();
        for t in &mut out.tuples {
            t.tau = 0.0;
        }
        out
    }
}

/// `f_{i\j}`: the nearest neighbor of `i` other than `j`.
pub fn reference_excluding(nt: &NeighborTable, i: usize, j: usize) -> Option<usize> {
    match nt.first(i) {
        Some(f) if f != j => Some(f),
        Some(_) => nt.second(i),
        None => None,
    }
}

/// Descriptor of the edge `i → j`.
pub fn edge_tuple(g: &Graph3D, nt: &NeighborTable, i: usize, j: usize) -> Result<EdgeTuple> {
    if !g.has_edge(i, j) {
        return Err(Error::TopologyMismatch(format!("({i}, {j}) is not an edge")));
    }
    edge_tuple_counted(g, nt, i, j, &mut OpCount::default())
}

fn edge_tuple_counted(g: &Graph3D, nt: &NeighborTable, i: usize, j: usize, ops: &mut OpCount) -> Result<EdgeTuple> {
    let p = g.positions();
    let pi = &p[i];
    let pj = &p[j];
    let d = g.distance(i, j);
    ops.distances += 1;

    // j is a neighbor of i, so f_i exists
    let first = nt.first(i).ok_or(Error::DegenerateFrame("node has no neighbors"))?;
    let second = nt.second(i);
    let theta = angle_between(&(p[first] - pi), &(pj - pi))?;
    ops.angles += 1;

    let mut flags = EdgeFlags::NONE;
    let phi = match second {
        Some(s) => {
            ops.dihedrals += 1;
            dihedral(&p[s], pi, &p[first], pj).ok()
        }
        None => None,
    }
    .unwrap_or_else(|| {
        flags.insert(EdgeFlags::PHI_DEGENERATE);
        0.0
    });

    let source_excluding = reference_excluding(nt, i, j);
    let target_excluding = reference_excluding(nt, j, i);
    let tau = match (source_excluding, target_excluding) {
        (Some(a), Some(b)) => {
            ops.dihedrals += 1;
            dihedral(&p[a], pi, pj, &p[b]).ok()
        }
        _ => None,
    }
    .unwrap_or_else(|| {
        flags.insert(EdgeFlags::TAU_DEGENERATE);
        0.0
    });

    Ok(EdgeTuple {
        i,
        j,
        d,
        theta,
        phi,
        tau,
        flags,
        refs: TupleRefs {
            first: Some(first),
            second,
            source_excluding,
            target_excluding,
        },
    })
}

fn node_tuples(g: &Graph3D, nt: &NeighborTable, i: usize, ops: &mut OpCount) -> Result<Vec<EdgeTuple>> {
    g.neighbors(i)
        .iter()
        .map(|&j| edge_tuple_counted(g, nt, i, j, ops))
        .collect()
}

/// The tuple loop alone, given a prebuilt neighbor table.
pub fn tuples_for(g: &Graph3D, nt: &NeighborTable) -> Result<Vec<EdgeTuple>> {
    let mut ops = OpCount::default();
    let mut out = Vec::with_capacity(g.num_edges());
    for i in 0..g.num_nodes() {
        out.extend(node_tuples(g, nt, i, &mut ops)?);
    }
    Ok(out)
}

/// Computes the tuple of every directed edge.
pub fn transform(g: &Graph3D) -> Result<TupleSet> {
    transform_with_ops(g).map(|(ts, _)| ts)
}

/// [`transform`] plus the number of primitive evaluations it performed.
pub fn transform_with_ops(g: &Graph3D) -> Result<(TupleSet, OpCount)> {
    if g.num_nodes() == 0 {
        return Err(Error::EmptyGraph);
    }
    let nt = build_neighbor_table(g);
    let mut ops = OpCount::default();
    let mut tuples = Vec::with_capacity(g.num_edges());
    for i in 0..g.num_nodes() {
        tuples.extend(node_tuples(g, &nt, i, &mut ops)?);
    }
    let ts = TupleSet {
        num_nodes: g.num_nodes(),
        graph_hash: g.topology().digest(),
        tuples,
    };
    Ok((ts, ops))
}

/// Parallel over nodes; output identical to [`transform`].
pub fn transform_par(g: &Graph3D) -> Result<TupleSet> {
    if g.num_nodes() == 0 {
        return Err(Error::EmptyGraph);
    }
    let nt = build_neighbor_table(g);
    let per_node: Vec<Vec<EdgeTuple>> = (0..g.num_nodes())
        .into_par_iter()
        .map(|i| node_tuples(g, &nt, i, &mut OpCount::default()))
        .collect::<Result<_>>()?;
    Ok(TupleSet {
        num_nodes: g.num_nodes(),
        graph_hash: g.topology().digest(),
        tuples: per_node.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_3;

    use super::*;
    use crate::graph::{build_radius_graph, Vec3};

    fn equilateral() -> Graph3D {
        let h = 3f64.sqrt() / 2.0;
        // shrinking p_2 towards p_0 keeps the angle at 0 and makes f_0 = 2
        let positions = vec![
            Vec3::zeros(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.5, h, 0.0) * (1.0 - 1e-9),
        ];
        build_radius_graph(vec![6; 3], positions, 1.5).unwrap()
    }

    #[test]
    fn reference_exclusion_rule() {
        let positions = vec![
            Vec3::zeros(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.5, 0.0),
            Vec3::new(0.0, 0.0, 2.0),
        ];
        let g = Graph3D::from_edges(vec![1; 4], positions, 3.0, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let nt = build_neighbor_table(&g);
        assert_eq!(reference_excluding(&nt, 0, 3), Some(1));
        assert_eq!(reference_excluding(&nt, 0, 1), Some(2));
        assert_eq!(reference_excluding(&nt, 1, 0), None);
    }

    #[test]
    fn equilateral_angle() {
        let g = equilateral();
        let nt = build_neighbor_table(&g);
        assert_eq!(nt.first(0), Some(2));
        let t = edge_tuple(&g, &nt, 0, 1).unwrap();
        assert!((t.theta - FRAC_PI_3).abs() < 1e-12);
        assert_eq!(t.refs.first, Some(2));
    }

    #[test]
    fn single_neighbor_is_all_sentinel() {
        let g = build_radius_graph(vec![1, 1], vec![Vec3::zeros(), Vec3::new(0.0, 0.0, 1.0)], 1.5).unwrap();
        let nt = build_neighbor_table(&g);
        let t = edge_tuple(&g, &nt, 0, 1).unwrap();
        assert_eq!((t.theta, t.phi, t.tau), (0.0, 0.0, 0.0));
        assert!(t.flags.contains(EdgeFlags::PHI_DEGENERATE));
        assert!(t.flags.contains(EdgeFlags::TAU_DEGENERATE));
        assert_eq!(t.refs.second, None);
        assert_eq!(t.refs.source_excluding, None);
        assert_eq!(t.refs.target_excluding, None);
    }

    #[test]
    fn edge_count_matches_directed_edges() {
        let positions = vec![
            Vec3::zeros(),
            Vec3::new(0.9572, 0.0, 0.0),
            Vec3::new(-0.2400, 0.9287, 0.0),
        ];
        let bonded = build_radius_graph(vec![8, 1, 1], positions.clone(), 1.2).unwrap();
        assert_eq!(transform(&bonded).unwrap().len(), 4);
        let full = build_radius_graph(vec![8, 1, 1], positions, 2.0).unwrap();
        assert_eq!(transform(&full).unwrap().len(), 6);
    }

    #[test]
    fn non_edge_rejected() {
        let g = build_radius_graph(vec![1, 1], vec![Vec3::zeros(), Vec3::new(0.0, 0.0, 3.0)], 1.5).unwrap();
        let nt = build_neighbor_table(&g);
        assert!(edge_tuple(&g, &nt, 0, 1).is_err());
    }

    #[test]
    fn flags_text_round_trip() {
        for bits in 0..4 {
            let f = EdgeFlags::from_bits(bits).unwrap();
            assert_eq!(f.to_string().parse::<EdgeFlags>().unwrap(), f);
        }
        assert!("psi".parse::<EdgeFlags>().is_err());
        assert!(EdgeFlags::from_bits(4).is_none());
    }

    #[test]
    fn tau_ablation_zeroes_only_tau() {
        let ts = transform(&equilateral()).unwrap();
        let ablated = ts.without_tau();
        for (a, b) in ts.iter().zip(ablated.iter()) {
            assert_eq!((a.d, a.theta, a.phi), (b.d, b.theta, b.phi));
            assert_eq!(b.tau, 0.0);
        }
    }
}
