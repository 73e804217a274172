//! Rebuilds coordinates from a tuple set, up to a global rigid motion.
//!
//! A seed node with at least two neighbors fixes the gauge: it sits at the
//! origin, its nearest neighbor on +z and its second-nearest neighbor in the
//! xz half-plane with x > 0. Every other node `j` is then placed from an
//! already placed neighbor `i`, breadth first:
//!
//! * `Case1`: `f_i` and some other neighbor `k` of `i` are placed. The polar
//!   angle of `j` about `i → f_i` is `θ_ij` and its azimuth measured from
//!   `k` is `φ_ij − φ_ik`.
//! * `Case2`: otherwise, when `j` is the reference `f_{i\k}` of a placed
//!   edge `i → k` whose far reference `f_{k\i}` is placed, `j` follows from
//!   `d_ij`, the angle between `p_ij` and `p_ik`, and the rotation angle
//!   `τ_ik` about `i → k`.
//!
//! Reference nodes are recomputed from the tuple distances, so the CSV form
//! (which carries no reference columns) is sufficient.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::align::{align, AlignmentReport};
use super::placement::{place_axial, place_case1, place_case2};
use crate::error::{Error, Result};
use crate::geometry::{angle_between, angular_distance, dihedral, reference_excluding, transform, EdgeTuple, TupleSet};
use crate::graph::{Graph3D, NeighborTable, Topology, Vec3};

/// Largest violation of a tuple constraint, in Å, tolerated while placing.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-6;

/// `|sin θ|` below which a node is placed on the axis line directly.
const AXIAL_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PlacementCase {
    Seed,
    Case1,
    Case2,
    SkippedDegenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionResult {
    /// Rebuilt coordinates; NaN for skipped nodes.
    pub positions: Vec<Vec3>,
    pub placement_case: Vec<PlacementCase>,
    /// Node placement sequence.
    pub order: Vec<usize>,
    /// The placed neighbor each node was attached to (`None` for seeds).
    pub attachment: Vec<Option<usize>>,
    /// Set when the graph is too small to anchor a frame (n ≤ 2); the
    /// result is then fixed by distances alone.
    pub trivial: bool,
    /// Alignment RMSD against the source, when one was supplied.
    pub rmsd: Option<f64>,
}

impl ReconstructionResult {
    pub fn is_complete(&self) -> bool {
        !self.placement_case.contains(&PlacementCase::SkippedDegenerate)
    }

    pub fn count(&self, case: PlacementCase) -> usize {
        self.placement_case.iter().filter(|&&c| c == case).count()
    }

    /// Aligns the placed nodes onto the matching `source` positions (SE(3)
    /// only) and records the RMSD.
    pub fn align_to(&mut self, source: &[Vec3]) -> Result<AlignmentReport> {
        if source.len() != self.positions.len() {
            return Err(Error::LengthMismatch {
                left: self.positions.len(),
                right: source.len(),
            });
        }
        let placed: Vec<usize> = (0..source.len())
            .filter(|&k| self.placement_case[k] != PlacementCase::SkippedDegenerate)
            .collect();
        let target: Vec<Vec3> = placed.iter().map(|&k| source[k]).collect();
        let mobile: Vec<Vec3> = placed.iter().map(|&k| self.positions[k]).collect();
        let report = align(&target, &mobile, false)?;
        self.rmsd = Some(report.rmsd);
        Ok(report)
    }
}

pub fn reconstruct(ts: &TupleSet, topology: &Topology) -> Result<ReconstructionResult> {
    reconstruct_with_tolerance(ts, topology, RECONSTRUCTION_TOLERANCE)
}

pub fn reconstruct_with_tolerance(ts: &TupleSet, topology: &Topology, tolerance: f64) -> Result<ReconstructionResult> {
    let mut builder = Builder::new(ts, topology, tolerance)?;
    builder.run()?;
    builder.verify_angles()?;
    Ok(builder.finish())
}

/// `transform`, `reconstruct` and alignment back onto `g` in one call.
pub fn round_trip(g: &Graph3D) -> Result<ReconstructionResult> {
    let ts = transform(g)?;
    let mut result = reconstruct(&ts, &g.topology())?;
    result.align_to(g.positions())?;
    Ok(result)
}

struct Builder<'a> {
    ts: &'a TupleSet,
    nt: NeighborTable,
    adjacency: Vec<Vec<usize>>,
    positions: Vec<Option<Vec3>>,
    case: Vec<PlacementCase>,
    attachment: Vec<Option<usize>>,
    order: Vec<usize>,
    trivial: bool,
    tolerance: f64,
}

impl<'a> Builder<'a> {
    fn new(ts: &'a TupleSet, topology: &Topology, tolerance: f64) -> Result<Self> {
        let n = topology.num_nodes();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if ts.num_nodes != n {
            return Err(Error::TopologyMismatch(format!(
                "tuple set has {} nodes, topology has {n}",
                ts.num_nodes
            )));
        }
        ts.check_covers(topology)?;
        let adjacency = topology.adjacency()?;
        let reached = reachable(&adjacency);
        if reached < n {
            return Err(Error::DisconnectedGraph { reached, total: n });
        }
        let nt = NeighborTable::from_distances(n, ts.iter().map(|t| (t.i, t.j, t.d)));
        Ok(Self {
            ts,
            nt,
            adjacency,
            positions: vec![None; n],
            case: vec![PlacementCase::SkippedDegenerate; n],
            attachment: vec![None; n],
            order: Vec::with_capacity(n),
            trivial: false,
            tolerance,
        })
    }

    fn tuple(&self, i: usize, j: usize) -> &EdgeTuple {
        // coverage was checked in `new`
        self.ts.get(i, j).expect("tuple for every directed edge")
    }

    fn pos(&self, i: usize) -> Option<Vec3> {
        self.positions[i]
    }

    fn set(&mut self, j: usize, p: Vec3, case: PlacementCase, from: Option<usize>) -> Result<()> {
        self.positions[j] = Some(p);
        self.case[j] = case;
        self.attachment[j] = from;
        self.order.push(j);
        self.check_distances(j)
    }

    fn check_distances(&self, j: usize) -> Result<()> {
        let pj = self.positions[j].expect("node just placed");
        for &k in &self.adjacency[j] {
            let Some(pk) = self.positions[k] else { continue };
            let actual = (pj - pk).norm();
            for (a, b) in [(j, k), (k, j)] {
                let expected = self.tuple(a, b).d;
                if (actual - expected).abs() > self.tolerance {
                    return Err(Error::InconsistentTuples {
                        node: j,
                        detail: format!(
                            "placed distance to {k} is {actual:.9} Å but tuple ({a}, {b}) says {expected:.9} Å"
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        let n = self.positions.len();
        let Some(seed) = (0..n).find(|&i| self.adjacency[i].len() >= 2) else {
            // n ≤ 2 for a connected graph
            self.trivial = true;
            self.set(0, Vec3::zeros(), PlacementCase::Seed, None)?;
            if n == 2 {
                let d = self.tuple(0, 1).d;
                self.set(1, Vec3::new(0.0, 0.0, d), PlacementCase::Seed, None)?;
            }
            return Ok(());
        };

        let f = self.nt.first(seed).expect("degree ≥ 2");
        let s = self.nt.second(seed).expect("degree ≥ 2");
        let d_f = self.tuple(seed, f).d;
        let seed_s = *self.tuple(seed, s);
        self.set(seed, Vec3::zeros(), PlacementCase::Seed, None)?;
        self.set(f, Vec3::new(0.0, 0.0, d_f), PlacementCase::Seed, Some(seed))?;
        let (sin, cos) = seed_s.theta.sin_cos();
        self.set(s, seed_s.d * Vec3::new(sin, 0.0, cos), PlacementCase::Seed, Some(seed))?;

        let mut discovered = vec![false; n];
        let mut pending = VecDeque::new();
        for &k in &self.order {
            discovered[k] = true;
        }
        for k in self.order.clone() {
            self.discover(k, &mut discovered, &mut pending);
        }

        let mut failures_in_a_row = 0;
        while let Some(j) = pending.pop_front() {
            match self.try_place(j) {
                Some((p, case, from)) => {
                    self.set(j, p, case, Some(from))?;
                    self.discover(j, &mut discovered, &mut pending);
                    failures_in_a_row = 0;
                }
                None => {
                    pending.push_back(j);
                    failures_in_a_row += 1;
                    if failures_in_a_row > pending.len() {
                        break;
                    }
                }
            }
        }
        Ok(())
    }

    fn discover(&self, i: usize, discovered: &mut [bool], pending: &mut VecDeque<usize>) {
        for &k in &self.adjacency[i] {
            if !discovered[k] {
                discovered[k] = true;
                pending.push_back(k);
            }
        }
    }

    /// Case 1 is tried from every placed neighbor before falling back to
    /// case 2.
    fn try_place(&self, j: usize) -> Option<(Vec3, PlacementCase, usize)> {
        let placed: Vec<usize> = self.adjacency[j]
            .iter()
            .copied()
            .filter(|&i| self.pos(i).is_some())
            .collect();
        placed
            .iter()
            .find_map(|&i| self.try_case1(i, j).map(|p| (p, PlacementCase::Case1, i)))
            .or_else(|| {
                placed
                    .iter()
                    .find_map(|&i| self.try_case2(i, j).map(|p| (p, PlacementCase::Case2, i)))
            })
    }

    fn try_case1(&self, i: usize, j: usize) -> Option<Vec3> {
        let f = self.nt.first(i)?;
        if f == j {
            return None;
        }
        let (pi, pf) = (self.pos(i)?, self.pos(f)?);
        let tij = self.tuple(i, j);
        if tij.theta.sin().abs() < AXIAL_EPS {
            return place_axial(&pi, &pf, tij.d, tij.theta);
        }
        if !tij.phi_valid() {
            return None;
        }
        let candidates = self.nt.second(i).into_iter().chain(self.adjacency[i].iter().copied());
        for k in candidates {
            if k == f || k == j {
                continue;
            }
            let Some(pk) = self.pos(k) else { continue };
            let tik = self.tuple(i, k);
            if !tik.phi_valid() {
                continue;
            }
            if let Ok(p) = place_case1(&pi, &pf, &pk, tij.d, tij.theta, tij.phi - tik.phi) {
                return Some(p);
            }
        }
        None
    }

    fn try_case2(&self, i: usize, j: usize) -> Option<Vec3> {
        let pi = self.pos(i)?;
        let d = self.tuple(i, j).d;
        for &k in &self.adjacency[i] {
            if k == j || reference_excluding(&self.nt, i, k) != Some(j) {
                continue;
            }
            let Some(pk) = self.pos(k) else { continue };
            let Some(r) = reference_excluding(&self.nt, k, i) else {
                continue;
            };
            let Some(pr) = self.pos(r) else { continue };
            let tik = self.tuple(i, k);
            if !tik.tau_valid() {
                continue;
            }
            // f_{i\k} = j means either f_i = k and j = s_i, or f_i = j
            let angle = if self.nt.first(i) == Some(k) {
                self.tuple(i, j).theta
            } else {
                tik.theta
            };
            if angle.sin().abs() < AXIAL_EPS {
                return place_axial(&pi, &pk, d, angle);
            }
            if let Ok(p) = place_case2(&pi, &pk, &pr, d, angle, tik.tau) {
                return Some(p);
            }
        }
        None
    }

    /// Recomputes every angle whose nodes were all placed and converts the
    /// deviation to an equivalent displacement in Å.
    fn verify_angles(&self) -> Result<()> {
        for t in self.ts.iter() {
            let (Some(pi), Some(pj)) = (self.pos(t.i), self.pos(t.j)) else {
                continue;
            };
            let Some(f) = self.nt.first(t.i) else { continue };
            let Some(pf) = self.pos(f) else { continue };
            let fail = |what: &str, shift: f64| Error::InconsistentTuples {
                node: t.j,
                detail: format!("{what} of edge ({}, {}) is off by {shift:.3e} Å", t.i, t.j),
            };

            if let Ok(theta) = angle_between(&(pf - pi), &(pj - pi)) {
                let shift = t.d * (theta - t.theta).abs();
                if shift > self.tolerance {
                    return Err(fail("theta", shift));
                }
            }
            if t.phi_valid() {
                if let Some(ps) = self.nt.second(t.i).and_then(|s| self.pos(s)) {
                    if let Ok(phi) = dihedral(&ps, &pi, &pf, &pj) {
                        let shift = t.d * t.theta.sin() * angular_distance(phi, t.phi);
                        if shift > self.tolerance {
                            return Err(fail("phi", shift));
                        }
                    }
                }
            }
            if t.tau_valid() {
                let a = reference_excluding(&self.nt, t.i, t.j).and_then(|a| self.pos(a));
                let b = reference_excluding(&self.nt, t.j, t.i).and_then(|b| self.pos(b));
                if let (Some(pa), Some(pb)) = (a, b) {
                    if let Ok(tau) = dihedral(&pa, &pi, &pj, &pb) {
                        let axis = (pj - pi).normalize();
                        let lever = distance_from_axis(&(pa - pi), &axis).min(distance_from_axis(&(pb - pj), &axis));
                        let shift = lever * angular_distance(tau, t.tau);
                        if shift > self.tolerance {
                            return Err(fail("tau", shift));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> ReconstructionResult {
        ReconstructionResult {
            positions: self
                .positions
                .iter()
                .map(|p| p.unwrap_or(Vec3::repeat(f64::NAN)))
                .collect(),
            placement_case: self.case,
            order: self.order,
            attachment: self.attachment,
            trivial: self.trivial,
            rmsd: None,
        }
    }
}

fn distance_from_axis(v: &Vec3, axis: &Vec3) -> f64 {
    (v - axis * axis.dot(v)).norm()
}

fn reachable(adjacency: &[Vec<usize>]) -> usize {
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = queue.pop_front() {
        for &j in &adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                queue.push_back(j);
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_3;

    use super::*;
    use crate::geometry::{EdgeFlags, TupleRefs};
    use crate::graph::build_radius_graph;

    fn raw(i: usize, j: usize, d: f64, theta: f64) -> EdgeTuple {
        EdgeTuple {
            i,
            j,
            d,
            theta,
            phi: 0.0,
            tau: 0.0,
            flags: EdgeFlags::NONE,
            refs: TupleRefs::default(),
        }
    }

    #[test]
    fn equilateral_base_case_from_bare_tuples() {
        let topology = Topology {
            species: vec![6; 3],
            edges: vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)],
        };
        // f_i is the smaller index on ties, so θ is 0 towards f_i and π/3 otherwise
        let tuples = vec![
            raw(0, 1, 1.0, 0.0),
            raw(0, 2, 1.0, FRAC_PI_3),
            raw(1, 0, 1.0, 0.0),
            raw(1, 2, 1.0, FRAC_PI_3),
            raw(2, 0, 1.0, 0.0),
            raw(2, 1, 1.0, FRAC_PI_3),
        ];
        let ts = TupleSet::from_tuples(&topology, tuples).unwrap();
        let rec = reconstruct(&ts, &topology).unwrap();
        assert!(rec.is_complete());
        let h = 3f64.sqrt() / 2.0;
        let source = [Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.5, h, 0.0)];
        let mut rec = rec;
        rec.align_to(&source).unwrap();
        assert!(rec.rmsd.unwrap() < 1e-10);
    }

    #[test]
    fn four_node_chain_uses_case2() {
        let positions = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.5, 0.0, 0.0),
            Vec3::new(2.0, 1.4, 0.0),
            Vec3::new(3.4, 1.7, 0.9),
        ];
        let g = Graph3D::from_edges(vec![6; 4], positions, 1.6, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let rec = round_trip(&g).unwrap();
        assert!(rec.rmsd.unwrap() < 1e-8, "{:?}", rec.rmsd);
        assert_eq!(rec.count(PlacementCase::Case2), 1);
        assert_eq!(rec.count(PlacementCase::Seed), 3);
    }

    #[test]
    fn two_nodes_are_trivial() {
        let g = build_radius_graph(vec![1, 1], vec![Vec3::zeros(), Vec3::new(0.3, 0.4, 0.0)], 1.0).unwrap();
        let rec = round_trip(&g).unwrap();
        assert!(rec.trivial);
        assert!(rec.rmsd.unwrap() < 1e-12);
    }

    #[test]
    fn single_node() {
        let g = build_radius_graph(vec![1], vec![Vec3::new(1.0, 2.0, 3.0)], 1.0).unwrap();
        let rec = round_trip(&g).unwrap();
        assert!(rec.trivial && rec.is_complete());
    }

    #[test]
    fn disconnected_rejected() {
        let g = build_radius_graph(vec![1, 1], vec![Vec3::zeros(), Vec3::new(3.0, 0.0, 0.0)], 1.0).unwrap();
        assert!(matches!(
            round_trip(&g),
            Err(Error::DisconnectedGraph { reached: 1, total: 2 })
        ));
    }

    #[test]
    fn corrupted_distance_detected() {
        let positions = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.1, 0.0, 0.0),
            Vec3::new(0.2, 1.2, 0.0),
            Vec3::new(0.4, 0.3, 1.3),
        ];
        let g = build_radius_graph(vec![6; 4], positions, 2.0).unwrap();
        let mut ts = transform(&g).unwrap();
        let k = ts.tuples.iter().position(|t| (t.i, t.j) == (2, 3)).unwrap();
        ts.tuples[k].d += 0.05;
        assert!(matches!(
            reconstruct(&ts, &g.topology()),
            Err(Error::InconsistentTuples { .. })
        ));
    }

    #[test]
    fn corrupted_angle_detected() {
        let positions = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.1, 0.0, 0.0),
            Vec3::new(0.2, 1.2, 0.0),
            Vec3::new(0.4, 0.3, 1.3),
            Vec3::new(1.2, 1.1, 0.7),
        ];
        let g = build_radius_graph(vec![6; 5], positions, 2.0).unwrap();
        let clean = transform(&g).unwrap();
        for k in 0..clean.len() {
            let mut ts = clean.clone();
            ts.tuples[k].theta += 0.01;
            // a complete graph over-determines every angle
            assert!(
                reconstruct(&ts, &g.topology()).is_err(),
                "corruption of tuple {k} went unnoticed"
            );
        }
    }

    #[test]
    fn collinear_molecule() {
        let positions = vec![
            Vec3::new(-1.16, 0.0, 0.0),
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.16, 0.0, 0.0),
        ];
        let g = build_radius_graph(vec![8, 6, 8], positions, 1.5).unwrap();
        let rec = round_trip(&g).unwrap();
        assert!(rec.is_complete());
        assert!(rec.rmsd.unwrap() < 1e-12);
    }
}
