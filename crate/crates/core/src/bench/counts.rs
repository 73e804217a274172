//! Operation counts and the two-hop geometry pass used as the baseline.

use crate::geometry::{angle_between, dihedral, reference_excluding};
use crate::graph::{build_neighbor_table, Graph3D};

/// Directed triplets `(k, i, j)` with `j, k ∈ N_i`, `k ≠ j`:
/// `Σ_i deg(i)·(deg(i) − 1)`.
pub fn dmp_baseline_count(g: &Graph3D) -> u64 {
    (0..g.num_nodes())
        .map(|i| {
            let d = g.degree(i) as u64;
            d * d.saturating_sub(1)
        })
        .sum()
}

/// Directed edges, one tuple each.
pub fn comenet_count(g: &Graph3D) -> u64 {
    g.num_edges() as u64
}

/// Rotation angles needed to fix two rigid groups of `n1` and `n2` atoms
/// joined by one bond: one per edge in our scheme versus one per pair in
/// a pairwise torsion scheme.
pub fn torsion_count_comparison(n1: u64, n2: u64) -> (u64, u64) {
    (n1 + n2 + 1, n1 * n2)
}

/// The 2-hop geometry a directional message-passing layer computes: for
/// each edge `i → j` and each other neighbor `k` of `i`, the angle
/// `∠(p_ij, p_ik)` and the torsion of `k` about `i → j` against the
/// nearest-other-neighbor reference of `i`. Returns a checksum and the
/// number of triplets visited.
pub fn dmp_geometry_pass(g: &Graph3D) -> (f64, u64) {
    let nt = build_neighbor_table(g);
    let p = g.positions();
    let mut checksum = 0.0;
    let mut triplets = 0;
    for i in 0..g.num_nodes() {
        for &j in g.neighbors(i) {
            let pij = p[j] - p[i];
            let reference = reference_excluding(&nt, i, j);
            for &k in g.neighbors(i) {
                if k == j {
                    continue;
                }
                triplets += 1;
                checksum += g.distance(i, k);
                checksum += angle_between(&pij, &(p[k] - p[i])).unwrap_or(0.0);
                if let Some(r) = reference.filter(|&r| r != k) {
                    checksum += dihedral(&p[r], &p[i], &p[j], &p[k]).unwrap_or(0.0);
                }
            }
        }
    }
    (checksum, triplets)
}
