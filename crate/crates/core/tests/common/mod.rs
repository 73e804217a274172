#![allow(dead_code)]

use std::f64::consts::PI;

use comenet::graph::{Graph3D, Vec3};

/// Signed angle from `a` to `b` about `axis`, after projecting both onto the
/// plane normal to `axis`.
pub fn projected_angle(axis: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let n = axis.normalize();
    let pa = a - n * n.dot(a);
    let pb = b - n * n.dot(b);
    n.dot(&pa.cross(&pb)).atan2(pa.dot(&pb))
}

/// Dihedral `a–b–c–d` from the two projected bond vectors.
pub fn dihedral_oracle(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> f64 {
    projected_angle(&(c - b), &(a - b), &(d - c))
}

pub fn angle_oracle(u: &Vec3, v: &Vec3) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}

/// Neighbors of `i` sorted by distance, then index.
pub fn sorted_neighbors(g: &Graph3D, i: usize) -> Vec<usize> {
    let mut list = g.neighbors(i).to_vec();
    list.sort_by(|&a, &b| g.distance(i, a).total_cmp(&g.distance(i, b)).then(a.cmp(&b)));
    list
}

pub fn nearest_excluding(g: &Graph3D, i: usize, j: usize) -> Option<usize> {
    sorted_neighbors(g, i).into_iter().find(|&k| k != j)
}

/// Circular difference of two angles, in `[0, π]`.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

pub fn max_position_error(a: &[Vec3], b: &[Vec3]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

/// Bisection on a sign change of `f` in `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}
