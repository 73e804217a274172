//! Optimal rigid superposition (Kabsch).

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::graph::Vec3;

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport {
    /// Maps `mobile` onto `target` as `R p + t`.
    pub rotation: Matrix3<f64>,
    pub translation: Vec3,
    pub rmsd: f64,
    /// True when the optimal orthogonal map is improper (only possible with
    /// `allow_reflection`).
    pub reflection_used: bool,
}

impl AlignmentReport {
    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn rotation_rows(&self) -> [[f64; 3]; 3] {
        let r = &self.rotation;
        [
            [r[(0, 0)], r[(0, 1)], r[(0, 2)]],
            [r[(1, 0)], r[(1, 1)], r[(1, 2)]],
            [r[(2, 0)], r[(2, 1)], r[(2, 2)]],
        ]
    }
}

/// Least-squares superposition of `mobile` onto `target`. Without
/// `allow_reflection` the map is a proper rotation plus translation.
pub fn align(target: &[Vec3], mobile: &[Vec3], allow_reflection: bool) -> Result<AlignmentReport> {
    if target.len() != mobile.len() {
        return Err(Error::LengthMismatch {
            left: target.len(),
            right: mobile.len(),
        });
    }
    if target.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let ct = centroid(target);
    let cm = centroid(mobile);
    let mut h = Matrix3::zeros();
    for (t, m) in target.iter().zip(mobile) {
        h += (m - cm) * (t - ct).transpose();
    }
    let svd = h.svd(true, true);
    let u = svd.u.expect("requested U");
    let v = svd.v_t.expect("requested Vt").transpose();
    let mut rotation = v * u.transpose();
    let improper = rotation.determinant() < 0.0;
    if improper && !allow_reflection {
        let d = Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        rotation = v * d * u.transpose();
    }
    let translation = ct - rotation * cm;
    let report = AlignmentReport {
        rotation,
        translation,
        rmsd: 0.0,
        reflection_used: improper && allow_reflection,
    };
    let rmsd = rmsd_after(&report, target, mobile);
    Ok(AlignmentReport { rmsd, ..report })
}

fn centroid(points: &[Vec3]) -> Vec3 {
    points.iter().sum::<Vec3>() / points.len() as f64
}

fn rmsd_after(report: &AlignmentReport, target: &[Vec3], mobile: &[Vec3]) -> f64 {
    let sum: f64 = target
        .iter()
        .zip(mobile)
        .map(|(t, m)| (report.apply(m) - t).norm_squared())
        .sum();
    (sum / target.len() as f64).sqrt()
}
