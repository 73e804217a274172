use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::Vec3;

/// Norm and perpendicular-distance threshold below which a vector or plane
/// is treated as degenerate.
pub const EPS_VEC: f64 = 1e-10;

/// Unsigned angle between two vectors in `[0, π]`, computed as
/// `atan2(‖u×v‖, u·v)`.
pub fn angle_between(u: &Vec3, v: &Vec3) -> Result<f64> {
    if u.norm() <= EPS_VEC || v.norm() <= EPS_VEC {
        return Err(Error::ZeroVector { eps: EPS_VEC });
    }
    Ok(u.cross(v).norm().atan2(u.dot(v)))
}

/// Signed dihedral angle in `(−π, π]` between the half-plane through `a`
/// and the half-plane through `d`, both bounded by the axis `b → c`.
///
/// Positive values rotate the `a` half-plane onto the `d` half-plane
/// counter-clockwise when looking down the axis from `c` towards `b`, i.e.
/// by the right-hand rule about `b → c`. Cis is 0, trans is π.
pub fn dihedral(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> Result<f64> {
    let b1 = b - a;
    let b2 = c - b;
    let b3 = d - c;
    let axis = b2.norm();
    if axis <= EPS_VEC {
        return Err(Error::CollinearReference);
    }
    let n1 = b1.cross(&b2);
    let n2 = b2.cross(&b3);
    // |n| / |b2| is the distance of the outer point from the axis line
    if n1.norm() / axis <= EPS_VEC || n2.norm() / axis <= EPS_VEC {
        return Err(Error::CollinearReference);
    }
    let y = axis * b1.dot(&n2);
    let x = n1.dot(&n2);
    Ok(wrap_angle(y.atan2(x)))
}

/// Maps an angle onto `(−π, π]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Smallest absolute difference between two angles on the circle.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    #[test]
    fn orthogonal_and_parallel() {
        assert_eq!(angle_between(&v(1., 0., 0.), &v(0., 1., 0.)).unwrap(), FRAC_PI_2);
        assert_eq!(angle_between(&v(1., 0., 0.), &v(2., 0., 0.)).unwrap(), 0.0);
    }

    #[test]
    fn near_antiparallel_is_finite() {
        // exact: π − atan(1e-9) = π − 1e-9 to well below f64 resolution
        let theta = angle_between(&v(1., 0., 0.), &v(-1., 1e-9, 0.)).unwrap();
        assert!((theta - PI).abs() < 1e-8);
        assert!((theta - (PI - 1e-9)).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(matches!(
            angle_between(&v(0., 0., 0.), &v(1., 0., 0.)),
            Err(Error::ZeroVector { .. })
        ));
    }

    #[test]
    fn planar_cis_and_trans() {
        let b = v(0., 0., 0.);
        let c = v(0., 0., 1.5);
        let cis = dihedral(&v(1., 0., -0.3), &b, &c, &v(1., 0., 1.8)).unwrap();
        let trans = dihedral(&v(1., 0., -0.3), &b, &c, &v(-1., 0., 1.8)).unwrap();
        assert_eq!(cis, 0.0);
        assert_eq!(trans, PI);
    }

    #[test]
    fn sign_follows_right_hand_rule() {
        let b = v(0., 0., 0.);
        let c = v(0., 0., 1.);
        let d = dihedral(&v(1., 0., 0.), &b, &c, &v(0., 1., 1.)).unwrap();
        assert!((d - FRAC_PI_2).abs() < 1e-15);
        let d = dihedral(&v(1., 0., 0.), &b, &c, &v(0., -1., 1.)).unwrap();
        assert!((d + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn collinear_reference_rejected() {
        let b = v(0., 0., 0.);
        let c = v(0., 0., 1.);
        assert!(matches!(
            dihedral(&v(0., 0., -1.), &b, &c, &v(1., 0., 1.)),
            Err(Error::CollinearReference)
        ));
        assert!(matches!(
            dihedral(&v(1., 0., 0.), &b, &c, &v(0., 0., 2.)),
            Err(Error::CollinearReference)
        ));
    }

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_angle(-PI), PI);
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-15);
        assert!((angular_distance(PI - 1e-3, -PI + 1e-3) - 2e-3).abs() < 1e-12);
    }
}
