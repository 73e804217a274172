//! Inverses of the forward angle computations: each places one new node
//! from a distance, a polar angle about an axis through an already placed
//! node, and an azimuth measured from a placed reference half-plane.

use crate::error::{Error, Result};
use crate::geometry::EPS_VEC;
use crate::graph::Vec3;

/// Places `j` at distance `d` from `origin`, at polar angle `polar` from the
/// axis `origin → axis_end`, rotated by `azimuth` (right-hand rule about the
/// axis) from the half-plane containing `reference`.
///
/// Returns `None` if the axis or the reference half-plane is degenerate.
fn place_about_axis(
    origin: &Vec3,
    axis_end: &Vec3,
    reference: &Vec3,
    d: f64,
    polar: f64,
    azimuth: f64,
) -> Option<Vec3> {
    let axis = (axis_end - origin).try_normalize(EPS_VEC)?;
    let r = reference - origin;
    let e1 = (r - axis * axis.dot(&r)).try_normalize(EPS_VEC)?;
    let e2 = axis.cross(&e1);
    let radial = polar.sin();
    Some(origin + d * (polar.cos() * axis + radial * (azimuth.cos() * e1 + azimuth.sin() * e2)))
}

/// Local-frame placement: `j` at distance `d` from `i`, angle `theta` from
/// `i → f`, and signed azimuth `phi` about `i → f` from the half-plane
/// through `s`.
pub fn place_case1(i: &Vec3, f: &Vec3, s: &Vec3, d: f64, theta: f64, phi: f64) -> Result<Vec3> {
    if (f - i).norm() <= EPS_VEC {
        return Err(Error::DegenerateFrame("reference f coincides with i"));
    }
    place_about_axis(i, f, s, d, theta, phi)
        .ok_or(Error::DegenerateFrame("reference s is collinear with the i → f axis"))
}

/// Chain placement: `j` at distance `d` from `i`, angle `theta` from
/// `i → f`, with the dihedral `r–f–i–j` equal to `tau`. Here `r` is the
/// next-hop reference of `f`, so `tau` is the rotation angle of edge
/// `f → i` when `j` is the reference of `i` excluding `f`.
pub fn place_case2(i: &Vec3, f: &Vec3, r: &Vec3, d: f64, theta: f64, tau: f64) -> Result<Vec3> {
    // rotation r → j about f → i is τ, i.e. −τ about i → f
    place_about_axis(i, f, r, d, theta, -tau).ok_or(Error::DegenerateChain)
}

/// `j` on the line through `i` and `f`; valid when `theta` is 0 or π.
pub(crate) fn place_axial(i: &Vec3, f: &Vec3, d: f64, theta: f64) -> Option<Vec3> {
    let axis = (f - i).try_normalize(EPS_VEC)?;
    Some(i + axis * (d * theta.cos()))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;
    use crate::geometry::{angle_between, dihedral};

    #[test]
    fn axis_aligned_frame() {
        let i = Vec3::zeros();
        let f = Vec3::new(0.0, 0.0, 1.3);
        let s = Vec3::new(2.0, 0.0, 0.4);
        let j = place_case1(&i, &f, &s, 1.0, FRAC_PI_2, 0.0).unwrap();
        assert!((j - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        let j = place_case1(&i, &f, &s, 1.0, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((j - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn case1_inverts_forward_angles() {
        let i = Vec3::new(0.3, -0.2, 0.1);
        let f = Vec3::new(0.9, 0.5, -0.4);
        let s = Vec3::new(-0.7, 0.2, 0.8);
        let (d, theta, phi) = (1.37, 1.1, -2.3);
        let j = place_case1(&i, &f, &s, d, theta, phi).unwrap();
        assert!(((j - i).norm() - d).abs() < 1e-12);
        assert!((angle_between(&(f - i), &(j - i)).unwrap() - theta).abs() < 1e-12);
        assert!((dihedral(&s, &i, &f, &j).unwrap() - phi).abs() < 1e-12);
    }

    #[test]
    fn case2_planar_cis_and_trans() {
        let r = Vec3::new(1.0, 0.0, -1.0);
        let f = Vec3::new(0.0, 0.0, 0.0);
        let i = Vec3::new(0.0, 0.0, 1.5);
        let cis = place_case2(&i, &f, &r, 1.1, 2.0, 0.0).unwrap();
        assert!(cis.y.abs() < 1e-15 && cis.x > 0.0);
        let trans = place_case2(&i, &f, &r, 1.1, 2.0, PI).unwrap();
        assert!(trans.y.abs() < 1e-15 && trans.x < 0.0);
        assert!((dihedral(&r, &f, &i, &cis).unwrap()).abs() < 1e-12);
        assert!((dihedral(&r, &f, &i, &trans).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        let i = Vec3::zeros();
        let f = Vec3::new(0.0, 0.0, 1.0);
        let on_axis = Vec3::new(0.0, 0.0, -2.0);
        assert!(matches!(
            place_case1(&i, &f, &on_axis, 1.0, 1.0, 0.0),
            Err(Error::DegenerateFrame(_))
        ));
        assert!(matches!(
            place_case1(&i, &i, &on_axis, 1.0, 1.0, 0.0),
            Err(Error::DegenerateFrame(_))
        ));
        assert!(matches!(
            place_case2(&i, &f, &on_axis, 1.0, 1.0, 0.0),
            Err(Error::DegenerateChain)
        ));
    }

    #[test]
    fn axial_placement() {
        let i = Vec3::zeros();
        let f = Vec3::new(0.0, 2.0, 0.0);
        assert_eq!(place_axial(&i, &f, 1.5, PI).unwrap(), Vec3::new(0.0, -1.5, 0.0));
    }
}
