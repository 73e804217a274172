//! Real spherical harmonics, orthonormal on the unit sphere, with the
//! Condon–Shortley phase carried by the associated Legendre functions.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Fully normalised associated Legendre values `P̄_l^m(cos θ)` for a fixed
/// `m ≥ 0` and all `l` in `m..=l_max`, such that
/// `∫ P̄_l^m(cos θ)² sin θ dθ · 2π = 1`.
fn legendre_column(m: usize, l_max: usize, cos_t: f64, sin_t: f64) -> Vec<f64> {
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        let k = k as f64;
        pmm *= -((2.0 * k + 1.0) / (2.0 * k)).sqrt() * sin_t;
    }
    let mut out = vec![pmm];
    if l_max == m {
        return out;
    }
    out.push((2.0 * m as f64 + 3.0).sqrt() * cos_t * pmm);
    let mf = m as f64;
    for l in m + 2..=l_max {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
        let k = out.len();
        out.push(a * (cos_t * out[k - 1] - b * out[k - 2]));
    }
    out
}

/// `Y_l^m(θ, φ)`; `m > 0` takes `cos(mφ)`, `m < 0` takes `sin(|m|φ)`.
pub fn real_spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Result<f64> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(Error::InvalidDegree { l, m });
    }
    let (sin_t, cos_t) = theta.sin_cos();
    let p = legendre_column(am, l, cos_t, sin_t)[l - am];
    Ok(match m {
        0 => p,
        m if m > 0 => SQRT_2 * p * (am as f64 * phi).cos(),
        _ => SQRT_2 * p * (am as f64 * phi).sin(),
    })
}

/// All `Y_l^m` for `l < num_degrees`, ordered by `l` then `m = −l..=l`.
pub fn real_spherical_harmonics(num_degrees: usize, theta: f64, phi: f64) -> Vec<f64> {
    let (sin_t, cos_t) = theta.sin_cos();
    let l_max = num_degrees.saturating_sub(1);
    let columns: Vec<Vec<f64>> = (0..num_degrees)
        .map(|m| legendre_column(m, l_max, cos_t, sin_t))
        .collect();
    let mut out = Vec::with_capacity(num_degrees * num_degrees);
    for l in 0..num_degrees {
        for m in -(l as i64)..=(l as i64) {
            let am = m.unsigned_abs() as usize;
            let p = columns[am][l - am];
            out.push(match m {
                0 => p,
                m if m > 0 => SQRT_2 * p * (am as f64 * phi).cos(),
                _ => SQRT_2 * p * (am as f64 * phi).sin(),
            });
        }
    }
    out
}

/// `Y_l^0` as a function of `cos θ` only.
pub fn zonal_harmonics(num_degrees: usize, cos_t: f64) -> Vec<f64> {
    if num_degrees == 0 {
        return Vec::new();
    }
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    legendre_column(0, num_degrees - 1, cos_t, sin_t)
}
