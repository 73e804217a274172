//! Spherical Bessel functions of the first kind and their positive roots.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerance on root abscissae.
pub const ROOT_TOLERANCE: f64 = 1e-13;

/// `j_l(x)` for `x ≥ 0`. Negative `x` uses the parity `j_l(−x) = (−1)^l j_l(x)`.
pub fn spherical_bessel_j(l: usize, x: f64) -> f64 {
    if x < 0.0 {
        let v = spherical_bessel_j(l, -x);
        return if l.is_multiple_of(2) { v } else { -v };
    }
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    if x <= 1.0 {
        return series(l, x);
    }
    match l {
        0 => j0(x),
        1 => j1(x),
        2 => (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x),
        _ if x > l as f64 => upward(l, x),
        _ => miller(l, x),
    }
}

fn j0(x: f64) -> f64 {
    x.sin() / x
}

fn j1(x: f64) -> f64 {
    x.sin() / (x * x) - x.cos() / x
}

/// Power series, accurate for small `x`.
fn series(l: usize, x: f64) -> f64 {
    // x^l / (2l+1)!!
    let mut lead = 1.0;
    for k in 1..=l {
        lead *= x / (2 * k + 1) as f64;
    }
    let q = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= q / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn upward(l: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (j0(x), j1(x));
    for k in 1..l {
        let next = (2 * k + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Miller's downward recurrence, normalised against `j_0` or `j_1`.
fn miller(l: usize, x: f64) -> f64 {
    let top = l.max(x as usize) + 30 + (40.0 * l.max(1) as f64).sqrt() as usize;
    let (mut above, mut cur) = (0.0, 1e-300);
    let mut at_l = 0.0;
    let mut at_1 = 0.0;
    for k in (1..=top).rev() {
        // cur = j_k (unnormalised), produce j_{k-1}
        let below = (2 * k + 1) as f64 / x * cur - above;
        above = cur;
        cur = below;
        if k == l {
            at_l = above;
        }
        if k == 1 {
            at_1 = above;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            at_l *= 1e-250;
            at_1 *= 1e-250;
        }
    }
    let at_0 = cur;
    let (t0, t1) = (j0(x), j1(x));
    if t0.abs() >= t1.abs() {
        at_l * (t0 / at_0)
    } else {
        at_l * (t1 / at_1)
    }
}

/// `d/dx j_l(x) = j_{l−1}(x) − (l+1)/x · j_l(x)` for `l ≥ 1`, `−j_1` for `l = 0`.
pub fn spherical_bessel_j_derivative(l: usize, x: f64) -> f64 {
    if l == 0 {
        return -spherical_bessel_j(1, x);
    }
    if x == 0.0 {
        return if l == 1 { 1.0 / 3.0 } else { 0.0 };
    }
    spherical_bessel_j(l - 1, x) - (l + 1) as f64 / x * spherical_bessel_j(l, x)
}

/// First `num_roots` positive roots of `j_l` for every `l < num_orders`,
/// as `table[l][n − 1] = β_{l n}`.
pub fn bessel_roots(num_orders: usize, num_roots: usize) -> Result<Vec<Vec<f64>>> {
    if num_orders == 0 || num_roots == 0 {
        return Err(Error::invalid("bessel_roots", "need at least one order and one root"));
    }
    let mut table = Vec::with_capacity(num_orders);
    // order l needs num_roots + (num_orders − 1 − l) roots so the next order
    // can be bracketed
    let extra = num_orders - 1;
    let mut previous: Vec<f64> = (1..=num_roots + extra).map(|n| n as f64 * PI).collect();
    table.push(previous[..num_roots].to_vec());
    for l in 1..num_orders {
        let count = num_roots + extra - l;
        let mut roots = Vec::with_capacity(count);
        for n in 0..count {
            let root = refine_root(l, previous[n], previous[n + 1])
                .ok_or(Error::ConvergenceFailure { order: l, index: n + 1 })?;
            roots.push(root);
        }
        table.push(roots[..num_roots].to_vec());
        previous = roots;
    }
    Ok(table)
}

/// Newton iteration safeguarded by bisection on a sign-changing bracket.
fn refine_root(l: usize, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut f_lo = spherical_bessel_j(l, lo);
    let f_hi = spherical_bessel_j(l, hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = spherical_bessel_j(l, x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        let slope = spherical_bessel_j_derivative(l, x);
        let newton = x - fx / slope;
        let next = if slope != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= ROOT_TOLERANCE * x.max(1.0) || hi - lo <= ROOT_TOLERANCE * x.max(1.0) {
            return Some(next);
        }
        x = next;
    }
    None
}
