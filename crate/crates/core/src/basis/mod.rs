//! Basis expansions of the edge tuples.
//!
//! `TBF` expands `(d, θ, φ)` as
//! `j_ℓ(β_{ℓn} d / c) · Y_ℓ^m(θ, φ)` and `SBF` expands
//! `(d, τ)` as `j_ℓ(β_{ℓn} d / c) · Y_ℓ^0(τ)`, where `β_{ℓn}` is the n-th
//! positive root of `j_ℓ` and `c` the cutoff. Every entry vanishes at
//! `d = c`.
//!
//! `Y_ℓ^0` depends on its polar argument through the cosine only, so SBF is
//! even in `τ`; the signed `τ` stays available on the tuple itself.

mod bessel;
mod harmonics;

use std::fmt::Write as _;

use serde::Serialize;

pub use bessel::{bessel_roots, spherical_bessel_j, spherical_bessel_j_derivative, ROOT_TOLERANCE};
pub use harmonics::{real_spherical_harmonic, real_spherical_harmonics, zonal_harmonics};

use crate::error::{Error, Result};
use crate::geometry::{EdgeTuple, TupleSet};

pub const DEFAULT_NUM_RADIAL: usize = 12;
pub const DEFAULT_NUM_SPHERICAL: usize = 3;

/// Cutoff, basis sizes and the precomputed root table.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisConfig {
    cutoff: f64,
    num_radial: usize,
    num_spherical: usize,
    roots: Vec<Vec<f64>>,
}

impl BasisConfig {
    pub fn new(cutoff: f64, num_radial: usize, num_spherical: usize) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::invalid(
                "cutoff",
                format!("must be positive and finite, got {cutoff}"),
            ));
        }
        if num_radial == 0 {
            return Err(Error::invalid("num_radial", "must be at least 1"));
        }
        if num_spherical == 0 {
            return Err(Error::invalid("num_spherical", "must be at least 1"));
        }
        Ok(Self {
            cutoff,
            num_radial,
            num_spherical,
            roots: bessel_roots(num_spherical, num_radial)?,
        })
    }

    /// `N = 12`, `L = 3`.
    pub fn with_cutoff(cutoff: f64) -> Result<Self> {
        Self::new(cutoff, DEFAULT_NUM_RADIAL, DEFAULT_NUM_SPHERICAL)
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn num_radial(&self) -> usize {
        self.num_radial
    }

    pub fn num_spherical(&self) -> usize {
        self.num_spherical
    }

    /// `roots()[ℓ][n − 1] = β_{ℓn}`.
    pub fn roots(&self) -> &[Vec<f64>] {
        &self.roots
    }

    pub fn tbf_len(&self) -> usize {
        self.num_spherical * self.num_spherical * self.num_radial
    }

    pub fn sbf_len(&self) -> usize {
        self.num_spherical * self.num_radial
    }

    /// `radial[ℓ][n] = j_ℓ(β_{ℓn} d / c)`.
    fn radial(&self, d: f64) -> Result<Vec<Vec<f64>>> {
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::invalid("d", format!("must be finite and non-negative, got {d}")));
        }
        if d > self.cutoff {
            return Err(Error::OutOfCutoff {
                distance: d,
                cutoff: self.cutoff,
            });
        }
        let r = d / self.cutoff;
        Ok(self
            .roots
            .iter()
            .enumerate()
            .map(|(l, betas)| betas.iter().map(|b| spherical_bessel_j(l, b * r)).collect())
            .collect())
    }

    /// Entries ordered by `ℓ`, then `m = −ℓ..=ℓ`, then `n`.
    pub fn tbf(&self, d: f64, theta: f64, phi: f64) -> Result<Vec<f64>> {
        let radial = self.radial(d)?;
        let ylm = real_spherical_harmonics(self.num_spherical, theta, phi);
        let mut out = Vec::with_capacity(self.tbf_len());
        let mut k = 0;
        for (l, row) in radial.iter().enumerate() {
            for _ in 0..2 * l + 1 {
                out.extend(row.iter().map(|j| j * ylm[k]));
                k += 1;
            }
        }
        Ok(out)
    }

    /// Entries ordered by `ℓ`, then `n`.
    pub fn sbf(&self, d: f64, tau: f64) -> Result<Vec<f64>> {
        let radial = self.radial(d)?;
        let y = zonal_harmonics(self.num_spherical, tau.cos());
        Ok(radial
            .iter()
            .zip(&y)
            .flat_map(|(row, yl)| row.iter().map(move |j| j * yl))
            .collect())
    }

    pub fn features(&self, t: &EdgeTuple) -> Result<BasisFeatures> {
        Ok(BasisFeatures {
            i: t.i,
            j: t.j,
            tau: t.tau,
            tbf: self.tbf(t.d, t.theta, t.phi)?,
            sbf: self.sbf(t.d, t.tau)?,
        })
    }

    /// Features for every tuple, in tuple order.
    pub fn features_for(&self, ts: &TupleSet) -> Result<Vec<BasisFeatures>> {
        ts.iter().map(|t| self.features(t)).collect()
    }

    /// CSV `l,n,beta` of the root table.
    pub fn roots_csv(&self) -> String {
        let mut out = String::from("l,n,beta\n");
        for (l, betas) in self.roots.iter().enumerate() {
            for (n, b) in betas.iter().enumerate() {
                let _ = writeln!(out, "{l},{},{b:.17e}", n + 1);
            }
        }
        out
    }
}

/// Basis vectors of one directed edge. The signed `τ` is carried along
/// since SBF only sees `cos τ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisFeatures {
    pub i: usize,
    pub j: usize,
    pub tau: f64,
    pub tbf: Vec<f64>,
    pub sbf: Vec<f64>,
}
