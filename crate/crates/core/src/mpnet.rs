//! A small message-passing network with fixed, seeded weights.
//!
//! Each interaction layer computes, for every node `i`,
//!
//! ```text
//! local_i  = Σ_j (A_t · tbf_ij) ⊙ tanh(U  v_j)
//! global_i = Σ_j (A_s · sbf_ij) ⊙ tanh(U' v_j)
//! v'_i     = v_i + W_g tanh(W_down [local_i; global_i])
//! ```
//!
//! with sums taken in ascending `j`. The readout is a two-layer per-node
//! projection to a scalar followed by a sum over nodes.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::{BasisConfig, BasisFeatures, DEFAULT_NUM_RADIAL, DEFAULT_NUM_SPHERICAL};
use crate::error::{Error, Result};
use crate::geometry::transform;
use crate::graph::Graph3D;
use crate::io::xyz::MAX_ATOMIC_NUMBER;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiniNetConfig {
    pub num_layers: usize,
    pub hidden: usize,
    pub num_radial: usize,
    pub num_spherical: usize,
    pub seed: u64,
    /// When false every `τ` is replaced by 0 before the basis expansion.
    pub use_tau: bool,
}

impl Default for MiniNetConfig {
    fn default() -> Self {
        Self {
            num_layers: 4,
            hidden: 64,
            num_radial: DEFAULT_NUM_RADIAL,
            num_spherical: DEFAULT_NUM_SPHERICAL,
            seed: 0,
            use_tau: true,
        }
    }
}

/// Node features after `layer` interaction layers, one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub layer: usize,
    pub features: Vec<DVector<f64>>,
}

impl NodeState {
    pub fn num_nodes(&self) -> usize {
        self.features.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerWeights {
    pub tbf_proj: DMatrix<f64>,
    pub sbf_proj: DMatrix<f64>,
    pub local_msg: DMatrix<f64>,
    pub global_msg: DMatrix<f64>,
    pub down: DMatrix<f64>,
    pub update: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiniNet {
    cfg: MiniNetConfig,
    embedding: Vec<DVector<f64>>,
    layers: Vec<LayerWeights>,
    head_hidden: DMatrix<f64>,
    head_bias: DVector<f64>,
    head_out: DVector<f64>,
}

/// Entries with unit variance, scaled by `1/√fan_in`.
fn seeded_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    let scale = 3f64.sqrt() / (cols as f64).sqrt();
    DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0) * scale)
}

impl MiniNet {
    pub fn new(cfg: MiniNetConfig) -> Result<Self> {
        if cfg.hidden == 0 {
            return Err(Error::invalid("hidden", "must be at least 1"));
        }
        if cfg.num_radial == 0 || cfg.num_spherical == 0 {
            return Err(Error::invalid(
                "basis",
                "num_radial and num_spherical must be at least 1",
            ));
        }
        let h = cfg.hidden;
        let tbf_len = cfg.num_spherical * cfg.num_spherical * cfg.num_radial;
        let sbf_len = cfg.num_spherical * cfg.num_radial;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let embedding = (0..MAX_ATOMIC_NUMBER)
            .map(|_| DVector::from_fn(h, |_, _| rng.gen_range(-1.0..1.0)))
            .collect();
        let layers = (0..cfg.num_layers)
            .map(|_| LayerWeights {
                tbf_proj: seeded_matrix(&mut rng, h, tbf_len),
                sbf_proj: seeded_matrix(&mut rng, h, sbf_len),
                local_msg: seeded_matrix(&mut rng, h, h),
                global_msg: seeded_matrix(&mut rng, h, h),
                down: seeded_matrix(&mut rng, h, 2 * h),
                update: seeded_matrix(&mut rng, h, h),
            })
            .collect();
        let head_hidden = seeded_matrix(&mut rng, h, h);
        let head_bias = DVector::from_fn(h, |_, _| rng.gen_range(-0.1..0.1));
        let head_out = seeded_matrix(&mut rng, h, 1).column(0).into_owned() / (h as f64).sqrt();
        Ok(Self {
            cfg,
            embedding,
            layers,
            head_hidden,
            head_bias,
            head_out,
        })
    }

    pub fn config(&self) -> &MiniNetConfig {
        &self.cfg
    }

    pub fn layer(&self, k: usize) -> Option<&LayerWeights> {
        self.layers.get(k)
    }

    /// Initial node features, one seeded row per atomic number.
    pub fn embed(&self, species: &[u32]) -> Result<NodeState> {
        let features = species
            .iter()
            .map(|&z| {
                (1..=MAX_ATOMIC_NUMBER)
                    .contains(&z)
                    .then(|| self.embedding[z as usize - 1].clone())
                    .ok_or(Error::UnknownSpecies(z))
            })
            .collect::<Result<_>>()?;
        Ok(NodeState { layer: 0, features })
    }

    /// Applies interaction layer `state.layer`. `edges` holds one entry per
    /// directed edge `i → j`, in any order; nodes without edges receive a
    /// zero message.
    pub fn interaction(&self, state: &NodeState, edges: &[BasisFeatures]) -> Result<NodeState> {
        let w = self.layers.get(state.layer).ok_or_else(|| {
            Error::ShapeMismatch(format!(
                "network has {} layers, state is at {}",
                self.layers.len(),
                state.layer
            ))
        })?;
        let n = state.num_nodes();
        let h = self.cfg.hidden;
        if let Some(bad) = state.features.iter().find(|v| v.len() != h) {
            return Err(Error::ShapeMismatch(format!(
                "node width {} but hidden is {h}",
                bad.len()
            )));
        }
        let mut incoming: Vec<Vec<&BasisFeatures>> = vec![Vec::new(); n];
        for e in edges {
            if e.i >= n || e.j >= n {
                return Err(Error::ShapeMismatch(format!(
                    "edge ({}, {}) outside {n} nodes",
                    e.i, e.j
                )));
            }
            if e.tbf.len() != w.tbf_proj.ncols() || e.sbf.len() != w.sbf_proj.ncols() {
                return Err(Error::ShapeMismatch(format!(
                    "basis widths {}/{} but layer expects {}/{}",
                    e.tbf.len(),
                    e.sbf.len(),
                    w.tbf_proj.ncols(),
                    w.sbf_proj.ncols()
                )));
            }
            incoming[e.i].push(e);
        }
        let local_src: Vec<DVector<f64>> = state
            .features
            .iter()
            .map(|v| (&w.local_msg * v).map(f64::tanh))
            .collect();
        let global_src: Vec<DVector<f64>> = state
            .features
            .iter()
            .map(|v| (&w.global_msg * v).map(f64::tanh))
            .collect();
        let features = incoming
            .into_par_iter()
            .enumerate()
            .map(|(i, mut list)| {
                list.sort_by_key(|e| e.j);
                let mut local = DVector::zeros(h);
                let mut global = DVector::zeros(h);
                for e in list {
                    let t = &w.tbf_proj * DVector::from_column_slice(&e.tbf);
                    let s = &w.sbf_proj * DVector::from_column_slice(&e.sbf);
                    local += t.component_mul(&local_src[e.j]);
                    global += s.component_mul(&global_src[e.j]);
                }
                let cat = DVector::from_iterator(2 * h, local.iter().chain(global.iter()).copied());
                let hidden = (&w.down * cat).map(f64::tanh);
                &state.features[i] + &w.update * hidden
            })
            .collect();
        Ok(NodeState {
            layer: state.layer + 1,
            features,
        })
    }

    /// Per-node scalar contributions of the readout.
    pub fn readout(&self, state: &NodeState) -> Vec<f64> {
        state
            .features
            .iter()
            .map(|v| {
                let hidden = (&self.head_hidden * v + &self.head_bias).map(f64::tanh);
                self.head_out.dot(&hidden)
            })
            .collect()
    }

    /// Basis features of `g` under this network's settings.
    pub fn edge_features(&self, g: &Graph3D) -> Result<Vec<BasisFeatures>> {
        let mut ts = transform(g)?;
        if !self.cfg.use_tau {
            ts = ts.without_tau();
        }
        BasisConfig::new(g.cutoff(), self.cfg.num_radial, self.cfg.num_spherical)?.features_for(&ts)
    }

    /// Node states after every layer.
    pub fn node_states(&self, g: &Graph3D) -> Result<NodeState> {
        g.ensure_connected()?;
        let edges = self.edge_features(g)?;
        let mut state = self.embed(g.species())?;
        for _ in 0..self.layers.len() {
            state = self.interaction(&state, &edges)?;
        }
        Ok(state)
    }

    /// Scalar prediction: sum of the per-node readout.
    pub fn forward(&self, g: &Graph3D) -> Result<f64> {
        let state = self.node_states(g)?;
        Ok(self.readout(&state).iter().sum())
    }
}
