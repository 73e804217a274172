use comenet::basis::BasisConfig;
use comenet::fixtures::{butane_conformer, random_connected_graph, FIXTURES};
use comenet::graph::{apply_se3, random_se3};
use comenet::mpnet::{MiniNet, MiniNetConfig, NodeState};
use comenet::{transform, Error};
use nalgebra::{DMatrix, DVector};

fn net(use_tau: bool) -> MiniNet {
    MiniNet::new(MiniNetConfig {
        num_layers: 3,
        hidden: 16,
        num_radial: 6,
        num_spherical: 3,
        seed: 17,
        use_tau,
    })
    .unwrap()
}

fn matvec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)] * v[c]).sum())
        .collect()
}

#[test]
fn layer_matches_naive_loops() {
    let net = net(true);
    let g = random_connected_graph(12, 4.0, 3).unwrap();
    let edges = net.edge_features(&g).unwrap();
    let state = net.embed(g.species()).unwrap();
    let next = net.interaction(&state, &edges).unwrap();
    let w = net.layer(0).unwrap();
    let h = 16;
    for i in 0..g.num_nodes() {
        let mut local = vec![0.0; h];
        let mut global = vec![0.0; h];
        for e in edges.iter().filter(|e| e.i == i) {
            let vj: Vec<f64> = state.features[e.j].iter().copied().collect();
            let ul = matvec(&w.local_msg, &vj);
            let ug = matvec(&w.global_msg, &vj);
            let t = matvec(&w.tbf_proj, &e.tbf);
            let s = matvec(&w.sbf_proj, &e.sbf);
            for c in 0..h {
                local[c] += t[c] * ul[c].tanh();
                global[c] += s[c] * ug[c].tanh();
            }
        }
        let cat: Vec<f64> = local.into_iter().chain(global).collect();
        let hidden: Vec<f64> = matvec(&w.down, &cat).into_iter().map(f64::tanh).collect();
        let upd = matvec(&w.update, &hidden);
        for c in 0..h {
            let expected = state.features[i][c] + upd[c];
            assert!((next.features[i][c] - expected).abs() < 1e-12, "node {i} channel {c}");
        }
    }
}

#[test]
fn output_is_invariant_to_rigid_motion() {
    let net = net(true);
    for (k, f) in FIXTURES.iter().enumerate() {
        let g = f.graph();
        let a = net.forward(&g).unwrap();
        let b = net.forward(&apply_se3(&g, &random_se3(k as u64)).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-9, "{}: {a} vs {b}", f.name);
    }
}

#[test]
fn output_is_invariant_to_relabelling() {
    let net = net(true);
    let g = random_connected_graph(20, 5.0, 4).unwrap();
    let perm: Vec<usize> = (0..20).map(|i| (i * 7 + 3) % 20).collect();
    let a = net.forward(&g).unwrap();
    let b = net.forward(&g.permuted(&perm).unwrap()).unwrap();
    assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
}

#[test]
fn rotation_angles_separate_conformers() {
    let with_tau = net(true);
    let without = net(false);
    let a = butane_conformer(60.0);
    let b = butane_conformer(180.0);
    assert!((with_tau.forward(&a).unwrap() - with_tau.forward(&b).unwrap()).abs() > 1e-6);
    assert!((without.forward(&a).unwrap() - without.forward(&b).unwrap()).abs() < 1e-9);
}

#[test]
fn deterministic_per_seed() {
    let g = FIXTURES[0].graph();
    assert_eq!(net(true).forward(&g).unwrap(), net(true).forward(&g).unwrap());
    let other = MiniNet::new(MiniNetConfig {
        seed: 18,
        ..*net(true).config()
    })
    .unwrap();
    assert_ne!(net(true).forward(&g).unwrap(), other.forward(&g).unwrap());
}

#[test]
fn shape_errors() {
    let net = net(true);
    assert!(matches!(net.embed(&[0]), Err(Error::UnknownSpecies(0))));
    let g = FIXTURES[7].graph();
    let ts = transform(&g).unwrap();
    let wrong = BasisConfig::new(g.cutoff(), 3, 2).unwrap().features_for(&ts).unwrap();
    let state = net.embed(g.species()).unwrap();
    assert!(matches!(net.interaction(&state, &wrong), Err(Error::ShapeMismatch(_))));
    let narrow = NodeState {
        layer: 0,
        features: vec![DVector::zeros(3); g.num_nodes()],
    };
    let right = net.edge_features(&g).unwrap();
    assert!(matches!(net.interaction(&narrow, &right), Err(Error::ShapeMismatch(_))));
}
