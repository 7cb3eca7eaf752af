#![allow(dead_code)]

use ndarray::{Array2, Array3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsm::{sample_network, PriorHyperparams, RsmParams, TypedNetwork};
use statrs::function::gamma::digamma;

/// Random instance for the property suites.
pub struct Instance {
    pub net: TypedNetwork,
    pub k: usize,
    pub priors: PriorHyperparams<f64>,
    pub tau: Array2<f64>,
}

fn random_simplex(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// RSM network with random parameters and sizes drawn from the given
/// ranges.
pub fn random_rsm_network(
    rng: &mut ChaCha8Rng,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
) -> TypedNetwork {
    let alpha = Array2::from_shape_vec(
        (s, k),
        (0..s).flat_map(|_| random_simplex(rng, k)).collect(),
    )
    .unwrap();
    let gamma = Array2::from_shape_fn((s, s), |_| rng.random_range(0.05..0.6));
    let pi = Array3::from_shape_vec(
        (k, k, c),
        (0..k * k).flat_map(|_| random_simplex(rng, c)).collect(),
    )
    .unwrap();
    let params = RsmParams::new(alpha, gamma, pi).unwrap();
    let subgraph_of: Vec<usize> = (0..n).map(|i| i % s).collect();
    sample_network(&params, &subgraph_of, rng.random())
        .unwrap()
        .network
}

/// Positive hyperparameters away from the usual constants.
pub fn random_priors(rng: &mut ChaCha8Rng, s: usize, k: usize, c: usize) -> PriorHyperparams<f64> {
    let mut draw = || rng.random_range(0.2..3.0);
    let chi0 = Array2::from_shape_fn((s, k), |_| draw());
    let a0 = Array2::from_shape_fn((s, s), |_| draw());
    let b0 = Array2::from_shape_fn((s, s), |_| draw());
    let xi0 = Array3::from_shape_fn((k, k, c), |_| draw());
    PriorHyperparams::new(chi0, a0, b0, xi0).unwrap()
}

pub fn random_tau(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Array2<f64> {
    Array2::from_shape_vec(
        (n, k),
        (0..n).flat_map(|_| random_simplex(rng, k)).collect(),
    )
    .unwrap()
}

/// Small random instance: N in 3..=12, S in 1..=3, K in 1..=4, C in 1..=3.
pub fn small_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=12);
    let s = rng.random_range(1..=3);
    let k = rng.random_range(1..=4);
    let c = rng.random_range(1..=3);
    let net = random_rsm_network(&mut rng, n, s, k, c);
    let priors = random_priors(&mut rng, s, k, c);
    let tau = random_tau(&mut rng, n, k);
    Instance {
        net,
        k,
        priors,
        tau,
    }
}

/// Transcription of the Beta posterior update, looping over the full
/// adjacency matrix.
pub fn reference_gamma(
    net: &TypedNetwork,
    priors: &PriorHyperparams<f64>,
) -> (Array2<f64>, Array2<f64>) {
    let n = net.n_vertices();
    let x = net.edge_types();
    let sub = net.subgraph_labels();
    let mut a = priors.a0.clone();
    let mut b = priors.b0.clone();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let present = if x[[i, j]] > 0 { 1.0 } else { 0.0 };
            a[[sub[i], sub[j]]] += present;
            b[[sub[i], sub[j]]] += 1.0 - present;
        }
    }
    (a, b)
}

pub fn reference_alpha(
    net: &TypedNetwork,
    tau: &Array2<f64>,
    priors: &PriorHyperparams<f64>,
) -> Array2<f64> {
    let mut chi = priors.chi0.clone();
    for i in 0..net.n_vertices() {
        for k in 0..tau.ncols() {
            chi[[net.subgraph_labels()[i], k]] += tau[[i, k]];
        }
    }
    chi
}

pub fn reference_pi(
    net: &TypedNetwork,
    tau: &Array2<f64>,
    priors: &PriorHyperparams<f64>,
) -> Array3<f64> {
    let n = net.n_vertices();
    let kk = tau.ncols();
    let x = net.edge_types();
    let mut xi = priors.xi0.clone();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..kk {
                for l in 0..kk {
                    for c in 0..net.n_types() {
                        if x[[i, j]] as usize == c + 1 {
                            xi[[k, l, c]] += tau[[i, k]] * tau[[j, l]];
                        }
                    }
                }
            }
        }
    }
    xi
}

/// Transcription of the responsibility update from posterior
/// hyperparameters `chi`, `xi` and the previous responsibilities.
pub fn reference_tau(
    net: &TypedNetwork,
    tau: &Array2<f64>,
    chi: &Array2<f64>,
    xi: &Array3<f64>,
) -> Array2<f64> {
    let n = net.n_vertices();
    let kk = tau.ncols();
    let cc = net.n_types();
    let x = net.edge_types();
    let sub = net.subgraph_labels();
    let xi_total = |k: usize, l: usize| (0..cc).map(|c| xi[[k, l, c]]).sum::<f64>();
    let mut out = Array2::zeros((n, kk));
    for i in 0..n {
        let chi_total: f64 = (0..kk).map(|l| chi[[sub[i], l]]).sum();
        let mut log_t = vec![0.0; kk];
        for (k, lt) in log_t.iter_mut().enumerate() {
            *lt = digamma(chi[[sub[i], k]]) - digamma(chi_total);
            for j in 0..n {
                if j == i {
                    continue;
                }
                for l in 0..kk {
                    for c in 0..cc {
                        if x[[i, j]] as usize == c + 1 {
                            *lt += tau[[j, l]] * (digamma(xi[[k, l, c]]) - digamma(xi_total(k, l)));
                        }
                        if x[[j, i]] as usize == c + 1 {
                            *lt += tau[[j, l]] * (digamma(xi[[l, k, c]]) - digamma(xi_total(l, k)));
                        }
                    }
                }
            }
        }
        let max = log_t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let total: f64 = log_t.iter().map(|v| (v - max).exp()).sum();
        for k in 0..kk {
            out[[i, k]] = (log_t[k] - max).exp() / total;
        }
    }
    out
}

/// Largest elementwise relative error of `got` against `want`.
pub fn max_rel_err<'a>(
    got: impl IntoIterator<Item = &'a f64>,
    want: impl IntoIterator<Item = &'a f64>,
) -> f64 {
    got.into_iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs() / w.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

/// ARI from explicit pair counting over all unordered vertex pairs.
pub fn pair_counting_ari(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut pairs) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let sa = a[i] == a[j];
            let sb = b[i] == b[j];
            pairs += 1.0;
            if sa && sb {
                both += 1.0;
            }
            if sa {
                only_a += 1.0;
            }
            if sb {
                only_b += 1.0;
            }
        }
    }
    let expected = only_a * only_b / pairs;
    let max = 0.5 * (only_a + only_b);
    if max == expected {
        return 1.0;
    }
    (both - expected) / (max - expected)
}
