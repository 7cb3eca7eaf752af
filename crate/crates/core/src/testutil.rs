use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::TypedNetwork;

/// Uniformly random network: each ordered pair present with `density`,
/// types uniform in 1..=C, subgraph labels uniform in 0..S.
pub fn random_network(n: usize, s: usize, c: usize, density: f64, seed: u64) -> TypedNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..s)).collect();
    let x = Array2::from_shape_fn((n, n), |(i, j)| {
        if i != j && rng.random::<f64>() < density {
            rng.random_range(1..=c as u32)
        } else {
            0
        }
    });
    TypedNetwork::new(c, s, x, labels).unwrap()
}

/// Random row-stochastic responsibilities.
pub fn random_tau(n: usize, k: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tau = Array2::from_shape_fn((n, k), |_| rng.random::<f64>() + 1e-3);
    for mut row in tau.outer_iter_mut() {
        let total: f64 = row.sum();
        row.mapv_inplace(|v| v / total);
    }
    tau
}

/// Complete directed graph on two blocks of `m` vertices: type 1 inside
/// the first block, type 2 inside the second, type 3 across.
pub fn two_block_network(m: usize) -> TypedNetwork {
    let n = 2 * m;
    let x = Array2::from_shape_fn((n, n), |(i, j)| match (i < m, j < m) {
        _ if i == j => 0,
        (true, true) => 1,
        (false, false) => 2,
        _ => 3,
    });
    TypedNetwork::new(3, 1, x, vec![0; n]).unwrap()
}
