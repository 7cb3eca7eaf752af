//! k-medoids style initialization on the typed-discordance distance.

use ndarray::Array2;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::network::TypedNetwork;
use crate::scalar::Scalar;

/// Default cap on assign/recompute rounds.
pub const DEFAULT_INIT_ITERATIONS: usize = 50;

/// Number of third vertices `h` that both `i` and `j` point to (or that
/// point to both) with differing edge types.
pub fn init_distance(net: &TypedNetwork, i: usize, j: usize) -> usize {
    if i == j {
        return 0;
    }
    let mut d = 0;
    for h in 0..net.n_vertices() {
        let (xih, xjh) = (net.edge_type(i, h), net.edge_type(j, h));
        if xih != 0 && xjh != 0 && xih != xjh {
            d += 1;
        }
        let (xhi, xhj) = (net.edge_type(h, i), net.edge_type(h, j));
        if xhi != 0 && xhj != 0 && xhi != xhj {
            d += 1;
        }
    }
    d
}

/// Symmetric N×N matrix of [`init_distance`] values.
pub fn distance_matrix(net: &TypedNetwork) -> Array2<usize> {
    let n = net.n_vertices();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let v = init_distance(net, i, j);
            d[[i, j]] = v;
            d[[j, i]] = v;
        }
    }
    d
}

/// Hard cluster labels from k-medoids on a precomputed distance matrix.
///
/// Centers are drawn uniformly without replacement. A vertex joins the
/// nearest center (lowest cluster index on ties) and every center stays in
/// its own cluster; each medoid is then moved to the member with the
/// smallest total distance to its cluster (lowest vertex index on ties).
/// Stops when the centers no longer move or after `max_iterations` rounds.
/// With `k > n` only the first `n` clusters are populated.
pub fn kmedoid_labels(
    dist: &Array2<usize>,
    k: usize,
    seed: u64,
    max_iterations: usize,
) -> Vec<usize> {
    let n = dist.nrows();
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let used = k.min(n);
    let mut centers: Vec<usize> = sample(&mut rng, n, used).into_vec();
    let mut labels = assign(dist, &centers);
    for _ in 0..max_iterations {
        let mut next = centers.clone();
        for (cluster, center) in next.iter_mut().enumerate() {
            let members: Vec<usize> = (0..n).filter(|&v| labels[v] == cluster).collect();
            let cost = |m: usize| members.iter().map(|&v| dist[[m, v]]).sum::<usize>();
            // members is never empty: the center belongs to its own cluster
            *center = members
                .iter()
                .copied()
                .min_by_key(|&m| (cost(m), m))
                .unwrap_or(*center);
        }
        if next == centers {
            break;
        }
        centers = next;
        labels = assign(dist, &centers);
    }
    labels
}

fn assign(dist: &Array2<usize>, centers: &[usize]) -> Vec<usize> {
    (0..dist.nrows())
        .map(|v| {
            if let Some(own) = centers.iter().position(|&c| c == v) {
                return own;
            }
            let mut best = 0;
            for (cluster, &c) in centers.iter().enumerate() {
                if dist[[v, c]] < dist[[v, centers[best]]] {
                    best = cluster;
                }
            }
            best
        })
        .collect()
}

/// One-hot responsibilities from hard labels.
pub fn one_hot<T: Scalar>(labels: &[usize], k: usize) -> Array2<T> {
    let mut tau = Array2::zeros((labels.len(), k));
    for (i, &l) in labels.iter().enumerate() {
        tau[[i, l]] = T::one();
    }
    tau
}

/// Hard initial responsibilities `tau0` (N×K) for `net`.
pub fn kmedoid_init<T: Scalar>(net: &TypedNetwork, k: usize, seed: u64) -> Array2<T> {
    let dist = distance_matrix(net);
    one_hot(&kmedoid_labels(&dist, k, seed, DEFAULT_INIT_ITERATIONS), k)
}
