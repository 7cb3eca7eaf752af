//! Closed-form VBEM updates.
//!
//! The M step recomputes every posterior hyperparameter from the current
//! responsibilities; the E step recomputes responsibilities from the
//! posterior hyperparameters in the log domain.

use ndarray::{s, Array2, Array3, Axis};

use crate::error::{Result, RsmError};
use crate::network::TypedNetwork;
use crate::params::{PriorHyperparams, VariationalState};
use crate::scalar::Scalar;
use crate::special::digamma;

/// Beta posterior `(a, b)` of the edge-presence probabilities. Does not
/// depend on the responsibilities.
pub fn m_step_gamma<T: Scalar>(
    net: &TypedNetwork,
    priors: &PriorHyperparams<T>,
) -> (Array2<T>, Array2<T>) {
    let s = net.n_subgraphs();
    let mut edges = Array2::<usize>::zeros((s, s));
    for e in net.edges() {
        edges[[net.subgraph_of(e.src), net.subgraph_of(e.dst)]] += 1;
    }
    let pairs = net.pair_counts();
    let a = Array2::from_shape_fn((s, s), |(r, q)| {
        priors.a0[[r, q]] + T::from_count(edges[[r, q]])
    });
    let b = Array2::from_shape_fn((s, s), |(r, q)| {
        priors.b0[[r, q]] + T::from_count(pairs[[r, q]] - edges[[r, q]])
    });
    (a, b)
}

/// Dirichlet posterior `chi` of the per-subgraph cluster proportions.
pub fn m_step_alpha<T: Scalar>(
    subgraph_of: &[usize],
    tau: &Array2<T>,
    priors: &PriorHyperparams<T>,
) -> Array2<T> {
    let mut chi = priors.chi0.clone();
    for (row, &s) in tau.outer_iter().zip(subgraph_of) {
        let mut target = chi.row_mut(s);
        target.zip_mut_with(&row, |c, &t| *c = *c + t);
    }
    chi
}

/// Dirichlet posterior `xi` of the per-cluster-pair type distributions.
pub fn m_step_pi<T: Scalar>(
    net: &TypedNetwork,
    tau: &Array2<T>,
    priors: &PriorHyperparams<T>,
) -> Array3<T> {
    let mut xi = priors.xi0.clone();
    let k = tau.ncols();
    for e in net.edges() {
        let c = e.edge_type as usize - 1;
        for a in 0..k {
            let ta = tau[[e.src, a]];
            if ta == T::zero() {
                continue;
            }
            for b in 0..k {
                xi[[a, b, c]] = xi[[a, b, c]] + ta * tau[[e.dst, b]];
            }
        }
    }
    xi
}

/// Full M step: posterior hyperparameters for the given responsibilities.
pub fn m_step<T: Scalar>(
    net: &TypedNetwork,
    tau: Array2<T>,
    priors: &PriorHyperparams<T>,
) -> VariationalState<T> {
    let (a, b) = m_step_gamma(net, priors);
    let chi = m_step_alpha(net.subgraph_labels(), &tau, priors);
    let xi = m_step_pi(net, &tau, priors);
    VariationalState { tau, chi, a, b, xi }
}

/// Order in which the E step visits vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sweep {
    /// Every row is computed from the previous responsibilities.
    #[default]
    Synchronous,
    /// Rows are updated in vertex order, each one seeing the rows already
    /// updated in this sweep.
    Sequential,
}

/// Expected log-parameters under the current posteriors.
struct ExpectedLogs<T> {
    alpha: Array2<T>,
    pi: Array3<T>,
}

impl<T: Scalar> ExpectedLogs<T> {
    fn new(state: &VariationalState<T>) -> Self {
        let mut alpha = state.chi.mapv(digamma);
        for (mut row, chi_row) in alpha.outer_iter_mut().zip(state.chi.outer_iter()) {
            let norm = digamma(chi_row.sum());
            row.mapv_inplace(|v| v - norm);
        }
        let totals = state.xi.sum_axis(Axis(2)).mapv(digamma);
        let mut pi = state.xi.mapv(digamma);
        for ((k, l, _), v) in pi.indexed_iter_mut() {
            *v = *v - totals[[k, l]];
        }
        Self { alpha, pi }
    }
}

fn vertex_scores<T: Scalar>(
    net: &TypedNetwork,
    logs: &ExpectedLogs<T>,
    tau: &Array2<T>,
    i: usize,
    scores: &mut [T],
) {
    let k = scores.len();
    for (c, score) in scores.iter_mut().enumerate() {
        *score = logs.alpha[[net.subgraph_of(i), c]];
    }
    for &(j, code) in net.out_edges(i) {
        let t = code as usize - 1;
        for l in 0..k {
            let w = tau[[j, l]];
            if w == T::zero() {
                continue;
            }
            for (c, score) in scores.iter_mut().enumerate() {
                *score = *score + w * logs.pi[[c, l, t]];
            }
        }
    }
    for &(j, code) in net.in_edges(i) {
        let t = code as usize - 1;
        for l in 0..k {
            let w = tau[[j, l]];
            if w == T::zero() {
                continue;
            }
            for (c, score) in scores.iter_mut().enumerate() {
                *score = *score + w * logs.pi[[l, c, t]];
            }
        }
    }
}

fn normalize_into<T: Scalar>(scores: &[T], out: &mut ndarray::ArrayViewMut1<T>) -> Result<()> {
    if scores.iter().any(|v| !v.is_finite()) {
        return Err(RsmError::NonFinite("E-step score"));
    }
    let max = scores.iter().copied().fold(T::neg_infinity(), T::max);
    let mut total = T::zero();
    for (o, &s) in out.iter_mut().zip(scores) {
        *o = (s - max).exp();
        total = total + *o;
    }
    out.mapv_inplace(|v| v / total);
    Ok(())
}

/// E step with the given sweep order.
pub fn e_step_with<T: Scalar>(
    net: &TypedNetwork,
    state: &VariationalState<T>,
    sweep: Sweep,
) -> Result<Array2<T>> {
    let logs = ExpectedLogs::new(state);
    let k = state.n_clusters();
    let mut scores = vec![T::zero(); k];
    let mut tau = state.tau.clone();
    for i in 0..net.n_vertices() {
        match sweep {
            Sweep::Synchronous => vertex_scores(net, &logs, &state.tau, i, &mut scores),
            Sweep::Sequential => vertex_scores(net, &logs, &tau, i, &mut scores),
        }
        normalize_into(&scores, &mut tau.slice_mut(s![i, ..]))?;
    }
    Ok(tau)
}

/// Synchronous E step: every responsibility row is the normalized
/// exponential of its expected complete-data log-likelihood given the
/// previous responsibilities of its neighbours.
pub fn e_step<T: Scalar>(net: &TypedNetwork, state: &VariationalState<T>) -> Result<Array2<T>> {
    e_step_with(net, state, Sweep::Synchronous)
}

/// Checks that the posterior counts added by the last M step account for
/// every vertex, edge and ordered pair. Returns a description of the first
/// mismatch larger than `tol`.
pub fn check_count_conservation<T: Scalar>(
    net: &TypedNetwork,
    state: &VariationalState<T>,
    priors: &PriorHyperparams<T>,
    tol: T,
) -> std::result::Result<(), String> {
    let xi_mass: T = state
        .xi
        .iter()
        .zip(priors.xi0.iter())
        .map(|(&x, &x0)| x - x0)
        .sum();
    if (xi_mass - T::from_count(net.n_edges())).abs() > tol {
        return Err(format!(
            "xi counts sum to {xi_mass}, expected {} edges",
            net.n_edges()
        ));
    }
    for (s, size) in net.subgraph_sizes().into_iter().enumerate() {
        let mass: T = state
            .chi
            .row(s)
            .iter()
            .zip(priors.chi0.row(s).iter())
            .map(|(&x, &x0)| x - x0)
            .sum();
        if (mass - T::from_count(size)).abs() > tol {
            return Err(format!("chi row {} sums to {mass}, expected {size}", s + 1));
        }
    }
    let pairs = net.pair_counts();
    for ((r, q), &n) in pairs.indexed_iter() {
        let mass = state.a[[r, q]] + state.b[[r, q]] - priors.a0[[r, q]] - priors.b0[[r, q]];
        if (mass - T::from_count(n)).abs() > tol {
            return Err(format!(
                "a + b for ({}, {}) adds {mass}, expected {n} pairs",
                r + 1,
                q + 1
            ));
        }
    }
    let below_prior = state
        .chi
        .iter()
        .zip(priors.chi0.iter())
        .any(|(x, x0)| x < x0)
        || state.xi.iter().zip(priors.xi0.iter()).any(|(x, x0)| x < x0)
        || state.a.iter().zip(priors.a0.iter()).any(|(x, x0)| x < x0)
        || state.b.iter().zip(priors.b0.iter()).any(|(x, x0)| x < x0);
    if below_prior {
        return Err("posterior hyperparameter below its prior".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::init::one_hot;
    use crate::testutil::{random_network, random_tau};
    use approx::assert_relative_eq;
    use ndarray::array;

    fn jeffreys(net: &TypedNetwork, k: usize) -> PriorHyperparams<f64> {
        PriorHyperparams::jeffreys(net.n_subgraphs(), k, net.n_types())
    }

    #[test]
    fn gamma_counts() {
        // 5 vertices in subgraph 1 -> 20 ordered pairs; 3 edges
        let mut x = Array2::zeros((5, 5));
        x[[0, 1]] = 1;
        x[[2, 4]] = 1;
        x[[4, 3]] = 1;
        let net = TypedNetwork::new(1, 2, x, vec![0; 5]).unwrap();
        let (a, b) = m_step_gamma(&net, &jeffreys(&net, 2));
        assert_eq!(a[[0, 0]], 3.5);
        assert_eq!(b[[0, 0]], 17.5);
        // subgraph 2 is empty: posterior equals prior
        assert_eq!((a[[1, 1]], b[[1, 1]]), (0.5, 0.5));
        assert_eq!((a[[0, 1]], b[[0, 1]]), (0.5, 0.5));
    }

    #[test]
    fn gamma_ten_pairs_three_edges() {
        // subgraph r has 2 vertices, s has 5: 10 ordered pairs r -> s
        let mut x = Array2::zeros((7, 7));
        x[[0, 2]] = 1;
        x[[1, 3]] = 1;
        x[[1, 6]] = 1;
        let net = TypedNetwork::new(1, 2, x, vec![0, 0, 1, 1, 1, 1, 1]).unwrap();
        let (a, b) = m_step_gamma(&net, &jeffreys(&net, 1));
        assert_eq!((a[[0, 1]], b[[0, 1]]), (3.5, 7.5));
    }

    #[test]
    fn alpha_hard_assignment() {
        let labels = vec![0, 0, 1, 0];
        let tau = one_hot::<f64>(&[1, 1, 0, 1], 3);
        let priors = PriorHyperparams::<f64>::jeffreys(3, 3, 1);
        let chi = m_step_alpha(&labels, &tau, &priors);
        assert_eq!(chi.row(0).to_vec(), vec![0.5, 3.5, 0.5]);
        assert_eq!(chi.row(1).to_vec(), vec![1.5, 0.5, 0.5]);
        // empty subgraph
        assert_eq!(chi.row(2).to_vec(), vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn pi_zero_edges_and_single_edge() {
        let empty = TypedNetwork::new(2, 1, Array2::zeros((3, 3)), vec![0; 3]).unwrap();
        let priors = jeffreys(&empty, 3);
        let tau = random_tau(3, 3, 1);
        assert_eq!(m_step_pi(&empty, &tau, &priors), priors.xi0);

        let mut x = Array2::zeros((3, 3));
        x[[0, 2]] = 2;
        let net = TypedNetwork::new(2, 1, x, vec![0; 3]).unwrap();
        let tau = one_hot::<f64>(&[0, 1, 2], 3);
        let xi = m_step_pi(&net, &tau, &priors);
        let mut expected = priors.xi0.clone();
        expected[[0, 2, 1]] += 1.0;
        assert_eq!(xi, expected);
    }

    #[test]
    fn e_step_single_cluster() {
        let net = random_network(6, 2, 2, 0.5, 3);
        let priors = jeffreys(&net, 1);
        let state = m_step(&net, Array2::from_elem((6, 1), 1.0), &priors);
        let tau = e_step(&net, &state).unwrap();
        assert!(tau.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn e_step_without_edges_follows_chi() {
        let net = TypedNetwork::new(2, 1, Array2::zeros((4, 4)), vec![0; 4]).unwrap();
        let priors = PriorHyperparams::jeffreys(1, 3, 2);
        let mut state = m_step(&net, random_tau(4, 3, 5), &priors);
        state.chi = array![[2.0, 2.0, 2.0]];
        let tau = e_step(&net, &state).unwrap();
        for v in tau.iter() {
            assert_relative_eq!(*v, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn non_finite_scores_are_errors() {
        let net = random_network(4, 1, 2, 0.5, 3);
        let priors = jeffreys(&net, 2);
        let mut state = m_step(&net, random_tau(4, 2, 5), &priors);
        state.chi[[0, 0]] = 0.0;
        assert!(matches!(e_step(&net, &state), Err(RsmError::NonFinite(_))));
    }

    #[test]
    fn sequential_sweep_normalizes() {
        let net = random_network(12, 2, 3, 0.4, 8);
        let priors = jeffreys(&net, 3);
        let state = m_step(&net, random_tau(12, 3, 2), &priors);
        let tau = e_step_with(&net, &state, Sweep::Sequential).unwrap();
        for row in tau.outer_iter() {
            assert!((row.sum() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn conservation_holds_after_m_step() {
        let net = random_network(15, 3, 3, 0.3, 21);
        let priors = jeffreys(&net, 4);
        let state = m_step(&net, random_tau(15, 4, 4), &priors);
        check_count_conservation(&net, &state, &priors, 1e-9).unwrap();
    }
}
