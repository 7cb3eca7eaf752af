//! Exact log-evidence on tiny networks.
//!
//! For a fixed hard assignment the parameters integrate out in closed
//! form, so `ln p(X, A | K)` is a log-sum-exp over all `K^N` assignments.
//! Exists only to check the variational bound.

use ndarray::{Array2, Array3};

use crate::error::{Result, RsmError};
use crate::network::TypedNetwork;
use crate::params::PriorHyperparams;
use crate::scalar::Scalar;
use crate::special::{ln_beta, ln_dirichlet_norm, log_sum_exp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Largest admissible `K^N`.
    pub max_enumeration: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_enumeration: 4096,
        }
    }
}

/// Edge-presence part of the marginal likelihood; identical for every
/// cluster assignment.
pub fn ln_presence_evidence<T: Scalar>(net: &TypedNetwork, priors: &PriorHyperparams<T>) -> T {
    let s = net.n_subgraphs();
    let mut edges = Array2::<usize>::zeros((s, s));
    for e in net.edges() {
        edges[[net.subgraph_of(e.src), net.subgraph_of(e.dst)]] += 1;
    }
    let pairs = net.pair_counts();
    let mut total = T::zero();
    for ((r, q), &n) in pairs.indexed_iter() {
        let (a0, b0) = (priors.a0[[r, q]], priors.b0[[r, q]]);
        let present = T::from_count(edges[[r, q]]);
        let absent = T::from_count(n - edges[[r, q]]);
        total = total + ln_beta(a0 + present, b0 + absent) - ln_beta(a0, b0);
    }
    total
}

/// Cluster-dependent part of `ln p(X, A, Z)` for hard labels `z`.
fn ln_cluster_evidence<T: Scalar>(
    net: &TypedNetwork,
    z: &[usize],
    priors: &PriorHyperparams<T>,
) -> T {
    let (s, k, c) = (net.n_subgraphs(), priors.n_clusters(), net.n_types());
    let mut membership = Array2::<usize>::zeros((s, k));
    for (i, &zi) in z.iter().enumerate() {
        membership[[net.subgraph_of(i), zi]] += 1;
    }
    let mut types = Array3::<usize>::zeros((k, k, c));
    for e in net.edges() {
        types[[z[e.src], z[e.dst], e.edge_type as usize - 1]] += 1;
    }
    let mut total = T::zero();
    for r in 0..s {
        let prior = priors.chi0.row(r);
        total = total
            + ln_dirichlet_norm(
                prior
                    .iter()
                    .zip(membership.row(r).iter())
                    .map(|(&p, &n)| p + T::from_count(n)),
            )
            - ln_dirichlet_norm(prior.iter().copied());
    }
    for a in 0..k {
        for b in 0..k {
            let prior = priors.xi0.slice(ndarray::s![a, b, ..]);
            let counts = types.slice(ndarray::s![a, b, ..]);
            total = total
                + ln_dirichlet_norm(
                    prior
                        .iter()
                        .zip(counts.iter())
                        .map(|(&p, &n)| p + T::from_count(n)),
                )
                - ln_dirichlet_norm(prior.iter().copied());
        }
    }
    total
}

/// `ln p(X, A, Z | K)` for one hard assignment, parameters integrated out.
pub fn ln_joint_hard<T: Scalar>(
    net: &TypedNetwork,
    z: &[usize],
    priors: &PriorHyperparams<T>,
) -> T {
    ln_presence_evidence(net, priors) + ln_cluster_evidence(net, z, priors)
}

/// Exact `ln p(X, A | K)` by enumerating every assignment.
pub fn exact_log_evidence<T: Scalar>(
    net: &TypedNetwork,
    k: usize,
    priors: &PriorHyperparams<T>,
    limits: OracleLimits,
) -> Result<T> {
    let n = net.n_vertices();
    if priors.n_clusters() != k
        || priors.n_subgraphs() != net.n_subgraphs()
        || priors.n_types() != net.n_types()
    {
        return Err(RsmError::DimensionMismatch(
            "priors do not match (S, K, C)".into(),
        ));
    }
    if k == 0 {
        return Err(RsmError::InvalidParams("K must be >= 1".into()));
    }
    let required = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > limits.max_enumeration as u128 {
        return Err(RsmError::BudgetExceeded {
            required,
            budget: limits.max_enumeration,
        });
    }
    let mut z = vec![0usize; n];
    let mut terms = Vec::with_capacity(required as usize);
    loop {
        terms.push(ln_cluster_evidence(net, &z, priors));
        // odometer increment in base K
        let mut pos = 0;
        while pos < n {
            z[pos] += 1;
            if z[pos] < k {
                break;
            }
            z[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    let total = ln_presence_evidence(net, priors) + log_sum_exp(&terms);
    if total.is_finite() {
        Ok(total)
    } else {
        Err(RsmError::NonFinite("exact evidence"))
    }
}
