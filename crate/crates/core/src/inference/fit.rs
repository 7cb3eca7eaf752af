use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Result, RsmError};
use crate::network::{validate_network, TypedNetwork};
use crate::params::{map_labels, FitResult, PriorHyperparams, RestartSummary};
use crate::scalar::Scalar;

use super::elbo::elbo;
use super::init::{distance_matrix, kmedoid_labels, one_hot};
use super::update::{check_count_conservation, e_step_with, m_step};
use super::FitConfig;

/// Runs VBEM with `config.n_restarts` k-medoid initializations (restart
/// `r` seeded with `config.seed + r`) and keeps the restart with the
/// highest final lower bound, lowest restart index on ties.
pub fn fit<T: Scalar>(net: &TypedNetwork, config: &FitConfig<T>) -> Result<FitResult<T>> {
    config.validate()?;
    validate_network(net).into_result()?;
    let priors = config
        .priors
        .materialize(net.n_subgraphs(), config.n_clusters, net.n_types())?;
    let dist = distance_matrix(net);

    let runs: Vec<Result<FitResult<T>>> = (0..config.n_restarts)
        .into_par_iter()
        .map(|r| {
            let seed = config.seed.wrapping_add(r as u64);
            let labels = kmedoid_labels(&dist, config.n_clusters, seed, config.init_iterations);
            let mut run = fit_from_init(net, one_hot(&labels, config.n_clusters), &priors, config)?;
            run.restart_index = r;
            Ok(run)
        })
        .collect();

    let summaries: Vec<RestartSummary<T>> = runs
        .iter()
        .enumerate()
        .filter_map(|(r, run)| {
            run.as_ref().ok().map(|run| RestartSummary {
                index: r,
                final_elbo: run.final_elbo(),
                n_iterations: run.n_iterations,
                converged: run.converged,
            })
        })
        .collect();

    let mut best: Option<FitResult<T>> = None;
    let mut first_error = None;
    for run in runs {
        match run {
            Ok(run) => {
                let better = best
                    .as_ref()
                    .is_none_or(|b| run.final_elbo() > b.final_elbo());
                if better {
                    best = Some(run);
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    match best {
        Some(mut best) => {
            best.restarts = summaries;
            Ok(best)
        }
        None => Err(first_error.unwrap_or(RsmError::NonFinite("lower bound"))),
    }
}

/// Single VBEM run from the given initial responsibilities.
///
/// Each iteration performs an M step, records the lower bound, then an E
/// step; it stops once no posterior hyperparameter moves by more than
/// `epsilon_converge` between consecutive M steps.
pub fn fit_from_init<T: Scalar>(
    net: &TypedNetwork,
    tau0: Array2<T>,
    priors: &PriorHyperparams<T>,
    config: &FitConfig<T>,
) -> Result<FitResult<T>> {
    if tau0.dim() != (net.n_vertices(), priors.n_clusters()) {
        return Err(RsmError::DimensionMismatch(format!(
            "initial responsibilities are {:?}, expected ({}, {})",
            tau0.dim(),
            net.n_vertices(),
            priors.n_clusters()
        )));
    }
    let mut state = m_step(net, tau0, priors);
    debug_check(net, &state, priors);
    let mut trace = vec![elbo(&state, priors, net)?];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let tau = e_step_with(net, &state, config.sweep)?;
        let next = m_step(net, tau, priors);
        debug_check(net, &next, priors);
        trace.push(elbo(&next, priors, net)?);
        let change = next.max_hyper_change(&state);
        state = next;
        if change < config.epsilon_converge {
            converged = true;
            break;
        }
    }
    Ok(FitResult {
        map_labels: map_labels(&state.tau),
        state,
        elbo_trace: trace,
        n_iterations: iterations,
        restart_index: 0,
        converged,
        restarts: Vec::new(),
    })
}

#[inline]
fn debug_check<T: Scalar>(
    net: &TypedNetwork,
    state: &crate::params::VariationalState<T>,
    priors: &PriorHyperparams<T>,
) {
    if cfg!(debug_assertions) {
        // relative slack so that f32 runs on large networks pass too
        let scale = T::from_count(net.n_edges() + net.n_vertices() * net.n_vertices() + 1);
        let tol = T::lit(1e-9).max(T::epsilon() * scale * T::lit(16.0));
        if let Err(msg) = check_count_conservation(net, state, priors, tol) {
            panic!("count conservation violated after M step: {msg}");
        }
    }
}
