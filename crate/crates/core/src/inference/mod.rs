//! Variational Bayes EM for the random subgraph model.

mod elbo;
mod fit;
pub mod init;
mod update;

pub use elbo::elbo;
pub use fit::{fit, fit_from_init};
pub use init::{distance_matrix, init_distance, kmedoid_init, kmedoid_labels};
pub use update::{
    check_count_conservation, e_step, e_step_with, m_step, m_step_alpha, m_step_gamma, m_step_pi,
    Sweep,
};

use crate::error::{Result, RsmError};
use crate::params::PriorSpec;
use crate::scalar::Scalar;

/// Settings for [`fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig<T> {
    pub n_clusters: usize,
    pub priors: PriorSpec<T>,
    pub n_restarts: usize,
    pub max_iterations: usize,
    /// Threshold on the largest hyperparameter change between iterations.
    pub epsilon_converge: T,
    pub seed: u64,
    pub init_iterations: usize,
    pub sweep: Sweep,
}

impl<T: Scalar> FitConfig<T> {
    /// Jeffreys priors, 5 restarts, 200 iterations, epsilon 1e-6, seed 0.
    pub fn new(n_clusters: usize) -> Self {
        Self {
            n_clusters,
            priors: PriorSpec::Jeffreys,
            n_restarts: 5,
            max_iterations: 200,
            epsilon_converge: T::lit(1e-6),
            seed: 0,
            init_iterations: init::DEFAULT_INIT_ITERATIONS,
            sweep: Sweep::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, n_restarts: usize) -> Self {
        self.n_restarts = n_restarts;
        self
    }

    pub fn with_priors(mut self, priors: PriorSpec<T>) -> Self {
        self.priors = priors;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_clusters == 0 {
            return Err(RsmError::InvalidParams("K must be >= 1".into()));
        }
        if self.n_restarts == 0 {
            return Err(RsmError::InvalidParams(
                "at least one restart is required".into(),
            ));
        }
        if self.epsilon_converge.is_nan() || self.epsilon_converge <= T::zero() {
            return Err(RsmError::InvalidParams("epsilon must be positive".into()));
        }
        Ok(())
    }
}
