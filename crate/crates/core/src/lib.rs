//! Random subgraph model (RSM) for directed networks with typed edges and a
//! known vertex partition.
//!
//! Edge presence depends on the observed subgraphs of the two endpoints,
//! edge types on their latent clusters. The crate samples such networks,
//! fits the model by variational Bayes EM, selects the number of clusters
//! by the variational lower bound, and scores partitions with the adjusted
//! Rand index. An exact-enumeration oracle checks the bound on tiny graphs.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the working precision used by the CLI.

pub mod cli;
pub mod error;
pub mod evaluation;
pub mod generator;
pub mod inference;
pub mod io;
pub mod network;
pub mod oracle;
pub mod params;
pub mod scalar;
pub mod selection;
pub mod special;

#[cfg(test)]
mod testutil;

pub use error::{Result, RsmError};
pub use evaluation::{adjusted_rand_index, collapse_by_type, collapse_presence, PartitionPair};
pub use generator::{
    example_network_spec, expand_scenario, sample_network, sample_scenario, scenario_table3,
    table3_spec, GeneratedSample, ScenarioSpec,
};
pub use inference::{fit, fit_from_init, FitConfig, Sweep};
pub use network::{presence_matrix, rsm_param_count, validate_network, Edge, TypedNetwork};
pub use oracle::{exact_log_evidence, OracleLimits};
pub use params::{
    FitResult, PriorHyperparams, PriorSpec, RestartSummary, RsmParams, VariationalState,
};
pub use scalar::Scalar;
pub use selection::{select_k, SelectionResult};

pub type RsmParams64 = RsmParams<f64>;
pub type PriorHyperparams64 = PriorHyperparams<f64>;
pub type VariationalState64 = VariationalState<f64>;
pub type FitResult64 = FitResult<f64>;
pub type FitConfig64 = FitConfig<f64>;
pub type ScenarioSpec64 = ScenarioSpec<f64>;
pub type GeneratedSample64 = GeneratedSample<f64>;
pub type SelectionResult64 = SelectionResult<f64>;

pub type RsmParams32 = RsmParams<f32>;
pub type FitConfig32 = FitConfig<f32>;
pub type FitResult32 = FitResult<f32>;
