//! Sampling networks from the generative model.
//!
//! One seeded ChaCha8 stream drives everything, consumed in a fixed order:
//! edge presence for all ordered pairs (row-major), then cluster
//! memberships by vertex, then the type of every present edge (row-major).

use ndarray::{Array2, Array3};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RsmError};
use crate::network::TypedNetwork;
use crate::params::RsmParams;
use crate::scalar::{is_stochastic, Scalar, STOCHASTIC_TOL};

/// Structured parameterization: `gamma` has `lambda` on the diagonal and
/// `epsilon` elsewhere; `pi[k][k] = u` and `pi[k][l] = v` for `k != l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec<T> {
    pub n_vertices: usize,
    pub n_subgraphs: usize,
    pub n_clusters: usize,
    pub n_types: usize,
    pub alpha: Vec<Vec<T>>,
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub lambda: T,
    pub epsilon: T,
    pub subgraph_sizes: Vec<usize>,
}

impl<T: Scalar> ScenarioSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let tol = T::lit(STOCHASTIC_TOL);
        if self.n_subgraphs == 0 || self.n_clusters == 0 || self.n_types == 0 {
            return Err(RsmError::InvalidParams("S, K and C must be >= 1".into()));
        }
        if self.u.len() != self.n_types || self.v.len() != self.n_types {
            return Err(RsmError::DimensionMismatch(format!(
                "u and v must have length C = {}",
                self.n_types
            )));
        }
        if !is_stochastic(self.u.iter().copied(), tol)
            || !is_stochastic(self.v.iter().copied(), tol)
        {
            return Err(RsmError::InvalidParams(
                "u and v must be probability vectors".into(),
            ));
        }
        let unit = |x: T| x >= T::zero() && x <= T::one();
        if !unit(self.lambda) || !unit(self.epsilon) {
            return Err(RsmError::InvalidParams(
                "lambda and epsilon must lie in [0, 1]".into(),
            ));
        }
        if self.subgraph_sizes.len() != self.n_subgraphs
            || self.subgraph_sizes.iter().sum::<usize>() != self.n_vertices
        {
            return Err(RsmError::DimensionMismatch(format!(
                "subgraph sizes {:?} must have S = {} entries summing to N = {}",
                self.subgraph_sizes, self.n_subgraphs, self.n_vertices
            )));
        }
        Ok(())
    }

    /// Contiguous subgraph blocks following `subgraph_sizes`.
    pub fn subgraph_labels(&self) -> Vec<usize> {
        self.subgraph_sizes
            .iter()
            .enumerate()
            .flat_map(|(s, &size)| std::iter::repeat_n(s, size))
            .collect()
    }
}

/// Expands a structured scenario into full parameters.
pub fn expand_scenario<T: Scalar>(spec: &ScenarioSpec<T>) -> Result<RsmParams<T>> {
    spec.validate()?;
    let (s, k, c) = (spec.n_subgraphs, spec.n_clusters, spec.n_types);
    if spec.alpha.len() != s || spec.alpha.iter().any(|row| row.len() != k) {
        return Err(RsmError::DimensionMismatch(format!(
            "alpha must be {s} x {k}"
        )));
    }
    let alpha = Array2::from_shape_fn((s, k), |(r, q)| spec.alpha[r][q]);
    let gamma = Array2::from_shape_fn(
        (s, s),
        |(r, q)| {
            if r == q {
                spec.lambda
            } else {
                spec.epsilon
            }
        },
    );
    let pi = Array3::from_shape_fn(
        (k, k, c),
        |(a, b, t)| {
            if a == b {
                spec.u[t]
            } else {
                spec.v[t]
            }
        },
    );
    RsmParams::new(alpha, gamma, pi)
}

/// A sampled network with its latent clusters (0-indexed).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSample<T> {
    pub network: TypedNetwork,
    pub true_labels: Vec<usize>,
    pub params: RsmParams<T>,
}

/// Draws a network from `params` for the given 0-indexed subgraph labels.
pub fn sample_network<T: Scalar>(
    params: &RsmParams<T>,
    subgraph_of: &[usize],
    seed: u64,
) -> Result<GeneratedSample<T>> {
    params.validate()?;
    let s_count = params.n_subgraphs();
    if let Some(&bad) = subgraph_of.iter().find(|&&s| s >= s_count) {
        return Err(RsmError::InvalidParams(format!(
            "subgraph label {} outside 1..={s_count}",
            bad + 1
        )));
    }
    let n = subgraph_of.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut present = Array2::from_elem((n, n), false);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let p = params.gamma[[subgraph_of[i], subgraph_of[j]]].to_f64_lossy();
                present[[i, j]] = rng.random::<f64>() < p;
            }
        }
    }

    let alpha_draws = params
        .alpha
        .outer_iter()
        .map(|row| categorical(row.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<usize> = subgraph_of
        .iter()
        .map(|&s| alpha_draws[s].sample(&mut rng))
        .collect();

    let k = params.n_clusters();
    let mut type_draws = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            let slice = params.pi.slice(ndarray::s![a, b, ..]);
            type_draws.push(categorical(slice.iter().copied())?);
        }
    }
    let mut edge_types = Array2::<u32>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if present[[i, j]] {
                let draw = &type_draws[labels[i] * k + labels[j]];
                edge_types[[i, j]] = draw.sample(&mut rng) as u32 + 1;
            }
        }
    }

    let network = TypedNetwork::new(params.n_types(), s_count, edge_types, subgraph_of.to_vec())?;
    Ok(GeneratedSample {
        network,
        true_labels: labels,
        params: params.clone(),
    })
}

fn categorical<T: Scalar>(weights: impl Iterator<Item = T>) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(weights.map(|w| w.to_f64_lossy()))
        .map_err(|e| RsmError::InvalidParams(format!("bad probability vector: {e}")))
}

/// Samples from an expanded scenario.
pub fn sample_scenario<T: Scalar>(spec: &ScenarioSpec<T>, seed: u64) -> Result<GeneratedSample<T>> {
    let params = expand_scenario(spec)?;
    sample_network(&params, &spec.subgraph_labels(), seed)
}

/// The three simulation settings (N = 100, C = 3, K = 3).
pub fn table3_spec<T: Scalar>(which: usize) -> Result<ScenarioSpec<T>> {
    let v = |xs: &[f64]| xs.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
    let m = |rows: &[&[f64]]| rows.iter().map(|r| v(r)).collect::<Vec<_>>();
    let spec = match which {
        1 => ScenarioSpec {
            n_vertices: 100,
            n_subgraphs: 1,
            n_clusters: 3,
            n_types: 3,
            alpha: m(&[&[0.3, 0.3, 0.4]]),
            u: v(&[0.8, 0.1, 0.1]),
            v: v(&[0.1, 0.1, 0.8]),
            lambda: T::lit(0.2),
            epsilon: T::lit(0.06),
            subgraph_sizes: vec![100],
        },
        2 => ScenarioSpec {
            u: v(&[0.5, 0.45, 0.05]),
            v: v(&[0.1, 0.45, 0.45]),
            ..table3_spec(1)?
        },
        3 => ScenarioSpec {
            n_subgraphs: 3,
            alpha: m(&[&[0.0, 0.5, 0.5], &[0.5, 0.0, 0.5], &[0.5, 0.5, 0.0]]),
            epsilon: T::lit(0.1),
            subgraph_sizes: vec![34, 33, 33],
            ..table3_spec(2)?
        },
        other => return Err(RsmError::InvalidScenario(other)),
    };
    Ok(spec)
}

/// Samples one of the three simulation settings.
pub fn scenario_table3<T: Scalar>(which: usize, seed: u64) -> Result<GeneratedSample<T>> {
    sample_scenario(&table3_spec::<T>(which)?, seed)
}

/// 30-vertex, two-subgraph illustration network (15 vertices per subgraph).
pub fn example_network_spec<T: Scalar>() -> ScenarioSpec<T> {
    let v = |xs: &[f64]| xs.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
    ScenarioSpec {
        n_vertices: 30,
        n_subgraphs: 2,
        n_clusters: 3,
        n_types: 3,
        alpha: vec![v(&[0.1, 0.3, 0.6]), v(&[0.6, 0.3, 0.1])],
        u: v(&[0.8, 0.1, 0.1]),
        v: v(&[0.1, 0.3, 0.6]),
        lambda: T::lit(0.6),
        epsilon: T::lit(0.06),
        subgraph_sizes: vec![15, 15],
    }
}
