//! Model parameters, conjugate prior hyperparameters and variational state.

use ndarray::{Array2, Array3, Axis};

use crate::error::{Result, RsmError};
use crate::scalar::{is_stochastic, Scalar, STOCHASTIC_TOL};

/// Generative parameters: `alpha` (S×K), `gamma` (S×S), `pi` (K×K×C).
#[derive(Debug, Clone, PartialEq)]
pub struct RsmParams<T> {
    pub alpha: Array2<T>,
    pub gamma: Array2<T>,
    pub pi: Array3<T>,
}

impl<T: Scalar> RsmParams<T> {
    pub fn new(alpha: Array2<T>, gamma: Array2<T>, pi: Array3<T>) -> Result<Self> {
        let params = Self { alpha, gamma, pi };
        params.validate()?;
        Ok(params)
    }

    pub fn n_subgraphs(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn n_clusters(&self) -> usize {
        self.alpha.ncols()
    }

    pub fn n_types(&self) -> usize {
        self.pi.dim().2
    }

    pub fn validate(&self) -> Result<()> {
        let (s, k) = self.alpha.dim();
        if self.gamma.dim() != (s, s) {
            return Err(RsmError::DimensionMismatch(format!(
                "gamma is {:?}, expected ({s}, {s})",
                self.gamma.dim()
            )));
        }
        let (k1, k2, c) = self.pi.dim();
        if k1 != k || k2 != k || c == 0 {
            return Err(RsmError::DimensionMismatch(format!(
                "pi is {:?}, expected ({k}, {k}, C >= 1)",
                self.pi.dim()
            )));
        }
        let tol = T::lit(STOCHASTIC_TOL);
        for (row, values) in self.alpha.outer_iter().enumerate() {
            if !is_stochastic(values.iter().copied(), tol) {
                return Err(RsmError::InvalidParams(format!(
                    "alpha row {} is not a probability vector",
                    row + 1
                )));
            }
        }
        for k in 0..k1 {
            for l in 0..k2 {
                let slice = self.pi.slice(ndarray::s![k, l, ..]);
                if !is_stochastic(slice.iter().copied(), tol) {
                    return Err(RsmError::InvalidParams(format!(
                        "pi[{}][{}] is not a probability vector",
                        k + 1,
                        l + 1
                    )));
                }
            }
        }
        if self
            .gamma
            .iter()
            .any(|&g| !(g >= T::zero() && g <= T::one()))
        {
            return Err(RsmError::InvalidParams(
                "gamma entries must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Conjugate prior hyperparameters: Dirichlet `chi0` over clusters per
/// subgraph, Beta `(a0, b0)` per subgraph pair, Dirichlet `xi0` over types
/// per cluster pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorHyperparams<T> {
    pub chi0: Array2<T>,
    pub a0: Array2<T>,
    pub b0: Array2<T>,
    pub xi0: Array3<T>,
}

impl<T: Scalar> PriorHyperparams<T> {
    pub fn new(chi0: Array2<T>, a0: Array2<T>, b0: Array2<T>, xi0: Array3<T>) -> Result<Self> {
        let (s, k) = chi0.dim();
        if a0.dim() != (s, s) || b0.dim() != (s, s) {
            return Err(RsmError::DimensionMismatch(
                "Beta prior must be S x S".into(),
            ));
        }
        let (k1, k2, _) = xi0.dim();
        if k1 != k || k2 != k {
            return Err(RsmError::DimensionMismatch("xi0 must be K x K x C".into()));
        }
        let all_positive = chi0
            .iter()
            .chain(a0.iter())
            .chain(b0.iter())
            .chain(xi0.iter())
            .all(|&v| v > T::zero() && v.is_finite());
        if !all_positive {
            return Err(RsmError::InvalidParams(
                "prior hyperparameters must be finite and strictly positive".into(),
            ));
        }
        Ok(Self { chi0, a0, b0, xi0 })
    }

    /// Every hyperparameter set to `value`.
    pub fn constant(
        n_subgraphs: usize,
        n_clusters: usize,
        n_types: usize,
        value: T,
    ) -> Result<Self> {
        Self::new(
            Array2::from_elem((n_subgraphs, n_clusters), value),
            Array2::from_elem((n_subgraphs, n_subgraphs), value),
            Array2::from_elem((n_subgraphs, n_subgraphs), value),
            Array3::from_elem((n_clusters, n_clusters, n_types), value),
        )
    }

    /// Jeffreys prior: all hyperparameters 1/2.
    pub fn jeffreys(n_subgraphs: usize, n_clusters: usize, n_types: usize) -> Self {
        Self::constant(n_subgraphs, n_clusters, n_types, T::lit(0.5))
            .expect("1/2 is a valid hyperparameter")
    }

    /// Uniform prior: all hyperparameters 1.
    pub fn uniform(n_subgraphs: usize, n_clusters: usize, n_types: usize) -> Self {
        Self::constant(n_subgraphs, n_clusters, n_types, T::one())
            .expect("1 is a valid hyperparameter")
    }

    pub fn n_subgraphs(&self) -> usize {
        self.chi0.nrows()
    }

    pub fn n_clusters(&self) -> usize {
        self.chi0.ncols()
    }

    pub fn n_types(&self) -> usize {
        self.xi0.dim().2
    }
}

/// How to build priors for a given `(S, K, C)`; lets one fit configuration
/// be reused across several values of `K`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum PriorSpec<T> {
    #[default]
    Jeffreys,
    Uniform,
    Constant(T),
    Explicit(Box<PriorHyperparams<T>>),
}

impl<T: Scalar> PriorSpec<T> {
    pub fn materialize(
        &self,
        n_subgraphs: usize,
        n_clusters: usize,
        n_types: usize,
    ) -> Result<PriorHyperparams<T>> {
        match self {
            PriorSpec::Jeffreys => Ok(PriorHyperparams::jeffreys(n_subgraphs, n_clusters, n_types)),
            PriorSpec::Uniform => Ok(PriorHyperparams::uniform(n_subgraphs, n_clusters, n_types)),
            PriorSpec::Constant(v) => {
                PriorHyperparams::constant(n_subgraphs, n_clusters, n_types, *v)
            }
            PriorSpec::Explicit(p) => {
                if p.n_subgraphs() != n_subgraphs
                    || p.n_clusters() != n_clusters
                    || p.n_types() != n_types
                {
                    return Err(RsmError::DimensionMismatch(format!(
                        "explicit priors are for (S, K, C) = ({}, {}, {}), needed ({n_subgraphs}, {n_clusters}, {n_types})",
                        p.n_subgraphs(),
                        p.n_clusters(),
                        p.n_types()
                    )));
                }
                Ok((**p).clone())
            }
        }
    }
}

/// Responsibilities `tau` (N×K) and the posterior hyperparameters
/// `chi`, `(a, b)`, `xi` of the factorized approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalState<T> {
    pub tau: Array2<T>,
    pub chi: Array2<T>,
    pub a: Array2<T>,
    pub b: Array2<T>,
    pub xi: Array3<T>,
}

impl<T: Scalar> VariationalState<T> {
    pub fn n_clusters(&self) -> usize {
        self.tau.ncols()
    }

    /// Largest absolute entrywise change of `chi`, `a`, `b` and `xi`.
    pub fn max_hyper_change(&self, other: &Self) -> T {
        let pairs = self
            .chi
            .iter()
            .zip(other.chi.iter())
            .chain(self.a.iter().zip(other.a.iter()))
            .chain(self.b.iter().zip(other.b.iter()))
            .chain(self.xi.iter().zip(other.xi.iter()));
        pairs.fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
    }

    /// MAP cluster of each vertex; ties go to the smallest cluster index.
    pub fn map_labels(&self) -> Vec<usize> {
        map_labels(&self.tau)
    }

    /// Posterior means of `alpha`, `gamma` and `pi`.
    pub fn posterior_means(&self) -> RsmParams<T> {
        let mut alpha = self.chi.clone();
        for mut row in alpha.outer_iter_mut() {
            let total: T = row.iter().copied().sum();
            row.mapv_inplace(|v| v / total);
        }
        let gamma = ndarray::Zip::from(&self.a)
            .and(&self.b)
            .map_collect(|&a, &b| a / (a + b));
        let mut pi = self.xi.clone();
        let totals = self.xi.sum_axis(Axis(2));
        for ((k, l, _), v) in pi.indexed_iter_mut() {
            *v = *v / totals[[k, l]];
        }
        RsmParams { alpha, gamma, pi }
    }
}

pub fn map_labels<T: Scalar>(tau: &Array2<T>) -> Vec<usize> {
    tau.outer_iter()
        .map(|row| {
            let mut best = 0;
            for (k, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = k;
                }
            }
            best
        })
        .collect()
}

/// Summary of one VBEM restart.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartSummary<T> {
    pub index: usize,
    pub final_elbo: T,
    pub n_iterations: usize,
    pub converged: bool,
}

/// Outcome of a fit: the best restart's state plus metadata on all restarts.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub state: VariationalState<T>,
    /// Lower bound after every M step; entry 0 follows the initial M step.
    pub elbo_trace: Vec<T>,
    /// 0-indexed MAP clusters.
    pub map_labels: Vec<usize>,
    pub n_iterations: usize,
    pub restart_index: usize,
    pub converged: bool,
    pub restarts: Vec<RestartSummary<T>>,
}

impl<T: Scalar> FitResult<T> {
    pub fn final_elbo(&self) -> T {
        *self.elbo_trace.last().expect("elbo trace is never empty")
    }

    pub fn n_restarts_converged(&self) -> usize {
        self.restarts.iter().filter(|r| r.converged).count()
    }
}
