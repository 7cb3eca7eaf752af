//! Choosing the number of latent clusters by the variational lower bound.

use std::collections::BTreeMap;

use crate::error::{Result, RsmError};
use crate::inference::{fit, FitConfig};
use crate::network::TypedNetwork;
use crate::params::FitResult;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionEntry<T> {
    pub fit: FitResult<T>,
    pub best_elbo: T,
}

#[derive(Debug)]
pub struct SelectionResult<T> {
    pub per_k: BTreeMap<usize, SelectionEntry<T>>,
    /// Values of K for which every restart failed.
    pub excluded: Vec<(usize, RsmError)>,
    pub k_star: usize,
}

impl<T: Scalar> SelectionResult<T> {
    /// `(K, best lower bound, converged restarts)` in increasing K.
    pub fn curve(&self) -> Vec<(usize, T, usize)> {
        self.per_k
            .iter()
            .map(|(&k, e)| (k, e.best_elbo, e.fit.n_restarts_converged()))
            .collect()
    }
}

/// Seed used for candidate `k`: `base + 1000 k`.
pub fn seed_for_k(base: u64, k: usize) -> u64 {
    base.wrapping_add(1000u64.wrapping_mul(k as u64))
}

/// Fits every K in `k_range` (duplicates ignored) with `template`, whose
/// `n_clusters` and `seed` are overridden per K, and selects the K with
/// the highest lower bound; ties go to the smallest K.
pub fn select_k<T: Scalar>(
    net: &TypedNetwork,
    k_range: impl IntoIterator<Item = usize>,
    template: &FitConfig<T>,
) -> Result<SelectionResult<T>> {
    let mut ks: Vec<usize> = k_range.into_iter().collect();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() {
        return Err(RsmError::Usage("empty K range".into()));
    }
    if ks[0] == 0 {
        return Err(RsmError::Usage("K must be >= 1".into()));
    }
    let mut per_k = BTreeMap::new();
    let mut excluded = Vec::new();
    for k in ks {
        let config = FitConfig {
            n_clusters: k,
            seed: seed_for_k(template.seed, k),
            ..template.clone()
        };
        match fit(net, &config) {
            Ok(result) => {
                per_k.insert(
                    k,
                    SelectionEntry {
                        best_elbo: result.final_elbo(),
                        fit: result,
                    },
                );
            }
            Err(e) => excluded.push((k, e)),
        }
    }
    let mut k_star = None;
    let mut best = T::neg_infinity();
    for (&k, entry) in &per_k {
        if k_star.is_none() || entry.best_elbo > best {
            best = entry.best_elbo;
            k_star = Some(k);
        }
    }
    match k_star {
        Some(k_star) => Ok(SelectionResult {
            per_k,
            excluded,
            k_star,
        }),
        None => Err(excluded
            .into_iter()
            .next()
            .map(|(_, e)| e)
            .unwrap_or_else(|| RsmError::Usage("no candidate K".into()))),
    }
}
