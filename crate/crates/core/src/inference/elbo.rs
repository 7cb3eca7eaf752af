use crate::error::{Result, RsmError};
use crate::network::TypedNetwork;
use crate::params::{PriorHyperparams, VariationalState};
use crate::scalar::Scalar;
use crate::special::{ln_beta, ln_dirichlet_norm};

/// Variational lower bound, valid for a state whose hyperparameters were
/// produced by an M step from its own responsibilities:
///
/// ```text
/// L = Σ_rs ln B(a_rs, b_rs)/B(a0_rs, b0_rs) + Σ_s ln C(χ_s)/C(χ0_s)
///   + Σ_kl ln C(Ξ_kl)/C(Ξ0_kl) - Σ_ik τ_ik ln τ_ik
/// ```
///
/// Zero responsibilities contribute nothing to the entropy term.
pub fn elbo<T: Scalar>(
    state: &VariationalState<T>,
    priors: &PriorHyperparams<T>,
    net: &TypedNetwork,
) -> Result<T> {
    debug_assert_eq!(state.tau.nrows(), net.n_vertices());
    let mut total = T::zero();
    for ((&a, &b), (&a0, &b0)) in state
        .a
        .iter()
        .zip(state.b.iter())
        .zip(priors.a0.iter().zip(priors.b0.iter()))
    {
        total = total + ln_beta(a, b) - ln_beta(a0, b0);
    }
    for (row, row0) in state.chi.outer_iter().zip(priors.chi0.outer_iter()) {
        total = total + ln_dirichlet_norm(row.iter().copied())
            - ln_dirichlet_norm(row0.iter().copied());
    }
    let (k1, k2, _) = state.xi.dim();
    for k in 0..k1 {
        for l in 0..k2 {
            let slice = state.xi.slice(ndarray::s![k, l, ..]);
            let slice0 = priors.xi0.slice(ndarray::s![k, l, ..]);
            total = total + ln_dirichlet_norm(slice.iter().copied())
                - ln_dirichlet_norm(slice0.iter().copied());
        }
    }
    let entropy: T = state
        .tau
        .iter()
        .map(|&t| {
            if t > T::zero() {
                -t * t.ln()
            } else {
                T::zero()
            }
        })
        .sum();
    total = total + entropy;
    if total.is_finite() {
        Ok(total)
    } else {
        Err(RsmError::NonFinite("lower bound"))
    }
}
