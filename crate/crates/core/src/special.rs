//! Log-gamma, digamma and the Dirichlet/Beta normalizers built on them.
//!
//! Both functions shift the argument above `SHIFT` with the recurrence
//! relation and then use the asymptotic (Stirling) series, which is
//! accurate to ~1e-16 from there on. Arguments must be strictly positive.

use crate::scalar::Scalar;

const SHIFT: f64 = 12.0;

// Bernoulli-number coefficients B_2n / (2n (2n - 1)) in powers of 1/x^2.
const LN_GAMMA_SERIES: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

// B_2n / 2n in powers of 1/x^2.
const DIGAMMA_SERIES: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

fn poly<T: Scalar>(z: T, coeffs: &[f64]) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * z + T::lit(c))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    if x.is_nan() || x <= T::zero() {
        return T::nan();
    }
    if x.is_infinite() {
        return x;
    }
    let shift = T::lit(SHIFT);
    let mut x = x;
    // ln Γ(x) = ln Γ(x + n) - ln(x (x + 1) ... (x + n - 1))
    let mut prod = T::one();
    while x < shift {
        prod = prod * x;
        x = x + T::one();
    }
    let recip = x.recip();
    let series = recip * poly(recip * recip, &LN_GAMMA_SERIES);
    let half_ln_two_pi = T::lit(0.918_938_533_204_672_8);
    (x - T::lit(0.5)) * x.ln() - x + half_ln_two_pi + series - prod.ln()
}

/// Digamma `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
pub fn digamma<T: Scalar>(x: T) -> T {
    if x.is_nan() || x <= T::zero() {
        return T::nan();
    }
    if x.is_infinite() {
        return x;
    }
    let shift = T::lit(SHIFT);
    let mut x = x;
    let mut acc = T::zero();
    while x < shift {
        acc = acc - x.recip();
        x = x + T::one();
    }
    let recip2 = (x * x).recip();
    let series = recip2 * poly(recip2, &DIGAMMA_SERIES);
    acc + x.ln() - T::lit(0.5) / x - series
}

/// `ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b)`.
pub fn ln_beta<T: Scalar>(a: T, b: T) -> T {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln C(x) = Σ ln Γ(x_d) - ln Γ(Σ x_d)`, the log normalizer of a Dirichlet.
pub fn ln_dirichlet_norm<T: Scalar>(x: impl IntoIterator<Item = T>) -> T {
    let mut total = T::zero();
    let mut acc = T::zero();
    for v in x {
        total = total + v;
        acc = acc + ln_gamma(v);
    }
    acc - ln_gamma(total)
}

/// `ln Σ exp(x_i)` with the terms accumulated in ascending order, so the
/// result does not depend on the input order.
pub fn log_sum_exp<T: Scalar>(values: &[T]) -> T {
    if values.is_empty() {
        return T::neg_infinity();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let max = sorted[sorted.len() - 1];
    if max.is_infinite() {
        return max;
    }
    let sum: T = sorted.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}
