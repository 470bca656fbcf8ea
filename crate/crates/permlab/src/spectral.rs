//! Closed-form spectra of |perm|^2, correlation curves, truncation tails,
//! and the permutation-pair combinatorics behind them.
//!
//! For an n x n Gaussian matrix, the squared permanent decomposes into
//! orthogonal components of even degree 2m, m = 0..n. The squared norm of
//! the degree-2m component is `(n!)^2` for the complex ensemble and
//! `(m+1) * (n!)^2` for the real one; everything in this module is a finite
//! sum over those weights.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::{EnsembleKind, NoiseParameter};

/// Largest order for which weights are kept as exact integers.
pub const MAX_EXACT_ORDER: usize = 20;
/// Brute-force cap for [`cycle_sum_identity`].
pub const MAX_CYCLE_SUM_ORDER: usize = 10;

/// n! as u128; exact for n <= 33.
pub(crate) fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// n! as f64 (rounded above 2^53; adequate for coefficient magnitudes).
pub fn factorial_f64(n: usize) -> f64 {
    (1..=n as u64).map(|k| k as f64).product()
}

/// ln(n!) by direct accumulation; used where (n!)^2 would overflow u128.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n as u64).map(|k| (k as f64).ln()).sum()
}

fn degree_weight_shape(kind: EnsembleKind, m: usize) -> f64 {
    match kind {
        EnsembleKind::Complex => 1.0,
        EnsembleKind::Real => (m + 1) as f64,
    }
}

/// Exact degree weights W_2m(n), m = 0..n, of the squared-permanent
/// expansion for one ensemble kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralProfile {
    n: usize,
    kind: EnsembleKind,
    weights: Vec<u128>,
}

impl SpectralProfile {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    /// Exact weights, index m = 0..=n.
    pub fn weights(&self) -> &[u128] {
        &self.weights
    }

    pub fn weight_f64(&self, m: usize) -> f64 {
        self.weights[m] as f64
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(|&w| w as f64).collect()
    }

    /// Exact sum of all weights; equals the fourth moment of |perm|.
    pub fn sum_exact(&self) -> BigUint {
        self.weights.iter().map(|&w| BigUint::from(w)).sum()
    }
}

/// The closed-form spectral profile of order n.
pub fn degree_weights(n: usize, kind: EnsembleKind) -> Result<SpectralProfile> {
    if n == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    if n > MAX_EXACT_ORDER {
        return Err(Error::capacity(format!(
            "exact degree weights are limited to n <= {MAX_EXACT_ORDER}, got {n}"
        )));
    }
    let fact_sq = factorial_u128(n).pow(2);
    let weights = (0..=n)
        .map(|m| match kind {
            EnsembleKind::Complex => fact_sq,
            EnsembleKind::Real => (m as u128 + 1) * fact_sq,
        })
        .collect();
    Ok(SpectralProfile { n, kind, weights })
}

/// Exact fourth moment of |perm| for an n x n Gaussian matrix:
/// `(n+1) * (n!)^2` complex, `C(n+2, 2) * (n!)^2` real.
pub fn fourth_moment_exact(n: usize, kind: EnsembleKind) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    if n > MAX_EXACT_ORDER {
        return Err(Error::capacity(format!(
            "exact fourth moment is limited to n <= {MAX_EXACT_ORDER}, got {n}"
        )));
    }
    let fact_sq = BigUint::from(factorial_u128(n)).pow(2);
    let mult = match kind {
        EnsembleKind::Complex => BigUint::from(n as u64 + 1),
        EnsembleKind::Real => BigUint::from((n as u64 + 1) * (n as u64 + 2) / 2),
    };
    Ok(mult * fact_sq)
}

/// Fourth moment of |perm| as a double. Exact integer arithmetic up to
/// n = 20, log-accumulated beyond that.
pub fn fourth_moment(n: usize, kind: EnsembleKind) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    if n <= MAX_EXACT_ORDER {
        let exact = fourth_moment_exact(n, kind)?;
        let digits = exact.to_string();
        return Ok(digits.parse::<f64>().expect("decimal digits parse as f64"));
    }
    let mult = match kind {
        EnsembleKind::Complex => (n as f64 + 1.0).ln(),
        EnsembleKind::Real => ((n as f64 + 1.0) * (n as f64 + 2.0) / 2.0).ln(),
    };
    Ok((mult + 2.0 * ln_factorial(n)).exp())
}

/// Correlation between the ideal and noisy squared permanent, evaluated from
/// the degree-weight sums:
///
/// `corr = sum_m W_2m rho^2m / sqrt(sum_m W_2m) / sqrt(sum_m W_2m rho^4m)`
///
/// with m running over 1..=n. The factorial factor cancels, so any n is
/// accepted. `epsilon = 0` returns 1 by convention (the noiseless value is
/// perfectly correlated with itself); `epsilon = 1` returns the limit
/// `sqrt(W_2 / sum W)`.
pub fn corr_closed_form(n: usize, noise: &NoiseParameter, kind: EnsembleKind) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    if noise.epsilon() == 0.0 {
        return Ok(1.0);
    }
    let t = noise.rho_sq();
    // Factor t^(m-1) out of numerator and t^(2(m-1)) out of the noisy norm so
    // the expression stays finite as t -> 0 (epsilon -> 1).
    let mut num = 0.0;
    let mut noisy_norm = 0.0;
    let mut ideal_norm = 0.0;
    let mut t_pow = 1.0;
    let mut t2_pow = 1.0;
    for m in 1..=n {
        let w = degree_weight_shape(kind, m);
        num += w * t_pow;
        noisy_norm += w * t2_pow;
        ideal_norm += w;
        t_pow *= t;
        t2_pow *= t * t;
    }
    Ok(num / (ideal_norm.sqrt() * noisy_norm.sqrt()))
}

/// The complex-ensemble correlation in its geometric-series form,
/// `sqrt((1 - q)(2 - eps) / (eps n (1 + q)))` with `q = (1 - eps)^n`.
/// Algebraically identical to [`corr_closed_form`] with the complex kind.
pub fn corr_geometric_form(n: usize, noise: &NoiseParameter) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    let eps = noise.epsilon();
    if eps == 0.0 {
        return Ok(1.0);
    }
    let q = (1.0 - eps).powi(n as i32);
    Ok(((1.0 - q) * (2.0 - eps) / (eps * n as f64 * (1.0 + q))).sqrt())
}

/// Large-n limit of the complex correlation at noise level `eps = c / n`:
/// `sqrt(2 (1 - e^-c) / (c (1 + e^-c)))`.
pub fn corr_asymptotic(c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::invalid(format!("c must be positive and finite, got {c}")));
    }
    // 1 - e^-c via exp_m1 to keep precision for tiny c.
    let one_minus = -(-c).exp_m1();
    Ok((2.0 * one_minus / (c * (2.0 - one_minus))).sqrt())
}

/// Fraction of the noisy signal's centered squared norm that lies above
/// degree d:
///
/// `sum_{2m > d} W_2m rho^4m / sum_{m >= 1} W_2m rho^4m`
///
/// This is the exact relative squared error of the degree-d truncated
/// evaluator.
pub fn truncation_error_bound(
    n: usize,
    noise: &NoiseParameter,
    d: usize,
    kind: EnsembleKind,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    if d > 2 * n {
        return Err(Error::invalid(format!(
            "degree cutoff {d} exceeds the top degree {}",
            2 * n
        )));
    }
    let t2 = noise.rho_sq() * noise.rho_sq();
    let first_kept_out = d / 2 + 1; // smallest m with 2m > d
    let mut num = 0.0;
    let mut den = 0.0;
    let mut t2_pow = 1.0; // t2^(m-1), factored so epsilon = 1 stays finite
    for m in 1..=n {
        let w = degree_weight_shape(kind, m);
        den += w * t2_pow;
        if m >= first_kept_out {
            num += w * t2_pow;
        }
        t2_pow *= t2;
    }
    Ok(num / den)
}

/// Cycle statistics of `sigma^-1 tau` for two permutations of the same order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermutationPairStats {
    pub order: usize,
    pub fixed_points: usize,
    pub cycles: usize,
    pub cycles_ge2: usize,
}

fn validate_permutation(p: &[usize]) -> Result<()> {
    let n = p.len();
    let mut seen = vec![false; n];
    for &v in p {
        if v >= n || seen[v] {
            return Err(Error::invalid("not a permutation (0-based image form)"));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Fixed points and cycle counts of `sigma^-1 tau`. Permutations are given
/// in 0-based image form (`sigma[i]` is the image of `i`).
pub fn pair_stats(sigma: &[usize], tau: &[usize]) -> Result<PermutationPairStats> {
    if sigma.len() != tau.len() {
        return Err(Error::invalid(format!(
            "permutation orders differ: {} vs {}",
            sigma.len(),
            tau.len()
        )));
    }
    validate_permutation(sigma)?;
    validate_permutation(tau)?;
    let n = sigma.len();
    let mut inv = vec![0usize; n];
    for (i, &v) in sigma.iter().enumerate() {
        inv[v] = i;
    }
    let composed: Vec<usize> = (0..n).map(|i| inv[tau[i]]).collect();

    let mut seen = vec![false; n];
    let mut fixed_points = 0;
    let mut cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            len += 1;
            j = composed[j];
        }
        if len == 1 {
            fixed_points += 1;
        }
    }
    Ok(PermutationPairStats {
        order: n,
        fixed_points,
        cycles,
        cycles_ge2: cycles - fixed_points,
    })
}

/// Brute-force `sum over pi in S_n of 2^cyc(pi)`; equals `(n + 1)!`.
pub fn cycle_sum_identity(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    if n > MAX_CYCLE_SUM_ORDER {
        return Err(Error::capacity(format!(
            "cycle sum enumeration is limited to n <= {MAX_CYCLE_SUM_ORDER}, got {n}"
        )));
    }
    let mut total: u64 = 0;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut add = |p: &[usize]| {
        let mut seen = vec![false; p.len()];
        let mut cycles = 0u32;
        for start in 0..p.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = p[j];
            }
        }
        total += 1u64 << cycles;
    };
    add(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            add(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}
