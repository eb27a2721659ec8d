//! Log-gamma and related special functions.
//!
//! Everything here works on natural logarithms so that quantities such as
//! `n!` or `alpha^n / n!` stay representable for very large `n`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::log_sum_exp;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this argument the Stirling series is not used directly.
const STIRLING_THRESHOLD: f64 = 20.0;

/// `B_{2k} / (2k (2k-1))` for k = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING_COEFFS {
        series += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "log_gamma",
            value: x,
        });
    }
    if x.fract() == 0.0 && x <= 171.0 {
        // (x-1)! is representable; take the log of the exact-ish product.
        let n = x as u32 - 1;
        let fact: f64 = (2..=n).map(f64::from).product();
        return Ok(fact.ln());
    }
    if x >= STIRLING_THRESHOLD {
        return Ok(stirling(x));
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_THRESHOLD {
        product *= shifted;
        shifted += 1.0;
    }
    Ok(stirling(shifted) - product.ln())
}

/// `ln n!`.
pub fn log_factorial(n: u64) -> f64 {
    // n + 1 >= 1 so the domain check cannot fail
    log_gamma(n as f64 + 1.0).unwrap_or(f64::NAN)
}

/// `ln sqrt(alpha^n / n!)`, the log of the coefficient of `z^n` in the
/// orthonormal monomial `e_n`.
pub fn log_basis_coeff(n: u64, alpha: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 * alpha.ln() - log_factorial(n))
}

/// Regularized upper incomplete gamma `Q(n + 1, x) = e^{-x} sum_{k<=n} x^k / k!`
/// for integer order `n + 1`.
pub fn regularized_upper_gamma_int(n: u64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let lx = x.ln();
    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut log_term = -x;
    terms.push(log_term);
    for k in 1..=n {
        log_term += lx - (k as f64).ln();
        terms.push(log_term);
    }
    log_sum_exp(&terms).exp().min(1.0)
}

/// Regularized lower incomplete gamma `P(n + 1, x) = gamma(n + 1, x) / n!`.
pub fn regularized_lower_gamma_int(n: u64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x > n as f64 + 1.0 {
        return 1.0 - regularized_upper_gamma_int(n, x);
    }
    // e^{-x} sum_{k>n} x^k / k!, terms decrease once k > x
    let lx = x.ln();
    let mut log_term = -x + (n + 1) as f64 * lx - log_factorial(n + 1);
    let mut terms = vec![log_term];
    let mut k = n + 1;
    loop {
        k += 1;
        log_term += lx - (k as f64).ln();
        terms.push(log_term);
        if log_term < terms[0] - 40.0 {
            break;
        }
    }
    log_sum_exp(&terms).exp()
}

/// Smallest radius `R` with `Q(degree + 1, weight * R^2) < tol`, i.e. the
/// mass of `|z|^{2 degree} e^{-weight |z|^2}` outside the disk of radius `R`
/// is below `tol` times the total.
pub fn tail_cutoff_radius(degree: u64, weight: f64, tol: f64) -> f64 {
    let tail = |x: f64| regularized_upper_gamma_int(degree, x);
    let mut lo = 0.0;
    let mut hi = (degree as f64 + 1.0).max(1.0);
    while tail(hi) >= tol {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi / weight).sqrt()
}

/// `ln int_C |z|^{2n} e^{-alpha |z|^2} dA = ln(pi n! / alpha^{n+1})`.
pub fn log_gaussian_moment(n: u64, alpha: f64) -> f64 {
    PI.ln() + log_factorial(n) - (n as f64 + 1.0) * alpha.ln()
}
