//! Log-scale scalars, special functions and plane quadrature.

mod log_scalar;
mod quadrature;
mod special;

pub use log_scalar::{wrap_phase, LogScalar};
pub use quadrature::{integrate_plane, GaussLegendre, PolarGrid};
pub use special::{
    log_basis_coeff, log_factorial, log_gamma, log_gaussian_moment, regularized_lower_gamma_int,
    regularized_upper_gamma_int, tail_cutoff_radius,
};

use num_complex::Complex64;

/// `ln sum_i exp(x_i)`, `-inf` for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let mut acc = NeumaierSum::default();
    for &x in xs {
        acc.add((x - max).exp());
    }
    max + acc.total().ln()
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated summation of complex values, component-wise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let big = 9.0e10;
        let s: NeumaierSum = [big, 1.25e-6, -0.5 * big, -0.5 * big, 3.0e-7].into_iter().collect();
        assert!((s.total() - 1.55e-6).abs() < 1e-20);
    }

    #[test]
    fn log_sum_exp_handles_extremes() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, 0.0]), 0.0);
    }
}
