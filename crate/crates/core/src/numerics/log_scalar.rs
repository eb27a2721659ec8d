use std::f64::consts::PI;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number stored as `exp(log_magnitude) * exp(i * phase)`.
///
/// Zero is encoded as `log_magnitude = -inf`, `phase = 0`. Phases are kept in
/// `[-pi, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogScalar {
    log_magnitude: f64,
    phase: f64,
}

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_phase(theta: f64) -> f64 {
    if (-PI..PI).contains(&theta) {
        return theta;
    }
    let wrapped = (theta + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2*pi
    if wrapped >= PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar {
        log_magnitude: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub const ONE: LogScalar = LogScalar {
        log_magnitude: 0.0,
        phase: 0.0,
    };

    pub fn new(log_magnitude: f64, phase: f64) -> Self {
        if log_magnitude == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogScalar {
            log_magnitude,
            phase: wrap_phase(phase),
        }
    }

    /// Positive real number `exp(log_magnitude)`.
    pub fn from_ln(log_magnitude: f64) -> Self {
        Self::new(log_magnitude, 0.0)
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        Self::new(z.norm().ln(), z.arg())
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.log_magnitude, -self.phase)
    }

    /// Multiplies by the positive real `exp(delta)`.
    pub fn scale_ln(&self, delta: f64) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self::new(self.log_magnitude + delta, self.phase)
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        let n = f64::from(n);
        Self::new(n * self.log_magnitude, n * self.phase)
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;

    fn mul(self, rhs: LogScalar) -> LogScalar {
        if self.is_zero() || rhs.is_zero() {
            return LogScalar::ZERO;
        }
        LogScalar::new(
            self.log_magnitude + rhs.log_magnitude,
            self.phase + rhs.phase,
        )
    }
}

impl Div for LogScalar {
    type Output = LogScalar;

    fn div(self, rhs: LogScalar) -> LogScalar {
        if self.is_zero() {
            return LogScalar::ZERO;
        }
        LogScalar::new(
            self.log_magnitude - rhs.log_magnitude,
            self.phase - rhs.phase,
        )
    }
}

impl From<Complex64> for LogScalar {
    fn from(z: Complex64) -> Self {
        LogScalar::from_complex(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_encoding_has_zero_phase() {
        let z = LogScalar::from_complex(Complex64::new(0.0, 0.0));
        assert!(z.is_zero());
        assert_eq!(z.phase(), 0.0);
        assert_eq!(z.to_complex(), Complex64::new(0.0, 0.0));
        assert!((z * LogScalar::from_real(3.0)).is_zero());
    }

    #[test]
    fn wrap_lands_in_half_open_interval() {
        assert_eq!(wrap_phase(PI), -PI);
        assert!((wrap_phase(3.0 * PI + 0.5) - (-PI + 0.5)).abs() < 1e-12);
        assert!((wrap_phase(-PI - 0.25) - (PI - 0.25)).abs() < 1e-12);
        assert_eq!(wrap_phase(-PI), -PI);
    }

    #[test]
    fn negative_real_has_phase_minus_pi() {
        let x = LogScalar::from_real(-2.0);
        assert_eq!(x.phase(), -PI);
        assert!((x.to_complex() - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn product_adds_logs_and_wraps(
            la in -300.0f64..300.0, pa in -10.0f64..10.0,
            lb in -300.0f64..300.0, pb in -10.0f64..10.0,
        ) {
            let a = LogScalar::new(la, pa);
            let b = LogScalar::new(lb, pb);
            let c = a * b;
            prop_assert!((c.log_magnitude() - (la + lb)).abs() <= 1e-12 * (1.0 + la.abs() + lb.abs()));
            prop_assert!(c.phase() >= -PI && c.phase() < PI);
            let d = (c.phase() - (pa + pb)).rem_euclid(2.0 * PI);
            prop_assert!(d < 1e-9 || (2.0 * PI - d) < 1e-9);
        }

        #[test]
        fn complex_round_trip(lm in -700.0f64..700.0, ph in -3.0f64..3.0) {
            let x = LogScalar::new(lm, ph);
            let back = LogScalar::from_complex(x.to_complex());
            prop_assert!((back.log_magnitude() - lm).abs() <= 1e-14 * lm.abs().max(1.0));
            prop_assert!((back.phase() - ph).abs() <= 1e-14);
        }
    }
}
