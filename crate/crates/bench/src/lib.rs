//! Shared symbols for the benchmarks.

use num_complex::Complex64;

use fockkit::{MeasureSymbol, PointMass};

pub fn gaussian() -> MeasureSymbol {
    MeasureSymbol::gaussian(Complex64::new(1.0, 0.0), 1.0).expect("valid gaussian")
}

pub fn disk() -> MeasureSymbol {
    MeasureSymbol::uniform_disk(Complex64::new(0.0, 0.0), 1.0, Complex64::new(1.0, 0.0)).expect("valid disk")
}

pub fn scattered_points(count: usize) -> MeasureSymbol {
    let masses = (0..count)
        .map(|k| {
            let t = k as f64;
            PointMass {
                location: Complex64::from_polar(1.5 * (0.3 + 0.7 * (t * 0.37).sin().abs()), t * 2.4),
                weight: Complex64::new(1.0 / (1.0 + t), 0.0),
            }
        })
        .collect();
    MeasureSymbol::point_masses(masses)
}
