//! Central differences, used only as independent cross-checks.

use num_complex::Complex;

use super::{lit, Scalar};

/// (f(x+h) − f(x−h)) / 2h
pub fn central_difference<T: Scalar, F: Fn(T) -> T>(f: F, x: T, h: T) -> T {
    (f(x + h) - f(x - h)) / (lit::<T>(2.0) * h)
}

/// Central difference along the real direction for a holomorphic `f`.
pub fn central_difference_complex<T: Scalar, F: Fn(Complex<T>) -> Complex<T>>(
    f: F,
    z: Complex<T>,
    h: T,
) -> Complex<T> {
    let dz = Complex::new(h, T::zero());
    (f(z + dz) - f(z - dz)) / (lit::<T>(2.0) * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_derivative() {
        let d = central_difference(|x: f64| x.exp(), 1.0, 1e-5);
        assert!((d - 1f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn complex_sine() {
        let z = Complex::new(0.4, 0.3);
        let d = central_difference_complex(|w: Complex<f64>| w.sin(), z, 1e-5);
        assert!((d - z.cos()).norm() < 1e-9);
    }
}
