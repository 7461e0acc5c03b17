//! Lanczos gamma function (g = 7, nine coefficients).

use super::{lit, Scalar};

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Scalar>(x: T) -> T {
    // x is the shifted argument (z - 1)
    let mut acc = lit::<T>(COEFFS[0]);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (x + lit(i as f64));
    }
    acc
}

/// Γ(x) for real `x`, with reflection below 1/2. Poles return NaN.
pub fn gamma<T: Scalar>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        if x == x.floor() {
            return T::nan();
        }
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let z = x - T::one();
    let t = z + lit(G) + half;
    let sqrt_2pi = (T::PI() + T::PI()).sqrt();
    sqrt_2pi * t.powf(z + half) * (-t).exp() * lanczos_sum(z)
}

/// ln|Γ(x)|.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        if x == x.floor() {
            return T::infinity();
        }
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let z = x - T::one();
    let t = z + lit(G) + half;
    half * (T::PI() + T::PI()).ln() + (z + half) * t.ln() - t + lanczos_sum(z).ln()
}
