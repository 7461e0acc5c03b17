use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use hbspace::numerics::{compensated_sum_real, extrapolate_limit, integrate_fixed};

/// Exact `Σ_{n=1}^{N} (−1)^{n+1}/n`.
fn alternating_harmonic(n_max: u64) -> BigRational {
    let mut s = BigRational::zero();
    for n in 1..=n_max {
        let t = BigRational::new(BigInt::from(1), BigInt::from(n));
        if n % 2 == 1 {
            s += t;
        } else {
            s -= t;
        }
    }
    s
}

#[test]
fn alternating_harmonic_sums() {
    let mut cuts = Vec::new();
    let mut sums = Vec::new();
    for n in [200u64, 400, 800, 1600, 3200, 6400] {
        let terms: Vec<f64> = (1..=n).map(|k| if k % 2 == 1 { 1.0 / k as f64 } else { -1.0 / k as f64 }).collect();
        // exact sum of the rounded terms
        let exact_rounded: BigRational = terms.iter().map(|&t| BigRational::from_f64(t).unwrap()).sum();
        let got = compensated_sum_real(terms.iter().copied());
        let err = (BigRational::from_f64(got).unwrap() - &exact_rounded).abs().to_f64().unwrap();
        assert!(err <= f64::EPSILON * got.abs(), "N {n}: {err:e}");
        // and the rational partial sum itself, up to the term roundings
        let exact = alternating_harmonic(n).to_f64().unwrap();
        assert!((got - exact).abs() <= 1e-15, "N {n}");
        cuts.push(n as f64);
        sums.push(got);
    }
    // S_N = ln 2 − 1/(2N) + O(N⁻²) for even N
    let lim = extrapolate_limit(&cuts, &sums, &[1.0, 2.0, 3.0, 4.0]).unwrap();
    assert!((lim.value - std::f64::consts::LN_2).abs() <= 1e-13, "{}", lim.value - std::f64::consts::LN_2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn permutation_changes_sum_little(v in prop::collection::vec(-1e6f64..1e6, 2..400), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut w = v.clone();
        w.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = compensated_sum_real(v.iter().copied());
        let b = compensated_sum_real(w.iter().copied());
        let mass: f64 = v.iter().map(|x| x.abs()).sum();
        prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * mass);
    }

    #[test]
    fn halving_panels_gains_eight_bits(c in 0.5f64..3.0, d in -2.0f64..2.0) {
        let f = |x: f64| (c * x).exp() * (d * x).cos();
        // ∫₀¹ e^{cx} cos(dx) dx
        let z = num_complex::Complex::new(c, d);
        let exact = ((z.exp() - 1.0) / z).re;
        let mut prev = f64::INFINITY;
        for n in [1usize, 2, 4] {
            let e = (integrate_fixed(f, 0.0, 1.0, n) - exact).abs();
            if prev > 1e-13 && e > 1e-14 {
                prop_assert!(prev / e >= 256.0, "n {n}: {prev:e} -> {e:e}");
            }
            prev = e;
        }
    }
}
