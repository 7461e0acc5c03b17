use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hbspace::identities::{check_partial_fraction, hilbert_form, summability_partial_sums, HilbertFormInput, PartialFraction};
use hbspace::nodes::find_nodes;
use hbspace::numerics::gamma;
use hbspace::{Complex, SpaceDescriptor};

#[test]
fn summability_sums_settle() {
    let spaces = [
        SpaceDescriptor::paley_wiener(PI).unwrap(),
        SpaceDescriptor::bessel(0.0).unwrap(),
        SpaceDescriptor::bessel(0.5).unwrap(),
        SpaceDescriptor::bessel(2.0).unwrap(),
    ];
    for sp in spaces {
        let sums = summability_partial_sums(&sp, &[25.0, 50.0, 100.0, 200.0, 400.0, 800.0]).unwrap();
        let steps: Vec<f64> = sums.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps.iter().all(|&s| s >= 0.0), "{sp:?}: {sums:?}");
        assert!(steps.windows(2).all(|w| w[1] < w[0]), "{sp:?}: steps {steps:?}");
    }
}

fn form(xi: Vec<f64>, a: Vec<Complex>, sigma: f64) -> (f64, f64, f64) {
    let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let r = hilbert_form(&HilbertFormInput { xi, a, sigma }).unwrap();
    assert!(r.within);
    (r.form / norm, r.lower / norm, r.upper / norm)
}

#[test]
fn hilbert_form_probe() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let sigma = 1.0;
    let upper = PI * PI / 3.0;
    let mut best = f64::NEG_INFINITY;
    for _ in 0..100_000 {
        let n = rng.gen_range(2..12);
        let mut x = 0.0;
        let xi = (0..n)
            .map(|_| {
                x += sigma * (1.0 + 1e-9 + rng.gen_range(0.0..0.5));
                x
            })
            .collect();
        let a = (0..n).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let (f, lo, up) = form(xi, a, sigma);
        assert!(f <= up && f >= lo);
        best = best.max(f);
    }
    assert!(best <= upper);
    // arithmetic progression: constant data approaches the upper bound,
    // alternating data the lower one
    let n = 400;
    let xi: Vec<f64> = (0..n).map(|k| k as f64 * sigma).collect();
    let (f, _, up) = form(xi.clone(), vec![Complex::new(1.0, 0.0); n], sigma);
    assert!(f >= 0.6 * up, "{f} vs {up}");
    let alt = (0..n).map(|k| Complex::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
    let (f, lo, _) = form(xi, alt, sigma);
    assert!(f <= 0.6 * lo, "{f} vs {lo}");
}

#[test]
fn gamma_values() {
    assert!((gamma(0.5f64) - PI.sqrt()).abs() <= 1e-12 * PI.sqrt());
    let mut fact = 1.0;
    for n in 0..=10 {
        if n > 0 {
            fact *= n as f64;
        }
        assert!((gamma(n as f64 + 1.0) - fact).abs() <= 1e-12 * fact, "{n}");
    }
}

fn bessel_space() -> impl Strategy<Value = SpaceDescriptor> {
    prop::sample::select(vec![0.0, 0.5, 1.5, 2.0]).prop_map(|nu| SpaceDescriptor::bessel(nu).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn partial_fractions_in_bessel_spaces(sp in bessel_space(), k in 0usize..6, l in 0usize..6, re in -4.0f64..4.0, im in 0.2f64..2.0) {
        prop_assume!(k != l);
        let s: Vec<f64> = find_nodes(&sp.companion(), 0.1, 30.0).unwrap().iter().map(|n| n.t).collect();
        let t: Vec<f64> = find_nodes(&sp, 0.1, 30.0).unwrap().iter().map(|n| n.t).collect();
        let z = Complex::new(re, im);
        let checks = [
            PartialFraction::BaForm0 { z, w: Complex::new(-re, im + 0.3) },
            PartialFraction::BaForm1 { z, s_j: s[k] },
            PartialFraction::BaForm2 { z, t_j: t[k] },
            PartialFraction::Ab21 { s_k: s[k], s_l: -s[l] },
            PartialFraction::Ab22 { s_k: s[k], s_l: s[l] },
            PartialFraction::Ab4 { s_k: s[k] },
        ];
        for c in checks {
            let r = check_partial_fraction(&sp, &c, 400.0).unwrap();
            prop_assert!(r.passed, "{r:?}");
        }
    }
}
