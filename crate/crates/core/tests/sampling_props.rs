use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;

use hbspace::nodes::find_nodes;
use hbspace::sampling::{frame_ratio, reconstruct};
use hbspace::testgen::{make_function, random_recipe, BasisFamily};
use hbspace::{Complex, SpaceDescriptor};

fn space(kind: u8) -> SpaceDescriptor {
    match kind {
        0 => SpaceDescriptor::paley_wiener(PI).unwrap(),
        1 => SpaceDescriptor::bessel(0.0).unwrap(),
        _ => SpaceDescriptor::bessel(2.0).unwrap().with_alpha(1.1),
    }
}

fn pq() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 21)
}

/// Spreads 21 values over a node list of length `n`, centred at `c`.
fn spread(v: &[(f64, f64)], n: usize, c: usize) -> Vec<Complex> {
    let mut out = vec![Complex::new(0.0, 0.0); n];
    for (k, &(re, im)) in v.iter().enumerate() {
        out[c - 10 + k] = Complex::new(re, im);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reconstruction_is_linear(kind in 0u8..3, p1 in pq(), q1 in pq(), p2 in pq(), q2 in pq(), re in -8.0f64..8.0, im in -1.0f64..1.0) {
        let sp = space(kind);
        let ns = Arc::new(find_nodes(&sp, -40.0, 40.0).unwrap());
        let (n, c) = (ns.len(), ns.central_index().unwrap());
        let (p1, q1, p2, q2) = (spread(&p1, n, c), spread(&q1, n, c), spread(&p2, n, c), spread(&q2, n, c));
        let add = |a: &[Complex], b: &[Complex]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        let z = Complex::new(re, im);
        let r1 = reconstruct(&sp, ns.clone(), &p1, &q1).unwrap().value(z).unwrap();
        let r2 = reconstruct(&sp, ns.clone(), &p2, &q2).unwrap().value(z).unwrap();
        let r12 = reconstruct(&sp, ns.clone(), &add(&p1, &p2), &add(&q1, &q2)).unwrap().value(z).unwrap();
        prop_assert!((r12 - r1 - r2).norm() <= 1e-11 * (1.0 + r1.norm() + r2.norm()));
    }

    #[test]
    fn translation_covariance(p in pq(), q in pq(), delta in 0.01f64..0.99, re in -6.0f64..6.0, im in -1.0f64..1.0) {
        // nodes of the rotated space sit at n + α/π
        let base = SpaceDescriptor::paley_wiener(PI).unwrap();
        let shifted = base.with_alpha(delta * PI);
        let n0 = Arc::new(find_nodes(&base, -30.0, 30.0).unwrap());
        let n1 = Arc::new(find_nodes(&shifted, -30.0 + delta, 30.0 + delta).unwrap());
        prop_assert_eq!(n0.len(), n1.len());
        for (a, b) in n0.iter().zip(n1.iter()) {
            prop_assert!((b.t - a.t - delta).abs() < 1e-12, "{} {} {}", a.t, b.t, b.t - a.t - delta);
        }
        let c = n0.central_index().unwrap();
        let (p, q) = (spread(&p, n0.len(), c), spread(&q, n0.len(), c));
        let z = Complex::new(re, im);
        let r0 = reconstruct(&base, n0, &p, &q).unwrap().value(z).unwrap();
        let r1 = reconstruct(&shifted, n1, &p, &q).unwrap().value(z + delta).unwrap();
        prop_assert!((r0 - r1).norm() <= 1e-10 * (1.0 + r0.norm()), "{r0} vs {r1}");
    }
}

#[test]
fn frame_ratios_stay_bounded() {
    let sp = SpaceDescriptor::paley_wiener(PI).unwrap();
    let ratios: Vec<f64> = (0..20)
        .map(|seed| {
            let f = make_function(&random_recipe(sp, &[BasisFamily::P, BasisFamily::Q], 3, 5, 900 + seed)).unwrap();
            frame_ratio(&sp, &f, 300.0).unwrap().ratio
        })
        .collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    assert!(lo > 1e-6 && hi < 1e6, "{ratios:?}");
    assert!(hi / lo <= 10.0, "spread {} over {ratios:?}", hi / lo);
}
