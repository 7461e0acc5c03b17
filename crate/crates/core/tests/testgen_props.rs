use std::f64::consts::PI;
use std::sync::Arc;

use hbspace::interp::interpolate;
use hbspace::nodes::find_nodes;
use hbspace::testgen::{make_function, random_recipe, sample_on, Anchor, BasisFamily, GeneratedFunction, RecipeTerm};
use hbspace::{Complex, SpaceDescriptor};

mod common;
use common::extrapolated_integral;

fn single(space: SpaceDescriptor, family: BasisFamily, k: i64) -> GeneratedFunction {
    GeneratedFunction {
        space,
        recipe: vec![RecipeTerm {
            family,
            anchor: Anchor::Index(k),
            coeff: Complex::new(1.0, 0.0),
        }],
        window: 40.0,
        seed: None,
    }
}

#[test]
fn round_trip_converges() {
    let circle: Vec<Complex> = (0..32).map(|k| Complex::from_polar(2.0, 2.0 * PI * k as f64 / 32.0)).collect();
    for sp in [SpaceDescriptor::paley_wiener(PI).unwrap(), SpaceDescriptor::bessel(0.5).unwrap()] {
        for seed in 0..4 {
            let gf = random_recipe(sp, &[BasisFamily::ABoverT, BasisFamily::ABoverS, BasisFamily::P, BasisFamily::Q], 3, 5, seed);
            let f = make_function(&gf).unwrap();
            let full = sample_on(&f, &Arc::new(find_nodes(&sp, -400.0, 400.0).unwrap())).unwrap();
            let errs: Vec<f64> = [50.0, 100.0, 200.0, 400.0]
                .iter()
                .map(|&w| {
                    let s = full.truncate_symmetric(w);
                    circle
                        .iter()
                        .map(|&z| (interpolate(&sp, &s, z).unwrap().value - f.value(z).unwrap()).norm())
                        .fold(0.0, f64::max)
                })
                .collect();
            assert!(errs.windows(2).all(|e| e[1] < e[0]), "{sp:?} seed {seed}: {errs:?}");
            assert!(errs[3] < errs[0] / 6.0, "{sp:?} seed {seed}: {errs:?}");
        }
    }
}

#[test]
fn ab_basis_is_orthogonal() {
    for sp in [SpaceDescriptor::paley_wiener(PI).unwrap(), SpaceDescriptor::bessel(0.0).unwrap()] {
        let members: Vec<_> = [(BasisFamily::ABoverT, 0), (BasisFamily::ABoverT, 3), (BasisFamily::ABoverS, 1), (BasisFamily::ABoverS, -2)]
            .into_iter()
            .map(|(fam, k)| make_function(&single(sp, fam, k)).unwrap())
            .collect();
        let inner = |i: usize, j: usize| {
            extrapolated_integral(&sp, |x| {
                let z = Complex::new(x, 0.0);
                members[i].value(z).unwrap() * members[j].value(z).unwrap().conj()
            })
        };
        for i in 0..members.len() {
            let ii = inner(i, i).re;
            assert!(ii > 0.0);
            for j in 0..i {
                let ij = inner(i, j);
                assert!(ij.norm() <= 1e-5 * ii, "{sp:?} ({i},{j}): {ij} vs {ii}");
            }
        }
    }
}
