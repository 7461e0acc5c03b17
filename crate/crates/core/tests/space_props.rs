use std::f64::consts::PI;

use proptest::prelude::*;

use hbspace::space::{eval_companions, eval_e, eval_e_star, phase_derivative};
use hbspace::{Complex, Family, SpaceDescriptor};

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (0.5f64..5.0).prop_map(|tau| Family::PaleyWiener { tau }),
        (-0.95f64..4.0).prop_map(|nu| Family::BesselHomogeneous { nu }),
    ]
}

fn close(x: Complex, y: Complex, tol: f64) -> bool {
    (x - y).norm() <= tol * (1.0 + x.norm().max(y.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn real_on_the_line(f in family(), alpha in 0.0f64..PI, t in -50.0f64..50.0) {
        let sp = SpaceDescriptor::new(f, alpha).unwrap();
        let v = eval_companions(&sp, Complex::new(t, 0.0)).unwrap();
        for w in [v.a, v.b, v.a1, v.b1, v.a2, v.b2, v.a3, v.b3] {
            prop_assert!(w.im.abs() <= 1e-12 * (1.0 + w.re.abs()), "{w}");
        }
    }

    #[test]
    fn rotation_by_pi_is_a_sign(f in family(), alpha in 0.0f64..PI, re in -20.0f64..20.0, im in -3.0f64..3.0) {
        let z = Complex::new(re, im);
        let base = eval_companions(&SpaceDescriptor::new(f, 0.0).unwrap(), z).unwrap();
        let v = eval_companions(&SpaceDescriptor::new(f, alpha).unwrap(), z).unwrap();
        let w = eval_companions(&SpaceDescriptor::new(f, alpha + PI).unwrap(), z).unwrap();
        let (c, s) = (alpha.cos(), alpha.sin());
        // e^{iα}(A − iB) = (cA + sB) − i(cB − sA)
        prop_assert!(close(v.a, base.a * c + base.b * s, 1e-12));
        prop_assert!(close(v.b, base.b * c - base.a * s, 1e-12));
        prop_assert!(close(v.b2, base.b2 * c - base.a2 * s, 1e-11));
        let pairs = [(v.a, w.a), (v.b, w.b), (v.a1, w.a1), (v.b1, w.b1), (v.a2, w.a2), (v.b2, w.b2)];
        let same = pairs.iter().all(|&(x, y)| close(x, y, 1e-12));
        let flipped = pairs.iter().all(|&(x, y)| close(x, -y, 1e-12));
        prop_assert!(same || flipped);
    }

    #[test]
    fn unit_modulus_at_minus_half(t in -50.0f64..50.0) {
        let sp = SpaceDescriptor::bessel(-0.5).unwrap();
        let v = eval_companions(&sp, Complex::new(t, 0.0)).unwrap();
        prop_assert!((v.a.norm_sqr() + v.b.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn hermite_biehler(f in family(), re in -30.0f64..30.0, im in 1e-3f64..5.0) {
        let sp = SpaceDescriptor::new(f, 0.0).unwrap();
        let z = Complex::new(re, im);
        let e = eval_e(&sp, z).unwrap().norm();
        let es = eval_e_star(&sp, z).unwrap().norm();
        prop_assert!(es < e, "{es} vs {e}");
    }

    #[test]
    fn phase_increases(f in family(), t in -60.0f64..60.0) {
        let sp = SpaceDescriptor::new(f, 0.0).unwrap();
        prop_assert!(phase_derivative(&sp, t).unwrap() > 0.0);
    }
}
