use std::f64::consts::PI;

use proptest::prelude::*;

use hbspace::nodes::{find_nodes, interlaces};
use hbspace::numerics::{integrate, QuadratureSpec};
use hbspace::space::phase_derivative;
use hbspace::{Family, SpaceDescriptor};

fn space() -> impl Strategy<Value = SpaceDescriptor> {
    (
        prop_oneof![
            (0.5f64..4.0).prop_map(|tau| Family::PaleyWiener { tau }),
            (-0.9f64..3.0).prop_map(|nu| Family::BesselHomogeneous { nu }),
        ],
        0.0f64..PI,
    )
        .prop_map(|(f, a)| SpaceDescriptor::new(f, a).unwrap())
}

/// Phase at `t` modulo π, from `B_α = |E| sin(φ − α)`, `A_α = |E| cos(φ − α)`.
fn phase_mod_pi(sp: &SpaceDescriptor, t: f64) -> f64 {
    let j = sp.jet_real(t).unwrap();
    j.b[0].atan2(j.a[0]).rem_euclid(PI)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn count_matches_phase_increment(sp in space(), lo in -80.0f64..60.0, width in 1.0f64..40.0) {
        let hi = lo + width;
        let ns = find_nodes(&sp, lo, hi).unwrap();
        let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-13);
        let dphi = integrate(|t| phase_derivative(&sp, t).unwrap(), lo, hi, &spec).unwrap().value;
        let theta = phase_mod_pi(&sp, lo);
        // zeros of sin(φ − α) in (lo, hi], plus one if lo itself is a node
        let q = (theta + dphi) / PI;
        let expected = q.floor() as usize + usize::from(theta == 0.0);
        // a node within rounding of either edge may land on either side
        let edge = (q - q.round()).abs() < 1e-9 || theta < 1e-9 || PI - theta < 1e-9;
        prop_assert!(
            ns.len() == expected || edge && ns.len().abs_diff(expected) == 1,
            "found {} expected {expected}", ns.len()
        );
    }

    #[test]
    fn nodes_are_simple_and_separated(sp in space(), lo in -80.0f64..40.0) {
        let hi = lo + 40.0;
        let ns = find_nodes(&sp, lo, hi).unwrap();
        for n in ns.iter() {
            prop_assert!(n.b1.abs() >= 1e-8);
        }
        let peak = (0..=4000)
            .map(|k| phase_derivative(&sp, lo + (hi - lo) * k as f64 / 4000.0).unwrap())
            .fold(0.0, f64::max);
        if let Some(g) = ns.min_gap() {
            prop_assert!(g >= PI / peak - 1e-9, "gap {g} vs {}", PI / peak);
        }
    }

    #[test]
    fn companion_nodes_interlace(sp in space(), lo in -80.0f64..40.0) {
        let hi = lo + 40.0;
        let t: Vec<f64> = find_nodes(&sp, lo, hi).unwrap().iter().map(|n| n.t).collect();
        let s: Vec<f64> = find_nodes(&sp.companion(), lo, hi).unwrap().iter().map(|n| n.t).collect();
        prop_assert!(interlaces(&t, &s));
    }
}
