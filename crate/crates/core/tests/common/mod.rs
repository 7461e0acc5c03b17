//! Helpers shared by the integration tests.

use hbspace::nodes::find_nodes;
use hbspace::numerics::{extrapolate_limit, integrate, QuadratureSpec};
use hbspace::space::e_abs_sq;
use hbspace::{Complex, SpaceDescriptor};

fn spec() -> QuadratureSpec<f64> {
    QuadratureSpec::default().with_tolerances(1e-11, 1e-11)
}

/// `∫ f |E|^{-4}` over the whole line: integrals cut at the nodes `±N`
/// around the centre, extrapolated in `N`.
pub fn extrapolated_integral(sp: &SpaceDescriptor, f: impl Fn(f64) -> Complex) -> Complex {
    let ns = find_nodes(sp, -300.0, 300.0).unwrap();
    let pts: Vec<f64> = ns.iter().map(|n| n.t).collect();
    let c = ns.central_index().unwrap();
    let w = |x: f64| {
        let e = e_abs_sq(sp, x).unwrap();
        f(x) / (e * e)
    };
    let gaps: Vec<Complex> = pts
        .windows(2)
        .map(|g| {
            let re = integrate(|x| w(x).re, g[0], g[1], &spec()).unwrap().value;
            let im = integrate(|x| w(x).im, g[0], g[1], &spec()).unwrap().value;
            Complex::new(re, im)
        })
        .collect();
    let n_max = c.min(pts.len() - 1 - c);
    let cuts: Vec<usize> = (0..5).map(|k| n_max * (8 + k) / 13).chain([n_max]).collect();
    let partial: Vec<Complex> = cuts.iter().map(|&n| gaps[c - n..c + n].iter().sum()).collect();
    let x: Vec<f64> = cuts.iter().map(|&n| n as f64 + 0.5).collect();
    let ex = |v: Vec<f64>| extrapolate_limit(&x, &v, &[1.0, 2.0, 3.0, 4.0]).unwrap().value;
    Complex::new(ex(partial.iter().map(|z| z.re).collect()), ex(partial.iter().map(|z| z.im).collect()))
}

