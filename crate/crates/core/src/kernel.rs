//! Reproducing kernels `K`, `K₂ = K·J`, the interpolating functions
//! `P_t = B_β²/(z−t)²`, `Q_t = B_β²/(z−t)`, and their inner products.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::nodes::Node;
use crate::space::{Family, SpaceDescriptor};
use crate::{Complex, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex,
    /// The difference quotient was replaced by its Taylor form because
    /// `z` sits on (or next to) `w̄`.
    pub is_diagonal_limit: bool,
}

/// Rough `sup φ′` used to decide when a point counts as "near".
pub(crate) fn length_scale(space: &SpaceDescriptor) -> f64 {
    match space.family() {
        Family::PaleyWiener { tau } => tau,
        Family::BesselHomogeneous { nu } => 1.0 + (2.0 * nu + 1.0).abs(),
    }
}

/// Below `NEAR / scale` a removable singularity is evaluated by Taylor data.
pub(crate) const NEAR: f64 = 1e-4;

fn binom(k: usize, i: usize) -> f64 {
    const T: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    T[k][i]
}

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Leibniz rule on two 4-jets.
pub(crate) fn product_jet(f: &[Complex; 5], g: &[Complex; 5]) -> [Complex; 5] {
    let mut out = [Complex::new(0.0, 0.0); 5];
    for (k, o) in out.iter_mut().enumerate() {
        for i in 0..=k {
            *o += f[i] * g[k - i] * binom(k, i);
        }
    }
    out
}

/// Value and derivative of `N(z)/h^m`, `h = z − c`, from the 4-jet of `N`
/// at `c` (where `N` vanishes to order `m`).
pub(crate) fn taylor_quotient(nj: &[Complex; 5], m: usize, h: Complex) -> (Complex, Complex) {
    let mut v = Complex::new(0.0, 0.0);
    let mut d = Complex::new(0.0, 0.0);
    let mut hp = Complex::new(1.0, 0.0); // h^j
    let mut hpm = Complex::new(0.0, 0.0); // h^{j-1}
    for j in 0..=(4 - m) {
        let c = nj[j + m] / FACT[j + m];
        v += c * hp;
        d += c * hpm * j as f64;
        hpm = hp;
        hp *= h;
    }
    (v, d)
}

/// `K(w, z) = [B(z)A(w̄) − A(z)B(w̄)] / (π(z − w̄))`.
pub fn eval_k(space: &SpaceDescriptor, w: Complex, z: Complex) -> Result<KernelValue> {
    let wb = w.conj();
    let jw = space.base_jet(wb)?;
    let d = z - wb;
    if d.norm() * length_scale(space) < NEAR {
        // N(z) = B(z)A(w̄) − A(z)B(w̄), N(w̄) = 0
        let mut nj = [Complex::new(0.0, 0.0); 5];
        for k in 0..5 {
            nj[k] = jw.b[k] * jw.a[0] - jw.a[k] * jw.b[0];
        }
        let (v, _) = taylor_quotient(&nj, 1, d);
        return Ok(KernelValue {
            value: v / PI,
            is_diagonal_limit: true,
        });
    }
    let jz = space.base_jet(z)?;
    Ok(KernelValue {
        value: (jz.b[0] * jw.a[0] - jz.a[0] * jw.b[0]) / (d * PI),
        is_diagonal_limit: false,
    })
}

/// `J(w, z) = 2(conj A(w) A(z) + conj B(w) B(z))`.
pub fn eval_j(space: &SpaceDescriptor, w: Complex, z: Complex) -> Result<Complex> {
    let jw = space.base_jet(w)?;
    let jz = space.base_jet(z)?;
    Ok((jw.a[0].conj() * jz.a[0] + jw.b[0].conj() * jz.b[0]) * 2.0)
}

/// Reproducing kernel of `H(E²)`, `K₂ = K·J`.
pub fn eval_k2(space: &SpaceDescriptor, w: Complex, z: Complex) -> Result<KernelValue> {
    let k = eval_k(space, w, z)?;
    let j = eval_j(space, w, z)?;
    Ok(KernelValue {
        value: k.value * j,
        is_diagonal_limit: k.is_diagonal_limit,
    })
}

/// `K(t,t)` for real `t`.
pub fn k_diag(space: &SpaceDescriptor, t: f64) -> Result<f64> {
    let j = space.base_jet(Complex::new(t, 0.0))?;
    Ok((j.b[1].re * j.a[0].re - j.a[1].re * j.b[0].re) / PI)
}

fn b_squared_jet(node: &Node) -> [Complex; 5] {
    let c = |x: f64| Complex::new(x, 0.0);
    // B(t) = 0, so B⁗ never enters the 4-jet of B²
    let bj = [c(0.0), c(node.b1), c(node.b2), c(node.b3), c(0.0)];
    product_jet(&bj, &bj)
}

fn p_or_q(space: &SpaceDescriptor, node: &Node, z: Complex, m: usize) -> Result<(Complex, Complex)> {
    let h = z - node.t;
    if h.norm() * length_scale(space) < NEAR {
        // B² = b1²h² + b1b2h³ + (b2²/4 + b1b3/3)h⁴ + …; the h⁴ coefficient
        // needs only b1..b3, so the 4-jet is exact
        return Ok(taylor_quotient(&b_squared_jet(node), m, h));
    }
    let j = space.jet(z)?;
    let (b, b1) = (j.b[0], j.b[1]);
    let b2 = b * b;
    Ok(if m == 2 {
        let v = b2 / (h * h);
        (v, (b * b1 * 2.0 - v * h * 2.0) / (h * h))
    } else {
        let v = b2 / h;
        (v, (b * b1 * 2.0 - v) / h)
    })
}

/// `P_t(z) = B_β(z)²/(z − t)²` and its derivative, where `β` is the angle of
/// `space` and `t` one of its nodes.
pub fn eval_p(space: &SpaceDescriptor, node: &Node, z: Complex) -> Result<(Complex, Complex)> {
    p_or_q(space, node, z, 2)
}

/// `Q_t(z) = B_β(z)²/(z − t)` and its derivative.
pub fn eval_q(space: &SpaceDescriptor, node: &Node, z: Complex) -> Result<(Complex, Complex)> {
    p_or_q(space, node, z, 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PqInnerProducts {
    /// `⟨P_k, P_l⟩` in `H(E²)`
    pub pp: f64,
    /// `⟨Q_k, Q_l⟩`, zero for distinct nodes
    pub qq: f64,
    pub p_norm_sq: f64,
    pub q_norm_sq: f64,
}

/// Closed-form norms of `P_s`, `Q_s` at a companion node `s` (a zero of
/// `A_α` of the ambient `space`).
///
/// `‖Q‖² = −(π/2) A′/B`, `‖P‖² = −(π/2)(A′³/B³ + (1/6)(A/B)‴)`.
pub fn pq_norms(space: &SpaceDescriptor, s: f64) -> Result<(f64, f64)> {
    let j = space.jet_real(s)?;
    let (a1, a2, a3) = (j.a[1], j.a[2], j.a[3]);
    let (b, b1, b2) = (j.b[0], j.b[1], j.b[2]);
    let q = -0.5 * PI * a1 / b;
    // (A/B)‴ at a zero of A
    let third = a3 / b - 3.0 * a2 * b1 / (b * b) - 3.0 * a1 * b2 / (b * b) + 6.0 * a1 * b1 * b1 / (b * b * b);
    let p = -0.5 * PI * ((a1 / b).powi(3) + third / 6.0);
    Ok((p, q))
}

/// Closed forms for a pair of companion nodes `s_k ≠ s_l`.
pub fn inner_products_pq(space: &SpaceDescriptor, s_k: &Node, s_l: &Node) -> Result<PqInnerProducts> {
    if s_k.t == s_l.t {
        return Err(Error::CoincidentNodes { t: s_k.t });
    }
    let (p_norm_sq, q_norm_sq) = pq_norms(space, s_k.t)?;
    let slope = |s: f64| -> Result<f64> {
        let j = space.jet_real(s)?;
        Ok(-j.a[1] / j.b[0])
    };
    let d = s_k.t - s_l.t;
    let pp = (slope(s_k.t)? + slope(s_l.t)?) * PI / (2.0 * d * d);
    Ok(PqInnerProducts {
        pp,
        qq: 0.0,
        p_norm_sq,
        q_norm_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodes::find_nodes;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn sinc_kernel() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        for &x in &[0.3, -2.7, 1e-7, 0.0] {
            let k = eval_k(&s, c(0.0, 0.0), c(x, 0.0)).unwrap();
            let want = if x == 0.0 { 1.0 } else { (PI * x).sin() / (PI * x) };
            assert!((k.value - want).norm() < 1e-13, "{x}");
        }
    }

    #[test]
    fn k2_is_pw_double_type() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        let k = eval_k2(&s, c(0.0, 0.0), c(0.25, 0.0)).unwrap();
        assert!((k.value - 4.0 / PI).norm() < 1e-14);
        let d = eval_k2(&s, c(0.4, 0.0), c(0.4, 0.0)).unwrap();
        assert!(d.is_diagonal_limit);
        assert!((d.value - 2.0).norm() < 1e-13);
    }

    #[test]
    fn hermitian_and_positive() {
        let s = SpaceDescriptor::bessel(0.0).unwrap();
        let a = eval_k(&s, c(1.0, 0.0), c(2.0, 0.0)).unwrap().value;
        let b = eval_k(&s, c(2.0, 0.0), c(1.0, 0.0)).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-15);
        let w = c(0.3, 0.8);
        let d = eval_k(&s, w, w).unwrap().value;
        assert!(d.re > 0.0 && d.im.abs() < 1e-15);
    }

    #[test]
    fn p_and_q_near_and_at_node() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        let ns = find_nodes(&s, -0.5, 0.5).unwrap();
        let n0 = ns.nodes[0];
        let (p0, dp0) = eval_p(&s, &n0, c(0.0, 0.0)).unwrap();
        assert!((p0 - PI * PI).norm() < 1e-12 && dp0.norm() < 1e-12);
        let (q0, dq0) = eval_q(&s, &n0, c(0.0, 0.0)).unwrap();
        assert_eq!(q0, c(0.0, 0.0));
        assert!((dq0 - PI * PI).norm() < 1e-12);
        for &x in &[1e-5, 2e-4, 0.37] {
            let z = c(x, 0.1 * x);
            let (p, _) = eval_p(&s, &n0, z).unwrap();
            let (q, _) = eval_q(&s, &n0, z).unwrap();
            assert!((p * z - q).norm() <= 1e-12 * q.norm().max(1e-300) + 1e-300, "{x}");
            let sinc2 = ((PI * z).sin() / z).powi(2);
            assert!((p - sinc2).norm() <= 1e-12 * sinc2.norm(), "{x}");
        }
    }

    #[test]
    fn pw_companion_norms() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        let (p, q) = pq_norms(&s, 0.5).unwrap();
        assert!((q - PI * PI / 2.0).abs() < 1e-12);
        assert!((p - 2.0 * PI.powi(4) / 3.0).abs() < 1e-10);
        let cs = s.companion();
        let ns = find_nodes(&cs, 0.0, 2.0).unwrap();
        let r = inner_products_pq(&s, &ns.nodes[0], &ns.nodes[1]).unwrap();
        assert!((r.pp - PI * PI).abs() < 1e-12, "{:?} {:?}", r, ns.nodes);
        assert!(matches!(
            inner_products_pq(&s, &ns.nodes[0], &ns.nodes[0]),
            Err(Error::CoincidentNodes { .. })
        ));
    }
}
