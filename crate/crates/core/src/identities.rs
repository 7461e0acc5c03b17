//! Numerical checks of the identity inventory: partial fractions of `B/A`
//! and `A/B` over node families, Parseval-type node sums in `H(E)` and
//! `H(E²)`, the Bessel measure identity, and the Hilbert-type quadratic form.
//!
//! Infinite sums and integrals are truncated at growing symmetric node
//! windows and extrapolated; the modelled tails are reported.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bessel::c_nu;
use crate::nodes::{find_nodes, Node, NodeSet};
use crate::numerics::{NeumaierSum, QuadratureSpec};
use crate::space::{e_abs_sq, SpaceDescriptor};
use crate::tails::{gap_integrals, symmetric_integral, symmetric_sum, symmetric_sum_real, Limit};
use crate::testgen::{BasisFamily, EntireFunction, FunctionHandle, Level};
use crate::{Complex, Error, Result};

/// Tolerance for identities whose terms decay like `n^{-2}` or `n^{-3}`.
pub const QUADRATIC_TOL: f64 = 1e-4;
/// Tolerance for identities whose terms decay like `n^{-4}`.
pub const QUARTIC_TOL: f64 = 1e-8;
pub const MEASURE_TOL: f64 = 1e-5;

// tails of n^{-p} sums go like N^{1-p}; integrands here decay like x^{-2}
const EXP_P2: [f64; 4] = [1.0, 2.0, 3.0, 4.0];
const EXP_P3: [f64; 4] = [2.0, 3.0, 4.0, 5.0];
const EXP_P4: [f64; 4] = [3.0, 4.0, 5.0, 6.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: Complex,
    pub rhs: Complex,
    pub abs_err: f64,
    pub rel_err: f64,
    pub passed: bool,
    pub tolerance: f64,
    /// Modelled contribution beyond the window (both sides combined).
    #[serde(default)]
    pub tail: f64,
    /// Quadrature plus extrapolation error estimate.
    #[serde(default)]
    pub error_estimate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<Membership>,
}

impl IdentityReport {
    pub fn new(name: impl Into<String>, lhs: Complex, rhs: Complex, tolerance: f64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        IdentityReport {
            name: name.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            passed: abs_err <= tolerance || rel_err <= tolerance,
            tolerance,
            tail: 0.0,
            error_estimate: 0.0,
            membership: None,
        }
    }

    fn real(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(name, Complex::new(lhs, 0.0), Complex::new(rhs, 0.0), tolerance)
    }

    /// Re-evaluates `passed` under a different tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.abs_err <= tolerance || self.rel_err <= tolerance;
        self
    }
}

/// How a function handed to a check is known to lie in the space. The
/// checks cannot verify membership; they record the claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    /// Built by the basis generators from these families.
    Generated { families: Vec<BasisFamily> },
    /// Closed form vouched for by the caller.
    Declared { note: String },
}

/// A function together with its claimed space.
pub struct Attested<'a> {
    pub f: &'a dyn EntireFunction,
    pub level: Level,
    pub membership: Membership,
}

impl<'a> Attested<'a> {
    pub fn generated(h: &'a FunctionHandle) -> Self {
        let mut families: Vec<BasisFamily> = h.recipe().recipe.iter().map(|t| t.family).collect();
        families.sort_by_key(|f| *f as u8);
        families.dedup();
        Attested {
            f: h,
            level: h.level(),
            membership: Membership::Generated { families },
        }
    }

    pub fn declared(f: &'a dyn EntireFunction, level: Level, note: impl Into<String>) -> Self {
        Attested {
            f,
            level,
            membership: Membership::Declared { note: note.into() },
        }
    }

    fn value(&self, z: f64) -> Result<Complex> {
        Ok(self.f.eval(Complex::new(z, 0.0))?.0)
    }
}

// ---------------------------------------------------------------- Hilbert form

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilbertFormInput {
    pub xi: Vec<f64>,
    pub a: Vec<Complex>,
    pub sigma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilbertFormReport {
    pub form: f64,
    pub lower: f64,
    pub upper: f64,
    pub within: bool,
}

/// `Σ_{m≠n} a_n ā_m/(ξ_n − ξ_m)²` and its bounds
/// `[−π²/(6σ²), π²/(3σ²)]·Σ|a_n|²`.
pub fn hilbert_form(input: &HilbertFormInput) -> Result<HilbertFormReport> {
    let HilbertFormInput { xi, a, sigma } = input;
    if xi.len() != a.len() {
        return Err(Error::LengthMismatch {
            expected: xi.len(),
            got: a.len(),
        });
    }
    if !(*sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput(format!("separation must be positive, got {sigma}")));
    }
    for i in 0..xi.len() {
        for j in i + 1..xi.len() {
            if (xi[i] - xi[j]).abs() < *sigma {
                return Err(Error::SeparationViolated { i, j, sigma: *sigma });
            }
        }
    }
    let mut form = NeumaierSum::new();
    for n in 0..xi.len() {
        for m in n + 1..xi.len() {
            // the (n, m) and (m, n) terms are conjugate
            let d = xi[n] - xi[m];
            form.add(2.0 * (a[n] * a[m].conj()).re / (d * d));
        }
    }
    let mass: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let form = form.value();
    let lower = -PI * PI / (6.0 * sigma * sigma) * mass;
    let upper = PI * PI / (3.0 * sigma * sigma) * mass;
    Ok(HilbertFormReport {
        form,
        lower,
        upper,
        within: lower <= form && form <= upper,
    })
}

// ----------------------------------------------------------- partial fractions

/// One of the partial-fraction identities, with its evaluation points. `s`
/// points must be zeros of `A`, `t` points zeros of `B` (matched to 1e-6).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "which")]
pub enum PartialFraction {
    #[serde(rename = "BA_form0")]
    BaForm0 { z: Complex, w: Complex },
    #[serde(rename = "BA_form1")]
    BaForm1 { z: Complex, s_j: f64 },
    #[serde(rename = "BA_form2")]
    BaForm2 { z: Complex, t_j: f64 },
    #[serde(rename = "AB_21")]
    Ab21 { s_k: f64, s_l: f64 },
    #[serde(rename = "AB_22")]
    Ab22 { s_k: f64, s_l: f64 },
    #[serde(rename = "AB_4")]
    Ab4 { s_k: f64 },
}

impl PartialFraction {
    pub fn name(&self) -> &'static str {
        match self {
            PartialFraction::BaForm0 { .. } => "BA_form0",
            PartialFraction::BaForm1 { .. } => "BA_form1",
            PartialFraction::BaForm2 { .. } => "BA_form2",
            PartialFraction::Ab21 { .. } => "AB_21",
            PartialFraction::Ab22 { .. } => "AB_22",
            PartialFraction::Ab4 { .. } => "AB_4",
        }
    }

    /// Default tolerance by decay order of the node sum.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            PartialFraction::Ab22 { .. } | PartialFraction::Ab4 { .. } => QUARTIC_TOL,
            _ => QUADRATIC_TOL,
        }
    }

    fn points(&self) -> Vec<f64> {
        match *self {
            PartialFraction::BaForm0 { z, w } => vec![z.norm(), w.norm()],
            PartialFraction::BaForm1 { z, s_j } => vec![z.norm(), s_j.abs()],
            PartialFraction::BaForm2 { z, t_j } => vec![z.norm(), t_j.abs()],
            PartialFraction::Ab21 { s_k, s_l } | PartialFraction::Ab22 { s_k, s_l } => vec![s_k.abs(), s_l.abs()],
            PartialFraction::Ab4 { s_k } => vec![s_k.abs()],
        }
    }
}

fn snap(set: &NodeSet, x: f64, what: &str) -> Result<Node> {
    set.locate(x, 1e-6 * x.abs().max(1.0))
        .map(|i| set.nodes[i])
        .ok_or_else(|| Error::UnknownNode(format!("{what} = {x} is not a node")))
}

fn central(set: &NodeSet) -> Result<usize> {
    set.central_index().ok_or(Error::NodeWindowEmpty)
}

/// `B/A` at `z`, refusing points on the poles.
fn b_over_a(space: &SpaceDescriptor, s_nodes: &NodeSet, z: Complex) -> Result<Complex> {
    let near = s_nodes
        .iter()
        .any(|n| (z - n.t).norm() <= 1e-9 * n.t.abs().max(1.0));
    let j = space.jet(z)?;
    if near || j.a[0] == Complex::new(0.0, 0.0) {
        return Err(Error::SingularPoint { z: z.to_string() });
    }
    Ok(j.b[0] / j.a[0])
}

/// Taylor coefficients of `A/B` about a real point.
fn quotient_taylor(space: &SpaceDescriptor, x: f64) -> Result<[f64; 4]> {
    let j = space.jet_real(x)?;
    let fact = [1.0, 1.0, 2.0, 6.0];
    let a: Vec<f64> = (0..4).map(|k| j.a[k] / fact[k]).collect();
    let b: Vec<f64> = (0..4).map(|k| j.b[k] / fact[k]).collect();
    if b[0] == 0.0 {
        return Err(Error::SingularPoint { z: x.to_string() });
    }
    let mut q = [0.0; 4];
    for n in 0..4 {
        let mut acc = a[n];
        for k in 0..n {
            acc -= q[k] * b[n - k];
        }
        q[n] = acc / b[0];
    }
    Ok(q)
}

/// Checks one partial-fraction identity, the node sum truncated to
/// `[−window, window]` and extrapolated.
pub fn check_partial_fraction(space: &SpaceDescriptor, which: &PartialFraction, window: f64) -> Result<IdentityReport> {
    if which.points().into_iter().any(|p| !(p <= window)) {
        return Err(Error::InvalidInput(format!(
            "window {window} does not cover the evaluation points"
        )));
    }
    let t_nodes = find_nodes(space, -window, window)?;
    let s_nodes = find_nodes(&space.companion(), -window, window)?;
    // companion nodes carry a = −B(s), b1 = A′(s), b2 = A″(s)
    let ba_weight = |n: &Node| -n.a / n.b1;
    let ab_weight = |n: &Node| n.a / n.b1;
    let c = Complex::new;

    let (lhs, rhs): (Complex, Limit<Complex>) = match *which {
        PartialFraction::BaForm0 { z, w } => {
            let wb = w.conj();
            let qz = b_over_a(space, &s_nodes, z)?;
            let lhs = if (wb - z).norm() <= 1e-12 * z.norm().max(1.0) {
                // confluent case: −(B/A)′(z)
                let j = space.jet(z)?;
                -(j.b[1] * j.a[0] - j.b[0] * j.a[1]) / (j.a[0] * j.a[0])
            } else {
                (qz - b_over_a(space, &s_nodes, wb)?) / (wb - z)
            };
            let terms: Vec<Complex> = s_nodes
                .iter()
                .map(|n| ba_weight(n) / ((z - n.t) * (wb - n.t)))
                .collect();
            (lhs, symmetric_sum(&terms, central(&s_nodes)?, &EXP_P2)?)
        }
        PartialFraction::BaForm1 { z, s_j } => {
            let sj = snap(&s_nodes, s_j, "s_j")?;
            let lhs = b_over_a(space, &s_nodes, z)?;
            let jj = space.jet_real(sj.t)?;
            let (b, b1, a1, a2) = (jj.b[0], jj.b[1], jj.a[1], jj.a[2]);
            let constant = b1 / a1 - b * a2 / (2.0 * a1 * a1) + b / (a1 * (z - sj.t));
            let terms: Vec<Complex> = s_nodes
                .iter()
                .map(|n| {
                    if n.t == sj.t {
                        constant
                    } else {
                        ba_weight(n) * (1.0 / (z - n.t) + c(1.0 / (n.t - sj.t), 0.0))
                    }
                })
                .collect();
            (lhs, symmetric_sum(&terms, central(&s_nodes)?, &EXP_P2)?)
        }
        PartialFraction::BaForm2 { z, t_j } => {
            let tj = snap(&t_nodes, t_j, "t_j")?;
            let lhs = b_over_a(space, &s_nodes, z)?;
            let terms: Vec<Complex> = s_nodes
                .iter()
                .map(|n| ba_weight(n) * (1.0 / (z - n.t) + c(1.0 / (n.t - tj.t), 0.0)))
                .collect();
            (lhs, symmetric_sum(&terms, central(&s_nodes)?, &EXP_P2)?)
        }
        PartialFraction::Ab21 { s_k, s_l } | PartialFraction::Ab22 { s_k, s_l } => {
            let (sk, sl) = (snap(&s_nodes, s_k, "s_k")?, snap(&s_nodes, s_l, "s_l")?);
            if sk.t == sl.t {
                return Err(Error::CoincidentNodes { t: sk.t });
            }
            // A′(s)/B(s) in companion node terms
            let ratio = |n: &Node| -n.b1 / n.a;
            let d = sk.t - sl.t;
            let quartic = matches!(which, PartialFraction::Ab22 { .. });
            let lhs = if quartic {
                -(ratio(&sk) + ratio(&sl)) / (d * d)
            } else {
                ratio(&sk) / d
            };
            let terms: Vec<Complex> = t_nodes
                .iter()
                .map(|n| {
                    let (u, v) = (sk.t - n.t, sl.t - n.t);
                    let den = if quartic { u * u * v * v } else { u * u * v };
                    c(ab_weight(n) / den, 0.0)
                })
                .collect();
            let exps = if quartic { EXP_P4 } else { EXP_P3 };
            (c(lhs, 0.0), symmetric_sum(&terms, central(&t_nodes)?, &exps)?)
        }
        PartialFraction::Ab4 { s_k } => {
            let sk = snap(&s_nodes, s_k, "s_k")?;
            // −(1/6)(A/B)‴ is minus the cubic Taylor coefficient
            let q = quotient_taylor(space, sk.t)?;
            let terms: Vec<Complex> = t_nodes
                .iter()
                .map(|n| c(ab_weight(n) / (sk.t - n.t).powi(4), 0.0))
                .collect();
            (c(-q[3], 0.0), symmetric_sum(&terms, central(&t_nodes)?, &EXP_P4)?)
        }
    };
    let mut rep = IdentityReport::new(which.name(), lhs, rhs.value, which.default_tolerance());
    rep.tail = rhs.tail().norm();
    rep.error_estimate = rhs.error;
    Ok(rep)
}

/// Partial sums of `Σ |B(s)|/(|A′(s)|(1 + s²))` over `[−W, W]` for each
/// window `W`.
pub fn summability_partial_sums(space: &SpaceDescriptor, windows: &[f64]) -> Result<Vec<f64>> {
    let w_max = windows.iter().copied().fold(0.0, f64::max);
    let s_nodes = find_nodes(&space.companion(), -w_max, w_max)?;
    Ok(windows
        .iter()
        .map(|&w| {
            let mut s = NeumaierSum::new();
            s.extend(
                s_nodes
                    .iter()
                    .filter(|n| n.t.abs() <= w)
                    .map(|n| (n.a / n.b1).abs() / (1.0 + n.t * n.t)),
            );
            s.value()
        })
        .collect())
}

// ------------------------------------------------------------------- Parseval

fn quad_spec() -> QuadratureSpec<f64> {
    QuadratureSpec::default().with_tolerances(1e-14, 1e-11)
}

/// `∫|F/E|²` against `Σ |F(t)|²/K(t,t)` over the nodes at angle `angle`
/// (for `H(E)` members), or `∫|F/E²|²` against the two-family sum with
/// `K₂` (for `H(E²)` members). Both sides are truncated at the same nodes
/// of `[−window, window]` and extrapolated.
pub fn parseval_node_sum(
    space: &SpaceDescriptor,
    f: &Attested<'_>,
    angle: f64,
    window: f64,
    tolerance: f64,
) -> Result<IdentityReport> {
    let sp = space.with_alpha(angle);
    let t_nodes = find_nodes(&sp, -window, window)?;
    let c = central(&t_nodes)?;
    let pts: Vec<f64> = t_nodes.iter().map(|n| n.t).collect();
    let power = match f.level {
        Level::E => 1,
        Level::E2 => 2,
    };
    let integrand = |x: f64| -> Result<f64> { Ok(f.value(x)?.norm_sqr() / e_abs_sq(&sp, x)?.powi(power)) };
    let (gaps, quad_err) = gap_integrals(integrand, &pts, &quad_spec())?;
    let lhs = symmetric_integral(&gaps, c, &EXP_P2)?;

    let mut terms = t_nodes
        .iter()
        .map(|n| {
            let k = match f.level {
                Level::E => n.k_diag(),
                Level::E2 => n.k2_diag,
            };
            Ok(f.value(n.t)?.norm_sqr() / k)
        })
        .collect::<Result<Vec<f64>>>()?;
    if f.level == Level::E2 {
        // companion nodes, attached to the gap they fall in
        let s_nodes = find_nodes(&sp.companion(), -window, window)?;
        for n in s_nodes.iter() {
            let i = pts.partition_point(|&t| t < n.t);
            if i == 0 || i == pts.len() {
                continue;
            }
            terms[i - 1] += f.value(n.t)?.norm_sqr() / n.k2_diag.abs();
        }
    }
    let rhs = symmetric_sum_real(&terms, c, &EXP_P2)?;

    let name = match f.level {
        Level::E => "parseval_E",
        Level::E2 => "parseval_E2",
    };
    let mut rep = IdentityReport::real(name, lhs.value, rhs.value, tolerance);
    rep.tail = lhs.tail().abs() + rhs.tail().abs();
    rep.error_estimate = quad_err + lhs.error + rhs.error;
    rep.membership = Some(f.membership.clone());
    Ok(rep)
}

/// `∫|F|²|E_ν|^{-2}` against `c_ν ∫|F|²|x|^{2ν+1}` for `F ∈ H(E_ν)`.
pub fn homogeneous_measure_identity(nu: f64, f: &Attested<'_>, window: f64, tolerance: f64) -> Result<IdentityReport> {
    if f.level != Level::E {
        return Err(Error::InvalidInput("the measure identity is stated for H(E) members".into()));
    }
    let space = SpaceDescriptor::bessel(nu)?;
    let t_nodes = find_nodes(&space, -window, window)?;
    let c = central(&t_nodes)?;
    let pts: Vec<f64> = t_nodes.iter().map(|n| n.t).collect();
    let spec = quad_spec();
    let p = 2.0 * nu + 1.0;
    let (g1, e1) = gap_integrals(|x| Ok(f.value(x)?.norm_sqr() / e_abs_sq(&space, x)?), &pts, &spec)?;
    let (g2, e2) = gap_integrals(|x| Ok(f.value(x)?.norm_sqr() * x.abs().powf(p)), &pts, &spec)?;
    let lhs = symmetric_integral(&g1, c, &EXP_P2)?;
    let rhs = symmetric_integral(&g2, c, &EXP_P2)?;
    let cn = c_nu(nu)?;
    let mut rep = IdentityReport::real("measure_identity", lhs.value, cn * rhs.value, tolerance);
    rep.tail = lhs.tail().abs() + cn * rhs.tail().abs();
    rep.error_estimate = e1 + lhs.error + cn * (e2 + rhs.error);
    rep.membership = Some(f.membership.clone());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen::ClosedForm;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn hilbert_two_points() {
        let r = hilbert_form(&HilbertFormInput {
            xi: vec![0.0, 1.0],
            a: vec![c(1.0, 0.0), c(1.0, 0.0)],
            sigma: 1.0,
        })
        .unwrap();
        assert_eq!(r.form, 2.0);
        assert!((r.upper - 2.0 * PI * PI / 3.0).abs() < 1e-14);
        assert!(r.within);
        let r = hilbert_form(&HilbertFormInput {
            xi: vec![0.0, 1.0, 3.0],
            a: vec![c(0.0, 0.0), c(0.5, 2.0), c(0.0, 0.0)],
            sigma: 1.0,
        })
        .unwrap();
        assert_eq!(r.form, 0.0);
    }

    #[test]
    fn hilbert_errors() {
        let bad = HilbertFormInput {
            xi: vec![0.0, 0.5],
            a: vec![c(1.0, 0.0); 2],
            sigma: 1.0,
        };
        assert!(matches!(hilbert_form(&bad), Err(Error::SeparationViolated { i: 0, j: 1, .. })));
        let bad = HilbertFormInput {
            xi: vec![0.0],
            a: vec![],
            sigma: 1.0,
        };
        assert!(matches!(hilbert_form(&bad), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn quartic_at_half() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        let r = check_partial_fraction(&s, &PartialFraction::Ab4 { s_k: 0.5 }, 300.0).unwrap();
        assert!((r.lhs.re - PI.powi(3) / 3.0).abs() < 1e-12, "{r:?}");
        assert!(r.abs_err <= 1e-9, "{r:?}");
        assert!(r.passed);
    }

    #[test]
    fn tan_cot_forms() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        let r = check_partial_fraction(&s, &PartialFraction::BaForm0 { z: c(0.3, 0.0), w: c(-0.7, 0.0) }, 300.0).unwrap();
        assert!(r.abs_err <= 1e-5, "{r:?}");
        let r = check_partial_fraction(&s, &PartialFraction::BaForm1 { z: c(0.3, 0.2), s_j: 1.5 }, 300.0).unwrap();
        assert!(r.abs_err <= 1e-5, "{r:?}");
        let r = check_partial_fraction(&s, &PartialFraction::BaForm2 { z: c(-1.2, 0.4), t_j: 2.0 }, 300.0).unwrap();
        assert!(r.abs_err <= 1e-5, "{r:?}");
        let e = check_partial_fraction(&s, &PartialFraction::BaForm0 { z: c(0.5, 0.0), w: c(0.1, 0.0) }, 300.0);
        assert!(matches!(e, Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn bessel_two_node_forms() {
        let s = SpaceDescriptor::bessel(0.0).unwrap();
        let (s1, s2) = (2.404_825_557_695_773, 5.520_078_110_286_311);
        for which in [PartialFraction::Ab21 { s_k: s1, s_l: s2 }, PartialFraction::Ab22 { s_k: s1, s_l: s2 }] {
            let r = check_partial_fraction(&s, &which, 300.0).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn sinc_plancherel() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        let sinc = ClosedForm(|z: Complex| {
            if z.norm() < 1e-8 {
                (c(1.0, 0.0), -z * PI * PI / 3.0)
            } else {
                let pz = z * PI;
                (pz.sin() / pz, (pz.cos() * pz - pz.sin()) * PI / (pz * pz))
            }
        });
        let f = Attested::declared(&sinc, Level::E, "sinc");
        let r = parseval_node_sum(&s, &f, 0.0, 200.0, 1e-6).unwrap();
        assert!(r.passed && r.abs_err < 1e-6, "{r:?}");
        assert!(r.tail > 1e-4);
    }

    #[test]
    fn measure_identity_minus_half() {
        let sp = SpaceDescriptor::bessel(-0.5).unwrap();
        let t1 = find_nodes(&sp, 1.0, 4.0).unwrap().nodes[0].t;
        let f = ClosedForm(move |z: Complex| {
            let h = z - t1;
            (z.sin() / h, (z.cos() * h - z.sin()) / (h * h))
        });
        let a = Attested::declared(&f, Level::E, "sin z/(z − π)");
        let r = homogeneous_measure_identity(-0.5, &a, 200.0, MEASURE_TOL).unwrap();
        assert!(r.rel_err < 1e-12, "{r:?}");
    }

    #[test]
    fn summability_grows_and_settles() {
        let s = SpaceDescriptor::bessel(0.5).unwrap();
        let v = summability_partial_sums(&s, &[25.0, 50.0, 100.0, 200.0]).unwrap();
        let d: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(d.iter().all(|&x| x >= 0.0));
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{v:?}");
    }

    #[test]
    fn report_json_round_trip() {
        let r = IdentityReport::new("x", c(1.0, 2.0), c(1.0, 2.0 + 1e-9), 1e-8);
        let back: IdentityReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(r, back);
        let p: PartialFraction = serde_json::from_str(r#"{"which":"AB_4","s_k":0.5}"#).unwrap();
        assert_eq!(p, PartialFraction::Ab4 { s_k: 0.5 });
    }
}
