//! Verification of one-sided band-limited approximants of radial functions.
//!
//! A majorant `M ≥ g` that interpolates `g` at the zeros of `B` (a minorant
//! `L ≤ g` interpolating at the zeros of `A`) is extremal for the measure
//! `dμ_E`, and unique among radial competitors. After radial reduction the
//! weighted error is `2∫₀^∞ (M − g)/|E|²`, which for any competitor `R`
//! satisfies `∫(R − M)/|E|² = Σ_{B(t)=0} (R(t) − g(|t|))/K(t,t)`.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grid::Grid;
use crate::nodes::{find_nodes, NodeSet};
use crate::numerics::QuadratureSpec;
use crate::sampling::reconstruct;
use crate::space::{e_abs_sq, SpaceDescriptor};
use crate::tails::{gap_integrals, one_sided_integral, symmetric_sum_real};
use crate::{Complex, Error, Result};

pub const DEFAULT_PUNCTURE: f64 = 1e-3;
pub const DEFAULT_INTERP_TOL: f64 = 1e-7;
pub const SIGN_SLACK: f64 = 1e-9;
pub const DEFAULT_REFINE_BUDGET: usize = 1_000_000;
const REFINE_STEPS: usize = 48;

const OPPOSITE_CLASS: &str = "the opposite one-sided class is nonempty";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Majorant,
    Minorant,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Majorant => 1.0,
            Side::Minorant => -1.0,
        }
    }
}

/// A real function of one variable with its derivative.
pub trait RadialProfile: Sync {
    /// `(p(r), p′(r))`.
    fn eval(&self, r: f64) -> (f64, f64);
}

impl<F: Fn(f64) -> (f64, f64) + Sync> RadialProfile for F {
    fn eval(&self, r: f64) -> (f64, f64) {
        self(r)
    }
}

/// Serializable profiles for manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Zero,
    Constant {
        c: f64,
    },
    /// `c·sin²(πωx + φ)/(1 + (x/a)²)`
    Sin2Lorentz {
        c: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
        a: f64,
    },
    /// `c·x·sin(πωx)/(1 + (x/a)²)`
    XSinLorentz {
        c: f64,
        omega: f64,
        a: f64,
    },
    /// `c·(sin(πωx)/(πωx))²`
    Sinc2 {
        c: f64,
        omega: f64,
    },
    /// `c·e^{−λx²}`
    Gaussian {
        c: f64,
        lambda: f64,
    },
    Sum {
        terms: Vec<Profile>,
    },
}

impl RadialProfile for Profile {
    fn eval(&self, x: f64) -> (f64, f64) {
        match *self {
            Profile::Zero => (0.0, 0.0),
            Profile::Constant { c } => (c, 0.0),
            Profile::Sin2Lorentz { c, omega, phase, a } => {
                let u = PI * omega * x + phase;
                let (s, l) = (u.sin().powi(2), 1.0 / (1.0 + (x / a).powi(2)));
                let ds = PI * omega * (2.0 * u).sin();
                let dl = -2.0 * x / (a * a) * l * l;
                (c * s * l, c * (ds * l + s * dl))
            }
            Profile::XSinLorentz { c, omega, a } => {
                let u = PI * omega * x;
                let l = 1.0 / (1.0 + (x / a).powi(2));
                let dl = -2.0 * x / (a * a) * l * l;
                let g = x * u.sin();
                let dg = u.sin() + x * PI * omega * u.cos();
                (c * g * l, c * (dg * l + g * dl))
            }
            Profile::Sinc2 { c, omega } => {
                let u = PI * omega * x;
                let (s, ds) = if u.abs() < 1e-4 {
                    (1.0 - u * u / 6.0, -PI * omega * u / 3.0)
                } else {
                    (u.sin() / u, PI * omega * (u * u.cos() - u.sin()) / (u * u))
                };
                (c * s * s, 2.0 * c * s * ds)
            }
            Profile::Gaussian { c, lambda } => {
                let v = c * (-lambda * x * x).exp();
                (v, -2.0 * lambda * x * v)
            }
            Profile::Sum { ref terms } => terms.iter().fold((0.0, 0.0), |acc, t| {
                let (v, d) = t.eval(x);
                (acc.0 + v, acc.1 + d)
            }),
        }
    }
}

/// A radial one-sided approximation problem on `ℝ^d`, reduced to the line.
/// The space must satisfy `E*(−z) = E(z)` (`A` even, `B` odd).
pub struct ExtremalProblem<'a> {
    pub dimension: u32,
    pub g: &'a dyn RadialProfile,
    pub side: Side,
    pub space: SpaceDescriptor,
}

/// Serializable form of [`ExtremalProblem`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub dimension: u32,
    pub g: Profile,
    pub side: Side,
    pub space: SpaceDescriptor,
}

impl ProblemSpec {
    pub fn problem(&self) -> ExtremalProblem<'_> {
        ExtremalProblem {
            dimension: self.dimension,
            g: &self.g,
            side: self.side,
            space: self.space,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub grid: Grid,
    pub window: f64,
    #[serde(default = "default_puncture")]
    pub puncture: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_budget")]
    pub refine_budget: usize,
}

fn default_puncture() -> f64 {
    DEFAULT_PUNCTURE
}
fn default_tol() -> f64 {
    DEFAULT_INTERP_TOL
}
fn default_budget() -> usize {
    DEFAULT_REFINE_BUDGET
}

impl VerifyOptions {
    pub fn new(grid: Grid, window: f64) -> Self {
        VerifyOptions {
            grid,
            window,
            puncture: DEFAULT_PUNCTURE,
            tol: DEFAULT_INTERP_TOL,
            refine_budget: DEFAULT_REFINE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub dimension: u32,
    pub side: Side,
    pub sign_ok: bool,
    pub interp_ok: bool,
    pub derivative_interp_ok: bool,
    /// `2∫₀^∞ ±(candidate − g)/|E|²`, extrapolated past the window.
    pub weighted_error: f64,
    pub weighted_error_tail: f64,
    pub weighted_error_estimate: f64,
    /// `Σ ±(candidate(t) − g(|t|))/K(t,t)` over the interpolation family.
    pub node_sum_error: f64,
    pub node_sum_tail: f64,
    pub max_sign_violation: f64,
    /// Location of the worst violation (smallest `|x|` on ties).
    pub violation_at: Option<f64>,
    pub worst_node_residual: f64,
    pub nodes_checked: usize,
    /// Hypotheses of the optimality statement the verifier cannot test.
    pub unchecked_hypotheses: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.sign_ok && self.interp_ok && self.derivative_interp_ok
    }
}

fn family(problem: &ExtremalProblem<'_>, window: f64) -> Result<NodeSet> {
    let sp = match problem.side {
        Side::Majorant => problem.space,
        Side::Minorant => problem.space.companion(),
    };
    let ns = find_nodes(&sp, -window, window)?;
    if ns.is_empty() {
        return Err(Error::NodeWindowEmpty);
    }
    Ok(ns)
}

fn validate(problem: &ExtremalProblem<'_>, opts: &VerifyOptions) -> Result<()> {
    if problem.dimension < 1 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if !problem.space.is_symmetric() || problem.space.alpha() != 0.0 {
        return Err(Error::InvalidInput(
            "extremal problems need a space with A even and B odd at angle 0".into(),
        ));
    }
    if !(opts.window > 0.0) || !(opts.tol >= 0.0) || !(opts.puncture >= 0.0) {
        return Err(Error::InvalidInput("window, tolerance and puncture must be nonnegative".into()));
    }
    Ok(())
}

// (x, violation) with the larger violation winning, then the smaller |x|
fn worse(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0.abs() < a.0.abs()) {
        b
    } else {
        a
    }
}

/// Sign check on the grid, refining around every discrete local minimum of
/// the signed gap by golden-section search.
fn sign_check(
    diff: &(dyn Fn(f64) -> f64 + Sync),
    grid: &Grid,
    puncture: f64,
    min_gap: Option<f64>,
    budget: usize,
) -> Result<(f64, Option<f64>)> {
    if let Some(gap) = min_gap {
        if grid.step() > 0.5 * gap {
            return Err(Error::GridTooCoarse { x: grid.step() });
        }
    }
    let xs: Vec<f64> = grid.points().into_iter().filter(|x| x.abs() >= puncture).collect();
    let vals: Vec<f64> = xs.par_iter().map(|&x| diff(x)).collect();
    let mut minima = Vec::new();
    for i in 1..xs.len().saturating_sub(1) {
        let flat = vals[i - 1] == vals[i] && vals[i] == vals[i + 1];
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] && !flat && xs[i + 1] - xs[i - 1] <= 2.5 * grid.step() {
            minima.push(i);
        }
    }
    if minima.len() * REFINE_STEPS > budget {
        return Err(Error::GridTooCoarse {
            x: xs[minima[budget / REFINE_STEPS]],
        });
    }
    let refined: Vec<(f64, f64)> = minima
        .par_iter()
        .map(|&i| {
            let (mut lo, mut hi) = (xs[i - 1], xs[i + 1]);
            let r = 0.5 * (5f64.sqrt() - 1.0);
            let mut x1 = hi - r * (hi - lo);
            let mut x2 = lo + r * (hi - lo);
            let (mut f1, mut f2) = (diff(x1), diff(x2));
            for _ in 0..REFINE_STEPS {
                if f1 <= f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - r * (hi - lo);
                    f1 = diff(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + r * (hi - lo);
                    f2 = diff(x2);
                }
            }
            if f1 <= f2 {
                (x1, -f1)
            } else {
                (x2, -f2)
            }
        })
        .collect();
    let worst = xs
        .iter()
        .zip(&vals)
        .map(|(&x, &v)| (x, -v))
        .chain(refined)
        // a NaN gap counts as an unbounded violation
        .map(|(x, v)| (x, if v.is_nan() { f64::INFINITY } else { v }))
        .fold((f64::NAN, 0.0), worse);
    let at = (worst.1 > 0.0).then_some(worst.0);
    Ok((worst.1.max(0.0), at))
}

/// Checks a candidate approximant against the one-sidedness, interpolation
/// and derivative-interpolation conditions, and computes the weighted error
/// both by quadrature and as a node sum.
pub fn verify_candidate(
    problem: &ExtremalProblem<'_>,
    candidate: &dyn RadialProfile,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    validate(problem, opts)?;
    let s = problem.side.sign();
    let g = problem.g;
    let gap = |x: f64| s * (candidate.eval(x).0 - g.eval(x.abs()).0);

    let nodes = family(problem, opts.window)?;
    let (max_sign_violation, violation_at) = sign_check(&gap, &opts.grid, opts.puncture, nodes.min_gap(), opts.refine_budget)?;

    // interpolation at the nonnegative nodes (both functions are even)
    let (mut interp_ok, mut deriv_ok, mut worst) = (true, true, 0.0f64);
    let mut checked = 0;
    for n in nodes.iter().filter(|n| n.t >= 0.0) {
        let (cv, cd) = candidate.eval(n.t);
        let (gv, gd) = g.eval(n.t);
        let tol = opts.tol * (1.0 + gv.abs());
        let r0 = (cv - gv).abs();
        let r1 = if n.t == 0.0 { cd.abs() } else { (cd - gd).abs() };
        interp_ok &= r0 <= tol;
        deriv_ok &= r1 <= opts.tol * (1.0 + gd.abs());
        worst = worst.max(r0).max(r1);
        checked += 1;
    }

    // weighted error over [0, W], cut at the nonnegative nodes
    let mut pts = vec![0.0];
    pts.extend(nodes.iter().map(|n| n.t).filter(|&t| t > 0.0));
    let spec = QuadratureSpec::default().with_tolerances(1e-14, 1e-11);
    let sp = problem.space;
    let (gaps, quad_err) = gap_integrals(|x| Ok(gap(x) / e_abs_sq(&sp, x)?), &pts, &spec)?;
    let werr = one_sided_integral(&gaps, 0, &[1.0, 2.0, 3.0, 4.0])?;

    let terms: Vec<f64> = nodes.iter().map(|n| gap(n.t) / n.k_diag()).collect();
    let c = nodes.central_index().ok_or(Error::NodeWindowEmpty)?;
    let nsum = symmetric_sum_real(&terms, c, &[1.0, 2.0, 3.0, 4.0])?;

    Ok(VerificationReport {
        dimension: problem.dimension,
        side: problem.side,
        sign_ok: max_sign_violation <= SIGN_SLACK,
        interp_ok,
        derivative_interp_ok: deriv_ok,
        weighted_error: 2.0 * werr.value,
        weighted_error_tail: 2.0 * werr.tail(),
        weighted_error_estimate: 2.0 * (quad_err + werr.error),
        node_sum_error: nsum.value,
        node_sum_tail: nsum.tail(),
        max_sign_violation,
        violation_at,
        worst_node_residual: worst,
        nodes_checked: checked,
        unchecked_hypotheses: vec![OPPOSITE_CLASS.to_string()],
    })
}

/// Largest value on `[0, min(W/4, 10)]` of the interpolant built from the
/// node data of `candidate1 − candidate2`; both candidates must pass the
/// interpolation and derivative checks. A numerical witness that two
/// interpolating solutions coincide.
pub fn uniqueness_gap(
    problem: &ExtremalProblem<'_>,
    candidate1: &dyn RadialProfile,
    candidate2: &dyn RadialProfile,
    opts: &VerifyOptions,
) -> Result<f64> {
    for (k, cand) in [candidate1, candidate2].into_iter().enumerate() {
        let r = verify_candidate(problem, cand, opts)?;
        if !(r.interp_ok && r.derivative_interp_ok) {
            return Err(Error::PreconditionFailed(format!(
                "candidate {} fails the interpolation conditions (worst residual {:.3e})",
                k + 1,
                r.worst_node_residual
            )));
        }
    }
    let nodes = Arc::new(family(problem, opts.window)?);
    let (p, q): (Vec<Complex>, Vec<Complex>) = nodes
        .iter()
        .map(|n| {
            let (a, da) = candidate1.eval(n.t);
            let (b, db) = candidate2.eval(n.t);
            (Complex::new(a - b, 0.0), Complex::new(da - db, 0.0))
        })
        .unzip();
    let sp = nodes.space;
    let f = reconstruct(&sp, Arc::clone(&nodes), &p, &q)?;
    let reach = (opts.window / 4.0).min(10.0);
    let xs = Grid::new(0.0, reach, 201)?.points();
    let vals = xs
        .par_iter()
        .map(|&x| f.value(Complex::new(x, 0.0)).map(|v| v.norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}
