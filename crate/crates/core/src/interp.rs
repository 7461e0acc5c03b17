//! Truncated interpolation series with value and derivative data.
//!
//! Every term has the shape `B_β(z)² [c0/(z−t)² + c1/(z−t)]` with
//! `c0 = F(t)/B′²` and `c1 = (F′(t) + κ F(t))/B′²`. The general formula uses
//! `κ = −B″/B′`; the Bessel formulas use `κ = (2ν+1)/t` (and `κ = 0` at the
//! origin), which agrees with the general one through the differential
//! equations.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernel::{length_scale, product_jet, taylor_quotient, NEAR};
use crate::nodes::{Node, NodeSet};
use crate::numerics::ComplexSum;
use crate::space::SpaceDescriptor;
use crate::{Complex, Error, Result};

/// Node match tolerance for sample points.
pub const NODE_MATCH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub f: Complex,
    pub f1: Complex,
}

#[derive(Deserialize)]
struct RawSampleSet {
    node_set: Arc<NodeSet>,
    samples: Vec<Sample>,
}

/// `F(t)`, `F′(t)` on a subset of a node set.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawSampleSet")]
pub struct SampleSet {
    node_set: Arc<NodeSet>,
    samples: Vec<Sample>,
    #[serde(skip)]
    matched: Vec<Node>,
}

impl TryFrom<RawSampleSet> for SampleSet {
    type Error = Error;
    fn try_from(raw: RawSampleSet) -> Result<Self> {
        SampleSet::new(raw.node_set, raw.samples)
    }
}

impl SampleSet {
    pub fn new(node_set: Arc<NodeSet>, samples: Vec<Sample>) -> Result<Self> {
        let mut matched = Vec::with_capacity(samples.len());
        let mut used = vec![false; node_set.len()];
        for s in &samples {
            let i = node_set
                .locate(s.t, NODE_MATCH_TOL)
                .ok_or(Error::NodeMismatch { t: s.t })?;
            if used[i] {
                return Err(Error::DuplicateNode { t: s.t });
            }
            used[i] = true;
            matched.push(node_set.nodes[i]);
        }
        Ok(Self {
            node_set,
            samples,
            matched,
        })
    }

    /// Samples built from a value/derivative callback at every node.
    pub fn from_fn<F>(node_set: Arc<NodeSet>, mut f: F) -> Result<Self>
    where
        F: FnMut(&Node) -> Result<(Complex, Complex)>,
    {
        let samples = node_set
            .nodes
            .iter()
            .map(|n| f(n).map(|(v, d)| Sample { t: n.t, f: v, f1: d }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(node_set, samples)
    }

    pub fn node_set(&self) -> &Arc<NodeSet> {
        &self.node_set
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Keeps the samples with `|t| ≤ radius`. Truncation is always
    /// symmetric about the origin.
    pub fn truncate_symmetric(&self, radius: f64) -> SampleSet {
        let (samples, matched) = self
            .samples
            .iter()
            .zip(&self.matched)
            .filter(|(s, _)| s.t.abs() <= radius)
            .map(|(s, n)| (*s, *n))
            .unzip();
        SampleSet {
            node_set: Arc::clone(&self.node_set),
            samples,
            matched,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex,
    /// Heuristic size of the omitted terms; not a certified bound.
    pub tail_estimate: f64,
    pub terms_used: usize,
}

/// Value and derivative of the truncated series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: Complex,
    pub derivative: Complex,
    pub tail_estimate: f64,
    pub terms_used: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Kappa {
    /// `−B″/B′`
    General,
    /// `(2ν+1)/t`, zero at the origin
    Bessel,
}

fn coefficients(space: &SpaceDescriptor, kappa: Kappa, s: &Sample, n: &Node) -> (Complex, Complex) {
    let k = match kappa {
        Kappa::General => -n.b2 / n.b1,
        Kappa::Bessel if n.t == 0.0 => 0.0,
        Kappa::Bessel => (2.0 * space.nu().unwrap_or(-0.5) + 1.0) / n.t,
    };
    let w = 1.0 / (n.b1 * n.b1);
    (s.f * w, (s.f1 + s.f * k) * w)
}

pub(crate) fn evaluate_series(set: &SampleSet, kappa: Kappa, z: Complex) -> Result<SeriesValue> {
    if set.is_empty() {
        return Err(Error::EmptySamples);
    }
    let space = set.node_set.space;
    let near = NEAR / length_scale(&space);
    let j = space.jet(z)?;
    let (b, b1) = (j.b[0], j.b[1]);
    let bb = b * b;

    let mut order: Vec<usize> = (0..set.len()).collect();
    let dist: Vec<f64> = set.samples.iter().map(|s| (z - s.t).norm()).collect();
    order.sort_by(|&x, &y| dist[x].total_cmp(&dist[y]).then(x.cmp(&y)));

    let mut val = ComplexSum::new();
    let mut der = ComplexSum::new();
    for &i in &order {
        let (s, n) = (&set.samples[i], &set.matched[i]);
        let (c0, c1) = coefficients(&space, kappa, s, n);
        let h = z - n.t;
        if dist[i] < near {
            let c = |x: f64| Complex::new(x, 0.0);
            let bj = [c(0.0), c(n.b1), c(n.b2), c(n.b3), c(0.0)];
            let sq = product_jet(&bj, &bj);
            let (p, dp) = taylor_quotient(&sq, 2, h);
            let (q, dq) = taylor_quotient(&sq, 1, h);
            val.add(c0 * p + c1 * q);
            der.add(c0 * dp + c1 * dq);
        } else {
            let inv = h.inv();
            let p = bb * inv * inv;
            let q = bb * inv;
            let two_bb1 = b * b1 * 2.0;
            let dp = (two_bb1 - p * h * 2.0) * inv * inv;
            let dq = (two_bb1 - q) * inv;
            val.add(c0 * p + c1 * q);
            der.add(c0 * dp + c1 * dq);
        }
    }

    Ok(SeriesValue {
        value: val.value(),
        derivative: der.value(),
        tail_estimate: tail_estimate(set, kappa, z, bb.norm()),
        terms_used: set.len(),
    })
}

// |B(z)|² Σ_sides (m1 + m0/D)/Δ with m0, m1 the largest edge coefficients,
// D the distance from z to the first omitted node and Δ the edge gap.
fn tail_estimate(set: &SampleSet, kappa: Kappa, z: Complex, bb: f64) -> f64 {
    let space = set.node_set.space;
    let mut by_t: Vec<usize> = (0..set.len()).collect();
    by_t.sort_by(|&x, &y| set.samples[x].t.total_cmp(&set.samples[y].t));
    let gap = set
        .node_set
        .min_gap()
        .unwrap_or(f64::NAN)
        .max(1e-3);
    let k = by_t.len().min(3);
    let sides = [
        (&by_t[..k], by_t[0]),
        (&by_t[by_t.len() - k..], by_t[by_t.len() - 1]),
    ];
    let mut total = 0.0;
    for (edge, outer) in sides {
        let (mut m0, mut m1) = (0.0f64, 0.0f64);
        for &i in edge {
            let (c0, c1) = coefficients(&space, kappa, &set.samples[i], &set.matched[i]);
            m0 = m0.max(c0.norm());
            m1 = m1.max(c1.norm());
        }
        let d = (z - set.samples[outer].t).norm().max(gap);
        total += (m1 + m0 / d) / gap;
    }
    bb * total
}

pub(crate) fn check_space(set: &SampleSet, space: &SpaceDescriptor) -> Result<()> {
    if set.node_set.space != *space {
        return Err(Error::InvalidInput(
            "sample set belongs to a different space or angle".into(),
        ));
    }
    Ok(())
}

/// Partial sum of the interpolation series over exactly the given samples.
pub fn interpolate(space: &SpaceDescriptor, samples: &SampleSet, z: Complex) -> Result<EvalResult> {
    check_space(samples, space)?;
    let s = evaluate_series(samples, Kappa::General, z)?;
    Ok(EvalResult {
        value: s.value,
        tail_estimate: s.tail_estimate,
        terms_used: s.terms_used,
    })
}

/// [`interpolate`] over many points in parallel; output order follows `zs`.
pub fn interpolate_many(space: &SpaceDescriptor, samples: &SampleSet, zs: &[Complex]) -> Result<Vec<EvalResult>> {
    zs.par_iter().map(|&z| interpolate(space, samples, z)).collect()
}

fn bessel_form(nu: f64, samples: &SampleSet, alpha: f64, z: Complex) -> Result<EvalResult> {
    let space = samples.node_set.space;
    if space.nu() != Some(nu) || space.alpha() != alpha {
        return Err(Error::InvalidInput(format!(
            "expected nodes of the Bessel space nu = {nu} at angle {alpha}"
        )));
    }
    let s = evaluate_series(samples, Kappa::Bessel, z)?;
    Ok(EvalResult {
        value: s.value,
        tail_estimate: s.tail_estimate,
        terms_used: s.terms_used,
    })
}

/// Interpolation from the zeros of `A_ν` (node set at angle π/2).
pub fn interpolate_bessel_a(nu: f64, samples: &SampleSet, z: Complex) -> Result<EvalResult> {
    bessel_form(nu, samples, FRAC_PI_2, z)
}

/// Interpolation from the zeros of `B_ν` (node set at angle 0). The node
/// at the origin is kept in the main sum and dropped from the `(2ν+1)` term.
pub fn interpolate_bessel_b(nu: f64, samples: &SampleSet, z: Complex) -> Result<EvalResult> {
    bessel_form(nu, samples, 0.0, z)
}
