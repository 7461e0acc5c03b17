//! Sampling with derivatives: the frame ratio
//! `Σ{|F(t)|² + |F′(t)|²} / ∫|F|²` and reconstruction from node data.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::interp::{check_space, evaluate_series, Kappa, Sample, SampleSet, SeriesValue};
use crate::nodes::{find_nodes, NodeSet};
use crate::numerics::QuadratureSpec;
use crate::space::{e_abs_sq, SpaceDescriptor};
use crate::tails::{gap_integrals, symmetric_integral, symmetric_sum_real};
use crate::testgen::EntireFunction;
use crate::{Complex, Error, Result};

/// Largest modelled tail, relative to the energy, accepted by
/// [`frame_ratio`].
pub const MAX_TAIL_FRACTION: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    /// `∫|F|²|E|^{-4}` (plain `∫|F|²` for Paley–Wiener).
    pub energy_integral: f64,
    /// `Σ (|F(t)|² + |F′(t)|²)|E(t)|^{-4}` over the nodes.
    pub node_energy: f64,
    pub ratio: f64,
    pub window: [f64; 2],
    /// Modelled part of `energy_integral` beyond the window.
    pub tail: f64,
    /// Modelled part of `node_energy` beyond the window.
    pub node_tail: f64,
}

/// Frame ratio of `f` at the nodes of `space` in `[−window, window]`.
/// Both energies are extrapolated past the window; the window must be
/// wide enough that the modelled tail stays under 1% of the energy.
pub fn frame_ratio(space: &SpaceDescriptor, f: &dyn EntireFunction, window: f64) -> Result<FrameReport> {
    let nodes = find_nodes(space, -window, window)?;
    let c = nodes.central_index().ok_or(Error::NodeWindowEmpty)?;
    let pts: Vec<f64> = nodes.iter().map(|n| n.t).collect();
    let weight = |x: f64| -> Result<f64> { Ok(e_abs_sq(space, x)?.powi(-2)) };
    let spec = QuadratureSpec::default().with_tolerances(1e-14, 1e-11);
    let (gaps, _) = gap_integrals(
        |x| Ok(f.eval(Complex::new(x, 0.0))?.0.norm_sqr() * weight(x)?),
        &pts,
        &spec,
    )?;
    let terms = pts
        .iter()
        .map(|&t| {
            let (v, d) = f.eval(Complex::new(t, 0.0))?;
            Ok((v.norm_sqr() + d.norm_sqr()) * weight(t)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    if gaps.iter().all(|&g| g == 0.0) && terms.iter().all(|&t| t == 0.0) {
        return Err(Error::ZeroFunction);
    }
    let energy = symmetric_integral(&gaps, c, &[1.0, 2.0, 3.0, 4.0])?;
    let node = symmetric_sum_real(&terms, c, &[1.0, 2.0, 3.0, 4.0])?;
    if !(energy.value > 0.0) {
        return Err(Error::ZeroFunction);
    }
    if energy.tail().abs() > MAX_TAIL_FRACTION * energy.value {
        return Err(Error::TailTooLarge {
            tail: energy.tail(),
            integral: energy.value,
        });
    }
    Ok(FrameReport {
        energy_integral: energy.value,
        node_energy: node.value,
        ratio: node.value / energy.value,
        window: nodes.window,
        tail: energy.tail(),
        node_tail: node.tail(),
    })
}

/// The interpolation series with prescribed values `p` and derivatives `q`
/// at the nodes.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    samples: SampleSet,
}

impl Reconstruction {
    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    pub fn eval_series(&self, z: Complex) -> Result<SeriesValue> {
        evaluate_series(&self.samples, Kappa::General, z)
    }

    pub fn value(&self, z: Complex) -> Result<Complex> {
        Ok(self.eval_series(z)?.value)
    }
}

impl EntireFunction for Reconstruction {
    fn eval(&self, z: Complex) -> Result<(Complex, Complex)> {
        let s = self.eval_series(z)?;
        Ok((s.value, s.derivative))
    }
}

/// The unique `F` with `F(t_n) = p_n`, `F′(t_n) = q_n` on the given nodes
/// (and zero data elsewhere).
pub fn reconstruct(space: &SpaceDescriptor, nodes: Arc<NodeSet>, p: &[Complex], q: &[Complex]) -> Result<Reconstruction> {
    for v in [p, q] {
        if v.len() != nodes.len() {
            return Err(Error::LengthMismatch {
                expected: nodes.len(),
                got: v.len(),
            });
        }
    }
    let samples = nodes
        .iter()
        .zip(p.iter().zip(q))
        .map(|(n, (&f, &f1))| Sample { t: n.t, f, f1 })
        .collect();
    let samples = SampleSet::new(nodes, samples)?;
    check_space(&samples, space)?;
    Ok(Reconstruction { samples })
}
