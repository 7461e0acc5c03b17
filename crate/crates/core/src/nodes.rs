//! Interpolation nodes: real zeros of `B_α` in a window.
//!
//! Zeros are bracketed by marching with a step of a quarter of the minimal
//! node gap `π / sup φ′`, then refined. Completeness is certified by
//! comparing the count with the phase increment across the window and by
//! checking that `A_α` alternates in sign along the nodes (one companion node
//! between consecutive nodes).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::numerics::{integrate, refine_root, QuadratureSpec};
use crate::space::{phase_derivative, phase_derivative_bound, SpaceDescriptor};
use crate::{Error, Result};

/// A zero `t` of `B_α` with cached derivative data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub t: f64,
    /// `A_α(t)`
    pub a: f64,
    /// `B′_α(t)`
    pub b1: f64,
    /// `B″_α(t)`
    pub b2: f64,
    /// `B‴_α(t)`
    pub b3: f64,
    /// `φ′(t) = B′_α(t) / A_α(t)`
    pub phase_slope: f64,
    /// `K₂(t,t) = 2 A_α(t)³ B′_α(t) / π`
    pub k2_diag: f64,
    /// Set for the exact zero at the origin (α = 0).
    #[serde(default)]
    pub at_origin: bool,
}

impl Node {
    /// Builds the cache for a known zero of `B_α`.
    pub fn at(space: &SpaceDescriptor, t: f64) -> Result<Self> {
        let j = space.jet_real(t)?;
        let (a, b1) = (j.a[0], j.b[1]);
        Ok(Node {
            t,
            a,
            b1,
            b2: j.b[2],
            b3: j.b[3],
            phase_slope: b1 / a,
            k2_diag: 2.0 * a * a * a * b1 / PI,
            at_origin: t == 0.0 && space.alpha() == 0.0,
        })
    }

    /// `K(t,t) = A_α(t) B′_α(t) / π`.
    pub fn k_diag(&self) -> f64 {
        self.a * self.b1 / PI
    }
}

/// `K₂(t,t)` from the cached node data.
pub fn k2_diagonal(node: &Node, _space: &SpaceDescriptor) -> f64 {
    2.0 * node.a.powi(3) * node.b1 / PI
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeSet {
    pub space: SpaceDescriptor,
    pub window: [f64; 2],
    pub nodes: Vec<Node>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Node> {
        self.nodes.iter()
    }

    /// Index of the node within `tol` of `t`.
    pub fn locate(&self, t: f64, tol: f64) -> Option<usize> {
        let i = self.nodes.partition_point(|n| n.t < t);
        [i.wrapping_sub(1), i]
            .into_iter()
            .filter(|&k| k < self.nodes.len())
            .min_by(|&x, &y| {
                (self.nodes[x].t - t)
                    .abs()
                    .total_cmp(&(self.nodes[y].t - t).abs())
            })
            .filter(|&k| (self.nodes[k].t - t).abs() <= tol)
    }

    /// Index of the node closest to the origin, ties to the positive one.
    pub fn central_index(&self) -> Option<usize> {
        (0..self.nodes.len()).min_by(|&x, &y| {
            let (a, b) = (self.nodes[x].t, self.nodes[y].t);
            a.abs().total_cmp(&b.abs()).then(b.total_cmp(&a))
        })
    }

    /// Nodes with `|t| ≤ radius`.
    pub fn symmetric_subset(&self, radius: f64) -> NodeSet {
        NodeSet {
            space: self.space,
            window: [self.window[0].max(-radius), self.window[1].min(radius)],
            nodes: self.nodes.iter().copied().filter(|n| n.t.abs() <= radius).collect(),
        }
    }

    /// Smallest gap between consecutive nodes.
    pub fn min_gap(&self) -> Option<f64> {
        self.nodes.windows(2).map(|w| w[1].t - w[0].t).reduce(f64::min)
    }
}

/// Expected node count in `[lo, hi]` from the phase, as a `(min, max)` pair;
/// the two differ only when a node sits on the window edge within rounding.
pub fn phase_count(space: &SpaceDescriptor, lo: f64, hi: f64) -> Result<(usize, usize)> {
    if hi < lo {
        return Ok((0, 0));
    }
    let j = space.jet_real(lo)?;
    // B_α = |E| sin(φ − α), A_α = |E| cos(φ − α)
    let theta0 = j.b[0].atan2(j.a[0]).rem_euclid(PI);
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-12);
    let mut err = None;
    let dphi = integrate(
        |t| match phase_derivative(space, t) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        &spec,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    // count multiples of π in [θ0, θ0 + Δφ]; δ absorbs nodes on the edges
    let (x_lo, x_hi) = (theta0 / PI, (theta0 + dphi.value) / PI);
    let delta = 1e-9;
    let hi_n = (x_hi + delta).floor() - (x_lo - delta).ceil() + 1.0;
    let lo_n = (x_hi - delta).floor() - (x_lo + delta).ceil() + 1.0;
    Ok((lo_n.max(0.0) as usize, hi_n.max(0.0) as usize))
}

fn march(space: &SpaceDescriptor, lo: f64, hi: f64, step: f64, out: &mut Vec<f64>) -> Result<()> {
    if hi < lo {
        return Ok(());
    }
    let b = |t: f64| -> Result<f64> { Ok(space.jet_real(t)?.b[0]) };
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    // window edges within rounding of a zero count as nodes
    let near_zero = |t: f64| -> Result<bool> {
        let j = space.jet_real(t)?;
        Ok(j.b[0].abs() <= 8.0 * f64::EPSILON * t.abs().max(1.0) * j.b[1].abs())
    };
    let mut x0 = lo;
    let mut f0 = b(x0)?;
    if f0 == 0.0 || near_zero(lo)? {
        out.push(x0);
    }
    if near_zero(hi)? {
        out.push(hi);
    }
    for i in 1..=n {
        let x1 = if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 };
        let f1 = b(x1)?;
        if f1 == 0.0 {
            out.push(x1);
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            let f = |t: f64| space.jet_real(t).map(|j| j.b[0]).unwrap_or(f64::NAN);
            let df = |t: f64| space.jet_real(t).map(|j| j.b[1]).unwrap_or(f64::NAN);
            out.push(refine_root(f, df, x0, x1)?);
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(())
}

/// All zeros of `B_α` in `[t_min, t_max]`.
pub fn find_nodes(space: &SpaceDescriptor, t_min: f64, t_max: f64) -> Result<NodeSet> {
    if !(t_min.is_finite() && t_max.is_finite()) {
        return Err(Error::InvalidInput("window must be finite".into()));
    }
    let mut set = NodeSet {
        space: *space,
        window: [t_min, t_max],
        nodes: Vec::new(),
    };
    if t_max < t_min {
        return Ok(set);
    }
    let bound = phase_derivative_bound(space, t_min, t_max)?;
    let step = PI / (4.0 * bound);
    let mut ts = Vec::new();
    if space.alpha() == 0.0 && t_min < 0.0 && t_max > 0.0 {
        // keep the exact zero at the origin on the grid
        march(space, t_min, 0.0, step, &mut ts)?;
        let mut right = Vec::new();
        march(space, 0.0, t_max, step, &mut right)?;
        ts.extend(right.into_iter().filter(|&t| t != 0.0));
    } else {
        march(space, t_min, t_max, step, &mut ts)?;
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    set.nodes = ts
        .into_iter()
        .map(|t| Node::at(space, t))
        .collect::<Result<Vec<_>>>()?;

    let (lo_n, hi_n) = phase_count(space, t_min, t_max)?;
    let found = set.nodes.len();
    if found < lo_n || found > hi_n {
        return Err(Error::NodeCountMismatch {
            found,
            expected: if found < lo_n { lo_n } else { hi_n },
        });
    }
    if set.nodes.windows(2).any(|w| w[0].a.signum() == w[1].a.signum()) {
        // two nodes without a companion node between them: a pair was missed
        return Err(Error::NodeCountMismatch {
            found,
            expected: found + 1,
        });
    }
    Ok(set)
}

/// Whether two sorted point lists strictly alternate.
pub fn interlaces(a: &[f64], b: &[f64]) -> bool {
    let mut merged: Vec<(f64, u8)> = a.iter().map(|&t| (t, 0)).chain(b.iter().map(|&t| (t, 1))).collect();
    merged.sort_by(|x, y| x.0.total_cmp(&y.0));
    merged.windows(2).all(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0)
}
