//! Space descriptors and companion-function evaluation.
//!
//! `e^{iα} E(z) = A_α(z) − i B_α(z)` with
//! `A_α = cos α·A + sin α·B` and `B_α = cos α·B − sin α·A`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::bessel::BesselEngine;
use crate::{Complex, Error, Result};

/// Which structure function `E`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    /// `E(z) = e^{-iτz}`, so `A = cos τz`, `B = sin τz`.
    #[serde(rename = "pw")]
    PaleyWiener { tau: f64 },
    /// `E_ν = A_ν − i B_ν` built from Bessel functions.
    #[serde(rename = "bessel")]
    BesselHomogeneous { nu: f64 },
}

impl Family {
    fn validate(&self) -> Result<()> {
        match *self {
            Family::PaleyWiener { tau } if !(tau.is_finite() && tau > 0.0) => Err(Error::DomainError {
                value: tau,
                what: "Paley-Wiener type must be positive",
            }),
            Family::BesselHomogeneous { nu } if !(nu.is_finite() && nu > -1.0) => Err(Error::DomainError {
                value: nu,
                what: "Bessel parameter must satisfy nu > -1",
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Deserialize)]
struct RawDescriptor {
    #[serde(flatten)]
    family: Family,
    #[serde(default)]
    alpha: f64,
}

/// A structure function plus a rotation angle, stored reduced to `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor")]
pub struct SpaceDescriptor {
    #[serde(flatten)]
    family: Family,
    alpha: f64,
}

impl TryFrom<RawDescriptor> for SpaceDescriptor {
    type Error = Error;
    fn try_from(raw: RawDescriptor) -> Result<Self> {
        SpaceDescriptor::new(raw.family, raw.alpha)
    }
}

/// Reduces an angle into `[0, π)`.
pub fn reduce_angle(alpha: f64) -> f64 {
    let a = alpha.rem_euclid(PI);
    if a >= PI {
        0.0
    } else {
        a
    }
}

impl SpaceDescriptor {
    pub fn new(family: Family, alpha: f64) -> Result<Self> {
        family.validate()?;
        if !alpha.is_finite() {
            return Err(Error::DomainError {
                value: alpha,
                what: "angle must be finite",
            });
        }
        Ok(Self {
            family,
            alpha: reduce_angle(alpha),
        })
    }

    pub fn paley_wiener(tau: f64) -> Result<Self> {
        Self::new(Family::PaleyWiener { tau }, 0.0)
    }

    pub fn bessel(nu: f64) -> Result<Self> {
        Self::new(Family::BesselHomogeneous { nu }, 0.0)
    }

    /// Same structure function at another angle.
    pub fn with_alpha(self, alpha: f64) -> Self {
        Self {
            family: self.family,
            alpha: reduce_angle(alpha),
        }
    }

    /// The companion angle `α − π/2`, whose nodes are the zeros of `A_α`.
    pub fn companion(self) -> Self {
        self.with_alpha(self.alpha - FRAC_PI_2)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn nu(&self) -> Option<f64> {
        match self.family {
            Family::BesselHomogeneous { nu } => Some(nu),
            _ => None,
        }
    }

    /// Whether `A` is even and `B` odd (true for both families).
    pub fn is_symmetric(&self) -> bool {
        true
    }

    fn rotation(&self) -> (f64, f64) {
        // exact values at the two angles that come up constantly
        if self.alpha == 0.0 {
            (1.0, 0.0)
        } else if self.alpha == FRAC_PI_2 {
            (0.0, 1.0)
        } else {
            (self.alpha.cos(), self.alpha.sin())
        }
    }

    /// Unrotated `(A, B)` derivatives up to order 4.
    pub fn base_jet(&self, z: Complex) -> Result<Jet> {
        match self.family {
            Family::PaleyWiener { tau } => {
                let w = z * tau;
                let (c, s) = (w.cos(), w.sin());
                let (t2, t3, t4) = (tau * tau, tau * tau * tau, tau * tau * tau * tau);
                Ok(Jet {
                    a: [c, -s * tau, -c * t2, s * t3, c * t4],
                    b: [s, c * tau, -s * t2, -c * t3, s * t4],
                })
            }
            Family::BesselHomogeneous { nu } => {
                let j = BesselEngine::new(nu)?.jet(z)?;
                Ok(Jet { a: j.a, b: j.b })
            }
        }
    }

    /// Rotated `(A_α, B_α)` derivatives up to order 4.
    pub fn jet(&self, z: Complex) -> Result<Jet> {
        let base = self.base_jet(z)?;
        let (c, s) = self.rotation();
        if s == 0.0 {
            return Ok(base);
        }
        let mut out = base;
        for k in 0..5 {
            out.a[k] = base.a[k] * c + base.b[k] * s;
            out.b[k] = base.b[k] * c - base.a[k] * s;
        }
        Ok(out)
    }

    /// Real-argument jet.
    pub fn jet_real(&self, t: f64) -> Result<RealJet> {
        let j = self.jet(Complex::new(t, 0.0))?;
        Ok(RealJet {
            a: j.a.map(|v| v.re),
            b: j.b.map(|v| v.re),
        })
    }
}

/// `A_α^{(k)}`, `B_α^{(k)}` for `k = 0..=4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub a: [Complex; 5],
    pub b: [Complex; 5],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealJet {
    pub a: [f64; 5],
    pub b: [f64; 5],
}

/// `A_α`, `B_α` and three derivatives at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompanionValues {
    pub a: Complex,
    pub b: Complex,
    pub a1: Complex,
    pub b1: Complex,
    pub a2: Complex,
    pub b2: Complex,
    pub a3: Complex,
    pub b3: Complex,
}

impl From<Jet> for CompanionValues {
    fn from(j: Jet) -> Self {
        Self {
            a: j.a[0],
            b: j.b[0],
            a1: j.a[1],
            b1: j.b[1],
            a2: j.a[2],
            b2: j.b[2],
            a3: j.a[3],
            b3: j.b[3],
        }
    }
}

pub fn eval_companions(space: &SpaceDescriptor, z: Complex) -> Result<CompanionValues> {
    space.jet(z).map(Into::into)
}

/// `E(z) = A(z) − i B(z)` (unrotated).
pub fn eval_e(space: &SpaceDescriptor, z: Complex) -> Result<Complex> {
    let j = space.base_jet(z)?;
    Ok(j.a[0] - Complex::i() * j.b[0])
}

/// `E*(z) = conj(E(conj z))`.
pub fn eval_e_star(space: &SpaceDescriptor, z: Complex) -> Result<Complex> {
    Ok(eval_e(space, z.conj())?.conj())
}

/// `|E(t)|²` for real `t`.
pub fn e_abs_sq(space: &SpaceDescriptor, t: f64) -> Result<f64> {
    let j = space.base_jet(Complex::new(t, 0.0))?;
    Ok(j.a[0].re * j.a[0].re + j.b[0].re * j.b[0].re)
}

/// `φ′(t) = π K(t,t) / |E(t)|²`, strictly positive.
pub fn phase_derivative(space: &SpaceDescriptor, t: f64) -> Result<f64> {
    match space.family {
        Family::PaleyWiener { tau } => Ok(tau),
        Family::BesselHomogeneous { nu } => {
            if t == 0.0 {
                return Ok(1.0 / (2.0 * nu + 2.0));
            }
            let j = BesselEngine::new(nu)?.jet(Complex::new(t, 0.0))?;
            let (a, b) = (j.a[0].re, j.b[0].re);
            Ok(1.0 - (2.0 * nu + 1.0) * a * b / (t * (a * a + b * b)))
        }
    }
}

/// An upper bound for `φ′` on `[lo, hi]`.
pub fn phase_derivative_bound(space: &SpaceDescriptor, lo: f64, hi: f64) -> Result<f64> {
    match space.family {
        Family::PaleyWiener { tau } => Ok(tau),
        Family::BesselHomogeneous { nu } => {
            // |AB| ≤ |E|²/2 gives φ′ ≤ 1 + |2ν+1|/(2|t|); near 0 sample densely
            let c = (2.0 * nu + 1.0).abs();
            let mut bound: f64 = 1.0 + c / 2.0;
            let (a, b) = (lo.max(-1.0), hi.min(1.0));
            if a <= b {
                let n = 200;
                for i in 0..=n {
                    let t = a + (b - a) * i as f64 / n as f64;
                    bound = bound.max(phase_derivative(space, t)?);
                }
                bound *= 1.05;
            }
            Ok(bound)
        }
    }
}
