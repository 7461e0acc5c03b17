//! Normalised Bessel companions
//!
//! ```text
//! A_ν(z) = Γ(ν+1) (z/2)^{-ν}  J_ν(z)   = Σ (-1)^n (z/2)^{2n}   / (n! (ν+1)_n)
//! B_ν(z) = Γ(ν+1) (z/2)^{-ν}  J_{ν+1}(z) = Σ (-1)^n (z/2)^{2n+1} / (n! (ν+1)_{n+1})
//! ```
//!
//! with `A′ = −B` and `B′ = A − (2ν+1)B/z`.
//!
//! Small arguments use the power series in double-double arithmetic; the
//! series cancels badly on the real axis (terms reach `e^{|z|}`), and the
//! extra 16 digits absorb that up to the switch radius. Beyond it the Hankel
//! expansion of `J_ν`, `J_{ν+1}` is used. Derivatives come from the two
//! first-order relations, never from differences.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::numerics::dd::{CDd, Dd};
use crate::numerics::{gamma, ln_gamma};
use crate::{Complex, Error, Result};

/// Default largest admissible `|z|`.
pub const DEFAULT_R_MAX: f64 = 1.0e4;
/// Below this radius the double-double series is used.
pub const SERIES_RADIUS: f64 = 25.0;
/// The series is still trusted up to here when the Hankel expansion fails to
/// converge (large ν).
pub const SERIES_FALLBACK_RADIUS: f64 = 45.0;

const N_TERMS: usize = 128;
const SERIES_EPS: f64 = 1e-33;
const HANKEL_TOL: f64 = 1e-17;
const HANKEL_MAX_TERMS: usize = 80;

/// Coefficients of the two series in powers of `(z/2)²`.
#[derive(Debug, Clone)]
pub struct BesselCompanionSeries {
    nu: f64,
    // A = Σ alpha[n] z^{2n},  B/z = Σ gamma[n] z^{2n}
    alpha: Vec<Dd>,
    gamma: Vec<Dd>,
}

impl BesselCompanionSeries {
    pub fn new(nu: f64, n_terms: usize) -> Result<Self> {
        check_nu(nu)?;
        let n_terms = n_terms.max(1);
        let nu_dd = Dd::new(nu);
        let mut alpha = Vec::with_capacity(n_terms);
        let mut gamma = Vec::with_capacity(n_terms);
        alpha.push(Dd::ONE);
        gamma.push(Dd::ONE / (Dd::new(2.0) * (nu_dd + Dd::ONE)));
        for n in 1..n_terms {
            let nf = Dd::new(n as f64);
            let four_n = Dd::new(4.0 * n as f64);
            let da = four_n * (nu_dd + nf);
            let dg = four_n * (nu_dd + nf + Dd::ONE);
            alpha.push(-(alpha[n - 1] / da));
            gamma.push(-(gamma[n - 1] / dg));
        }
        Ok(Self { nu, alpha, gamma })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn n_terms(&self) -> usize {
        self.alpha.len()
    }

    /// Coefficients of `A_ν` in powers of `(z/2)²`; the first is 1.
    pub fn coeff_a(&self) -> Vec<f64> {
        let mut scale = Dd::ONE;
        self.alpha
            .iter()
            .map(|&c| {
                let v = (c * scale).to_f64();
                scale = scale * Dd::new(4.0);
                v
            })
            .collect()
    }

    /// Coefficients of `B_ν` in powers of `(z/2)²`, after factoring out one
    /// `z/2`; the first is `1/(ν+1)`.
    pub fn coeff_b(&self) -> Vec<f64> {
        let mut scale = Dd::new(2.0);
        self.gamma
            .iter()
            .map(|&c| {
                let v = (c * scale).to_f64();
                scale = scale * Dd::new(4.0);
                v
            })
            .collect()
    }

    /// Returns `(A, g, g′, g″, g‴)` with `g = B/z`, or `None` if the series
    /// did not settle within the table.
    fn eval(&self, z: Complex) -> Option<[Complex; 5]> {
        let zd = CDd::from_complex(z);
        let w = zd * zd;
        let mut pow = CDd::from_complex(Complex::new(1.0, 0.0)); // w^n
        let mut prev_pow = CDd::ZERO; // w^{n-1}
        let mut prev2_pow = CDd::ZERO; // w^{n-2}
        let mut sums = [CDd::ZERO; 5];
        let mut quiet = 0;
        for n in 0..self.alpha.len() {
            let nf = n as f64;
            let terms = [
                pow.scale(self.alpha[n]),
                pow.scale(self.gamma[n]),
                // g′/z
                prev_pow.scale(self.gamma[n] * Dd::new(2.0 * nf)),
                prev_pow.scale(self.gamma[n] * Dd::new(2.0 * nf * (2.0 * nf - 1.0))),
                // g‴/z
                prev2_pow.scale(self.gamma[n] * Dd::new(2.0 * nf * (2.0 * nf - 1.0) * (2.0 * nf - 2.0))),
            ];
            let mut small = true;
            for (s, t) in sums.iter_mut().zip(terms) {
                *s = *s + t;
                if t.norm1() > SERIES_EPS * s.norm1() {
                    small = false;
                }
            }
            if small && n >= 2 {
                quiet += 1;
                if quiet >= 3 {
                    let mut out = sums.map(CDd::to_complex);
                    out[2] *= z;
                    out[4] *= z;
                    return Some(out);
                }
            } else {
                quiet = 0;
            }
            prev2_pow = prev_pow;
            prev_pow = pow;
            pow = pow * w;
        }
        None
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if nu.is_finite() && nu > -1.0 {
        Ok(())
    } else {
        Err(Error::DomainError {
            value: nu,
            what: "Bessel parameter must satisfy nu > -1",
        })
    }
}

fn shared_series(nu: f64) -> Result<Arc<BesselCompanionSeries>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<BesselCompanionSeries>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = nu.to_bits();
    if let Some(s) = cache.read().expect("series cache poisoned").get(&key) {
        return Ok(Arc::clone(s));
    }
    let s = Arc::new(BesselCompanionSeries::new(nu, N_TERMS)?);
    cache
        .write()
        .expect("series cache poisoned")
        .entry(key)
        .or_insert_with(|| Arc::clone(&s));
    Ok(s)
}

/// `A^{(k)}` and `B^{(k)}` for `k = 0..=4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselJet {
    pub a: [Complex; 5],
    pub b: [Complex; 5],
}

/// Evaluator for a fixed ν.
#[derive(Debug, Clone)]
pub struct BesselEngine {
    nu: f64,
    r_max: f64,
    series: Arc<BesselCompanionSeries>,
    // ln(Γ(ν+1) 2^{ν+1/2} / √π)
    ln_pref: f64,
}

impl BesselEngine {
    pub fn new(nu: f64) -> Result<Self> {
        check_nu(nu)?;
        let ln_pref = ln_gamma(nu + 1.0) + (nu + 0.5) * std::f64::consts::LN_2
            - 0.5 * std::f64::consts::PI.ln();
        Ok(Self {
            nu,
            r_max: DEFAULT_R_MAX,
            series: shared_series(nu)?,
            ln_pref,
        })
    }

    pub fn with_radius(mut self, r_max: f64) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn series(&self) -> &BesselCompanionSeries {
        &self.series
    }

    /// Values and four derivatives of `A_ν`, `B_ν` at `z`.
    pub fn jet(&self, z: Complex) -> Result<BesselJet> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::DomainError {
                value: z.norm(),
                what: "argument must be finite",
            });
        }
        let r = z.norm();
        if r > self.r_max {
            return Err(Error::RadiusExceeded {
                radius: r,
                limit: self.r_max,
            });
        }
        if r <= SERIES_RADIUS {
            return self.series_jet(z, r);
        }
        // A is even, B odd: evaluate in the right half-plane
        let flip = z.re < 0.0;
        let zr = if flip { -z } else { z };
        let jet = match self.hankel(zr) {
            Some((a, b)) => self.jet_from_ab(zr, a, b),
            None if r <= SERIES_FALLBACK_RADIUS => return self.series_jet(z, r),
            None => {
                return Err(Error::RadiusExceeded {
                    radius: r,
                    limit: SERIES_FALLBACK_RADIUS,
                })
            }
        };
        Ok(if flip { reflect(jet) } else { jet })
    }

    /// `(A^{(k)}, B^{(k)})` for `k = 0..=order`, `order ≤ 4`.
    pub fn eval(&self, z: Complex, order: usize) -> Result<Vec<(Complex, Complex)>> {
        if order > 4 {
            return Err(Error::DomainError {
                value: order as f64,
                what: "derivative order must be at most 4",
            });
        }
        let j = self.jet(z)?;
        Ok((0..=order).map(|k| (j.a[k], j.b[k])).collect())
    }

    fn series_jet(&self, z: Complex, r: f64) -> Result<BesselJet> {
        let [a, g, g1, g2, g3] = self.series.eval(z).ok_or(Error::RadiusExceeded {
            radius: r,
            limit: SERIES_RADIUS,
        })?;
        Ok(self.assemble(z, a, g, [g1, g2, g3]))
    }

    // Given A and g = B/z with g′, g″, g‴, fill the jet from
    // A′ = −B and B′ = A − c g.
    fn assemble(&self, z: Complex, a0: Complex, g: Complex, gd: [Complex; 3]) -> BesselJet {
        let c = 2.0 * self.nu + 1.0;
        let b0 = z * g;
        let b1 = a0 - g * c;
        let b2 = -b0 - gd[0] * c;
        let b3 = -b1 - gd[1] * c;
        let b4 = -b2 - gd[2] * c;
        BesselJet {
            a: [a0, -b0, -b1, -b2, -b3],
            b: [b0, b1, b2, b3, b4],
        }
    }

    fn jet_from_ab(&self, z: Complex, a: Complex, b: Complex) -> BesselJet {
        let c = 2.0 * self.nu + 1.0;
        // B = z g  ⇒  B^{(k)} = z g^{(k)} + k g^{(k-1)}
        let g = b / z;
        let b1 = a - g * c;
        let g1 = (b1 - g) / z;
        let b2 = -b - g1 * c;
        let g2 = (b2 - g1 * 2.0) / z;
        let b3 = -b1 - g2 * c;
        let g3 = (b3 - g2 * 3.0) / z;
        self.assemble(z, a, g, [g1, g2, g3])
    }

    /// Hankel expansion for `Re z ≥ 0`, `|z|` large.
    fn hankel(&self, z: Complex) -> Option<(Complex, Complex)> {
        let (p0, q0) = hankel_pq(self.nu, z)?;
        let (p1, q1) = hankel_pq(self.nu + 1.0, z)?;
        let chi = z - std::f64::consts::FRAC_PI_2 * self.nu - std::f64::consts::FRAC_PI_4;
        let (s, c) = (chi.sin(), chi.cos());
        let pref = (Complex::new(self.ln_pref, 0.0) - z.ln() * (self.nu + 0.5)).exp();
        let a = pref * (p0 * c - q0 * s);
        let b = pref * (p1 * s + q1 * c);
        Some((a, b))
    }

    /// Leading-order `|E_ν(x)|²` for real `|x| ≥ 1`.
    pub fn asymptotic_magnitude(&self, x: f64) -> Result<f64> {
        asymptotic_magnitude(self.nu, x)
    }
}

fn reflect(j: BesselJet) -> BesselJet {
    let mut out = j;
    for k in 0..5 {
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        out.a[k] = j.a[k] * s;
        out.b[k] = -j.b[k] * s;
    }
    out
}

// P and Q of the Hankel expansion, or None once the terms turn around
// before reaching the tolerance.
fn hankel_pq(nu: f64, z: Complex) -> Option<(Complex, Complex)> {
    let mu = 4.0 * nu * nu;
    let mut p = Complex::new(1.0, 0.0);
    let mut q = Complex::new(0.0, 0.0);
    let mut a = 1.0;
    let mut zpow = Complex::new(1.0, 0.0);
    let zinv = z.inv();
    let mut prev = f64::INFINITY;
    for k in 1..HANKEL_MAX_TERMS {
        let kf = k as f64;
        let odd = (2.0 * kf - 1.0) * (2.0 * kf - 1.0);
        a *= (mu - odd) / (8.0 * kf);
        zpow *= zinv;
        let t = zpow * a;
        let mag = t.norm();
        if mag <= HANKEL_TOL {
            return Some((p, q));
        }
        if mag > prev && odd > mu {
            return None;
        }
        prev = mag;
        // signs: P = a0 − a2/z² + a4/z⁴ …, Q = a1/z − a3/z³ + …
        match k % 4 {
            0 => p += t,
            1 => q += t,
            2 => p -= t,
            _ => q -= t,
        }
    }
    None
}

/// `(A^{(k)}_ν(z), B^{(k)}_ν(z))` for `k = 0..=order`.
pub fn eval_bessel_companions(nu: f64, z: Complex, order: usize) -> Result<Vec<(Complex, Complex)>> {
    BesselEngine::new(nu)?.eval(z, order)
}

/// Leading-order estimate of `|E_ν(x)|²`, `Γ(ν+1)² 2^{2ν+1} |x|^{-(2ν+1)} / π`.
///
/// Only meant for tail bounds.
pub fn asymptotic_magnitude(nu: f64, x: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(x.abs() >= 1.0) {
        return Err(Error::DomainError {
            value: x,
            what: "asymptotic magnitude needs |x| >= 1",
        });
    }
    let ln = 2.0 * ln_gamma(nu + 1.0) + (2.0 * nu + 1.0) * (std::f64::consts::LN_2 - x.abs().ln())
        - std::f64::consts::PI.ln();
    Ok(ln.exp())
}

/// `c_ν = π 2^{-2ν-1} / Γ(ν+1)²`, the constant linking `|E_ν|^{-2}` and
/// `|x|^{2ν+1}` in the norm.
pub fn c_nu(nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if nu + 1.0 <= 12.0 {
        let g = gamma(nu + 1.0);
        return Ok(std::f64::consts::PI * (-(2.0 * nu + 1.0)).exp2() / (g * g));
    }
    Ok((std::f64::consts::PI.ln() - (2.0 * nu + 1.0) * std::f64::consts::LN_2 - 2.0 * ln_gamma(nu + 1.0)).exp())
}
