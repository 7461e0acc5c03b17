//! Truncation at growing symmetric node windows, with the limit recovered by
//! extrapolation in the cut index.
//!
//! Sums are cut after `N` nodes on each side of the central node and
//! integrals at the matching nodes, so both are smooth in `N` (the
//! integrands oscillate with the phase and complete a half period per gap).

use rayon::prelude::*;

use crate::numerics::{extrapolate_limit, integrate, ComplexSum, NeumaierSum, QuadratureSpec};
use crate::{Complex, Error, Result};

/// Fewest nodes per side for a meaningful fit.
pub(crate) const MIN_SIDE: usize = 16;
const N_CUTS: usize = 6;

/// A truncated quantity and its extrapolated limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Limit<T> {
    pub value: T,
    /// Value at the largest cut.
    pub raw: T,
    /// Extrapolation uncertainty.
    pub error: f64,
}

impl<T: Copy + std::ops::Sub<Output = T>> Limit<T> {
    pub fn tail(&self) -> T {
        self.value - self.raw
    }
}

/// Nodes available on both sides of `center` in a list of `len`.
pub(crate) fn side_count(len: usize, center: usize) -> Result<usize> {
    let n = center.min(len.saturating_sub(1 + center));
    if n < MIN_SIDE {
        return Err(Error::InvalidInput(format!(
            "node window too small: {n} nodes on the short side, need {MIN_SIDE}"
        )));
    }
    Ok(n)
}

/// Cut levels `N` spread over the upper part of `[0, n_max]`.
pub(crate) fn cut_levels(n_max: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..N_CUTS)
        .map(|k| n_max * (N_CUTS + 2 + k) / (2 * N_CUTS + 1))
        .collect();
    v.push(n_max);
    v.dedup();
    v
}

fn cut_variable(levels: &[usize]) -> Vec<f64> {
    levels.iter().map(|&n| n as f64 + 0.5).collect()
}

fn extrapolate_real(levels: &[usize], values: &[f64], exponents: &[f64]) -> Result<Limit<f64>> {
    let e = extrapolate_limit(&cut_variable(levels), values, exponents)?;
    Ok(Limit {
        value: e.value,
        raw: values[values.len() - 1],
        error: e.error,
    })
}

/// Limit of `Σ_{|i − center| ≤ N} terms[i]` as `N → ∞`.
pub(crate) fn symmetric_sum(terms: &[Complex], center: usize, exponents: &[f64]) -> Result<Limit<Complex>> {
    let n_max = side_count(terms.len(), center)?;
    let levels = cut_levels(n_max);
    let partial: Vec<Complex> = levels
        .iter()
        .map(|&n| {
            let mut s = ComplexSum::new();
            for t in &terms[center - n..=center + n] {
                s.add(*t);
            }
            s.value()
        })
        .collect();
    let re = extrapolate_real(&levels, &partial.iter().map(|z| z.re).collect::<Vec<_>>(), exponents)?;
    let im = extrapolate_real(&levels, &partial.iter().map(|z| z.im).collect::<Vec<_>>(), exponents)?;
    Ok(Limit {
        value: Complex::new(re.value, im.value),
        raw: Complex::new(re.raw, im.raw),
        error: re.error.hypot(im.error),
    })
}

/// Real version of [`symmetric_sum`].
pub(crate) fn symmetric_sum_real(terms: &[f64], center: usize, exponents: &[f64]) -> Result<Limit<f64>> {
    let n_max = side_count(terms.len(), center)?;
    let levels = cut_levels(n_max);
    let partial: Vec<f64> = levels
        .iter()
        .map(|&n| {
            let mut s = NeumaierSum::new();
            s.extend(terms[center - n..=center + n].iter().copied());
            s.value()
        })
        .collect();
    extrapolate_real(&levels, &partial, exponents)
}

/// Integrals of `f` over consecutive gaps of `points`, with the summed
/// quadrature error.
pub(crate) fn gap_integrals<F>(f: F, points: &[f64], spec: &QuadratureSpec<f64>) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let parts = points
        .par_windows(2)
        .map(|w| {
            let mut err = None;
            let r = integrate(
                |x| match f(x) {
                    Ok(v) => v,
                    Err(e) => {
                        err.get_or_insert(e);
                        0.0
                    }
                },
                w[0],
                w[1],
                spec,
            )?;
            match err {
                Some(e) => Err(e),
                None => Ok((r.value, r.error)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let err = parts.iter().map(|p| p.1).sum();
    Ok((parts.into_iter().map(|p| p.0).collect(), err))
}

/// Limit of `∫_{t[center−N]}^{t[center+N]}` given the gap integrals of the
/// node list (`gaps[i]` covers `[t_i, t_{i+1}]`).
pub(crate) fn symmetric_integral(gaps: &[f64], center: usize, exponents: &[f64]) -> Result<Limit<f64>> {
    let n_max = side_count(gaps.len() + 1, center)?;
    let levels = cut_levels(n_max);
    let partial: Vec<f64> = levels
        .iter()
        .map(|&n| {
            let mut s = NeumaierSum::new();
            s.extend(gaps[center - n..center + n].iter().copied());
            s.value()
        })
        .collect();
    extrapolate_real(&levels, &partial, exponents)
}

/// Limit of the one-sided `∫_{t[start]}^{t[start+N]}` as `N → ∞`.
pub(crate) fn one_sided_integral(gaps: &[f64], start: usize, exponents: &[f64]) -> Result<Limit<f64>> {
    let n_max = gaps.len() - start;
    if n_max < 2 * MIN_SIDE {
        return Err(Error::InvalidInput(format!(
            "node window too small: {n_max} gaps, need {}",
            2 * MIN_SIDE
        )));
    }
    let levels = cut_levels(n_max);
    let partial: Vec<f64> = levels
        .iter()
        .map(|&n| {
            let mut s = NeumaierSum::new();
            s.extend(gaps[start..start + n].iter().copied());
            s.value()
        })
        .collect();
    extrapolate_real(&levels, &partial, exponents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn basel_from_symmetric_terms() {
        // Σ_{n≠0} 1/n² over −400..400
        let terms: Vec<Complex> = (-400i64..=400)
            .map(|n| Complex::new(if n == 0 { 0.0 } else { 1.0 / (n * n) as f64 }, 0.0))
            .collect();
        let l = symmetric_sum(&terms, 400, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((l.value.re - PI * PI / 3.0).abs() < 1e-11, "{:?}", l);
        assert!(l.tail().re > 0.0);
    }

    #[test]
    fn sinc_squared_integral() {
        let pts: Vec<f64> = (-200..=200).map(|n| n as f64).collect();
        let f = |x: f64| -> Result<f64> {
            Ok(if x == 0.0 { 1.0 } else { ((PI * x).sin() / (PI * x)).powi(2) })
        };
        let (gaps, err) = gap_integrals(f, &pts, &QuadratureSpec::default()).unwrap();
        assert!(err < 1e-9);
        let l = symmetric_integral(&gaps, 200, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((l.value - 1.0).abs() < 1e-10, "{:?}", l);
        assert!((l.tail() - 1.0 / (PI * PI * 200.0)).abs() < 1e-5);
    }

    #[test]
    fn small_window_rejected() {
        let terms = vec![Complex::new(1.0, 0.0); 11];
        assert!(matches!(symmetric_sum(&terms, 5, &[1.0]), Err(Error::InvalidInput(_))));
    }
}
