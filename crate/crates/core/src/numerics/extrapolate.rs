//! Richardson-type extrapolation of truncated sums and integrals.
//!
//! Given values `S(T_i)` of a quantity truncated at cut points `T_i`, and a
//! model `S(T) = L + Σ_j c_j T^{-p_j}` with known exponents, solve for `L`.

use serde::{Deserialize, Serialize};

use super::Scalar;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolated<T> {
    /// Extrapolated limit.
    pub value: T,
    /// Distance between the full and the one-exponent-shorter fit; a
    /// heuristic estimate of what the model leaves out.
    pub error: T,
    /// `value − S(T_max)`, the modelled tail beyond the largest cut.
    pub tail: T,
}

fn solve<T: Scalar>(mut m: Vec<Vec<T>>, mut rhs: Vec<T>) -> Option<Vec<T>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[piv][col] == T::zero() {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                let v = m[col][k];
                m[row][k] = m[row][k] - f * v;
            }
            rhs[row] = rhs[row] - f * rhs[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc = acc - m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

fn fit<T: Scalar>(cuts: &[T], values: &[T], exponents: &[T]) -> Option<T> {
    let k = exponents.len();
    let n = k + 1;
    // use the n largest cuts
    let start = cuts.len() - n;
    // scale cut points so the matrix stays well conditioned
    let scale = cuts[cuts.len() - 1];
    let m = (start..cuts.len())
        .map(|i| {
            let mut row = Vec::with_capacity(n);
            row.push(T::one());
            let s = cuts[i] / scale;
            for &p in exponents {
                row.push(s.powf(-p));
            }
            row
        })
        .collect();
    let rhs = values[start..].to_vec();
    solve(m, rhs).map(|x| x[0])
}

/// Extrapolates truncated values to the infinite-cut limit.
///
/// `cuts` must be positive and strictly increasing, with at least
/// `exponents.len() + 1` entries.
pub fn extrapolate_limit<T: Scalar>(cuts: &[T], values: &[T], exponents: &[T]) -> Result<Extrapolated<T>> {
    if cuts.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: cuts.len(),
            got: values.len(),
        });
    }
    if cuts.len() < exponents.len() + 1 || cuts.is_empty() {
        return Err(Error::InvalidInput(
            "extrapolation needs one more cut than model exponents".into(),
        ));
    }
    if cuts.windows(2).any(|w| w[1] <= w[0]) || cuts[0] <= T::zero() {
        return Err(Error::InvalidInput("cut points must be positive and increasing".into()));
    }
    let last = values[values.len() - 1];
    if exponents.is_empty() {
        return Ok(Extrapolated {
            value: last,
            error: T::zero(),
            tail: T::zero(),
        });
    }
    let bad = || Error::InvalidInput("singular extrapolation system".into());
    let full = fit(cuts, values, exponents).ok_or_else(bad)?;
    let reduced = fit(cuts, values, &exponents[..exponents.len() - 1]).ok_or_else(bad)?;
    Ok(Extrapolated {
        value: full,
        error: (full - reduced).abs(),
        tail: full - last,
    })
}
