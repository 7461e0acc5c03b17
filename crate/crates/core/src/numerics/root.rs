//! Bracketed root refinement: bisection down to a small bracket, then Newton
//! safeguarded by the bracket.

use super::{lit, Scalar};
use crate::{Error, Result};

const NEWTON_MAX_ITER: usize = 60;

/// Finds a root of `f` in `[lo, hi]` given a sign change.
///
/// `df` is the analytic derivative. Newton steps that leave the current
/// bracket fall back to bisection.
pub fn refine_root<T, F, D>(f: F, df: D, lo: T, hi: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
    D: Fn(T) -> T,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoSignChange {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }

    let half = lit::<T>(0.5);
    let coarse = lit::<T>(1e-3);
    while hi - lo > coarse {
        let mid = half * (lo + hi);
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }

    let rel = lit::<T>(1e-13);
    let mut x = half * (lo + hi);
    for _ in 0..NEWTON_MAX_ITER {
        let fx = f(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = df(x);
        let mut next = x - fx / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = half * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= rel * x.abs().max(T::one()) || hi - lo <= T::epsilon() * x.abs().max(T::one()) {
            // polish: Newton steps while the residual keeps shrinking
            let mut fx = f(x);
            for _ in 0..4 {
                if fx == T::zero() {
                    break;
                }
                let last = x - fx / df(x);
                let fl = f(last);
                if !last.is_finite() || !(fl.abs() < fx.abs()) {
                    break;
                }
                x = last;
                fx = fl;
            }
            break;
        }
    }
    Ok(x)
}
