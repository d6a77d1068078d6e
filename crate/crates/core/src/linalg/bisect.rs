//! Guarded scalar bisection on a boolean predicate.

use crate::error::Error;

/// Locate the switching point of `pred` on [lo, hi] to absolute width
/// `tol`. Requires `pred(lo) != pred(hi)`; returns the interval midpoint
/// once |hi − lo| ≤ tol. The returned value always lies strictly inside
/// the original bracket.
pub fn bisect<F: FnMut(f64) -> bool>(mut pred: F, lo: f64, hi: f64, tol: f64) -> Result<f64, Error> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bisection needs finite lo < hi and tol > 0, got [{lo}, {hi}], tol {tol}"
        )));
    }
    let plo = pred(lo);
    let phi = pred(hi);
    if plo == phi {
        return Err(Error::BracketError {
            lo,
            hi,
            detail: "predicate has the same value at both bracket ends".into(),
        });
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // representable-width floor
        }
        if pred(mid) == plo {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
