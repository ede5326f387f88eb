use std::cmp::Ordering;

use rug::Float;

use super::Real;
use crate::error::{Error, Result};

fn sign(x: &Real) -> Ordering {
    x.cmp0().expect("function value is NaN")
}

fn no_sign_change(lo: &Real, hi: &Real, f_lo: &Real, f_hi: &Real) -> Error {
    Error::NoSignChange {
        lo: lo.to_string_radix(10, Some(20)),
        hi: hi.to_string_radix(10, Some(20)),
        f_lo: f_lo.to_string_radix(10, Some(20)),
        f_hi: f_hi.to_string_radix(10, Some(20)),
    }
}

/// Bisection for an increasing function with `f(lo) < 0 < f(hi)`.
///
/// Returns `[a, b]` inside `[lo, hi]` with `f(a) < 0 < f(b)` and
/// `b - a <= tol`. An exact zero at a midpoint is closed off by probing
/// `mid -+ tol/4`.
pub fn bisect_root<F>(mut f: F, lo: &Real, hi: &Real, tol: &Real) -> Result<(Real, Real)>
where
    F: FnMut(&Real) -> Real,
{
    let prec = lo.prec().max(hi.prec()).max(tol.prec());
    let mut a = Float::with_val(prec, lo);
    let mut b = Float::with_val(prec, hi);
    let f_a = f(&a);
    let f_b = f(&b);
    if sign(&f_a) != Ordering::Less || sign(&f_b) != Ordering::Greater {
        return Err(no_sign_change(&a, &b, &f_a, &f_b));
    }

    while Float::with_val(prec, &b - &a) > *tol {
        let mid = Float::with_val(prec, &a + &b) / 2u32;
        let f_mid = f(&mid);
        match sign(&f_mid) {
            Ordering::Less => a = mid,
            Ordering::Greater => b = mid,
            Ordering::Equal => {
                let quarter = Float::with_val(prec, tol / 4u32);
                let left = Float::with_val(prec, &mid - &quarter).max(&a);
                let right = Float::with_val(prec, &mid + &quarter).min(&b);
                let (f_left, f_right) = (f(&left), f(&right));
                if sign(&f_left) != Ordering::Less || sign(&f_right) != Ordering::Greater {
                    return Err(no_sign_change(&left, &right, &f_left, &f_right));
                }
                return Ok((left, right));
            }
        }
    }

    // Every update preserved f(a) < 0 < f(b); re-check the final pair.
    let (f_a, f_b) = (f(&a), f(&b));
    if sign(&f_a) != Ordering::Less || sign(&f_b) != Ordering::Greater {
        return Err(Error::Inconsistent(format!(
            "bisection bracket lost its sign condition: f(a) = {}, f(b) = {}",
            f_a.to_string_radix(10, Some(10)),
            f_b.to_string_radix(10, Some(10))
        )));
    }
    Ok((a, b))
}
