//! Precision policy, periodic quadrature, bracketing root search, and the
//! small amount of complex and decimal plumbing the other modules share.
//!
//! Every real in the crate is an MPFR float ([`Real`]) whose precision is
//! fixed by a [`PrecisionContext`]. MPFR rounds correctly, so a fixed context
//! gives bit-identical results from run to run.

mod complex;
mod decimal;
mod quadrature;
mod root;

pub use complex::Complex;
pub use decimal::{format_fixed, format_sci, format_significant, truncate_decimal};
pub use quadrature::{integrate_periodic, integrate_periodic_batch, Quadrature, QuadratureOptions};
pub use root::bisect_root;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Arbitrary-precision real carrying the working precision of a context.
pub type Real = Float;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Requested certified digits and the decimal digits carried by every real.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    target_digits: u32,
    working_digits: u32,
}

impl PrecisionContext {
    /// Minimum working digits for a target: `ceil(1.5 t) + 50`.
    pub fn guard_policy(target_digits: u32) -> u32 {
        (3 * target_digits).div_ceil(2) + 50
    }

    /// Context with the minimum working precision the guard policy allows.
    pub fn new(target_digits: u32) -> Result<Self> {
        Self::with_working_digits(target_digits, Self::guard_policy(target_digits))
    }

    pub fn with_working_digits(target_digits: u32, working_digits: u32) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::InvalidArgument(
                "target digits must be positive".into(),
            ));
        }
        let minimum = Self::guard_policy(target_digits);
        if working_digits < minimum {
            return Err(Error::PrecisionPolicy {
                target: target_digits,
                working: working_digits,
                minimum,
            });
        }
        Ok(PrecisionContext {
            target_digits,
            working_digits,
        })
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    /// Binary precision used for every MPFR value in this context.
    pub fn prec_bits(&self) -> u32 {
        (f64::from(self.working_digits) * LOG2_10).ceil() as u32 + 8
    }

    pub fn zero(&self) -> Real {
        Float::new(self.prec_bits())
    }

    pub fn one(&self) -> Real {
        Float::with_val(self.prec_bits(), 1)
    }

    pub fn int(&self, v: i64) -> Real {
        Float::with_val(self.prec_bits(), v)
    }

    /// `num / den`, correctly rounded.
    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Float::with_val(self.prec_bits(), num) / Float::with_val(self.prec_bits(), den)
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.prec_bits(), Constant::Pi)
    }

    /// Parses a decimal literal at working precision.
    pub fn parse(&self, text: &str) -> Result<Real> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| Error::InvalidArgument(format!("cannot parse `{text}` as a real: {e}")))?;
        Ok(Float::with_val(self.prec_bits(), parsed))
    }

    /// `10^{-e}`.
    pub fn ten_pow_neg(&self, e: u32) -> Real {
        let ten = Float::with_val(self.prec_bits(), 10);
        ten.pow(-(e as i32))
    }

    /// `10^{-(working_digits - slack)}`, the comparison tolerance used across the crate.
    pub fn tolerance(&self, slack: u32) -> Real {
        self.ten_pow_neg(self.working_digits.saturating_sub(slack))
    }

    /// Default width for dimension brackets: `10^{-(target_digits + 10)}`.
    pub fn root_tolerance(&self) -> Real {
        self.ten_pow_neg(self.target_digits + 10)
    }

    /// Re-rounds `x` to this context's precision.
    pub fn adopt(&self, x: &Real) -> Real {
        Float::with_val(self.prec_bits(), x)
    }
}

/// Number of decimal places on which `a` and `b` agree, measured relative to
/// `|b|`; `u32::MAX` when they are equal.
pub fn agreeing_digits(a: &Real, b: &Real) -> u32 {
    let diff = Float::with_val(a.prec().max(b.prec()), a - b).abs();
    if diff.is_zero() {
        return u32::MAX;
    }
    if b.is_zero() {
        return 0;
    }
    let rel = diff / b.clone().abs();
    let digits = -rel.log10().to_f64();
    if digits <= 0.0 {
        0
    } else {
        digits.floor() as u32
    }
}
