use rug::{Float, Integer};

use super::Real;

/// Splits `x` into sign, `digits` significant decimal digits (rounded to
/// nearest) and the exponent `e` with `|x| = 0.d1d2... * 10^e`.
fn decompose(x: &Real, digits: usize) -> (bool, String, i32) {
    let (neg, mantissa, exp) = x.to_sign_string_exp(10, Some(digits.max(1)));
    (neg, mantissa, exp.unwrap_or(0))
}

/// Scientific notation `d.ddd…e±X` with `sig` significant digits.
pub fn format_sci(x: &Real, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let (neg, mantissa, exp) = decompose(x, sig);
    let (head, tail) = mantissa.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{}", exp - 1)
    } else {
        format!("{sign}{head}.{tail}e{}", exp - 1)
    }
}

/// Fixed notation with exactly `places` digits after the point (rounded).
pub fn format_fixed(x: &Real, places: usize) -> String {
    if x.is_zero() {
        return format!("0.{}", "0".repeat(places));
    }
    let (_, _, exp) = decompose(x, 1);
    let sig = (places as i64 + i64::from(exp)).max(1) as usize;
    let (neg, mantissa, exp) = decompose(x, sig);
    let sign = if neg { "-" } else { "" };
    let exp = exp as i64;
    let (int_part, frac_part) = if exp <= 0 {
        let frac = format!("{}{}", "0".repeat((-exp) as usize), mantissa);
        ("0".to_string(), frac)
    } else if exp as usize >= mantissa.len() {
        (
            format!("{mantissa}{}", "0".repeat(exp as usize - mantissa.len())),
            String::new(),
        )
    } else {
        let (i, f) = mantissa.split_at(exp as usize);
        (i.to_string(), f.to_string())
    };
    let mut frac = frac_part;
    frac.truncate(places);
    while frac.len() < places {
        frac.push('0');
    }
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Fixed notation for moderate magnitudes, scientific otherwise; `sig`
/// significant digits either way.
pub fn format_significant(x: &Real, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let (_, _, exp) = decompose(x, sig);
    if (-4..=6).contains(&exp) {
        let places = (sig as i64 - i64::from(exp)).max(0) as usize;
        format_fixed(x, places)
    } else {
        format_sci(x, sig)
    }
}

/// `floor(x * 10^places)` as an exact integer.
pub fn truncate_decimal(x: &Real, places: u32) -> Integer {
    let scale = Integer::from(Integer::u_pow_u(10, places));
    let prec = x.prec() + (f64::from(places) * std::f64::consts::LOG2_10).ceil() as u32 + 16;
    let scaled = Float::with_val(prec, x * &scale);
    scaled
        .floor()
        .to_integer()
        .expect("finite value required for decimal truncation")
}
