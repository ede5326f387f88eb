//! Taylor coefficients of `det(I - z L_s)` and the truncated determinant
//! `𝔇_N(s) = 1 + Σ_{n=1}^{N} δ_n(s)` whose zero estimates the dimension.

use rug::Float;

use crate::error::{Error, Result};
use crate::mobius::DigitSet;
use crate::numerics::{bisect_root, PrecisionContext, Real};
use crate::orbits::{build_orbit_table, OrbitTable};

/// `δ_0..δ_P` of `det(I - z L_s) = 1 + Σ δ_n z^n` at a fixed `s`.
#[derive(Clone, Debug)]
pub struct DetSeries {
    pub s: Real,
    coeffs: Vec<Real>,
}

impl DetSeries {
    /// `δ_0 = 1, δ_1, …, δ_P`.
    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    /// Highest available index `P`.
    pub fn max_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn delta(&self, n: usize) -> Option<&Real> {
        self.coeffs.get(n)
    }
}

/// Coefficients of `Δ(z) = exp(-Σ_{n≥1} t_n z^n / n)` from `t_1..t_P`.
///
/// Differentiating `ln Δ = -Σ t_n z^n / n` gives `Δ'(z) = -Δ(z) Σ t_k z^{k-1}`.
/// Comparing coefficients of `z^{n-1}` on both sides:
///
/// ```text
/// n δ_n = -Σ_{k=1}^{n} t_k δ_{n-k},   δ_0 = 1.
/// ```
pub fn det_coeffs(s: &Real, traces: &[Real]) -> Result<DetSeries> {
    if traces.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one trace is required".into(),
        ));
    }
    let p = traces.iter().map(Float::prec).max().unwrap_or(s.prec());
    let mut coeffs: Vec<Real> = Vec::with_capacity(traces.len() + 1);
    coeffs.push(Float::with_val(p, 1));
    for n in 1..=traces.len() {
        let mut acc = Float::new(p);
        for k in 1..=n {
            acc += Float::with_val(p, &traces[k - 1] * &coeffs[n - k]);
        }
        coeffs.push(-acc / n as u32);
    }
    Ok(DetSeries {
        s: s.clone(),
        coeffs,
    })
}

/// Inverse of [`det_coeffs`]: `t_n = -n δ_n - Σ_{k=1}^{n-1} t_k δ_{n-k}`.
pub fn traces_from_coeffs(series: &DetSeries) -> Vec<Real> {
    let delta = &series.coeffs;
    let p = delta[0].prec();
    let mut traces: Vec<Real> = Vec::with_capacity(delta.len() - 1);
    for n in 1..delta.len() {
        let mut t = Float::with_val(p, &delta[n] * n as u32);
        for k in 1..n {
            t += Float::with_val(p, &traces[k - 1] * &delta[n - k]);
        }
        traces.push(-t);
    }
    traces
}

/// `𝔇_N(s) = 1 + Σ_{n=1}^{N} δ_n(s)`.
pub fn eval_dn(series: &DetSeries, n: usize) -> Result<Real> {
    if n > series.max_index() {
        return Err(Error::InvalidArgument(format!(
            "truncation {n} exceeds the {} available coefficients",
            series.max_index()
        )));
    }
    let p = series.coeffs[0].prec();
    let mut total = Float::new(p);
    for d in &series.coeffs[..=n] {
        total += d;
    }
    Ok(total)
}

/// Determinant series at `s` straight from an orbit table.
pub fn det_series(table: &OrbitTable, s: &Real, n: usize) -> Result<DetSeries> {
    det_coeffs(s, &table.traces(s, n)?)
}

/// `𝔇_N(s)` from an orbit table.
pub fn truncated_determinant(table: &OrbitTable, s: &Real, n: usize) -> Result<Real> {
    eval_dn(&det_series(table, s, n)?, n)
}

/// Initial bracket for the zero of `𝔇_N`.
pub const INITIAL_BRACKET: (f64, f64) = (0.01, 0.99);

/// Brackets the zero of `s ↦ 𝔇_N(s)` in `(0, 1)` to width
/// `ctx.root_tolerance()`, re-using `table`.
///
/// Starts from [`INITIAL_BRACKET`]; if the sign condition fails there, each
/// failing endpoint is moved halfway towards `1/2`, up to a fixed number of
/// times.
pub fn dimension_bracket(
    table: &OrbitTable,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<(Real, Real)> {
    if n == 0 || n > table.max_period() {
        return Err(Error::InvalidArgument(format!(
            "truncation {n} must lie in 1..={}",
            table.max_period()
        )));
    }
    let f = |s: &Real| truncated_determinant(table, s, n).expect("index checked above");
    let half = ctx.ratio(1, 2);
    let mut lo = ctx.parse(&INITIAL_BRACKET.0.to_string())?;
    let mut hi = ctx.parse(&INITIAL_BRACKET.1.to_string())?;
    for _ in 0..6 {
        let (f_lo, f_hi) = (f(&lo), f(&hi));
        let lo_ok = f_lo < 0;
        let hi_ok = f_hi > 0;
        if lo_ok && hi_ok {
            break;
        }
        if !lo_ok {
            lo = (lo + &half) / 2u32;
        }
        if !hi_ok {
            hi = (hi + &half) / 2u32;
        }
    }
    bisect_root(f, &lo, &hi, &ctx.root_tolerance())
}

/// Midpoint of [`dimension_bracket`].
pub fn estimate_from_table(table: &OrbitTable, n: usize, ctx: &PrecisionContext) -> Result<Real> {
    let (a, b) = dimension_bracket(table, n, ctx)?;
    Ok((a + b) / 2u32)
}

/// The zero `s_N` of `𝔇_N`, enumerating orbits of period `<= N` first.
pub fn estimate_dimension(digits: &DigitSet, n: usize, ctx: &PrecisionContext) -> Result<Real> {
    if digits.len() < 2 {
        return Err(Error::InvalidArgument(
            "a dimension estimate needs at least two digits".into(),
        ));
    }
    let table = build_orbit_table(digits, n, ctx)?;
    estimate_from_table(&table, n, ctx)
}
