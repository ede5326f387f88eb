//! Row generators for the `tables` subcommand.

use cfdim::certify::{decimal_string, euler_tail};
use cfdim::determinant::{det_series, estimate_from_table};
use cfdim::disc::optimize_disc;
use cfdim::hardy::{approx_bounds_all, build_bound_ladder, build_norm_table, euler_bound};
use cfdim::mobius::DigitSet;
use cfdim::numerics::{format_significant, truncate_decimal, PrecisionContext, Real};
use cfdim::orbits::OrbitTable;
use cfdim::Result;
use rug::Integer;

/// A rendered table: header plus rows of decimal strings.
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(title: &str, header: &[&str]) -> Self {
        Table {
            title: title.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, index: usize, value: &Real, sig: usize) {
        self.rows
            .push(vec![index.to_string(), format_significant(value, sig)]);
    }
}

pub struct TableInputs<'a> {
    pub digits: &'a DigitSet,
    pub ctx: &'a PrecisionContext,
    pub period: usize,
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub rows: Option<(usize, usize)>,
    pub sig: usize,
}

/// `s⁻` derived from an estimate: truncate to `digits + 1` decimals and step
/// down one unit.
pub fn lower_endpoint(estimate: &Real, digits: u32) -> String {
    let units = truncate_decimal(estimate, digits + 1) - Integer::from(1);
    decimal_string(&units, digits + 1)
}

pub fn dimension_estimates(table: &OrbitTable, inputs: &TableInputs) -> Result<Table> {
    let (lo, hi) = inputs
        .rows
        .unwrap_or((inputs.period.saturating_sub(7).max(1), inputs.period));
    let mut out = Table::new("zeros s_n of the truncated determinants", &["n", "s_n"]);
    for n in lo..=hi.min(table.max_period()) {
        let s = estimate_from_table(table, n, inputs.ctx)?;
        out.push(n, &s, inputs.sig);
    }
    Ok(out)
}

pub fn determinant_coefficients(
    table: &OrbitTable,
    s: &Real,
    inputs: &TableInputs,
) -> Result<Table> {
    let (lo, hi) = inputs.rows.unwrap_or((0, inputs.period));
    let series = det_series(table, s, hi.min(table.max_period()).max(1))?;
    let mut out = Table::new(
        "Taylor coefficients delta_n(s) of det(I - z L_s)",
        &["n", "delta_n"],
    );
    for (n, d) in series.coeffs().iter().enumerate().skip(lo) {
        if n > hi {
            break;
        }
        out.push(n, d, inputs.sig);
    }
    Ok(out)
}

pub fn hardy_norms(s: &Real, inputs: &TableInputs) -> Result<Table> {
    let (lo, hi) = inputs.rows.unwrap_or((0, 10));
    let cd = optimize_disc(inputs.digits, inputs.ctx)?;
    let norms = build_norm_table(&cd, s, hi.max(inputs.n), inputs.ctx)?;
    let mut out = Table::new("Hardy norms ||L_s(m_k)||", &["k", "norm"]);
    for k in lo..=hi {
        out.push(k, &norms.norms()[k], inputs.sig);
    }
    Ok(out)
}

pub fn approximation_bounds(s: &Real, inputs: &TableInputs) -> Result<Table> {
    let (lo, hi) = inputs.rows.unwrap_or((1, 10));
    let cd = optimize_disc(inputs.digits, inputs.ctx)?;
    let norms = build_norm_table(&cd, s, inputs.n.max(hi), inputs.ctx)?;
    let (_, plus) = approx_bounds_all(&norms, hi.max(1))?;
    let mut out = Table::new(
        "upper computed approximation bounds alpha_{n,N,+}",
        &["n", "alpha_plus"],
    );
    for n in lo.max(1)..=hi {
        out.push(n, &plus[n - 1], inputs.sig);
    }
    Ok(out)
}

pub fn euler_bounds(s: &Real, inputs: &TableInputs) -> Result<Table> {
    let (lo, hi) = inputs.rows.unwrap_or((26, 32));
    let cd = optimize_disc(inputs.digits, inputs.ctx)?;
    let constants = cfdim::disc::operator_constants(&cd, s)?;
    let mut out = Table::new("Euler bounds K_s^n E_n(h)", &["n", "euler_bound"]);
    for n in lo.max(1)..=hi {
        out.push(n, &euler_bound(n, &constants.k_s, &cd.ratio)?, inputs.sig);
    }
    let tail = euler_tail(inputs.q, &constants.k_s, &cd.ratio)?;
    out.title = format!(
        "{}; tail beyond Q = {} is at most {}",
        out.title,
        inputs.q,
        format_significant(&tail, 20)
    );
    Ok(out)
}

pub fn taylor_bounds(s: &Real, inputs: &TableInputs) -> Result<Table> {
    let (lo, hi) = inputs.rows.unwrap_or((0, inputs.q));
    let cd = optimize_disc(inputs.digits, inputs.ctx)?;
    let norms = build_norm_table(&cd, s, inputs.n, inputs.ctx)?;
    let ladder = build_bound_ladder(&norms, inputs.q, inputs.m)?;
    let mut out = Table::new(
        "upper computed Taylor bounds beta_{n,N,+}^{M,+}",
        &["n", "beta_plus"],
    );
    for n in lo..=hi.min(inputs.q) {
        out.push(n, &ladder.beta_plus[n], inputs.sig);
    }
    Ok(out)
}
