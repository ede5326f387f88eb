//! Two-point sign test for the dimension.
//!
//! `𝔇(s) = det(I - L_s) = 1 + Σ_{n≥1} δ_n(s)` is increasing in `s` and
//! vanishes exactly at the dimension. The first `P` coefficients are
//! computed from periodic orbits; `|δ_n|` for `P < n ≤ Q` is bounded by the
//! Taylor bounds `β_+[n]`, and for `n > Q` by the Euler bounds `K_s^n E_n(h)`.
//! If `𝔇_P(s⁻) + tail < 0 < 𝔇_P(s⁺) - tail`, the dimension lies in
//! `(s⁻, s⁺)`.

use std::path::Path;

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::determinant::{det_series, estimate_from_table, eval_dn};
use crate::disc::{optimize_disc, ContractionData};
use crate::error::{Error, Result};
use crate::hardy::{build_bound_ladder, build_norm_table, euler_bound};
use crate::mobius::DigitSet;
use crate::numerics::{format_significant, truncate_decimal, PrecisionContext, Real};
use crate::orbits::{cached_orbit_table, OrbitTable};

pub const SCHEMA_VERSION: u32 = 1;

/// Widening steps tried after the first interval fails.
pub const MAX_WIDENINGS: u32 = 5;

/// Significant digits printed for bound values in certificates.
const BOUND_DIGITS: usize = 40;

/// Orbit period `P`, Taylor-bound cutoff `Q`, product length `M`, and norm
/// truncation `N`, with `P ≤ Q ≤ M ≤ N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: usize,
    pub q: usize,
    pub m: usize,
    pub n: usize,
}

impl Params {
    /// Sized for about 50 certified digits on `{1, 2}`.
    pub const DESK: Params = Params {
        p: 18,
        q: 24,
        m: 150,
        n: 200,
    };

    /// Sized for about 100 certified digits on `{1, 2}`.
    pub const FULL: Params = Params {
        p: 25,
        q: 28,
        m: 400,
        n: 600,
    };

    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.p && self.p <= self.q && self.q <= self.m && self.m <= self.n) {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= P <= Q <= M <= N, got P = {}, Q = {}, M = {}, N = {}",
                self.p, self.q, self.m, self.n
            )));
        }
        Ok(())
    }
}

/// `Σ_{n>Q} K^n E_n(h) ≤ K^{Q+1} E_{Q+1}(h) / (1 - r)`.
///
/// Consecutive terms have ratio `K h^{n+1} / (1 - h^{n+1})`, decreasing in
/// `n`, so every ratio past `Q + 1` is at most `r = K h^{Q+2} / (1 - h^{Q+2})`
/// and the tail is dominated by a geometric series.
pub fn euler_tail(q: usize, k: &Real, h: &Real) -> Result<Real> {
    let p = h.prec().max(k.prec());
    let h_pow = Float::with_val(p, h.clone().pow((q + 2) as u32));
    let ratio = Float::with_val(p, k * &h_pow) / Float::with_val(p, 1u32 - &h_pow);
    if ratio >= 1 {
        return Err(Error::EulerTailRatio {
            q,
            ratio: ratio.to_string_radix(10, Some(12)),
        });
    }
    let lead = euler_bound(q + 1, k, h)?;
    Ok(lead / (1u32 - ratio))
}

/// A real printed as a decimal string, with the number of significant
/// digits it carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalReal {
    pub value: String,
    pub digits: u32,
}

impl DecimalReal {
    pub fn new(x: &Real, digits: usize) -> Self {
        DecimalReal {
            value: format_significant(x, digits),
            digits: digits as u32,
        }
    }

    pub fn parse(&self, ctx: &PrecisionContext) -> Result<Real> {
        ctx.parse(&self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscReport {
    pub center: DecimalReal,
    pub radius: DecimalReal,
    pub image_radius: DecimalReal,
    pub ratio: DecimalReal,
}

/// Everything computed at one endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointReport {
    pub s: String,
    pub truncated_determinant: DecimalReal,
    pub k_s: DecimalReal,
    /// `Σ_{n=P+1}^{Q} β_+[n]`.
    pub tail_beta: DecimalReal,
    /// Bound on `Σ_{n>Q} K_s^n E_n(h)`.
    pub tail_euler: DecimalReal,
    /// Whether the sign condition holds at this endpoint.
    pub separated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub digit_set: DigitSet,
    pub target_digits: u32,
    pub working_digits: u32,
    pub params: Params,
    pub disc: DiscReport,
    /// The zero of `𝔇_P` the interval was placed around.
    pub estimate: String,
    pub s_minus: String,
    pub s_plus: String,
    /// `s_plus - s_minus`.
    pub width: String,
    /// Number of times the interval was doubled.
    pub widenings: u32,
    pub d_p_minus: DecimalReal,
    pub d_p_plus: DecimalReal,
    /// Larger of the two endpoint values.
    pub tail_beta: DecimalReal,
    /// Larger of the two endpoint values.
    pub tail_euler: DecimalReal,
    pub endpoints: Vec<EndpointReport>,
    pub verdict: bool,
    pub assumed_theorems: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Results taken on trust rather than checked numerically.
pub fn assumed_theorems() -> Vec<String> {
    vec![
        "For real s the map s -> det(I - L_s) is continuous and strictly increasing, and its unique zero \
         is the Hausdorff dimension of E_A (pressure monotonicity and Bowen's formula)."
            .to_string(),
        "L_s acting on the Hardy space of an admissible disc is trace class with approximation numbers \
         s_n; det(I - z L_s) = exp(-sum_n z^n tr(L_s^n)/n) is entire in z and its Taylor coefficients \
         satisfy |delta_n| <= sum_{i_1<...<i_n} s_{i_1}...s_{i_n}."
            .to_string(),
    ]
}

/// `units * 10^{-places}` as an exact decimal string.
pub fn decimal_string(units: &Integer, places: u32) -> String {
    let negative = *units < 0;
    let digits = units.clone().abs().to_string();
    let places = places as usize;
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

struct Endpoint {
    report: EndpointReport,
    tail_beta: Real,
    tail_euler: Real,
    value: Real,
}

/// `𝔇_P(s)` and both tail bounds at one point.
fn evaluate_endpoint(
    table: &OrbitTable,
    cd: &ContractionData,
    s_text: &str,
    params: &Params,
    lower: bool,
    ctx: &PrecisionContext,
) -> Result<Endpoint> {
    let s = ctx.parse(s_text)?;
    let series = det_series(table, &s, params.p)?;
    let value = eval_dn(&series, params.p)?;
    let norms = build_norm_table(cd, &s, params.n, ctx)?;
    let ladder = build_bound_ladder(&norms, params.q, params.m)?;
    let tail_beta = ladder.beta_tail(params.p + 1);
    let tail_euler = euler_tail(params.q, &ladder.k_s, &cd.ratio)?;
    let tail = Float::with_val(ctx.prec_bits(), &tail_beta + &tail_euler);
    let separated = if lower {
        Float::with_val(ctx.prec_bits(), &value + &tail) < 0
    } else {
        Float::with_val(ctx.prec_bits(), &value - &tail) > 0
    };
    let report = EndpointReport {
        s: s_text.to_string(),
        truncated_determinant: DecimalReal::new(&value, BOUND_DIGITS),
        k_s: DecimalReal::new(&ladder.k_s, BOUND_DIGITS),
        tail_beta: DecimalReal::new(&tail_beta, BOUND_DIGITS),
        tail_euler: DecimalReal::new(&tail_euler, BOUND_DIGITS),
        separated,
    };
    Ok(Endpoint {
        report,
        tail_beta,
        tail_euler,
        value,
    })
}

/// Certifies `dim E_A` to `ctx.target_digits()` decimal places.
pub fn certify_dimension(
    digits: &DigitSet,
    params: &Params,
    ctx: &PrecisionContext,
) -> Result<Certificate> {
    certify_dimension_cached(digits, params, ctx, None)
}

/// [`certify_dimension`] re-using an orbit table stored under `cache_dir`.
pub fn certify_dimension_cached(
    digits: &DigitSet,
    params: &Params,
    ctx: &PrecisionContext,
    cache_dir: Option<&Path>,
) -> Result<Certificate> {
    params.validate()?;
    let table = cached_orbit_table(digits, params.p, ctx, cache_dir)?;
    certify_with_table(&table, params, ctx)
}

/// Runs the certification on an existing orbit table of period `≥ P`.
///
/// The estimate `s_P` is truncated to `t + 1` decimals (`t` the target
/// digits), giving an integer `u` of units `10^{-(t+1)}`. The first interval
/// is `[u - 1, u + 1]` in those units; each failure doubles the width about
/// `u`, up to [`MAX_WIDENINGS`] times.
pub fn certify_with_table(
    table: &OrbitTable,
    params: &Params,
    ctx: &PrecisionContext,
) -> Result<Certificate> {
    params.validate()?;
    let digits = table.digit_set().clone();
    if table.max_period() < params.p {
        return Err(Error::InvalidArgument(format!(
            "orbit table has period {} < P = {}",
            table.max_period(),
            params.p
        )));
    }
    if table.working_digits() != ctx.working_digits() {
        return Err(Error::InvalidArgument(format!(
            "orbit table was built at {} working digits, context has {}",
            table.working_digits(),
            ctx.working_digits()
        )));
    }
    let cd = optimize_disc(&digits, ctx)?;
    let estimate = estimate_from_table(table, params.p, ctx)?;
    let places = ctx.target_digits() + 1;
    let units = truncate_decimal(&estimate, places);
    let bound_digits = BOUND_DIGITS;
    let disc = DiscReport {
        center: DecimalReal::new(&cd.disc.center, ctx.working_digits() as usize - 10),
        radius: DecimalReal::new(&cd.disc.radius, ctx.working_digits() as usize - 10),
        image_radius: DecimalReal::new(&cd.image_radius, ctx.working_digits() as usize - 10),
        ratio: DecimalReal::new(&cd.ratio, ctx.working_digits() as usize - 10),
    };

    let mut half_width = Integer::from(1);
    let mut last: Option<Certificate> = None;
    for widenings in 0..=MAX_WIDENINGS {
        let lo_units = Integer::from(&units - &half_width);
        let hi_units = Integer::from(&units + &half_width);
        let s_minus = decimal_string(&lo_units, places);
        let s_plus = decimal_string(&hi_units, places);
        let width = decimal_string(&Integer::from(&half_width * 2u32), places);

        let lower = evaluate_endpoint(table, &cd, &s_minus, params, true, ctx)?;
        let upper = evaluate_endpoint(table, &cd, &s_plus, params, false, ctx)?;
        let verdict = lower.report.separated && upper.report.separated;
        let tail_beta = if lower.tail_beta > upper.tail_beta {
            &lower.tail_beta
        } else {
            &upper.tail_beta
        };
        let tail_euler = if lower.tail_euler > upper.tail_euler {
            &lower.tail_euler
        } else {
            &upper.tail_euler
        };
        let certificate = Certificate {
            schema_version: SCHEMA_VERSION,
            digit_set: digits.clone(),
            target_digits: ctx.target_digits(),
            working_digits: ctx.working_digits(),
            params: *params,
            disc: disc.clone(),
            estimate: format_significant(&estimate, places as usize + 10),
            s_minus,
            s_plus,
            width,
            widenings,
            d_p_minus: DecimalReal::new(&lower.value, bound_digits),
            d_p_plus: DecimalReal::new(&upper.value, bound_digits),
            tail_beta: DecimalReal::new(tail_beta, bound_digits),
            tail_euler: DecimalReal::new(tail_euler, bound_digits),
            endpoints: vec![lower.report, upper.report],
            verdict,
            assumed_theorems: assumed_theorems(),
        };
        if verdict {
            return Ok(certificate);
        }
        last = Some(certificate);
        half_width *= 2u32;
    }
    let certificate = last.expect("at least one attempt");
    let tail = certificate
        .endpoints
        .iter()
        .map(|e| format!("{} + {}", e.tail_beta.value, e.tail_euler.value))
        .collect::<Vec<_>>()
        .join(" / ");
    Err(Error::Inconclusive {
        tail,
        certificate: Box::new(certificate),
    })
}
