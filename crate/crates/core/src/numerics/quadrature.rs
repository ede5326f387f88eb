use rayon::prelude::*;
use rug::Float;

use super::{PrecisionContext, Real};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct QuadratureOptions {
    pub initial_nodes: usize,
    pub max_nodes: usize,
    /// Agreement threshold is `10^{-(working_digits - slack)}`.
    pub slack: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            initial_nodes: 64,
            max_nodes: 1 << 20,
            slack: 5,
        }
    }
}

/// A converged equal-weight rule value and the node count it used.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: Real,
    pub nodes: usize,
}

/// Integrates a smooth 1-periodic function over `[0, 1)` with the
/// equal-weight rule `(1/M) sum_{j<M} f(j/M)`, doubling `M` until two
/// successive rules agree.
pub fn integrate_periodic<F>(name: &str, f: F, ctx: &PrecisionContext) -> Result<Quadrature>
where
    F: Fn(&Real) -> Real + Sync,
{
    let mut out =
        integrate_periodic_batch(name, 1, |t| vec![f(t)], ctx, &QuadratureOptions::default())?;
    Ok(out.pop().expect("batch of one"))
}

/// Integrates `count` integrands sharing one node set. `f(t)` returns all
/// integrand values at `t`. Doubling continues until every component has
/// converged, so all results share the final node count.
///
/// Agreement is measured against the mean absolute integrand value on the
/// finer rule, which makes the criterion invariant under rescaling of `f`.
pub fn integrate_periodic_batch<F>(
    name: &str,
    count: usize,
    f: F,
    ctx: &PrecisionContext,
    opts: &QuadratureOptions,
) -> Result<Vec<Quadrature>>
where
    F: Fn(&Real) -> Vec<Real> + Sync,
{
    let prec = ctx.prec_bits();
    let tol = ctx.tolerance(opts.slack);
    let node = |j: usize, m: usize| Float::with_val(prec, j) / Float::with_val(prec, m);
    let eval = |indices: Vec<usize>, m: usize| -> Vec<Vec<Real>> {
        indices
            .into_par_iter()
            .map(|j| {
                let values = f(&node(j, m));
                assert_eq!(
                    values.len(),
                    count,
                    "integrand `{name}` returned wrong arity"
                );
                values
            })
            .collect()
    };

    let mut m = opts.initial_nodes.max(1);
    let mut sums = vec![Float::new(prec); count];
    let mut abs_sums = vec![Float::new(prec); count];
    accumulate(&mut sums, &mut abs_sums, eval((0..m).collect(), m));

    loop {
        let fine = 2 * m;
        if fine > opts.max_nodes {
            let last = sums
                .iter()
                .map(|s| Float::with_val(prec, s / m).to_f64())
                .fold(0.0f64, |acc, v| acc.max(v.abs()));
            return Err(Error::QuadratureDiverged {
                integrand: name.to_string(),
                nodes: m,
                last_change: format!("{last:e}"),
            });
        }
        let coarse: Vec<Real> = sums.iter().map(|s| Float::with_val(prec, s / m)).collect();
        accumulate(
            &mut sums,
            &mut abs_sums,
            eval((1..fine).step_by(2).collect(), fine),
        );
        m = fine;

        let mut converged = true;
        let mut values = Vec::with_capacity(count);
        for ((sum, abs_sum), old) in sums.iter().zip(&abs_sums).zip(&coarse) {
            let value = Float::with_val(prec, sum / m);
            let scale = Float::with_val(prec, abs_sum / m);
            let change = Float::with_val(prec, &value - old).abs();
            if change > Float::with_val(prec, &tol * &scale) {
                converged = false;
            }
            values.push(value);
        }
        if converged {
            return Ok(values
                .into_iter()
                .map(|value| Quadrature { value, nodes: m })
                .collect());
        }
    }
}

// Summation runs in node-index order regardless of how values were produced.
fn accumulate(sums: &mut [Real], abs_sums: &mut [Real], values: Vec<Vec<Real>>) {
    for row in values {
        for ((s, a), v) in sums.iter_mut().zip(abs_sums.iter_mut()).zip(row) {
            *a += &*v.as_abs();
            *s += v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30).unwrap()
    }

    fn two_pi_t(t: &Real) -> Real {
        let p = t.prec();
        Float::with_val(p, rug::float::Constant::Pi) * t * 2u32
    }

    #[test]
    fn constant_integrates_to_one() {
        let ctx = ctx();
        let q = integrate_periodic("one", |t| Float::with_val(t.prec(), 1), &ctx).unwrap();
        assert_eq!(q.value, 1);
        assert_eq!(q.nodes, 128);
    }

    #[test]
    fn sine_squared_integrates_to_half() {
        let ctx = ctx();
        let q = integrate_periodic("sin^2", |t| two_pi_t(t).sin().square(), &ctx).unwrap();
        let err = (q.value - 0.5f64).abs();
        assert!(err < ctx.tolerance(5));
    }

    #[test]
    fn exp_cos_matches_bessel_series() {
        let ctx = ctx();
        let q = integrate_periodic("exp(cos)", |t| two_pi_t(t).cos().exp(), &ctx).unwrap();
        // I0(1) = sum_m (1/4)^m / (m!)^2
        let p = ctx.prec_bits();
        let mut term = Float::with_val(p, 1);
        let mut series = Float::with_val(p, 1);
        for m in 1..200u32 {
            term /= 4u32;
            term /= m * m;
            series += &term;
        }
        let err = (q.value - series).abs();
        assert!(err < ctx.tolerance(5), "error {err}");
    }

    #[test]
    fn trigonometric_polynomials_below_node_count_vanish() {
        let ctx = ctx();
        for k in [1u32, 5, 31, 63] {
            let q = integrate_periodic("cos", |t| (two_pi_t(t) * k).cos(), &ctx).unwrap();
            assert!(
                q.value.clone().abs() < ctx.tolerance(5),
                "k = {k}: {}",
                q.value
            );
        }
    }

    #[test]
    fn reports_non_convergence() {
        let ctx = ctx();
        let opts = QuadratureOptions {
            max_nodes: 256,
            ..QuadratureOptions::default()
        };
        // Nearly singular: pole at distance 1e-3 from the real t axis.
        let f = |t: &Real| {
            let c = two_pi_t(t).cos();
            Float::with_val(t.prec(), 1) / (Float::with_val(t.prec(), 1.001) - c)
        };
        let err =
            integrate_periodic_batch("near-pole", 1, |t| vec![f(t)], &ctx, &opts).unwrap_err();
        assert!(err.to_string().contains("near-pole"));
    }

    #[test]
    fn batch_components_share_nodes() {
        let ctx = ctx();
        let out = integrate_periodic_batch(
            "pair",
            2,
            |t| vec![Float::with_val(t.prec(), 2), two_pi_t(t).sin().square()],
            &ctx,
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_eq!(out[0].value, 2);
        assert_eq!(out[0].nodes, out[1].nodes);
    }
}
