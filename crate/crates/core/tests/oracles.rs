mod common;

use cfdim::determinant::det_series;
use cfdim::disc::optimize_disc;
use cfdim::mobius::DigitSet;
use cfdim::numerics::{agreeing_digits, PrecisionContext};
use cfdim::orbits::{build_orbit_table, trace_naive};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn set(text: &str) -> DigitSet {
    text.parse().unwrap()
}

#[test]
fn galerkin_determinant_matches_orbit_coefficients() {
    let ctx = PrecisionContext::new(60).unwrap();
    let digits = set("1,2");
    let cd = optimize_disc(&digits, &ctx).unwrap();
    let table = build_orbit_table(&digits, 10, &ctx).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..2 {
        let s = ctx
            .parse(&format!("{:.12}", rng.gen_range(0.4..0.7)))
            .unwrap();
        let series = det_series(&table, &s, 10).unwrap();
        let oracle = common::galerkin_deltas(&cd, &s, 100, 10, &ctx);
        for n in 1..=10 {
            let digits = agreeing_digits(&oracle[n - 1], series.delta(n).unwrap());
            assert!(
                digits >= 25,
                "s = {}, n = {n}: {digits} digits",
                s.to_string_radix(10, Some(14))
            );
        }
    }
}

#[test]
fn galerkin_oracle_on_three_digits() {
    let ctx = PrecisionContext::new(40).unwrap();
    let digits = set("1,2,3");
    let cd = optimize_disc(&digits, &ctx).unwrap();
    let table = build_orbit_table(&digits, 6, &ctx).unwrap();
    let s = ctx.parse("0.7").unwrap();
    let series = det_series(&table, &s, 6).unwrap();
    let oracle = common::galerkin_deltas(&cd, &s, 100, 6, &ctx);
    for n in 1..=6 {
        let digits = agreeing_digits(&oracle[n - 1], series.delta(n).unwrap());
        assert!(digits >= 15, "n = {n}: {digits} digits");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn lyndon_traces_match_naive_sum(s in 0.4f64..0.7) {
        let ctx = PrecisionContext::new(40).unwrap();
        let digits = set("1,2");
        let table = build_orbit_table(&digits, 12, &ctx).unwrap();
        let s = ctx.parse(&format!("{s:.15}")).unwrap();
        let traces = table.traces(&s, 12).unwrap();
        let tol = ctx.tolerance(5);
        for n in 1..=12 {
            let naive = trace_naive(&digits, n, &s, &ctx).unwrap();
            let diff = rug::Float::with_val(ctx.prec_bits(), &traces[n - 1] - &naive).abs();
            prop_assert!(diff <= rug::Float::with_val(ctx.prec_bits(), &tol * &naive), "n = {}", n);
        }
    }

    #[test]
    fn lyndon_traces_match_naive_sum_wide_set(s in 0.6f64..0.9) {
        let ctx = PrecisionContext::new(30).unwrap();
        let digits = set("1,3,4");
        let table = build_orbit_table(&digits, 6, &ctx).unwrap();
        let s = ctx.parse(&format!("{s:.15}")).unwrap();
        let traces = table.traces(&s, 6).unwrap();
        for n in 1..=6 {
            let naive = trace_naive(&digits, n, &s, &ctx).unwrap();
            prop_assert!(agreeing_digits(&traces[n - 1], &naive).saturating_add(5) >= ctx.working_digits(), "n = {}", n);
        }
    }
}
