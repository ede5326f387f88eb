use cfdim::determinant::det_series;
use cfdim::disc::optimize_disc;
use cfdim::hardy::{build_bound_ladder, build_norm_table, build_norm_table_with, euler_bound};
use cfdim::mobius::DigitSet;
use cfdim::numerics::{PrecisionContext, QuadratureOptions};
use cfdim::orbits::build_orbit_table;
use proptest::prelude::*;
use rug::Float;

fn e2() -> DigitSet {
    "1,2".parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn coefficients_respect_every_bound(s in 0.4f64..0.7) {
        let ctx = PrecisionContext::new(40).unwrap();
        let p = ctx.prec_bits();
        let cd = optimize_disc(&e2(), &ctx).unwrap();
        let s = ctx.parse(&format!("{s:.15}")).unwrap();
        let table = build_orbit_table(&e2(), 12, &ctx).unwrap();
        let series = det_series(&table, &s, 12).unwrap();
        let norms = build_norm_table(&cd, &s, 120, &ctx).unwrap();
        let ladder = build_bound_ladder(&norms, 16, 80).unwrap();
        for n in 1..=12 {
            let delta = series.delta(n).unwrap().clone().abs();
            prop_assert!(ladder.beta_plus[n].is_finite());
            prop_assert!(delta <= ladder.beta_plus[n], "beta_plus, n = {}", n);
            prop_assert!(delta <= euler_bound(n, &ladder.k_s, &cd.ratio).unwrap(), "Euler, n = {}", n);
        }
        let mut geometric = ladder.j.clone();
        for n in 1..=ladder.q {
            geometric *= &cd.ratio;
            prop_assert!(ladder.alpha_minus[n - 1] <= ladder.alpha_plus[n - 1]);
            prop_assert!(ladder.alpha_plus[n - 1] <= Float::with_val(p, &geometric));
        }
    }
}

#[test]
fn beta_bounds_nest_in_product_length() {
    let ctx = PrecisionContext::new(40).unwrap();
    let cd = optimize_disc(&e2(), &ctx).unwrap();
    let s = ctx.parse("0.5312805").unwrap();
    let norms = build_norm_table(&cd, &s, 200, &ctx).unwrap();
    let ladders: Vec<_> = [50, 100, 150]
        .iter()
        .map(|&m| build_bound_ladder(&norms, 28, m).unwrap())
        .collect();
    for n in 0..=28 {
        // More factors: β_- grows, β_+ shrinks, and the two stay ordered.
        assert!(ladders[0].beta_minus[n] <= ladders[1].beta_minus[n]);
        assert!(ladders[1].beta_minus[n] <= ladders[2].beta_minus[n]);
        assert!(ladders[2].beta_minus[n] <= ladders[2].beta_plus[n]);
        assert!(
            ladders[2].beta_plus[n] <= ladders[1].beta_plus[n],
            "n = {n}"
        );
        assert!(
            ladders[1].beta_plus[n] <= ladders[0].beta_plus[n],
            "n = {n}"
        );
    }
}

#[test]
fn norms_are_stable_under_node_doubling() {
    let ctx = PrecisionContext::new(40).unwrap();
    let cd = optimize_disc(&e2(), &ctx).unwrap();
    let s = ctx.parse("0.55").unwrap();
    let base = build_norm_table(&cd, &s, 60, &ctx).unwrap();
    let opts = QuadratureOptions {
        initial_nodes: base.nodes * 2,
        ..QuadratureOptions::default()
    };
    let doubled = build_norm_table_with(&cd, &s, 60, &ctx, &opts).unwrap();
    assert!(doubled.nodes > base.nodes);
    let tol = ctx.tolerance(10);
    for (a, b) in base.norms().iter().zip(doubled.norms()) {
        let rel = Float::with_val(ctx.prec_bits(), a - b).abs() / b;
        assert!(rel <= tol, "{}", rel.to_string_radix(10, Some(5)));
    }
}

#[test]
fn beta_tail_decreases_with_period() {
    let ctx = PrecisionContext::new(30).unwrap();
    let cd = optimize_disc(&e2(), &ctx).unwrap();
    let s = ctx.parse("0.5312805").unwrap();
    let norms = build_norm_table(&cd, &s, 100, &ctx).unwrap();
    let ladder = build_bound_ladder(&norms, 24, 60).unwrap();
    for p in 1..24 {
        assert!(ladder.beta_tail(p + 1) < ladder.beta_tail(p), "P = {p}");
        assert!(ladder.beta_tail(p + 1) > 0);
    }
}
