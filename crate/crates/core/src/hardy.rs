//! Hardy-space norms `‖L_s(m_k)‖` of the transfer operator on the
//! normalised monomials `m_k(z) = ((z - c)/ρ)^k`, and the ladder of
//! computable bounds built from them.
//!
//! Approximation numbers and eigenvalues of `L_s` are never computed; only
//! the upper bounds `α_n` on approximation numbers enter, through the
//! Taylor-coefficient bounds `β_n ≥ |δ_n(s)|`.

use rug::ops::Pow;
use rug::Float;

use crate::disc::{operator_constants, ContractionData, OperatorConstants};
use crate::error::{Error, Result};
use crate::numerics::{
    integrate_periodic_batch, Complex, PrecisionContext, QuadratureOptions, Real,
};

/// `‖L_s(m_k)‖` for `k = 0..=N` on one disc.
#[derive(Clone, Debug)]
pub struct NormTable {
    pub s: Real,
    pub contraction: ContractionData,
    pub constants: OperatorConstants,
    norms: Vec<Real>,
    /// Quadrature nodes used by the final rule.
    pub nodes: usize,
}

impl NormTable {
    pub fn norms(&self) -> &[Real] {
        &self.norms
    }

    /// The truncation `N`.
    pub fn n(&self) -> usize {
        self.norms.len() - 1
    }
}

/// Per-node data for the integrand: for each digit `i`,
/// `w_i = (γ + i)^{-2s}` and `u_i = (T_i(γ) - c)/ρ` at `γ = c + ρ e^{2πit}`.
fn node_factors(t: &Real, s: &Real, cd: &ContractionData) -> Vec<(Complex, Complex)> {
    let p = t.prec();
    let c = &cd.disc.center;
    let rho = &cd.disc.radius;
    let angle = Float::with_val(p, rug::float::Constant::Pi) * t * 2u32;
    let gamma = Complex::cis(&angle).scale(rho).add_real(c);
    let exponent = Float::with_val(p, s * -2i32);
    let neg_c = Float::with_val(p, -c);
    let inv_rho = Float::with_val(p, rho.recip_ref());
    cd.digits
        .digits()
        .iter()
        .map(|&i| {
            let shifted = gamma.add_real(&Float::with_val(p, i));
            let weight = shifted.powf(&exponent);
            let image = shifted.recip().add_real(&neg_c).scale(&inv_rho);
            (weight, image)
        })
        .collect()
}

/// `|Σ_i w_i u_i^k|²` for `k = 0..=n` at one node.
fn integrand_row(t: &Real, s: &Real, cd: &ContractionData, n: usize) -> Vec<Real> {
    let p = t.prec();
    let mut terms: Vec<(Complex, Complex)> = node_factors(t, s, cd);
    let mut row = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut total = Complex::zero(p);
        for (term, image) in terms.iter_mut() {
            if k > 0 {
                *term = term.mul(image);
            }
            total = total.add(term);
        }
        row.push(total.norm_sqr());
    }
    row
}

fn check_inputs(cd: &ContractionData, s: &Real) -> Result<()> {
    cd.check_admissible()?;
    if *s <= 0 {
        return Err(Error::InvalidArgument(format!(
            "Hardy norms need s > 0, got {}",
            s.to_string_radix(10, Some(12))
        )));
    }
    Ok(())
}

/// `‖L_s(m_k)‖`, the root of the boundary integral
/// `∫_0^1 |Σ_i (T_i(γ) - c)^k / (ρ^k (γ + i)^{2s})|² dt`.
pub fn hardy_norm(
    k: usize,
    s: &Real,
    cd: &ContractionData,
    ctx: &PrecisionContext,
) -> Result<Real> {
    hardy_norm_with(k, s, cd, ctx, &QuadratureOptions::default())
}

pub fn hardy_norm_with(
    k: usize,
    s: &Real,
    cd: &ContractionData,
    ctx: &PrecisionContext,
    opts: &QuadratureOptions,
) -> Result<Real> {
    check_inputs(cd, s)?;
    let s = ctx.adopt(s);
    let name = format!("|L_s m_{k}|^2");
    let mut out = integrate_periodic_batch(
        &name,
        1,
        |t| {
            let p = t.prec();
            let mut total = Complex::zero(p);
            for (weight, image) in node_factors(t, &s, cd) {
                total = total.add(&weight.mul(&image.powi(k as u32)));
            }
            vec![total.norm_sqr()]
        },
        ctx,
        opts,
    )?;
    Ok(out.pop().expect("one component").value.sqrt())
}

/// All norms `k = 0..=n` from one shared quadrature, checked against the
/// envelope `‖L_s(m_k)‖ ≤ h^k Σ_i ‖w_i‖`.
pub fn build_norm_table(
    cd: &ContractionData,
    s: &Real,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<NormTable> {
    build_norm_table_with(cd, s, n, ctx, &QuadratureOptions::default())
}

pub fn build_norm_table_with(
    cd: &ContractionData,
    s: &Real,
    n: usize,
    ctx: &PrecisionContext,
    opts: &QuadratureOptions,
) -> Result<NormTable> {
    check_inputs(cd, s)?;
    let s = ctx.adopt(s);
    let constants = operator_constants(cd, &s)?;
    let integrals = integrate_periodic_batch(
        "|L_s m_k|^2",
        n + 1,
        |t| integrand_row(t, &s, cd, n),
        ctx,
        opts,
    )?;
    let nodes = integrals.first().map_or(0, |q| q.nodes);
    let norms: Vec<Real> = integrals.into_iter().map(|q| q.value.sqrt()).collect();

    let p = ctx.prec_bits();
    let slack = ctx.tolerance(10);
    let mut envelope = constants.weight_sum.clone();
    for (k, norm) in norms.iter().enumerate() {
        if *norm <= 0 {
            return Err(Error::Inconsistent(format!(
                "Hardy norm of m_{k} is not positive"
            )));
        }
        if *norm > Float::with_val(p, &envelope + &slack) {
            return Err(Error::Inconsistent(format!(
                "Hardy norm of m_{k} = {} exceeds the contraction envelope {}",
                norm.to_string_radix(10, Some(20)),
                envelope.to_string_radix(10, Some(20))
            )));
        }
        envelope *= &cd.ratio;
    }
    Ok(NormTable {
        s,
        contraction: cd.clone(),
        constants,
        norms,
        nodes,
    })
}

/// `(α_{n,N,-}, α_{n,N,+})`:
/// `α_-² = Σ_{k=n-1}^{N} ‖L_s(m_k)‖²` and
/// `α_+² = α_-² + (Σ_i ‖w_i‖)² h^{2(N+1)} / (1 - h²)`.
pub fn approx_bounds(table: &NormTable, n: usize) -> Result<(Real, Real)> {
    let big_n = table.n();
    if n == 0 || n > big_n {
        return Err(Error::InvalidArgument(format!(
            "approximation index {n} outside 1..={big_n}"
        )));
    }
    let p = table.s.prec();
    let mut sum = Float::new(p);
    for norm in &table.norms[n - 1..] {
        sum += Float::with_val(p, norm.square_ref());
    }
    let tail = tail_correction(table);
    let plus = Float::with_val(p, &sum + &tail).sqrt();
    Ok((sum.sqrt(), plus))
}

/// `(Σ_i ‖w_i‖)² h^{2(N+1)} / (1 - h²)`.
fn tail_correction(table: &NormTable) -> Real {
    let p = table.s.prec();
    let h = &table.contraction.ratio;
    let h_sq = Float::with_val(p, h.square_ref());
    let w_sq = Float::with_val(p, table.constants.weight_sum.square_ref());
    let power = Float::with_val(p, h_sq.clone().pow((table.n() + 1) as u32));
    w_sq * power / (1u32 - h_sq)
}

/// `α_{n,N,±}` for every `n = 1..=upto` in one backward pass.
pub fn approx_bounds_all(table: &NormTable, upto: usize) -> Result<(Vec<Real>, Vec<Real>)> {
    let big_n = table.n();
    if upto == 0 || upto > big_n {
        return Err(Error::InvalidArgument(format!(
            "approximation index {upto} outside 1..={big_n}"
        )));
    }
    let p = table.s.prec();
    let tail = tail_correction(table);
    // suffix[k] = Σ_{j≥k} ‖L m_j‖², summed from the small end first.
    let mut suffix = vec![Float::new(p); big_n + 2];
    for k in (0..=big_n).rev() {
        suffix[k] = Float::with_val(
            p,
            &suffix[k + 1] + Float::with_val(p, table.norms[k].square_ref()),
        );
    }
    let minus: Vec<Real> = (1..=upto)
        .map(|n| Float::with_val(p, suffix[n - 1].sqrt_ref()))
        .collect();
    let plus: Vec<Real> = (1..=upto)
        .map(|n| Float::with_val(p, &suffix[n - 1] + &tail).sqrt())
        .collect();
    Ok((minus, plus))
}

/// `E_n(h) = h^{n(n+1)/2} / ∏_{i=1}^{n} (1 - h^i)`, the sum of
/// `h^{i_1 + … + i_n}` over `1 ≤ i_1 < … < i_n`.
pub fn euler_e(n: usize, h: &Real) -> Result<Real> {
    if !(*h > 0 && *h < 1) {
        return Err(Error::InvalidArgument(format!(
            "Euler bounds need 0 < h < 1, got {}",
            h.to_string_radix(10, Some(12))
        )));
    }
    let p = h.prec();
    let mut value = Float::with_val(p, 1);
    let mut power = Float::with_val(p, 1);
    for _ in 1..=n {
        power *= h;
        value *= &power;
        value /= Float::with_val(p, 1u32 - &power);
    }
    Ok(value)
}

/// `K^n E_n(h)`, bounding `|δ_n(s)|` when `K = K_s`.
pub fn euler_bound(n: usize, k: &Real, h: &Real) -> Result<Real> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Euler bound index must be at least 1".into(),
        ));
    }
    let p = h.prec().max(k.prec());
    Ok(Float::with_val(p, k.clone().pow(n as u32)) * euler_e(n, h)?)
}

/// Every bound derived from one norm table.
#[derive(Clone, Debug)]
pub struct BoundLadder {
    pub s: Real,
    pub n: usize,
    pub m: usize,
    pub q: usize,
    pub ratio: Real,
    /// `α_{n,N,-}` for `n = 1..=M` (index `n - 1`).
    pub alpha_minus: Vec<Real>,
    /// `α_{n,N,+}` for `n = 1..=M` (index `n - 1`).
    pub alpha_plus: Vec<Real>,
    pub k_s: Real,
    /// `J = K_s (1 + h^{2(N+2-Q)})^{1/2}`.
    pub j: Real,
    /// Coefficients of `∏_{i≤M} (1 + α_{i,N,+} z)` for `n = 0..=Q`.
    pub beta_minus: Vec<Real>,
    /// Upper computed Taylor bounds for `n = 0..=Q`.
    pub beta_plus: Vec<Real>,
}

/// Builds the ladder for `Q ≤ M ≤ N` and checks its invariants.
///
/// `β_+[n] = β_-[n] + Σ_{l<n} J^{n-l} β_-[l] h^{M(n-l)} E_{n-l}(h)` adds a
/// bound for products that use at least one index beyond `M`, where only
/// the geometric bound `α_i ≤ J h^i` is available.
pub fn build_bound_ladder(table: &NormTable, q: usize, m: usize) -> Result<BoundLadder> {
    let big_n = table.n();
    if !(1 <= q && q <= m && m <= big_n) {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= Q <= M <= N, got Q = {q}, M = {m}, N = {big_n}"
        )));
    }
    let p = table.s.prec();
    let h = &table.contraction.ratio;
    let k_s = table.constants.k_s.clone();
    let (alpha_minus, alpha_plus) = approx_bounds_all(table, m)?;

    let h_sq = Float::with_val(p, h.square_ref());
    let j = Float::with_val(p, 1u32 + h_sq.pow((big_n + 2 - q) as u32)).sqrt() * &k_s;

    // Truncated product ∏ (1 + α_i z), degree ≤ Q.
    let mut beta_minus = vec![Float::new(p); q + 1];
    beta_minus[0] = Float::with_val(p, 1);
    for (i, alpha) in alpha_plus.iter().enumerate() {
        let top = (i + 1).min(q);
        for d in (1..=top).rev() {
            let add = Float::with_val(p, &beta_minus[d - 1] * alpha);
            beta_minus[d] += add;
        }
    }

    let h_m = h.clone().pow(m as u32);
    let mut corrections = Vec::with_capacity(q + 1);
    corrections.push(Float::new(p));
    for gap in 1..=q {
        // J^gap h^{M gap} E_gap(h)
        let factor = Float::with_val(p, &j * &h_m).pow(gap as u32) * euler_e(gap, h)?;
        corrections.push(factor);
    }
    let mut beta_plus = Vec::with_capacity(q + 1);
    for n in 0..=q {
        let mut value = beta_minus[n].clone();
        for l in 0..n {
            value += Float::with_val(p, &beta_minus[l] * &corrections[n - l]);
        }
        beta_plus.push(value);
    }

    let ladder = BoundLadder {
        s: table.s.clone(),
        n: big_n,
        m,
        q,
        ratio: h.clone(),
        alpha_minus,
        alpha_plus,
        k_s,
        j,
        beta_minus,
        beta_plus,
    };
    ladder.check_invariants()?;
    Ok(ladder)
}

impl BoundLadder {
    /// Asserts the orderings every ladder must satisfy.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |what: String| Err(Error::Inconsistent(what));
        let p = self.s.prec();
        for (idx, (lo, hi)) in self.alpha_minus.iter().zip(&self.alpha_plus).enumerate() {
            if lo > hi {
                return fail(format!("alpha_minus > alpha_plus at n = {}", idx + 1));
            }
        }
        for (idx, pair) in self.alpha_plus.windows(2).enumerate() {
            if pair[1] > pair[0] {
                return fail(format!("alpha_plus increases at n = {}", idx + 2));
            }
        }
        let mut geometric = Float::with_val(p, &self.j);
        for n in 1..=self.q {
            geometric *= &self.ratio;
            if self.alpha_plus[n - 1] > geometric {
                return fail(format!("alpha_plus exceeds J h^n at n = {n}"));
            }
        }
        if self.beta_minus[0] != 1 || self.beta_plus[0] != 1 {
            return fail("beta_0 differs from 1".into());
        }
        for (n, (lo, hi)) in self.beta_minus.iter().zip(&self.beta_plus).enumerate() {
            if lo > hi {
                return fail(format!("beta_minus > beta_plus at n = {n}"));
            }
        }
        Ok(())
    }

    /// `Σ_{n=from}^{Q} β_+[n]`.
    pub fn beta_tail(&self, from: usize) -> Real {
        let p = self.s.prec();
        let mut total = Float::new(p);
        for b in self.beta_plus.iter().skip(from) {
            total += b;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::{contraction_data, Disc};
    use crate::mobius::DigitSet;

    fn setup() -> (PrecisionContext, ContractionData) {
        let ctx = PrecisionContext::new(20).unwrap();
        let digits = DigitSet::new(vec![1, 2]).unwrap();
        let disc = Disc::new(ctx.parse("0.75").unwrap(), ctx.parse("0.95").unwrap()).unwrap();
        (ctx, contraction_data(&digits, &disc))
    }

    #[test]
    fn euler_e_closed_forms() {
        let ctx = PrecisionContext::new(20).unwrap();
        let half = ctx.ratio(1, 2);
        assert_eq!(euler_e(1, &half).unwrap(), 1);
        assert_eq!(euler_bound(1, &ctx.one(), &half).unwrap(), 1);
        // E_2(1/2) = (1/8) / ((1/2)(3/4)) = 1/3
        let e2 = euler_e(2, &half).unwrap();
        assert!(Float::with_val(ctx.prec_bits(), &e2 - ctx.ratio(1, 3)).abs() < ctx.tolerance(5));
        assert!(euler_e(3, &ctx.one()).is_err());
        assert!(euler_e(3, &ctx.zero()).is_err());
    }

    #[test]
    fn zero_truncation_table() {
        let (ctx, cd) = setup();
        let s = ctx.ratio(1, 2);
        let table = build_norm_table(&cd, &s, 0, &ctx).unwrap();
        assert_eq!(table.norms().len(), 1);
        let direct = hardy_norm(0, &s, &cd, &ctx).unwrap();
        assert!(
            Float::with_val(ctx.prec_bits(), &table.norms()[0] - &direct).abs() < ctx.tolerance(8)
        );
    }

    #[test]
    fn batch_and_single_norms_agree() {
        let (ctx, cd) = setup();
        let s = ctx.parse("0.53").unwrap();
        let table = build_norm_table(&cd, &s, 12, &ctx).unwrap();
        for k in [0usize, 3, 12] {
            let single = hardy_norm(k, &s, &cd, &ctx).unwrap();
            let rel = Float::with_val(ctx.prec_bits(), &table.norms()[k] - &single).abs() / &single;
            assert!(rel < ctx.tolerance(8), "k = {k}");
        }
    }

    #[test]
    fn ladder_rejects_bad_orderings() {
        let (ctx, cd) = setup();
        let table = build_norm_table(&cd, &ctx.ratio(1, 2), 10, &ctx).unwrap();
        assert!(build_bound_ladder(&table, 6, 5).is_err());
        assert!(build_bound_ladder(&table, 4, 11).is_err());
        assert!(build_bound_ladder(&table, 0, 5).is_err());
        let ladder = build_bound_ladder(&table, 4, 8).unwrap();
        assert_eq!(ladder.beta_plus.len(), 5);
        assert_eq!(ladder.alpha_plus.len(), 8);
    }

    #[test]
    fn beta_minus_matches_subset_sums() {
        let (ctx, cd) = setup();
        let table = build_norm_table(&cd, &ctx.ratio(1, 2), 10, &ctx).unwrap();
        let ladder = build_bound_ladder(&table, 3, 6).unwrap();
        let a = &ladder.alpha_plus;
        let p = ctx.prec_bits();
        let mut e2 = Float::new(p);
        let mut e3 = Float::new(p);
        for i in 0..6 {
            for j in i + 1..6 {
                e2 += Float::with_val(p, &a[i] * &a[j]);
                for k in j + 1..6 {
                    e3 += Float::with_val(p, &a[i] * &a[j]) * &a[k];
                }
            }
        }
        assert!(Float::with_val(p, &ladder.beta_minus[2] - &e2).abs() < ctx.tolerance(8));
        assert!(Float::with_val(p, &ladder.beta_minus[3] - &e3).abs() < ctx.tolerance(8));
    }

    #[test]
    fn rejects_nonpositive_s() {
        let (ctx, cd) = setup();
        assert!(hardy_norm(0, &ctx.zero(), &cd, &ctx).is_err());
    }
}
