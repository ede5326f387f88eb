//! Independent oracles shared by the integration and acceptance tests.

#![allow(dead_code)]

use cfdim::disc::ContractionData;
use cfdim::numerics::{Complex, PrecisionContext, Real};
use rug::Float;

/// Galerkin matrix of `L_s` in the monomial basis `((z - c)/ρ)^k`,
/// `k < size`: column `k` holds the Taylor coefficients of `L_s m_k` about
/// `c`, read off from `samples` equally spaced points on the boundary circle.
pub fn galerkin_matrix(
    cd: &ContractionData,
    s: &Real,
    size: usize,
    samples: usize,
    ctx: &PrecisionContext,
) -> Vec<Vec<Real>> {
    let p = ctx.prec_bits();
    let c = &cd.disc.center;
    let rho = &cd.disc.radius;
    let exponent = Float::with_val(p, s * -2i32);
    let two_pi = Float::with_val(p, ctx.pi() * 2u32);
    let mut acc = vec![vec![Complex::zero(p); size]; size];
    for l in 0..samples {
        let theta = Float::with_val(p, &two_pi * l as u32) / samples as u32;
        let w = Complex::cis(&theta);
        let z = w.scale(rho).add_real(c);
        // f_k(z) = Σ_i (z+i)^{-2s} ((1/(z+i) - c)/ρ)^k
        let mut values = vec![Complex::zero(p); size];
        for &i in cd.digits.digits() {
            let u = z.add_real(&Float::with_val(p, i));
            let weight = u.powf(&exponent);
            let v = u
                .recip()
                .add_real(&Float::with_val(p, -c))
                .scale(&Float::with_val(p, rho.recip_ref()));
            let mut term = weight;
            for value in values.iter_mut() {
                *value = value.add(&term);
                term = term.mul(&v);
            }
        }
        // Multiply by e^{-ijθ} for each row j.
        let back = w.conj();
        let mut phase = Complex::from_real(ctx.one());
        for row in acc.iter_mut() {
            for (entry, value) in row.iter_mut().zip(&values) {
                entry.add_mul(&phase, value);
            }
            phase = phase.mul(&back);
        }
    }
    acc.into_iter()
        .map(|row| row.into_iter().map(|e| e.re / samples as u32).collect())
        .collect()
}

/// Coefficients `c_0 = 1, c_1, ..., c_K` of `det(I - zG) = Σ c_n z^n`, via
/// Hessenberg reduction by stabilised elementary similarities and the
/// Hessenberg characteristic-polynomial recurrence.
pub fn det_poly(mut a: Vec<Vec<Real>>) -> Vec<Real> {
    let n = a.len();
    let p = a[0][0].prec();
    for m in 1..n.saturating_sub(1) {
        let pivot = (m..n)
            .max_by(|&x, &y| {
                a[x][m - 1]
                    .clone()
                    .abs()
                    .partial_cmp(&a[y][m - 1].clone().abs())
                    .unwrap()
            })
            .unwrap();
        if a[pivot][m - 1].is_zero() {
            continue;
        }
        if pivot != m {
            a.swap(pivot, m);
            for row in a.iter_mut() {
                row.swap(pivot, m);
            }
        }
        for i in m + 1..n {
            let y = Float::with_val(p, &a[i][m - 1] / &a[m][m - 1]);
            if y.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(i);
            for (x, pivot) in bottom[0][m - 1..].iter_mut().zip(&top[m][m - 1..]) {
                *x -= Float::with_val(p, &y * pivot);
            }
            for row in a.iter_mut() {
                let t = Float::with_val(p, &y * &row[i]);
                row[m] += t;
            }
        }
    }
    // polys[m] = det(λI - H[..m, ..m]) as coefficients of λ^0..λ^m.
    let mut polys: Vec<Vec<Real>> = vec![vec![Float::with_val(p, 1)]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![Float::new(p); m + 2];
        for (d, coeff) in prev.iter().enumerate() {
            next[d + 1] += coeff;
            next[d] -= Float::with_val(p, &a[m][m] * coeff);
        }
        let mut sub = Float::with_val(p, 1);
        for i in (0..m).rev() {
            sub *= &a[i + 1][i];
            let factor = Float::with_val(p, &a[i][m] * &sub);
            for (d, coeff) in polys[i].iter().enumerate() {
                next[d] -= Float::with_val(p, &factor * coeff);
            }
        }
        polys.push(next);
    }
    let chi = polys.pop().unwrap();
    // det(I - zG) = z^n χ(1/z): reverse the coefficients.
    chi.into_iter().rev().collect()
}

/// `δ_1..δ_upto` from a Galerkin truncation of the given size.
pub fn galerkin_deltas(
    cd: &ContractionData,
    s: &Real,
    size: usize,
    upto: usize,
    ctx: &PrecisionContext,
) -> Vec<Real> {
    let g = galerkin_matrix(cd, s, size, 2 * size + 64, ctx);
    det_poly(g).into_iter().skip(1).take(upto).collect()
}
