//! Real-centred discs `D` on which every digit map is a strict contraction,
//! and the operator constants they determine.
//!
//! Each `T_i` preserves the real axis, so the image of a real-centred disc is
//! again real-centred, and the smallest disc concentric with `D` containing
//! all images is fixed by the real extreme points `T_i(c ± ρ)`.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::mobius::DigitSet;
use crate::numerics::{bisect_root, PrecisionContext, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Disc {
    pub center: Real,
    pub radius: Real,
}

impl Disc {
    pub fn new(center: Real, radius: Real) -> Result<Self> {
        if radius <= 0 || !center.is_finite() || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "disc needs a positive finite radius, got centre {center} radius {radius}"
            )));
        }
        Ok(Disc { center, radius })
    }

    /// Leftmost real point `c - ρ`.
    pub fn left(&self) -> Real {
        Float::with_val(self.center.prec(), &self.center - &self.radius)
    }

    /// Rightmost real point `c + ρ`.
    pub fn right(&self) -> Real {
        Float::with_val(self.center.prec(), &self.center + &self.radius)
    }

    /// `c + i - ρ > 0`: the pole `-i` of `T_i` lies strictly left of the
    /// closed disc and `Re(z + i) > 0` on it.
    pub fn clears_pole(&self, i: u32) -> bool {
        self.left() + i > 0
    }
}

/// The image `T_i(D)`.
///
/// `T_i(z) = 1/(z + i)` is an inversion composed with a translation. The
/// translated disc has real extreme points `u - ρ` and `u + ρ` with
/// `u = c + i`, and inversion sends a real-centred circle avoiding 0 to the
/// real-centred circle through `1/(u + ρ)` and `1/(u - ρ)`. Their midpoint
/// and half-distance are
///
/// ```text
/// centre = u / (u² - ρ²),   radius = ρ / (u² - ρ²).
/// ```
pub fn image_disc(i: u32, disc: &Disc) -> Result<Disc> {
    if !disc.clears_pole(i) {
        return Err(Error::Inadmissible(format!(
            "the pole -{i} of T_{i} is not left of the disc (c - ρ = {})",
            disc.left().to_string_radix(10, Some(12))
        )));
    }
    let p = disc.center.prec();
    let u = Float::with_val(p, &disc.center + i);
    let den = Float::with_val(p, u.square_ref()) - Float::with_val(p, disc.radius.square_ref());
    Ok(Disc {
        center: Float::with_val(p, &u / &den),
        radius: Float::with_val(p, &disc.radius / &den),
    })
}

/// The disc `D`, the radius `ρ'` of the smallest concentric disc containing
/// every `T_i(D)`, and the contraction ratio `h = ρ'/ρ`.
#[derive(Clone, Debug)]
pub struct ContractionData {
    pub digits: DigitSet,
    pub disc: Disc,
    pub image_radius: Real,
    pub ratio: Real,
    pub admissible: bool,
}

impl ContractionData {
    fn require_admissible(&self) -> Result<()> {
        if self.admissible {
            Ok(())
        } else {
            Err(Error::Inadmissible(format!(
                "contraction ratio {} for centre {} radius {}",
                self.ratio.to_string_radix(10, Some(12)),
                self.disc.center.to_string_radix(10, Some(12)),
                self.disc.radius.to_string_radix(10, Some(12))
            )))
        }
    }

    pub fn check_admissible(&self) -> Result<()> {
        self.require_admissible()
    }
}

/// `ρ' = max_i (|centre_i - c| + radius_i)` and `h = ρ'/ρ`.
///
/// A disc that reaches a pole is reported with `admissible = false` and
/// infinite `ρ'` and `h`, rather than as an error, so that callers scanning
/// candidate discs can skip it.
pub fn contraction_data(digits: &DigitSet, disc: &Disc) -> ContractionData {
    let p = disc.center.prec();
    let mut image_radius = Float::new(p);
    let mut clears = true;
    for &i in digits.digits() {
        match image_disc(i, disc) {
            Ok(image) => {
                let offset = Float::with_val(p, &image.center - &disc.center).abs() + &image.radius;
                if offset > image_radius {
                    image_radius = offset;
                }
            }
            Err(_) => clears = false,
        }
    }
    if !clears {
        let inf = Float::with_val(p, rug::float::Special::Infinity);
        return ContractionData {
            digits: digits.clone(),
            disc: disc.clone(),
            image_radius: inf.clone(),
            ratio: inf,
            admissible: false,
        };
    }
    let ratio = Float::with_val(p, &image_radius / &disc.radius);
    ContractionData {
        digits: digits.clone(),
        disc: disc.clone(),
        admissible: ratio < 1,
        image_radius,
        ratio,
    }
}

/// Radius equalising the outermost images about `c`, for extreme digits
/// `a < b`: `T_a(c - ρ) - c = c - T_b(c + ρ)`.
///
/// With `u = a + c - ρ`, `v = b + c + ρ` the condition is `1/u + 1/v = 2c`,
/// i.e. `uv = (a + b + 2c)/(2c)`, which is the quadratic
/// `ρ² + (b - a)ρ - q = 0` with `q = (a + c)(b + c) - (a + b + 2c)/(2c)`.
struct Equalizer {
    a: u32,
    b: u32,
}

/// `(ρ, dh/dc)` along the equalisation curve.
struct EqualizedPoint {
    radius: Real,
    slope: Real,
}

impl Equalizer {
    fn eval(&self, c: &Real) -> Option<EqualizedPoint> {
        let p = c.prec();
        if *c <= 0 {
            return None;
        }
        let (a, b) = (self.a, self.b);
        let spread = Float::with_val(p, b - a);
        let ac = Float::with_val(p, c + a);
        let bc = Float::with_val(p, c + b);
        let two_c = Float::with_val(p, c * 2u32);
        let q = Float::with_val(p, &ac * &bc) - (Float::with_val(p, &two_c + (a + b)) / &two_c);
        let root = Float::with_val(p, spread.square_ref()) + Float::with_val(p, &q * 4u32);
        if root <= 0 {
            return None;
        }
        let root = root.sqrt();
        let radius = Float::with_val(p, &root - &spread) / 2u32;
        if radius <= 0 {
            return None;
        }
        let u = Float::with_val(p, &ac - &radius);
        if u <= 0 {
            return None;
        }
        let image = Float::with_val(p, u.recip_ref()) - c;

        let c_sq = Float::with_val(p, c.square_ref());
        let dq = Float::with_val(p, &ac + &bc) + Float::with_val(p, a + b) / (c_sq * 2u32);
        let drho = Float::with_val(p, &dq / &root);
        let u_sq = Float::with_val(p, u.square_ref());
        let dimage = -(Float::with_val(p, 1u32 - &drho) / u_sq) - 1u32;
        let slope = (Float::with_val(p, &dimage * &radius) - Float::with_val(p, &image * &drho))
            / Float::with_val(p, radius.square_ref());
        Some(EqualizedPoint { radius, slope })
    }
}

/// Tuning for [`optimize_disc_with`].
#[derive(Clone, Debug)]
pub struct DiscSearch {
    /// Candidate centres scanned before local refinement.
    pub grid: usize,
    /// Golden-section stops once the bracket is narrower than `10^{-golden_digits}`.
    pub golden_digits: u32,
}

impl Default for DiscSearch {
    fn default() -> Self {
        DiscSearch {
            grid: 200,
            golden_digits: 30,
        }
    }
}

/// Admissible real-centred disc minimising `h` along the equalisation curve.
pub fn optimize_disc(digits: &DigitSet, ctx: &PrecisionContext) -> Result<ContractionData> {
    optimize_disc_with(digits, ctx, &DiscSearch::default())
}

/// [`optimize_disc`] with explicit search settings.
///
/// A grid scan over `c` in `(0, 1/min A]` locates the basin, golden-section
/// search narrows it, and bisection on the analytic derivative `dh/dc`
/// pins the centre to working precision (golden-section alone only resolves
/// the minimiser to about half the working digits, since `h` is flat there).
pub fn optimize_disc_with(
    digits: &DigitSet,
    ctx: &PrecisionContext,
    search: &DiscSearch,
) -> Result<ContractionData> {
    if digits.len() < 2 {
        return Err(Error::InvalidArgument(
            "disc optimisation needs at least two digits".into(),
        ));
    }
    let eq = Equalizer {
        a: digits.min(),
        b: digits.max(),
    };
    let p = ctx.prec_bits();
    let upper = ctx.ratio(1, i64::from(digits.min()));
    let grid = search.grid.max(3);
    let ratio_at = |c: &Real| -> Option<Real> {
        let point = eq.eval(c)?;
        let disc = Disc::new(c.clone(), point.radius).ok()?;
        let cd = contraction_data(digits, &disc);
        cd.admissible.then_some(cd.ratio)
    };

    let centres: Vec<Real> = (1..=grid)
        .map(|j| Float::with_val(p, &upper * j as u32) / grid as u32)
        .collect();
    let mut best: Option<(usize, Real)> = None;
    for (j, c) in centres.iter().enumerate() {
        if let Some(h) = ratio_at(c) {
            if best.as_ref().is_none_or(|(_, b)| h < *b) {
                best = Some((j, h));
            }
        }
    }
    let Some((j, _)) = best else {
        return Err(Error::Inadmissible(format!(
            "no centre in (0, {}] gives an admissible disc for A = {{{digits}}}",
            upper.to_f64()
        )));
    };

    let step = Float::with_val(p, &upper / grid as u32);
    let mut lo = Float::with_val(p, &centres[j] - &step);
    let mut hi = Float::with_val(p, &centres[j] + &step);
    if lo <= 0 {
        lo = Float::with_val(p, &step / 1024u32);
    }
    let large = ctx.int(2);
    let objective = |c: &Real| ratio_at(c).unwrap_or_else(|| large.clone());

    // Golden-section search.
    let inv_phi = (ctx.int(5).sqrt() - 1u32) / 2u32;
    let golden_tol = ctx.ten_pow_neg(search.golden_digits.min(ctx.working_digits() / 2));
    let mut x1 = Float::with_val(p, &hi - Float::with_val(p, &hi - &lo) * &inv_phi);
    let mut x2 = Float::with_val(p, &lo + Float::with_val(p, &hi - &lo) * &inv_phi);
    let mut f1 = objective(&x1);
    let mut f2 = objective(&x2);
    while Float::with_val(p, &hi - &lo) > golden_tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = Float::with_val(p, &hi - Float::with_val(p, &hi - &lo) * &inv_phi);
            f1 = objective(&x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = Float::with_val(p, &lo + Float::with_val(p, &hi - &lo) * &inv_phi);
            f2 = objective(&x2);
        }
    }
    let mut centre = Float::with_val(p, &lo + &hi) / 2u32;

    // Stationary point of h: dh/dc changes sign from negative to positive.
    let slope = |c: &Real| eq.eval(c).map(|pt| pt.slope);
    let widen = Float::with_val(p, &golden_tol * 4u32);
    let left = Float::with_val(p, &lo - &widen);
    let right = Float::with_val(p, &hi + &widen);
    if let (Some(sl), Some(sr)) = (slope(&left), slope(&right)) {
        if sl < 0 && sr > 0 {
            let tol = ctx.tolerance(10);
            let (a, b) = bisect_root(
                |c| slope(c).unwrap_or_else(|| Float::with_val(p, rug::float::Special::Nan)),
                &left,
                &right,
                &tol,
            )?;
            centre = (a + b) / 2u32;
        }
    }

    let point = eq.eval(&centre).ok_or_else(|| {
        Error::Inconsistent("optimised centre left the equalisation domain".into())
    })?;
    let cd = contraction_data(digits, &Disc::new(centre, point.radius)?);
    cd.require_admissible()?;
    Ok(cd)
}

/// Sup norms of the weights `(z + i)^{-2s}` on `D` and
/// `K_s = Σ_i ‖w_i‖ / (h √(1 - h²))`.
#[derive(Clone, Debug)]
pub struct OperatorConstants {
    pub weight_norms: Vec<Real>,
    pub weight_sum: Real,
    pub k_s: Real,
}

/// For `s > 0`, `|z + i|^{-2s}` is largest where `|z + i|` is smallest,
/// which on a real-centred disc is `z = c - ρ`; so
/// `‖w_i‖ = (i + c - ρ)^{-2s}`.
pub fn operator_constants(cd: &ContractionData, s: &Real) -> Result<OperatorConstants> {
    if *s <= 0 {
        return Err(Error::InvalidArgument(format!(
            "weight sup norms need s > 0, got {}",
            s.to_string_radix(10, Some(12))
        )));
    }
    cd.require_admissible()?;
    let p = cd.ratio.prec().max(s.prec());
    let left = cd.disc.left();
    let exponent = Float::with_val(p, s * -2i32);
    let weight_norms: Vec<Real> = cd
        .digits
        .digits()
        .iter()
        .map(|&i| Float::with_val(p, &left + i).pow(&exponent))
        .collect();
    let mut weight_sum = Float::new(p);
    for w in &weight_norms {
        weight_sum += w;
    }
    let h = &cd.ratio;
    let root = Float::with_val(p, 1u32 - Float::with_val(p, h.square_ref())).sqrt();
    let k_s = Float::with_val(p, &weight_sum / h) / root;
    Ok(OperatorConstants {
        weight_norms,
        weight_sum,
        k_s,
    })
}
