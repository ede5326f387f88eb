use rug::Float;

use super::Real;

/// Minimal complex number over MPFR reals.
///
/// Only the handful of operations the Hardy-space integrands need are
/// provided. Powers use the principal branch of the logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn from_real(re: Real) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &Real) -> Self {
        let (sin, cos) = theta.clone().sin_cos(Float::new(theta.prec()));
        Complex::new(cos, sin)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, other: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re + &other.re),
            Float::with_val(p, &self.im + &other.im),
        )
    }

    pub fn sub(&self, other: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re - &other.re),
            Float::with_val(p, &self.im - &other.im),
        )
    }

    pub fn add_real(&self, x: &Real) -> Complex {
        Complex::new(Float::with_val(self.prec(), &self.re + x), self.im.clone())
    }

    pub fn mul(&self, other: &Complex) -> Complex {
        let p = self.prec();
        let re =
            Float::with_val(p, &self.re * &other.re) - Float::with_val(p, &self.im * &other.im);
        let im =
            Float::with_val(p, &self.re * &other.im) + Float::with_val(p, &self.im * &other.re);
        Complex::new(re, im)
    }

    /// `self += a * b`.
    pub fn add_mul(&mut self, a: &Complex, b: &Complex) {
        let p = self.prec();
        self.re += Float::with_val(p, &a.re * &b.re);
        self.re -= Float::with_val(p, &a.im * &b.im);
        self.im += Float::with_val(p, &a.re * &b.im);
        self.im += Float::with_val(p, &a.im * &b.re);
    }

    pub fn scale(&self, x: &Real) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re * x),
            Float::with_val(p, &self.im * x),
        )
    }

    pub fn norm_sqr(&self) -> Real {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn recip(&self) -> Complex {
        let n = self.norm_sqr();
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re / &n),
            -Float::with_val(p, &self.im / &n),
        )
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Real {
        self.im.clone().atan2(&self.re)
    }

    /// Principal-branch power `self^e` for real `e`; `self` must be nonzero.
    pub fn powf(&self, e: &Real) -> Complex {
        let p = self.prec();
        let log_abs = self.norm_sqr().ln() / 2u32;
        let modulus = Float::with_val(p, &log_abs * e).exp();
        let phase = Float::with_val(p, &self.arg() * e);
        Complex::cis(&phase).scale(&modulus)
    }

    pub fn powi(&self, mut k: u32) -> Complex {
        let mut base = self.clone();
        let mut acc = Complex::from_real(Float::with_val(self.prec(), 1));
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}
