//! Digit maps `T_i(x) = 1/(i + x)` and their compositions as exact integer
//! Möbius matrices.
//!
//! A word `(i_1, …, i_n)` stands for `T_{i_1} ∘ … ∘ T_{i_n}`, represented by
//! the product of the digit matrices `[[0, 1], [1, i]]` taken left to right.
//! Entries are exact, so the fixed point of a composition is the root of an
//! exact quadratic and the only rounding happens in one square root.

use std::fmt;
use std::str::FromStr;

use rug::{Complete, Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{PrecisionContext, Real};

/// The finite digit set `A`, strictly increasing and nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct DigitSet(Vec<u32>);

impl DigitSet {
    pub fn new(digits: Vec<u32>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InvalidArgument("digit set is empty".into()));
        }
        if digits[0] == 0 {
            return Err(Error::InvalidArgument("digits must be positive".into()));
        }
        if digits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "digits must be strictly increasing, got {digits:?}"
            )));
        }
        Ok(DigitSet(digits))
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> u32 {
        self.0[0]
    }

    pub fn max(&self) -> u32 {
        *self.0.last().expect("nonempty")
    }

    pub fn contains(&self, digit: u32) -> bool {
        self.0.binary_search(&digit).is_ok()
    }
}

impl TryFrom<Vec<u32>> for DigitSet {
    type Error = Error;

    fn try_from(digits: Vec<u32>) -> Result<Self> {
        DigitSet::new(digits)
    }
}

impl From<DigitSet> for Vec<u32> {
    fn from(set: DigitSet) -> Self {
        set.0
    }
}

impl FromStr for DigitSet {
    type Err = Error;

    /// Parses a comma-separated list such as `1,2,3`.
    fn from_str(text: &str) -> Result<Self> {
        let mut digits = text
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidArgument(format!("bad digit `{part}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        digits.sort_unstable();
        digits.dedup();
        DigitSet::new(digits)
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A nonempty word over a digit set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>, digits: &DigitSet) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("word must be nonempty".into()));
        }
        if let Some(bad) = letters.iter().find(|&&l| !digits.contains(l)) {
            return Err(Error::InvalidArgument(format!(
                "letter {bad} is not in the digit set {{{digits}}}"
            )));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl AsRef<[u32]> for Word {
    fn as_ref(&self) -> &[u32] {
        &self.0
    }
}

/// `z ↦ (a z + b) / (c z + d)` with exact integer entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MobiusMatrix {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    pub d: Integer,
}

impl MobiusMatrix {
    pub fn identity() -> Self {
        MobiusMatrix {
            a: Integer::from(1),
            b: Integer::new(),
            c: Integer::new(),
            d: Integer::from(1),
        }
    }

    pub fn from_entries(a: i64, b: i64, c: i64, d: i64) -> Self {
        MobiusMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn mul(&self, rhs: &MobiusMatrix) -> MobiusMatrix {
        MobiusMatrix {
            a: (&self.a * &rhs.a).complete() + (&self.b * &rhs.c).complete(),
            b: (&self.a * &rhs.b).complete() + (&self.b * &rhs.d).complete(),
            c: (&self.c * &rhs.a).complete() + (&self.d * &rhs.c).complete(),
            d: (&self.c * &rhs.b).complete() + (&self.d * &rhs.d).complete(),
        }
    }

    /// Right multiplication by the digit matrix `[[0, 1], [1, i]]`.
    pub fn mul_digit(&self, i: u32) -> MobiusMatrix {
        MobiusMatrix {
            a: self.b.clone(),
            b: (&self.b * i).complete() + &self.a,
            c: self.d.clone(),
            d: (&self.d * i).complete() + &self.c,
        }
    }

    pub fn det(&self) -> Integer {
        (&self.a * &self.d).complete() - (&self.b * &self.c).complete()
    }

    pub fn trace(&self) -> Integer {
        (&self.a + &self.d).complete()
    }

    /// `(d - a)^2 + 4bc = tr^2 - 4 det`, the discriminant of the fixed-point quadratic.
    pub fn discriminant(&self) -> Integer {
        let diff = (&self.d - &self.a).complete();
        diff.square() + (&self.b * &self.c).complete() * 4u32
    }

    /// Evaluates the map at a real point.
    pub fn apply(&self, z: &Real) -> Real {
        let p = z.prec();
        let num = Float::with_val(p, z * &self.a) + &self.b;
        let den = Float::with_val(p, z * &self.c) + &self.d;
        num / den
    }
}

/// Matrix of `T_i`, i.e. `(0, 1, 1, i)`.
pub fn digit_matrix(i: u32) -> Result<MobiusMatrix> {
    if i < 1 {
        return Err(Error::InvalidArgument(format!(
            "digit must be at least 1, got {i}"
        )));
    }
    Ok(MobiusMatrix::from_entries(0, 1, 1, i64::from(i)))
}

/// Product of the digit matrices of `letters`, left to right.
pub fn word_matrix(letters: &[u32]) -> MobiusMatrix {
    assert!(!letters.is_empty(), "word_matrix needs a nonempty word");
    letters
        .iter()
        .fold(MobiusMatrix::identity(), |m, &i| m.mul_digit(i))
}

/// The unique fixed point in `(0, 1)` of `T_w`:
/// `z = ((a - d) + sqrt((d - a)^2 + 4bc)) / (2c)`.
pub fn fixed_point(letters: &[u32], ctx: &PrecisionContext) -> Real {
    let m = word_matrix(letters);
    let p = ctx.prec_bits();
    let root = Float::with_val(p, &m.discriminant()).sqrt();
    let num = root + (&m.a - &m.d).complete();
    num / Float::with_val(p, &m.c) / 2u32
}

/// `Λ_w = |T_w'(z_w)| = 1 / (c z_w + d)^2`, evaluated through the fixed point.
pub fn orbit_multiplier(letters: &[u32], ctx: &PrecisionContext) -> Real {
    let m = word_matrix(letters);
    let z = fixed_point(letters, ctx);
    let denom = Float::with_val(ctx.prec_bits(), &z * &m.c) + &m.d;
    denom.square().recip()
}

/// `ln Λ` straight from the matrix.
///
/// `c z + d` equals the dominant eigenvalue `(tr + sqrt(tr^2 - 4 det)) / 2`,
/// so `ln Λ = -2 ln((tr + sqrt(disc)) / 2)` with no cancellation.
pub fn log_multiplier(m: &MobiusMatrix, ctx: &PrecisionContext) -> Real {
    let p = ctx.prec_bits();
    let eig = (Float::with_val(p, &m.discriminant()).sqrt() + m.trace()) / 2u32;
    eig.ln() * -2i32
}
