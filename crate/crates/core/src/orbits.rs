//! Primitive periodic orbits of the digit system, enumerated once up to a
//! maximum period and reused for trace evaluation at any `s`.
//!
//! Each primitive period-`d` orbit is represented by its Lyndon word (the
//! strictly smallest rotation). Every word in `A^n` is a rotation of some
//! Lyndon word `w` repeated `n/|w|` times, and all `|w|` rotations contribute
//! the same term, so
//!
//! ```text
//! tr(L_s^n) = sum_{d | n} sum_{|w| = d} d * Λ_w^{s n/d} / (1 - (-1)^n Λ_w^{n/d}).
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rayon::prelude::*;
use rug::integer::Order;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::mobius::{log_multiplier, orbit_multiplier, DigitSet, MobiusMatrix};
use crate::numerics::{PrecisionContext, Real};

/// Default cap on the number of orbit records a table may hold.
pub const DEFAULT_RECORD_LIMIT: u128 = 100_000_000;

const CHUNK: usize = 4096;

/// Generates Lyndon words of length `<= max_len` in lexicographic order
/// (Duval's algorithm) as index sequences into the alphabet.
#[derive(Clone, Debug)]
struct Duval {
    alphabet: usize,
    max_len: usize,
    word: Vec<usize>,
    started: bool,
}

impl Duval {
    fn new(alphabet: usize, max_len: usize) -> Self {
        Duval {
            alphabet,
            max_len,
            word: Vec::with_capacity(max_len),
            started: false,
        }
    }

    /// Moves to the next word. Returns the length of the prefix left
    /// untouched by the step, or `None` once the words are exhausted.
    fn advance(&mut self) -> Option<usize> {
        if !self.started {
            self.started = true;
            if self.alphabet == 0 || self.max_len == 0 {
                return None;
            }
            self.word.push(0);
            return Some(0);
        }
        if self.word.is_empty() {
            return None;
        }
        let m = self.word.len();
        while self.word.len() < self.max_len {
            let next = self.word[self.word.len() - m];
            self.word.push(next);
        }
        while self.word.last() == Some(&(self.alphabet - 1)) {
            self.word.pop();
        }
        let last = self.word.last_mut()?;
        *last += 1;
        Some(m.min(self.word.len() - 1))
    }
}

/// Iterator over all Lyndon words over a digit set with length `<= max_len`.
pub struct LyndonWords<'a> {
    digits: &'a [u32],
    inner: Duval,
}

impl Iterator for LyndonWords<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        self.inner.advance()?;
        Some(self.inner.word.iter().map(|&i| self.digits[i]).collect())
    }
}

pub fn lyndon_words(digits: &DigitSet, max_len: usize) -> LyndonWords<'_> {
    LyndonWords {
        digits: digits.digits(),
        inner: Duval::new(digits.len(), max_len),
    }
}

fn mobius_mu(mut n: usize) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of Lyndon words of length `d` over `k` letters,
/// `(1/d) sum_{e | d} mu(d/e) k^e`, saturating at `u128::MAX`.
pub fn lyndon_count(k: usize, d: usize) -> u128 {
    assert!(d >= 1);
    let mut total: i128 = 0;
    for e in (1..=d).filter(|e| d.is_multiple_of(*e)) {
        let Some(power) = (k as i128).checked_pow(e as u32) else {
            return u128::MAX;
        };
        total += i128::from(mobius_mu(d / e)) * power;
    }
    (total / d as i128) as u128
}

/// All primitive orbits of one period.
#[derive(Clone, Debug)]
struct PeriodGroup {
    period: usize,
    letters: Vec<u32>,
    log_multipliers: Vec<Real>,
}

impl PeriodGroup {
    fn len(&self) -> usize {
        self.log_multipliers.len()
    }
}

/// A view of one primitive orbit.
#[derive(Clone, Copy, Debug)]
pub struct OrbitRecord<'a> {
    pub word: &'a [u32],
    pub period: usize,
    /// `ln Λ_w < 0`.
    pub log_multiplier: &'a Real,
}

/// Every primitive orbit of period `<= max_period`, grouped by period.
#[derive(Debug)]
pub struct OrbitTable {
    digit_set: DigitSet,
    max_period: usize,
    working_digits: u32,
    prec: u32,
    groups: Vec<PeriodGroup>,
    /// `d / (1 - (-1)^{kd} Λ^k)` for `k = 1..=max_period/d`, per record.
    weights: OnceLock<Vec<Vec<Real>>>,
}

impl OrbitTable {
    pub fn digit_set(&self) -> &DigitSet {
        &self.digit_set
    }

    pub fn max_period(&self) -> usize {
        self.max_period
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn prec_bits(&self) -> u32 {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(PeriodGroup::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of records of period `d`.
    pub fn count(&self, d: usize) -> usize {
        self.groups
            .get(d.wrapping_sub(1))
            .map_or(0, PeriodGroup::len)
    }

    pub fn records_of_period(&self, d: usize) -> impl Iterator<Item = OrbitRecord<'_>> {
        self.groups
            .get(d.wrapping_sub(1))
            .into_iter()
            .flat_map(|g| {
                g.letters
                    .chunks_exact(g.period)
                    .zip(&g.log_multipliers)
                    .map(move |(word, log_multiplier)| OrbitRecord {
                        word,
                        period: g.period,
                        log_multiplier,
                    })
            })
    }

    pub fn records(&self) -> impl Iterator<Item = OrbitRecord<'_>> {
        (1..=self.max_period).flat_map(move |d| self.records_of_period(d))
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_period {
            return Err(Error::InvalidArgument(format!(
                "trace index {n} outside 1..={}",
                self.max_period
            )));
        }
        Ok(())
    }

    /// `tr(L_s^n)` evaluated term by term from the stored logarithms.
    pub fn trace(&self, n: usize, s: &Real) -> Result<Real> {
        self.check_n(n)?;
        let p = self.prec;
        let mut total = Float::new(p);
        for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
            let reps = (n / d) as u32;
            let sign_flip = n % 2 == 1;
            for record in self.records_of_period(d) {
                let scaled = Float::with_val(p, record.log_multiplier * reps);
                let numer = Float::with_val(p, &scaled * s).exp();
                let lam = scaled.exp();
                let denom = if sign_flip { lam + 1u32 } else { 1u32 - lam };
                total += numer * d as u32 / denom;
            }
        }
        Ok(total)
    }

    fn weights(&self) -> &[Vec<Real>] {
        self.weights.get_or_init(|| {
            let p = self.prec;
            self.groups
                .iter()
                .map(|g| {
                    let d = g.period;
                    let kmax = self.max_period / d;
                    g.log_multipliers
                        .par_iter()
                        .with_min_len(CHUNK)
                        .map(|log_lam| {
                            let lam = Float::with_val(p, log_lam).exp();
                            let mut power = Float::with_val(p, 1);
                            let mut row = Vec::with_capacity(kmax);
                            for k in 1..=kmax {
                                power *= &lam;
                                let denom = if (k * d) % 2 == 1 {
                                    Float::with_val(p, &power + 1u32)
                                } else {
                                    Float::with_val(p, 1u32 - &power)
                                };
                                row.push(Float::with_val(p, d as u32) / denom);
                            }
                            row
                        })
                        .flatten_iter()
                        .collect()
                })
                .collect()
        })
    }

    /// `tr(L_s^n)` for `n = 1..=upto` in one pass: one exponential per record.
    pub fn traces(&self, s: &Real, upto: usize) -> Result<Vec<Real>> {
        self.check_n(upto)?;
        let p = self.prec;
        let weights = self.weights();
        let mut totals = vec![Float::new(p); upto];
        for (g, w) in self.groups.iter().zip(weights).take(upto) {
            let d = g.period;
            let stride = self.max_period / d;
            let kmax = upto / d;
            // Fixed-size chunks summed in order keep results independent of
            // the thread count.
            let partials: Vec<Vec<Real>> = g
                .log_multipliers
                .par_chunks(CHUNK)
                .zip(w.par_chunks(CHUNK * stride))
                .map(|(logs, ws)| {
                    let mut acc = vec![Float::new(p); kmax];
                    for (log_lam, row) in logs.iter().zip(ws.chunks_exact(stride)) {
                        let e = Float::with_val(p, log_lam * s).exp();
                        let mut power = e.clone();
                        for k in 0..kmax {
                            if k > 0 {
                                power *= &e;
                            }
                            acc[k] += Float::with_val(p, &row[k] * &power);
                        }
                    }
                    acc
                })
                .collect();
            for partial in partials {
                for (k, v) in partial.into_iter().enumerate() {
                    totals[(k + 1) * d - 1] += v;
                }
            }
        }
        Ok(totals)
    }

    fn cache_magic() -> &'static [u8; 8] {
        b"CFDORB01"
    }

    /// Cache file name keyed by digit set, maximum period and working digits.
    pub fn cache_file_name(digits: &DigitSet, max_period: usize, working_digits: u32) -> String {
        let set: Vec<String> = digits.digits().iter().map(u32::to_string).collect();
        format!(
            "orbits-A{}-P{}-wd{}.bin",
            set.join("-"),
            max_period,
            working_digits
        )
    }

    pub fn cache_path(
        dir: &Path,
        digits: &DigitSet,
        max_period: usize,
        working_digits: u32,
    ) -> PathBuf {
        dir.join(Self::cache_file_name(digits, max_period, working_digits))
    }

    /// Writes the table in a little-endian binary format. Multipliers are
    /// stored exactly as (mantissa, binary exponent) pairs.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(Self::cache_magic())?;
        write_u32(&mut out, self.working_digits)?;
        write_u32(&mut out, self.prec)?;
        write_u32(&mut out, self.max_period as u32)?;
        write_u32(&mut out, self.digit_set.len() as u32)?;
        for &digit in self.digit_set.digits() {
            write_u32(&mut out, digit)?;
        }
        for g in &self.groups {
            out.write_all(&(g.len() as u64).to_le_bytes())?;
            for &letter in &g.letters {
                write_u32(&mut out, letter)?;
            }
            for value in &g.log_multipliers {
                write_float(&mut out, value)?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a table written by [`OrbitTable::save`], checking it matches the
    /// requested key.
    pub fn load(
        path: &Path,
        digits: &DigitSet,
        max_period: usize,
        ctx: &PrecisionContext,
    ) -> Result<OrbitTable> {
        let mut input = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != Self::cache_magic() {
            return Err(Error::Cache(format!(
                "{} is not an orbit table",
                path.display()
            )));
        }
        let working_digits = read_u32(&mut input)?;
        let prec = read_u32(&mut input)?;
        let stored_period = read_u32(&mut input)? as usize;
        let n_digits = read_u32(&mut input)? as usize;
        let stored_digits = (0..n_digits)
            .map(|_| read_u32(&mut input))
            .collect::<std::io::Result<Vec<_>>>()?;
        if working_digits != ctx.working_digits()
            || prec != ctx.prec_bits()
            || stored_period != max_period
            || stored_digits != digits.digits()
        {
            return Err(Error::Cache(format!(
                "{} holds A={{{stored_digits:?}}}, P={stored_period}, wd={working_digits}; requested A={{{digits}}}, P={max_period}, wd={}",
                path.display(),
                ctx.working_digits()
            )));
        }
        let mut groups = Vec::with_capacity(max_period);
        for period in 1..=max_period {
            let mut buf = [0u8; 8];
            input.read_exact(&mut buf)?;
            let count = u64::from_le_bytes(buf) as usize;
            if count as u128 != lyndon_count(digits.len(), period) {
                return Err(Error::Cache(format!(
                    "period {period} holds {count} records, expected {}",
                    lyndon_count(digits.len(), period)
                )));
            }
            let letters = (0..count * period)
                .map(|_| read_u32(&mut input))
                .collect::<std::io::Result<Vec<_>>>()?;
            let log_multipliers = (0..count)
                .map(|_| read_float(&mut input, prec))
                .collect::<Result<Vec<_>>>()?;
            groups.push(PeriodGroup {
                period,
                letters,
                log_multipliers,
            });
        }
        Ok(OrbitTable {
            digit_set: digits.clone(),
            max_period,
            working_digits,
            prec,
            groups,
            weights: OnceLock::new(),
        })
    }
}

fn write_u32(out: &mut impl Write, v: u32) -> std::io::Result<()> {
    out.write_all(&v.to_le_bytes())
}

fn read_u32(input: &mut impl Read) -> std::io::Result<u32> {
    let mut buf = [0u8; 4];
    input.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn write_float(out: &mut impl Write, value: &Real) -> Result<()> {
    let (mantissa, exp) = value
        .to_integer_exp()
        .ok_or_else(|| Error::Cache("non-finite multiplier".into()))?;
    out.write_all(&[u8::from(mantissa < 0)])?;
    out.write_all(&exp.to_le_bytes())?;
    let bytes = mantissa.as_abs().to_digits::<u8>(Order::Lsf);
    write_u32(out, bytes.len() as u32)?;
    out.write_all(&bytes)?;
    Ok(())
}

fn read_float(input: &mut impl Read, prec: u32) -> Result<Real> {
    let mut sign = [0u8; 1];
    input.read_exact(&mut sign)?;
    let mut exp = [0u8; 4];
    input.read_exact(&mut exp)?;
    let exp = i32::from_le_bytes(exp);
    let len = read_u32(input)? as usize;
    let mut bytes = vec![0u8; len];
    input.read_exact(&mut bytes)?;
    let mut mantissa = Integer::from_digits(&bytes, Order::Lsf);
    if sign[0] == 1 {
        mantissa = -mantissa;
    }
    Ok(Float::with_val(prec, mantissa) << exp)
}

/// Enumerates every primitive orbit of period `<= max_period`.
pub fn build_orbit_table(
    digits: &DigitSet,
    max_period: usize,
    ctx: &PrecisionContext,
) -> Result<OrbitTable> {
    build_orbit_table_with_limit(digits, max_period, ctx, DEFAULT_RECORD_LIMIT)
}

pub fn build_orbit_table_with_limit(
    digits: &DigitSet,
    max_period: usize,
    ctx: &PrecisionContext,
    limit: u128,
) -> Result<OrbitTable> {
    if max_period == 0 {
        return Err(Error::InvalidArgument(
            "maximum period must be at least 1".into(),
        ));
    }
    let expected: u128 = (1..=max_period)
        .map(|d| lyndon_count(digits.len(), d))
        .fold(0u128, u128::saturating_add);
    if expected > limit {
        return Err(Error::ResourceLimit {
            period: max_period,
            records: expected,
            limit,
        });
    }

    let mut groups: Vec<PeriodGroup> = (1..=max_period)
        .map(|period| {
            let count = lyndon_count(digits.len(), period) as usize;
            PeriodGroup {
                period,
                letters: Vec::with_capacity(count * period),
                log_multipliers: Vec::with_capacity(count),
            }
        })
        .collect();

    // Words come out in lexicographic order; prefix products are shared
    // between consecutive words, and logarithms are taken chunk-wise in
    // parallel before being appended in generation order.
    let alphabet = digits.digits();
    let mut duval = Duval::new(alphabet.len(), max_period);
    let mut prefix: Vec<MobiusMatrix> = vec![MobiusMatrix::identity()];
    let mut pending: Vec<(usize, MobiusMatrix)> = Vec::with_capacity(CHUNK);
    let flush = |pending: &mut Vec<(usize, MobiusMatrix)>, groups: &mut Vec<PeriodGroup>| {
        let logs: Vec<Real> = pending
            .par_iter()
            .map(|(_, m)| log_multiplier(m, ctx))
            .collect();
        for ((period, _), log) in pending.drain(..).zip(logs) {
            groups[period - 1].log_multipliers.push(log);
        }
    };
    while let Some(stable) = duval.advance() {
        prefix.truncate(stable + 1);
        for &idx in &duval.word[stable..] {
            let next = prefix
                .last()
                .expect("identity at the base")
                .mul_digit(alphabet[idx]);
            prefix.push(next);
        }
        let period = duval.word.len();
        groups[period - 1]
            .letters
            .extend(duval.word.iter().map(|&i| alphabet[i]));
        pending.push((period, prefix[period].clone()));
        if pending.len() == CHUNK {
            flush(&mut pending, &mut groups);
        }
    }
    flush(&mut pending, &mut groups);

    for g in &groups {
        let expected = lyndon_count(digits.len(), g.period);
        if g.len() as u128 != expected {
            return Err(Error::Inconsistent(format!(
                "period {} produced {} orbits, expected {expected}",
                g.period,
                g.len()
            )));
        }
    }

    Ok(OrbitTable {
        digit_set: digits.clone(),
        max_period,
        working_digits: ctx.working_digits(),
        prec: ctx.prec_bits(),
        groups,
        weights: OnceLock::new(),
    })
}

/// Loads the table from `cache_dir` when present, otherwise builds it and
/// writes it there.
pub fn cached_orbit_table(
    digits: &DigitSet,
    max_period: usize,
    ctx: &PrecisionContext,
    cache_dir: Option<&Path>,
) -> Result<OrbitTable> {
    let Some(dir) = cache_dir else {
        return build_orbit_table(digits, max_period, ctx);
    };
    let path = OrbitTable::cache_path(dir, digits, max_period, ctx.working_digits());
    if path.exists() {
        return OrbitTable::load(&path, digits, max_period, ctx);
    }
    let table = build_orbit_table(digits, max_period, ctx)?;
    std::fs::create_dir_all(dir)?;
    table.save(&path)?;
    Ok(table)
}

/// Largest `|A|^n` the naive trace will enumerate.
pub const NAIVE_TRACE_LIMIT: u64 = 1_000_000;

/// `tr(L_s^n)` as the literal sum over all `|A|^n` words of
/// `|T_w'(z_w)|^s / (1 - T_w'(z_w))`, with `T_w'(z_w) = (-1)^n Λ_w`.
/// Intended as a cross-check for small `n`.
pub fn trace_naive(digits: &DigitSet, n: usize, s: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let k = digits.len() as u64;
    let size = k.checked_pow(n as u32).filter(|&v| v <= NAIVE_TRACE_LIMIT);
    let Some(size) = size else {
        return Err(Error::ResourceLimit {
            period: n,
            records: u128::from(k).saturating_pow(n as u32),
            limit: u128::from(NAIVE_TRACE_LIMIT),
        });
    };
    if n == 0 {
        return Err(Error::InvalidArgument(
            "trace index must be at least 1".into(),
        ));
    }
    let p = ctx.prec_bits();
    let alphabet = digits.digits();
    let mut total = Float::new(p);
    let mut word = vec![alphabet[0]; n];
    for index in 0..size {
        let mut rest = index;
        for slot in word.iter_mut().rev() {
            *slot = alphabet[(rest % k) as usize];
            rest /= k;
        }
        let lam = orbit_multiplier(&word, ctx);
        let derivative = if n.is_multiple_of(2) {
            lam.clone()
        } else {
            -lam.clone()
        };
        let numer = lam.pow(s);
        total += numer / (1u32 - derivative);
    }
    Ok(total)
}

/// Lyndon words as a sanity check on a small alphabet: the explicit
/// rotation-minimality test, used by the tests.
#[cfg(test)]
fn is_lyndon(w: &[u32]) -> bool {
    (1..w.len()).all(|r| {
        let rotated: Vec<u32> = w[r..].iter().chain(&w[..r]).copied().collect();
        w < rotated.as_slice()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::word_matrix;
    use rug::ops::Pow;

    fn set(d: &[u32]) -> DigitSet {
        DigitSet::new(d.to_vec()).unwrap()
    }

    fn brute_force_lyndon(digits: &[u32], max_len: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for len in 1..=max_len {
            let total = digits.len().pow(len as u32);
            for index in 0..total {
                let mut rest = index;
                let mut w = vec![0u32; len];
                for slot in w.iter_mut().rev() {
                    *slot = digits[rest % digits.len()];
                    rest /= digits.len();
                }
                if is_lyndon(&w) {
                    out.push(w);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn lyndon_words_binary_length_two() {
        let words: Vec<_> = lyndon_words(&set(&[1, 2]), 2).collect();
        assert_eq!(words, vec![vec![1], vec![1, 2], vec![2]]);
    }

    #[test]
    fn lyndon_words_binary_length_three() {
        let words: Vec<_> = lyndon_words(&set(&[1, 2]), 3).collect();
        let triples: Vec<_> = words.iter().filter(|w| w.len() == 3).cloned().collect();
        assert_eq!(triples, vec![vec![1, 1, 2], vec![1, 2, 2]]);
        assert_eq!(words.len(), 5);
    }

    #[test]
    fn lyndon_words_ternary_length_two() {
        let mut words: Vec<_> = lyndon_words(&set(&[1, 2, 3]), 2).collect();
        words.sort();
        assert_eq!(
            words,
            vec![
                vec![1],
                vec![1, 2],
                vec![1, 3],
                vec![2],
                vec![2, 3],
                vec![3]
            ]
        );
    }

    #[test]
    fn lyndon_generation_matches_brute_force() {
        for (digits, len) in [(&[1u32, 2][..], 10), (&[1, 2, 3], 6), (&[2, 5, 7, 9], 4)] {
            let generated: Vec<_> = lyndon_words(&set(digits), len).collect();
            let mut sorted = generated.clone();
            sorted.sort();
            assert_eq!(generated, sorted, "lexicographic order");
            assert_eq!(generated, brute_force_lyndon(digits, len));
        }
    }

    #[test]
    fn lyndon_count_formula() {
        assert_eq!(lyndon_count(2, 1), 2);
        assert_eq!(lyndon_count(2, 3), 2);
        assert_eq!(lyndon_count(2, 25), 1_342_176);
        assert_eq!(lyndon_count(3, 2), 3);
        assert_eq!(mobius_mu(30), -1);
        assert_eq!(mobius_mu(12), 0);
    }

    #[test]
    fn small_tables() {
        let ctx = PrecisionContext::new(20).unwrap();
        let table = build_orbit_table(&set(&[1, 2]), 1, &ctx).unwrap();
        assert_eq!(table.len(), 2);
        let lams: Vec<f64> = table
            .records()
            .map(|r| r.log_multiplier.clone().exp().to_f64())
            .collect();
        assert!((lams[0] - 0.381_966_0).abs() < 1e-7);
        assert!((lams[1] - 0.171_572_9).abs() < 1e-7);

        let table = build_orbit_table(&set(&[1, 2]), 3, &ctx).unwrap();
        assert_eq!((table.count(1), table.count(2), table.count(3)), (2, 1, 2));
        assert_eq!(table.len(), 5);
        for r in table.records() {
            assert!(is_lyndon(r.word));
            assert!(*r.log_multiplier < 0);
            let direct = log_multiplier(&word_matrix(r.word), &ctx);
            assert_eq!(&direct, r.log_multiplier);
        }
    }

    #[test]
    fn resource_guard_names_the_period() {
        let ctx = PrecisionContext::new(20).unwrap();
        let err = build_orbit_table_with_limit(&set(&[1, 2]), 12, &ctx, 100).unwrap_err();
        assert!(err.to_string().contains("period 12"), "{err}");
    }

    #[test]
    fn trace_at_zero_is_two_term_sum() {
        let ctx = PrecisionContext::new(20).unwrap();
        let table = build_orbit_table(&set(&[1, 2]), 2, &ctx).unwrap();
        let zero = ctx.zero();
        let t1 = table.trace(1, &zero).unwrap();
        let l1 = orbit_multiplier(&[1], &ctx);
        let l2 = orbit_multiplier(&[2], &ctx);
        let expected = (l1 + 1u32).recip() + (l2 + 1u32).recip();
        assert!(Float::with_val(ctx.prec_bits(), &t1 - &expected).abs() < ctx.tolerance(5));
        assert!((t1.to_f64() - 1.577_160).abs() < 1e-6);
        assert!(table.trace(3, &zero).is_err());
        assert!(table.trace(0, &zero).is_err());
    }

    #[test]
    fn traces_agree_with_naive_sum() {
        let ctx = PrecisionContext::new(30).unwrap();
        let digits = set(&[1, 2]);
        let table = build_orbit_table(&digits, 8, &ctx).unwrap();
        for s in ["0", "0.25", "0.5312805062772051416", "1"] {
            let s = ctx.parse(s).unwrap();
            let fast = table.traces(&s, 8).unwrap();
            for n in 1..=8 {
                let naive = trace_naive(&digits, n, &s, &ctx).unwrap();
                let direct = table.trace(n, &s).unwrap();
                let tol = ctx.tolerance(5);
                assert!(
                    Float::with_val(ctx.prec_bits(), &naive - &direct).abs() <= tol,
                    "n={n}"
                );
                assert!(
                    Float::with_val(ctx.prec_bits(), &naive - &fast[n - 1]).abs() <= tol,
                    "n={n}"
                );
            }
        }
    }

    #[test]
    fn traces_are_positive_and_decreasing_in_s() {
        let ctx = PrecisionContext::new(20).unwrap();
        let table = build_orbit_table(&set(&[1, 2, 3]), 5, &ctx).unwrap();
        let lo = table.traces(&ctx.parse("0.3").unwrap(), 5).unwrap();
        let hi = table.traces(&ctx.parse("0.7").unwrap(), 5).unwrap();
        for (a, b) in lo.iter().zip(&hi) {
            assert!(*b > 0);
            assert!(a > b);
        }
    }

    #[test]
    fn naive_trace_guard() {
        let ctx = PrecisionContext::new(20).unwrap();
        let s = ctx.parse("0.5").unwrap();
        assert!(trace_naive(&set(&[1, 2, 3, 4]), 11, &s, &ctx).is_err());
    }

    #[test]
    fn cache_round_trip_is_exact() {
        let ctx = PrecisionContext::new(20).unwrap();
        let digits = set(&[1, 3]);
        let dir = tempfile::tempdir().unwrap();
        let built = cached_orbit_table(&digits, 7, &ctx, Some(dir.path())).unwrap();
        let path = OrbitTable::cache_path(dir.path(), &digits, 7, ctx.working_digits());
        assert!(path.exists());
        let loaded = cached_orbit_table(&digits, 7, &ctx, Some(dir.path())).unwrap();
        assert_eq!(built.len(), loaded.len());
        for (a, b) in built.records().zip(loaded.records()) {
            assert_eq!(a.word, b.word);
            assert_eq!(a.log_multiplier, b.log_multiplier);
        }
        let other = PrecisionContext::new(25).unwrap();
        assert!(OrbitTable::load(&path, &digits, 7, &other).is_err());
    }

    #[test]
    fn power_identity_for_repeated_orbits() {
        // The period-2 trace contains the squared fixed-point terms.
        let ctx = PrecisionContext::new(20).unwrap();
        let table = build_orbit_table(&set(&[1, 2]), 2, &ctx).unwrap();
        let s = ctx.parse("0.5").unwrap();
        let t2 = table.trace(2, &s).unwrap();
        let mut expected = ctx.zero();
        for w in [&[1u32, 1][..], &[1, 2], &[2, 1], &[2, 2]] {
            let lam = orbit_multiplier(w, &ctx);
            expected += lam.clone().pow(&s) / (1u32 - lam);
        }
        assert!(Float::with_val(ctx.prec_bits(), &t2 - &expected).abs() < ctx.tolerance(5));
    }
}
