//! Exact score algebra.
//!
//! A path score is a sum of terms `w · log2(i + 1)`. Exponentiating base 2
//! turns it into the natural number `Π (i + 1)^w`, so every score in this crate
//! is carried as the prime factorization of that number. Addition of scores
//! becomes exponent-wise addition and comparing two scores becomes comparing
//! two natural numbers, which we do without ever touching floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, MulAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("malformed factored score `{0}`")]
    Malformed(String),
    #[error("exponent overflow")]
    Overflow,
}

/// A score `s` stored as the factorization of `2^s`.
///
/// Primes are kept in ascending order and no zero exponent is ever stored, so
/// structural equality coincides with equality of the encoded scores.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScore {
    factors: Vec<(u64, u64)>,
}

impl ExactScore {
    /// Score 0, value 1.
    pub fn one() -> Self {
        Self::default()
    }

    /// `base^exp` as an exact score. `base` must be at least 1.
    pub fn power(base: u64, exp: u64) -> Self {
        assert!(base >= 1, "score base must be positive");
        if exp == 0 {
            return Self::one();
        }
        let factors = factorize(base)
            .into_iter()
            .map(|(p, e)| (p, e.checked_mul(exp).expect("exponent overflow")))
            .collect();
        Self { factors }
    }

    /// Builds a score from `(prime, exponent)` pairs, merging repeated primes
    /// and dropping zero exponents.
    pub fn from_factors<I>(pairs: I) -> Result<Self, ScoreError>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut factors: Vec<(u64, u64)> = Vec::new();
        for (p, e) in pairs {
            if !is_prime(p) {
                return Err(ScoreError::NotPrime(p));
            }
            if e > 0 {
                factors.push((p, e));
            }
        }
        factors.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, acc)) if *q == p => {
                    *acc = acc.checked_add(e).ok_or(ScoreError::Overflow)?;
                }
                _ => merged.push((p, e)),
            }
        }
        Ok(Self { factors: merged })
    }

    pub fn factors(&self) -> &[(u64, u64)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, prime: u64) -> u64 {
        self.factors
            .binary_search_by_key(&prime, |&(p, _)| p)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// Multiplies in `base^exp`, i.e. adds `exp · log2(base)` to the score.
    pub fn mul_power(&mut self, base: u64, exp: u64) {
        if exp == 0 || base == 1 {
            return;
        }
        *self *= &Self::power(base, exp);
    }

    /// `k` times the score.
    pub fn pow(&self, k: u64) -> Self {
        if k == 0 {
            return Self::one();
        }
        Self {
            factors: self
                .factors
                .iter()
                .map(|&(p, e)| (p, e.checked_mul(k).expect("exponent overflow")))
                .collect(),
        }
    }

    /// The big natural `Π p^e`.
    pub fn materialize(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * pow_big(p, e))
    }

    /// Decimal rendering of the score (base-2 logarithm of the value) to
    /// `digits` significant digits. Every printed digit is certified: working
    /// precision is raised until both ends of the enclosing interval round to
    /// the same string.
    pub fn approx_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_one() {
            return render_zero(digits);
        }
        if self.factors.len() == 1 && self.factors[0].0 == 2 {
            let e = BigInt::from(self.factors[0].1);
            return render_interval(&e, &BigInt::one(), &e, &BigInt::one(), digits)
                .expect("exact value always renders");
        }
        let total_exp: u64 = self.factors.iter().map(|&(_, e)| e).sum();
        let mut bits = 64 + 4 * digits as u32 + 64 - total_exp.leading_zeros();
        loop {
            let mut sum_lo = BigInt::zero();
            let mut sum_hi = BigInt::zero();
            for &(p, e) in &self.factors {
                let (lo, hi) = ln_bounds(p, bits);
                sum_lo += lo * e;
                sum_hi += hi * e;
            }
            let (l2_lo, l2_hi) = ln_bounds(2, bits);
            if let Some(s) = render_interval(&sum_lo, &l2_hi, &sum_hi, &l2_lo, digits) {
                return s;
            }
            bits *= 2;
        }
    }
}

impl MulAssign<&ExactScore> for ExactScore {
    fn mul_assign(&mut self, rhs: &ExactScore) {
        if rhs.is_one() {
            return;
        }
        let mut out = Vec::with_capacity(self.factors.len() + rhs.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &rhs.factors);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1.checked_add(b[j].1).expect("exponent overflow");
                    out.push((a[i].0, e));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        self.factors = out;
    }
}

impl MulAssign for ExactScore {
    fn mul_assign(&mut self, rhs: ExactScore) {
        *self *= &rhs;
    }
}

impl Mul for &ExactScore {
    type Output = ExactScore;
    fn mul(self, rhs: &ExactScore) -> ExactScore {
        let mut out = self.clone();
        out *= rhs;
        out
    }
}

impl Mul for ExactScore {
    type Output = ExactScore;
    fn mul(mut self, rhs: ExactScore) -> ExactScore {
        self *= &rhs;
        self
    }
}

impl std::iter::Product for ExactScore {
    fn product<I: Iterator<Item = ExactScore>>(iter: I) -> Self {
        iter.fold(ExactScore::one(), |acc, s| acc * s)
    }
}

impl Ord for ExactScore {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl PartialOrd for ExactScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}

impl FromStr for ExactScore {
    type Err = ScoreError;

    /// Accepts the canonical `2^a * 3^b` form; a bare prime means exponent 1
    /// and a lone `1` is the empty product.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || ScoreError::Malformed(s.to_string());
        let trimmed = s.trim();
        if trimmed == "1" {
            return Ok(Self::one());
        }
        let mut pairs = Vec::new();
        for term in trimmed.split('*') {
            let term = term.trim();
            let (p, e) = match term.split_once('^') {
                Some((p, e)) => (p.trim(), e.trim()),
                None => (term, "1"),
            };
            let p: u64 = p.parse().map_err(|_| malformed())?;
            let e: u64 = e.parse().map_err(|_| malformed())?;
            if e == 0 {
                return Err(malformed());
            }
            pairs.push((p, e));
        }
        Self::from_factors(pairs)
    }
}

/// Removes the common part `Π p^min(a_p, b_p)` from both scores.
pub fn cancel_common(a: &ExactScore, b: &ExactScore) -> (ExactScore, ExactScore) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (p, d) in exponent_diff(a, b) {
        match d.cmp(&0) {
            Ordering::Greater => left.push((p, d as u64)),
            Ordering::Less => right.push((p, d.unsigned_abs() as u64)),
            Ordering::Equal => {}
        }
    }
    (ExactScore { factors: left }, ExactScore { factors: right })
}

/// Exact ordering of two encoded scores.
///
/// Shared prime powers cancel first. A 64-bit fixed-point logarithm enclosure
/// settles almost every comparison; only when the enclosure straddles zero
/// are the two cancelled products materialized and compared as integers.
pub fn compare(a: &ExactScore, b: &ExactScore) -> Ordering {
    let diff = exponent_diff(a, b);
    if diff.iter().all(|&(_, d)| d == 0) {
        return Ordering::Equal;
    }
    if let Some(ord) = fast_sign(&diff) {
        return ord;
    }
    let mut left = BigUint::one();
    let mut right = BigUint::one();
    for &(p, d) in &diff {
        if d > 0 {
            left *= pow_big(p, d as u64);
        } else if d < 0 {
            right *= pow_big(p, d.unsigned_abs() as u64);
        }
    }
    left.cmp(&right)
}

fn exponent_diff(a: &ExactScore, b: &ExactScore) -> Vec<(u64, i128)> {
    let mut out = Vec::with_capacity(a.factors.len() + b.factors.len());
    let (mut i, mut j) = (0, 0);
    let (x, y) = (&a.factors, &b.factors);
    while i < x.len() || j < y.len() {
        let take_left = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_right = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_left {
            out.push((x[i].0, x[i].1 as i128));
            i += 1;
        } else if take_right {
            out.push((y[j].0, -(y[j].1 as i128)));
            j += 1;
        } else {
            out.push((x[i].0, x[i].1 as i128 - y[j].1 as i128));
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sign of `Σ d_p · ln p` from the cached fixed-point enclosures, if decisive.
fn fast_sign(diff: &[(u64, i128)]) -> Option<Ordering> {
    let mut lo: i128 = 0;
    let mut hi: i128 = 0;
    for &(p, d) in diff {
        if d == 0 {
            continue;
        }
        let (lp, hp) = fast_ln(p)?;
        let (a, b) = if d > 0 { (lp, hp) } else { (hp, lp) };
        lo = lo.checked_add(d.checked_mul(a)?)?;
        hi = hi.checked_add(d.checked_mul(b)?)?;
    }
    if lo > 0 {
        Some(Ordering::Greater)
    } else if hi < 0 {
        Some(Ordering::Less)
    } else {
        None
    }
}

const FAST_BITS: u32 = 64;
const FAST_TABLE_LIMIT: u64 = 4096;

fn fast_ln(p: u64) -> Option<(i128, i128)> {
    static TABLE: OnceLock<Vec<(i128, i128)>> = OnceLock::new();
    if p < FAST_TABLE_LIMIT {
        let table = TABLE.get_or_init(|| {
            (0..FAST_TABLE_LIMIT)
                .map(|q| {
                    if q >= 2 && is_prime(q) {
                        let (lo, hi) = ln_bounds(q, FAST_BITS);
                        (lo.to_i128().unwrap(), hi.to_i128().unwrap())
                    } else {
                        (0, 0)
                    }
                })
                .collect()
        });
        return Some(table[p as usize]);
    }
    let (lo, hi) = ln_bounds(p, FAST_BITS);
    Some((lo.to_i128()?, hi.to_i128()?))
}

/// Integers `lo ≤ ln(p) · 2^bits ≤ hi`.
pub(crate) fn ln_bounds(p: u64, bits: u32) -> (BigInt, BigInt) {
    assert!(p >= 2);
    const GUARD: u32 = 16;
    let scale = bits + GUARD;
    let (ln2, ln2_err) = atanh_scaled(&BigUint::one(), &BigUint::from(3u32), scale);
    let b = 63 - p.leading_zeros() as u64;
    let pow2 = 1u64 << b;
    let (frac, frac_err) = atanh_scaled(
        &BigUint::from(p - pow2),
        &(BigUint::from(p) + BigUint::from(pow2)),
        scale,
    );
    // ln p = b·ln 2 + 2·atanh((p − 2^b)/(p + 2^b)), each series an underestimate.
    let lo = BigInt::from(&ln2 * (2 * b) + &frac * 2u32);
    let hi = &lo + BigInt::from(2 * b * ln2_err + 2 * frac_err);
    let lo_scaled = lo >> GUARD;
    let hi_scaled = -((-hi) >> GUARD);
    (lo_scaled, hi_scaled)
}

/// `atanh(a/c) · 2^scale` for `0 ≤ a/c ≤ 1/3`: returns `(s, err)` with the true
/// value in `[s, s + err]`.
fn atanh_scaled(a: &BigUint, c: &BigUint, scale: u32) -> (BigUint, u64) {
    let a2 = a * a;
    let c2 = c * c;
    let mut t = (a << scale) / c;
    let mut sum = BigUint::zero();
    let mut k: u64 = 0;
    while !t.is_zero() {
        sum += &t / (2 * k + 1);
        t = t * &a2 / &c2;
        k += 1;
    }
    // Truncation in t_k accumulates at most k+1 ulps; each term adds ≤ 2 and the
    // tail once t hits zero is bounded by 2(k+2).
    (sum, 4 * k + 8)
}

fn render_zero(digits: usize) -> String {
    if digits == 1 {
        "0".to_string()
    } else {
        format!("0.{}", "0".repeat(digits - 1))
    }
}

/// Renders `v ∈ [lo_num/lo_den, hi_num/hi_den]` to `digits` significant digits
/// (round half up) if both ends agree.
fn render_interval(
    lo_num: &BigInt,
    lo_den: &BigInt,
    hi_num: &BigInt,
    hi_den: &BigInt,
    digits: usize,
) -> Option<String> {
    if lo_num.is_negative() || hi_num.is_negative() {
        return None;
    }
    let int_lo = lo_num.div_floor(lo_den);
    let int_hi = hi_num.div_floor(hi_den);
    let int_digits = |x: &BigInt| if x.is_zero() { 1 } else { x.to_string().len() };
    let d = int_digits(&int_lo);
    if d != int_digits(&int_hi) {
        return None;
    }
    let mut shift = digits as i64 - d as i64;
    let round = |num: &BigInt, den: &BigInt| -> BigInt {
        let ten = BigInt::from(10u32);
        if shift >= 0 {
            let m = ten.pow(shift as u32);
            let scaled: BigInt = num * 2u32 * m + den;
            scaled.div_floor(&(den * 2u32))
        } else {
            let m = ten.pow((-shift) as u32);
            let scaled: BigInt = num * 2u32 + den * &m;
            scaled.div_floor(&(den * 2u32 * m))
        }
    };
    let mut q = round(lo_num, lo_den);
    if q != round(hi_num, hi_den) {
        return None;
    }
    let limit = BigInt::from(10u32).pow(digits as u32);
    if q == limit {
        q /= 10;
        shift -= 1;
    }
    let text = q.to_string();
    Some(if shift > 0 {
        let shift = shift as usize;
        let padded = format!("{:0>width$}", text, width = shift + 1);
        let (int, frac) = padded.split_at(padded.len() - shift);
        format!("{int}.{frac}")
    } else {
        format!("{text}{}", "0".repeat((-shift) as usize))
    })
}

fn pow_big(p: u64, e: u64) -> BigUint {
    let e = u32::try_from(e).expect("exponent too large to materialize");
    Pow::pow(BigUint::from(p), e)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division; `factorize(1)` is empty.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
