//! Exact scalars and truncated Poincaré series.
//!
//! [`ExactRational`] is the arbitrary-precision rational used by every
//! symbolic path. [`TruncSeries`] holds integer power series in the Betti
//! variable `t`, valid up to (and including) a truncation bound.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator; `0/1` is the canonical zero.
pub type ExactRational = BigRational;

pub fn rat(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad_rational(s))?;
            let d: BigInt = d.trim().parse().map_err(|_| bad_rational(s))?;
            if d.is_zero() {
                return Err(bad_rational(s));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(s.parse().map_err(|_| bad_rational(s))?),
    };
    Ok(parsed)
}

fn bad_rational(s: &str) -> Error {
    Error::InvalidArgument(format!("not a rational number: {s:?}"))
}

/// Always `p/q`, including integers (`2/1`).
pub fn format_pq(q: &ExactRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Exact square root of a nonnegative rational, when it exists.
pub fn rational_sqrt(q: &ExactRational) -> Option<ExactRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Integer power series `c_0 + c_1 t + ... + c_bound t^bound`.
///
/// Coefficients above `bound` are unknown and never read; binary operations
/// truncate to the smaller bound of their operands.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<BigInt>,
}

impl TruncSeries {
    pub fn zero(bound: usize) -> Self {
        Self { coeffs: vec![BigInt::zero(); bound + 1] }
    }

    pub fn one(bound: usize) -> Self {
        Self::monomial(1, 0, bound)
    }

    /// `c * t^exponent`, or zero if the exponent exceeds the bound.
    pub fn monomial(c: i64, exponent: usize, bound: usize) -> Self {
        let mut s = Self::zero(bound);
        if exponent <= bound {
            s.coeffs[exponent] = BigInt::from(c);
        }
        s
    }

    /// Coefficients beyond `bound` are dropped; missing ones are zero.
    pub fn from_coeffs<I, T>(coeffs: I, bound: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut s = Self::zero(bound);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c.into();
        }
        s
    }

    /// Rejects any non-integer coefficient.
    pub fn from_rationals(coeffs: &[ExactRational], bound: usize) -> Result<Self> {
        let mut s = Self::zero(bound);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            if !c.is_integer() {
                return Err(Error::NonIntegerCoefficient(c.to_string()));
            }
            *slot = c.to_integer();
        }
        Ok(s)
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, exponent: usize) -> Option<&BigInt> {
        self.coeffs.get(exponent)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeffs_i64(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| c.to_i64().unwrap_or(i64::MAX)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn truncate(&self, bound: usize) -> Self {
        let bound = bound.min(self.bound());
        Self { coeffs: self.coeffs[..=bound].to_vec() }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut s = Self::zero(self.bound());
        for i in k..=self.bound() {
            s.coeffs[i] = self.coeffs[i - k].clone();
        }
        s
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = BigInt::from(c);
        Self { coeffs: self.coeffs.iter().map(|x| x * &c).collect() }
    }

    /// Cauchy product truncated at the smaller bound.
    pub fn series_mul(&self, other: &Self) -> Self {
        let bound = self.bound().min(other.bound());
        let mut out = Self::zero(bound);
        for (i, a) in self.coeffs.iter().enumerate().take(bound + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(bound + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// `self * (1 + t^k + t^{2k} + ...)`, i.e. division by `1 - t^k`.
    pub fn series_geom_div(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("geometric ratio exponent must be positive".into()));
        }
        let mut out = self.clone();
        for i in k..=self.bound() {
            let prev = out.coeffs[i - k].clone();
            out.coeffs[i] += prev;
        }
        Ok(out)
    }

    /// Exact division by `1 + t`, treating the series as a polynomial of
    /// degree at most `bound`. Fails when `1 + t` does not divide it.
    pub fn div_one_plus_t(&self) -> Result<Self> {
        let mut quotient = Self::zero(self.bound());
        let mut carry = BigInt::zero();
        for i in 0..=self.bound() {
            let q = &self.coeffs[i] - &carry;
            carry = q.clone();
            quotient.coeffs[i] = q;
        }
        // the last quotient coefficient must vanish for an exact division
        // whose dividend has degree <= bound
        if !carry.is_zero() {
            let remainder = self.coeffs.iter().enumerate().fold(BigInt::zero(), |acc, (i, c)| {
                if i % 2 == 0 {
                    acc + c
                } else {
                    acc - c
                }
            });
            return Err(Error::NotDivisibleByOnePlusT(remainder.to_string()));
        }
        Ok(quotient)
    }

    /// First negative coefficient, if any.
    pub fn first_negative(&self) -> Option<(usize, &BigInt)> {
        self.coeffs.iter().enumerate().find(|(_, c)| c.is_negative())
    }

    pub fn ensure_nonnegative(&self) -> Result<()> {
        match self.first_negative() {
            Some((exponent, value)) => {
                Err(Error::NegativeCoefficient { exponent, value: value.to_string() })
            }
            None => Ok(()),
        }
    }

    /// `1 + t^step + t^{2 step} + ... + t^{(count - 1) step}`.
    pub fn geometric_sum(step: usize, count: usize, bound: usize) -> Self {
        let mut s = Self::zero(bound);
        for j in 0..count {
            if j * step <= bound {
                s.coeffs[j * step] += 1;
            }
        }
        s
    }

    /// Sum of the coefficients with alternating sign, i.e. the value at `t = -1`.
    pub fn value_at_minus_one(&self) -> BigInt {
        self.coeffs.iter().enumerate().fold(BigInt::zero(), |acc, (i, c)| {
            if i.is_even() {
                acc + c
            } else {
                acc - c
            }
        })
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let bound = self.bound().min(rhs.bound());
        TruncSeries {
            coeffs: (0..=bound).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let bound = self.bound().min(rhs.bound());
        TruncSeries {
            coeffs: (0..=bound).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        self.series_mul(rhs)
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Renders `1 + t^2 + t^4`, `1 - t^6`, `t^2 + 2t^4`, or `0`.
impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
