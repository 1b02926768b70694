//! Truncated formal power series with arbitrary-precision integer coefficients.
//!
//! A [`TruncSeries`] stores the coefficients of `t^0, ..., t^D` exactly. All
//! Poincaré-series identities in this crate are stated and compared through a
//! single truncation degree `D`, so every binary operation checks that both
//! operands share it.
//!
//! The checked methods ([`TruncSeries::add`], [`TruncSeries::mul`], ...) return
//! a [`SeriesError`] on mismatched truncation degrees. The operator impls on
//! references (`&a + &b`, `&a * &b`, `&a - &b`) are for internal code where
//! the degrees are known to agree; they panic on a mismatch.

use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Truncation degree used when none is configured.
pub const DEFAULT_TRUNC_DEGREE: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("mismatched truncation degrees {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("shift by {shift} would create a term in negative degree (valuation {valuation})")]
    NegativeDegree { shift: i64, valuation: usize },
    #[error("geometric inverse needs a zero constant term, found {0}")]
    NonZeroConstant(BigInt),
}

/// Integer power series truncated after degree `D`.
///
/// Equality compares all coefficients through `D`; the coefficient vector always
/// has length exactly `D + 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<BigInt>,
}

impl TruncSeries {
    pub fn zero(degree: usize) -> Self {
        TruncSeries {
            coeffs: vec![BigInt::zero(); degree + 1],
        }
    }

    pub fn one(degree: usize) -> Self {
        Self::monomial(degree, 0, 1)
    }

    /// `c * t^n`, or zero when `n` lies beyond the truncation.
    pub fn monomial(degree: usize, n: usize, c: i64) -> Self {
        let mut s = Self::zero(degree);
        if n <= degree {
            s.coeffs[n] = BigInt::from(c);
        }
        s
    }

    /// Builds a series from leading coefficients; missing ones are zero and
    /// coefficients past `degree` are dropped.
    pub fn from_coeffs<I, C>(degree: usize, coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(degree);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c.into();
        }
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(degree);
        for (n, c) in terms {
            if n <= degree {
                s.coeffs[n] += c.into();
            }
        }
        s
    }

    /// The truncation degree `D`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^n`; zero beyond the truncation.
    pub fn coeff(&self, n: usize) -> BigInt {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Least exponent with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Sum of all coefficients through `D`.
    pub fn total(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Re-truncates to a new degree, padding with zeros when growing.
    pub fn truncate(&self, degree: usize) -> Self {
        Self::from_coeffs(degree, self.coeffs.iter().cloned())
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.degree() == other.degree() {
            Ok(())
        } else {
            Err(SeriesError::DegreeMismatch(self.degree(), other.degree()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Cauchy product truncated at `D`.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul_shifted(other, 0)
    }

    /// `(self * other) * t^k`, exact through `D`.
    ///
    /// For negative `k` the product is formed through degree `D - k` before
    /// dividing by `t^{-k}`, so no coefficient is lost to truncation.
    pub fn mul_shifted(&self, other: &Self, k: i64) -> Result<Self, SeriesError> {
        self.check(other)?;
        let d = self.degree();
        let (Some(va), Some(vb)) = (self.valuation(), other.valuation()) else {
            return Ok(Self::zero(d));
        };
        let valuation = va + vb;
        if k < 0 && valuation < k.unsigned_abs() as usize {
            return Err(SeriesError::NegativeDegree {
                shift: k,
                valuation,
            });
        }
        let mut out = Self::zero(d);
        for (n, slot) in out.coeffs.iter_mut().enumerate() {
            // target degree n comes from product degree n - k
            let m = n as i64 - k;
            if m < valuation as i64 {
                continue;
            }
            let m = m as usize;
            let lo = m.saturating_sub(d).max(va);
            let hi = m.min(d);
            let mut acc = BigInt::zero();
            for i in lo..=hi {
                let j = m - i;
                if j < vb || j > d {
                    continue;
                }
                if self.coeffs[i].is_zero() || other.coeffs[j].is_zero() {
                    continue;
                }
                acc += &self.coeffs[i] * &other.coeffs[j];
            }
            *slot = acc;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `t^k`.
    ///
    /// Positive shifts drop coefficients pushed past `D`. A negative shift is
    /// allowed only when it creates no negative-degree term; the zero series
    /// shifts freely.
    pub fn shift(&self, k: i64) -> Result<Self, SeriesError> {
        let d = self.degree();
        if k < 0 {
            let down = k.unsigned_abs() as usize;
            if let Some(v) = self.valuation() {
                if v < down {
                    return Err(SeriesError::NegativeDegree {
                        shift: k,
                        valuation: v,
                    });
                }
            }
            Ok(Self::from_coeffs(d, self.coeffs.iter().skip(down).cloned()))
        } else {
            let up = k as usize;
            let mut out = Self::zero(d);
            for n in up..=d {
                out.coeffs[n] = self.coeffs[n - up].clone();
            }
            Ok(out)
        }
    }

    /// `1 / (1 - self)`; requires a zero constant term.
    pub fn geom_inverse(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonZeroConstant(self.coeffs[0].clone()));
        }
        let d = self.degree();
        let mut s = Self::zero(d);
        s.coeffs[0] = BigInt::one();
        for n in 1..=d {
            let mut acc = BigInt::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &s.coeffs[n - i];
                }
            }
            s.coeffs[n] = acc;
        }
        Ok(s)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.degree());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficientwise `self <= other` through `D`.
    pub fn leq(&self, other: &Self) -> Result<bool, SeriesError> {
        self.check(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b))
    }
}

impl ops::Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        TruncSeries::add(self, rhs).expect("truncation degrees agree")
    }
}

impl ops::Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        TruncSeries::sub(self, rhs).expect("truncation degrees agree")
    }
}

impl ops::Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        TruncSeries::mul(self, rhs).expect("truncation degrees agree")
    }
}

impl ops::Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, abs) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match n {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    f.write_str("t")?;
                    if n > 1 {
                        write!(f, "^{n}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.degree() + 1)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Writes an exact integer as a bare JSON number.
pub(crate) fn serialize_bigint<S: Serializer>(
    n: &BigInt,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serde_json::value::RawValue::from_string(n.to_string())
        .map_err(serde::ser::Error::custom)?
        .serialize(serializer)
}

/// Serializes as a JSON array of exact integers (no precision loss for big
/// coefficients).
impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            let raw = serde_json::value::RawValue::from_string(c.to_string())
                .map_err(serde::ser::Error::custom)?;
            seq.serialize_element(&raw)?;
        }
        seq.end()
    }
}
