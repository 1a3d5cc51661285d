//! Truncated Laurent series with exact integer coefficients.
//!
//! A [`LaurentSeries`] tracks the coefficients of `q^e` for every exponent
//! `e` in the half-open window `[min_exp, prec)`. Exponents below `min_exp`
//! are known to be zero; exponents at or above `prec` are unknown. Every
//! operation propagates the window so that a result never claims knowledge
//! of a coefficient its inputs could not determine.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("lowest tracked coefficient {0} is not a unit")]
    LeadingCoefficientNotUnit(BigInt),
    #[error("series has no tracked coefficients")]
    EmptyPrecision,
}

#[derive(Clone, Debug)]
pub struct LaurentSeries {
    min_exp: i64,
    prec: i64,
    coeffs: Vec<BigInt>,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

impl LaurentSeries {
    /// Series whose window is exactly the given coefficients.
    pub fn from_coeffs(min_exp: i64, coeffs: Vec<BigInt>) -> Self {
        let prec = min_exp + coeffs.len() as i64;
        Self { min_exp, prec, coeffs }
    }

    /// Series on `[min_exp, prec)`; missing coefficients are zero and extra
    /// ones are dropped.
    pub fn with_prec(min_exp: i64, prec: i64, mut coeffs: Vec<BigInt>) -> Self {
        assert!(prec >= min_exp, "precision {prec} below min exponent {min_exp}");
        coeffs.resize((prec - min_exp) as usize, BigInt::zero());
        Self { min_exp, prec, coeffs }
    }

    pub fn from_ints(min_exp: i64, coeffs: &[i64], prec: i64) -> Self {
        Self::with_prec(min_exp, prec, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(prec: i64) -> Self {
        Self::with_prec(0, prec.max(0), Vec::new())
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(BigInt::one(), 0, prec)
    }

    /// `coeff * q^exp`, known below `prec`.
    pub fn monomial(coeff: BigInt, exp: i64, prec: i64) -> Self {
        if prec <= exp {
            return Self::with_prec(prec, prec, Vec::new());
        }
        let mut coeffs = vec![BigInt::zero(); (prec - exp) as usize];
        coeffs[0] = coeff;
        Self { min_exp: exp, prec, coeffs }
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Number of tracked exponents.
    pub fn window_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^exp`, or `None` when `exp` is outside the window.
    pub fn get(&self, exp: i64) -> Option<&BigInt> {
        if exp < self.min_exp || exp >= self.prec {
            return None;
        }
        self.coeffs.get((exp - self.min_exp) as usize)
    }

    /// Coefficient of `q^exp`; zero below the window.
    ///
    /// Panics when `exp >= prec`, since that coefficient is not known.
    pub fn coeff(&self, exp: i64) -> BigInt {
        assert!(exp < self.prec, "coefficient of q^{exp} is beyond precision {}", self.prec);
        self.get(exp).cloned().unwrap_or_default()
    }

    /// Iterator over `(exponent, coefficient)` for every tracked exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms().find(|(_, c)| !c.is_zero()).map(|(e, _)| e)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drops every coefficient at or above `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let prec = prec.max(self.min_exp);
        Self::with_prec(self.min_exp, prec, self.coeffs[..(prec - self.min_exp) as usize].to_vec())
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { min_exp: self.min_exp + k, prec: self.prec + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            min_exp: self.min_exp,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let min_exp = self.min_exp.min(other.min_exp);
        let prec = self.prec.min(other.prec);
        let mut coeffs = vec![BigInt::zero(); (prec - min_exp) as usize];
        for s in [self, other] {
            for (e, c) in s.terms().take_while(|(e, _)| *e < prec) {
                coeffs[(e - min_exp) as usize] += c;
            }
        }
        Self { min_exp, prec, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            min_exp: self.min_exp,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Cauchy product. The result is known below
    /// `min(prec_a + min_b, prec_b + min_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let min_exp = self.min_exp + other.min_exp;
        let prec = (self.prec + other.min_exp).min(other.prec + self.min_exp);
        let len = (prec - min_exp) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..len - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self { min_exp, prec, coeffs }
    }

    /// Leading exponent and unit of a series, as needed by [`invert`](Self::invert).
    fn unit_leading(&self) -> Result<(i64, BigInt), SeriesError> {
        if self.is_empty() {
            return Err(SeriesError::EmptyPrecision);
        }
        let v = self
            .valuation()
            .ok_or_else(|| SeriesError::LeadingCoefficientNotUnit(BigInt::zero()))?;
        let lead = self.coeff(v);
        if lead.abs() != BigInt::one() {
            return Err(SeriesError::LeadingCoefficientNotUnit(lead));
        }
        Ok((v, lead))
    }

    /// Multiplicative inverse. The leading coefficient must be `±1`; the
    /// result keeps the relative precision of the input.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        self.invert_with(|x| x)
    }

    fn invert_with(&self, reduce: impl Fn(BigInt) -> BigInt) -> Result<Self, SeriesError> {
        let (v, lead) = self.unit_leading()?;
        let len = (self.prec - v) as usize;
        let a = &self.coeffs[(v - self.min_exp) as usize..];
        let support: Vec<usize> = (1..len).filter(|&k| !a[k].is_zero()).collect();
        let mut b: Vec<BigInt> = Vec::with_capacity(len);
        b.push(reduce(lead.clone()));
        for n in 1..len {
            let mut acc = BigInt::zero();
            for &k in support.iter().take_while(|&&k| k <= n) {
                acc += &a[k] * &b[n - k];
            }
            // lead is ±1, so dividing by it is multiplying by it.
            b.push(reduce(-(acc * &lead)));
        }
        Ok(Self { min_exp: -v, prec: -v + len as i64, coeffs: b })
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        self.pow_with(e, |a, b| a.mul(b), |s| s.invert())
    }

    fn pow_with(
        &self,
        e: i64,
        mul: impl Fn(&Self, &Self) -> Self,
        invert: impl Fn(&Self) -> Result<Self, SeriesError>,
    ) -> Result<Self, SeriesError> {
        let rel = self.prec - self.min_exp;
        if e == 0 {
            return Ok(Self::one(rel));
        }
        let mut base = if e < 0 { invert(self)? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => mul(&a, &base),
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = mul(&base, &base);
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// Replaces `q` by `q^k`.
    pub fn substitute_power(&self, k: u64) -> Self {
        assert!(k >= 1, "substitution power must be positive");
        let k = k as i64;
        let min_exp = self.min_exp * k;
        let prec = self.prec * k;
        let mut coeffs = vec![BigInt::zero(); (prec - min_exp) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        Self { min_exp, prec, coeffs }
    }

    /// `Σ_n coeff(m n + r) q^n`: pick the progression, divide by `q^r` and
    /// replace `q^m` by `q`.
    pub fn extract_progression(&self, m: u64, r: i64) -> Self {
        assert!(m >= 1, "progression modulus must be positive");
        let m = m as i64;
        assert!((0..m).contains(&r), "residue {r} outside [0, {m})");
        let min_exp = ceil_div(self.min_exp - r, m);
        let prec = ceil_div(self.prec - r, m).max(min_exp);
        let coeffs = (min_exp..prec).map(|n| self.coeff(m * n + r)).collect();
        Self { min_exp, prec, coeffs }
    }

    /// The huffing operator: zero every coefficient whose exponent is not a
    /// multiple of 5. Exponents keep their place.
    pub fn huff(&self) -> Self {
        let coeffs = self
            .terms()
            .map(|(e, c)| if e.rem_euclid(5) == 0 { c.clone() } else { BigInt::zero() })
            .collect();
        Self { min_exp: self.min_exp, prec: self.prec, coeffs }
    }

    /// Least nonnegative residue of every coefficient.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        assert!(m.is_positive(), "modulus must be positive");
        Self {
            min_exp: self.min_exp,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| c.mod_floor(m)).collect(),
        }
    }

    /// Product with coefficients reduced modulo `m` as they are produced.
    pub fn mul_mod(&self, other: &Self, m: &BigInt) -> Self {
        let a = self.reduce_mod(m);
        let b = other.reduce_mod(m);
        a.mul(&b).reduce_mod(m)
    }

    /// Power modulo `m`, reducing after every product.
    pub fn pow_mod(&self, e: i64, m: &BigInt) -> Result<Self, SeriesError> {
        let reduced = self.reduce_mod(m);
        reduced.pow_with(e, |a, b| a.mul_mod(b, m), |s| s.invert_mod(m))
    }

    /// Inverse modulo `m`; the leading coefficient must be `±1` before reduction.
    pub fn invert_mod(&self, m: &BigInt) -> Result<Self, SeriesError> {
        // Leading-unit test is done on the exact representative.
        let centred = Self {
            min_exp: self.min_exp,
            prec: self.prec,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if &r * 2 > *m { r - m } else { r }
                })
                .collect(),
        };
        centred.invert_with(|x| x.mod_floor(m))
    }

    /// Largest exponent bound both series track.
    pub fn common_prec(&self, other: &Self) -> i64 {
        self.prec.min(other.prec)
    }

    /// First exponent below the common precision where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.common_prec(other);
        (lo..hi).find(|&e| self.coeff(e) != other.coeff(e))
    }

    /// Coefficientwise agreement on the common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

/// Equality on the common tracked window, as used throughout the verifier.
impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::add(self, rhs)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::sub(self, rhs)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries::neg(self)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms().filter(|(_, c)| !c.is_zero()) {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SeriesJson {
    min_exp: i64,
    prec: i64,
    coeffs: Vec<String>,
}

impl Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            min_exp: self.min_exp,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SeriesJson::deserialize(deserializer)?;
        if raw.prec - raw.min_exp != raw.coeffs.len() as i64 {
            return Err(D::Error::custom("coefficient count does not match window"));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<Result<_, _>>()?;
        Ok(Self { min_exp: raw.min_exp, prec: raw.prec, coeffs })
    }
}
