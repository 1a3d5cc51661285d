//! Euler products, eta quotients, Ramanujan theta functions and the
//! Rogers–Ramanujan quotient, all expanded into [`LaurentSeries`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{LaurentSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("Euler product index must be positive")]
    ZeroIndex,
    #[error("eta quotient needs at least one factor or a nonzero q-shift")]
    Empty,
    #[error("theta monomial sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("theta monomial exponent must be at least 1")]
    BadExponent,
    #[error("cannot parse eta quotient {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `f_r = Π_{m≥1} (1 - q^{rm})` on `[0, prec)`, via the pentagonal number
/// theorem: the only nonzero coefficients sit at `r k(3k-1)/2` with sign `(-1)^k`.
pub fn euler_product(r: u64, prec: i64) -> LaurentSeries {
    assert!(r >= 1, "Euler product index must be positive");
    let prec = prec.max(0);
    let mut coeffs = vec![BigInt::zero(); prec as usize];
    let r = r as i64;
    if prec > 0 {
        coeffs[0] = BigInt::one();
    }
    for k in 1i64.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let lo = r * (k * (3 * k - 1) / 2);
        if lo >= prec {
            break;
        }
        coeffs[lo as usize] += sign;
        let hi = r * (k * (3 * k + 1) / 2);
        if hi < prec {
            coeffs[hi as usize] += sign;
        }
    }
    LaurentSeries::with_prec(0, prec, coeffs)
}

/// Symbolic `q^s · Π f_r^{e_r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaQuotientSpec {
    factors: BTreeMap<u64, i64>,
    qshift: i64,
}

impl EtaQuotientSpec {
    /// Builds a quotient, summing exponents of repeated `r` and dropping
    /// factors whose exponents cancel.
    pub fn new(
        factors: impl IntoIterator<Item = (u64, i64)>,
        qshift: i64,
    ) -> Result<Self, EtaError> {
        let mut map = BTreeMap::new();
        let mut any = false;
        for (r, e) in factors {
            if r == 0 {
                return Err(EtaError::ZeroIndex);
            }
            any = true;
            *map.entry(r).or_insert(0) += e;
        }
        if !any && qshift == 0 {
            return Err(EtaError::Empty);
        }
        map.retain(|_, e| *e != 0);
        Ok(Self { factors: map, qshift })
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.factors.iter().map(|(&r, &e)| (r, e))
    }

    pub fn qshift(&self) -> i64 {
        self.qshift
    }

    /// Product of two quotients.
    pub fn times(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, e) in other.factors() {
            *out.factors.entry(r).or_insert(0) += e;
        }
        out.factors.retain(|_, e| *e != 0);
        out.qshift += other.qshift;
        out
    }

    /// Expansion on `[qshift, prec)`.
    pub fn expand(&self, prec: i64) -> Result<LaurentSeries, EtaError> {
        let rel = (prec - self.qshift).max(0);
        if rel == 0 {
            return Ok(LaurentSeries::with_prec(prec, prec, Vec::new()));
        }
        let mut acc = LaurentSeries::one(rel);
        for (r, e) in self.factors() {
            let f = euler_product(r, rel);
            acc = acc.mul(&f.pow(e)?);
        }
        Ok(acc.shift(self.qshift))
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.qshift != 0 {
            parts.push(format!("q^{}", self.qshift));
        }
        for (r, e) in self.factors() {
            parts.push(format!("f{r}^{e}"));
        }
        if parts.is_empty() {
            parts.push("q^0".to_string());
        }
        write!(f, "{}", parts.join(" * "))
    }
}

/// Parses `q^s * f1^a * f5^b * ...`. The `q` factor is optional and must come
/// first; a missing `^e` means exponent 1.
impl FromStr for EtaQuotientSpec {
    type Err = EtaError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| EtaError::Parse { input: input.to_string(), reason: reason.to_string() };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty input"));
        }
        let mut qshift = 0;
        let mut factors = Vec::new();
        for (idx, token) in compact.split('*').enumerate() {
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => {
                    let e = e.parse::<i64>().map_err(|_| fail(&format!("bad exponent in {token:?}")))?;
                    (b, e)
                }
                None => (token, 1),
            };
            if base == "q" {
                if idx != 0 {
                    return Err(fail("the q factor must come first"));
                }
                qshift = exp;
            } else if let Some(r) = base.strip_prefix('f') {
                let r = r.parse::<u64>().map_err(|_| fail(&format!("bad Euler index in {token:?}")))?;
                factors.push((r, exp));
            } else {
                return Err(fail(&format!("unexpected factor {token:?}")));
            }
        }
        Self::new(factors, qshift)
    }
}

/// `±q^k` with `k ≥ 1`, an argument of Ramanujan's theta function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaMonomial {
    sign: i8,
    exp: u32,
}

impl ThetaMonomial {
    pub fn new(sign: i8, exp: u32) -> Result<Self, EtaError> {
        if sign != 1 && sign != -1 {
            return Err(EtaError::BadSign(sign));
        }
        if exp == 0 {
            return Err(EtaError::BadExponent);
        }
        Ok(Self { sign, exp })
    }

    /// `-q^k`
    pub fn neg_q(exp: u32) -> Self {
        Self::new(-1, exp).expect("valid exponent")
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }
}

/// Ramanujan's `f(a, b) = Σ_{n∈ℤ} a^{n(n+1)/2} b^{n(n-1)/2}` on `[0, prec)`.
pub fn theta_f(a: ThetaMonomial, b: ThetaMonomial, prec: i64) -> LaurentSeries {
    let prec = prec.max(0);
    let mut coeffs = vec![BigInt::zero(); prec as usize];
    let (ea, eb) = (a.exp as i64, b.exp as i64);
    let term = |n: i64| {
        let pa = n * (n + 1) / 2;
        let pb = n * (n - 1) / 2;
        let exp = ea * pa + eb * pb;
        let negative = (a.sign < 0 && pa.rem_euclid(2) == 1) ^ (b.sign < 0 && pb.rem_euclid(2) == 1);
        (exp, if negative { -1 } else { 1 })
    };
    // Exponents grow monotonically in |n| on each side, so stop at the first
    // one past the window.
    for dir in [1i64, -1] {
        let start = if dir == 1 { 0 } else { -1 };
        let mut n = start;
        loop {
            let (exp, sign) = term(n);
            if exp >= prec {
                break;
            }
            coeffs[exp as usize] += sign;
            n += dir;
        }
    }
    LaurentSeries::with_prec(0, prec, coeffs)
}

/// `R(q) = f(-q^2, -q^3) / f(-q, -q^4)` on `[0, prec)`.
pub fn rr_quotient(prec: i64) -> Result<LaurentSeries, EtaError> {
    let num = theta_f(ThetaMonomial::neg_q(2), ThetaMonomial::neg_q(3), prec);
    let den = theta_f(ThetaMonomial::neg_q(1), ThetaMonomial::neg_q(4), prec);
    Ok(num.mul(&den.invert()?))
}

/// `f_25 (R(q^5) - q - q^2 R(q^5)^{-1})`, which should reproduce `f_1`.
pub fn rr_dissection_of_f1(prec: i64) -> Result<LaurentSeries, EtaError> {
    let inner = rr_dissection_inner(prec)?;
    Ok(euler_product(25, prec).mul(&inner))
}

/// `R(q^5) - q - q^2 R(q^5)^{-1}` on `[0, prec)`.
pub fn rr_dissection_inner(prec: i64) -> Result<LaurentSeries, EtaError> {
    let base_prec = (prec + 4) / 5 + 1;
    let r = rr_quotient(base_prec)?;
    let r5 = r.substitute_power(5).truncate(prec);
    let rinv5 = r.invert()?.substitute_power(5).shift(2).truncate(prec);
    let q = LaurentSeries::monomial(BigInt::one(), 1, prec);
    Ok(r5.sub(&q).sub(&rinv5))
}
