//! Congruence statements `f(A n + B) ≡ 0 (mod d)` and the closed-form
//! families they come from.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitions::CountingKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClaimError {
    #[error("offset numerator {numerator} is not divisible by {denominator}")]
    OffsetNotIntegral { numerator: u128, denominator: u128 },
    #[error("offset {offset} is not below the modulus {modulus}")]
    OffsetOutOfRange { offset: u64, modulus: u64 },
    #[error("divisor must be at least 2, got {0}")]
    DivisorTooSmall(u64),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("parameters overflow 64-bit progressions")]
    Overflow,
    #[error("parameter {name} = {value} is outside the family's range")]
    BadParameter { name: &'static str, value: u32 },
}

/// `kind(modulus·n + offset) ≡ 0 (mod divisor)` for all `n ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceClaim {
    #[serde(rename = "fn")]
    pub kind: CountingKind,
    #[serde(rename = "modulusA")]
    pub modulus: u64,
    #[serde(rename = "offsetB")]
    pub offset: u64,
    pub divisor: u64,
    pub source: String,
}

impl CongruenceClaim {
    pub fn new(
        kind: CountingKind,
        modulus: u64,
        offset: u64,
        divisor: u64,
        source: impl Into<String>,
    ) -> Result<Self, ClaimError> {
        if modulus == 0 {
            return Err(ClaimError::ZeroModulus);
        }
        if offset >= modulus {
            return Err(ClaimError::OffsetOutOfRange { offset, modulus });
        }
        if divisor < 2 {
            return Err(ClaimError::DivisorTooSmall(divisor));
        }
        Ok(Self { kind, modulus, offset, divisor, source: source.into() })
    }

    /// Claim whose offset is `numerator / denominator`, which must be exact.
    pub fn with_fraction(
        kind: CountingKind,
        modulus: u64,
        numerator: u128,
        denominator: u128,
        divisor: u64,
        source: impl Into<String>,
    ) -> Result<Self, ClaimError> {
        let offset = exact_quotient(numerator, denominator)?;
        Self::new(kind, modulus, offset, divisor, source)
    }

    /// `modulus·n + offset`.
    pub fn index(&self, n: u64) -> Option<u64> {
        self.modulus.checked_mul(n)?.checked_add(self.offset)
    }
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}n + {}) ≡ 0 (mod {})", self.kind, self.modulus, self.offset, self.divisor)
    }
}

pub fn exact_quotient(numerator: u128, denominator: u128) -> Result<u64, ClaimError> {
    if denominator == 0 || !numerator.is_multiple_of(denominator) {
        return Err(ClaimError::OffsetNotIntegral { numerator, denominator });
    }
    u64::try_from(numerator / denominator).map_err(|_| ClaimError::Overflow)
}

/// `5^e` as a `u128`, if it fits in 64 bits.
pub fn pow5(e: u32) -> Result<u128, ClaimError> {
    let v = 5u128.checked_pow(e).ok_or(ClaimError::Overflow)?;
    if v > u64::MAX as u128 {
        return Err(ClaimError::Overflow);
    }
    Ok(v)
}

fn big(v: u128) -> Result<u64, ClaimError> {
    u64::try_from(v).map_err(|_| ClaimError::Overflow)
}

/// The five congruence families for `p_{1,5^m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    C1,
    C2,
    C3,
    C4,
    C6,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::C1, Family::C2, Family::C3, Family::C4, Family::C6];

    pub fn label(self) -> &'static str {
        match self {
            Family::C1 => "c1",
            Family::C2 => "c2",
            Family::C3 => "c3",
            Family::C4 => "c4",
            Family::C6 => "c6",
        }
    }

    /// Values of `r` the family is stated for (only `c4` has one).
    pub fn stated_r(self) -> &'static [u32] {
        match self {
            Family::C4 => &[2, 3, 4],
            _ => &[0],
        }
    }

    /// The claim at `(k, β)` (and `r` for `c4`).
    pub fn claim(self, k: u32, beta: u32, r: u32) -> Result<CongruenceClaim, ClaimError> {
        if k == 0 {
            return Err(ClaimError::BadParameter { name: "k", value: k });
        }
        let (ell_exp, mod_exp, numerator, div_exp) = match self {
            Family::C1 => {
                let e = 2 * k + beta - 1;
                (2 * k - 1, e, 18 * pow5(e)? + pow5(2 * k - 1)? + 1, e)
            }
            Family::C2 => {
                let e = 2 * k + 2 * beta - 1;
                (2 * k, e, 14 * pow5(e)? + pow5(2 * k)? + 1, 2 * k + beta - 1)
            }
            Family::C3 => {
                let e = 2 * k + 2 * beta;
                (2 * k, e, 22 * pow5(e)? + pow5(2 * k)? + 1, 2 * k + beta)
            }
            Family::C4 => {
                if r > 4 {
                    return Err(ClaimError::BadParameter { name: "r", value: r });
                }
                let e = 2 * k + beta;
                let num = (24 * r as u128 + 18) * pow5(e - 1)? + pow5(2 * k - 1)? + 1;
                (2 * k - 1, e, num, e)
            }
            Family::C6 => {
                let e = 2 * k + 2 * beta + 2;
                (2 * k, e, 22 * pow5(e)? + pow5(2 * k)? + 1, 2 * k + beta + 1)
            }
        };
        CongruenceClaim::with_fraction(
            CountingKind::P1L(big(pow5(ell_exp)?)?),
            big(pow5(mod_exp)?)?,
            numerator,
            24,
            big(pow5(div_exp)?)?,
            "theorem1",
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `p(5^k n + δ_k) ≡ 0 (mod 5^k)`.
pub fn p_power_claim(k: u32) -> Result<CongruenceClaim, ClaimError> {
    let m = big(pow5(k)?)?;
    let delta = crate::partitions::delta(k);
    let offset = u64::try_from(delta).map_err(|_| ClaimError::Overflow)?;
    CongruenceClaim::new(CountingKind::P, m, offset, m, "p-mod-5^k")
}

/// The three progressions for `p_{1,5}` keyed by the leading coefficient
/// `c ∈ {3, 11, 19}` of the offset `(c·5^{β+1} + 1)/4`.
pub fn p1_5_claim(c: u32, beta: u32) -> Result<CongruenceClaim, ClaimError> {
    let (mod_exp, div_exp) = match c {
        3 => (beta + 1, beta + 1),
        11 | 19 => (beta + 2, beta + 2),
        _ => return Err(ClaimError::BadParameter { name: "c", value: c }),
    };
    CongruenceClaim::with_fraction(
        CountingKind::P1L(5),
        big(pow5(mod_exp)?)?,
        c as u128 * pow5(beta + 1)? + 1,
        4,
        big(pow5(div_exp)?)?,
        "p1l:5",
    )
}

/// The two progressions for `p_{1,25}`; `odd` selects the `5^{2β+1}` one.
pub fn p1_25_claim(odd: bool, beta: u32) -> Result<CongruenceClaim, ClaimError> {
    let (mod_exp, c, div_exp) =
        if odd { (2 * beta + 1, 7, beta + 1) } else { (2 * beta + 2, 11, beta + 2) };
    CongruenceClaim::with_fraction(
        CountingKind::P1L(25),
        big(pow5(mod_exp)?)?,
        c * pow5(mod_exp)? + 13,
        12,
        big(pow5(div_exp)?)?,
        "p1l:25",
    )
}

/// `p_{1,ℓ}(25n + t) ≡ 0 (mod 5)` with `ℓ + t = 24`.
pub fn p1l_mod5_claim(ell: u64) -> Result<CongruenceClaim, ClaimError> {
    if ell == 0 || ell > 24 {
        return Err(ClaimError::BadParameter { name: "ell", value: ell as u32 });
    }
    CongruenceClaim::new(CountingKind::P1L(ell), 25, 24 - ell, 5, "p1l-mod-5")
}

/// `p_{1,4}(49n + t) ≡ 0 (mod 7)`.
pub fn p1_4_mod7_claim(t: u64) -> Result<CongruenceClaim, ClaimError> {
    CongruenceClaim::new(CountingKind::P1L(4), 49, t, 7, "p1l:4-mod-7")
}

/// `p_{-2}(5n + s) ≡ 0 (mod 5)`.
pub fn pm2_claim(s: u64) -> Result<CongruenceClaim, ClaimError> {
    CongruenceClaim::new(CountingKind::PMinus2, 5, s, 5, "pm2-mod-5")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(c: &CongruenceClaim) -> (u64, u64, u64) {
        (c.modulus, c.offset, c.divisor)
    }

    #[test]
    fn theorem_offsets() {
        assert_eq!(triple(&Family::C1.claim(1, 0, 0).unwrap()), (5, 4, 5));
        assert_eq!(triple(&Family::C1.claim(1, 1, 0).unwrap()), (25, 19, 25));
        assert_eq!(triple(&Family::C2.claim(1, 0, 0).unwrap()), (5, 4, 5));
        assert_eq!(triple(&Family::C3.claim(1, 0, 0).unwrap()), (25, 24, 25));
        assert_eq!(triple(&Family::C6.claim(1, 0, 0).unwrap()), (625, 574, 125));
        assert_eq!(triple(&Family::C6.claim(2, 1, 0).unwrap()), (390625, 358099, 15625));
        assert_eq!(triple(&Family::C4.claim(1, 0, 2).unwrap()), (25, 14, 25));
        assert_eq!(Family::C1.claim(2, 0, 0).unwrap().kind, CountingKind::P1L(125));
        assert_eq!(Family::C3.claim(2, 0, 0).unwrap().kind, CountingKind::P1L(625));
    }

    #[test]
    fn every_family_offset_is_integral_and_in_range() {
        for f in Family::ALL {
            for k in 1..=4 {
                for beta in 0..=4 {
                    for &r in f.stated_r() {
                        let c = f.claim(k, beta, r).unwrap();
                        assert!(c.offset < c.modulus);
                    }
                }
            }
        }
        for r in [0, 1] {
            assert!(Family::C4.claim(2, 1, r).is_ok());
        }
        assert!(Family::C4.claim(1, 0, 5).is_err());
    }

    #[test]
    fn non_integral_offsets_are_rejected() {
        assert_eq!(
            CongruenceClaim::with_fraction(CountingKind::P, 25, 17, 24, 5, "t"),
            Err(ClaimError::OffsetNotIntegral { numerator: 17, denominator: 24 })
        );
        assert!(CongruenceClaim::new(CountingKind::P, 5, 5, 5, "t").is_err());
        assert!(CongruenceClaim::new(CountingKind::P, 5, 4, 1, "t").is_err());
    }

    #[test]
    fn p_power_offsets_use_delta() {
        assert_eq!(triple(&p_power_claim(1).unwrap()), (5, 4, 5));
        assert_eq!(triple(&p_power_claim(2).unwrap()), (25, 24, 25));
        assert_eq!(triple(&p_power_claim(3).unwrap()), (125, 99, 125));
    }

    #[test]
    fn earlier_results_are_instances() {
        for beta in 0..=5 {
            assert_eq!(p1_5_claim(3, beta).unwrap().offset, Family::C1.claim(1, beta, 0).unwrap().offset);
            assert_eq!(triple(&p1_5_claim(11, beta).unwrap()), triple(&Family::C4.claim(1, beta, 2).unwrap()));
            assert_eq!(triple(&p1_5_claim(19, beta).unwrap()), triple(&Family::C4.claim(1, beta, 4).unwrap()));
            assert_eq!(triple(&p1_25_claim(true, beta).unwrap()), triple(&Family::C2.claim(1, beta, 0).unwrap()));
            assert_eq!(triple(&p1_25_claim(false, beta).unwrap()), triple(&Family::C3.claim(1, beta, 0).unwrap()));
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(Family::C6.claim(12, 5, 0), Err(ClaimError::Overflow));
    }

    #[test]
    fn claim_json_field_names() {
        let v = serde_json::to_value(p1_4_mod7_claim(11).unwrap()).unwrap();
        assert_eq!(v["fn"], "p1l:4");
        assert_eq!(v["modulusA"], 49);
        assert_eq!(v["offsetB"], 11);
    }
}
