//! Exact arithmetic functions: a segmented sieve for whole tables and an
//! independent trial-division point oracle.

mod factor;
mod sieve;

pub use factor::{is_prime, nth_prime_trial, FactorList};
pub use sieve::{mertens, sieve, sieve_with, SieveConfig, SieveTable, Values};

use crate::error::{Error, Result};
use rug::Float;
use std::fmt;
use std::str::FromStr;

/// The supported sequences aₙ, including main-term-subtracted and
/// sign-alternated variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithFunctionId {
    /// μ(n)
    Mobius,
    /// (−1)^{n+1} μ(n)
    MobiusAlternating,
    /// λ(n) = (−1)^{Ω(n)}
    Liouville,
    /// (−1)^{n+1} λ(n)
    LiouvilleAlternating,
    /// Λ(n)
    VonMangoldt,
    /// Λ(n) − 1
    VonMangoldtMinusOne,
    /// τ(n), the number of divisors
    TauDivisors,
    /// 2^{ω(n)}
    TwoOmega,
    /// 2^{ω(n)} − τ(n)
    TwoOmegaMinusTau,
    /// pₙ, the n-th prime
    PrimeSequence,
}

impl ArithFunctionId {
    pub const ALL: [ArithFunctionId; 10] = [
        ArithFunctionId::Mobius,
        ArithFunctionId::MobiusAlternating,
        ArithFunctionId::Liouville,
        ArithFunctionId::LiouvilleAlternating,
        ArithFunctionId::VonMangoldt,
        ArithFunctionId::VonMangoldtMinusOne,
        ArithFunctionId::TauDivisors,
        ArithFunctionId::TwoOmega,
        ArithFunctionId::TwoOmegaMinusTau,
        ArithFunctionId::PrimeSequence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ArithFunctionId::Mobius => "mobius",
            ArithFunctionId::MobiusAlternating => "mobius-alt",
            ArithFunctionId::Liouville => "liouville",
            ArithFunctionId::LiouvilleAlternating => "liouville-alt",
            ArithFunctionId::VonMangoldt => "vonmangoldt",
            ArithFunctionId::VonMangoldtMinusOne => "vonmangoldt-minus-one",
            ArithFunctionId::TauDivisors => "tau",
            ArithFunctionId::TwoOmega => "two-omega",
            ArithFunctionId::TwoOmegaMinusTau => "two-omega-minus-tau",
            ArithFunctionId::PrimeSequence => "primes",
        }
    }

    /// Whether values are exact integers (everything except the Λ family).
    pub fn is_integer_valued(self) -> bool {
        !matches!(self, ArithFunctionId::VonMangoldt | ArithFunctionId::VonMangoldtMinusOne)
    }
}

impl fmt::Display for ArithFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArithFunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let id = match key.as_str() {
            "mobius" | "mu" => ArithFunctionId::Mobius,
            "mobius-alt" | "mobius-alternating" => ArithFunctionId::MobiusAlternating,
            "liouville" | "lambda" => ArithFunctionId::Liouville,
            "liouville-alt" | "liouville-alternating" => ArithFunctionId::LiouvilleAlternating,
            "vonmangoldt" | "von-mangoldt" | "mangoldt" => ArithFunctionId::VonMangoldt,
            "vonmangoldt-minus-one" | "von-mangoldt-minus-one" => ArithFunctionId::VonMangoldtMinusOne,
            "tau" | "divisors" | "tau-divisors" => ArithFunctionId::TauDivisors,
            "two-omega" | "2omega" => ArithFunctionId::TwoOmega,
            "two-omega-minus-tau" => ArithFunctionId::TwoOmegaMinusTau,
            "primes" | "prime-sequence" | "nth-prime" => ArithFunctionId::PrimeSequence,
            _ => return Err(Error::InvalidArgument(format!("unknown arithmetic function `{s}`"))),
        };
        Ok(id)
    }
}

/// n = p^k with p prime and k ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub k: u32,
}

/// One exact value aₙ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithValue {
    Int(i64),
    /// `Λ(n) − offset`, kept symbolic: Λ(n) = log p when `prime_power` is
    /// `Some(p^k)` and 0 otherwise.
    LogPrime { prime_power: Option<PrimePower>, offset: i64 },
}

impl ArithValue {
    pub fn as_int(&self) -> Option<i64> {
        match *self {
            ArithValue::Int(v) => Some(v),
            ArithValue::LogPrime { prime_power: None, offset } => Some(-offset),
            ArithValue::LogPrime { .. } => None,
        }
    }

    pub fn to_float(&self, prec: u32) -> Float {
        match *self {
            ArithValue::Int(v) => Float::with_val(prec, v),
            ArithValue::LogPrime { prime_power, offset } => {
                let log = prime_power.map_or_else(|| Float::with_val(prec, 0), |pp| Float::with_val(prec, pp.p).ln());
                log - offset
            }
        }
    }
}

fn alternating_sign(n: u64) -> i64 {
    if n % 2 == 1 {
        1
    } else {
        -1
    }
}

/// Point evaluation of aₙ by trial division, independent of any sieve.
pub fn value(fn_id: ArithFunctionId, n: u64) -> Result<ArithValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("arithmetic functions are indexed from n = 1".into()));
    }
    if fn_id == ArithFunctionId::PrimeSequence {
        let p = nth_prime_trial(n)?;
        let v = i64::try_from(p).map_err(|_| Error::Overflow(format!("p_{n}")))?;
        return Ok(ArithValue::Int(v));
    }
    let f = FactorList::trial_division(n)?;
    let omega = f.omega();
    let mobius = if f.is_squarefree() { if omega % 2 == 0 { 1 } else { -1 } } else { 0 };
    let liouville = if f.big_omega() % 2 == 0 { 1 } else { -1 };
    let tau = f.num_divisors() as i64;
    let two_omega = 1i64 << omega;
    let prime_power = (omega == 1).then(|| PrimePower { p: f.factors[0].0, k: f.factors[0].1 });
    let v = match fn_id {
        ArithFunctionId::Mobius => ArithValue::Int(mobius),
        ArithFunctionId::MobiusAlternating => ArithValue::Int(alternating_sign(n) * mobius),
        ArithFunctionId::Liouville => ArithValue::Int(liouville),
        ArithFunctionId::LiouvilleAlternating => ArithValue::Int(alternating_sign(n) * liouville),
        ArithFunctionId::VonMangoldt => ArithValue::LogPrime { prime_power, offset: 0 },
        ArithFunctionId::VonMangoldtMinusOne => ArithValue::LogPrime { prime_power, offset: 1 },
        ArithFunctionId::TauDivisors => ArithValue::Int(tau),
        ArithFunctionId::TwoOmega => ArithValue::Int(two_omega),
        ArithFunctionId::TwoOmegaMinusTau => ArithValue::Int(two_omega - tau),
        ArithFunctionId::PrimeSequence => unreachable!(),
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_values() {
        assert_eq!(value(ArithFunctionId::Liouville, 12).unwrap(), ArithValue::Int(-1));
        assert_eq!(value(ArithFunctionId::Mobius, 4).unwrap(), ArithValue::Int(0));
        assert_eq!(value(ArithFunctionId::TwoOmega, 1).unwrap(), ArithValue::Int(1));
        assert_eq!(value(ArithFunctionId::Mobius, 1).unwrap(), ArithValue::Int(1));
        assert_eq!(value(ArithFunctionId::TauDivisors, 12).unwrap(), ArithValue::Int(6));
        assert_eq!(
            value(ArithFunctionId::VonMangoldt, 9).unwrap(),
            ArithValue::LogPrime { prime_power: Some(PrimePower { p: 3, k: 2 }), offset: 0 }
        );
        assert_eq!(value(ArithFunctionId::PrimeSequence, 1).unwrap(), ArithValue::Int(2));
        assert!(value(ArithFunctionId::Mobius, 0).is_err());
    }

    #[test]
    fn variant_relations() {
        for n in 1..2000u64 {
            let mu = value(ArithFunctionId::Mobius, n).unwrap().as_int().unwrap();
            let lam = value(ArithFunctionId::Liouville, n).unwrap().as_int().unwrap();
            let sign = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(value(ArithFunctionId::MobiusAlternating, n).unwrap().as_int(), Some(sign * mu));
            assert_eq!(value(ArithFunctionId::LiouvilleAlternating, n).unwrap().as_int(), Some(sign * lam));
            let tau = value(ArithFunctionId::TauDivisors, n).unwrap().as_int().unwrap();
            let two = value(ArithFunctionId::TwoOmega, n).unwrap().as_int().unwrap();
            assert_eq!(value(ArithFunctionId::TwoOmegaMinusTau, n).unwrap().as_int(), Some(two - tau));
            let lm = value(ArithFunctionId::VonMangoldt, n).unwrap().to_float(128);
            let lm1 = value(ArithFunctionId::VonMangoldtMinusOne, n).unwrap().to_float(128);
            assert_eq!(lm - 1u32, lm1);
        }
    }

    #[test]
    fn names_round_trip() {
        for id in ArithFunctionId::ALL {
            assert_eq!(id.name().parse::<ArithFunctionId>().unwrap(), id);
        }
        assert!("zeta".parse::<ArithFunctionId>().is_err());
    }
}
