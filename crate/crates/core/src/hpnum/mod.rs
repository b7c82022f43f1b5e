//! Multiprecision real/complex substrate and the special functions needed by
//! the contour integrals: Γ, ζ, ζ′, Bernoulli numbers and Euler's constant.
//!
//! Elementary arithmetic and the elementary functions (exp, log, trig, π) come
//! from MPFR/MPC through `rug`. Everything built on top of them lives here.

mod bernoulli;
mod constants;
mod gamma;
mod zeta;

pub use bernoulli::{bernoulli, bernoulli_float, BERNOULLI_CAP};
pub use constants::{euler_gamma, pi};
pub use gamma::{gamma, gamma_stirling_bound, gamma_vertical_envelope};
pub use zeta::{zeta, zeta_and_prime, zeta_prime, zeta_with_cutoffs, ZetaEval};

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::{Complex, Float, Rational};

/// Arbitrary precision real number.
pub type Real = Float;
/// Arbitrary precision complex number `re + i·im`.
pub type ComplexHP = Complex;
/// Exact reduced rational with positive denominator.
pub type RationalExact = Rational;

/// Working precision threaded through every numeric operation.
///
/// Computation happens at `bits + guard_bits`; results handed back to callers
/// are rounded to `bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    pub bits: u32,
    pub guard_bits: u32,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 32;

    pub fn new(bits: u32) -> Result<Self> {
        Self::with_guard(bits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(bits: u32, guard_bits: u32) -> Result<Self> {
        if bits < 53 {
            return Err(Error::InvalidArgument(format!(
                "precision must be at least 53 bits, got {bits}"
            )));
        }
        if bits > 1 << 16 {
            return Err(Error::InvalidArgument(format!("precision {bits} bits is too large")));
        }
        Ok(PrecisionContext { bits, guard_bits })
    }

    /// Precision actually used for intermediate computation.
    pub fn work(&self) -> u32 {
        self.bits + self.guard_bits
    }

    /// Context whose output precision is this context's working precision.
    pub fn raised(&self, extra: u32) -> Self {
        PrecisionContext { bits: self.bits + extra, guard_bits: self.guard_bits }
    }

    pub fn round(&self, x: &Float) -> Float {
        Float::with_val(self.bits, x)
    }

    pub fn round_c(&self, z: &Complex) -> Complex {
        Complex::with_val(self.bits, z)
    }

    /// Decimal digits carried by `bits` (used by serializers).
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { bits: 128, guard_bits: Self::DEFAULT_GUARD }
    }
}

pub fn real(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

pub fn complex(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn ln2pi(prec: u32) -> Float {
    let mut x = Float::with_val(prec, Constant::Pi);
    x *= 2u32;
    x.ln()
}

pub(crate) fn ensure_finite(z: &Complex, what: &'static str) -> Result<()> {
    if z.real().is_finite() && z.imag().is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Returns `Some(k)` if `s` is exactly the integer `k` (imaginary part zero).
pub(crate) fn as_exact_integer(s: &Complex) -> Option<i64> {
    if !s.imag().is_zero() || !s.real().is_integer() {
        return None;
    }
    s.real().to_integer().and_then(|i| i.to_i64())
}

/// |z| as f64, saturating on overflow.
pub fn abs_f64(z: &Complex) -> f64 {
    Float::with_val(53, z.abs_ref()).to_f64()
}

/// Relative difference |a−b| / max(|a|, |b|), or the absolute difference
/// when both vanish.
pub fn rel_diff(a: &Complex, b: &Complex) -> f64 {
    let prec = a.prec().0.max(b.prec().0);
    let d = Complex::with_val(prec, a - b);
    let da = Float::with_val(prec, d.abs_ref());
    let m = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref()));
    if m.is_zero() {
        da.to_f64()
    } else {
        (da / m).to_f64()
    }
}

pub fn rel_diff_real(a: &Float, b: &Float) -> f64 {
    let prec = a.prec().max(b.prec());
    let d = Float::with_val(prec, a - b).abs();
    let m = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref()));
    if m.is_zero() {
        d.to_f64()
    } else {
        (d / m).to_f64()
    }
}
