use super::bernoulli::bernoulli_ref;
use super::{as_exact_integer, ensure_finite, ln2pi, pi, PrecisionContext};
use crate::error::{Error, Result};
use rug::ops::Pow;
use rug::{Complex, Float};

const MAX_SHIFT: f64 = 1.0e5;

/// Γ(s) by the Stirling series, after shifting `s` upward far enough that the
/// asymptotic series reaches the working precision.
pub fn gamma(s: &Complex, pc: &PrecisionContext) -> Result<Complex> {
    ensure_finite(s, "gamma argument")?;
    if let Some(k) = as_exact_integer(s) {
        if k <= 0 {
            return Err(Error::Pole { what: "gamma", at: k.to_string() });
        }
    }
    let re = s.real().to_f64();
    let im = s.imag().to_f64();
    let mag = re.hypot(im).max(2.0);
    // bits lost to the size of log Γ and to the recurrence product
    let extra = (mag * mag.ln()).log2().max(0.0).ceil() as u32 + 12;
    let p = pc.work() + extra;

    let radius = 0.2 * (p as f64 + 10.0);
    let mut shift = (1.0 - re).max(0.0);
    if im.abs() < radius {
        shift = shift.max((radius * radius - im * im).sqrt() - re);
    }
    let shift = shift.ceil();
    if shift > MAX_SHIFT {
        return Err(Error::Range { what: "gamma", detail: format!("Re(s) = {re} too negative") });
    }
    let shift = shift as u32;

    let z = Complex::with_val(p, s + shift);
    let log_g = stirling_log_gamma(&z, p)?;
    let mut g = log_g.exp();
    if shift > 0 {
        let mut prod = Complex::with_val(p, s);
        let mut factor = Complex::with_val(p, s);
        for _ in 1..shift {
            factor += 1u32;
            prod *= &factor;
        }
        g /= prod;
    }
    ensure_finite(&g, "gamma")?;
    Ok(pc.round_c(&g))
}

// log Γ(z) = (z − ½) log z − z + ½ log 2π + Σ_k B_{2k} / (2k(2k−1) z^{2k−1}),
// valid (up to a multiple of 2πi, irrelevant after exp) for Re z ≥ 1, |z| large.
fn stirling_log_gamma(z: &Complex, p: u32) -> Result<Complex> {
    let log_z = Complex::with_val(p, z.ln_ref());
    let mut acc = Complex::with_val(p, z - 0.5f64);
    acc *= &log_z;
    acc -= z;
    acc += ln2pi(p) / 2u32;

    let inv = Complex::with_val(p, z.recip_ref());
    let inv2 = Complex::with_val(p, inv.square_ref());
    let mut pw = inv; // z^{−(2k−1)}
    let eps = Float::with_val(p, Float::u_exp(1, -(p as i32)));
    let mut prev = f64::INFINITY;
    for k in 1..=super::BERNOULLI_CAP / 2 {
        let b = bernoulli_ref(2 * k)?;
        let mut term = Complex::with_val(p, &pw * b);
        term /= (2 * k * (2 * k - 1)) as u32;
        let size = Float::with_val(53, term.abs_ref());
        acc += &term;
        if size < eps {
            return Ok(acc);
        }
        let sf = size.to_f64();
        if sf > prev {
            return Err(Error::Range {
                what: "gamma",
                detail: "Stirling series diverged before reaching precision".into(),
            });
        }
        prev = sf;
        pw *= &inv2;
    }
    Err(Error::Range { what: "gamma", detail: "Stirling series exceeded the Bernoulli cap".into() })
}

/// Explicit upper bound for |Γ(σ + iτ)| from Stirling's formula with Binet's
/// remainder bound, |μ(s)| ≤ 1/(6|s|) for Re s > 0. For σ ≤ 0 the bound is
/// carried through |Γ(s)| = |Γ(s+1)|/|s|.
pub fn gamma_stirling_bound(sigma: f64, tau: f64) -> f64 {
    let mut sigma = sigma;
    let mut divisor = 1.0;
    while sigma <= 0.0 {
        divisor *= sigma.hypot(tau);
        sigma += 1.0;
    }
    let m = sigma.hypot(tau);
    let arg = tau.atan2(sigma);
    let log_bound = 0.5 * (2.0 * std::f64::consts::PI).ln() + (sigma - 0.5) * m.ln() - tau * arg - sigma
        + 1.0 / (6.0 * m);
    log_bound.exp() / divisor
}

/// √(2π)·e^{−π|τ|/2}·|τ|^{σ−1/2}, the leading behaviour of |Γ(σ+iτ)| on
/// vertical lines.
pub fn gamma_vertical_envelope(sigma: &Float, tau: &Float, pc: &PrecisionContext) -> Result<Float> {
    let p = pc.work();
    let at = Float::with_val(p, tau.abs_ref());
    if at < 1 {
        return Err(Error::Domain(format!("envelope needs |tau| >= 1, got {}", tau.to_f64())));
    }
    let pi = pi(p);
    let mut e = Float::with_val(p, &pi * &at);
    e /= -2i32;
    let mut r = e.exp();
    r *= Float::with_val(p, &pi * 2u32).sqrt();
    let expo = Float::with_val(p, sigma - 0.5f64);
    r *= at.pow(&expo);
    Ok(pc.round(&r))
}
