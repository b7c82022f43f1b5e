//! Closed-form envelopes, written in terms of L = log(1/t) (or log x) so that
//! arguments far below the f64 range can be handled in log space.

use crate::error::{Error, Result};
use crate::hpnum::PrecisionContext;
use rug::ops::Pow;
use rug::{Float, Rational};

/// Parameters (b, α, β, ε) of E(t) = (1/t) exp(−(b−ε) L / ((log L)^α (log log L)^β)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeParams {
    pub b: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub epsilon: Rational,
}

impl Default for EnvelopeParams {
    fn default() -> Self {
        EnvelopeParams {
            b: Rational::from((203, 10000)),
            alpha: Rational::from((2, 3)),
            beta: Rational::from((1, 3)),
            epsilon: Rational::new(),
        }
    }
}

impl EnvelopeParams {
    pub fn validate(&self) -> Result<()> {
        if self.alpha <= 0 || self.beta <= 0 || self.b <= 0 {
            return Err(Error::InvalidArgument("envelope parameters b, alpha, beta must be positive".into()));
        }
        if self.epsilon < 0 {
            return Err(Error::InvalidArgument("epsilon must be nonnegative".into()));
        }
        if Rational::from(&self.b - &self.epsilon) <= 0 {
            return Err(Error::InvalidArgument("b - epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// b = 0.05507 × 4.45^{−2/3}, the constant attributed to Ford's zero-free region.
pub fn ford_b(prec: u32) -> Float {
    let base = Float::with_val(prec, Rational::from((445, 100)));
    let e = Float::with_val(prec, Rational::from((-2, 3)));
    Float::with_val(prec, base.pow(&e)) * Float::with_val(prec, Rational::from((5507, 100000)))
}

/// log(1/t) from a positive t.
pub fn log_inv(t_abs: &Float, pc: &PrecisionContext) -> Result<Float> {
    if !(t_abs.is_finite() && *t_abs > 0) {
        return Err(Error::Domain(format!("expected a positive argument, got {}", t_abs.to_f64())));
    }
    Ok(-Float::with_val(pc.work(), t_abs.ln_ref()))
}

fn ln_of(x: &Float, what: &str) -> Result<Float> {
    let l = Float::with_val(x.prec(), x.ln_ref());
    if !(l > 0) {
        return Err(Error::Domain(format!("{what} must be positive, got {}", l.to_f64())));
    }
    Ok(l)
}

/// log E(t) given L = log(1/t).
pub fn log_error_envelope_e(l: &Float, params: &EnvelopeParams, pc: &PrecisionContext) -> Result<Float> {
    params.validate()?;
    let p = pc.work();
    let l = Float::with_val(p, l);
    if !(l > 0) {
        return Err(Error::Domain("error envelope needs t < 1".into()));
    }
    let ll = ln_of(&l, "log log(1/t)")?;
    let lll = ln_of(&ll, "log log log(1/t)")
        .map_err(|_| Error::Domain("error envelope needs log log log(1/t) > 0, i.e. t < exp(-e)".into()))?;
    let be = Float::with_val(p, Rational::from(&params.b - &params.epsilon));
    let mut den = Float::with_val(p, (&ll).pow(&Float::with_val(p, &params.alpha)));
    den *= Float::with_val(p, (&lll).pow(&Float::with_val(p, &params.beta)));
    let expo = Float::with_val(p, &be * &l) / den;
    Ok(l - expo)
}

/// E(t) = (1/t) exp(−(b−ε) log(1/t) / ((log log 1/t)^α (log log log 1/t)^β)).
pub fn error_envelope_e(t_abs: &Float, params: &EnvelopeParams, pc: &PrecisionContext) -> Result<Float> {
    let l = log_inv(t_abs, pc)?;
    Ok(pc.round(&log_error_envelope_e(&l, params, pc)?.exp()))
}

/// c (log x)^{3/5} / (log log x)^{1/5}
fn walfisz_exponent(l: &Float, c: &Float, p: u32) -> Result<Float> {
    let ll = ln_of(l, "log log x")?;
    let a = Float::with_val(p, (l).pow(&Float::with_val(p, Rational::from((3, 5)))));
    let b = Float::with_val(p, ll.pow(&Float::with_val(p, Rational::from((1, 5)))));
    Ok(a / b * c)
}

/// x exp(−c (log x)^{3/5} / (log log x)^{1/5}), for x > e.
pub fn walfisz_envelope(x: &Float, c: &Float, pc: &PrecisionContext) -> Result<Float> {
    if *c < 0 {
        return Err(Error::InvalidArgument("walfisz constant c must be nonnegative".into()));
    }
    let p = pc.work();
    let x = Float::with_val(p, x);
    if !(x > 0) {
        return Err(Error::Domain("walfisz envelope needs x > e".into()));
    }
    let l = Float::with_val(p, x.ln_ref());
    let e = walfisz_exponent(&l, c, p).map_err(|_| Error::Domain("walfisz envelope needs log log x > 0".into()))?;
    Ok(pc.round(&(x * (-e).exp())))
}

/// log of (1/t) exp(−c L^{3/5}/(log L)^{1/5}) given L = log(1/t).
pub fn log_abelian_mu_envelope(l: &Float, c: &Float, pc: &PrecisionContext) -> Result<Float> {
    if *c < 0 {
        return Err(Error::InvalidArgument("constant c must be nonnegative".into()));
    }
    let p = pc.work();
    let l = Float::with_val(p, l);
    if c.is_zero() {
        // formula reduces to 1/t, but keep the domain check
        ln_of(&l, "log log(1/t)").map_err(|_| Error::Domain("envelope needs log log(1/t) > 0".into()))?;
        return Ok(l);
    }
    let e = walfisz_exponent(&l, c, p).map_err(|_| Error::Domain("envelope needs log log(1/t) > 0".into()))?;
    Ok(l - e)
}

/// (1/t) exp(−c (log 1/t)^{3/5} / (log log 1/t)^{1/5}).
pub fn abelian_mu_envelope(t_abs: &Float, c: &Float, pc: &PrecisionContext) -> Result<Float> {
    let l = log_inv(t_abs, pc)?;
    Ok(pc.round(&log_abelian_mu_envelope(&l, c, pc)?.exp()))
}

/// T = log(1/t) / (log log 1/t)^α.
pub fn choose_t(t_abs: &Float, alpha: &Rational, pc: &PrecisionContext) -> Result<Float> {
    let p = pc.work();
    let l = log_inv(t_abs, pc)?;
    let ll = ln_of(&l, "log log(1/t)").map_err(|_| Error::Domain("choose_T needs log log(1/t) > 0".into()))?;
    let d = Float::with_val(p, ll.pow(&Float::with_val(p, alpha)));
    Ok(pc.round(&(l / d)))
}

/// The point beyond which E(t) stays below the Abelian envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossover {
    pub c: Float,
    /// L* = log(1/t*).
    pub log_inv_t: Float,
    pub t_star: Float,
}

/// Largest L with log E = log A, found by a log-spaced scan and bisection.
/// For every L beyond it E(t) < A(t).
pub fn crossover(params: &EnvelopeParams, c: &Float, pc: &PrecisionContext) -> Result<Crossover> {
    if !(*c > 0) {
        return Err(Error::InvalidArgument("crossover needs c > 0".into()));
    }
    let p = pc.work();
    // φ(L) = log A − log E > 0 ⇔ E < A
    let phi = |ln_l: &Float| -> Result<Float> {
        let l = Float::with_val(p, ln_l.exp_ref());
        let a = log_abelian_mu_envelope(&l, c, pc)?;
        let e = log_error_envelope_e(&l, params, pc)?;
        Ok(a - e)
    };
    // L ∈ (e, e^{700}]: start just above the triple-log threshold
    let mut prev = Float::with_val(p, 1.0001f64);
    let mut prev_v = phi(&prev)?;
    let mut last_bracket: Option<(Float, Float)> = None;
    let steps = 7000;
    for k in 1..=steps {
        let cur = Float::with_val(p, 1.0001 + 700.0 * k as f64 / steps as f64);
        let v = phi(&cur)?;
        if prev_v <= 0 && v > 0 {
            last_bracket = Some((prev.clone(), cur.clone()));
        }
        prev = cur;
        prev_v = v;
    }
    if !(prev_v > 0) {
        return Err(Error::NonConvergence("no crossover below t = exp(-e^700)".into()));
    }
    let (mut lo, mut hi) = match last_bracket {
        Some(b) => b,
        None => {
            // E < A on the whole scanned range
            let l = Float::with_val(p, 1.0001f64).exp();
            return Ok(Crossover { c: c.clone(), t_star: pc.round(&Float::with_val(p, -&l).exp()), log_inv_t: pc.round(&l) });
        }
    };
    for _ in 0..(p + 8) {
        let mid = Float::with_val(p, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        if phi(&mid)? > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let l = hi.exp();
    let t = Float::with_val(p, -&l).exp();
    Ok(Crossover { c: c.clone(), log_inv_t: pc.round(&l), t_star: pc.round(&t) })
}

/// Largest c with |M(x)| ≤ walfisz_envelope(x, c) for every e < x ≤ X,
/// from the values M(1..=X).
pub fn fit_walfisz_c(mertens: &[i64], pc: &PrecisionContext) -> Result<Float> {
    let p = pc.work();
    let mut best: Option<Float> = None;
    for (i, m) in mertens.iter().enumerate() {
        let x = i as u64 + 1;
        if x < 3 || *m == 0 {
            continue;
        }
        let xf = Float::with_val(p, x);
        let l = Float::with_val(p, xf.ln_ref());
        let h = walfisz_exponent(&l, &Float::with_val(p, 1), p)?;
        let r = (xf / m.unsigned_abs()).ln() / h;
        if best.as_ref().map_or(true, |b| r < *b) {
            best = Some(r);
        }
    }
    best.map(|b| pc.round(&b)).ok_or_else(|| Error::InvalidArgument("no admissible x for the fit".into()))
}
